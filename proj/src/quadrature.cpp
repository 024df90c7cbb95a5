#include "thermoq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace thermoq {

namespace {

// Implicit-shift QL on a symmetric tridiagonal matrix (diagonal d,
// sub-diagonal e[0..n-2]).  Eigenvalues land in d; the plane rotations are
// accumulated only into z, the first row of the eigenvector matrix, which is
// all the Golub-Welsch weight formula needs.
void tql_first_row(std::vector<double>& d, std::vector<double>& e,
                   std::vector<double>& z) {
    const long n = static_cast<long>(d.size());
    if (n <= 1) return;
    e.resize(d.size(), 0.0);  // e[n-1] is workspace
    const double eps = std::numeric_limits<double>::epsilon();
    for (long l = 0; l < n; ++l) {
        int iter = 0;
        long m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 64)
                    throw std::runtime_error(
                        "gauss_hermite: tridiagonal QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                long i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

GaussHermiteRule compute_rule(std::size_t n) {
    if (n < 1) throw std::domain_error("gauss_hermite: order must be >= 1");

    // Jacobi matrix for the weight e^{-x^2}: zero diagonal, off-diagonal
    // b_k = sqrt(k/2).
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) e[k - 1] = std::sqrt(double(k) / 2.0);
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;

    tql_first_row(d, e, z);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    const double sqrt_pi = 1.7724538509055160272981674833411452;
    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = d[order[i]];
        rule.weights[i] = sqrt_pi * z[order[i]] * z[order[i]];
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;  // exact center for odd orders
    return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(std::size_t order) {
    static std::mutex mtx;
    static std::map<std::size_t, GaussHermiteRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

}  // namespace thermoq

#include "thermoq/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thermoq {

EigenResult eigensolve_symmetric(const SymMatrix& H) {
    const std::size_t n = H.n;
    if (n == 0) throw std::domain_error("eigensolve_symmetric: empty matrix");

    double frob = 0.0, max_abs = 0.0;
    for (double x : H.a) {
        frob += x * x;
        max_abs = std::max(max_abs, std::abs(x));
    }
    frob = std::sqrt(frob);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(H.at(i, j) - H.at(j, i)) > 1e-12 * max_abs)
                throw std::domain_error("eigensolve_symmetric: matrix not symmetric");
    const double off_tol = 1e-12 * frob;

    std::vector<double> a = H.a;             // working copy, row-major
    std::vector<double> v(n * n, 0.0);       // accumulated rotations
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto off_max = [&]() {
        double m = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                m = std::max(m, std::abs(a[p * n + q]));
        return m;
    };

    int sweeps = 0;
    while (off_max() > off_tol) {
        if (++sweeps > 100)
            throw eigensolver_error("eigensolve_symmetric: no convergence in 100 sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::abs(apq) <= off_tol * 1e-2) continue;  // already negligible
                double app = a[p * n + p], aqq = a[q * n + q];
                // Classic stable rotation: theta = cot(2*phi).
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {  // rows/cols p and q
                    double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;  // rotation zeroes this pair by construction
                a[q * n + p] = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v[k * n + p], vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    // Sort eigenpairs ascending.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a[x * n + x] < a[y * n + y];
    });

    EigenResult out;
    out.n = n;
    out.sweeps = sweeps;
    out.values.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a[order[k] * n + order[k]];
        for (std::size_t row = 0; row < n; ++row)
            out.vectors[row * n + k] = v[row * n + order[k]];
    }
    return out;
}

}  // namespace thermoq

#pragma once

#include <cstddef>
#include <vector>

namespace thermoq {

// Gauss-Hermite rule for the weight e^{-x^2} on (-inf, inf):
// sum w_i f(x_i) approximates the integral, sum w_i = sqrt(pi).
struct GaussHermiteRule {
    std::vector<double> nodes;    // ascending, symmetric about 0
    std::vector<double> weights;  // positive
};

// Nodes and weights from the symmetric tridiagonal Jacobi matrix of the
// Hermite recurrence (eigenvalues + first eigenvector components); rules are
// cached per order (thread-safe).  Orders up to a few thousand are fine.
const GaussHermiteRule& gauss_hermite(std::size_t order);

}  // namespace thermoq

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace thermoq {

// Dense real symmetric matrix, row-major.
struct SymMatrix {
    std::size_t n = 0;
    std::vector<double> a;  // n*n entries

    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct EigenResult {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column k (stride n) pairs with values[k]
    std::size_t n = 0;
    int sweeps = 0;

    double vector(std::size_t row, std::size_t k) const {
        return vectors[row * n + k];
    }
};

struct eigensolver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cyclic Jacobi rotations until every off-diagonal magnitude drops below
// 1e-12 * ||H||_F; eigenvalues sorted ascending with their eigenvectors.
// Throws eigensolver_error after 100 sweeps without convergence and a
// domain error if the input is not symmetric to 1e-12 relative.
EigenResult eigensolve_symmetric(const SymMatrix& H);

}  // namespace thermoq

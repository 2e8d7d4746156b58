#pragma once

// Minimal dense linear algebra for the small systems that appear here
// (constraint Jacobians, 2N x 2N Cauchy systems, M <= 8 oracles).

#include <vector>

#include "hwm/algebra.hpp"

namespace hwm {

template <class T>
struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<T> a;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, T{}) {}

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

using CMatrix = DenseMatrix<cplx>;
using RMatrix = DenseMatrix<double>;

// LU with partial pivoting. Throws NodeCollision on (numerically) singular input.
template <class T>
struct LU {
    DenseMatrix<T> lu;
    std::vector<int> perm;
    int sign = 1;

    explicit LU(DenseMatrix<T> m);
    std::vector<T> solve(std::vector<T> b) const;
    T det() const;
};

CMatrix matmul(const CMatrix& a, const CMatrix& b);

// Least-squares step for the Newton solver: minimises |J d + r|^2 + lambda |d|^2.
std::vector<double> damped_least_squares(const RMatrix& jacobian, const std::vector<double>& residual,
                                         double lambda);

}  // namespace hwm

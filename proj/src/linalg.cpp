#include "hwm/linalg.hpp"

#include <cmath>

#include "hwm/errors.hpp"

namespace hwm {

namespace {
double mag(double x) { return std::abs(x); }
double mag(const cplx& x) { return std::abs(x); }
}  // namespace

template <class T>
LU<T>::LU(DenseMatrix<T> m) : lu(std::move(m)) {
    if (lu.rows != lu.cols) throw InvalidInput("LU: matrix must be square");
    const int n = lu.rows;
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = mag(lu(col, col));
        for (int r = col + 1; r < n; ++r) {
            if (mag(lu(r, col)) > best) {
                best = mag(lu(r, col));
                pivot = r;
            }
        }
        if (best == 0.0) throw NodeCollision("LU: singular matrix");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(lu(pivot, c), lu(col, c));
            std::swap(perm[pivot], perm[col]);
            sign = -sign;
        }
        for (int r = col + 1; r < n; ++r) {
            lu(r, col) = lu(r, col) / lu(col, col);
            for (int c = col + 1; c < n; ++c) lu(r, c) -= lu(r, col) * lu(col, c);
        }
    }
}

template <class T>
std::vector<T> LU<T>::solve(std::vector<T> b) const {
    const int n = lu.rows;
    std::vector<T> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
        x[i] = x[i] / lu(i, i);
    }
    return x;
}

template <class T>
T LU<T>::det() const {
    T d = static_cast<T>(sign);
    for (int i = 0; i < lu.rows; ++i) d *= lu(i, i);
    return d;
}

template struct LU<double>;
template struct LU<cplx>;

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols != b.rows) throw InvalidInput("matmul: shape mismatch");
    CMatrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const cplx aik = a(i, k);
            for (int j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

std::vector<double> damped_least_squares(const RMatrix& jacobian, const std::vector<double>& residual,
                                         double lambda) {
    const int m = jacobian.rows, n = jacobian.cols;
    RMatrix normal(n, n);
    std::vector<double> rhs(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += jacobian(k, i) * jacobian(k, j);
            normal(i, j) = s;
        }
        normal(i, i) += lambda;
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += jacobian(k, i) * residual[k];
        rhs[i] = -s;
    }
    return LU<double>(std::move(normal)).solve(std::move(rhs));
}

}  // namespace hwm

#include "witsim/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace witsim {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("ComplexMatrix: dimensions must be >= 1");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

bool ComplexMatrix::all_finite() const noexcept {
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix product: inner dimensions disagree");
    ComplexMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

double unitarity_defect(const ComplexMatrix& m) {
    if (!m.square())
        throw std::invalid_argument("unitarity_defect: matrix is not square");
    const std::size_t n = m.rows();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx dot = 0.0;  // (M M†)_{ij}
            for (std::size_t k = 0; k < n; ++k) dot += m(i, k) * std::conj(m(j, k));
            if (i == j) dot -= 1.0;
            worst = std::max(worst, std::abs(dot));
        }
    return worst;
}

bool check_unitary(const ComplexMatrix& m, double tol) {
    return m.all_finite() && unitarity_defect(m) <= tol;
}

}  // namespace witsim

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace witsim {

using cplx = std::complex<double>;

// Max-entry deviation allowed in |M M† - I| for a matrix to count as unitary.
// All constructions here are closed-form, so there is no reason to be looser.
inline constexpr double kUnitarityTol = 1e-12;

// Dense row-major complex matrix. Circuits in this toolkit live on a handful
// of modes, so no attempt is made at blocking or expression templates.
class ComplexMatrix {
public:
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    const std::vector<cplx>& data() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    bool all_finite() const noexcept;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<cplx> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// Max-entry |M M† - I|. Throws std::invalid_argument for non-square input.
double unitarity_defect(const ComplexMatrix& m);

// True iff all entries are finite and unitarity_defect(m) <= tol.
bool check_unitary(const ComplexMatrix& m, double tol = kUnitarityTol);

}  // namespace witsim

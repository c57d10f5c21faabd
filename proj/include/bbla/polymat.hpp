#ifndef BBLA_POLYMAT_HPP
#define BBLA_POLYMAT_HPP

#include <cstddef>
#include <vector>

#include "bbla/dense.hpp"

namespace bbla
{

///
/// Polynomial with rows x cols matrix coefficients; coefficient k multiplies x^k.
/// Trailing zero coefficients are allowed; `normalize()` strips them.
///
class MatrixPolynomial
{
public:
    MatrixPolynomial() = default;
    /// `length` zero coefficients.
    MatrixPolynomial(std::size_t rows, std::size_t cols, std::size_t length);
    /// Throws DimensionError if the coefficients disagree in shape.
    explicit MatrixPolynomial(std::vector<DenseMatrix> coeffs);

    static MatrixPolynomial identity(std::size_t dim);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    /// Number of stored coefficients.
    std::size_t length() const noexcept { return coeffs_.size(); }
    /// length() - 1, or -1 for the empty polynomial.
    long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
    /// Degree ignoring trailing zero coefficients, -1 for the zero polynomial.
    long true_degree() const noexcept;

    DenseMatrix& operator[](std::size_t k) noexcept { return coeffs_[k]; }
    const DenseMatrix& operator[](std::size_t k) const noexcept { return coeffs_[k]; }
    const std::vector<DenseMatrix>& coeffs() const noexcept { return coeffs_; }

    /// Coefficient k, or a zero matrix beyond the stored length.
    DenseMatrix coeff_or_zero(std::size_t k) const;

    void resize(std::size_t length);
    void normalize();

    MatrixPolynomial transposed() const;

    bool operator==(const MatrixPolynomial& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<DenseMatrix> coeffs_;
};

/// Full product f*g; the length is len(f) + len(g) - 1.
MatrixPolynomial polymat_mul(const PrimeField& F, const MatrixPolynomial& f, const MatrixPolynomial& g);

/// Only the coefficients with index in [lo, hi) of f*g; result coefficient k
/// holds product coefficient lo + k.
MatrixPolynomial polymat_mul_range(const PrimeField& F, const MatrixPolynomial& f,
                                   const MatrixPolynomial& g, std::size_t lo, std::size_t hi);

MatrixPolynomial polymat_add(const PrimeField& F, const MatrixPolynomial& f, const MatrixPolynomial& g);

} // namespace bbla

#endif // BBLA_POLYMAT_HPP

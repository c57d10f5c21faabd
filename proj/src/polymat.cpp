#include "bbla/polymat.hpp"

#include <algorithm>

#include "bbla/errors.hpp"
#include "bbla/kernels.hpp"

namespace bbla
{

MatrixPolynomial::MatrixPolynomial(std::size_t rows, std::size_t cols, std::size_t length)
    : rows_(rows), cols_(cols), coeffs_(length, DenseMatrix(rows, cols))
{
}

MatrixPolynomial::MatrixPolynomial(std::vector<DenseMatrix> coeffs) : coeffs_(std::move(coeffs))
{
    if (!coeffs_.empty()) {
        rows_ = coeffs_.front().rows();
        cols_ = coeffs_.front().cols();
    }
    for (const auto& c : coeffs_)
        if (c.rows() != rows_ || c.cols() != cols_)
            throw DimensionError("MatrixPolynomial: coefficient shapes differ");
}

MatrixPolynomial MatrixPolynomial::identity(std::size_t dim)
{
    return MatrixPolynomial(std::vector<DenseMatrix>{DenseMatrix::identity(dim)});
}

long MatrixPolynomial::true_degree() const noexcept
{
    long d = degree();
    while (d >= 0 && coeffs_[static_cast<std::size_t>(d)].is_zero())
        --d;
    return d;
}

DenseMatrix MatrixPolynomial::coeff_or_zero(std::size_t k) const
{
    return k < coeffs_.size() ? coeffs_[k] : DenseMatrix(rows_, cols_);
}

void MatrixPolynomial::resize(std::size_t length)
{
    coeffs_.resize(length, DenseMatrix(rows_, cols_));
}

void MatrixPolynomial::normalize()
{
    coeffs_.resize(static_cast<std::size_t>(true_degree() + 1));
}

MatrixPolynomial MatrixPolynomial::transposed() const
{
    MatrixPolynomial t(cols_, rows_, 0);
    t.coeffs_.reserve(coeffs_.size());
    for (const auto& c : coeffs_)
        t.coeffs_.push_back(c.transposed());
    return t;
}

MatrixPolynomial polymat_mul_range(const PrimeField& F, const MatrixPolynomial& f, const MatrixPolynomial& g,
                                   std::size_t lo, std::size_t hi)
{
    if (f.cols() != g.rows())
        throw DimensionError("polymat_mul: inner block dimensions differ");
    MatrixPolynomial out(f.rows(), g.cols(), hi > lo ? hi - lo : 0);
    kernels::omp::polymat_mul(F, f, g, lo, std::max(lo, hi), out);
    return out;
}

MatrixPolynomial polymat_mul(const PrimeField& F, const MatrixPolynomial& f, const MatrixPolynomial& g)
{
    const std::size_t len = (f.length() == 0 || g.length() == 0) ? 0 : f.length() + g.length() - 1;
    return polymat_mul_range(F, f, g, 0, len);
}

MatrixPolynomial polymat_add(const PrimeField& F, const MatrixPolynomial& f, const MatrixPolynomial& g)
{
    if (f.rows() != g.rows() || f.cols() != g.cols())
        throw DimensionError("polymat_add: shapes differ");
    MatrixPolynomial r(f.rows(), f.cols(), std::max(f.length(), g.length()));
    for (std::size_t k = 0; k < r.length(); ++k) {
        if (k < f.length())
            add_inplace(F, r[k], f[k]);
        if (k < g.length())
            add_inplace(F, r[k], g[k]);
    }
    return r;
}

} // namespace bbla

#include "bbla/dense.hpp"

#include <algorithm>
#include <utility>

#include "bbla/errors.hpp"
#include "bbla/kernels.hpp"

namespace bbla
{

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Residue> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries))
{
    if (entries_.size() != rows * cols)
        throw DimensionError("DenseMatrix: entry count does not match shape");
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    if (r0 + nr > rows_ || c0 + nc > cols_)
        throw DimensionError("DenseMatrix::block out of range");
    DenseMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        std::copy_n(entries_.data() + (r0 + i) * cols_ + c0, nc, b.row(i).data());
    return b;
}

void DenseMatrix::set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b)
{
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
        throw DimensionError("DenseMatrix::set_block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        std::copy_n(b.row(i).data(), b.cols(), entries_.data() + (r0 + i) * cols_ + c0);
}

DenseMatrix DenseMatrix::transposed() const
{
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

std::vector<Residue> DenseMatrix::column(std::size_t j) const
{
    std::vector<Residue> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

bool DenseMatrix::is_zero() const noexcept
{
    return std::all_of(entries_.begin(), entries_.end(), [](Residue x) { return x == 0; });
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, const PrimeField& F, Rng& rng)
{
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (auto& x : m.row(i))
            x = rng.element(F);
    return m;
}

DenseMatrix multiply(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b)
{
    DenseMatrix c(a.rows(), b.cols());
    kernels::omp::gemm_add(F, a, b, c);
    return c;
}

DenseMatrix add(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b)
{
    DenseMatrix c = a;
    add_inplace(F, c, b);
    return c;
}

void add_inplace(const PrimeField& F, DenseMatrix& a, const DenseMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("add: shapes differ");
    Residue* x = a.data();
    const Residue* y = b.data();
    for (std::size_t k = 0; k < a.rows() * a.cols(); ++k)
        x[k] = F.add(x[k], y[k]);
}

DenseMatrix subtract(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("subtract: shapes differ");
    DenseMatrix c = a;
    Residue* x = c.data();
    const Residue* y = b.data();
    for (std::size_t k = 0; k < a.rows() * a.cols(); ++k)
        x[k] = F.sub(x[k], y[k]);
    return c;
}

DenseMatrix scale(const PrimeField& F, Residue c, const DenseMatrix& a)
{
    DenseMatrix r = a;
    Residue* x = r.data();
    for (std::size_t k = 0; k < a.rows() * a.cols(); ++k)
        x[k] = F.mul(c, x[k]);
    return r;
}

DenseMatrix vstack(std::span<const DenseMatrix> blocks)
{
    if (blocks.empty())
        return {};
    std::size_t rows = 0;
    const std::size_t cols = blocks.front().cols();
    for (const auto& b : blocks) {
        if (b.cols() != cols)
            throw DimensionError("vstack: column counts differ");
        rows += b.rows();
    }
    DenseMatrix r(rows, cols);
    std::size_t at = 0;
    for (const auto& b : blocks) {
        r.set_block(at, 0, b);
        at += b.rows();
    }
    return r;
}

DenseMatrix hstack(std::span<const DenseMatrix> blocks)
{
    if (blocks.empty())
        return {};
    std::size_t cols = 0;
    const std::size_t rows = blocks.front().rows();
    for (const auto& b : blocks) {
        if (b.rows() != rows)
            throw DimensionError("hstack: row counts differ");
        cols += b.cols();
    }
    DenseMatrix r(rows, cols);
    std::size_t at = 0;
    for (const auto& b : blocks) {
        r.set_block(0, at, b);
        at += b.cols();
    }
    return r;
}

namespace
{

// row_dst -= f * row_src over columns [from, end)
void row_axpy(const PrimeField& F, std::span<Residue> dst, std::span<const Residue> src, Residue f,
              std::size_t from)
{
    const Residue nf = F.neg(f);
    for (std::size_t j = from; j < dst.size(); ++j)
        dst[j] = F.fma(nf, src[j], dst[j]);
}

void row_scale(const PrimeField& F, std::span<Residue> row, Residue f, std::size_t from)
{
    for (std::size_t j = from; j < row.size(); ++j)
        row[j] = F.mul(f, row[j]);
}

void swap_rows(DenseMatrix& m, std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    std::swap_ranges(m.row(a).begin(), m.row(a).end(), m.row(b).begin());
}

// Reduce [m | rhs] to [I | m^-1 rhs]; m must be square.
DenseMatrix gauss_jordan(const PrimeField& F, const DenseMatrix& m, const DenseMatrix& rhs)
{
    if (m.rows() != m.cols())
        throw DimensionError("matrix is not square");
    if (rhs.rows() != m.rows())
        throw DimensionError("right-hand side has the wrong number of rows");
    const std::size_t n = m.rows();
    const std::size_t k = rhs.cols();
    DenseMatrix aug(n, n + k);
    aug.set_block(0, 0, m);
    aug.set_block(0, n, rhs);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && aug(piv, c) == 0)
            ++piv;
        if (piv == n)
            throw SingularError(c);
        swap_rows(aug, c, piv);
        row_scale(F, aug.row(c), F.inv(aug(c, c)), c);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != c && aug(r, c) != 0)
                row_axpy(F, aug.row(r), aug.row(c), aug(r, c), c);
        }
    }
    return aug.block(0, n, n, k);
}

} // namespace

DenseMatrix dense_inverse(const PrimeField& F, const DenseMatrix& m)
{
    return gauss_jordan(F, m, DenseMatrix::identity(m.rows()));
}

DenseMatrix dense_solve(const PrimeField& F, const DenseMatrix& m, const DenseMatrix& b)
{
    return gauss_jordan(F, m, b);
}

std::size_t dense_rank(const PrimeField& F, const DenseMatrix& m)
{
    DenseMatrix a = m;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
        std::size_t piv = rank;
        while (piv < a.rows() && a(piv, c) == 0)
            ++piv;
        if (piv == a.rows())
            continue;
        swap_rows(a, rank, piv);
        const Residue inv = F.inv(a(rank, c));
        for (std::size_t r = rank + 1; r < a.rows(); ++r) {
            if (a(r, c) != 0)
                row_axpy(F, a.row(r), a.row(rank), F.mul(a(r, c), inv), c);
        }
        ++rank;
    }
    return rank;
}

Residue dense_determinant(const PrimeField& F, const DenseMatrix& m)
{
    if (m.rows() != m.cols())
        throw DimensionError("determinant of a non-square matrix");
    DenseMatrix a = m;
    const std::size_t n = a.rows();
    Residue det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a(piv, c) == 0)
            ++piv;
        if (piv == n)
            return 0;
        if (piv != c) {
            swap_rows(a, c, piv);
            det = F.neg(det);
        }
        det = F.mul(det, a(c, c));
        const Residue inv = F.inv(a(c, c));
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a(r, c) != 0)
                row_axpy(F, a.row(r), a.row(c), F.mul(a(r, c), inv), c);
        }
    }
    return det;
}

} // namespace bbla

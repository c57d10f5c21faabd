#ifndef BBLA_DENSE_HPP
#define BBLA_DENSE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "bbla/field.hpp"
#include "bbla/random.hpp"

namespace bbla
{

///
/// Row-major dense matrix of residues. The matrix does not know its field;
/// arithmetic takes the field explicitly.
///
class DenseMatrix
{
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}
    /// Throws DimensionError if entries.size() != rows * cols.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Residue> entries);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return entries_.empty(); }

    Residue& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * cols_ + j]; }
    Residue operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * cols_ + j]; }

    std::span<Residue> row(std::size_t i) noexcept { return {entries_.data() + i * cols_, cols_}; }
    std::span<const Residue> row(std::size_t i) const noexcept { return {entries_.data() + i * cols_, cols_}; }

    Residue* data() noexcept { return entries_.data(); }
    const Residue* data() const noexcept { return entries_.data(); }
    const std::vector<Residue>& entries() const noexcept { return entries_; }

    /// Copy of the nr x nc block starting at (r0, c0).
    DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b);

    DenseMatrix transposed() const;
    std::vector<Residue> column(std::size_t j) const;
    bool is_zero() const noexcept;

    bool operator==(const DenseMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Residue> entries_;
};

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, const PrimeField& F, Rng& rng);

/// A*B. Uses the parallel kernel.
DenseMatrix multiply(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix add(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const PrimeField& F, Residue c, const DenseMatrix& a);
/// a += b, in place.
void add_inplace(const PrimeField& F, DenseMatrix& a, const DenseMatrix& b);
/// Stack blocks vertically; all must share a column count.
DenseMatrix vstack(std::span<const DenseMatrix> blocks);
DenseMatrix hstack(std::span<const DenseMatrix> blocks);

///
/// Gauss-Jordan inverse with first-nonzero pivoting (lowest row index wins).
/// Throws DimensionError for non-square input and SingularError, carrying the
/// index of the first column without a pivot, for singular input.
///
DenseMatrix dense_inverse(const PrimeField& F, const DenseMatrix& m);

/// Rank by row echelon reduction.
std::size_t dense_rank(const PrimeField& F, const DenseMatrix& m);

Residue dense_determinant(const PrimeField& F, const DenseMatrix& m);

/// Solve M X = B for square nonsingular M.
DenseMatrix dense_solve(const PrimeField& F, const DenseMatrix& m, const DenseMatrix& b);

} // namespace bbla

#endif // BBLA_DENSE_HPP

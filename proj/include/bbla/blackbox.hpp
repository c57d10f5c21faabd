#ifndef BBLA_BLACKBOX_HPP
#define BBLA_BLACKBOX_HPP

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bbla/dense.hpp"
#include "bbla/field.hpp"
#include "bbla/random.hpp"

namespace bbla
{

///
/// ### BlackBox
///
/// An n x n linear map over a prime field that can only be applied to vectors
/// (and its transpose to vectors). Block inputs are n x k matrices and count as
/// k vector applications. Counters are atomic and monotone; take differences
/// to measure a computation.
///
class BlackBox
{
public:
    BlackBox(const PrimeField& F, std::size_t n) : field_(F), n_(n) {}
    virtual ~BlackBox() = default;
    BlackBox(const BlackBox&) = delete;
    BlackBox& operator=(const BlackBox&) = delete;

    std::size_t dim() const noexcept { return n_; }
    const PrimeField& field() const noexcept { return field_; }

    /// A * X. Throws DimensionError unless X has dim() rows.
    DenseMatrix apply(const DenseMatrix& x) const;
    /// A^T * X.
    DenseMatrix apply_transpose(const DenseMatrix& x) const;
    std::vector<Residue> apply(std::span<const Residue> v) const;
    std::vector<Residue> apply_transpose(std::span<const Residue> v) const;

    std::uint64_t apply_count() const noexcept { return applies_.load(std::memory_order_relaxed); }
    std::uint64_t transpose_apply_count() const noexcept
    {
        return transposed_applies_.load(std::memory_order_relaxed);
    }
    std::uint64_t total_applications() const noexcept { return apply_count() + transpose_apply_count(); }

protected:
    /// x has dim() rows; return A x or A^T x.
    virtual DenseMatrix do_apply(const DenseMatrix& x, bool transposed) const = 0;

    void check_rows(const DenseMatrix& x) const;
    void count(std::size_t columns, bool transposed) const noexcept;

private:
    PrimeField field_;
    std::size_t n_;
    mutable std::atomic<std::uint64_t> applies_{0};
    mutable std::atomic<std::uint64_t> transposed_applies_{0};
};

using BlackBoxPtr = std::shared_ptr<const BlackBox>;

/// Non-owning handle; the caller keeps `a` alive.
inline BlackBoxPtr borrow(const BlackBox& a)
{
    return BlackBoxPtr(BlackBoxPtr{}, &a);
}

/// Apply to the identity: costs dim() applications.
DenseMatrix materialize(const BlackBox& a);

///
/// Sparse matrix stored as sorted triples with CSR copies of A and A^T.
///
class SparseOperator : public BlackBox
{
public:
    struct Entry
    {
        std::size_t row;
        std::size_t col;
        Residue value;
        bool operator==(const Entry&) const = default;
    };

    /// Duplicate coordinates are summed and zero values dropped.
    /// Throws DimensionError for an index >= n.
    SparseOperator(const PrimeField& F, std::size_t n, std::vector<Entry> entries);

    static std::shared_ptr<SparseOperator> from_dense(const PrimeField& F, const DenseMatrix& m);
    /// `per_row` random off-diagonal entries per row plus a random nonzero diagonal.
    static std::shared_ptr<SparseOperator> random(const PrimeField& F, std::size_t n, std::size_t per_row,
                                                  Rng& rng);

    std::size_t nonzeros() const noexcept { return entries_.size(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    DenseMatrix to_dense() const;

protected:
    DenseMatrix do_apply(const DenseMatrix& x, bool transposed) const override;

private:
    struct Csr
    {
        std::vector<std::size_t> ptr;
        std::vector<std::size_t> col;
        std::vector<Residue> val;
    };
    static Csr build_csr(std::size_t n, const std::vector<Entry>& entries, bool transposed);

    std::vector<Entry> entries_;
    Csr rows_;
    Csr cols_;
};

/// Dense matrix behind the black-box interface.
class DenseOperator : public BlackBox
{
public:
    DenseOperator(const PrimeField& F, DenseMatrix m);
    const DenseMatrix& matrix() const noexcept { return m_; }

protected:
    DenseMatrix do_apply(const DenseMatrix& x, bool transposed) const override;

private:
    DenseMatrix m_;
    DenseMatrix mt_;
};

///
/// An operator that can also apply its inverse. Inverse applications count
/// towards the same counters as forward ones.
///
class Preconditioner : public BlackBox
{
public:
    using BlackBox::BlackBox;

    /// P^-1 X, or P^-T X when `transposed`.
    DenseMatrix apply_inverse(const DenseMatrix& x, bool transposed = false) const;
    virtual Residue determinant() const = 0;

protected:
    virtual DenseMatrix do_solve(const DenseMatrix& x, bool transposed) const = 0;
};

/// P X, P^T X, P^-1 X or P^-T X.
DenseMatrix precond_apply(const Preconditioner& p, const DenseMatrix& x, bool transposed, bool inverted);

class DiagonalOperator : public Preconditioner
{
public:
    /// Throws NotInvertible if an entry is zero.
    DiagonalOperator(const PrimeField& F, std::vector<Residue> diagonal);

    /// diag(d_1 x s, ..., d_m x s), each value repeated s times.
    static std::shared_ptr<DiagonalOperator> blocks(const PrimeField& F, std::span<const Residue> values,
                                                    std::size_t s);
    /// `m` random nonzero values, each repeated `s` times.
    static std::shared_ptr<DiagonalOperator> random_blocks(const PrimeField& F, std::size_t m, std::size_t s,
                                                           Rng& rng);

    const std::vector<Residue>& diagonal() const noexcept { return d_; }
    Residue determinant() const override;

protected:
    DenseMatrix do_apply(const DenseMatrix& x, bool transposed) const override;
    DenseMatrix do_solve(const DenseMatrix& x, bool transposed) const override;

private:
    std::vector<Residue> d_;
    std::vector<Residue> dinv_;
};

///
/// ### ButterflyOperator
///
/// Butterfly network of generic exchange switches. Layer l pairs indices
/// i and i + 2^l (bit l of i clear) for i inside the leading `network` indices,
/// where `network` is a power of two; the remaining indices pass through.
/// Each switch is (x, y) -> (x + a y, x + (1 + a) y), which has determinant 1,
/// so the whole network has determinant 1.
///
class ButterflyOperator : public Preconditioner
{
public:
    /// `params` holds one value per switch, layer by layer. Throws
    /// DimensionError if `network` is not a power of two or exceeds n.
    ButterflyOperator(const PrimeField& F, std::size_t n, std::size_t network, std::vector<Residue> params);

    static std::shared_ptr<ButterflyOperator> random(const PrimeField& F, std::size_t n, std::size_t network,
                                                     Rng& rng);
    static std::size_t switch_count(std::size_t network) noexcept;

    std::size_t network() const noexcept { return network_; }
    const std::vector<Residue>& params() const noexcept { return params_; }
    Residue determinant() const override { return 1; }

protected:
    DenseMatrix do_apply(const DenseMatrix& x, bool transposed) const override;
    DenseMatrix do_solve(const DenseMatrix& x, bool transposed) const override;

private:
    std::size_t network_;
    std::size_t layers_;
    std::vector<Residue> params_;
};

///
/// Unit triangular Toeplitz matrix. A lower factor is given by its first
/// column, an upper factor by its first row; entry 0 must be 1.
///
class ToeplitzUnitOperator : public Preconditioner
{
public:
    enum class Shape
    {
        Lower,
        Upper
    };

    /// Throws std::invalid_argument unless coeffs[0] == 1 and coeffs.size() == n.
    ToeplitzUnitOperator(const PrimeField& F, Shape shape, std::vector<Residue> coeffs);

    static std::shared_ptr<ToeplitzUnitOperator> random(const PrimeField& F, std::size_t n, Shape shape,
                                                        Rng& rng);

    Shape shape() const noexcept { return shape_; }
    const std::vector<Residue>& coeffs() const noexcept { return c_; }
    Residue determinant() const override { return 1; }

protected:
    DenseMatrix do_apply(const DenseMatrix& x, bool transposed) const override;
    DenseMatrix do_solve(const DenseMatrix& x, bool transposed) const override;

private:
    Shape shape_;
    std::vector<Residue> c_;
};

///
/// Product O_1 O_2 ... O_k: apply runs O_k first, transpose-apply runs O_1^T
/// first. Each constituent keeps counting its own applications.
///
class CompositeOperator : public BlackBox
{
public:
    /// Throws DimensionError if the list is empty or dimensions differ.
    explicit CompositeOperator(std::vector<BlackBoxPtr> ops);
    const std::vector<BlackBoxPtr>& factors() const noexcept { return ops_; }

protected:
    DenseMatrix do_apply(const DenseMatrix& x, bool transposed) const override;

private:
    std::vector<BlackBoxPtr> ops_;
};

BlackBoxPtr compose(std::vector<BlackBoxPtr> ops);

/// diag(A, I): embeds an n x n operator in a larger dimension.
class PaddedOperator : public BlackBox
{
public:
    PaddedOperator(BlackBoxPtr inner, std::size_t padded_dim);
    const BlackBox& inner() const noexcept { return *inner_; }

protected:
    DenseMatrix do_apply(const DenseMatrix& x, bool transposed) const override;

private:
    BlackBoxPtr inner_;
};

/// Leading r x r block of A, by zero-padding the input and truncating the output.
class LeadingMinorOperator : public BlackBox
{
public:
    LeadingMinorOperator(BlackBoxPtr inner, std::size_t r);

protected:
    DenseMatrix do_apply(const DenseMatrix& x, bool transposed) const override;

private:
    BlackBoxPtr inner_;
};

} // namespace bbla

#endif // BBLA_BLACKBOX_HPP

#ifndef BBLA_PROJECTION_HPP
#define BBLA_PROJECTION_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "bbla/blackbox.hpp"
#include "bbla/dense.hpp"

namespace bbla
{

///
/// ### BlockProjection
///
/// The n x s block projection made of m = n/s stacked s x s identities. It has
/// exactly n nonzero entries, so products with it reduce to additions and
/// copies: u^T W sums the m row slices of W, u M stacks m copies of M.
///
class BlockProjection
{
public:
    /// Throws DimensionError unless 0 < s and s divides n.
    BlockProjection(std::size_t n, std::size_t s);

    std::size_t n() const noexcept { return n_; }
    std::size_t s() const noexcept { return s_; }
    std::size_t m() const noexcept { return n_ / s_; }

    /// The explicit n x s matrix; for tests and small diagnostics only.
    DenseMatrix materialize() const;

private:
    std::size_t n_;
    std::size_t s_;
};

/// u^T W for W with n rows: the sum of the m s-row slices. No multiplications.
DenseMatrix u_contract(const PrimeField& F, const BlockProjection& u, const DenseMatrix& w);
/// u M for M with s rows: m vertically stacked copies.
DenseMatrix u_expand(const BlockProjection& u, const DenseMatrix& m);

enum class KrylovSide
{
    Right, ///< blocks[i] = B^i u, n x s
    Left   ///< blocks[i] = u^T B^i, s x n
};

struct KrylovSequence
{
    KrylovSide side = KrylovSide::Right;
    std::vector<DenseMatrix> blocks;

    /// [u, Bu, ...] (n x ks) for the right side, the stacked rows (ks x n) for the left.
    DenseMatrix assemble() const;
};

///
/// The first `count` Krylov blocks. Costs (count - 1) * s applications of B,
/// transpose applications for the left side.
///
KrylovSequence krylov_sequence(const BlackBox& b, const BlockProjection& u, std::size_t count, KrylovSide side);

///
/// K^(r) M with K^(r) = [u, Bu, ..., B^(m-1) u], by the Horner scheme
///   u M_0 + B(u M_1 + B(u M_2 + ... + B u M_(m-1)))
/// where M_i are the s-row slices of M. Costs (m - 1) * k applications of B.
///
DenseMatrix krylov_apply_right(const BlackBox& b, const BlockProjection& u, const DenseMatrix& m);

///
/// K^(l) M with K^(l) = K_m(B^T, u)^T, whose block row i is u^T B^i. Forms
/// B^i M one step at a time and contracts each iterate with u^T. Costs
/// (m - 1) * k applications of B.
///
DenseMatrix krylov_apply_left(const BlackBox& b, const BlockProjection& u, const DenseMatrix& m);

///
/// An efficient block projection (R, u_hat, v_hat) for a nonsingular A:
/// R = L D^2 U with random unit lower/upper triangular Toeplitz L, U and a
/// random block diagonal D, u_hat^T = L^-T D^-1 u and v_hat = L D u. With
/// B = D U A L D one has K_m(RA, v_hat) = L D K_m(B, u) and
/// D L^T K_m((RA)^T, u_hat^T) = K_m(B^T, u).
///
struct EfficientProjection
{
    BlackBoxPtr r;
    DenseMatrix u_hat; ///< s x n
    DenseMatrix v_hat; ///< n x s
    std::shared_ptr<ToeplitzUnitOperator> lower;
    std::shared_ptr<ToeplitzUnitOperator> upper;
    std::shared_ptr<DiagonalOperator> diagonal;
    std::uint64_t seed = 0;
};

/// Throws DimensionError unless s divides A.dim().
EfficientProjection efficient_projection_triple(const BlackBox& a, std::size_t s, std::uint64_t seed);

} // namespace bbla

#endif // BBLA_PROJECTION_HPP

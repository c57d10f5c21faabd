#ifndef BBLA_HANKEL_HPP
#define BBLA_HANKEL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bbla/blackbox.hpp"
#include "bbla/dense.hpp"
#include "bbla/polymat.hpp"
#include "bbla/projection.hpp"

namespace bbla
{

///
/// ### BlockHankel
///
/// The ms x ms matrix whose (i, j) block is alpha[i + j]. The sequence holds
/// 2m blocks: alpha[0 .. 2m-2] define H and alpha[2m-1] is a free block that
/// only enters the V systems of the inverse representation.
///
struct BlockHankel
{
    std::size_t s = 0;
    std::size_t m = 0;
    std::vector<DenseMatrix> alpha;

    std::size_t dim() const noexcept { return s * m; }
    DenseMatrix materialize() const;
    /// H * X, blockwise.
    DenseMatrix multiply(const PrimeField& F, const DenseMatrix& x) const;
    /// A(x) = sum alpha_i x^i.
    MatrixPolynomial series() const;
};

/// Throws DimensionError unless alpha has 2m blocks of size s x s.
void check_hankel(const BlockHankel& h);

///
/// H_u for the projected sequence alpha_i = u^T B^(i+1) u, i = 0 .. 2m-2, so
/// that H_u = K_l B K_r. Uses 2m left Krylov blocks: exactly (2m - 1) s
/// transpose applications of B. When `left` is given it receives the left
/// Krylov blocks u^T B^i, i = 0 .. m-1 (s x n each).
///
BlockHankel build_hankel(const BlackBox& b, const BlockProjection& u, std::vector<DenseMatrix>* left = nullptr);

/// Serial and parallel residual evaluation inside the M-Basis iteration.
/// Both produce bit-identical bases.
enum class SigmaBasisMode
{
    Serial,
    Parallel
};

struct SigmaBasisResult
{
    /// r x r; the rows form the order basis.
    MatrixPolynomial basis;
    std::size_t order = 0;
    /// Shifted row degrees.
    std::vector<long> degrees;
};

///
/// Left order basis of the r x c series G: every basis row p satisfies
/// p(x) G(x) = 0 mod x^order and the shifted row degrees are minimal. The
/// iteration raises the order one step at a time (M-Basis); at each step rows
/// are taken in order of increasing shifted degree, ties by lowest index, and
/// the first row with a nonzero residual in a column becomes that column's
/// pivot. `shift` defaults to all zeros.
///
SigmaBasisResult sigma_basis(const PrimeField& F, const MatrixPolynomial& g, std::size_t order,
                             std::vector<long> shift = {}, SigmaBasisMode mode = SigmaBasisMode::Parallel);

///
/// Left order basis of [A; -I] (2s x s) to `order` with shift (0, ..., 0, 1, ..., 1),
/// so the shifted degree of a row [X | Y] is max(deg X, deg Y + 1).
///
SigmaBasisResult pade_basis(const PrimeField& F, const MatrixPolynomial& a, std::size_t order,
                            SigmaBasisMode mode = SigmaBasisMode::Parallel);

///
/// ### HankelInverseRep
///
/// Off-diagonal representation of H^-1 by four matrix polynomials:
///   A Q = P + x^(2m-2) I mod x^(2m-1),  deg Q <= m-1, deg P <= m-2
///   Q* A = P* + x^(2m-2) I mod x^(2m-1)
///   A V = U mod x^(2m),  V(0) = I,  deg V <= m, deg U <= m-1
///   V* A = U* mod x^(2m), V*(0) = I
/// so that H^-1 = T1 T2 - T3 T4 with T1 = [v_(m-1-i-j)], T2 = [q*_(m-1-j+i)],
/// T3 = [q_(m-2-i-j)], T4 = [v*_(m-j+i)] (blocks vanish outside the ranges
/// of the coefficients).
///
struct HankelInverseRep
{
    std::size_t s = 0;
    std::size_t m = 0;
    MatrixPolynomial q;      ///< m coefficients
    MatrixPolynomial q_star; ///< m coefficients
    MatrixPolynomial v;      ///< m + 1 coefficients
    MatrixPolynomial v_star; ///< m + 1 coefficients
    /// The free block alpha_(2m-1) actually used (it changes when resampled).
    DenseMatrix free_block;
    /// Number of resamplings of the free block.
    std::size_t resamples = 0;

    std::size_t dim() const noexcept { return s * m; }
};

///
/// Solve the four Pade systems by two left order bases of [A; -I], one for
/// A and one for A^T, and normalize by the residues. For m = 1 the single
/// block is inverted densely. On ResidueSingular the free block is redrawn
/// up to three times. The result is checked against H on a random vector.
/// Throws ResidueSingular or HankelSingular when H is (numerically) singular.
///
HankelInverseRep hankel_inverse_rep(const PrimeField& F, const BlockHankel& h, std::uint64_t seed = 0,
                                    SigmaBasisMode mode = SigmaBasisMode::Parallel);

/// H^-1 X via four range-limited polynomial products; X has ms rows.
DenseMatrix hankel_inverse_apply(const PrimeField& F, const HankelInverseRep& rep, const DenseMatrix& x);

/// T1 T2 - T3 T4, formed densely from the block Toeplitz and Hankel factors.
DenseMatrix materialize_offdiagonal(const PrimeField& F, const HankelInverseRep& rep);

} // namespace bbla

#endif // BBLA_HANKEL_HPP

#ifndef BBLA_NULLRANK_HPP
#define BBLA_NULLRANK_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bbla/blackbox.hpp"
#include "bbla/dense.hpp"
#include "bbla/hankel.hpp"

namespace bbla
{

///
/// Minimal generating polynomial of a scalar sequence, monic, coefficients
/// from the constant term up. The sequence must have even length 2d to be
/// determined for generators of degree up to d.
///
std::vector<Residue> berlekamp_massey(const PrimeField& F, std::span<const Residue> seq);

/// Minimal generator of u^T A^i v, i = 0 .. 2n-1, for random u, v.
/// Costs 2n - 1 vector applications.
std::vector<Residue> wiedemann_minpoly(const BlackBox& a, std::uint64_t seed);

struct NullspaceConfig
{
    std::uint64_t seed = 0;
    std::size_t max_retries = 8;
    /// Retries for the inner inversion of the leading minor.
    std::size_t inner_retries = 3;
    /// Blocking factor for the inner inversion; 0 selects the default.
    std::size_t block_size = 0;
    SigmaBasisMode sigma_mode = SigmaBasisMode::Parallel;
};

///
/// ### RankCertificate
///
/// rank r and an n x (n - r) kernel basis N with A N = 0. N = L D [X; -I],
/// so its rank is n - r by construction. The rank lower bound is witnessed by
/// a verified inversion of the leading r x r minor of the preconditioned
/// matrix, the upper bound by A N = 0.
///
struct RankCertificate
{
    std::size_t rank = 0;
    DenseMatrix nullspace;
    /// Seed of the successful attempt.
    std::uint64_t seed = 0;
    std::size_t attempts = 0;
    /// Vector applications of the input operator, over all attempts.
    std::uint64_t bb_apply_count = 0;
    std::vector<std::string> failures;
};

///
/// Certified rank and kernel basis: precondition to U A L D with random
/// Toeplitz U, L and diagonal D, estimate r from the minimal polynomial, invert
/// the leading r x r minor applied to [I | A_1] and check A N = 0. Throws
/// RetriesExhausted after max_retries failed attempts; never returns an
/// uncertified answer.
///
RankCertificate nullspace_rank(const BlackBox& a, const NullspaceConfig& cfg = {});

} // namespace bbla

#endif // BBLA_NULLRANK_HPP

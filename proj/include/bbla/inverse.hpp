#ifndef BBLA_INVERSE_HPP
#define BBLA_INVERSE_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bbla/blackbox.hpp"
#include "bbla/dense.hpp"
#include "bbla/hankel.hpp"
#include "bbla/projection.hpp"

namespace bbla
{

struct InversionConfig
{
    /// Blocking factor; 0 selects round(sqrt(n)).
    std::size_t block_size = 0;
    std::uint64_t seed = 0;
    std::size_t max_retries = 8;
    bool verify = true;
    /// After exhausting retries, look for a kernel vector to report SingularMatrix.
    bool certify_singular = true;
    SigmaBasisMode sigma_mode = SigmaBasisMode::Parallel;
};

struct InversionStats
{
    /// Vector applications of the input operator, over all attempts.
    std::uint64_t bb_apply_count = 0;
    /// Vector applications of the input operator, per attempt.
    std::vector<std::uint64_t> attempt_applications;
    /// Reason for each failed attempt.
    std::vector<std::string> failures;
    std::size_t attempts = 0;
    std::uint64_t seed = 0;
    std::size_t s = 0;
    std::size_t m = 0;
    /// Dimension after embedding into a multiple of s.
    std::size_t padded_dim = 0;
    bool verified = false;
    double wall_time = 0.0;

    std::size_t retries() const noexcept { return attempts == 0 ? 0 : attempts - 1; }
};

struct InversionResult
{
    /// A^-1, or A^-1 M for blackbox_inverse_apply.
    DenseMatrix matrix;
    InversionStats stats;
};

///
/// B = D U diag(A, I) D on dimension N, where U is a butterfly network over
/// the leading bit_ceil(n) indices and D = diag(d_1 I_s, ..., d_m I_s).
/// N is the least multiple of s that is at least bit_ceil(n).
///
struct Preconditioned
{
    BlackBoxPtr b;
    std::shared_ptr<ButterflyOperator> butterfly;
    std::shared_ptr<DiagonalOperator> diagonal;
    std::size_t n = 0;
    std::size_t padded_dim = 0;
    std::size_t s = 0;

    /// diag(A, I)^-1 X from B^-1 X: D (B^-1 X) D U with the butterfly applied on the right.
    DenseMatrix unwrap_inverse(const DenseMatrix& b_inverse) const;
};

/// Throws FieldTooSmall if p <= field_bound. With `trivial`, U = I and D = I.
Preconditioned precondition(const BlackBox& a, std::size_t s, std::uint64_t seed, bool trivial = false);

/// round(sqrt(n)) clamped to [1, n].
std::size_t auto_block_size(std::size_t n) noexcept;
/// Least multiple of s that is at least bit_ceil(n).
std::size_t padded_dimension(std::size_t n, std::size_t s) noexcept;
/// 2 (m + 1) N ceil(log2 N).
std::uint64_t field_bound(std::size_t padded_dim, std::size_t s) noexcept;

///
/// Las Vegas inverse. Each attempt costs (2m-1)s + (m-1)N vector applications
/// plus n for verification. Failed attempts retry with fresh randomness.
/// Throws FieldTooSmall, SingularMatrix (with a kernel vector) or RetriesExhausted.
///
InversionResult blackbox_inverse(const BlackBox& a, const InversionConfig& cfg = {});

///
/// A^-1 M without forming A^-1. Each attempt costs (2m-1)s + 2(m-1)k vector
/// applications plus k for verification, where k = M.cols().
///
InversionResult blackbox_inverse_apply(const BlackBox& a, const DenseMatrix& m, const InversionConfig& cfg = {});

/// A X == I; costs n vector applications.
bool verify_inverse(const BlackBox& a, const DenseMatrix& x);

} // namespace bbla

#endif // BBLA_INVERSE_HPP

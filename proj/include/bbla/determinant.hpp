#ifndef BBLA_DETERMINANT_HPP
#define BBLA_DETERMINANT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bbla/blackbox.hpp"
#include "bbla/hankel.hpp"
#include "bbla/polymat.hpp"

namespace bbla
{

using BigInt = boost::multiprecision::cpp_int;

///
/// Right matrix generator F of a block sequence: sum_j alpha_(i+j) F_j = 0
/// for every i with i + deg F < alpha.size(). Column j has degree degrees[j];
/// `leading` holds the coefficient of x^degrees[j] of each column.
///
struct GeneratorResult
{
    MatrixPolynomial generator;
    std::vector<std::size_t> degrees;
    /// Sum of the column degrees.
    std::size_t degree = 0;
    DenseMatrix leading;
    Residue det_at_zero = 0;
};

///
/// Minimal right generator from alpha_0 .. alpha_(2m-1), by an order basis of
/// the transposed sequence. Throws DegenerateSequence if the column degrees
/// do not sum to `expected_degree` (when it is nonzero) or if the column
/// leading matrix is singular.
///
GeneratorResult block_generator(const PrimeField& F, const std::vector<DenseMatrix>& alpha, std::size_t m,
                                std::size_t expected_degree = 0, SigmaBasisMode mode = SigmaBasisMode::Parallel);

struct DeterminantConfig
{
    /// Blocking factor; 0 selects round(n^(1/3)).
    std::size_t block_size = 0;
    std::uint64_t seed = 0;
    std::size_t max_retries = 8;
    /// Number of independent runs that must agree.
    std::size_t confirm = 1;
    /// When every attempt degenerates, certify det = 0 by a kernel vector.
    bool certify_singular = true;
    SigmaBasisMode sigma_mode = SigmaBasisMode::Parallel;
};

struct DeterminantResult
{
    Residue value = 0;
    std::size_t attempts = 0;
    std::size_t s = 0;
    std::size_t m = 0;
    std::size_t padded_dim = 0;
    std::uint64_t bb_apply_count = 0;
    /// True when the value 0 is backed by a kernel vector.
    bool certified_zero = false;
    std::vector<std::string> failures;
};

/// round(n^(1/3)) clamped to [1, n].
std::size_t auto_det_block_size(std::size_t n) noexcept;

///
/// Monte Carlo determinant modulo p of B = D_1 U diag(A, I) D_2 from the
/// sequence u^T B^i v with the block projection u and a dense random v.
/// Throws RetriesExhausted.
///
DeterminantResult det_mod_p(const BlackBox& a, const DeterminantConfig& cfg = {});

struct IntegerEntry
{
    std::size_t row;
    std::size_t col;
    std::int64_t value;
};

struct IntegerMatrix
{
    std::size_t n = 0;
    std::vector<IntegerEntry> entries;
};

/// Product of the Euclidean row norms, rounded up.
BigInt hadamard_bound(const IntegerMatrix& a);

/// Primes descending from the default prime whose product exceeds `bound`.
std::vector<std::uint64_t> crt_primes_for(const BigInt& bound);

struct CrtResult
{
    BigInt value;
    std::vector<std::uint64_t> primes;
    std::vector<Residue> residues;
    std::uint64_t bb_apply_count = 0;
};

///
/// Signed integer determinant by Chinese remaindering of det_mod_p over
/// `primes` (chosen automatically when empty). Throws InsufficientPrimes if
/// their product does not exceed twice the Hadamard bound.
///
CrtResult det_integer_crt(const IntegerMatrix& a, std::vector<std::uint64_t> primes = {},
                          const DeterminantConfig& cfg = {});

/// Entries reduced to balanced residues modulo p.
std::shared_ptr<SparseOperator> reduce_integer_matrix(const PrimeField& F, const IntegerMatrix& a);

} // namespace bbla

#endif // BBLA_DETERMINANT_HPP

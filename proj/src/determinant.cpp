#include "bbla/determinant.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "bbla/errors.hpp"
#include "bbla/inverse.hpp"
#include "bbla/nullrank.hpp"
#include "bbla/projection.hpp"

namespace bbla
{

GeneratorResult block_generator(const PrimeField& F, const std::vector<DenseMatrix>& alpha, std::size_t m,
                                std::size_t expected_degree, SigmaBasisMode mode)
{
    if (m == 0 || alpha.size() < 2 * m)
        throw DimensionError("block_generator: need 2m sequence blocks");
    const std::size_t s = alpha.front().rows();
    std::vector<DenseMatrix> head(alpha.begin(), alpha.begin() + static_cast<long>(2 * m));
    const MatrixPolynomial st = MatrixPolynomial(std::move(head)).transposed();
    const SigmaBasisResult sb = pade_basis(F, st, 2 * m, mode);

    std::vector<std::size_t> order(2 * s);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sb.degrees[a] < sb.degrees[b]; });

    GeneratorResult g;
    g.degrees.resize(s);
    for (std::size_t t = 0; t < s; ++t) {
        g.degrees[t] = static_cast<std::size_t>(std::max<long>(sb.degrees[order[t]], 0));
        g.degree += g.degrees[t];
    }
    if (g.degree == 0 || (expected_degree != 0 && g.degree != expected_degree))
        throw DegenerateSequence("generator degree " + std::to_string(g.degree) + ", expected " +
                                 std::to_string(expected_degree));

    const std::size_t len = *std::max_element(g.degrees.begin(), g.degrees.end()) + 1;
    g.generator = MatrixPolynomial(s, s, len);
    g.leading = DenseMatrix(s, s);
    for (std::size_t t = 0; t < s; ++t) {
        const std::size_t row = order[t], d = g.degrees[t];
        for (std::size_t k = 0; k <= d; ++k) {
            if (d - k >= sb.basis.length())
                continue;
            for (std::size_t i = 0; i < s; ++i)
                g.generator[k](i, t) = sb.basis[d - k](row, i);
        }
        for (std::size_t i = 0; i < s; ++i)
            g.leading(i, t) = g.generator[d](i, t);
    }
    if (dense_determinant(F, g.leading) == 0)
        throw DegenerateSequence("generator is not column reduced");
    g.det_at_zero = dense_determinant(F, g.generator[0]);
    return g;
}

std::size_t auto_det_block_size(std::size_t n) noexcept
{
    const auto s = static_cast<std::size_t>(std::llround(std::cbrt(static_cast<double>(n))));
    return std::clamp<std::size_t>(s, 1, std::max<std::size_t>(n, 1));
}

namespace
{

Residue det_attempt(const BlackBox& a, std::size_t s, std::size_t big, std::uint64_t seed, SigmaBasisMode mode)
{
    const PrimeField& F = a.field();
    const std::size_t n = a.dim(), m = big / s;
    Rng rng(seed);
    const auto butterfly = ButterflyOperator::random(F, big, std::bit_ceil(n), rng);
    const auto d1 = DiagonalOperator::random_blocks(F, big, 1, rng);
    const auto d2 = DiagonalOperator::random_blocks(F, big, 1, rng);
    BlackBoxPtr inner = borrow(a);
    if (big != n)
        inner = std::make_shared<PaddedOperator>(inner, big);
    const BlackBoxPtr b = compose({d1, butterfly, inner, d2});

    const BlockProjection u(big, s);
    DenseMatrix x = random_matrix(big, s, F, rng);
    std::vector<DenseMatrix> alpha;
    alpha.reserve(2 * m);
    for (std::size_t i = 0; i < 2 * m; ++i) {
        if (i > 0)
            x = b->apply(x);
        alpha.push_back(u_contract(F, u, x));
    }
    const GeneratorResult g = block_generator(F, alpha, m, big, mode);
    Residue det_b = F.mul(g.det_at_zero, F.inv(dense_determinant(F, g.leading)));
    if (big % 2 == 1)
        det_b = F.neg(det_b);
    return F.mul(det_b, F.inv(F.mul(d1->determinant(), d2->determinant())));
}

} // namespace

DeterminantResult det_mod_p(const BlackBox& a, const DeterminantConfig& cfg)
{
    const std::size_t n = a.dim();
    if (n == 0)
        throw DimensionError("determinant of an empty operator");
    if (cfg.max_retries == 0 || cfg.confirm == 0)
        throw std::invalid_argument("max_retries and confirm must be at least 1");
    DeterminantResult out;
    out.s = cfg.block_size == 0 ? auto_det_block_size(n) : cfg.block_size;
    if (out.s > n)
        throw DimensionError("block size must lie in [1, n]");
    out.padded_dim = padded_dimension(n, out.s);
    out.m = out.padded_dim / out.s;
    const std::uint64_t base = a.total_applications();

    std::vector<Residue> values;
    std::size_t degenerate_runs = 0;
    for (std::size_t run = 0; run < cfg.confirm; ++run) {
        bool ok = false;
        for (std::size_t k = 0; k < cfg.max_retries && !ok; ++k) {
            ++out.attempts;
            try {
                values.push_back(det_attempt(a, out.s, out.padded_dim,
                                             derive_seed(cfg.seed, run * cfg.max_retries + k), cfg.sigma_mode));
                ok = true;
            }
            catch (const DegenerateSequence& e) {
                out.failures.emplace_back(e.what());
            }
        }
        if (!ok)
            ++degenerate_runs;
    }
    if (degenerate_runs > 0) {
        bool zero = false;
        if (cfg.certify_singular) {
            NullspaceConfig ncfg;
            ncfg.seed = derive_seed(cfg.seed, 0x5eed);
            ncfg.sigma_mode = cfg.sigma_mode;
            try {
                zero = nullspace_rank(a, ncfg).rank < n;
            }
            catch (const RetriesExhausted&) {
            }
            catch (const FieldTooSmall&) {
            }
        }
        if (!zero)
            throw RetriesExhausted("determinant: generator degenerate in every attempt");
        out.value = 0;
        out.certified_zero = true;
    }
    else {
        if (std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) != values.end())
            throw RetriesExhausted("determinant: independent runs disagree");
        out.value = values.front();
    }
    out.bb_apply_count = a.total_applications() - base;
    return out;
}

BigInt hadamard_bound(const IntegerMatrix& a)
{
    std::vector<BigInt> row_sq(a.n, 0);
    for (const auto& e : a.entries)
        row_sq.at(e.row) += BigInt(e.value) * e.value;
    BigInt prod = 1;
    for (const auto& r : row_sq)
        prod *= r;
    BigInt root = boost::multiprecision::sqrt(prod);
    if (root * root < prod)
        ++root;
    return root;
}

std::vector<std::uint64_t> crt_primes_for(const BigInt& bound)
{
    std::vector<std::uint64_t> primes;
    BigInt prod = 1;
    std::uint64_t p = kDefaultPrime;
    while (primes.empty() || prod <= bound) {
        primes.push_back(p);
        prod *= p;
        p = previous_prime(p);
    }
    return primes;
}

std::shared_ptr<SparseOperator> reduce_integer_matrix(const PrimeField& F, const IntegerMatrix& a)
{
    std::vector<SparseOperator::Entry> entries;
    entries.reserve(a.entries.size());
    for (const auto& e : a.entries)
        entries.push_back({e.row, e.col, F.reduce(e.value)});
    return std::make_shared<SparseOperator>(F, a.n, std::move(entries));
}

CrtResult det_integer_crt(const IntegerMatrix& a, std::vector<std::uint64_t> primes, const DeterminantConfig& cfg)
{
    const BigInt twice = 2 * hadamard_bound(a);
    if (primes.empty())
        primes = crt_primes_for(twice);
    std::sort(primes.begin(), primes.end(), std::greater<>());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    BigInt modulus = 1;
    for (auto p : primes)
        modulus *= p;
    if (modulus <= twice)
        throw InsufficientPrimes("product of the primes does not exceed twice the Hadamard bound");

    CrtResult out;
    out.primes = primes;
    BigInt value = 0, prod = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const PrimeField F(primes[i]);
        const auto op = reduce_integer_matrix(F, a);
        DeterminantConfig c = cfg;
        c.seed = derive_seed(cfg.seed, primes[i]);
        const DeterminantResult d = det_mod_p(*op, c);
        out.residues.push_back(d.value);
        out.bb_apply_count += d.bb_apply_count;
        // value += prod * ((r - value) / prod mod p)
        const Residue cur = static_cast<Residue>(value % primes[i]);
        const Residue pm = static_cast<Residue>(prod % primes[i]);
        const Residue t = F.mul(F.sub(d.value, cur), F.inv(pm));
        value += prod * t;
        prod *= primes[i];
    }
    if (2 * value > prod)
        value -= prod;
    out.value = value;
    return out;
}

} // namespace bbla

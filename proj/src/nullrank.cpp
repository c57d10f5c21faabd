#include "bbla/nullrank.hpp"

#include "bbla/errors.hpp"
#include "bbla/inverse.hpp"

namespace bbla
{

std::vector<Residue> berlekamp_massey(const PrimeField& F, std::span<const Residue> seq)
{
    // c is the connection polynomial c_0 = 1, c_1, ..., c_l with
    // sum_j c_j a_(i-j) = 0 for i >= l; the generator is its reversal.
    std::vector<Residue> c{1}, b{1};
    std::size_t l = 0, shift = 1;
    Residue last = 1;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        Residue d = seq[i];
        for (std::size_t j = 1; j <= l && j < c.size(); ++j)
            d = F.fma(c[j], seq[i - j], d);
        if (d == 0) {
            ++shift;
            continue;
        }
        const Residue coef = F.mul(d, F.inv(last));
        std::vector<Residue> t = c;
        if (c.size() < b.size() + shift)
            c.resize(b.size() + shift, 0);
        for (std::size_t j = 0; j < b.size(); ++j)
            c[j + shift] = F.sub(c[j + shift], F.mul(coef, b[j]));
        if (2 * l <= i) {
            l = i + 1 - l;
            b = std::move(t);
            last = d;
            shift = 1;
        }
        else {
            ++shift;
        }
    }
    c.resize(l + 1, 0);
    return std::vector<Residue>(c.rbegin(), c.rend());
}

std::vector<Residue> wiedemann_minpoly(const BlackBox& a, std::uint64_t seed)
{
    const PrimeField& F = a.field();
    const std::size_t n = a.dim();
    Rng rng(seed);
    const DenseMatrix u = random_matrix(n, 1, F, rng);
    DenseMatrix v = random_matrix(n, 1, F, rng);
    std::vector<Residue> seq;
    seq.reserve(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) {
        if (i > 0)
            v = a.apply(v);
        Residue dot = 0;
        for (std::size_t j = 0; j < n; ++j)
            dot = F.fma(u(j, 0), v(j, 0), dot);
        seq.push_back(dot);
    }
    return berlekamp_massey(F, seq);
}

namespace
{

struct Conditioned
{
    BlackBoxPtr tilde; // U A L D
    std::shared_ptr<ToeplitzUnitOperator> lower;
    std::shared_ptr<DiagonalOperator> diagonal;

    /// L D X
    DenseMatrix unwrap(const DenseMatrix& x) const { return lower->apply(diagonal->apply(x)); }
};

Conditioned condition(const BlackBox& a, std::uint64_t seed)
{
    const PrimeField& F = a.field();
    const std::size_t n = a.dim();
    Rng rng(seed);
    Conditioned c;
    auto upper = ToeplitzUnitOperator::random(F, n, ToeplitzUnitOperator::Shape::Upper, rng);
    c.lower = ToeplitzUnitOperator::random(F, n, ToeplitzUnitOperator::Shape::Lower, rng);
    c.diagonal = DiagonalOperator::random_blocks(F, n, 1, rng);
    c.tilde = compose({upper, borrow(a), c.lower, c.diagonal});
    return c;
}

struct AttemptFailed
{
    std::string reason;
};

DenseMatrix attempt_kernel(const BlackBox& a, const Conditioned& c, const NullspaceConfig& cfg, std::uint64_t seed,
                           std::size_t& rank)
{
    const PrimeField& F = a.field();
    const std::size_t n = a.dim();
    const std::vector<Residue> f = wiedemann_minpoly(*c.tilde, derive_seed(seed, 1));
    const std::size_t deg = f.size() - 1;
    const std::size_t r = f[0] != 0 ? n : (deg == 0 ? 0 : deg - 1);
    const std::size_t k = n - r;

    DenseMatrix tail(r, k); // X = A_0^-1 A_1
    if (r > 0) {
        DenseMatrix rhs(r, r + k);
        rhs.set_block(0, 0, DenseMatrix::identity(r));
        if (k > 0) {
            DenseMatrix e(n, k);
            for (std::size_t j = 0; j < k; ++j)
                e(r + j, j) = 1;
            rhs.set_block(0, r, c.tilde->apply(e).block(0, 0, r, k));
        }
        const LeadingMinorOperator a0(c.tilde, r);
        InversionConfig icfg;
        icfg.seed = derive_seed(seed, 2);
        icfg.max_retries = cfg.inner_retries;
        icfg.block_size = cfg.block_size == 0 ? 0 : std::min(cfg.block_size, r);
        icfg.verify = true;
        icfg.certify_singular = false;
        icfg.sigma_mode = cfg.sigma_mode;
        try {
            const InversionResult inv = blackbox_inverse_apply(a0, rhs, icfg);
            tail = inv.matrix.block(0, r, r, k);
        }
        catch (const RetriesExhausted&) {
            throw AttemptFailed{"leading " + std::to_string(r) + " x " + std::to_string(r) +
                                " minor could not be inverted"};
        }
    }
    DenseMatrix nt(n, k);
    nt.set_block(0, 0, tail);
    for (std::size_t j = 0; j < k; ++j)
        nt(r + j, j) = F.neg(1);
    DenseMatrix basis = c.unwrap(nt);
    if (k > 0 && !a.apply(basis).is_zero())
        throw AttemptFailed{"Schur complement is nonzero for rank estimate " + std::to_string(r)};
    rank = r;
    return basis;
}

} // namespace

RankCertificate nullspace_rank(const BlackBox& a, const NullspaceConfig& cfg)
{
    if (a.dim() == 0)
        throw DimensionError("nullspace of an empty operator");
    if (cfg.max_retries == 0)
        throw std::invalid_argument("max_retries must be at least 1");
    RankCertificate cert;
    const std::uint64_t base = a.total_applications();
    for (std::size_t t = 0; t < cfg.max_retries; ++t) {
        ++cert.attempts;
        const std::uint64_t seed = derive_seed(cfg.seed, t);
        try {
            const Conditioned c = condition(a, derive_seed(seed, 0));
            cert.nullspace = attempt_kernel(a, c, cfg, seed, cert.rank);
            cert.seed = seed;
            cert.bb_apply_count = a.total_applications() - base;
            return cert;
        }
        catch (const AttemptFailed& e) {
            cert.failures.push_back(e.reason);
        }
        catch (const FieldTooSmall&) {
            throw;
        }
    }
    throw RetriesExhausted("rank certification failed after " + std::to_string(cert.attempts) + " attempts");
}

} // namespace bbla

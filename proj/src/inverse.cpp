#include "bbla/inverse.hpp"

#include <bit>
#include <chrono>
#include <cmath>

#include "bbla/errors.hpp"
#include "bbla/nullrank.hpp"

namespace bbla
{

std::size_t auto_block_size(std::size_t n) noexcept
{
    const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    return std::clamp<std::size_t>(s, 1, std::max<std::size_t>(n, 1));
}

std::size_t padded_dimension(std::size_t n, std::size_t s) noexcept
{
    const std::size_t p = std::bit_ceil(std::max<std::size_t>(n, 1));
    return (p + s - 1) / s * s;
}

std::uint64_t field_bound(std::size_t padded_dim, std::size_t s) noexcept
{
    const std::uint64_t n = padded_dim, m = padded_dim / s;
    const std::uint64_t lg = n <= 1 ? 1 : static_cast<std::uint64_t>(std::bit_width(n - 1));
    return 2 * (m + 1) * n * lg;
}

DenseMatrix Preconditioned::unwrap_inverse(const DenseMatrix& b_inverse) const
{
    const DenseMatrix y = diagonal->apply(diagonal->apply(b_inverse.transposed()).transposed());
    return butterfly->apply_transpose(y.transposed()).transposed();
}

Preconditioned precondition(const BlackBox& a, std::size_t s, std::uint64_t seed, bool trivial)
{
    const PrimeField& F = a.field();
    const std::size_t n = a.dim();
    if (s == 0 || s > std::max<std::size_t>(n, 1))
        throw DimensionError("block size must lie in [1, n]");
    Preconditioned pre;
    pre.n = n;
    pre.s = s;
    pre.padded_dim = padded_dimension(n, s);
    const std::uint64_t bound = field_bound(pre.padded_dim, s);
    if (F.modulus() <= bound)
        throw FieldTooSmall(F.modulus(), bound);

    const std::size_t big = pre.padded_dim;
    const std::size_t network = std::bit_ceil(std::max<std::size_t>(n, 1));
    const std::size_t m = big / s;
    Rng rng(seed);
    if (trivial) {
        // A one-index network has no switches.
        pre.butterfly = std::make_shared<ButterflyOperator>(F, big, 1, std::vector<Residue>{});
        pre.diagonal = std::make_shared<DiagonalOperator>(F, std::vector<Residue>(big, 1));
    }
    else {
        pre.butterfly = ButterflyOperator::random(F, big, network, rng);
        pre.diagonal = DiagonalOperator::random_blocks(F, m, s, rng);
    }
    BlackBoxPtr inner = borrow(a);
    if (big != n)
        inner = std::make_shared<PaddedOperator>(inner, big);
    pre.b = compose({pre.diagonal, pre.butterfly, inner, pre.diagonal});
    return pre;
}

bool verify_inverse(const BlackBox& a, const DenseMatrix& x)
{
    if (x.rows() != a.dim() || x.cols() != a.dim())
        return false;
    return a.apply(x) == DenseMatrix::identity(a.dim());
}

namespace
{

struct AttemptFailed
{
    std::string reason;
};

/// Crop or zero-extend the rows of x to `rows`.
DenseMatrix resize_rows(const DenseMatrix& x, std::size_t rows)
{
    if (x.rows() == rows)
        return x;
    DenseMatrix r(rows, x.cols());
    r.set_block(0, 0, x.block(0, 0, std::min(rows, x.rows()), x.cols()));
    return r;
}

/// Shared retry loop: `attempt(pre, stats)` returns the candidate or throws.
template <class Attempt>
InversionResult run_attempts(const BlackBox& a, const InversionConfig& cfg, Attempt&& attempt)
{
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = a.dim();
    if (n == 0)
        throw DimensionError("cannot invert an empty operator");
    if (cfg.max_retries == 0)
        throw std::invalid_argument("max_retries must be at least 1");

    InversionResult out;
    auto& st = out.stats;
    st.seed = cfg.seed;
    st.s = cfg.block_size == 0 ? auto_block_size(n) : cfg.block_size;
    st.padded_dim = padded_dimension(n, st.s);
    st.m = st.padded_dim / st.s;
    const std::uint64_t bound = field_bound(st.padded_dim, st.s);
    if (a.field().modulus() <= bound)
        throw FieldTooSmall(a.field().modulus(), bound);

    const std::uint64_t base = a.total_applications();
    bool done = false;
    for (std::size_t k = 0; k < cfg.max_retries && !done; ++k) {
        const std::uint64_t before = a.total_applications();
        ++st.attempts;
        try {
            const Preconditioned pre = precondition(a, st.s, derive_seed(cfg.seed, k));
            out.matrix = attempt(pre, derive_seed(cfg.seed, k + 0x10000));
            done = true;
        }
        catch (const ResidueSingular& e) {
            st.failures.emplace_back(e.what());
        }
        catch (const HankelSingular& e) {
            st.failures.emplace_back(e.what());
        }
        catch (const AttemptFailed& e) {
            st.failures.push_back(e.reason);
        }
        st.attempt_applications.push_back(a.total_applications() - before);
    }
    st.verified = done && cfg.verify;
    st.bb_apply_count = a.total_applications() - base;
    st.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (done)
        return out;

    if (cfg.certify_singular) {
        NullspaceConfig ncfg;
        ncfg.seed = derive_seed(cfg.seed, 0x5eed);
        ncfg.sigma_mode = cfg.sigma_mode;
        try {
            const RankCertificate cert = nullspace_rank(a, ncfg);
            if (cert.rank < n)
                throw SingularMatrix(cert.nullspace.column(0));
        }
        catch (const RetriesExhausted&) {
        }
    }
    throw RetriesExhausted("inversion failed after " + std::to_string(st.attempts) + " attempts");
}

} // namespace

InversionResult blackbox_inverse(const BlackBox& a, const InversionConfig& cfg)
{
    return run_attempts(a, cfg, [&](const Preconditioned& pre, std::uint64_t seed) {
        const PrimeField& F = a.field();
        const BlockProjection u(pre.padded_dim, pre.s);
        std::vector<DenseMatrix> left;
        const BlockHankel h = build_hankel(*pre.b, u, &left);
        const HankelInverseRep rep = hankel_inverse_rep(F, h, seed, cfg.sigma_mode);
        const DenseMatrix w = hankel_inverse_apply(F, rep, vstack(left));
        const DenseMatrix binv = krylov_apply_right(*pre.b, u, w);
        const DenseMatrix x = pre.unwrap_inverse(binv).block(0, 0, pre.n, pre.n);
        if (cfg.verify && !verify_inverse(a, x))
            throw AttemptFailed{"verification A X = I failed"};
        return x;
    });
}

InversionResult blackbox_inverse_apply(const BlackBox& a, const DenseMatrix& m, const InversionConfig& cfg)
{
    if (m.rows() != a.dim())
        throw DimensionError("apply-inverse: right-hand side has " + std::to_string(m.rows()) + " rows, expected " +
                             std::to_string(a.dim()));
    return run_attempts(a, cfg, [&](const Preconditioned& pre, std::uint64_t seed) {
        const PrimeField& F = a.field();
        const BlockProjection u(pre.padded_dim, pre.s);
        const BlockHankel h = build_hankel(*pre.b, u);
        const HankelInverseRep rep = hankel_inverse_rep(F, h, seed, cfg.sigma_mode);
        if (m.cols() == 0)
            return DenseMatrix(pre.n, 0);
        const DenseMatrix mp = pre.diagonal->apply(pre.butterfly->apply(resize_rows(m, pre.padded_dim)));
        const DenseMatrix w = hankel_inverse_apply(F, rep, krylov_apply_left(*pre.b, u, mp));
        const DenseMatrix x = resize_rows(pre.diagonal->apply(krylov_apply_right(*pre.b, u, w)), pre.n);
        if (cfg.verify && a.apply(x) != m)
            throw AttemptFailed{"verification A X = M failed"};
        return x;
    });
}

} // namespace bbla

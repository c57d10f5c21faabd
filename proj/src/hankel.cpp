#include "bbla/hankel.hpp"

#include <algorithm>
#include <numeric>

#include "bbla/errors.hpp"
#include "bbla/kernels.hpp"
#include "bbla/random.hpp"

namespace bbla
{

void check_hankel(const BlockHankel& h)
{
    if (h.s == 0 || h.m == 0 || h.alpha.size() != 2 * h.m)
        throw DimensionError("block Hankel: expected 2m blocks");
    for (const auto& a : h.alpha)
        if (a.rows() != h.s || a.cols() != h.s)
            throw DimensionError("block Hankel: blocks must be s x s");
}

DenseMatrix BlockHankel::materialize() const
{
    check_hankel(*this);
    DenseMatrix r(dim(), dim());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            r.set_block(i * s, j * s, alpha[i + j]);
    return r;
}

DenseMatrix BlockHankel::multiply(const PrimeField& F, const DenseMatrix& x) const
{
    check_hankel(*this);
    if (x.rows() != dim())
        throw DimensionError("block Hankel multiply: row count mismatch");
    const std::size_t k = x.cols();
    std::vector<DenseMatrix> slices;
    slices.reserve(m);
    for (std::size_t j = 0; j < m; ++j)
        slices.push_back(x.block(j * s, 0, s, k));
    DenseMatrix r(dim(), k);
    for (std::size_t i = 0; i < m; ++i) {
        DenseMatrix acc(s, k);
        for (std::size_t j = 0; j < m; ++j)
            kernels::omp::gemm_add(F, alpha[i + j], slices[j], acc);
        r.set_block(i * s, 0, acc);
    }
    return r;
}

MatrixPolynomial BlockHankel::series() const
{
    return MatrixPolynomial(alpha);
}

BlockHankel build_hankel(const BlackBox& b, const BlockProjection& u, std::vector<DenseMatrix>* left)
{
    if (b.dim() != u.n())
        throw DimensionError("build_hankel: operator and projection dimensions differ");
    const PrimeField& F = b.field();
    const std::size_t s = u.s(), m = u.m();
    BlockHankel h{s, m, {}};
    h.alpha.reserve(2 * m);
    if (left) {
        left->clear();
        left->reserve(m);
    }
    DenseMatrix x = u.materialize();
    for (std::size_t i = 0; i < 2 * m; ++i) {
        if (i > 0) {
            x = b.apply_transpose(x);
            h.alpha.push_back(u_contract(F, u, x).transposed());
        }
        if (left && i < m)
            left->push_back(x.transposed());
    }
    h.alpha.emplace_back(s, s);
    return h;
}

namespace
{

/// Residual row `i` of coefficient k of P * G, accumulated with delayed reduction.
void residual_row(const PrimeField& F, const std::vector<DenseMatrix>& p, std::size_t len,
                  const MatrixPolynomial& g, std::size_t k, std::size_t i, std::span<Residue> out)
{
    const std::size_t r = g.rows(), c = g.cols();
    const Residue q = F.modulus();
    std::vector<std::uint64_t> acc(c, 0);
    int pending = 0;
    const std::size_t top = std::min(k + 1, len);
    for (std::size_t j = 0; j < top; ++j) {
        if (k - j >= g.length())
            continue;
        const DenseMatrix& gk = g[k - j];
        const auto prow = p[j].row(i);
        for (std::size_t l = 0; l < r; ++l) {
            const Residue a = prow[l];
            if (a == 0)
                continue;
            const auto grow = gk.row(l);
            for (std::size_t t = 0; t < c; ++t)
                acc[t] += a * grow[t];
            if (++pending == 4) {
                for (auto& v : acc)
                    v %= q;
                pending = 0;
            }
        }
    }
    for (std::size_t t = 0; t < c; ++t)
        out[t] = acc[t] % q;
}

} // namespace

SigmaBasisResult sigma_basis(const PrimeField& F, const MatrixPolynomial& g, std::size_t order,
                             std::vector<long> shift, SigmaBasisMode mode)
{
    const std::size_t r = g.rows(), c = g.cols();
    if (r == 0)
        throw DimensionError("sigma_basis: empty input");
    if (shift.empty())
        shift.assign(r, 0);
    if (shift.size() != r)
        throw DimensionError("sigma_basis: shift length must equal the row count");

    std::vector<DenseMatrix> p(1, DenseMatrix::identity(r));
    std::vector<std::size_t> len(r, 1); // coefficients in use per row
    std::vector<long> deg = shift;
    DenseMatrix res(r, c);
    std::vector<std::size_t> rows(r);
    std::vector<char> pivot(r);

    for (std::size_t k = 0; k < order; ++k) {
        const std::size_t plen = p.size();
        if (mode == SigmaBasisMode::Parallel) {
#if defined(BBLA_HAVE_OPENMP)
#pragma omp parallel for schedule(static) if (r * c * plen * r > (std::size_t{1} << 15))
#endif
            for (std::size_t i = 0; i < r; ++i)
                residual_row(F, p, len[i], g, k, i, res.row(i));
        }
        else {
            for (std::size_t i = 0; i < r; ++i)
                residual_row(F, p, len[i], g, k, i, res.row(i));
        }
        (void)plen;

        std::iota(rows.begin(), rows.end(), std::size_t{0});
        std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) { return deg[a] < deg[b]; });
        std::fill(pivot.begin(), pivot.end(), 0);

        for (std::size_t col = 0; col < c; ++col) {
            std::size_t at = r;
            for (std::size_t t = 0; t < r; ++t)
                if (!pivot[rows[t]] && res(rows[t], col) != 0) {
                    at = t;
                    break;
                }
            if (at == r)
                continue;
            const std::size_t pr = rows[at];
            pivot[pr] = 1;
            const Residue inv = F.inv(res(pr, col));
            for (std::size_t t = at + 1; t < r; ++t) {
                const std::size_t tr = rows[t];
                if (pivot[tr] || res(tr, col) == 0)
                    continue;
                const Residue f = F.neg(F.mul(res(tr, col), inv));
                auto dst = res.row(tr);
                const auto src = res.row(pr);
                for (std::size_t x = 0; x < c; ++x)
                    dst[x] = F.fma(f, src[x], dst[x]);
                for (std::size_t j = 0; j < len[pr]; ++j) {
                    auto pd = p[j].row(tr);
                    const auto ps = p[j].row(pr);
                    for (std::size_t x = 0; x < r; ++x)
                        pd[x] = F.fma(f, ps[x], pd[x]);
                }
                len[tr] = std::max(len[tr], len[pr]);
            }
        }

        for (std::size_t i = 0; i < r; ++i) {
            if (!pivot[i])
                continue;
            if (len[i] == p.size())
                p.emplace_back(r, r);
            for (std::size_t j = len[i]; j-- > 0;) {
                auto dst = p[j + 1].row(i);
                const auto src = p[j].row(i);
                std::copy(src.begin(), src.end(), dst.begin());
            }
            auto first = p[0].row(i);
            std::fill(first.begin(), first.end(), Residue{0});
            ++len[i];
            ++deg[i];
        }
    }

    SigmaBasisResult out{MatrixPolynomial(std::move(p)), order, std::move(deg)};
    out.basis.normalize();
    return out;
}

SigmaBasisResult pade_basis(const PrimeField& F, const MatrixPolynomial& a, std::size_t order, SigmaBasisMode mode)
{
    const std::size_t s = a.rows();
    MatrixPolynomial g(2 * s, s, std::max<std::size_t>(a.length(), 1));
    for (std::size_t k = 0; k < a.length(); ++k)
        g[k].set_block(0, 0, a[k]);
    for (std::size_t i = 0; i < s; ++i)
        g[0](s + i, i) = F.neg(1);
    std::vector<long> shift(2 * s, 0);
    std::fill(shift.begin() + static_cast<long>(s), shift.end(), 1);
    return sigma_basis(F, g, order, std::move(shift), mode);
}

namespace
{

/// Rows of a left order basis of [A; -I] with shifted degree <= bound, as the
/// A-part. Throws ResidueSingular unless there are exactly s.
MatrixPolynomial left_pade(const PrimeField& F, const MatrixPolynomial& a, std::size_t order, long bound,
                           SigmaBasisMode mode)
{
    const std::size_t s = a.rows();
    const SigmaBasisResult sb = pade_basis(F, a, order, mode);

    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < 2 * s; ++i)
        if (sb.degrees[i] <= bound)
            chosen.push_back(i);
    if (chosen.size() != s)
        throw ResidueSingular("Pade system has " + std::to_string(chosen.size()) + " minimal solutions, expected " +
                              std::to_string(s));
    MatrixPolynomial left(s, s, static_cast<std::size_t>(bound) + 1);
    for (std::size_t k = 0; k < left.length() && k < sb.basis.length(); ++k)
        for (std::size_t t = 0; t < s; ++t)
            for (std::size_t j = 0; j < s; ++j)
                left[k](t, j) = sb.basis[k](chosen[t], j);
    return left;
}

DenseMatrix invert_residue(const PrimeField& F, const DenseMatrix& r, const char* what)
{
    try {
        return dense_inverse(F, r);
    }
    catch (const SingularError&) {
        throw ResidueSingular(std::string("Pade residue ") + what + " is singular");
    }
}

MatrixPolynomial scale_left(const PrimeField& F, const DenseMatrix& c, const MatrixPolynomial& f)
{
    std::vector<DenseMatrix> out;
    out.reserve(f.length());
    for (const auto& x : f.coeffs())
        out.push_back(multiply(F, c, x));
    return MatrixPolynomial(std::move(out));
}

/// Q* (order 2m-2, normalized by R*) and V* (order 2m, normalized by V*(0))
/// for the left problems over the series `a`.
std::pair<MatrixPolynomial, MatrixPolynomial> left_systems(const PrimeField& F, const MatrixPolynomial& a,
                                                           std::size_t m, SigmaBasisMode mode)
{
    const long lm = static_cast<long>(m);
    MatrixPolynomial qbar = left_pade(F, a, 2 * m - 2, lm - 1, mode);
    const MatrixPolynomial rstar = polymat_mul_range(F, qbar, a, 2 * m - 2, 2 * m - 1);
    MatrixPolynomial q = scale_left(F, invert_residue(F, rstar[0], "R"), qbar);

    MatrixPolynomial vbar = left_pade(F, a, 2 * m, lm, mode);
    MatrixPolynomial v = scale_left(F, invert_residue(F, vbar[0], "V(0)"), vbar);
    return {std::move(q), std::move(v)};
}

HankelInverseRep single_block_rep(const PrimeField& F, const BlockHankel& h)
{
    HankelInverseRep rep;
    rep.s = h.s;
    rep.m = 1;
    rep.free_block = h.alpha[1];
    DenseMatrix inv;
    try {
        inv = dense_inverse(F, h.alpha[0]);
    }
    catch (const SingularError&) {
        throw HankelSingular("single Hankel block is singular");
    }
    const DenseMatrix eye = DenseMatrix::identity(h.s);
    rep.q = MatrixPolynomial(std::vector<DenseMatrix>{inv});
    rep.q_star = rep.q;
    const DenseMatrix neg = scale(F, F.neg(1), inv);
    rep.v = MatrixPolynomial(std::vector<DenseMatrix>{eye, multiply(F, neg, h.alpha[1])});
    rep.v_star = MatrixPolynomial(std::vector<DenseMatrix>{eye, multiply(F, h.alpha[1], neg)});
    return rep;
}

} // namespace

HankelInverseRep hankel_inverse_rep(const PrimeField& F, const BlockHankel& h, std::uint64_t seed,
                                    SigmaBasisMode mode)
{
    check_hankel(h);
    const std::size_t s = h.s, m = h.m;
    Rng rng(derive_seed(seed, 0x4a11));

    HankelInverseRep rep;
    if (m == 1) {
        rep = single_block_rep(F, h);
    }
    else {
        BlockHankel cur = h;
        constexpr std::size_t kResamples = 3;
        for (std::size_t attempt = 0;; ++attempt) {
            try {
                const MatrixPolynomial a = cur.series();
                auto [q_star, v_star] = left_systems(F, a, m, mode);
                auto [qt, vt] = left_systems(F, a.transposed(), m, mode);
                rep = HankelInverseRep{s, m, qt.transposed(), std::move(q_star), vt.transposed(), std::move(v_star),
                                       cur.alpha[2 * m - 1], attempt};
                break;
            }
            catch (const ResidueSingular&) {
                if (attempt == kResamples)
                    throw;
                cur.alpha[2 * m - 1] = random_matrix(s, s, F, rng);
            }
        }
    }

    const DenseMatrix y = random_matrix(h.dim(), 1, F, rng);
    if (hankel_inverse_apply(F, rep, h.multiply(F, y)) != y)
        throw HankelSingular("off-diagonal representation does not invert H");
    return rep;
}

DenseMatrix hankel_inverse_apply(const PrimeField& F, const HankelInverseRep& rep, const DenseMatrix& x)
{
    const std::size_t s = rep.s, m = rep.m, k = x.cols();
    if (x.rows() != rep.dim())
        throw DimensionError("hankel_inverse_apply: row count mismatch");
    std::vector<DenseMatrix> slices;
    slices.reserve(m);
    for (std::size_t j = 0; j < m; ++j)
        slices.push_back(x.block(j * s, 0, s, k));
    const MatrixPolynomial mx(std::move(slices));

    const MatrixPolynomial y = polymat_mul_range(F, rep.q_star, mx, m - 1, 2 * m - 1);
    const MatrixPolynomial vy = polymat_mul_range(F, rep.v, y, 0, m);
    DenseMatrix out(rep.dim(), k);
    for (std::size_t i = 0; i < m; ++i)
        out.set_block(i * s, 0, vy[m - 1 - i]);
    if (m >= 2) {
        const MatrixPolynomial z = polymat_mul_range(F, rep.v_star, mx, m, 2 * m - 1);
        const MatrixPolynomial qz = polymat_mul_range(F, rep.q, z, 0, m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i)
            out.set_block(i * s, 0, subtract(F, out.block(i * s, 0, s, k), qz[m - 2 - i]));
    }
    return out;
}

DenseMatrix materialize_offdiagonal(const PrimeField& F, const HankelInverseRep& rep)
{
    const std::size_t s = rep.s, m = rep.m, n = rep.dim();
    const auto coeff = [](const MatrixPolynomial& f, long k, std::size_t s) {
        return k >= 0 && static_cast<std::size_t>(k) < f.length() ? f[static_cast<std::size_t>(k)]
                                                                    : DenseMatrix(s, s);
    };
    DenseMatrix t1(n, n), t2(n, n), t3(n, n), t4(n, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const long li = static_cast<long>(i), lj = static_cast<long>(j), lm = static_cast<long>(m);
            if (i + j <= m - 1)
                t1.set_block(i * s, j * s, coeff(rep.v, lm - 1 - li - lj, s));
            if (i + j + 2 <= m)
                t3.set_block(i * s, j * s, coeff(rep.q, lm - 2 - li - lj, s));
            if (j >= i) {
                t2.set_block(i * s, j * s, coeff(rep.q_star, lm - 1 - (lj - li), s));
                t4.set_block(i * s, j * s, coeff(rep.v_star, lm - (lj - li), s));
            }
        }
    return subtract(F, multiply(F, t1, t2), multiply(F, t3, t4));
}

} // namespace bbla

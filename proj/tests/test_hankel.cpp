#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bbla/errors.hpp"
#include "bbla/hankel.hpp"
#include "support/oracles.hpp"

using namespace bbla;

namespace
{

const PrimeField F(10007);
const Residue P = 10007;

BlockHankel make_hankel(std::size_t s, std::size_t m, Rng& rng)
{
    return BlockHankel{s, m, oracle::random_hankel_sequence(F, s, m, rng)};
}

/// coefficients [lo, hi) of f g via the schoolbook oracle.
std::vector<DenseMatrix> product_range(const MatrixPolynomial& f, const MatrixPolynomial& g, std::size_t lo,
                                       std::size_t hi)
{
    auto full = oracle::convolve(f.coeffs(), g.coeffs(), P);
    std::vector<DenseMatrix> out;
    for (std::size_t k = lo; k < hi; ++k)
        out.push_back(k < full.size() ? full[k] : DenseMatrix(f.rows(), g.cols()));
    return out;
}

/// The Pade residual and degree constraints of the representation.
void check_pade(const BlockHankel& h, const HankelInverseRep& rep)
{
    const std::size_t s = h.s, m = h.m;
    std::vector<DenseMatrix> alpha = h.alpha;
    alpha.back() = rep.free_block;
    const MatrixPolynomial a(alpha);
    const DenseMatrix eye = DenseMatrix::identity(s);
    REQUIRE(rep.q.length() <= m);
    REQUIRE(rep.q_star.length() <= m);
    REQUIRE(rep.v.length() <= m + 1);
    REQUIRE(rep.v_star.length() <= m + 1);
    CHECK(rep.v[0] == eye);
    CHECK(rep.v_star[0] == eye);
    // A Q = P + x^(2m-2) mod x^(2m-1) with deg P <= m-2: coefficients m-1 .. 2m-2 are 0, ..., 0, I.
    const auto aq = product_range(a, rep.q, m - 1, 2 * m - 1);
    const auto qa = product_range(rep.q_star, a, m - 1, 2 * m - 1);
    for (std::size_t k = 0; k < m; ++k) {
        const DenseMatrix want = k + 1 == m ? eye : DenseMatrix(s, s);
        CHECK(aq[k] == want);
        CHECK(qa[k] == want);
    }
    // A V = U mod x^(2m) with deg U <= m-1: coefficients m .. 2m-1 vanish.
    for (const auto& c : product_range(a, rep.v, m, 2 * m))
        CHECK(c.is_zero());
    for (const auto& c : product_range(rep.v_star, a, m, 2 * m))
        CHECK(c.is_zero());
}

} // namespace

TEST_CASE("block Hankel materialization and multiply")
{
    Rng rng(1);
    const BlockHankel h = make_hankel(2, 3, rng);
    const DenseMatrix hm = h.materialize();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(hm.block(2 * i, 2 * j, 2, 2) == h.alpha[i + j]);
    const DenseMatrix x = random_matrix(6, 4, F, rng);
    CHECK(h.multiply(F, x) == oracle::multiply(hm, x, P));
    BlockHankel bad = h;
    bad.alpha.pop_back();
    CHECK_THROWS_AS(check_hankel(bad), DimensionError);
}

TEST_CASE("build_hankel examples")
{
    const std::size_t n = 12, s = 3;
    const BlockProjection u(n, s);
    const DenseOperator id(F, DenseMatrix::identity(n));
    const BlockHankel hi = build_hankel(id, u);
    for (std::size_t i = 0; i + 1 < hi.alpha.size(); ++i)
        CHECK(hi.alpha[i] == scale(F, 4, DenseMatrix::identity(s)));
    CHECK(id.transpose_apply_count() == (2 * 4 - 1) * s);

    Rng rng(2);
    const DenseMatrix bm = random_matrix(3, 3, F, rng);
    const DenseOperator b1(F, bm);
    const BlockHankel h1 = build_hankel(b1, BlockProjection(3, 3));
    CHECK(h1.m == 1);
    CHECK(h1.alpha[0] == bm);

    const DenseMatrix b = random_matrix(n, n, F, rng);
    const DenseOperator bb(F, b);
    std::vector<DenseMatrix> left;
    const BlockHankel h = build_hankel(bb, u, &left);
    const DenseMatrix um = u.materialize();
    std::vector<DenseMatrix> rcols, lrows;
    DenseMatrix x = um, y = um.transposed();
    for (std::size_t i = 0; i < 4; ++i) {
        rcols.push_back(x);
        lrows.push_back(y);
        x = oracle::multiply(b, x, P);
        y = oracle::multiply(y, b, P);
    }
    const DenseMatrix kr = hstack(rcols), kl = vstack(lrows);
    CHECK(h.materialize() == oracle::multiply(oracle::multiply(kl, b, P), kr, P));
    CHECK(vstack(left) == kl);
    CHECK(h.alpha.back().is_zero());
}

TEST_CASE("sigma_basis examples")
{
    // F(0) = 0: every row already annihilates to order 1 and no pivot arises.
    MatrixPolynomial g(2, 1, 2);
    g[1](0, 0) = 3;
    const SigmaBasisResult r0 = sigma_basis(F, g, 1);
    CHECK(r0.basis == MatrixPolynomial::identity(2));
    CHECK(r0.degrees == std::vector<long>{0, 0});

    // G = [a; -1]: the row (1, a) annihilates at order 1.
    const Residue a = 5;
    MatrixPolynomial g1(2, 1, 1);
    g1[0](0, 0) = a;
    g1[0](1, 0) = P - 1;
    const SigmaBasisResult r1 = sigma_basis(F, g1, 1);
    const DenseMatrix c0 = r1.basis[0];
    CHECK(c0(1, 0) != 0);
    CHECK(c0(1, 1) == F.mul(a, c0(1, 0)));
    CHECK(r1.degrees == std::vector<long>{1, 0});
    REQUIRE(r1.basis.length() == 2);
    CHECK(r1.basis[1](0, 0) == 1);
}

TEST_CASE("sigma_basis rows annihilate to the requested order")
{
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        const std::size_t s = 1 + rng.below(3);
        std::vector<DenseMatrix> c;
        for (int k = 0; k < 7; ++k)
            c.push_back(random_matrix(2 * s, s, F, rng));
        const MatrixPolynomial g(c);
        const std::size_t order = 1 + rng.below(8);
        const SigmaBasisResult r = sigma_basis(F, g, order);
        for (const auto& coeff : product_range(r.basis, g, 0, order))
            CHECK(coeff.is_zero());
        // Each step raises at most `cols` row degrees.
        long sum = 0;
        for (long d : r.degrees)
            sum += d;
        CHECK(sum <= static_cast<long>(order * s));
        CHECK(r.basis.true_degree() <= static_cast<long>(order));
        CHECK(r.order == order);
    }
}

TEST_CASE("sigma_basis serial and parallel modes agree")
{
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const std::size_t s = 1 + rng.below(4);
        std::vector<DenseMatrix> c;
        for (int k = 0; k < 9; ++k)
            c.push_back(random_matrix(2 * s, s, F, rng));
        std::vector<long> shift(2 * s);
        for (auto& v : shift)
            v = static_cast<long>(rng.below(3));
        const SigmaBasisResult a = sigma_basis(F, MatrixPolynomial(c), 8, shift, SigmaBasisMode::Serial);
        const SigmaBasisResult b = sigma_basis(F, MatrixPolynomial(c), 8, shift, SigmaBasisMode::Parallel);
        CHECK(a.basis == b.basis);
        CHECK(a.degrees == b.degrees);
    }
}

TEST_CASE("hankel_inverse_rep examples")
{
    Rng rng(5);
    // m = 1: the single block is inverted directly.
    const BlockHankel h1 = make_hankel(3, 1, rng);
    const HankelInverseRep r1 = hankel_inverse_rep(F, h1);
    CHECK(materialize_offdiagonal(F, r1) == dense_inverse(F, h1.alpha[0]));
    check_pade(h1, r1);

    // s = 1, m = 2 over p = 7 with H = [[1, 2], [2, 5]].
    const PrimeField F7(7);
    for (Residue tail : {0, 3, 6}) {
        BlockHankel h{1, 2, {}};
        for (Residue v : {Residue{1}, Residue{2}, Residue{5}, tail})
            h.alpha.push_back(DenseMatrix(1, 1, {v}));
        CHECK(materialize_offdiagonal(F7, hankel_inverse_rep(F7, h)) == DenseMatrix(2, 2, {5, 5, 5, 1}));
    }

    const BlockHankel h = make_hankel(2, 3, rng);
    const HankelInverseRep r = hankel_inverse_rep(F, h);
    CHECK(oracle::is_identity(oracle::multiply(materialize_offdiagonal(F, r), h.materialize(), P)));
    check_pade(h, r);
}

TEST_CASE("hankel_inverse_rep reconstructs the dense inverse")
{
    Rng rng(6);
    for (int t = 0; t < 100; ++t) {
        const std::size_t s = 1 + rng.below(4), m = 1 + rng.below(6);
        const BlockHankel h = make_hankel(s, m, rng);
        const HankelInverseRep rep = hankel_inverse_rep(F, h, static_cast<std::uint64_t>(t));
        REQUIRE(materialize_offdiagonal(F, rep) == dense_inverse(F, h.materialize()));
        check_pade(h, rep);
    }
}

TEST_CASE("singular Hankel matrices are rejected")
{
    Rng rng(7);
    BlockHankel zero{2, 3, std::vector<DenseMatrix>(6, DenseMatrix(2, 2))};
    CHECK_THROWS_AS(hankel_inverse_rep(F, zero), Error);
    BlockHankel single{2, 1, std::vector<DenseMatrix>(2, DenseMatrix(2, 2))};
    CHECK_THROWS_AS(hankel_inverse_rep(F, single), HankelSingular);
    // A rank-deficient sequence: alpha_i = c^i w w^T.
    const DenseMatrix w = random_matrix(2, 1, F, rng);
    const DenseMatrix ww = multiply(F, w, w.transposed());
    BlockHankel low{2, 3, {}};
    Residue c = 1;
    for (int i = 0; i < 6; ++i, c = F.mul(c, 3))
        low.alpha.push_back(scale(F, c, ww));
    CHECK_THROWS_AS(hankel_inverse_rep(F, low), Error);
    try {
        (void)hankel_inverse_rep(F, low);
    }
    catch (const ResidueSingular&) {
    }
    catch (const HankelSingular&) {
    }
}

TEST_CASE("hankel_inverse_apply")
{
    Rng rng(8);
    const BlockHankel h = make_hankel(2, 4, rng);
    const HankelInverseRep rep = hankel_inverse_rep(F, h);
    CHECK(oracle::is_identity(hankel_inverse_apply(F, rep, h.materialize())));
    const DenseMatrix m = random_matrix(8, 5, F, rng);
    CHECK(hankel_inverse_apply(F, rep, m) == oracle::multiply(dense_inverse(F, h.materialize()), m, P));
    CHECK(hankel_inverse_apply(F, rep, m) == oracle::multiply(materialize_offdiagonal(F, rep), m, P));
    CHECK_THROWS_AS(hankel_inverse_apply(F, rep, DenseMatrix(7, 1)), DimensionError);

    const BlockHankel h1 = make_hankel(3, 1, rng);
    const HankelInverseRep r1 = hankel_inverse_rep(F, h1);
    const DenseMatrix m1 = random_matrix(3, 2, F, rng);
    CHECK(hankel_inverse_apply(F, r1, m1) == oracle::multiply(dense_inverse(F, h1.alpha[0]), m1, P));

    for (int t = 0; t < 40; ++t) {
        const std::size_t s = 1 + rng.below(4), mm = 1 + rng.below(6);
        const BlockHankel hr = make_hankel(s, mm, rng);
        const HankelInverseRep rr = hankel_inverse_rep(F, hr);
        const DenseMatrix x = random_matrix(s * mm, 1 + rng.below(6), F, rng);
        REQUIRE(hankel_inverse_apply(F, rr, x) == oracle::multiply(materialize_offdiagonal(F, rr), x, P));
    }
}

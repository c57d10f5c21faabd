#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bbla/errors.hpp"
#include "bbla/projection.hpp"
#include "support/oracles.hpp"

using namespace bbla;

namespace
{

const PrimeField F(kDefaultPrime);
const Residue P = kDefaultPrime;

/// [u, Bu, ..., B^(k-1) u] densely.
DenseMatrix krylov_right_dense(const DenseMatrix& b, const DenseMatrix& u, std::size_t k)
{
    std::vector<DenseMatrix> cols;
    DenseMatrix x = u;
    for (std::size_t i = 0; i < k; ++i) {
        cols.push_back(x);
        x = oracle::multiply(b, x, P);
    }
    return hstack(cols);
}

std::shared_ptr<DenseOperator> dense_op(const DenseMatrix& m)
{
    return std::make_shared<DenseOperator>(F, m);
}

} // namespace

TEST_CASE("block projection structure")
{
    const BlockProjection u(12, 3);
    CHECK(u.m() == 4);
    const DenseMatrix um = u.materialize();
    std::size_t nz = 0;
    for (Residue v : um.entries())
        nz += v != 0;
    CHECK(nz == 12);
    for (std::size_t b = 0; b < 4; ++b)
        CHECK(um.block(b * 3, 0, 3, 3) == DenseMatrix::identity(3));
    CHECK_THROWS_AS(BlockProjection(10, 3), DimensionError);
    CHECK_THROWS_AS(BlockProjection(10, 0), DimensionError);
}

TEST_CASE("u_contract examples")
{
    const BlockProjection u(4, 2);
    CHECK(u_contract(F, u, DenseMatrix::identity(4)) == DenseMatrix(2, 4, {1, 0, 1, 0, 0, 1, 0, 1}));
    CHECK(u_contract(F, u, DenseMatrix(4, 3)).is_zero());
    Rng rng(1);
    const BlockProjection u2(12, 3);
    const DenseMatrix w = random_matrix(12, 5, F, rng);
    CHECK(u_contract(F, u2, w) == oracle::multiply(u2.materialize().transposed(), w, P));
    CHECK_THROWS_AS(u_contract(F, u2, DenseMatrix(11, 2)), DimensionError);
}

TEST_CASE("u_expand examples")
{
    const BlockProjection u(6, 2);
    CHECK(u_expand(u, DenseMatrix::identity(2)) == u.materialize());
    CHECK(u_expand(u, DenseMatrix(2, 4)).is_zero());
    Rng rng(2);
    const DenseMatrix m = random_matrix(2, 4, F, rng);
    CHECK(u_expand(u, m) == oracle::multiply(u.materialize(), m, P));
    CHECK(u_contract(F, u, u_expand(u, m)) == scale(F, 3, m));
    CHECK_THROWS_AS(u_expand(u, DenseMatrix(3, 1)), DimensionError);
}

TEST_CASE("krylov_sequence examples and counts")
{
    const BlockProjection u(8, 2);
    const auto id = dense_op(DenseMatrix::identity(8));
    const KrylovSequence seq = krylov_sequence(*id, u, 4, KrylovSide::Right);
    CHECK(seq.blocks.size() == 4);
    for (const auto& b : seq.blocks)
        CHECK(b == u.materialize());
    CHECK(oracle::rank(seq.assemble(), P) == 2);
    CHECK(id->total_applications() == 3 * 2);

    DenseMatrix d(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        d(i, i) = i + 1;
    const BlockProjection u4(4, 2);
    CHECK(oracle::rank(krylov_sequence(*dense_op(d), u4, 2, KrylovSide::Right).assemble(), P) == 4);

    Rng rng(3);
    const auto b = dense_op(random_matrix(16, 16, F, rng));
    const BlockProjection u16(16, 4);
    const KrylovSequence r = krylov_sequence(*b, u16, 4, KrylovSide::Right);
    CHECK(oracle::rank(r.assemble(), P) == 16);
    CHECK(r.assemble() == krylov_right_dense(b->matrix(), u16.materialize(), 4));
    const KrylovSequence l = krylov_sequence(*b, u16, 4, KrylovSide::Left);
    CHECK(l.assemble() == krylov_right_dense(b->matrix().transposed(), u16.materialize(), 4).transposed());
    CHECK(b->apply_count() == 12);
    CHECK(b->transpose_apply_count() == 12);
    for (std::size_t i = 0; i + 1 < 4; ++i)
        CHECK(l.blocks[i + 1] == oracle::multiply(l.blocks[i], b->matrix(), P));
    CHECK_THROWS_AS(krylov_sequence(*b, u16, 0, KrylovSide::Right), DimensionError);
}

TEST_CASE("krylov_apply_right")
{
    Rng rng(4);
    const BlockProjection u1(5, 5);
    const auto a = dense_op(random_matrix(5, 5, F, rng));
    const DenseMatrix m5 = random_matrix(5, 3, F, rng);
    CHECK(krylov_apply_right(*a, u1, m5) == m5);

    const BlockProjection u(12, 3);
    const auto zero = dense_op(DenseMatrix(12, 12));
    const DenseMatrix m = random_matrix(12, 7, F, rng);
    CHECK(krylov_apply_right(*zero, u, m) == u_expand(u, m.block(0, 0, 3, 7)));

    const auto b = dense_op(random_matrix(12, 12, F, rng));
    const DenseMatrix want = oracle::multiply(krylov_right_dense(b->matrix(), u.materialize(), 4), m, P);
    const std::uint64_t before = b->total_applications();
    CHECK(krylov_apply_right(*b, u, m) == want);
    CHECK(b->total_applications() - before == 3 * 7);
}

TEST_CASE("krylov_apply_left")
{
    Rng rng(5);
    const BlockProjection u1(4, 4);
    const auto a = dense_op(random_matrix(4, 4, F, rng));
    const DenseMatrix m4 = random_matrix(4, 2, F, rng);
    CHECK(krylov_apply_left(*a, u1, m4) == m4);

    const BlockProjection u(12, 3);
    const auto id = dense_op(DenseMatrix::identity(12));
    const DenseMatrix m = random_matrix(12, 5, F, rng);
    const DenseMatrix r = krylov_apply_left(*id, u, m);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(r.block(i * 3, 0, 3, 5) == u_contract(F, u, m));

    const auto b = dense_op(random_matrix(12, 12, F, rng));
    const DenseMatrix kl = krylov_right_dense(b->matrix().transposed(), u.materialize(), 4).transposed();
    const std::uint64_t before = b->total_applications();
    CHECK(krylov_apply_left(*b, u, m) == oracle::multiply(kl, m, P));
    CHECK(b->total_applications() - before == 3 * 5);
    CHECK(3 * 5 < 12 * 4);
}

TEST_CASE("efficient projection triple")
{
    Rng rng(6);
    // m = 1: the Krylov matrix is v_hat = L D u, nonsingular.
    const auto a1 = dense_op(random_matrix(4, 4, F, rng));
    const EfficientProjection e1 = efficient_projection_triple(*a1, 4, 1);
    CHECK(oracle::rank(e1.v_hat, P) == 4);

    int good = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        DenseMatrix am;
        do {
            am = random_matrix(8, 8, F, rng);
        } while (oracle::rank(am, P) < 8);
        const auto a = dense_op(am);
        const EfficientProjection e = efficient_projection_triple(*a, 2, seed);
        const DenseMatrix ra = oracle::multiply(materialize(*e.r), am, P);
        const DenseMatrix kr = krylov_right_dense(ra, e.v_hat, 4);
        const DenseMatrix kl = krylov_right_dense(ra.transposed(), e.u_hat.transposed(), 4);
        good += oracle::rank(kr, P) == 8 && oracle::rank(kl, P) == 8;

        const DenseMatrix l = materialize(*e.lower), d = materialize(*e.diagonal);
        CHECK(e.v_hat == oracle::multiply(oracle::multiply(l, d, P), BlockProjection(8, 2).materialize(), P));
        // D L^T u_hat^T = u
        CHECK(oracle::multiply(oracle::multiply(d, l.transposed(), P), e.u_hat.transposed(), P) ==
              BlockProjection(8, 2).materialize());
    }
    CHECK(good >= 30);
}

TEST_CASE("block Krylov matrix of D A D is nonsingular for generic-profile A")
{
    Rng rng(7);
    int good = 0, trials = 0;
    for (std::size_t n : {8, 12, 16, 24})
        for (std::size_t s : {2, 4}) {
            if (n % s != 0)
                continue;
            for (int t = 0; t < 25; ++t) {
                const DenseMatrix am = oracle::random_generic_profile(F, n, rng);
                const auto a = dense_op(am);
                const BlockProjection u(n, s);
                bool found = false;
                for (int attempt = 0; attempt < 8 && !found; ++attempt) {
                    const auto d = DiagonalOperator::random_blocks(F, n / s, s, rng);
                    const BlackBoxPtr b = compose({d, a, d});
                    found = oracle::rank(krylov_sequence(*b, u, n / s, KrylovSide::Right).assemble(), P) == n;
                    if (attempt == 0) {
                        good += found;
                        ++trials;
                    }
                }
                CHECK(found);
            }
        }
    CHECK(good * 4 >= trials * 3);
}

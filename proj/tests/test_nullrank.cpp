#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bbla/errors.hpp"
#include "bbla/nullrank.hpp"
#include "support/oracles.hpp"

using namespace bbla;

namespace
{

const PrimeField F(kDefaultPrime);
const Residue P = kDefaultPrime;

/// Characteristic polynomial by Faddeev-LeVerrier, monic, constant term first.
std::vector<Residue> charpoly(const DenseMatrix& a)
{
    const std::size_t n = a.rows();
    std::vector<Residue> c(n + 1, 0);
    c[n] = 1;
    DenseMatrix m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        DenseMatrix am = oracle::multiply(a, m, P);
        for (std::size_t i = 0; i < n; ++i)
            am(i, i) = (am(i, i) + c[n - k + 1]) % P;
        m = am;
        const DenseMatrix amk = oracle::multiply(a, m, P);
        Residue tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            tr = (tr + amk(i, i)) % P;
        c[n - k] = (P - oracle::mulmod(tr, oracle::inverse(k, P), P)) % P;
    }
    return c;
}

void check_certificate(const DenseMatrix& am, const RankCertificate& c)
{
    const std::size_t n = am.rows();
    CHECK(c.rank == oracle::rank(am, P));
    REQUIRE(c.nullspace.rows() == n);
    REQUIRE(c.nullspace.cols() == n - c.rank);
    CHECK(oracle::multiply(am, c.nullspace, P).is_zero());
    CHECK(oracle::rank(c.nullspace, P) == n - c.rank);
}

} // namespace

TEST_CASE("berlekamp_massey")
{
    const PrimeField G(10007);
    // a_i = 3^i has generator x - 3.
    std::vector<Residue> seq;
    Residue v = 1;
    for (int i = 0; i < 8; ++i, v = G.mul(v, 3))
        seq.push_back(v);
    CHECK(berlekamp_massey(G, seq) == std::vector<Residue>{10007 - 3, 1});
    // Fibonacci: x^2 - x - 1.
    std::vector<Residue> fib{0, 1};
    for (int i = 0; i < 10; ++i)
        fib.push_back(G.add(fib[fib.size() - 1], fib[fib.size() - 2]));
    CHECK(berlekamp_massey(G, fib) == std::vector<Residue>{10006, 10006, 1});
    CHECK(berlekamp_massey(G, std::vector<Residue>(6, 0)) == std::vector<Residue>{1});
}

TEST_CASE("wiedemann_minpoly examples")
{
    const DenseOperator zero(F, DenseMatrix(6, 6));
    CHECK(wiedemann_minpoly(zero, 1) == std::vector<Residue>{0, 1});
    const DenseOperator id(F, DenseMatrix::identity(6));
    CHECK(wiedemann_minpoly(id, 1) == std::vector<Residue>{P - 1, 1});

    // Similar to a diagonal matrix with distinct eigenvalues.
    Rng rng(1);
    DenseMatrix d(10, 10), s;
    for (std::size_t i = 0; i < 10; ++i)
        d(i, i) = i + 2;
    do {
        s = random_matrix(10, 10, F, rng);
    } while (oracle::rank(s, P) < 10);
    const DenseMatrix a = oracle::multiply(oracle::multiply(s, d, P), dense_inverse(F, s), P);
    const DenseOperator op(F, a);
    const std::uint64_t before = op.total_applications();
    CHECK(wiedemann_minpoly(op, 7) == charpoly(a));
    CHECK(op.total_applications() - before == 19);
}

TEST_CASE("nullspace_rank examples")
{
    const DenseOperator zero(F, DenseMatrix(6, 6));
    const RankCertificate c0 = nullspace_rank(zero);
    CHECK(c0.rank == 0);
    CHECK(c0.nullspace.cols() == 6);
    CHECK(oracle::rank(c0.nullspace, P) == 6);

    DenseMatrix d(4, 4);
    d(0, 0) = d(1, 1) = 1;
    const DenseOperator dop(F, d);
    const RankCertificate c = nullspace_rank(dop);
    CHECK(c.rank == 2);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(c.nullspace(0, j) == 0);
        CHECK(c.nullspace(1, j) == 0);
    }
    check_certificate(d, c);

    const DenseOperator id(F, DenseMatrix::identity(5));
    const RankCertificate ci = nullspace_rank(id);
    CHECK(ci.rank == 5);
    CHECK(ci.nullspace.cols() == 0);
}

TEST_CASE("nullspace_rank on random low-rank matrices")
{
    Rng rng(2);
    for (std::size_t r : {5, 13})
        for (int t = 0; t < 15; ++t) {
            const DenseMatrix am = oracle::random_rank(F, 20, r, rng);
            const DenseOperator a(F, am);
            NullspaceConfig cfg;
            cfg.seed = static_cast<std::uint64_t>(t);
            check_certificate(am, nullspace_rank(a, cfg));
        }
}

TEST_CASE("nullspace_rank on sparse singular matrices")
{
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        // Zero out a few rows of a sparse matrix.
        std::vector<SparseOperator::Entry> entries;
        const std::size_t n = 15;
        for (std::size_t i = 0; i < n; ++i) {
            if (i % 4 == 1)
                continue;
            for (int k = 0; k < 3; ++k)
                entries.push_back({i, rng.below(n), rng.nonzero(F)});
        }
        const SparseOperator a(F, n, entries);
        check_certificate(a.to_dense(), nullspace_rank(a));
    }
}

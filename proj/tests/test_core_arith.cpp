#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bbla/dense.hpp"
#include "bbla/errors.hpp"
#include "bbla/field.hpp"
#include "bbla/kernels.hpp"
#include "bbla/polymat.hpp"
#include "support/oracles.hpp"

using namespace bbla;

TEST_CASE("prime field construction")
{
    CHECK(is_prime(7));
    CHECK(is_prime(kDefaultPrime));
    CHECK_FALSE(is_prime(2147483647ULL * 3));
    CHECK(previous_prime(kDefaultPrime) == 2147483587ULL);
    CHECK_THROWS_AS(PrimeField(9), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(2), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(2147483659ULL), std::invalid_argument);
}

TEST_CASE("ff_inv examples")
{
    const PrimeField F7(7);
    CHECK(F7.inv(1) == 1);
    CHECK(F7.inv(2) == 4);
    CHECK_THROWS_AS(F7.inv(0), NotInvertible);
    CHECK_THROWS_AS(F7.inv(14), NotInvertible);

    const PrimeField F(10007);
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
        const Residue a = rng.nonzero(F);
        const Residue b = F.inv(a);
        CHECK(F.mul(a, b) == 1);
        CHECK(b == oracle::inverse(a, 10007));
        CHECK(F.inv(b) == a);
    }
}

TEST_CASE("reduce and balanced representatives")
{
    const PrimeField F(7);
    CHECK(F.reduce(-1) == 6);
    CHECK(F.reduce(-15) == 6);
    CHECK(F.reduce(15) == 1);
    CHECK(F.balanced(6) == -1);
    CHECK(F.balanced(3) == 3);
    CHECK(F.balanced(4) == -3);
}

TEST_CASE("dense_inverse examples")
{
    const PrimeField F7(7);
    CHECK(dense_inverse(F7, DenseMatrix::identity(4)) == DenseMatrix::identity(4));
    const DenseMatrix m(2, 2, {1, 2, 2, 5});
    CHECK(dense_inverse(F7, m) == DenseMatrix(2, 2, {5, 5, 5, 1}));

    const PrimeField F(10007);
    Rng rng(3);
    DenseMatrix a;
    do {
        a = random_matrix(8, 8, F, rng);
    } while (oracle::rank(a, 10007) < 8);
    CHECK(oracle::is_identity(oracle::multiply(a, dense_inverse(F, a), 10007)));
}

TEST_CASE("dense_inverse reports the first dependent column")
{
    const PrimeField F(7);
    const DenseMatrix m(3, 3, {1, 2, 3, 2, 4, 1, 3, 6, 2});
    try {
        (void)dense_inverse(F, m);
        FAIL("expected SingularError");
    }
    catch (const SingularError& e) {
        CHECK(e.column() == 1);
    }
    CHECK_THROWS_AS(dense_inverse(F, DenseMatrix(2, 3)), DimensionError);
}

TEST_CASE("dense_inverse is a two-sided inverse on random matrices")
{
    const PrimeField F(kDefaultPrime);
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng.below(64);
        const DenseMatrix a = random_matrix(n, n, F, rng);
        if (oracle::rank(a, F.modulus()) < n)
            continue;
        const DenseMatrix x = dense_inverse(F, a);
        REQUIRE(oracle::is_identity(oracle::multiply(a, x, F.modulus())));
        REQUIRE(oracle::is_identity(oracle::multiply(x, a, F.modulus())));
    }
}

TEST_CASE("dense_rank examples and transpose invariance")
{
    const PrimeField F(10007);
    CHECK(dense_rank(F, DenseMatrix(3, 3)) == 0);
    CHECK(dense_rank(F, DenseMatrix::identity(5)) == 5);
    Rng rng(7);
    const DenseMatrix u = random_matrix(6, 1, F, rng), v = random_matrix(1, 6, F, rng);
    CHECK(dense_rank(F, multiply(F, u, v)) == 1);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + rng.below(12), r = rng.below(n + 1);
        const DenseMatrix a = oracle::random_rank(F, n, r, rng);
        CHECK(dense_rank(F, a) == dense_rank(F, a.transposed()));
        CHECK(dense_rank(F, a) == oracle::rank(a, 10007));
    }
}

TEST_CASE("dense_determinant matches elimination oracle")
{
    const PrimeField F(10007);
    Rng rng(9);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + rng.below(10);
        const DenseMatrix a = random_matrix(n, n, F, rng);
        CHECK(dense_determinant(F, a) == oracle::determinant(a, 10007));
    }
    CHECK(dense_determinant(F, DenseMatrix(2, 2)) == 0);
}

TEST_CASE("dense products match the schoolbook oracle")
{
    const PrimeField F(kDefaultPrime);
    Rng rng(13);
    for (std::size_t n : {1, 3, 17, 70, 300}) {
        const DenseMatrix a = random_matrix(n, n / 2 + 1, F, rng), b = random_matrix(n / 2 + 1, 5, F, rng);
        CHECK(multiply(F, a, b) == oracle::multiply(a, b, F.modulus()));
    }
    CHECK_THROWS_AS(multiply(F, DenseMatrix(2, 3), DenseMatrix(2, 3)), DimensionError);
}

TEST_CASE("polymat_mul examples")
{
    const PrimeField F7(7);
    const MatrixPolynomial f(std::vector<DenseMatrix>{DenseMatrix(1, 1, {2}), DenseMatrix(1, 1, {3})});
    const MatrixPolynomial g(std::vector<DenseMatrix>{DenseMatrix(1, 1, {4}), DenseMatrix(1, 1, {5})});
    const MatrixPolynomial h = polymat_mul(F7, f, g);
    REQUIRE(h.length() == 3);
    CHECK(h[0](0, 0) == 1);
    CHECK(h[1](0, 0) == 1);
    CHECK(h[2](0, 0) == 1);

    const PrimeField F(10007);
    Rng rng(17);
    std::vector<DenseMatrix> fc, gc;
    for (int k = 0; k < 6; ++k) {
        fc.push_back(random_matrix(3, 3, F, rng));
        gc.push_back(random_matrix(3, 3, F, rng));
    }
    const MatrixPolynomial fp(fc), gp(gc);
    CHECK(polymat_mul(F, fp, MatrixPolynomial::identity(3)) == fp);
    CHECK(polymat_mul(F, fp, gp).coeffs() == oracle::convolve(fc, gc, 10007));

    const MatrixPolynomial mid = polymat_mul_range(F, fp, gp, 3, 8);
    const auto full = oracle::convolve(fc, gc, 10007);
    for (std::size_t k = 0; k < 5; ++k)
        CHECK(mid[k] == full[k + 3]);
    CHECK_THROWS_AS(polymat_mul(F, MatrixPolynomial(2, 3, 1), MatrixPolynomial(2, 3, 1)), DimensionError);
}

TEST_CASE("polymat_mul is associative and distributive")
{
    const PrimeField F(kDefaultPrime);
    Rng rng(19);
    const auto random_poly = [&](std::size_t s, std::size_t len) {
        std::vector<DenseMatrix> c;
        for (std::size_t k = 0; k < len; ++k)
            c.push_back(random_matrix(s, s, F, rng));
        return MatrixPolynomial(c);
    };
    for (int t = 0; t < 30; ++t) {
        const std::size_t s = 1 + rng.below(4);
        const auto a = random_poly(s, 1 + rng.below(9)), b = random_poly(s, 1 + rng.below(9)),
                   c = random_poly(s, 1 + rng.below(9));
        CHECK(polymat_mul(F, polymat_mul(F, a, b), c) == polymat_mul(F, a, polymat_mul(F, b, c)));
        const auto lhs = polymat_mul(F, a, polymat_add(F, b, c));
        auto rhs = polymat_add(F, polymat_mul(F, a, b), polymat_mul(F, a, c));
        CHECK(lhs.coeffs() == rhs.coeffs());
    }
}

TEST_CASE("serial and parallel kernels agree bit for bit")
{
    const PrimeField F(kDefaultPrime);
    Rng rng(23);
    const DenseMatrix a = random_matrix(90, 130, F, rng), b = random_matrix(130, 300, F, rng);
    DenseMatrix c1(90, 300), c2(90, 300);
    kernels::serial::gemm_add(F, a, b, c1);
    kernels::omp::gemm_add(F, a, b, c2);
    CHECK(c1 == c2);

    std::vector<DenseMatrix> fc, gc;
    for (int k = 0; k < 7; ++k) {
        fc.push_back(random_matrix(4, 4, F, rng));
        gc.push_back(random_matrix(4, 9, F, rng));
    }
    const MatrixPolynomial f(fc), g(gc);
    MatrixPolynomial o1(4, 9, 13), o2(4, 9, 13);
    kernels::serial::polymat_mul(F, f, g, 0, 13, o1);
    kernels::omp::polymat_mul(F, f, g, 0, 13, o2);
    CHECK(o1 == o2);
}

TEST_CASE("matrix polynomial helpers")
{
    MatrixPolynomial p(2, 2, 4);
    p[1](0, 1) = 3;
    CHECK(p.degree() == 3);
    CHECK(p.true_degree() == 1);
    p.normalize();
    CHECK(p.length() == 2);
    CHECK(p.transposed()[1](1, 0) == 3);
    CHECK(p.coeff_or_zero(9).is_zero());
    CHECK(MatrixPolynomial(2, 2, 0).true_degree() == -1);
    CHECK_THROWS_AS(MatrixPolynomial(std::vector<DenseMatrix>{DenseMatrix(2, 2), DenseMatrix(2, 3)}), DimensionError);
}

#include "bbla/kernels.hpp"

#include <algorithm>

#include "bbla/errors.hpp"
#include "bbla/polymat.hpp"

#ifdef BBLA_HAVE_OPENMP
#include <omp.h>
#endif

namespace bbla::kernels
{
namespace
{

// Four products below 2^62 plus a reduced residue stay below 2^64.
constexpr unsigned kPendingProducts = 4;
constexpr std::size_t kColumnTile = 256;
// Below this many multiply-adds the omp variants run on one thread.
constexpr std::size_t kParallelWork = 1u << 15;

void check_gemm(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c)
{
    if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols())
        throw DimensionError("gemm: incompatible shapes");
}

// c(i, [j0, j1)) += a(i, :) * b(:, [j0, j1))
void gemm_tile(Residue p, const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c, std::size_t i,
               std::size_t j0, std::size_t j1)
{
    Residue acc[kColumnTile];
    const std::size_t width = j1 - j0;
    Residue* crow = c.row(i).data() + j0;
    std::copy(crow, crow + width, acc);
    unsigned pending = 0;
    const auto arow = a.row(i);
    for (std::size_t k = 0; k < arow.size(); ++k) {
        const Residue x = arow[k];
        if (x == 0)
            continue;
        const Residue* brow = b.row(k).data() + j0;
        for (std::size_t j = 0; j < width; ++j)
            acc[j] += x * brow[j];
        if (++pending == kPendingProducts) {
            for (std::size_t j = 0; j < width; ++j)
                acc[j] %= p;
            pending = 0;
        }
    }
    for (std::size_t j = 0; j < width; ++j)
        crow[j] = acc[j] % p;
}

void spmm_row(Residue p, const CsrView& s, const DenseMatrix& x, DenseMatrix& y, std::size_t r)
{
    auto yrow = y.row(r);
    std::fill(yrow.begin(), yrow.end(), 0);
    unsigned pending = 0;
    for (std::size_t e = s.ptr[r]; e < s.ptr[r + 1]; ++e) {
        const Residue v = s.val[e];
        const auto xrow = x.row(s.col[e]);
        for (std::size_t j = 0; j < yrow.size(); ++j)
            yrow[j] += v * xrow[j];
        if (++pending == kPendingProducts) {
            for (auto& t : yrow)
                t %= p;
            pending = 0;
        }
    }
    for (auto& t : yrow)
        t %= p;
}

void check_spmm(const CsrView& s, const DenseMatrix& x, const DenseMatrix& y)
{
    if (y.rows() != s.rows || y.cols() != x.cols())
        throw DimensionError("spmm: incompatible shapes");
}

void check_polymat(const MatrixPolynomial& f, const MatrixPolynomial& g, std::size_t lo, std::size_t hi,
                   const MatrixPolynomial& out)
{
    if (f.cols() != g.rows())
        throw DimensionError("polymat_mul: inner block dimensions differ");
    if (hi < lo || out.length() != hi - lo || out.rows() != f.rows() || out.cols() != g.cols())
        throw DimensionError("polymat_mul: output has the wrong shape");
}

// Product coefficient t of f*g, accumulated into `c` (assumed zero).
template <typename Gemm>
void polymat_coefficient(const PrimeField& F, const MatrixPolynomial& f, const MatrixPolynomial& g,
                         std::size_t t, DenseMatrix& c, Gemm gemm)
{
    if (f.length() == 0 || g.length() == 0)
        return;
    const std::size_t a_lo = t >= g.length() ? t - (g.length() - 1) : 0;
    const std::size_t a_hi = std::min(t, f.length() - 1);
    for (std::size_t a = a_lo; a <= a_hi && a_lo <= a_hi; ++a)
        gemm(F, f[a], g[t - a], c);
}

} // namespace

namespace serial
{

void gemm_add(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c)
{
    check_gemm(a, b, c);
    const std::size_t tiles = (b.cols() + kColumnTile - 1) / kColumnTile;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t t = 0; t < tiles; ++t)
            gemm_tile(F.modulus(), a, b, c, i, t * kColumnTile, std::min(b.cols(), (t + 1) * kColumnTile));
}

void spmm(const PrimeField& F, const CsrView& s, const DenseMatrix& x, DenseMatrix& y)
{
    check_spmm(s, x, y);
    for (std::size_t r = 0; r < s.rows; ++r)
        spmm_row(F.modulus(), s, x, y, r);
}

void polymat_mul(const PrimeField& F, const MatrixPolynomial& f, const MatrixPolynomial& g, std::size_t lo,
                 std::size_t hi, MatrixPolynomial& out)
{
    check_polymat(f, g, lo, hi, out);
    for (std::size_t t = lo; t < hi; ++t)
        polymat_coefficient(F, f, g, t, out[t - lo], serial::gemm_add);
}

} // namespace serial

namespace omp
{

void gemm_add(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c)
{
    check_gemm(a, b, c);
    const std::size_t tiles = (b.cols() + kColumnTile - 1) / kColumnTile;
    const std::size_t tasks = a.rows() * tiles;
    const bool parallel = a.rows() * a.cols() * b.cols() >= kParallelWork;
    const Residue p = F.modulus();
#pragma omp parallel for schedule(static) if (parallel)
    for (std::size_t task = 0; task < tasks; ++task) {
        const std::size_t i = task / tiles, t = task % tiles;
        gemm_tile(p, a, b, c, i, t * kColumnTile, std::min(b.cols(), (t + 1) * kColumnTile));
    }
}

void spmm(const PrimeField& F, const CsrView& s, const DenseMatrix& x, DenseMatrix& y)
{
    check_spmm(s, x, y);
    const bool parallel = s.val.size() * x.cols() >= kParallelWork;
    const Residue p = F.modulus();
#pragma omp parallel for schedule(static) if (parallel)
    for (std::size_t r = 0; r < s.rows; ++r)
        spmm_row(p, s, x, y, r);
}

void polymat_mul(const PrimeField& F, const MatrixPolynomial& f, const MatrixPolynomial& g, std::size_t lo,
                 std::size_t hi, MatrixPolynomial& out)
{
    check_polymat(f, g, lo, hi, out);
    const std::size_t count = hi - lo;
    if (count >= static_cast<std::size_t>(max_threads()) && max_threads() > 1) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t t = lo; t < hi; ++t)
            polymat_coefficient(F, f, g, t, out[t - lo], serial::gemm_add);
    } else {
        for (std::size_t t = lo; t < hi; ++t)
            polymat_coefficient(F, f, g, t, out[t - lo], omp::gemm_add);
    }
}

} // namespace omp

int max_threads() noexcept
{
#ifdef BBLA_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace bbla::kernels

#ifndef BBLA_KERNELS_HPP
#define BBLA_KERNELS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "bbla/dense.hpp"
#include "bbla/field.hpp"

namespace bbla
{
class MatrixPolynomial;

///
/// Compute kernels. Each kernel has a serial reference implementation and an
/// OpenMP version; the two are required to produce bit-identical output (the
/// arithmetic is exact, only the work distribution differs). The library calls
/// the `omp` variants, which degrade to serial code when OpenMP is disabled.
///
namespace kernels
{

/// Compressed sparse rows: row r holds (col[k], val[k]) for k in [ptr[r], ptr[r+1]).
struct CsrView
{
    std::size_t rows = 0;
    std::span<const std::size_t> ptr;
    std::span<const std::size_t> col;
    std::span<const Residue> val;
};

namespace serial
{
/// c += a*b
void gemm_add(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c);
/// y = S x, where x has one row per column of S.
void spmm(const PrimeField& F, const CsrView& s, const DenseMatrix& x, DenseMatrix& y);
/// Coefficients [lo, hi) of f*g.
void polymat_mul(const PrimeField& F, const MatrixPolynomial& f, const MatrixPolynomial& g,
                 std::size_t lo, std::size_t hi, MatrixPolynomial& out);
} // namespace serial

namespace omp
{
void gemm_add(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c);
void spmm(const PrimeField& F, const CsrView& s, const DenseMatrix& x, DenseMatrix& y);
void polymat_mul(const PrimeField& F, const MatrixPolynomial& f, const MatrixPolynomial& g,
                 std::size_t lo, std::size_t hi, MatrixPolynomial& out);
} // namespace omp

/// Number of threads the omp kernels will use (1 without OpenMP).
int max_threads() noexcept;

} // namespace kernels
} // namespace bbla

#endif // BBLA_KERNELS_HPP

// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include "bbla/blackbox.hpp"
#include "bbla/kernels.hpp"
#include "bbla/polymat.hpp"

namespace
{

using namespace bbla;

const PrimeField& field()
{
    static const PrimeField F(kDefaultPrime);
    return F;
}

template <auto Kernel>
void bm_gemm(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    const DenseMatrix a = random_matrix(n, n, field(), rng), b = random_matrix(n, n, field(), rng);
    for (auto _ : state) {
        DenseMatrix c(n, n);
        Kernel(field(), a, b, c);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

template <auto Kernel>
void bm_spmm(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    std::vector<SparseOperator::Entry> entries;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < 8; ++k)
            entries.push_back({i, rng.below(n), rng.nonzero(field())});
    std::vector<std::size_t> ptr(n + 1, 0), col;
    std::vector<Residue> val;
    for (const auto& e : entries)
        ++ptr[e.row + 1];
    for (std::size_t i = 0; i < n; ++i)
        ptr[i + 1] += ptr[i];
    col.resize(entries.size());
    val.resize(entries.size());
    std::vector<std::size_t> next(ptr.begin(), ptr.end() - 1);
    for (const auto& e : entries) {
        col[next[e.row]] = e.col;
        val[next[e.row]++] = e.value;
    }
    const kernels::CsrView view{n, ptr, col, val};
    const DenseMatrix x = random_matrix(n, 64, field(), rng);
    for (auto _ : state) {
        DenseMatrix y(n, 64);
        Kernel(field(), view, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

template <auto Kernel>
void bm_polymat(benchmark::State& state)
{
    const auto len = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    std::vector<DenseMatrix> fc, gc;
    for (std::size_t k = 0; k < len; ++k) {
        fc.push_back(random_matrix(16, 16, field(), rng));
        gc.push_back(random_matrix(16, 256, field(), rng));
    }
    const MatrixPolynomial f(fc), g(gc);
    for (auto _ : state) {
        MatrixPolynomial out(16, 256, 2 * len - 1);
        Kernel(field(), f, g, 0, 2 * len - 1, out);
        benchmark::DoNotOptimize(out[0].data());
    }
}

} // namespace

BENCHMARK(bm_gemm<bbla::kernels::serial::gemm_add>)->Name("gemm/serial")->Arg(64)->Arg(256);
BENCHMARK(bm_gemm<bbla::kernels::omp::gemm_add>)->Name("gemm/omp")->Arg(64)->Arg(256);
BENCHMARK(bm_spmm<bbla::kernels::serial::spmm>)->Name("spmm/serial")->Arg(1024)->Arg(8192);
BENCHMARK(bm_spmm<bbla::kernels::omp::spmm>)->Name("spmm/omp")->Arg(1024)->Arg(8192);
BENCHMARK(bm_polymat<bbla::kernels::serial::polymat_mul>)->Name("polymat/serial")->Arg(8)->Arg(16);
BENCHMARK(bm_polymat<bbla::kernels::omp::polymat_mul>)->Name("polymat/omp")->Arg(8)->Arg(16);

BENCHMARK_MAIN();

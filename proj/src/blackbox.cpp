#include "bbla/blackbox.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "bbla/errors.hpp"
#include "bbla/kernels.hpp"

namespace bbla
{

void BlackBox::check_rows(const DenseMatrix& x) const
{
    if (x.rows() != n_)
        throw DimensionError("black box of dimension " + std::to_string(n_) + " applied to " +
                             std::to_string(x.rows()) + " rows");
}

void BlackBox::count(std::size_t columns, bool transposed) const noexcept
{
    (transposed ? transposed_applies_ : applies_).fetch_add(columns, std::memory_order_relaxed);
}

DenseMatrix BlackBox::apply(const DenseMatrix& x) const
{
    check_rows(x);
    count(x.cols(), false);
    return do_apply(x, false);
}

DenseMatrix BlackBox::apply_transpose(const DenseMatrix& x) const
{
    check_rows(x);
    count(x.cols(), true);
    return do_apply(x, true);
}

std::vector<Residue> BlackBox::apply(std::span<const Residue> v) const
{
    return apply(DenseMatrix(v.size(), 1, {v.begin(), v.end()})).column(0);
}

std::vector<Residue> BlackBox::apply_transpose(std::span<const Residue> v) const
{
    return apply_transpose(DenseMatrix(v.size(), 1, {v.begin(), v.end()})).column(0);
}

DenseMatrix materialize(const BlackBox& a)
{
    return a.apply(DenseMatrix::identity(a.dim()));
}

// ---------------------------------------------------------------- sparse

SparseOperator::SparseOperator(const PrimeField& F, std::size_t n, std::vector<Entry> entries)
    : BlackBox(F, n)
{
    for (const auto& e : entries)
        if (e.row >= n || e.col >= n)
            throw DimensionError("sparse entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                                 ") outside a " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    for (const auto& e : entries) {
        if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col)
            entries_.back().value = F.add(entries_.back().value, e.value % F.modulus());
        else
            entries_.push_back({e.row, e.col, e.value % F.modulus()});
    }
    std::erase_if(entries_, [](const Entry& e) { return e.value == 0; });
    rows_ = build_csr(n, entries_, false);
    cols_ = build_csr(n, entries_, true);
}

SparseOperator::Csr SparseOperator::build_csr(std::size_t n, const std::vector<Entry>& entries, bool transposed)
{
    Csr c;
    c.ptr.assign(n + 1, 0);
    for (const auto& e : entries)
        ++c.ptr[(transposed ? e.col : e.row) + 1];
    for (std::size_t i = 0; i < n; ++i)
        c.ptr[i + 1] += c.ptr[i];
    c.col.resize(entries.size());
    c.val.resize(entries.size());
    std::vector<std::size_t> at(c.ptr.begin(), c.ptr.end() - 1);
    for (const auto& e : entries) {
        const std::size_t r = transposed ? e.col : e.row;
        const std::size_t k = at[r]++;
        c.col[k] = transposed ? e.row : e.col;
        c.val[k] = e.value;
    }
    return c;
}

std::shared_ptr<SparseOperator> SparseOperator::from_dense(const PrimeField& F, const DenseMatrix& m)
{
    if (m.rows() != m.cols())
        throw DimensionError("sparse operator must be square");
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0)
                entries.push_back({i, j, m(i, j)});
    return std::make_shared<SparseOperator>(F, m.rows(), std::move(entries));
}

std::shared_ptr<SparseOperator> SparseOperator::random(const PrimeField& F, std::size_t n, std::size_t per_row,
                                                       Rng& rng)
{
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        entries.push_back({i, i, rng.nonzero(F)});
        for (std::size_t k = 0; k < per_row && n > 1; ++k)
            entries.push_back({i, rng.below(n), rng.nonzero(F)});
    }
    return std::make_shared<SparseOperator>(F, n, std::move(entries));
}

DenseMatrix SparseOperator::to_dense() const
{
    DenseMatrix m(dim(), dim());
    for (const auto& e : entries_)
        m(e.row, e.col) = e.value;
    return m;
}

DenseMatrix SparseOperator::do_apply(const DenseMatrix& x, bool transposed) const
{
    const Csr& c = transposed ? cols_ : rows_;
    DenseMatrix y(dim(), x.cols());
    kernels::omp::spmm(field(), {dim(), c.ptr, c.col, c.val}, x, y);
    return y;
}

// ---------------------------------------------------------------- dense

DenseOperator::DenseOperator(const PrimeField& F, DenseMatrix m)
    : BlackBox(F, m.rows()), m_(std::move(m)), mt_(m_.transposed())
{
    if (m_.rows() != m_.cols())
        throw DimensionError("dense operator must be square");
}

DenseMatrix DenseOperator::do_apply(const DenseMatrix& x, bool transposed) const
{
    return multiply(field(), transposed ? mt_ : m_, x);
}

// ---------------------------------------------------------------- preconditioners

DenseMatrix Preconditioner::apply_inverse(const DenseMatrix& x, bool transposed) const
{
    check_rows(x);
    count(x.cols(), transposed);
    return do_solve(x, transposed);
}

DenseMatrix precond_apply(const Preconditioner& p, const DenseMatrix& x, bool transposed, bool inverted)
{
    if (inverted)
        return p.apply_inverse(x, transposed);
    return transposed ? p.apply_transpose(x) : p.apply(x);
}

DiagonalOperator::DiagonalOperator(const PrimeField& F, std::vector<Residue> diagonal)
    : Preconditioner(F, diagonal.size()), d_(std::move(diagonal))
{
    dinv_.reserve(d_.size());
    for (Residue v : d_)
        dinv_.push_back(F.inv(v));
}

std::shared_ptr<DiagonalOperator> DiagonalOperator::blocks(const PrimeField& F, std::span<const Residue> values,
                                                           std::size_t s)
{
    std::vector<Residue> d;
    d.reserve(values.size() * s);
    for (Residue v : values)
        d.insert(d.end(), s, v);
    return std::make_shared<DiagonalOperator>(F, std::move(d));
}

std::shared_ptr<DiagonalOperator> DiagonalOperator::random_blocks(const PrimeField& F, std::size_t m,
                                                                  std::size_t s, Rng& rng)
{
    std::vector<Residue> values(m);
    for (auto& v : values)
        v = rng.nonzero(F);
    return blocks(F, values, s);
}

Residue DiagonalOperator::determinant() const
{
    Residue det = 1;
    for (Residue v : d_)
        det = field().mul(det, v);
    return det;
}

namespace
{

DenseMatrix scale_rows(const PrimeField& F, const DenseMatrix& x, const std::vector<Residue>& d)
{
    DenseMatrix y = x;
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (auto& v : y.row(i))
            v = F.mul(d[i], v);
    return y;
}

} // namespace

DenseMatrix DiagonalOperator::do_apply(const DenseMatrix& x, bool) const
{
    return scale_rows(field(), x, d_);
}

DenseMatrix DiagonalOperator::do_solve(const DenseMatrix& x, bool) const
{
    return scale_rows(field(), x, dinv_);
}

// ---------------------------------------------------------------- butterfly

ButterflyOperator::ButterflyOperator(const PrimeField& F, std::size_t n, std::size_t network,
                                     std::vector<Residue> params)
    : Preconditioner(F, n), network_(network), layers_(0), params_(std::move(params))
{
    if (network == 0 || !std::has_single_bit(network) || network > n)
        throw DimensionError("butterfly network size must be a power of two not exceeding n");
    layers_ = static_cast<std::size_t>(std::countr_zero(network));
    if (params_.size() != switch_count(network))
        throw DimensionError("butterfly: wrong number of switch parameters");
}

std::size_t ButterflyOperator::switch_count(std::size_t network) noexcept
{
    return network < 2 ? 0 : network / 2 * static_cast<std::size_t>(std::countr_zero(network));
}

std::shared_ptr<ButterflyOperator> ButterflyOperator::random(const PrimeField& F, std::size_t n,
                                                             std::size_t network, Rng& rng)
{
    std::vector<Residue> params(switch_count(network));
    for (auto& a : params)
        a = rng.nonzero(F);
    return std::make_shared<ButterflyOperator>(F, n, network, std::move(params));
}

namespace
{

// The 2x2 switch [[m00, m01], [m10, m11]] applied to rows i and j of x.
void apply_switch(const PrimeField& F, DenseMatrix& x, std::size_t i, std::size_t j, Residue m00, Residue m01,
                  Residue m10, Residue m11)
{
    auto ri = x.row(i);
    auto rj = x.row(j);
    for (std::size_t k = 0; k < ri.size(); ++k) {
        const Residue a = ri[k], b = rj[k];
        ri[k] = (m00 * a + m01 * b) % F.modulus();
        rj[k] = (m10 * a + m11 * b) % F.modulus();
    }
}

} // namespace

DenseMatrix ButterflyOperator::do_apply(const DenseMatrix& x, bool transposed) const
{
    const PrimeField& F = field();
    DenseMatrix y = x;
    const std::size_t per_layer = network_ / 2;
    for (std::size_t step = 0; step < layers_; ++step) {
        // U = S_{L-1} ... S_0, so U^T runs the layers in reverse.
        const std::size_t l = transposed ? layers_ - 1 - step : step;
        const std::size_t h = std::size_t{1} << l;
        std::size_t k = l * per_layer;
        for (std::size_t i = 0; i < network_; ++i) {
            if (i & h)
                continue;
            const Residue a = params_[k++];
            const Residue a1 = F.add(a, 1);
            if (transposed)
                apply_switch(F, y, i, i + h, 1, 1, a, a1);
            else
                apply_switch(F, y, i, i + h, 1, a, 1, a1);
        }
    }
    return y;
}

DenseMatrix ButterflyOperator::do_solve(const DenseMatrix& x, bool transposed) const
{
    const PrimeField& F = field();
    DenseMatrix y = x;
    const std::size_t per_layer = network_ / 2;
    for (std::size_t step = 0; step < layers_; ++step) {
        // U^-1 = S_0^-1 ... S_{L-1}^-1 runs the layers in reverse; U^-T forward.
        const std::size_t l = transposed ? step : layers_ - 1 - step;
        const std::size_t h = std::size_t{1} << l;
        std::size_t k = l * per_layer;
        for (std::size_t i = 0; i < network_; ++i) {
            if (i & h)
                continue;
            const Residue a = params_[k++];
            const Residue a1 = F.add(a, 1);
            const Residue na = F.neg(a), m1 = F.neg(1);
            if (transposed)
                apply_switch(F, y, i, i + h, a1, m1, na, 1);
            else
                apply_switch(F, y, i, i + h, a1, na, m1, 1);
        }
    }
    return y;
}

// ---------------------------------------------------------------- Toeplitz

ToeplitzUnitOperator::ToeplitzUnitOperator(const PrimeField& F, Shape shape, std::vector<Residue> coeffs)
    : Preconditioner(F, coeffs.size()), shape_(shape), c_(std::move(coeffs))
{
    if (c_.empty() || c_[0] != 1)
        throw std::invalid_argument("unit triangular Toeplitz factor needs leading coefficient 1");
    for (auto& v : c_)
        v %= F.modulus();
}

std::shared_ptr<ToeplitzUnitOperator> ToeplitzUnitOperator::random(const PrimeField& F, std::size_t n,
                                                                   Shape shape, Rng& rng)
{
    std::vector<Residue> c(n);
    if (n > 0)
        c[0] = 1;
    for (std::size_t i = 1; i < n; ++i)
        c[i] = rng.nonzero(F);
    return std::make_shared<ToeplitzUnitOperator>(F, shape, std::move(c));
}

namespace
{

// Lower unit Toeplitz L with first column c: L x, L^T x, and the two solves.
// `lower` selects L vs L^T.
DenseMatrix toeplitz_mul(const PrimeField& F, const std::vector<Residue>& c, const DenseMatrix& x, bool lower)
{
    const std::size_t n = x.rows(), k = x.cols();
    DenseMatrix y(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        auto yi = y.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t d;
            if (lower) {
                if (j > i)
                    break;
                d = i - j;
            } else {
                if (j < i)
                    continue;
                d = j - i;
            }
            const Residue cf = c[d];
            if (cf == 0)
                continue;
            const auto xj = x.row(j);
            for (std::size_t t = 0; t < k; ++t)
                yi[t] = F.fma(cf, xj[t], yi[t]);
        }
    }
    return y;
}

DenseMatrix toeplitz_solve(const PrimeField& F, const std::vector<Residue>& c, const DenseMatrix& x, bool lower)
{
    const std::size_t n = x.rows(), k = x.cols();
    DenseMatrix y = x;
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t i = lower ? step : n - 1 - step;
        auto yi = y.row(i);
        // Forward substitution for L, backward for L^T; the diagonal is 1.
        if (lower) {
            for (std::size_t j = 0; j < i; ++j) {
                const Residue cf = F.neg(c[i - j]);
                const auto yj = y.row(j);
                for (std::size_t t = 0; t < k; ++t)
                    yi[t] = F.fma(cf, yj[t], yi[t]);
            }
        } else {
            for (std::size_t j = i + 1; j < n; ++j) {
                const Residue cf = F.neg(c[j - i]);
                const auto yj = y.row(j);
                for (std::size_t t = 0; t < k; ++t)
                    yi[t] = F.fma(cf, yj[t], yi[t]);
            }
        }
    }
    return y;
}

} // namespace

DenseMatrix ToeplitzUnitOperator::do_apply(const DenseMatrix& x, bool transposed) const
{
    // An upper factor with first row c is the transpose of the lower one with first column c.
    const bool lower = (shape_ == Shape::Lower) != transposed;
    return toeplitz_mul(field(), c_, x, lower);
}

DenseMatrix ToeplitzUnitOperator::do_solve(const DenseMatrix& x, bool transposed) const
{
    const bool lower = (shape_ == Shape::Lower) != transposed;
    return toeplitz_solve(field(), c_, x, lower);
}

// ---------------------------------------------------------------- composition

namespace
{

std::size_t common_dim(const std::vector<BlackBoxPtr>& ops)
{
    if (ops.empty())
        throw DimensionError("cannot compose an empty operator list");
    const std::size_t n = ops.front()->dim();
    for (const auto& op : ops)
        if (op->dim() != n || !(op->field() == ops.front()->field()))
            throw DimensionError("composed operators must share dimension and field");
    return n;
}

} // namespace

CompositeOperator::CompositeOperator(std::vector<BlackBoxPtr> ops)
    : BlackBox(ops.empty() ? PrimeField(3) : ops.front()->field(), common_dim(ops)), ops_(std::move(ops))
{
}

DenseMatrix CompositeOperator::do_apply(const DenseMatrix& x, bool transposed) const
{
    DenseMatrix y = x;
    if (transposed) {
        for (const auto& op : ops_)
            y = op->apply_transpose(y);
    } else {
        for (auto it = ops_.rbegin(); it != ops_.rend(); ++it)
            y = (*it)->apply(y);
    }
    return y;
}

BlackBoxPtr compose(std::vector<BlackBoxPtr> ops)
{
    return std::make_shared<CompositeOperator>(std::move(ops));
}

PaddedOperator::PaddedOperator(BlackBoxPtr inner, std::size_t padded_dim)
    : BlackBox(inner->field(), padded_dim), inner_(std::move(inner))
{
    if (padded_dim < inner_->dim())
        throw DimensionError("padded dimension is smaller than the operator");
}

DenseMatrix PaddedOperator::do_apply(const DenseMatrix& x, bool transposed) const
{
    const std::size_t n = inner_->dim();
    DenseMatrix y = x;
    if (n == 0)
        return y;
    const DenseMatrix top = x.block(0, 0, n, x.cols());
    y.set_block(0, 0, transposed ? inner_->apply_transpose(top) : inner_->apply(top));
    return y;
}

LeadingMinorOperator::LeadingMinorOperator(BlackBoxPtr inner, std::size_t r)
    : BlackBox(inner->field(), r), inner_(std::move(inner))
{
    if (r > inner_->dim())
        throw DimensionError("leading minor larger than the operator");
}

DenseMatrix LeadingMinorOperator::do_apply(const DenseMatrix& x, bool transposed) const
{
    DenseMatrix full(inner_->dim(), x.cols());
    full.set_block(0, 0, x);
    const DenseMatrix y = transposed ? inner_->apply_transpose(full) : inner_->apply(full);
    return y.block(0, 0, dim(), x.cols());
}

} // namespace bbla

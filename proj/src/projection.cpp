#include "bbla/projection.hpp"

#include "bbla/errors.hpp"

namespace bbla
{

BlockProjection::BlockProjection(std::size_t n, std::size_t s) : n_(n), s_(s)
{
    if (s == 0 || n % s != 0)
        throw DimensionError("block size " + std::to_string(s) + " does not divide " + std::to_string(n));
}

DenseMatrix BlockProjection::materialize() const
{
    DenseMatrix u(n_, s_);
    for (std::size_t i = 0; i < n_; ++i)
        u(i, i % s_) = 1;
    return u;
}

DenseMatrix u_contract(const PrimeField& F, const BlockProjection& u, const DenseMatrix& w)
{
    if (w.rows() != u.n())
        throw DimensionError("u_contract: expected " + std::to_string(u.n()) + " rows");
    const std::size_t s = u.s(), k = w.cols();
    DenseMatrix r(s, k);
    for (std::size_t i = 0; i < u.n(); ++i) {
        auto dst = r.row(i % s);
        const auto src = w.row(i);
        for (std::size_t j = 0; j < k; ++j)
            dst[j] = F.add(dst[j], src[j]);
    }
    return r;
}

DenseMatrix u_expand(const BlockProjection& u, const DenseMatrix& m)
{
    if (m.rows() != u.s())
        throw DimensionError("u_expand: expected " + std::to_string(u.s()) + " rows");
    DenseMatrix r(u.n(), m.cols());
    for (std::size_t b = 0; b < u.m(); ++b)
        r.set_block(b * u.s(), 0, m);
    return r;
}

DenseMatrix KrylovSequence::assemble() const
{
    return side == KrylovSide::Right ? hstack(blocks) : vstack(blocks);
}

KrylovSequence krylov_sequence(const BlackBox& b, const BlockProjection& u, std::size_t count, KrylovSide side)
{
    if (count == 0)
        throw DimensionError("krylov_sequence: count must be positive");
    if (b.dim() != u.n())
        throw DimensionError("krylov_sequence: operator and projection dimensions differ");
    KrylovSequence seq{side, {}};
    seq.blocks.reserve(count);
    DenseMatrix x = u.materialize();
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0)
            x = side == KrylovSide::Right ? b.apply(x) : b.apply_transpose(x);
        seq.blocks.push_back(side == KrylovSide::Right ? x : x.transposed());
    }
    return seq;
}

DenseMatrix krylov_apply_right(const BlackBox& b, const BlockProjection& u, const DenseMatrix& m)
{
    if (m.rows() != u.n() || b.dim() != u.n())
        throw DimensionError("krylov_apply_right: dimension mismatch");
    const PrimeField& F = b.field();
    const std::size_t s = u.s(), k = m.cols();
    DenseMatrix acc = u_expand(u, m.block((u.m() - 1) * s, 0, s, k));
    for (std::size_t i = u.m() - 1; i-- > 0;) {
        acc = b.apply(acc);
        add_inplace(F, acc, u_expand(u, m.block(i * s, 0, s, k)));
    }
    return acc;
}

DenseMatrix krylov_apply_left(const BlackBox& b, const BlockProjection& u, const DenseMatrix& m)
{
    if (m.rows() != u.n() || b.dim() != u.n())
        throw DimensionError("krylov_apply_left: dimension mismatch");
    const PrimeField& F = b.field();
    const std::size_t s = u.s();
    DenseMatrix result(u.n(), m.cols());
    DenseMatrix w = m;
    for (std::size_t i = 0; i < u.m(); ++i) {
        if (i > 0)
            w = b.apply(w);
        result.set_block(i * s, 0, u_contract(F, u, w));
    }
    return result;
}

EfficientProjection efficient_projection_triple(const BlackBox& a, std::size_t s, std::uint64_t seed)
{
    const PrimeField& F = a.field();
    const std::size_t n = a.dim();
    const BlockProjection u(n, s);
    Rng rng(seed);
    EfficientProjection ep;
    ep.seed = seed;
    ep.lower = ToeplitzUnitOperator::random(F, n, ToeplitzUnitOperator::Shape::Lower, rng);
    ep.upper = ToeplitzUnitOperator::random(F, n, ToeplitzUnitOperator::Shape::Upper, rng);
    ep.diagonal = DiagonalOperator::random_blocks(F, u.m(), s, rng);
    ep.r = compose({ep.lower, ep.diagonal, ep.diagonal, ep.upper});

    const DenseMatrix um = u.materialize();
    ep.v_hat = ep.lower->apply(ep.diagonal->apply(um));
    ep.u_hat = ep.lower->apply_inverse(ep.diagonal->apply_inverse(um), true).transposed();
    return ep;
}

} // namespace bbla

#ifndef BBLA_RANDOM_HPP
#define BBLA_RANDOM_HPP

#include <cstdint>
#include <random>

#include "bbla/field.hpp"

namespace bbla
{

/// splitmix64 finalizer; used to derive independent seeds from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return mix_seed(seed ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

///
/// Seeded generator for field elements. Sampling is by rejection so the
/// sequence depends only on the mt19937_64 stream, not on the standard
/// library's distribution implementation.
///
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    Residue element(const PrimeField& F) { return below(F.modulus()); }
    Residue nonzero(const PrimeField& F) { return 1 + below(F.modulus() - 1); }

private:
    std::mt19937_64 engine_;
};

} // namespace bbla

#endif // BBLA_RANDOM_HPP

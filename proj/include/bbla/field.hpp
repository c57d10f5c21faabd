#ifndef BBLA_FIELD_HPP
#define BBLA_FIELD_HPP

#include <cstdint>

namespace bbla
{

/// A residue modulo the field prime, always kept in [0, p).
using Residue = std::uint64_t;

/// Moduli are limited to this many bits so that a product of two residues
/// fits in 62 bits and four of them can be accumulated in a 64-bit word
/// before a reduction is required.
inline constexpr unsigned kMaxModulusBits = 31;

/// Largest prime below 2^31.
inline constexpr Residue kDefaultPrime = 2147483629;

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(std::uint64_t n) noexcept;

/// Largest prime strictly below `bound`, or 0 if there is none.
std::uint64_t previous_prime(std::uint64_t bound) noexcept;

///
/// Arithmetic in Z/pZ for a word-size prime p (3 <= p < 2^kMaxModulusBits).
///
class PrimeField
{
public:
    /// Throws std::invalid_argument if `p` is out of range or composite.
    explicit PrimeField(Residue p);

    Residue modulus() const noexcept { return p_; }

    Residue add(Residue a, Residue b) const noexcept
    {
        const Residue s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Residue mul(Residue a, Residue b) const noexcept { return (a * b) % p_; }
    /// a*b + c
    Residue fma(Residue a, Residue b, Residue c) const noexcept { return (a * b + c) % p_; }

    /// Extended Euclid. Throws NotInvertible for a == 0 (mod p).
    Residue inv(Residue a) const;
    Residue pow(Residue a, std::uint64_t e) const noexcept;

    /// Map a signed integer to its residue.
    Residue reduce(std::int64_t v) const noexcept;
    /// Representative in (-p/2, p/2].
    std::int64_t balanced(Residue a) const noexcept;

    bool operator==(const PrimeField& other) const noexcept { return p_ == other.p_; }

private:
    Residue p_;
};

} // namespace bbla

#endif // BBLA_FIELD_HPP

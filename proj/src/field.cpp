#include "bbla/field.hpp"

#include <stdexcept>
#include <string>

#include "bbla/errors.hpp"

namespace bbla
{
namespace
{

using u128 = unsigned __int128;

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) noexcept
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1)
            r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2)
        return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0)
            return n == q;
    }
    std::uint64_t d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // These bases are sufficient for every n < 2^64.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (unsigned i = 1; i < r; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

std::uint64_t previous_prime(std::uint64_t bound) noexcept
{
    while (bound > 2) {
        --bound;
        if (is_prime(bound))
            return bound;
    }
    return 0;
}

PrimeField::PrimeField(Residue p) : p_(p)
{
    if (p < 3 || p >= (Residue{1} << kMaxModulusBits))
        throw std::invalid_argument("modulus " + std::to_string(p) + " outside [3, 2^" +
                                    std::to_string(kMaxModulusBits) + ")");
    if (!is_prime(p))
        throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
}

Residue PrimeField::inv(Residue a) const
{
    a %= p_;
    if (a == 0)
        throw NotInvertible("0 has no inverse modulo " + std::to_string(p_));
    std::int64_t r0 = static_cast<std::int64_t>(p_), r1 = static_cast<std::int64_t>(a);
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    return reduce(t0);
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const noexcept
{
    Residue r = 1;
    a %= p_;
    while (e) {
        if (e & 1)
            r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Residue PrimeField::reduce(std::int64_t v) const noexcept
{
    const std::int64_t p = static_cast<std::int64_t>(p_);
    std::int64_t r = v % p;
    if (r < 0)
        r += p;
    return static_cast<Residue>(r);
}

std::int64_t PrimeField::balanced(Residue a) const noexcept
{
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - static_cast<std::int64_t>(p_)
                      : static_cast<std::int64_t>(a);
}

} // namespace bbla

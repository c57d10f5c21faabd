#ifndef BBLA_ERRORS_HPP
#define BBLA_ERRORS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbla
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

/// Zero has no inverse modulo p.
class NotInvertible : public Error
{
public:
    using Error::Error;
};

/// Dense elimination met a column with no usable pivot.
class SingularError : public Error
{
public:
    SingularError(std::size_t column)
        : Error("matrix is singular: column " + std::to_string(column) +
                " is dependent on the preceding columns"),
          column_(column)
    {
    }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class FieldTooSmall : public Error
{
public:
    FieldTooSmall(std::uint64_t p, std::uint64_t required)
        : Error("prime " + std::to_string(p) + " is too small: need p > " +
                std::to_string(required) + " (field extensions are not supported)"),
          prime_(p), required_(required)
    {
    }
    std::uint64_t prime() const noexcept { return prime_; }
    std::uint64_t required_bound() const noexcept { return required_; }

private:
    std::uint64_t prime_;
    std::uint64_t required_;
};

/// One of the Pade residues R, R*, V(0), V*(0) is singular.
class ResidueSingular : public Error
{
public:
    using Error::Error;
};

/// The off-diagonal representation failed its check against H.
class HankelSingular : public Error
{
public:
    using Error::Error;
};

class RetriesExhausted : public Error
{
public:
    using Error::Error;
};

/// The input is singular and `kernel_vector()` proves it: A * kernel_vector() = 0.
class SingularMatrix : public Error
{
public:
    SingularMatrix(std::vector<std::uint64_t> kernel)
        : Error("matrix is singular (kernel vector certificate attached)"),
          kernel_(std::move(kernel))
    {
    }
    const std::vector<std::uint64_t>& kernel_vector() const noexcept { return kernel_; }

private:
    std::vector<std::uint64_t> kernel_;
};

class DegenerateSequence : public Error
{
public:
    using Error::Error;
};

class InsufficientPrimes : public Error
{
public:
    using Error::Error;
};

/// Matrix Market input errors.
class MatrixMarketError : public Error
{
public:
    using Error::Error;
};

class MalformedHeader : public MatrixMarketError
{
public:
    using MatrixMarketError::MatrixMarketError;
};

class IndexOutOfRange : public MatrixMarketError
{
public:
    using MatrixMarketError::MatrixMarketError;
};

class NonSquareWhereSquareRequired : public MatrixMarketError
{
public:
    using MatrixMarketError::MatrixMarketError;
};

} // namespace bbla

#endif // BBLA_ERRORS_HPP

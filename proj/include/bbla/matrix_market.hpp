#ifndef BBLA_MATRIX_MARKET_HPP
#define BBLA_MATRIX_MARKET_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "bbla/blackbox.hpp"
#include "bbla/dense.hpp"
#include "bbla/determinant.hpp"

namespace bbla
{

///
/// ### Matrix Market
///
/// Reader and writer for the `matrix coordinate` and `matrix array` formats
/// with integer, real (integral values only) or pattern fields and general,
/// symmetric or skew-symmetric storage. Entries are kept as signed integers
/// and reduced modulo p only when an operator is built.
///
enum class MMFormat
{
    Coordinate,
    Array
};

enum class MMField
{
    Integer,
    Real,
    Pattern
};

enum class MMSymmetry
{
    General,
    Symmetric,
    SkewSymmetric
};

struct MatrixMarketData
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    MMFormat format = MMFormat::Coordinate;
    MMField field = MMField::Integer;
    MMSymmetry symmetry = MMSymmetry::General;
    /// Zero-based entries in file order, before symmetric expansion. Array
    /// files list every stored position, zeros included.
    std::vector<IntegerEntry> entries;

    /// Entries with the symmetric counterparts added.
    std::vector<IntegerEntry> expanded() const;
};

/// Throws MalformedHeader, IndexOutOfRange or MatrixMarketError.
MatrixMarketData read_matrix_market(std::istream& in);
MatrixMarketData read_matrix_market_file(const std::string& path);

/// Throws NonSquareWhereSquareRequired for a non-square matrix.
std::shared_ptr<SparseOperator> to_sparse_operator(const PrimeField& F, const MatrixMarketData& mm);
DenseMatrix to_dense_matrix(const PrimeField& F, const MatrixMarketData& mm);
IntegerMatrix to_integer_matrix(const MatrixMarketData& mm);

/// Writes the header, size line and entries exactly as stored.
void write_matrix_market(std::ostream& out, const MatrixMarketData& mm);
/// `matrix array integer general`, column-major, residues in [0, p).
void write_matrix_market_array(std::ostream& out, const DenseMatrix& m, const std::string& comment = {});

/// FNV-1a 64-bit digest as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

} // namespace bbla

#endif // BBLA_MATRIX_MARKET_HPP

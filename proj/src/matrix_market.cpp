#include "bbla/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bbla/errors.hpp"

namespace bbla
{

namespace
{

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& line)
{
    std::istringstream is(line);
    std::vector<std::string> tok;
    for (std::string t; is >> t;)
        tok.push_back(t);
    return tok;
}

std::size_t parse_size(const std::string& t, const char* what)
{
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw MatrixMarketError(std::string("invalid ") + what + " '" + t + "'");
    return v;
}

std::int64_t parse_value(const std::string& t, MMField field)
{
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec == std::errc() && ptr == t.data() + t.size())
        return v;
    if (field == MMField::Real) {
        char* end = nullptr;
        const double d = std::strtod(t.c_str(), &end);
        if (end == t.c_str() + t.size() && std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9.0e15)
            return static_cast<std::int64_t>(d);
        throw MatrixMarketError("real entry '" + t + "' is not an integer");
    }
    throw MatrixMarketError("invalid integer entry '" + t + "'");
}

const char* format_name(MMFormat f)
{
    return f == MMFormat::Coordinate ? "coordinate" : "array";
}

const char* field_name(MMField f)
{
    switch (f) {
    case MMField::Integer:
        return "integer";
    case MMField::Real:
        return "real";
    default:
        return "pattern";
    }
}

const char* symmetry_name(MMSymmetry s)
{
    switch (s) {
    case MMSymmetry::General:
        return "general";
    case MMSymmetry::Symmetric:
        return "symmetric";
    default:
        return "skew-symmetric";
    }
}

} // namespace

MatrixMarketData read_matrix_market(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw MalformedHeader("empty Matrix Market input");
    const auto head = split(line);
    if (head.size() != 5 || head[0] != "%%MatrixMarket" || lower(head[1]) != "matrix")
        throw MalformedHeader("expected '%%MatrixMarket matrix <format> <field> <symmetry>'");
    MatrixMarketData mm;
    const std::string fmt = lower(head[2]), fld = lower(head[3]), sym = lower(head[4]);
    if (fmt == "coordinate")
        mm.format = MMFormat::Coordinate;
    else if (fmt == "array")
        mm.format = MMFormat::Array;
    else
        throw MalformedHeader("unsupported format '" + head[2] + "'");
    if (fld == "integer")
        mm.field = MMField::Integer;
    else if (fld == "real")
        mm.field = MMField::Real;
    else if (fld == "pattern" && mm.format == MMFormat::Coordinate)
        mm.field = MMField::Pattern;
    else
        throw MalformedHeader("unsupported field '" + head[3] + "'");
    if (sym == "general")
        mm.symmetry = MMSymmetry::General;
    else if (sym == "symmetric")
        mm.symmetry = MMSymmetry::Symmetric;
    else if (sym == "skew-symmetric")
        mm.symmetry = MMSymmetry::SkewSymmetric;
    else
        throw MalformedHeader("unsupported symmetry '" + head[4] + "'");

    std::vector<std::string> size;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%')
            continue;
        size = split(line);
        if (!size.empty())
            break;
    }
    const std::size_t want = mm.format == MMFormat::Coordinate ? 3 : 2;
    if (size.size() != want)
        throw MalformedHeader("malformed size line");
    mm.rows = parse_size(size[0], "row count");
    mm.cols = parse_size(size[1], "column count");
    if (mm.symmetry != MMSymmetry::General && mm.rows != mm.cols)
        throw NonSquareWhereSquareRequired("symmetric storage requires a square matrix");

    std::vector<std::pair<std::size_t, std::size_t>> positions; // array storage order
    std::size_t expected = 0;
    if (mm.format == MMFormat::Coordinate) {
        expected = parse_size(size[2], "entry count");
    }
    else {
        for (std::size_t j = 0; j < mm.cols; ++j)
            for (std::size_t i = 0; i < mm.rows; ++i) {
                if (mm.symmetry == MMSymmetry::Symmetric && i < j)
                    continue;
                if (mm.symmetry == MMSymmetry::SkewSymmetric && i <= j)
                    continue;
                positions.emplace_back(i, j);
            }
        expected = positions.size();
    }
    mm.entries.reserve(expected);
    while (mm.entries.size() < expected && std::getline(in, line)) {
        if (line.empty() || line[0] == '%')
            continue;
        const auto tok = split(line);
        if (tok.empty())
            continue;
        if (mm.format == MMFormat::Array) {
            if (tok.size() != 1)
                throw MatrixMarketError("array entry lines hold one value");
            const auto [i, j] = positions[mm.entries.size()];
            mm.entries.push_back({i, j, parse_value(tok[0], mm.field)});
            continue;
        }
        const std::size_t need = mm.field == MMField::Pattern ? 2 : 3;
        if (tok.size() != need)
            throw MatrixMarketError("coordinate entry line '" + line + "' has the wrong number of fields");
        const std::size_t i = parse_size(tok[0], "row index"), j = parse_size(tok[1], "column index");
        if (i == 0 || j == 0 || i > mm.rows || j > mm.cols)
            throw IndexOutOfRange("entry (" + tok[0] + ", " + tok[1] + ") is outside " + std::to_string(mm.rows) +
                                  " x " + std::to_string(mm.cols));
        if (mm.symmetry != MMSymmetry::General && i < j)
            throw IndexOutOfRange("symmetric storage lists the lower triangle only");
        if (mm.symmetry == MMSymmetry::SkewSymmetric && i == j)
            throw IndexOutOfRange("skew-symmetric storage has no diagonal entries");
        const std::int64_t v = mm.field == MMField::Pattern ? 1 : parse_value(tok[2], mm.field);
        mm.entries.push_back({i - 1, j - 1, v});
    }
    if (mm.entries.size() != expected)
        throw MatrixMarketError("expected " + std::to_string(expected) + " entries, found " +
                                std::to_string(mm.entries.size()));
    return mm;
}

MatrixMarketData read_matrix_market_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw MatrixMarketError("cannot open '" + path + "'");
    return read_matrix_market(in);
}

std::vector<IntegerEntry> MatrixMarketData::expanded() const
{
    std::vector<IntegerEntry> out;
    out.reserve(entries.size() * (symmetry == MMSymmetry::General ? 1 : 2));
    for (const auto& e : entries) {
        out.push_back(e);
        if (symmetry != MMSymmetry::General && e.row != e.col)
            out.push_back({e.col, e.row, symmetry == MMSymmetry::Symmetric ? e.value : -e.value});
    }
    return out;
}

std::shared_ptr<SparseOperator> to_sparse_operator(const PrimeField& F, const MatrixMarketData& mm)
{
    return reduce_integer_matrix(F, to_integer_matrix(mm));
}

DenseMatrix to_dense_matrix(const PrimeField& F, const MatrixMarketData& mm)
{
    DenseMatrix d(mm.rows, mm.cols);
    for (const auto& e : mm.expanded())
        d(e.row, e.col) = F.add(d(e.row, e.col), F.reduce(e.value));
    return d;
}

IntegerMatrix to_integer_matrix(const MatrixMarketData& mm)
{
    if (mm.rows != mm.cols)
        throw NonSquareWhereSquareRequired("expected a square matrix, got " + std::to_string(mm.rows) + " x " +
                                           std::to_string(mm.cols));
    IntegerMatrix a{mm.rows, {}};
    for (const auto& e : mm.expanded())
        if (e.value != 0)
            a.entries.push_back(e);
    return a;
}

void write_matrix_market(std::ostream& out, const MatrixMarketData& mm)
{
    out << "%%MatrixMarket matrix " << format_name(mm.format) << ' ' << field_name(mm.field) << ' '
        << symmetry_name(mm.symmetry) << '\n';
    if (mm.format == MMFormat::Coordinate) {
        out << mm.rows << ' ' << mm.cols << ' ' << mm.entries.size() << '\n';
        for (const auto& e : mm.entries) {
            out << e.row + 1 << ' ' << e.col + 1;
            if (mm.field != MMField::Pattern)
                out << ' ' << e.value;
            out << '\n';
        }
    }
    else {
        out << mm.rows << ' ' << mm.cols << '\n';
        for (const auto& e : mm.entries)
            out << e.value << '\n';
    }
}

void write_matrix_market_array(std::ostream& out, const DenseMatrix& m, const std::string& comment)
{
    out << "%%MatrixMarket matrix array integer general\n";
    if (!comment.empty())
        out << "% " << comment << '\n';
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
            out << m(i, j) << '\n';
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

} // namespace bbla

#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bbla/determinant.hpp"
#include "bbla/errors.hpp"
#include "bbla/inverse.hpp"
#include "bbla/matrix_market.hpp"
#include "bbla/nullrank.hpp"

namespace bbla::cli
{

namespace
{

using Json = nlohmann::ordered_json;

struct Options
{
    std::string input;
    std::string rhs;
    std::string target;
    std::uint64_t prime = kDefaultPrime;
    std::size_t block_size = 0;
    std::uint64_t seed = 0;
    std::size_t retries = 8;
    bool no_verify = false;
    std::string out_path;
    bool json = false;
    bool timing = false;
    bool crt = false;
    std::size_t confirm = 1;
    std::vector<std::uint64_t> primes;
    std::vector<std::size_t> sizes{64, 128, 256, 512};
    std::size_t density = 5;
};

struct Input
{
    MatrixMarketData mm;
    std::string digest;
};

Input load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw MatrixMarketError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    std::istringstream is(bytes);
    return {read_matrix_market(is), fnv1a_hex(bytes)};
}

Json base_report(const std::string& command)
{
    Json r;
    r["schema_version"] = kReportSchemaVersion;
    r["command"] = command;
    return r;
}

void add_stats(Json& r, const InversionStats& st, bool timing)
{
    r["s"] = st.s;
    r["m"] = st.m;
    r["padded_dim"] = st.padded_dim;
    r["attempts"] = st.attempts;
    r["retries"] = st.retries();
    r["bb_apply_count"] = st.bb_apply_count;
    r["attempt_applications"] = st.attempt_applications;
    r["failures"] = st.failures;
    r["verified"] = st.verified;
    if (timing)
        r["wall_time"] = st.wall_time;
}

/// Matrix output: --out if given, otherwise stdout unless the report owns stdout.
void emit_matrix(const Options& o, std::ostream& out, const DenseMatrix& m, const std::string& comment)
{
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        if (!f)
            throw MatrixMarketError("cannot write '" + o.out_path + "'");
        write_matrix_market_array(f, m, comment);
    }
    else if (!o.json) {
        write_matrix_market_array(out, m, comment);
    }
}

void emit_report(const Options& o, std::ostream& out, const Json& r)
{
    if (o.json)
        out << r.dump(2) << '\n';
}

std::string prime_comment(std::uint64_t p)
{
    return "residues modulo " + std::to_string(p);
}

InversionConfig inversion_config(const Options& o)
{
    InversionConfig c;
    c.block_size = o.block_size;
    c.seed = o.seed;
    c.max_retries = o.retries;
    c.verify = !o.no_verify;
    return c;
}

int cmd_invert(const Options& o, Json& r, std::ostream& out, bool apply)
{
    const PrimeField F(o.prime);
    const Input in = load(o.input);
    const auto a = to_sparse_operator(F, in.mm);
    r["input_digest"] = in.digest;
    r["n"] = a->dim();
    r["prime"] = o.prime;
    r["seed"] = o.seed;
    r["no_verify"] = o.no_verify;
    std::optional<DenseMatrix> rhs;
    if (apply) {
        const Input b = load(o.rhs);
        r["rhs_digest"] = b.digest;
        rhs = to_dense_matrix(F, b.mm);
        r["rhs_cols"] = rhs->cols();
    }
    try {
        const InversionResult res =
            apply ? blackbox_inverse_apply(*a, *rhs, inversion_config(o)) : blackbox_inverse(*a, inversion_config(o));
        add_stats(r, res.stats, o.timing);
        r["outcome"] = "success";
        emit_matrix(o, out, res.matrix, prime_comment(o.prime));
        return kSuccess;
    }
    catch (const SingularMatrix& e) {
        r["outcome"] = "singular";
        r["message"] = e.what();
        r["kernel_vector"] = e.kernel_vector();
        const auto& k = e.kernel_vector();
        emit_matrix(o, out, DenseMatrix(k.size(), 1, k), "kernel vector certificate, " + prime_comment(o.prime));
        return kSingular;
    }
}

int cmd_nullspace(const Options& o, Json& r, std::ostream& out, bool rank_only)
{
    const PrimeField F(o.prime);
    const Input in = load(o.input);
    const auto a = to_sparse_operator(F, in.mm);
    r["input_digest"] = in.digest;
    r["n"] = a->dim();
    r["prime"] = o.prime;
    r["seed"] = o.seed;
    r["no_verify"] = o.no_verify;
    NullspaceConfig c;
    c.seed = o.seed;
    c.max_retries = o.retries;
    c.block_size = o.block_size;
    const RankCertificate cert = nullspace_rank(*a, c);
    r["rank"] = cert.rank;
    r["nullity"] = a->dim() - cert.rank;
    r["attempts"] = cert.attempts;
    r["retries"] = cert.attempts - 1;
    r["bb_apply_count"] = cert.bb_apply_count;
    r["failures"] = cert.failures;
    r["verified"] = true;
    r["outcome"] = "success";
    if (rank_only) {
        if (!o.json)
            out << "rank " << cert.rank << '\n';
    }
    else {
        emit_matrix(o, out, cert.nullspace, prime_comment(o.prime));
    }
    return kSuccess;
}

int cmd_det(const Options& o, Json& r, std::ostream& out)
{
    const Input in = load(o.input);
    r["input_digest"] = in.digest;
    r["n"] = in.mm.rows;
    r["seed"] = o.seed;
    r["monte_carlo"] = true;
    r["confirm"] = o.confirm;
    DeterminantConfig c;
    c.block_size = o.block_size;
    c.seed = o.seed;
    c.max_retries = o.retries;
    c.confirm = o.confirm;
    if (o.crt) {
        const IntegerMatrix im = to_integer_matrix(in.mm);
        const CrtResult res = det_integer_crt(im, o.primes, c);
        r["hadamard_bound"] = hadamard_bound(im).str();
        r["primes"] = res.primes;
        r["residues"] = res.residues;
        r["bb_apply_count"] = res.bb_apply_count;
        r["det"] = res.value.str();
        r["outcome"] = "success";
        if (!o.json)
            out << "det " << res.value.str() << '\n';
        return kSuccess;
    }
    const PrimeField F(o.prime);
    const auto a = to_sparse_operator(F, in.mm);
    const DeterminantResult res = det_mod_p(*a, c);
    r["prime"] = o.prime;
    r["s"] = res.s;
    r["m"] = res.m;
    r["padded_dim"] = res.padded_dim;
    r["attempts"] = res.attempts;
    r["retries"] = res.attempts - o.confirm;
    r["bb_apply_count"] = res.bb_apply_count;
    r["failures"] = res.failures;
    r["certified_zero"] = res.certified_zero;
    r["det"] = res.value;
    r["outcome"] = "success";
    if (!o.json)
        out << "det " << res.value << '\n';
    return kSuccess;
}

int cmd_bench(const Options& o, Json& r, std::ostream& out)
{
    if (o.target != "invert")
        throw std::invalid_argument("unknown bench target '" + o.target + "' (expected 'invert')");
    if (o.sizes.size() < 2)
        throw std::invalid_argument("bench needs at least two sizes");
    const PrimeField F(o.prime);
    r["target"] = o.target;
    r["prime"] = o.prime;
    r["seed"] = o.seed;
    r["density"] = o.density;
    Json points = Json::array();
    std::vector<double> xs, ys;
    std::ostringstream csv;
    csv << "n,s,m,padded_dim,applications,bound_3mn\n";
    for (std::size_t n : o.sizes) {
        Rng rng(derive_seed(o.seed, n));
        const auto a = SparseOperator::random(F, n, o.density, rng);
        InversionConfig c = inversion_config(o);
        c.seed = derive_seed(o.seed, n + 1);
        const InversionResult res = blackbox_inverse(*a, c);
        const auto& st = res.stats;
        const std::uint64_t apps = st.attempt_applications.back();
        Json p;
        p["n"] = n;
        p["s"] = st.s;
        p["m"] = st.m;
        p["padded_dim"] = st.padded_dim;
        p["applications"] = apps;
        p["bound_3mn"] = 3 * st.m * n;
        p["attempts"] = st.attempts;
        if (o.timing)
            p["wall_time"] = st.wall_time;
        points.push_back(p);
        csv << n << ',' << st.s << ',' << st.m << ',' << st.padded_dim << ',' << apps << ',' << 3 * st.m * n << '\n';
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(static_cast<double>(apps)));
    }
    const double k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    std::ostringstream fixed;
    fixed << std::fixed << std::setprecision(4) << slope;
    r["points"] = points;
    r["slope"] = std::stod(fixed.str());
    r["outcome"] = "success";
    csv << "# slope " << fixed.str() << '\n';
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        f << csv.str();
    }
    else if (!o.json) {
        out << csv.str();
    }
    return kSuccess;
}

void add_common(CLI::App* app, Options& o)
{
    app->add_option("--prime", o.prime, "Prime modulus")->capture_default_str();
    app->add_option("--block-size", o.block_size, "Blocking factor s (0 = automatic)")->capture_default_str();
    app->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    app->add_option("--retries", o.retries, "Maximum attempts")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_flag("--no-verify", o.no_verify, "Skip the final verification (benchmarking only)");
    app->add_option("--out", o.out_path, "Write the result matrix to this file");
    app->add_flag("--json", o.json, "Print the run report as JSON");
    app->add_flag("--timing", o.timing, "Include wall time in the report");
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Exact black-box linear algebra over word-size primes", "bbla"};
    app.require_subcommand(1);

    auto* invert = app.add_subcommand("invert", "Inverse of a Matrix Market matrix");
    invert->add_option("input", o.input, "Matrix Market file")->required();
    add_common(invert, o);

    auto* apply = app.add_subcommand("apply-inverse", "A^-1 M without forming A^-1");
    apply->add_option("input", o.input, "Matrix Market file for A")->required();
    apply->add_option("rhs", o.rhs, "Matrix Market file for M")->required();
    add_common(apply, o);

    auto* nullspace = app.add_subcommand("nullspace", "Certified kernel basis");
    nullspace->add_option("input", o.input, "Matrix Market file")->required();
    add_common(nullspace, o);

    auto* rank = app.add_subcommand("rank", "Certified rank");
    rank->add_option("input", o.input, "Matrix Market file")->required();
    add_common(rank, o);

    auto* det = app.add_subcommand("det", "Determinant modulo a prime, or over the integers with --crt");
    det->add_option("input", o.input, "Matrix Market file")->required();
    add_common(det, o);
    det->add_flag("--crt", o.crt, "Integer determinant by Chinese remaindering");
    det->add_option("--primes", o.primes, "Primes for --crt (default: chosen from the Hadamard bound)");
    det->add_option("--confirm", o.confirm, "Independent runs that must agree")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    auto* bench = app.add_subcommand("bench", "Black-box application counts over a size grid");
    bench->add_option("target", o.target, "What to benchmark: invert")->required();
    add_common(bench, o);
    bench->add_option("--sizes", o.sizes, "Matrix dimensions")->delimiter(',');
    bench->add_option("--density", o.density, "Off-diagonal entries per row")->capture_default_str();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
    }
    catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    Json r = base_report(command);
    try {
        int code = kSuccess;
        if (command == "invert" || command == "apply-inverse")
            code = cmd_invert(o, r, out, command == "apply-inverse");
        else if (command == "nullspace" || command == "rank")
            code = cmd_nullspace(o, r, out, command == "rank");
        else if (command == "det")
            code = cmd_det(o, r, out);
        else
            code = cmd_bench(o, r, out);
        if (code == kSingular)
            err << "singular matrix: a kernel vector certificate was written\n";
        emit_report(o, out, r);
        return code;
    }
    catch (const RetriesExhausted& e) {
        r["outcome"] = "retries_exhausted";
        r["message"] = e.what();
        err << "error: " << e.what() << '\n';
        emit_report(o, out, r);
        return kRetriesExhausted;
    }
    catch (const std::exception& e) {
        r["outcome"] = "error";
        r["message"] = e.what();
        err << "error: " << e.what() << '\n';
        emit_report(o, out, r);
        return kUsageError;
    }
}

} // namespace bbla::cli

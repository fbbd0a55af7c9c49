#include "cec/cli/run_cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "cec/cli/csv.hpp"
#include "cec/cli/document.hpp"
#include "cec/cli/ellipses.hpp"
#include "cec/cli/generators.hpp"
#include "cec/error.hpp"
#include "cec/oracle.hpp"

namespace cec::cli {

namespace {

std::vector<std::string> split(const std::string& text, std::string_view separators) {
    std::vector<std::string> out;
    std::string current;
    for (char ch : text) {
        if (separators.find(ch) != std::string_view::npos) {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
        } else {
            current += ch;
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

double to_number(const std::string& token) {
    double v = 0.0;
    const char* begin = token.data();
    if (!token.empty() && token.front() == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ConfigError("--param: '" + token + "' is not a number");
    }
    return v;
}

struct Options {
    std::string input;
    std::string generate;
    std::size_t centers = 0;
    std::string type = "all";
    std::string param;
    std::size_t nstart = 1;
    std::size_t iter_max = 100;
    std::string card_min = "5%";
    std::string init = "kmeans++";
    std::string method = "hartigan";
    std::optional<std::uint64_t> seed;
    std::string output;
    std::string membership_csv;
    std::string save_data;
    bool ellipses = false;
    bool oracle = false;
    bool timing = false;
    std::size_t points = 1000;
    std::size_t threads = 0;
};

int execute(const Options& opt, std::ostream& out) {
    RunSpec spec;
    spec.centers = opt.centers;
    spec.nstart = opt.nstart;
    spec.iter_max = opt.iter_max;
    spec.card_min = opt.card_min;
    spec.init = opt.init;
    spec.method = opt.method;
    spec.seed = opt.seed ? *opt.seed : std::random_device{}();

    DataMatrix data;
    if (!opt.input.empty()) {
        spec.input = opt.input;
        data = ingest_csv(opt.input);
    } else {
        spec.generate = opt.generate;
        spec.points = opt.points;
        data = generate(opt.generate, spec.seed, opt.points).data;
    }
    if (!opt.save_data.empty()) {
        std::ofstream f(opt.save_data);
        if (!f) throw DataError("cannot write '" + opt.save_data + "'");
        write_csv(f, data);
    }

    spec.types = split(opt.type, ",");
    if (spec.types.empty()) throw ConfigError("--type: empty list");
    if (spec.types.size() != 1 && spec.types.size() != opt.centers) {
        throw ConfigError("--type lists " + std::to_string(spec.types.size()) + " types for " +
                          std::to_string(opt.centers) + " centers");
    }
    spec.params = parse_params(opt.param, spec.types, data.cols());

    CecConfig cfg;
    cfg.k = opt.centers;
    cfg.families.clear();
    for (std::size_t i = 0; i < spec.types.size(); ++i) {
        cfg.families.push_back(make_family(spec.types[i], spec.params[i]));
        cfg.families.back().check_dimension(data.cols());
    }
    cfg.max_iterations = opt.iter_max;
    cfg.card_min = CardMin::parse(opt.card_min);
    cfg.init = parse_init(opt.init);
    cfg.method = parse_method(opt.method);
    cfg.nstart = opt.nstart;
    cfg.seed = spec.seed;
    cfg.threads = opt.threads;

    const CecResult result = run(data, cfg);

    DocumentExtras extras;
    if (opt.ellipses) extras.ellipses = emit_ellipses(result);
    if (opt.oracle) {
        extras.oracle = brute_force_min(data, cfg.families, cfg.k, cfg.card_min.resolve(data.rows(), data.cols()));
    }
    if (opt.timing) extras.elapsed_seconds = result.elapsed_seconds;

    const std::string text = serialize(make_document(spec, result, extras));
    if (opt.output.empty()) {
        out << text;
    } else {
        std::ofstream f(opt.output, std::ios::binary);
        if (!f) throw DataError("cannot write '" + opt.output + "'");
        f << text;
    }
    if (!opt.membership_csv.empty()) {
        std::ofstream f(opt.membership_csv);
        if (!f) throw DataError("cannot write '" + opt.membership_csv + "'");
        write_membership_csv(f, result.membership);
    }
    return kOk;
}

}  // namespace

std::vector<std::vector<double>> parse_params(const std::string& text, const std::vector<std::string>& types,
                                              std::size_t dim) {
    const auto tokens = split(text, ",; \t");
    std::size_t pos = 0;
    std::vector<std::vector<double>> out;
    for (const auto& type : types) {
        const Family kind = parse_family(type);
        std::size_t arity = 0;
        switch (kind) {
            case Family::FixedRadius: arity = 1; break;
            case Family::FixedEigenvalues: arity = dim; break;
            case Family::FixedCovariance: arity = dim * dim; break;
            default: arity = 0; break;
        }
        std::vector<double> values;
        if (arity == 0) {
            if (pos < tokens.size() && tokens[pos] == "-") ++pos;
        } else {
            for (std::size_t j = 0; j < arity; ++j, ++pos) {
                if (pos >= tokens.size() || tokens[pos] == "-") {
                    throw ConfigError("--param: type '" + type + "' needs " + std::to_string(arity) + " value(s)");
                }
                values.push_back(to_number(tokens[pos]));
            }
        }
        out.push_back(std::move(values));
    }
    if (pos != tokens.size()) throw ConfigError("--param: unexpected extra value '" + tokens[pos] + "'");
    return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cross-entropy clustering with Gaussian model families"};
    app.set_version_flag("--version", std::string("cec ") + kVersion);
    Options opt;

    auto* input = app.add_option("--input", opt.input, "CSV file of points, one per row (optional header)");
    auto* gen = app.add_option("--generate", opt.generate, "Synthetic data set: mouse, tset, fourgauss, mixshapes")
                    ->check(CLI::IsMember({"mouse", "tset", "fourgauss", "mixshapes"}));
    input->excludes(gen);
    gen->excludes(input);
    app.add_option("--centers", opt.centers, "Initial number of clusters")->required()->check(CLI::PositiveNumber);
    app.add_option("--type", opt.type, "Cluster type, or comma-separated list of k types")->capture_default_str();
    app.add_option("--param", opt.param, "Type parameters, e.g. '-,0.01' or '9000,8'; ';' may separate matrix rows");
    app.add_option("--nstart", opt.nstart, "Number of restarts")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--iter-max", opt.iter_max, "Maximum passes per start")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--card-min", opt.card_min, "Minimal cluster size, '5%' or a count")->capture_default_str();
    app.add_option("--init", opt.init, "Seeding: random, kmeans++ or partition")
        ->capture_default_str()
        ->check(CLI::IsMember({"random", "kmeans++", "partition"}));
    app.add_option("--method", opt.method, "Iteration: hartigan or lloyd")
        ->capture_default_str()
        ->check(CLI::IsMember({"hartigan", "lloyd"}));
    app.add_option("--seed", opt.seed, "Random seed (data generation and restarts)");
    app.add_option("--output", opt.output, "Write the result document here instead of stdout");
    app.add_option("--membership-csv", opt.membership_csv, "Write one cluster label per input row");
    app.add_option("--save-data", opt.save_data, "Write the clustered points as CSV");
    app.add_flag("--ellipses", opt.ellipses, "Add per-cluster ellipse parameters (2-D data only)");
    app.add_flag("--oracle", opt.oracle, "Add the exhaustive global minimum (tiny inputs only)")->group("");
    app.add_flag("--timing", opt.timing, "Add elapsed seconds to the document");
    app.add_option("--points", opt.points, "Generated data set size")->capture_default_str()->check(CLI::Range(100, 100000000));
    app.add_option("--threads", opt.threads, "Restart worker threads, 0 = all cores")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }
    if (opt.input.empty() && opt.generate.empty()) {
        err << "error: one of --input or --generate is required\n" << app.help();
        return kUsageError;
    }

    try {
        return execute(opt, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"cec"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cec::cli

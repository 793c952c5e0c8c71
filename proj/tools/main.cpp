// dressed-limit: phase shifts, shot-noise SNR and destruction rates of
// multi-level atom + multi-laser column-density measurements.

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dressed_limit/errors.hpp"
#include "dressed_limit/explorer.hpp"
#include "dressed_limit/manifold.hpp"
#include "dressed_limit/observables.hpp"
#include "dressed_limit/oracle.hpp"
#include "dressed_limit/report_io.hpp"
#include "dressed_limit/scheme.hpp"

namespace dl = dressed_limit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;    // validation failure or open manifold
constexpr int kExitNumerical = 3;  // tracking lost, integration failure
constexpr int kExitUsage = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dl::UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int default_threads() {
    if (const char* env = std::getenv("DRESSED_LIMIT_THREADS"))
        return std::max(1, std::atoi(env));
    return 1;
}

// name=lo:hi[:n]
dl::Parameter parse_param_spec(const std::string& spec, int* grid_points) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw dl::UsageError("--param expects name=lo:hi[:n], got " + spec);
    dl::Parameter p;
    p.name = spec.substr(0, eq);
    std::string rest = spec.substr(eq + 1);
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = rest.find(':', start);
        parts.push_back(rest.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (parts.size() < 2 || parts.size() > 3)
        throw dl::UsageError("--param expects name=lo:hi[:n], got " + spec);
    try {
        p.lo = std::stod(parts[0]);
        p.hi = std::stod(parts[1]);
        if (grid_points)
            *grid_points = parts.size() == 3 ? std::stoi(parts[2]) : 0;
    } catch (const std::exception&) {
        throw dl::UsageError("bad number in --param " + spec);
    }
    if (!(p.lo < p.hi))
        throw dl::UsageError("--param " + spec + ": need lo < hi");
    return p;
}

struct Options {
    std::string command;
    std::string input;
    std::string track = "overlap";
    std::string format;  // "", json, csv, table
    std::vector<std::string> params;
    double duration = 500.0;
    bool fd = false;
    std::string objective = "saturation";
    double fix_destruction = 0;
    double destruction_tolerance = 0;
    long budget = 1000;
    std::uint64_t seed = 1;
    long cap = 100000;
    int threads = default_threads();
};

std::string resolve_format(const Options& o, const char* piped_default) {
    if (!o.format.empty()) return o.format;
    return isatty(fileno(stdout)) ? "table" : piped_default;
}

int cmd_validate(const Options& o) {
    dl::LevelScheme s = dl::parse_scheme(read_file(o.input));
    dl::ManifoldMap m = dl::analyze_manifold(s);
    std::cout << dl::manifold_table(s, m);
    auto shared = dl::classify_shared_states(s, m);
    for (const auto& ss : shared) {
        std::cout << "level " << ss.level << " shared by lasers";
        for (int j : ss.lasers) std::cout << " " << j;
        std::cout << "\n";
    }
    return m.closed ? kExitOk : kExitInvalid;
}

int cmd_analyze(const Options& o) {
    dl::LevelScheme s = dl::parse_scheme(read_file(o.input));
    dl::ManifoldMap m = dl::require_closed_manifold(s);
    int index = 0;
    dl::TrackingRule rule = dl::parse_tracking_rule(o.track, &index);
    dl::ObservableReport r = dl::analyze(s, m, rule, index);
    if (resolve_format(o, "json") == "table")
        std::cout << dl::report_table(s, r);
    else
        std::cout << dl::report_to_json(r).dump(2) << "\n";
    return kExitOk;
}

int cmd_oracle(const Options& o) {
    dl::LevelScheme s = dl::parse_scheme(read_file(o.input));
    dl::ManifoldMap m = dl::require_closed_manifold(s);
    nlohmann::json out;
    out["evolution"] =
        dl::evolution_to_json(dl::evolve_adiabatic(s, m, o.duration));
    if (o.fd) {
        int index = 0;
        dl::TrackingRule rule = dl::parse_tracking_rule(o.track, &index);
        dl::DressedState d = dl::track_dressed_state(s, m, rule, index);
        auto coh = dl::coherences(d, dl::build_hamiltonian(s, m, 1.0), s);
        out["finite_difference"] = nlohmann::json::array();
        for (const auto& c : coh) {
            double fd = dl::fd_eigen_derivative(
                s, m, c.transition_index, dl::default_fd_step(s, c.transition_index),
                rule, index);
            out["finite_difference"].push_back(
                {{"laser", c.laser},
                 {"lower", c.lower},
                 {"upper", c.upper},
                 {"hellmann_feynman", c.hf_derivative},
                 {"finite_difference", fd},
                 {"abs_difference", std::abs(fd - c.hf_derivative)}});
        }
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_scan(const Options& o) {
    dl::ParameterSpace space;
    space.base = dl::parse_scheme(read_file(o.input));
    std::vector<int> grid;
    for (const auto& spec : o.params) {
        int n = 0;
        space.parameters.push_back(parse_param_spec(spec, &n));
        if (n < 2)
            throw dl::UsageError("scan --param needs name=lo:hi:n with n >= 2");
        grid.push_back(n);
    }
    if (space.parameters.empty())
        throw dl::UsageError("scan needs at least one --param");
    dl::ScanOptions opt;
    opt.rule = dl::parse_tracking_rule(o.track, &opt.rule_index);
    opt.cap = o.cap;
    opt.threads = o.threads;
    std::cout << dl::scan_to_csv(dl::scan(space, grid, opt));
    return kExitOk;
}

int cmd_search(const Options& o) {
    dl::ParameterSpace space;
    space.base = dl::parse_scheme(read_file(o.input));
    for (const auto& spec : o.params)
        space.parameters.push_back(parse_param_spec(spec, nullptr));
    if (space.parameters.empty())
        throw dl::UsageError("search needs at least one --param");
    dl::SearchOptions opt;
    opt.rule = dl::parse_tracking_rule(o.track, &opt.rule_index);
    dl::SearchResult res;
    if (o.objective == "saturation") {
        res = dl::search_max_saturation(space, o.budget, o.seed, opt);
    } else if (o.objective == "snr") {
        if (!(o.fix_destruction > 0))
            throw dl::UsageError(
                "--objective snr requires --fix-destruction R > 0");
        double tol = o.destruction_tolerance > 0 ? o.destruction_tolerance
                                                 : 1e-3 * o.fix_destruction;
        res = dl::search_max_snr_at_fixed_destruction(
            space, o.fix_destruction, tol, o.budget, o.seed, opt);
    } else {
        throw dl::UsageError("--objective must be saturation or snr");
    }
    std::vector<std::string> names;
    for (const auto& p : space.parameters) names.push_back(p.name);
    std::cout << dl::search_to_json(res, names).dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dressed-state limits of optical column-density measurement"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", o.input, "scheme file (JSON)")->required();
        sub->add_option("--track", o.track,
                        "tracking rule: overlap | index:k | min-excited");
        sub->add_option("--threads", o.threads, "parallel worker cap");
    };

    auto* validate = app.add_subcommand("validate", "manifold closure verdict");
    validate->add_option("file", o.input)->required();

    auto* analyze = app.add_subcommand("analyze", "full observable report");
    add_common(analyze);
    analyze->add_option("--format", o.format, "json | table");

    auto* oracle = app.add_subcommand("oracle", "adiabatic-evolution oracle");
    add_common(oracle);
    oracle->add_option("--duration", o.duration, "ramp duration [s]");
    oracle->add_flag("--fd", o.fd, "finite-difference eigenvalue derivatives");

    auto* scan = app.add_subcommand("scan", "dense parameter grid, CSV");
    add_common(scan);
    scan->add_option("--param", o.params, "name=lo:hi:n (repeatable)");
    scan->add_option("--cap", o.cap, "maximum grid points");

    auto* search = app.add_subcommand("search", "derivative-free maximization");
    add_common(search);
    search->add_option("--param", o.params, "name=lo:hi (repeatable)");
    search->add_option("--objective", o.objective, "saturation | snr");
    search->add_option("--fix-destruction", o.fix_destruction,
                       "target destruction rate [1/s] for --objective snr");
    search->add_option("--tolerance", o.destruction_tolerance,
                       "destruction constraint tolerance [1/s]");
    search->add_option("--budget", o.budget, "evaluation budget");
    search->add_option("--seed", o.seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(o);
        if (analyze->parsed()) return cmd_analyze(o);
        if (oracle->parsed()) return cmd_oracle(o);
        if (scan->parsed()) return cmd_scan(o);
        if (search->parsed()) return cmd_search(o);
        return kExitUsage;
    } catch (const dl::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const dl::CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const dl::ParseError& e) {
        std::cerr << "invalid scheme: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const dl::OpenManifoldError& e) {
        std::cerr << "open manifold: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const dl::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

#ifndef DRESSED_LIMIT_EXPLORER_HPP
#define DRESSED_LIMIT_EXPLORER_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dressed_limit/observables.hpp"
#include "dressed_limit/scheme.hpp"

namespace dressed_limit {

// A free parameter of a scheme family.  Names address scheme fields:
//   detuning.<level id>
//   rabi.<laser>.<lower>.<upper>
struct Parameter {
    std::string name;
    double lo = 0;
    double hi = 0;
};

struct ParameterSpace {
    LevelScheme base;
    std::vector<Parameter> parameters;
};

// Substitutes one in-bounds point into the template.
LevelScheme instantiate(const ParameterSpace& space,
                        const std::vector<double>& point);

struct ScanRow {
    std::vector<double> point;
    bool ok = false;
    std::string error;           // tracking / validation failure, if any
    std::vector<double> snr;     // per laser
    std::vector<double> bound;
    std::vector<std::optional<double>> saturation;
    double destruction = 0;
};

struct ScanTable {
    std::vector<std::string> parameter_names;
    int num_lasers = 0;
    std::vector<ScanRow> rows;  // row-major over the grid, last axis fastest
};

struct ScanOptions {
    TrackingRule rule = TrackingRule::overlap;
    int rule_index = 0;
    long cap = 100000;
    int threads = 1;
};

// Dense grid evaluation; grid[i] >= 2 points per axis.
ScanTable scan(const ParameterSpace& space, const std::vector<int>& grid,
               const ScanOptions& opt = {});

struct TraceEntry {
    std::vector<double> point;
    bool ok = false;
    std::vector<double> snr;
    std::vector<double> bound;
    std::optional<double> saturation;  // max over lasers with defined ratio
    double destruction = 0;
    double objective = 0;
};

struct SearchResult {
    std::vector<double> best_point;
    double best_value = 0;  // saturation ratio or SNR, per the objective
    long evaluations = 0;
    std::vector<TraceEntry> trace;
    std::vector<double> two_level_reference;  // per laser; constrained search
};

struct SearchOptions {
    TrackingRule rule = TrackingRule::overlap;
    int rule_index = 0;
};

// Multi-start downhill-simplex maximization of the saturation ratio;
// undefined saturation counts as -inf.  Deterministic for a given seed.
SearchResult search_max_saturation(const ParameterSpace& space, long budget,
                                   std::uint64_t seed,
                                   const SearchOptions& opt = {});

// Maximizes the best per-laser SNR subject to |R - R_target| <= tolerance
// via a quadratic penalty whose weight ramps x10 per restart.  Throws
// InfeasibleError when no evaluated point meets the constraint.
SearchResult search_max_snr_at_fixed_destruction(const ParameterSpace& space,
                                                 double target_destruction,
                                                 double tolerance, long budget,
                                                 std::uint64_t seed,
                                                 const SearchOptions& opt = {});

// SNR of the far-detuned two-level scheme at the same destruction rate,
// (n_col/2) sqrt(eta A sigma_j R / B), evaluated per laser.
std::vector<double> two_level_reference_snr(const LevelScheme& s,
                                            double destruction_rate);

// Random closed schemes for property tests: topology sampled from chain,
// lambda and double-lambda loop templates; detunings uniform in [-50, 50]
// gamma_ref, Rabi frequencies log-uniform in [1e-2, 1e2] gamma_ref.
LevelScheme random_scheme(std::mt19937_64& rng);

}  // namespace dressed_limit

#endif  // DRESSED_LIMIT_EXPLORER_HPP

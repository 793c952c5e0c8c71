#include "dressed_limit/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace dressed_limit {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

json jnum(double v) { return json(v); }

json jopt(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json report_to_json(const ObservableReport& r) {
    json out;
    out["tracking"] = tracking_rule_name(r.selection);
    out["eigenvalue"] = jnum(r.eigenvalue);
    out["destruction"] = jnum(r.destruction);
    out["populations"] = json::array();
    for (std::size_t i = 0; i < r.populations.size(); ++i)
        out["populations"].push_back({{"level", r.population_levels[i]},
                                      {"population", jnum(r.populations[i])}});
    out["transitions"] = json::array();
    for (const auto& t : r.transitions)
        out["transitions"].push_back({{"laser", t.laser},
                                      {"lower", t.lower},
                                      {"upper", t.upper},
                                      {"coherence", jnum(t.coherence)},
                                      {"upper_population", jnum(t.upper_population)},
                                      {"emission_rate", jnum(t.emission_rate)},
                                      {"hf_derivative", jnum(t.hf_derivative)}});
    out["lasers"] = json::array();
    for (const auto& l : r.lasers)
        out["lasers"].push_back({{"laser", l.laser},
                                 {"phase_shift", jnum(l.phase_shift)},
                                 {"snr", jnum(l.snr)},
                                 {"bound", jnum(l.bound)},
                                 {"saturation", jopt(l.saturation)},
                                 {"shares_upper_state", l.shares_upper_state}});
    return out;
}

json evolution_to_json(const EvolutionResult& r) {
    return {{"return_fidelity", jnum(r.return_fidelity)},
            {"accumulated_phase", jnum(r.accumulated_phase)},
            {"principal_phase", jnum(r.principal_phase())},
            {"winding", r.winding()},
            {"predicted_phase", jnum(r.predicted_phase)},
            {"phase_error", jnum(r.accumulated_phase - r.predicted_phase)},
            {"max_excited_exposure", jnum(r.max_excited_exposure)},
            {"norm_error", jnum(r.norm_error)},
            {"steps", r.steps}};
}

json search_to_json(const SearchResult& r,
                    const std::vector<std::string>& parameter_names) {
    json out;
    out["parameters"] = parameter_names;
    out["best_point"] = r.best_point;
    out["best_value"] = jnum(r.best_value);
    out["evaluations"] = r.evaluations;
    if (!r.two_level_reference.empty())
        out["two_level_reference"] = r.two_level_reference;
    out["trace"] = json::array();
    for (const auto& e : r.trace) {
        json row = {{"point", e.point},
                    {"ok", e.ok},
                    {"snr", e.snr},
                    {"bound", e.bound},
                    {"saturation", jopt(e.saturation)},
                    {"destruction", jnum(e.destruction)},
                    {"objective",
                     std::isfinite(e.objective) ? json(e.objective)
                                                : json(nullptr)}};
        out["trace"].push_back(row);
    }
    return out;
}

std::string scan_to_csv(const ScanTable& t) {
    std::ostringstream os;
    for (const auto& n : t.parameter_names) os << n << ",";
    for (int j = 1; j <= t.num_lasers; ++j)
        os << "snr_" << j << ",bound_" << j << ",saturation_" << j << ",";
    os << "destruction\n";
    for (const auto& row : t.rows) {
        for (double p : row.point) os << format_double(p) << ",";
        for (int j = 0; j < t.num_lasers; ++j) {
            os << format_double(row.snr[j]) << ","
               << format_double(row.bound[j]) << ",";
            if (row.saturation[j]) os << format_double(*row.saturation[j]);
            os << ",";
        }
        os << format_double(row.destruction) << "\n";
    }
    return os.str();
}

std::string manifold_table(const LevelScheme& s, const ManifoldMap& m) {
    std::ostringstream os;
    os << (m.closed ? "closed manifold\n" : "OPEN manifold\n");
    if (!m.closed) {
        os << "conflict cycle: " << describe_cycle(s, m.conflict) << "\n";
        return os.str();
    }
    os << "photon offsets b[laser][level]:\n        ";
    for (const auto& l : s.levels) os << " level" << l.id;
    os << "\n";
    for (const auto& laser : s.lasers) {
        os << "laser " << laser.id << " ";
        for (const auto& l : s.levels) {
            if (m.is_reachable(l.id)) {
                char buf[16];
                std::snprintf(buf, sizeof buf, "%7d", m.offset(laser.id, l.id));
                os << buf;
            } else {
                os << "      -";
            }
        }
        os << "\n";
    }
    if (!m.unreachable.empty()) {
        os << "unreachable levels (dropped):";
        for (int id : m.unreachable) os << " " << id;
        os << "\n";
    }
    return os.str();
}

std::string report_table(const LevelScheme&, const ObservableReport& r) {
    std::ostringstream os;
    os << "tracking: " << tracking_rule_name(r.selection) << "\n";
    os << "dressed eigenvalue [rad/s]: " << format_double(r.eigenvalue) << "\n";
    os << "destruction R [1/s]: " << format_double(r.destruction) << "\n";
    os << "populations:\n";
    for (std::size_t i = 0; i < r.populations.size(); ++i)
        os << "  level " << r.population_levels[i] << ": "
           << format_double(r.populations[i]) << "\n";
    os << "transitions (laser lower->upper  Re rho_LU  rho_UU  Gamma):\n";
    for (const auto& t : r.transitions)
        os << "  L" << t.laser << " " << t.lower << "->" << t.upper << "  "
           << format_double(t.coherence) << "  "
           << format_double(t.upper_population) << "  "
           << format_double(t.emission_rate) << "\n";
    os << "lasers (phase_shift  snr  bound  saturation):\n";
    for (const auto& l : r.lasers) {
        os << "  L" << l.laser << "  " << format_double(l.phase_shift) << "  "
           << format_double(l.snr) << "  " << format_double(l.bound) << "  ";
        os << (l.saturation ? format_double(*l.saturation) : "undefined");
        if (l.shares_upper_state)
            os << "  [shared upper state: per-transition Gamma terms may "
                  "double-count]";
        os << "\n";
    }
    return os.str();
}

}  // namespace dressed_limit

#include "dressed_limit/observables.hpp"

#include <cmath>
#include <map>
#include <set>

#include "dressed_limit/errors.hpp"

namespace dressed_limit {

std::vector<TransitionObservables> coherences(const DressedState& d,
                                              const ManifoldHamiltonian& h,
                                              const LevelScheme& s) {
    std::vector<TransitionObservables> out;
    for (int i = 0; i < static_cast<int>(s.transitions.size()); ++i) {
        const Transition& t = s.transitions[i];
        int a = h.index_of[t.lower], b = h.index_of[t.upper];
        if (a < 0 || b < 0) continue;
        TransitionObservables o;
        o.transition_index = i;
        o.laser = t.laser;
        o.lower = t.lower;
        o.upper = t.upper;
        o.coherence = d.psi[a] * d.psi[b];
        o.upper_population = d.psi[b] * d.psi[b];
        o.emission_rate = s.level(t.upper).gamma * o.upper_population;
        o.hf_derivative = o.coherence;
        out.push_back(o);
    }
    return out;
}

std::vector<double> phase_shift(const LevelScheme& s,
                                const std::vector<TransitionObservables>& obs) {
    std::vector<double> out(s.num_lasers(), 0.0);
    for (const auto& o : obs) {
        const Transition& t = s.transitions[o.transition_index];
        if (t.rabi == 0) {
            if (o.coherence != 0)
                throw SingularTermError(
                    "zero Rabi frequency with nonzero coherence on transition "
                    "of laser " +
                    std::to_string(t.laser));
            continue;  // 0/0 term defined as 0
        }
        const double sigma = cross_section(s.laser(t.laser));
        const double gamma = s.level(t.upper).gamma;
        out[t.laser - 1] -= s.context.column_density * sigma * gamma *
                            o.coherence / (2.0 * t.rabi);
    }
    return out;
}

std::vector<double> snr(const LevelScheme& s,
                        const std::vector<TransitionObservables>& obs) {
    const auto& c = s.context;
    std::vector<double> sum(s.num_lasers(), 0.0);
    for (const auto& o : obs) {
        const double sigma = cross_section(s.laser(o.laser));
        const double gamma = s.level(o.upper).gamma;
        sum[o.laser - 1] +=
            0.5 * c.column_density *
            std::sqrt(c.efficiency * c.area * sigma * gamma / c.bandwidth) *
            o.coherence;
    }
    for (double& v : sum) v = std::abs(v);
    return sum;
}

double snr_power_form(const LevelScheme& s, int laser_id, double phase) {
    constexpr double hbar = 1.054571817e-34;  // J s
    const Laser& l = s.laser(laser_id);
    if (!l.power)
        throw MissingPowerError("laser " + std::to_string(laser_id) +
                                " has no declared power");
    int count = 0;
    for (const auto& t : s.transitions)
        if (t.laser == laser_id) ++count;
    if (count != 1)
        throw MultiTransitionUnsupportedError(
            "power-form SNR needs a single-transition laser; laser " +
            std::to_string(laser_id) + " drives " + std::to_string(count));
    return std::sqrt(s.context.efficiency * *l.power /
                     (s.context.bandwidth * hbar * l.omega)) *
           std::abs(phase);
}

std::vector<BoundResult> bound(const LevelScheme& s,
                               const std::vector<TransitionObservables>& obs,
                               const std::vector<double>& snr_values) {
    const auto& c = s.context;
    std::vector<BoundResult> out(s.num_lasers());
    std::vector<double> full_scale(s.num_lasers(), 0.0);  // all population up
    for (const auto& o : obs) {
        const double sigma = cross_section(s.laser(o.laser));
        const double gamma = s.level(o.upper).gamma;
        out[o.laser - 1].bound +=
            0.5 * c.column_density *
            std::sqrt(c.efficiency * c.area * sigma * o.emission_rate /
                      c.bandwidth);
        full_scale[o.laser - 1] +=
            0.5 * c.column_density *
            std::sqrt(c.efficiency * c.area * sigma * gamma / c.bandwidth);
    }
    for (int j = 0; j < s.num_lasers(); ++j) {
        // Upper-state population below ~1e-28 is a numerical zero (dark
        // state): report the 0/0 ratio as undefined.
        if (out[j].bound > 1e-14 * full_scale[j])
            out[j].saturation = snr_values[j] / out[j].bound;
    }
    return out;
}

double destruction(const LevelScheme& s, const ManifoldHamiltonian& h,
                   const DressedState& d) {
    double r = 0;
    for (int i = 0; i < h.dim(); ++i)
        r += s.level(h.level_ids[i]).gamma * d.psi[i] * d.psi[i];
    return r;
}

ObservableReport analyze(const LevelScheme& s, const ManifoldMap& m,
                         const DressedState& d) {
    ManifoldHamiltonian h = build_hamiltonian(s, m, 1.0);
    ObservableReport r;
    r.selection = d.selection;
    r.eigenvalue = d.eigenvalue;
    r.transitions = coherences(d, h, s);
    auto phases = phase_shift(s, r.transitions);
    auto snrs = snr(s, r.transitions);
    auto bounds = bound(s, r.transitions, snrs);

    // Upper levels driven by several lasers: the per-transition Gamma terms
    // in the bound count that population once per transition.
    std::map<int, std::set<int>> upper_lasers;
    for (const auto& o : r.transitions) upper_lasers[o.upper].insert(o.laser);
    std::set<int> shared;
    for (const auto& [level, lasers] : upper_lasers)
        if (lasers.size() > 1) shared.insert(level);

    for (int j = 1; j <= s.num_lasers(); ++j) {
        LaserObservables lo;
        lo.laser = j;
        lo.phase_shift = phases[j - 1];
        lo.snr = snrs[j - 1];
        lo.bound = bounds[j - 1].bound;
        lo.saturation = bounds[j - 1].saturation;
        for (const auto& o : r.transitions)
            if (o.laser == j && shared.count(o.upper)) lo.shares_upper_state = true;
        r.lasers.push_back(lo);
    }
    r.destruction = destruction(s, h, d);
    for (int i = 0; i < h.dim(); ++i) {
        r.population_levels.push_back(h.level_ids[i]);
        r.populations.push_back(d.psi[i] * d.psi[i]);
    }
    return r;
}

ObservableReport analyze(const LevelScheme& s, const ManifoldMap& m,
                         TrackingRule rule, int index) {
    return analyze(s, m, track_dressed_state(s, m, rule, index));
}

}  // namespace dressed_limit

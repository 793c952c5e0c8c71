// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dressed_limit/errors.hpp"
#include "dressed_limit/explorer.hpp"
#include "dressed_limit/manifold.hpp"
#include "dressed_limit/observables.hpp"
#include "dressed_limit/oracle.hpp"
#include "dressed_limit/report_io.hpp"
#include "test_util.hpp"

using namespace dressed_limit;

namespace {

struct Check {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

// --- criterion 1 -----------------------------------------------------------

bool two_level_closed_forms(Check& c) {
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            const double delta = 0.5 + (100.0 - 0.5) * i / 19.0;
            const double omega = 0.1 + (10.0 - 0.1) * j / 19.0;
            LevelScheme s = testutil::two_level(delta, omega);
            ManifoldMap m = analyze_manifold(s);
            ObservableReport r = analyze(s, m, TrackingRule::overlap);

            const double root = std::hypot(delta, omega);
            const double lam = (delta - root) / 2.0;
            const double coh = -omega / (2.0 * root);
            const double theta = std::atan2(omega, delta);
            const double pop = std::sin(theta / 2) * std::sin(theta / 2);
            const double sat = std::cos(theta / 2);

            auto rel = [](double a, double b) {
                return std::abs(a - b) / std::abs(b);
            };
            c.require(rel(r.eigenvalue, lam) <= 1e-10, "eigenvalue");
            c.require(rel(r.transitions[0].coherence, coh) <= 1e-10,
                      "coherence");
            c.require(rel(r.transitions[0].upper_population, pop) <= 1e-10,
                      "population");
            c.require(rel(*r.lasers[0].saturation, sat) <= 1e-10,
                      "saturation");
        }
    }
    return c.pass;
}

// --- criterion 2 -----------------------------------------------------------

std::string bound_trace(Check& c) {
    std::ostringstream trace;
    std::mt19937_64 rng(20240101);
    int evaluated = 0;
    for (int i = 0; i < 1000; ++i) {
        LevelScheme s = random_scheme(rng);
        ManifoldMap m = analyze_manifold(s);
        c.require(m.closed, "generator emitted an open scheme");
        ObservableReport r;
        try {
            r = analyze(s, m, TrackingRule::overlap);
        } catch (const DegenerateBareStateError&) {
            trace << i << ",degenerate\n";
            continue;
        }
        ++evaluated;
        for (const auto& l : r.lasers) {
            if (l.saturation) {
                c.require(*l.saturation <= 1 + 1e-9,
                          "saturation " + format_double(*l.saturation));
                trace << i << "," << l.laser << ","
                      << format_double(l.snr) << ","
                      << format_double(l.bound) << ","
                      << format_double(*l.saturation) << "\n";
            }
        }
    }
    c.require(evaluated >= 900, "too few evaluable schemes");
    return trace.str();
}

// --- criterion 3 -----------------------------------------------------------

std::string hellmann_feynman_trace(Check& c) {
    std::ostringstream trace;
    std::mt19937_64 rng(20240202);
    int schemes = 0;
    while (schemes < 200) {
        LevelScheme s = random_scheme(rng);
        ManifoldMap m = analyze_manifold(s);
        DressedState d;
        try {
            d = track_dressed_state(s, m, TrackingRule::overlap);
        } catch (const DegenerateBareStateError&) {
            continue;
        }
        ++schemes;
        ManifoldHamiltonian h = build_hamiltonian(s, m, 1.0);
        for (const auto& o : coherences(d, h, s)) {
            double fd = fd_eigen_derivative(
                s, m, o.transition_index,
                default_fd_step(s, o.transition_index));
            const double tol = 1e-6 * std::max(std::abs(o.hf_derivative), 1e-2);
            c.require(std::abs(fd - o.hf_derivative) <= tol,
                      "fd " + format_double(fd) + " vs hf " +
                          format_double(o.hf_derivative));
            trace << schemes << "," << o.transition_index << ","
                  << format_double(fd) << ","
                  << format_double(o.hf_derivative) << "\n";
        }
    }
    return trace.str();
}

// --- criterion 4 -----------------------------------------------------------

bool dark_state_zeros(Check& c) {
    LevelScheme s = testutil::lambda_scheme(0, 10, 0, 2, 2);
    ManifoldMap m = analyze_manifold(s);
    ObservableReport r = analyze(s, m, TrackingRule::min_excited);
    double excited = 0;
    for (std::size_t i = 0; i < r.populations.size(); ++i)
        if (s.level(r.population_levels[i]).gamma > 0)
            excited += r.populations[i];
    c.require(excited <= 1e-14, "excited population " + format_double(excited));
    c.require(std::abs(r.lasers[0].phase_shift) <= 1e-12, "phase on laser 1");
    c.require(std::abs(r.lasers[1].phase_shift) <= 1e-12, "phase on laser 2");
    c.require(r.destruction <= 1e-14,
              "destruction " + format_double(r.destruction));
    return c.pass;
}

// --- criterion 5 -----------------------------------------------------------

bool far_detuned_saturation(Check& c) {
    ParameterSpace sp;
    sp.base = testutil::two_level(10, 1);
    sp.parameters = {{"detuning.2", 1.0, 100.0}};  // Delta/Omega in [1, 100]
    ScanTable t = scan(sp, {100});
    double prev = -1;
    for (const auto& row : t.rows) {
        c.require(row.ok && row.saturation[0].has_value(), "scan row failed");
        if (!row.ok || !row.saturation[0]) return c.pass;
        c.require(*row.saturation[0] > prev, "saturation not monotone");
        prev = *row.saturation[0];
    }
    c.require(prev >= 0.9999, "saturation at Delta/Omega = 100 is " +
                                  format_double(prev));
    return c.pass;
}

// --- criterion 6 -----------------------------------------------------------

bool adiabatic_oracle(Check& c) {
    LevelScheme s = testutil::two_level(10, 2);
    ManifoldMap m = analyze_manifold(s);
    EvolutionResult base = evolve_adiabatic(s, m, 500.0);
    c.require(base.return_fidelity >= 0.999,
              "fidelity " + format_double(base.return_fidelity));
    double err = std::abs(base.accumulated_phase - base.predicted_phase);
    c.require(err <= 1e-3, "phase error " + format_double(err));
    double duration = 500.0;
    for (int k = 0; k < 4; ++k) {
        duration *= 2;
        EvolutionResult r = evolve_adiabatic(s, m, duration);
        double next = std::abs(r.accumulated_phase - r.predicted_phase);
        c.require(next < err, "phase error not decreasing at T = " +
                                  format_double(duration));
        err = next;
    }
    return c.pass;
}

// --- criterion 7 -----------------------------------------------------------

bool manifold_verdicts(Check& c) {
    LevelScheme lam = testutil::lambda_scheme(0, 10, -1, 1, 1);
    ManifoldMap m = analyze_manifold(lam);
    c.require(m.closed, "lambda should be closed");
    // {|1,n,m>, |2,n-1,m>, |3,n-1,m+1>}
    c.require(m.offset(1, 1) == 0 && m.offset(1, 2) == -1 &&
                  m.offset(1, 3) == -1,
              "laser-1 offsets");
    c.require(m.offset(2, 1) == 0 && m.offset(2, 2) == 0 &&
                  m.offset(2, 3) == 1,
              "laser-2 offsets");

    LevelScheme bad = parse_scheme(
        testutil::read_file(testutil::scheme_path("double_laser_invalid.json")));
    ManifoldMap mb = analyze_manifold(bad);
    c.require(!mb.closed, "double-laser scheme should be open");
    c.require(!mb.conflict.empty(), "missing cycle witness");

    LevelScheme loop = parse_scheme(
        testutil::read_file(testutil::scheme_path("fig1c_loop.json")));
    c.require(analyze_manifold(loop).closed, "loop scheme should be closed");
    return c.pass;
}

// --- criterion 8 -----------------------------------------------------------

std::string fixed_destruction_trace(Check& c, ParameterSpace& sp) {
    sp.base = testutil::lambda_scheme(0, 10, -1, 1, 1);
    sp.base.lasers[1].wavenumber = sp.base.lasers[0].wavenumber;
    sp.base.lasers[1].omega = sp.base.lasers[0].omega;
    sp.parameters = {{"detuning.2", -40.0, 40.0},
                     {"detuning.3", -40.0, 40.0},
                     {"rabi.1.1.2", 0.01, 50.0},
                     {"rabi.2.3.2", 0.01, 50.0}};
    const double target = 0.01;  // units of gamma_ref = 1
    SearchResult r = search_max_snr_at_fixed_destruction(sp, target, 1e-5,
                                                         5000, 20240303);
    const double reference = r.two_level_reference[0];
    c.require(r.best_value <= reference * (1 + 1e-3),
              "lambda SNR " + format_double(r.best_value) +
                  " exceeds two-level reference " + format_double(reference));
    std::vector<std::string> names;
    for (const auto& p : sp.parameters) names.push_back(p.name);
    return search_to_json(r, names).dump();
}

}  // namespace

int main() {
    int failures = 0;
    auto run = [&](int n, const char* name, auto&& body) {
        Check c;
        auto t0 = std::chrono::steady_clock::now();
        try {
            body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        std::printf("%s criterion %d: %s (%.2f s)%s%s\n",
                    c.pass ? "PASS" : "FAIL", n, name, secs,
                    c.pass ? "" : " -- ", c.detail.c_str());
        if (!c.pass) ++failures;
    };

    std::string trace2a, trace3a, trace8a;
    ParameterSpace sp8;

    run(1, "two-level closed forms on a 20x20 grid",
        [](Check& c) { two_level_closed_forms(c); });
    run(2, "SNR bound holds on 1000 random closed schemes",
        [&](Check& c) { trace2a = bound_trace(c); });
    run(3, "Hellmann-Feynman matches finite differences on 200 schemes",
        [&](Check& c) { trace3a = hellmann_feynman_trace(c); });
    run(4, "lambda dark state: no excited population, no phase shift",
        [](Check& c) { dark_state_zeros(c); });
    run(5, "far-detuned two-level saturation, monotone in Delta/Omega",
        [](Check& c) { far_detuned_saturation(c); });
    run(6, "adiabatic ramp oracle with improving phase agreement",
        [](Check& c) { adiabatic_oracle(c); });
    run(7, "manifold verdicts: lambda offsets, open rejection, loop accepted",
        [](Check& c) { manifold_verdicts(c); });
    run(8, "fixed-destruction search never beats the two-level reference",
        [&](Check& c) { trace8a = fixed_destruction_trace(c, sp8); });
    run(9, "determinism: reruns of 2, 3, 8 are byte-identical", [&](Check& c) {
        Check scratch;
        c.require(bound_trace(scratch) == trace2a, "criterion 2 trace differs");
        c.require(hellmann_feynman_trace(scratch) == trace3a,
                  "criterion 3 trace differs");
        ParameterSpace sp;
        c.require(fixed_destruction_trace(scratch, sp) == trace8a,
                  "criterion 8 trace differs");
    });

    return failures == 0 ? 0 : 1;
}

#ifndef DRESSED_LIMIT_OBSERVABLES_HPP
#define DRESSED_LIMIT_OBSERVABLES_HPP

#include <optional>
#include <vector>

#include "dressed_limit/dressed.hpp"
#include "dressed_limit/manifold.hpp"
#include "dressed_limit/scheme.hpp"

namespace dressed_limit {

struct TransitionObservables {
    int transition_index = 0;
    int laser = 0;
    int lower = 0;
    int upper = 0;
    double coherence = 0;         // Re rho_{LU} = psi_L psi_U
    double upper_population = 0;  // rho_{UU}
    double emission_rate = 0;     // Gamma_{jl} = gamma_{jl} rho_{UU}  [1/s]
    double hf_derivative = 0;     // d<H>/dOmega in units of hbar = coherence
};

struct LaserObservables {
    int laser = 0;
    double phase_shift = 0;               // rad
    double snr = 0;
    double bound = 0;                     // right side of the SNR inequality
    std::optional<double> saturation;     // snr / bound, empty when bound = 0
    bool shares_upper_state = false;      // upper level also driven by another
                                          // laser: per-transition Gamma terms
                                          // count that population once per
                                          // transition
};

struct ObservableReport {
    std::vector<TransitionObservables> transitions;
    std::vector<LaserObservables> lasers;
    double destruction = 0;  // total spontaneous emission rate [1/s]
    TrackingRule selection = TrackingRule::overlap;
    double eigenvalue = 0;   // tracked dressed eigenvalue [rad/s]
    std::vector<double> populations;  // per reachable level, scheme order
    std::vector<int> population_levels;
};

// Re rho_{LU} and rho_{UU} from the real dressed eigenvector; by the
// Hellmann-Feynman theorem the coherence is also d<H>/dOmega in hbar units.
std::vector<TransitionObservables> coherences(const DressedState& d,
                                              const ManifoldHamiltonian& h,
                                              const LevelScheme& s);

// Per-laser phase shift
//   dphi_j = -sum_l n_col sigma_jl gamma_jl Re{rho_LU} / (2 Omega_jl).
std::vector<double> phase_shift(const LevelScheme& s,
                                const std::vector<TransitionObservables>& obs);

// Per-laser shot-noise-limited SNR (magnitude of the coherence sum).
std::vector<double> snr(const LevelScheme& s,
                        const std::vector<TransitionObservables>& obs);

// SNR from laser power, sqrt(eta P / (B hbar omega)) |dphi|.  Equals snr()
// exactly when P satisfies Omega^2 = sigma gamma P / (A hbar omega).  Only
// defined for single-transition lasers.
double snr_power_form(const LevelScheme& s, int laser_id, double phase_shift);

// Right side of the SNR inequality and the saturation ratio.
struct BoundResult {
    double bound = 0;
    std::optional<double> saturation;
};
std::vector<BoundResult> bound(const LevelScheme& s,
                               const std::vector<TransitionObservables>& obs,
                               const std::vector<double>& snr_values);

// Total spontaneous emission rate R = sum_n gamma_n psi_n^2.
double destruction(const LevelScheme& s, const ManifoldHamiltonian& h,
                   const DressedState& d);

// Full result chain for one tracked dressed state.
ObservableReport analyze(const LevelScheme& s, const ManifoldMap& m,
                         TrackingRule rule, int index = 0);
ObservableReport analyze(const LevelScheme& s, const ManifoldMap& m,
                         const DressedState& d);

}  // namespace dressed_limit

#endif  // DRESSED_LIMIT_OBSERVABLES_HPP

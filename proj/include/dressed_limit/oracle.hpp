#ifndef DRESSED_LIMIT_ORACLE_HPP
#define DRESSED_LIMIT_ORACLE_HPP

#include <functional>

#include "dressed_limit/dressed.hpp"
#include "dressed_limit/manifold.hpp"
#include "dressed_limit/scheme.hpp"

namespace dressed_limit {

// Central finite difference of the tracked dressed eigenvalue with respect
// to one transition's Rabi frequency, (lambda(O+h) - lambda(O-h)) / (2h),
// with the same tracking rule on both sides.  Result is in units of hbar
// and should match the transition coherence by the Hellmann-Feynman theorem.
double fd_eigen_derivative(const LevelScheme& s, const ManifoldMap& m,
                           int transition_index, double step,
                           TrackingRule rule = TrackingRule::overlap,
                           int index = 0);

// Step 1e-5 * max(Omega_jl, reference rate scale).
double default_fd_step(const LevelScheme& s, int transition_index);

struct EvolutionResult {
    double return_fidelity = 0;      // |<bare initial | psi(T)>|^2
    double accumulated_phase = 0;    // unwrapped dynamic phase [rad]
    double predicted_phase = 0;      // integral of the tracked eigenvalue [rad]
    double max_excited_exposure = 0; // time integral of decaying population [s]
    double norm_error = 0;           // max | ||psi|| - 1 | over accepted steps
    long steps = 0;                  // accepted integrator steps
    int winding() const;             // accumulated phase / 2 pi, rounded
    double principal_phase() const;  // accumulated phase in (-pi, pi]
};

// sin^2(pi u) up-down ramp: couplings rise from zero and return to zero.
double ramp_sin2(double u);

// Integrates i d(psi)/dt = H(scale = shape(t/T)) psi from the bare initial
// state with an adaptive embedded Runge-Kutta pair (local error 1e-10).
// shape(0) = shape(1) = 0 so the final state is compared against the bare
// one.  The predicted phase and the excited-state exposure are integrated
// alongside with the same step control.
EvolutionResult evolve_adiabatic(
    const LevelScheme& s, const ManifoldMap& m, double duration,
    const std::function<double(double)>& shape = ramp_sin2);

}  // namespace dressed_limit

#endif  // DRESSED_LIMIT_ORACLE_HPP

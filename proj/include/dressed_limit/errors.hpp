#ifndef DRESSED_LIMIT_ERRORS_HPP
#define DRESSED_LIMIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dressed_limit {

// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scheme file could not be parsed or failed an invariant at parse time.
struct ParseError : Error {
    using Error::Error;
};

// The transition graph does not decompose into closed manifolds; the atom
// would undergo momentum diffusion.
struct OpenManifoldError : Error {
    using Error::Error;
};

// The bare energy of the initial level is degenerate with another reachable
// level, so adiabatic continuation from the bare state is ill-defined.
struct DegenerateBareStateError : Error {
    using Error::Error;
};

// Overlap continuation lost the eigenvector branch even at the minimum step.
struct TrackingLostError : Error {
    using Error::Error;
};

// Zero Rabi frequency paired with a nonzero coherence in a phase-shift term.
struct SingularTermError : Error {
    using Error::Error;
};

// Power-form SNR requested for a laser without a declared power.
struct MissingPowerError : Error {
    using Error::Error;
};

// Power-form SNR requested for a laser driving several transitions.
struct MultiTransitionUnsupportedError : Error {
    using Error::Error;
};

// Time integrator step size underflowed.
struct IntegrationError : Error {
    using Error::Error;
};

// Scan grid exceeds the configured point cap.
struct CapExceededError : Error {
    using Error::Error;
};

// Constrained search found no point satisfying the destruction constraint.
struct InfeasibleError : Error {
    using Error::Error;
};

// Command-line usage error.
struct UsageError : Error {
    using Error::Error;
};

}  // namespace dressed_limit

#endif  // DRESSED_LIMIT_ERRORS_HPP

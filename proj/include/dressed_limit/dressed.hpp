#ifndef DRESSED_LIMIT_DRESSED_HPP
#define DRESSED_LIMIT_DRESSED_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dressed_limit/manifold.hpp"
#include "dressed_limit/scheme.hpp"

namespace dressed_limit {

// The N x N manifold Hamiltonian divided by hbar, restricted to the levels
// reachable from the initial one.  Real symmetric: Rabi phases are gauged
// away at the scheme level.
struct ManifoldHamiltonian {
    Eigen::MatrixXd matrix;          // rad/s
    std::vector<int> level_ids;      // matrix index -> level id
    std::vector<int> index_of;       // level id -> matrix index, -1 if dropped

    int dim() const { return static_cast<int>(level_ids.size()); }
    int index(int level_id) const { return index_of.at(level_id); }
};

enum class TrackingRule { overlap, index, min_excited };

struct TrackingStep {
    double scale = 0;
    double overlap = 0;  // |<psi_prev|psi>| at this continuation step
};

struct DressedState {
    double eigenvalue = 0;           // rad/s
    Eigen::VectorXd psi;             // unit vector over reachable levels
    std::vector<TrackingStep> tracking;
    TrackingRule selection = TrackingRule::overlap;
    int selection_index = 0;         // only for TrackingRule::index

    double population(const ManifoldHamiltonian& h, int level_id) const {
        int i = h.index(level_id);
        return i < 0 ? 0.0 : psi[i] * psi[i];
    }
};

// Diagonal of detunings plus scale * Omega / 2 couplings.
ManifoldHamiltonian build_hamiltonian(const LevelScheme& s,
                                      const ManifoldMap& m, double scale);

// Scale-free degeneracy tolerance for the bare spectrum.
double bare_degeneracy_tolerance(const LevelScheme& s, const ManifoldMap& m);

// Produces the dressed state selected by the rule:
//  - overlap: continuation in coupling scale from 0 to 1 starting at the bare
//    initial level, picking the eigenvector of maximum overlap with the
//    previous step and halving the step whenever that overlap drops below
//    0.9 (minimum step 1e-6).  Requires a nondegenerate bare initial level.
//  - index: k-th eigenvalue (ascending) at full coupling.
//  - min_excited: eigenvector at full coupling minimizing total population
//    on decaying levels; ties broken toward the lowest eigenvalue.
DressedState track_dressed_state(const LevelScheme& s, const ManifoldMap& m,
                                 TrackingRule rule, int index = 0,
                                 double initial_step = 1e-2);

const char* tracking_rule_name(TrackingRule rule);
TrackingRule parse_tracking_rule(const std::string& name, int* index);

}  // namespace dressed_limit

#endif  // DRESSED_LIMIT_DRESSED_HPP

#ifndef DRESSED_LIMIT_MANIFOLD_HPP
#define DRESSED_LIMIT_MANIFOLD_HPP

#include <string>
#include <vector>

#include "dressed_limit/scheme.hpp"

namespace dressed_limit {

// One step of a conflict witness: traversing `transition_index` from `from`
// to `to` (forward = lower->upper).
struct CycleStep {
    int transition_index = 0;
    int from = 0;
    int to = 0;
    bool forward = true;
};

// Photon offsets of each level relative to the initial level.  b[j][n] is
// indexed by laser index j (0-based over lasers) and level index n (0-based
// over levels); entries of unreachable levels stay 0.
struct ManifoldMap {
    std::vector<std::vector<int>> b;   // lasers x levels
    std::vector<int> reachable;        // level ids, sorted
    std::vector<int> unreachable;      // level ids, sorted
    bool closed = true;
    std::vector<CycleStep> conflict;   // first BFS-discovered conflict cycle

    int offset(int laser_id, int level_id) const {
        return b.at(laser_id - 1).at(level_id - 1);
    }
    bool is_reachable(int level_id) const;
};

// Breadth-first assignment of photon offsets over the transition multigraph
// starting at the initial level.  closed = false iff some edge implies two
// different offset vectors for the same level, which means the atom cannot
// return to its starting momentum state.
ManifoldMap analyze_manifold(const LevelScheme& s);

// Same, but throws OpenManifoldError (with the witness cycle in the message)
// when the scheme is open.
ManifoldMap require_closed_manifold(const LevelScheme& s);

// Levels that appear as the upper or lower state of transitions belonging to
// different lasers.
struct SharedState {
    int level = 0;
    std::vector<int> lasers;  // sorted, >= 2 entries
};
std::vector<SharedState> classify_shared_states(const LevelScheme& s,
                                                const ManifoldMap& m);

// Human-readable rendering of the witness, e.g. "1 -(L1)-> 2 <-(L2)- 1".
std::string describe_cycle(const LevelScheme& s,
                           const std::vector<CycleStep>& cycle);

}  // namespace dressed_limit

#endif  // DRESSED_LIMIT_MANIFOLD_HPP

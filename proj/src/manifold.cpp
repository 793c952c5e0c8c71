#include "dressed_limit/manifold.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>

#include "dressed_limit/errors.hpp"

namespace dressed_limit {

bool ManifoldMap::is_reachable(int level_id) const {
    return std::binary_search(reachable.begin(), reachable.end(), level_id);
}

namespace {

// Offset vector implied for the far endpoint of a transition traversal.
std::vector<int> implied_offset(const std::vector<int>& at, int laser_index,
                                bool forward) {
    std::vector<int> o = at;
    o[laser_index] += forward ? -1 : +1;
    return o;
}

}  // namespace

ManifoldMap analyze_manifold(const LevelScheme& s) {
    const int n_levels = s.num_levels();
    const int n_lasers = s.num_lasers();
    const int start = s.context.initial_level;

    // Adjacency: level id -> incident transition indices.
    std::map<int, std::vector<int>> incident;
    for (int i = 0; i < static_cast<int>(s.transitions.size()); ++i) {
        incident[s.transitions[i].lower].push_back(i);
        incident[s.transitions[i].upper].push_back(i);
    }

    std::vector<std::optional<std::vector<int>>> offset(n_levels + 1);
    std::vector<CycleStep> parent_edge(n_levels + 1);  // BFS tree, except start
    offset[start] = std::vector<int>(n_lasers, 0);

    ManifoldMap m;
    m.b.assign(n_lasers, std::vector<int>(n_levels, 0));

    std::deque<int> queue{start};
    while (!queue.empty() && m.closed) {
        int v = queue.front();
        queue.pop_front();
        for (int ti : incident[v]) {
            const Transition& t = s.transitions[ti];
            const bool forward = (t.lower == v);
            const int other = forward ? t.upper : t.lower;
            auto want = implied_offset(*offset[v], t.laser - 1, forward);
            if (!offset[other]) {
                offset[other] = want;
                parent_edge[other] = {ti, v, other, forward};
                queue.push_back(other);
            } else if (*offset[other] != want) {
                // Conflict: walk the BFS tree back from both endpoints.
                m.closed = false;
                std::vector<CycleStep> down, up;
                down.push_back({ti, v, other, forward});
                for (int w = v; w != start; w = parent_edge[w].from)
                    up.push_back(parent_edge[w]);
                std::reverse(up.begin(), up.end());
                m.conflict = up;
                m.conflict.insert(m.conflict.end(), down.begin(), down.end());
                for (int w = other; w != start; w = parent_edge[w].from) {
                    CycleStep back = parent_edge[w];
                    std::swap(back.from, back.to);
                    back.forward = !back.forward;
                    m.conflict.push_back(back);
                }
                break;
            }
        }
    }

    for (const auto& l : s.levels) {
        if (offset[l.id]) {
            m.reachable.push_back(l.id);
            for (int j = 0; j < n_lasers; ++j) m.b[j][l.id - 1] = (*offset[l.id])[j];
        } else {
            m.unreachable.push_back(l.id);
        }
    }
    std::sort(m.reachable.begin(), m.reachable.end());
    std::sort(m.unreachable.begin(), m.unreachable.end());
    return m;
}

ManifoldMap require_closed_manifold(const LevelScheme& s) {
    ManifoldMap m = analyze_manifold(s);
    if (!m.closed)
        throw OpenManifoldError("open manifold (momentum diffusion): cycle " +
                                describe_cycle(s, m.conflict));
    return m;
}

std::vector<SharedState> classify_shared_states(const LevelScheme& s,
                                                const ManifoldMap& m) {
    // A level is "multiply defined" in U/L notation when it appears as an
    // endpoint of more than one transition.
    std::map<int, std::vector<int>> touching;
    for (const auto& t : s.transitions) {
        if (!m.is_reachable(t.lower) || !m.is_reachable(t.upper)) continue;
        touching[t.lower].push_back(t.laser);
        touching[t.upper].push_back(t.laser);
    }
    std::vector<SharedState> out;
    for (auto& [level, lasers] : touching) {
        if (lasers.size() < 2) continue;
        std::sort(lasers.begin(), lasers.end());
        lasers.erase(std::unique(lasers.begin(), lasers.end()), lasers.end());
        out.push_back({level, lasers});
    }
    return out;
}

std::string describe_cycle(const LevelScheme& s,
                           const std::vector<CycleStep>& cycle) {
    std::string out;
    for (const auto& step : cycle) {
        const Transition& t = s.transitions[step.transition_index];
        if (out.empty()) out += std::to_string(step.from);
        out += step.forward ? " -(L" : " <-(L";
        out += std::to_string(t.laser);
        out += step.forward ? ")-> " : ")- ";
        out += std::to_string(step.to);
    }
    return out;
}

}  // namespace dressed_limit

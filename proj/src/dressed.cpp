#include "dressed_limit/dressed.hpp"

#include <algorithm>
#include <cmath>

#include "dressed_limit/errors.hpp"

namespace dressed_limit {

ManifoldHamiltonian build_hamiltonian(const LevelScheme& s,
                                      const ManifoldMap& m, double scale) {
    ManifoldHamiltonian h;
    h.index_of.assign(s.num_levels() + 1, -1);
    for (int id : m.reachable) {
        h.index_of[id] = static_cast<int>(h.level_ids.size());
        h.level_ids.push_back(id);
    }
    const int n = h.dim();
    h.matrix = Eigen::MatrixXd::Zero(n, n);
    for (int id : m.reachable)
        h.matrix(h.index(id), h.index(id)) = s.level(id).detuning;
    for (const auto& t : s.transitions) {
        int a = h.index_of[t.lower], b = h.index_of[t.upper];
        if (a < 0 || b < 0) continue;  // unreachable ends are inert
        h.matrix(a, b) += scale * t.rabi / 2.0;
        h.matrix(b, a) += scale * t.rabi / 2.0;
    }
    return h;
}

double bare_degeneracy_tolerance(const LevelScheme& s, const ManifoldMap& m) {
    double scale = 0;
    for (int id : m.reachable)
        scale = std::max(scale, std::abs(s.level(id).detuning));
    for (const auto& t : s.transitions) scale = std::max(scale, t.rabi);
    return 1e-9 * std::max(scale, 1.0);
}

namespace {

void require_nondegenerate_bare(const LevelScheme& s, const ManifoldMap& m) {
    const double tol = bare_degeneracy_tolerance(s, m);
    const double d0 = s.level(s.context.initial_level).detuning;
    for (int id : m.reachable) {
        if (id == s.context.initial_level) continue;
        if (std::abs(s.level(id).detuning - d0) <= tol)
            throw DegenerateBareStateError(
                "bare energy of the initial level is degenerate with level " +
                std::to_string(id) +
                "; use the min-excited rule or lift the degeneracy with a "
                "detuning");
    }
}

DressedState solve_at_full_coupling(const LevelScheme& s, const ManifoldMap& m,
                                    TrackingRule rule, int index) {
    ManifoldHamiltonian h = build_hamiltonian(s, m, 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h.matrix);

    int pick = 0;
    if (rule == TrackingRule::index) {
        if (index < 0 || index >= h.dim())
            throw Error("eigenvalue index out of range");
        pick = index;
    } else {  // min_excited, ascending scan keeps ties at lowest eigenvalue
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < h.dim(); ++k) {
            double excited = 0;
            for (int i = 0; i < h.dim(); ++i)
                if (s.level(h.level_ids[i]).gamma > 0)
                    excited += eig.eigenvectors()(i, k) * eig.eigenvectors()(i, k);
            if (excited < best - 1e-12) {
                best = excited;
                pick = k;
            }
        }
    }

    DressedState d;
    d.eigenvalue = eig.eigenvalues()[pick];
    d.psi = eig.eigenvectors().col(pick);
    d.selection = rule;
    d.selection_index = pick;
    // Fix the global sign: largest component positive.
    int imax = 0;
    d.psi.cwiseAbs().maxCoeff(&imax);
    if (d.psi[imax] < 0) d.psi = -d.psi;
    return d;
}

DressedState track_by_overlap(const LevelScheme& s, const ManifoldMap& m,
                              double initial_step) {
    require_nondegenerate_bare(s, m);
    ManifoldHamiltonian bare = build_hamiltonian(s, m, 0.0);
    const int n = bare.dim();

    DressedState d;
    d.selection = TrackingRule::overlap;
    d.psi = Eigen::VectorXd::Zero(n);
    d.psi[bare.index(s.context.initial_level)] = 1.0;
    d.eigenvalue = s.level(s.context.initial_level).detuning;

    constexpr double kMinOverlap = 0.9;
    constexpr double kMinStep = 1e-6;

    double scale = 0.0, step = initial_step;
    while (scale < 1.0) {
        const double next = std::min(scale + step, 1.0);
        ManifoldHamiltonian h = build_hamiltonian(s, m, next);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h.matrix);
        int pick = 0;
        double best = -1;
        for (int k = 0; k < n; ++k) {
            double ov = std::abs(d.psi.dot(eig.eigenvectors().col(k)));
            if (ov > best) {
                best = ov;
                pick = k;
            }
        }
        if (best < kMinOverlap) {
            step /= 2;
            if (step < kMinStep)
                throw TrackingLostError(
                    "continuation overlap stayed below 0.9 at minimum step "
                    "near scale " +
                    std::to_string(next));
            continue;
        }
        Eigen::VectorXd v = eig.eigenvectors().col(pick);
        if (d.psi.dot(v) < 0) v = -v;  // keep the branch sign continuous
        d.psi = v;
        d.eigenvalue = eig.eigenvalues()[pick];
        d.tracking.push_back({next, best});
        scale = next;
        step = std::min(step * 2, initial_step);
    }
    return d;
}

}  // namespace

DressedState track_dressed_state(const LevelScheme& s, const ManifoldMap& m,
                                 TrackingRule rule, int index,
                                 double initial_step) {
    if (!m.closed) throw OpenManifoldError("manifold is open");
    if (rule == TrackingRule::overlap)
        return track_by_overlap(s, m, initial_step);
    return solve_at_full_coupling(s, m, rule, index);
}

const char* tracking_rule_name(TrackingRule rule) {
    switch (rule) {
        case TrackingRule::overlap: return "overlap";
        case TrackingRule::index: return "index";
        case TrackingRule::min_excited: return "min-excited";
    }
    return "?";
}

TrackingRule parse_tracking_rule(const std::string& name, int* index) {
    if (index) *index = 0;
    if (name == "overlap") return TrackingRule::overlap;
    if (name == "min-excited") return TrackingRule::min_excited;
    if (name.rfind("index:", 0) == 0) {
        if (index) *index = std::stoi(name.substr(6));
        return TrackingRule::index;
    }
    throw UsageError("unknown tracking rule \"" + name +
                     "\" (overlap | index:k | min-excited)");
}

}  // namespace dressed_limit

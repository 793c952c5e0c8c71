#include "dressed_limit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "dressed_limit/errors.hpp"

namespace dressed_limit {

double default_fd_step(const LevelScheme& s, int transition_index) {
    double rate_scale = 0;
    for (const auto& l : s.levels) rate_scale = std::max(rate_scale, l.gamma);
    if (rate_scale == 0) rate_scale = 1.0;
    return 1e-5 * std::max(s.transitions.at(transition_index).rabi, rate_scale);
}

double fd_eigen_derivative(const LevelScheme& s, const ManifoldMap& m,
                           int transition_index, double step,
                           TrackingRule rule, int index) {
    if (!(step > 0)) throw Error("finite-difference step must be > 0");
    auto eigenvalue_at = [&](double rabi) {
        LevelScheme mod = s;
        mod.transitions.at(transition_index).rabi = rabi;
        return track_dressed_state(mod, m, rule, index).eigenvalue;
    };
    const double rabi = s.transitions.at(transition_index).rabi;
    return (eigenvalue_at(rabi + step) - eigenvalue_at(rabi - step)) /
           (2.0 * step);
}

double ramp_sin2(double u) {
    const double v = std::sin(std::numbers::pi * u);
    return v * v;
}

int EvolutionResult::winding() const {
    return static_cast<int>(
        std::lround(accumulated_phase / (2 * std::numbers::pi)));
}

double EvolutionResult::principal_phase() const {
    const double two_pi = 2 * std::numbers::pi;
    double p = std::remainder(accumulated_phase, two_pi);
    return p;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

// Dormand-Prince 5(4) coefficients.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                 e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640,
                 e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct System {
    VectorXd detunings;    // diagonal part
    MatrixXd couplings;    // off-diagonal part at full scale
    VectorXd decaying;     // 1 where gamma > 0
    const std::function<double(double)>* shape = nullptr;
    double duration = 0;
    VectorXd reference;    // tracked dressed eigenvector, updated on accept
    double tracked_eigenvalue = 0;

    MatrixXd hamiltonian(double t) const {
        double scale = (*shape)(t / duration);
        MatrixXd h = scale * couplings;
        h.diagonal() += detunings;
        return h;
    }

    // Eigenpair of H(t) with maximum overlap against the reference.
    std::pair<double, VectorXd> dressed_at(double t) const {
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(hamiltonian(t));
        int pick = 0;
        double best = -1;
        for (int k = 0; k < reference.size(); ++k) {
            double ov = std::abs(reference.dot(eig.eigenvectors().col(k)));
            if (ov > best) {
                best = ov;
                pick = k;
            }
        }
        VectorXd v = eig.eigenvectors().col(pick);
        if (reference.dot(v) < 0) v = -v;
        return {eig.eigenvalues()[pick], v};
    }

    // State layout: [0, n) = psi, [n] = predicted phase, [n+1] = exposure.
    VectorXcd rhs(double t, const VectorXcd& y) const {
        const int n = static_cast<int>(detunings.size());
        VectorXcd f(n + 2);
        f.head(n) = complex<double>(0, -1) * (hamiltonian(t) * y.head(n));
        f[n] = dressed_at(t).first;
        f[n + 1] = y.head(n).cwiseAbs2().dot(decaying.cast<complex<double>>());
        return f;
    }
};

}  // namespace

EvolutionResult evolve_adiabatic(const LevelScheme& s, const ManifoldMap& m,
                                 double duration,
                                 const std::function<double(double)>& shape) {
    if (!m.closed) throw OpenManifoldError("manifold is open");
    if (!(duration > 0)) throw Error("ramp duration must be > 0");

    ManifoldHamiltonian h0 = build_hamiltonian(s, m, 0.0);
    const int n = h0.dim();
    {
        // Same nondegeneracy condition as overlap tracking.
        const double tol = bare_degeneracy_tolerance(s, m);
        const double d0 = s.level(s.context.initial_level).detuning;
        for (int id : m.reachable) {
            if (id == s.context.initial_level) continue;
            if (std::abs(s.level(id).detuning - d0) <= tol)
                throw DegenerateBareStateError(
                    "bare initial level degenerate with level " +
                    std::to_string(id));
        }
    }

    System sys;
    sys.detunings = h0.matrix.diagonal();
    sys.couplings = build_hamiltonian(s, m, 1.0).matrix;
    sys.couplings.diagonal().setZero();
    sys.decaying = VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        if (s.level(h0.level_ids[i]).gamma > 0) sys.decaying[i] = 1.0;
    sys.shape = &shape;
    sys.duration = duration;
    sys.reference = VectorXd::Zero(n);
    const int init = h0.index(s.context.initial_level);
    sys.reference[init] = 1.0;

    VectorXcd y = VectorXcd::Zero(n + 2);
    y[init] = 1.0;

    constexpr double tol = 1e-12;
    const double h_min = duration * 1e-14;
    double t = 0, h = duration * 1e-4;
    double phase_unwrapped = 0;
    complex<double> d_prev = 1.0;
    EvolutionResult res;

    VectorXcd k1 = sys.rhs(t, y);
    while (t < duration) {
        h = std::min(h, duration - t);
        VectorXcd k2 = sys.rhs(t + h * a21, y + h * (a21 * k1));
        VectorXcd k3 = sys.rhs(t + h * (a31 + a32), y + h * (a31 * k1 + a32 * k2));
        VectorXcd k4 = sys.rhs(t + h * (a41 + a42 + a43),
                               y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        VectorXcd k5 =
            sys.rhs(t + h * (a51 + a52 + a53 + a54),
                    y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        VectorXcd k6 = sys.rhs(
            t + h,
            y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        VectorXcd y5 =
            y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        VectorXcd k7 = sys.rhs(t + h, y5);
        double err = (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                           e7 * k7))
                         .norm();
        if (err <= tol) {
            t += h;
            y = y5;
            k1 = k7;  // FSAL
            ++res.steps;
            res.norm_error = std::max(res.norm_error,
                                      std::abs(y.head(n).norm() - 1.0));
            auto [lam, vec] = sys.dressed_at(t);
            sys.reference = vec;
            sys.tracked_eigenvalue = lam;
            complex<double> d = vec.cast<complex<double>>().dot(y.head(n));
            if (std::abs(d) > 1e-6) {
                phase_unwrapped += std::arg(d * std::conj(d_prev));
                d_prev = d;
            }
        }
        double factor =
            err > 0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        if (h < h_min)
            throw IntegrationError("step size underflow at t = " +
                                   std::to_string(t));
    }

    res.return_fidelity = std::norm(y[init]);
    res.accumulated_phase = -phase_unwrapped;
    res.predicted_phase = y[n].real();
    res.max_excited_exposure = y[n + 1].real();
    return res;
}

}  // namespace dressed_limit

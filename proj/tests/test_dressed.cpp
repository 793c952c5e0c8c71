#include <doctest.h>

#include <cmath>
#include <random>

#include "dressed_limit/dressed.hpp"
#include "dressed_limit/errors.hpp"
#include "dressed_limit/explorer.hpp"
#include "test_util.hpp"

using namespace dressed_limit;

namespace {

// Branch of the 2x2 eigenvalue continuous with 0 at Omega = 0.
double two_level_eigenvalue(double delta, double omega) {
    double root = std::sqrt(delta * delta + omega * omega);
    return (delta - (delta >= 0 ? root : -root)) / 2.0;
}

}  // namespace

TEST_CASE("build_hamiltonian") {
    SUBCASE("two-level") {
        LevelScheme s = testutil::two_level(10, 2);
        ManifoldHamiltonian h =
            build_hamiltonian(s, analyze_manifold(s), 1.0);
        REQUIRE(h.dim() == 2);
        CHECK(h.matrix(0, 0) == 0);
        CHECK(h.matrix(1, 1) == 10);
        CHECK(h.matrix(0, 1) == 1);
        CHECK(h.matrix(1, 0) == 1);
    }
    SUBCASE("lambda at two-photon resonance") {
        LevelScheme s = testutil::lambda_scheme(0, 7, 0, 2, 3);
        ManifoldHamiltonian h =
            build_hamiltonian(s, analyze_manifold(s), 1.0);
        REQUIRE(h.dim() == 3);
        CHECK(h.matrix(1, 1) == 7);
        CHECK(h.matrix(0, 1) == 1.0);
        CHECK(h.matrix(2, 1) == 1.5);
        CHECK(h.matrix(0, 2) == 0.0);
        CHECK(h.matrix.isApprox(h.matrix.transpose()));
    }
    SUBCASE("scale 0 is the bare diagonal") {
        LevelScheme s = testutil::two_level(10, 2);
        ManifoldHamiltonian h =
            build_hamiltonian(s, analyze_manifold(s), 0.0);
        CHECK(h.matrix(0, 1) == 0);
        CHECK(h.matrix(1, 1) == 10);
    }
}

TEST_CASE("tracked two-level eigenvalue") {
    LevelScheme s = testutil::two_level(10, 2);
    DressedState d =
        track_dressed_state(s, analyze_manifold(s), TrackingRule::overlap);
    CHECK(d.eigenvalue == doctest::Approx(-0.09901951359278449).epsilon(1e-9));
    CHECK(std::abs(d.psi.norm() - 1.0) < 1e-12);
}

TEST_CASE("two-level closed form across a grid") {
    for (double delta : {-40.0, -5.0, 0.5, 3.0, 25.0, 90.0}) {
        for (double omega : {0.1, 1.0, 4.0, 20.0}) {
            LevelScheme s = testutil::two_level(delta, omega);
            ManifoldMap m = analyze_manifold(s);
            DressedState d =
                track_dressed_state(s, m, TrackingRule::overlap);
            double expect = two_level_eigenvalue(delta, omega);
            CHECK(d.eigenvalue ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("min-excited rule finds the lambda dark state") {
    LevelScheme s = testutil::lambda_scheme(0, 10, 0, 2, 2);
    ManifoldMap m = analyze_manifold(s);
    DressedState d = track_dressed_state(s, m, TrackingRule::min_excited);
    ManifoldHamiltonian h = build_hamiltonian(s, m, 1.0);
    CHECK(d.eigenvalue == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.population(h, 2) < 1e-14);
    // psi = (|1> - |3>)/sqrt(2) up to a global sign
    CHECK(std::abs(d.psi[h.index(1)]) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(std::abs(d.psi[h.index(3)]) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(d.psi[h.index(1)] * d.psi[h.index(3)] < 0);
}

TEST_CASE("overlap rule rejects a degenerate bare manifold") {
    LevelScheme s = testutil::lambda_scheme(0, 10, 0, 2, 2);
    CHECK_THROWS_AS(
        track_dressed_state(s, analyze_manifold(s), TrackingRule::overlap),
        DegenerateBareStateError);
}

TEST_CASE("index rule returns the k-th eigenvalue") {
    LevelScheme s = testutil::two_level(10, 2);
    ManifoldMap m = analyze_manifold(s);
    DressedState lo = track_dressed_state(s, m, TrackingRule::index, 0);
    DressedState hi = track_dressed_state(s, m, TrackingRule::index, 1);
    CHECK(lo.eigenvalue < hi.eigenvalue);
    CHECK(lo.eigenvalue + hi.eigenvalue == doctest::Approx(10.0));
    CHECK_THROWS_AS(track_dressed_state(s, m, TrackingRule::index, 5), Error);
}

TEST_CASE("eigenpair residual on random schemes") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        LevelScheme s = random_scheme(rng);
        ManifoldMap m = analyze_manifold(s);
        DressedState d;
        try {
            d = track_dressed_state(s, m, TrackingRule::overlap);
        } catch (const DegenerateBareStateError&) {
            continue;
        }
        ManifoldHamiltonian h = build_hamiltonian(s, m, 1.0);
        double res = (h.matrix * d.psi - d.eigenvalue * d.psi).norm();
        CHECK(res <= 1e-9 * h.matrix.norm());
        CHECK(std::abs(d.psi.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("continuation is reparameterization-stable") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 30; ++i) {
        LevelScheme s = random_scheme(rng);
        ManifoldMap m = analyze_manifold(s);
        DressedState coarse, fine;
        try {
            coarse = track_dressed_state(s, m, TrackingRule::overlap, 0, 1e-2);
            fine = track_dressed_state(s, m, TrackingRule::overlap, 0, 1e-3);
        } catch (const DegenerateBareStateError&) {
            continue;
        }
        CHECK(std::abs(coarse.psi.dot(fine.psi)) > 1.0 - 1e-8);
        for (const auto& step : coarse.tracking) CHECK(step.overlap >= 0.9);
    }
}

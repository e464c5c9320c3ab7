#include <doctest.h>

#include <random>

#include "mixtopo/piplot.hpp"
#include "support.hpp"

using namespace mixtopo;

namespace {

int risings(const std::vector<PiSolution>& sols) {
    int n = 0;
    for (const PiSolution& s : sols)
        if (s.direction == CrossDir::Rising) ++n;
    return n;
}

} // namespace

TEST_CASE("pi_of_alpha: endpoint conventions and symmetry") {
    const Mixture m = testsup::example1();
    CHECK(pi_of_alpha(m, 0, 1, 0.0) == 0.0);
    CHECK(pi_of_alpha(m, 0, 1, 1.0) == 1.0);
    // the fixture maps to itself under the label swap, so the level is exact
    CHECK(pi_of_alpha(m, 0, 1, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("pi_of_alpha: coincident means are rejected") {
    Mat c1 = Mat::Identity(2, 2), c2 = 0.4 * Mat::Identity(2, 2);
    Vec mu = Vec::Constant(2, 1.0);
    const Mixture m = Mixture::make({{mu, c1}, {mu, c2}}, {0.5, 0.5});
    CHECK_THROWS_AS(pi_of_alpha(m, 0, 1, 0.3), CoincidentMeans);
    CHECK_THROWS_AS(solve_pi_equation(m, 0, 1, 0.5), CoincidentMeans);
}

TEST_CASE("pi_of_alpha: label-swap duality") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Mixture m = testsup::random_mixture(rng);
        const double a = ua(rng);
        const double lhs = pi_of_alpha(m, 1, 0, 1.0 - a);
        const double rhs = 1.0 - pi_of_alpha(m, 0, 1, a);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("solve_pi_equation: the balanced fixture level crosses five times") {
    const Mixture m = testsup::example1();
    const auto sols = solve_pi_equation(m, 0, 1, 0.5);
    REQUIRE(sols.size() == 5);
    // frozen against an x-space critical-point search: the saddle posteriors
    // are (0.04438..., 0.95562...) and the balanced crossing is exact
    CHECK(sols[0].alpha == doctest::Approx(2.784386965e-05).epsilon(1e-6));
    CHECK(sols[1].alpha == doctest::Approx(0.04438086712).epsilon(1e-9));
    CHECK(sols[2].alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sols[3].alpha == doctest::Approx(0.95561913288).epsilon(1e-9));
    CHECK(sols[4].alpha == doctest::Approx(1.0 - 2.784386965e-05).epsilon(1e-9));
    const CrossDir expected[] = {CrossDir::Rising, CrossDir::Falling, CrossDir::Rising,
                                 CrossDir::Falling, CrossDir::Rising};
    for (int k = 0; k < 5; ++k) CHECK(sols[k].direction == expected[k]);
}

TEST_CASE("solve_pi_equation: extreme level in the unimodal band has one solution") {
    Mat cov = Mat::Identity(1, 1);
    Vec m1 = Vec::Constant(1, -std::sqrt(2.0)), m2 = Vec::Constant(1, std::sqrt(2.0));
    const Mixture m = Mixture::make({{m1, cov}, {m2, cov}}, {0.5, 0.5});
    const auto sols = solve_pi_equation(m, 0, 1, 1e-4);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].direction == CrossDir::Rising);
}

TEST_CASE("solve_pi_equation: four-mode fixture at the balanced level") {
    const Mixture m = testsup::example2();
    const auto sols = solve_pi_equation(m, 0, 1, 0.5);
    REQUIRE(sols.size() == 7);
    std::vector<double> rise;
    for (const PiSolution& s : sols)
        if (s.direction == CrossDir::Rising) rise.push_back(s.alpha);
    REQUIRE(rise.size() == 4);
    // frozen from an x-space critical-point search (posterior coordinates)
    CHECK(rise[0] == doctest::Approx(0.00083870828).epsilon(1e-6));
    CHECK(rise[1] == doctest::Approx(0.13941507265).epsilon(1e-8));
    CHECK(rise[2] == doctest::Approx(0.86058492735).epsilon(1e-8));
    CHECK(rise[3] == doctest::Approx(0.99916129172).epsilon(1e-8));
}

TEST_CASE("solve_pi_equation: odd count with alternating directions") {
    std::mt19937_64 rng(8899);
    std::uniform_real_distribution<double> upi(0.02, 0.98);
    for (int trial = 0; trial < 60; ++trial) {
        const Mixture m = testsup::random_mixture(rng);
        const auto sols = solve_pi_equation(m, 0, 1, upi(rng));
        CHECK(sols.size() % 2 == 1);
        for (std::size_t k = 0; k < sols.size(); ++k) {
            const CrossDir want = k % 2 == 0 ? CrossDir::Rising : CrossDir::Falling;
            CHECK(sols[k].direction == want);
        }
    }
}

TEST_CASE("solve_pi_equation: survives extreme separations") {
    // outermost crossings far below representable alpha still count
    Mat cov = 0.05 * Mat::Identity(1, 1);
    Vec m1 = Vec::Constant(1, -8.0), m2 = Vec::Constant(1, 8.0);
    const Mixture m = Mixture::make({{m1, cov}, {m2, cov}}, {0.5, 0.5});
    const auto sols = solve_pi_equation(m, 0, 1, 0.5);
    REQUIRE(sols.size() == 3);
    CHECK(risings(sols) == 2);
    const auto cps = critical_points_for_pi(m, 0, 1, 0.5);
    REQUIRE(cps.size() == 3);
    CHECK((cps[0].x - m2).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((cps[2].x - m1).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("critical_points_for_pi: fixture classification") {
    const Mixture m = testsup::example1();
    const auto cps = critical_points_for_pi(m, 0, 1, 0.5);
    REQUIRE(cps.size() == 5);
    int modes = 0, saddles = 0;
    for (const CriticalPoint& cp : cps) {
        if (cp.kind == CriticalKind::Mode) {
            ++modes;
            CHECK(cp.neg_eigs == 2);
        }
        if (cp.kind == CriticalKind::Saddle) {
            ++saddles;
            CHECK(cp.neg_eigs == 1);
        }
    }
    CHECK(modes == 3);
    CHECK(saddles == 2);
    // the central mode sits at the hand-solved ridgeline point
    CHECK(cps[2].x[0] == doctest::Approx(20.0 / 21.0).epsilon(1e-10));
    CHECK(cps[2].x[1] == doctest::Approx(1.0 / 21.0).epsilon(1e-10));
}

TEST_CASE("critical_points_for_pi: posterior fixed point at every critical point") {
    const Mixture m = testsup::example2();
    const auto cps = critical_points_for_pi(m, 0, 1, 0.5);
    REQUIRE(cps.size() == 7);
    const Mixture sub = m; // same pair, same weights
    for (const CriticalPoint& cp : cps) {
        const SimplexPoint post = posterior(sub, cp.x);
        CHECK((post.coords() - cp.alpha.coords()).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("critical_points_for_pi: one-dimensional antimodes are local minima") {
    Mat cov = Mat::Identity(1, 1);
    Vec m1 = Vec::Constant(1, -1.6), m2 = Vec::Constant(1, 1.6); // separation > 4
    const Mixture m = Mixture::make({{m1, cov}, {m2, cov}}, {0.5, 0.5});
    const auto cps = critical_points_for_pi(m, 0, 1, 0.5);
    REQUIRE(cps.size() == 3);
    CHECK(cps[0].kind == CriticalKind::Mode);
    CHECK(cps[1].kind == CriticalKind::LocalMin);
    CHECK(cps[1].neg_eigs == 0);
    CHECK(cps[2].kind == CriticalKind::Mode);
}

TEST_CASE("critical_points_for_pi: weak separation leaves a single mode") {
    Mat cov = Mat::Identity(1, 1);
    Vec m1 = Vec::Zero(1), m2 = Vec::Constant(1, 1.8); // separation 3.24 < 4
    const Mixture m = Mixture::make({{m1, cov}, {m2, cov}}, {0.5, 0.5});
    for (double pi : {0.1, 0.35, 0.5, 0.9}) {
        const auto cps = critical_points_for_pi(m, 0, 1, pi);
        REQUIRE(cps.size() == 1);
        CHECK(cps[0].kind == CriticalKind::Mode);
    }
}

TEST_CASE("mode_count: fixture bands") {
    const Mixture m = testsup::example1();
    CHECK(mode_count(m, 0, 1, 0.5) == 3);
    CHECK(mode_count(m, 0, 1, 0.1) == 2);
    CHECK(mode_count(m, 0, 1, 0.01) == 1);
    CHECK(mode_count(m, 0, 1, 0.99) == 1);
    const Mixture m2 = testsup::example2();
    CHECK(mode_count(m2, 0, 1, 0.5) == 4);
    CHECK(mode_count(m2, 0, 1, 0.505) == 3);
    CHECK(mode_count(m2, 0, 1, 0.6) == 2);
    CHECK(mode_count(m2, 0, 1, 0.8) == 1);
}

TEST_CASE("modality_bands: fixture structure") {
    const Mixture m = testsup::example1();
    const ModalityBands b = modality_bands(m, 0, 1);
    REQUIRE(b.bands.size() == 5);
    const int counts[] = {1, 2, 3, 2, 1};
    for (int k = 0; k < 5; ++k) CHECK(b.bands[k].modes == counts[k]);
    REQUIRE(b.breakpoints.size() == 4);
    CHECK(b.breakpoints[0] == doctest::Approx(0.02687966767).epsilon(1e-7));
    CHECK(b.breakpoints[1] == doctest::Approx(0.25644535344).epsilon(1e-8));
    CHECK(b.breakpoints[2] == doctest::Approx(0.74355464656).epsilon(1e-8));
    CHECK(b.breakpoints[3] == doctest::Approx(0.97312033233).epsilon(1e-7));
    // the swap-symmetric fixture has a swap-symmetric breakpoint set
    CHECK(b.breakpoints[0] == doctest::Approx(1.0 - b.breakpoints[3]).epsilon(1e-9));
    CHECK(b.breakpoints[1] == doctest::Approx(1.0 - b.breakpoints[2]).epsilon(1e-9));
    CHECK(b.zero_alphas.size() == 4);
    // bands partition (0, 1) and adjacent counts differ by exactly one
    CHECK(b.bands.front().lo == 0.0);
    CHECK(b.bands.back().hi == 1.0);
    for (std::size_t k = 1; k < b.bands.size(); ++k) {
        CHECK(b.bands[k].lo == b.bands[k - 1].hi);
        CHECK(std::abs(b.bands[k].modes - b.bands[k - 1].modes) == 1);
    }
}

TEST_CASE("modality_bands: four-mode fixture structure") {
    const Mixture m = testsup::example2();
    const ModalityBands b = modality_bands(m, 0, 1);
    REQUIRE(b.bands.size() == 7);
    const int counts[] = {1, 2, 3, 4, 3, 2, 1};
    for (int k = 0; k < 7; ++k) CHECK(b.bands[k].modes == counts[k]);
    // four-mode band, frozen from the saddle-node degeneracy cross-check
    CHECK(b.bands[3].lo == doctest::Approx(0.49975331271).epsilon(1e-8));
    CHECK(b.bands[3].hi == doctest::Approx(0.50024668729).epsilon(1e-8));
    // two-or-more band
    CHECK(b.bands[1].lo == doctest::Approx(0.24897696293).epsilon(1e-8));
    CHECK(b.bands[5].hi == doctest::Approx(0.75102303707).epsilon(1e-8));
    // three-or-more band
    CHECK(b.bands[2].lo == doctest::Approx(0.48892145094).epsilon(1e-8));
    CHECK(b.bands[4].hi == doctest::Approx(0.51107854906).epsilon(1e-8));
}

TEST_CASE("modality_bands: breakpoints coincide with the pi values at the q zeroes") {
    const Mixture m = testsup::example2();
    const ModalityBands b = modality_bands(m, 0, 1);
    std::vector<double> expect;
    for (double z : b.zero_alphas) expect.push_back(pi_of_alpha(m, 0, 1, z));
    std::sort(expect.begin(), expect.end());
    REQUIRE(expect.size() == b.breakpoints.size());
    for (std::size_t k = 0; k < expect.size(); ++k)
        CHECK(std::abs(expect[k] - b.breakpoints[k]) <= 1e-9);
}

TEST_CASE("modality_bands: unseparated or coincident pairs collapse to one band") {
    Mat cov = Mat::Identity(1, 1);
    Vec m1 = Vec::Zero(1), m2 = Vec::Constant(1, std::sqrt(3.0));
    const Mixture weak = Mixture::make({{m1, cov}, {m2, cov}}, {0.5, 0.5});
    const ModalityBands b = modality_bands(weak, 0, 1);
    REQUIRE(b.bands.size() == 1);
    CHECK(b.bands[0].modes == 1);
    CHECK(b.breakpoints.empty());

    Mat c2 = 0.7 * Mat::Identity(1, 1);
    const Mixture dup = Mixture::make({{m1, cov}, {m1, c2}}, {0.5, 0.5});
    const ModalityBands bd = modality_bands(dup, 0, 1);
    REQUIRE(bd.bands.size() == 1);
    CHECK(bd.bands[0].modes == 1);
}

TEST_CASE("modality_bands: band midpoints have the alternating solution count") {
    for (const Mixture& m : {testsup::example1(), testsup::example2()}) {
        const ModalityBands b = modality_bands(m, 0, 1);
        for (const Band& band : b.bands) {
            const double mid = 0.5 * (band.lo + band.hi);
            const auto sols = solve_pi_equation(m, 0, 1, mid);
            CHECK(static_cast<int>(sols.size()) == 2 * band.modes - 1);
            CHECK(mode_count(m, 0, 1, mid) == band.modes);
        }
    }
}

TEST_CASE("pi_curve: samples cover the grid and hold the endpoint conventions") {
    const Mixture m = testsup::example1();
    const PiCurve c = pi_curve(m, 0, 1, 512);
    REQUIRE(c.samples.size() > 512);
    CHECK(c.samples.front().first == 0.0);
    CHECK(c.samples.front().second == 0.0);
    CHECK(c.samples.back().first == 1.0);
    CHECK(c.samples.back().second == 1.0);
    for (const auto& [a, pi] : c.samples) {
        CHECK(pi >= 0.0);
        CHECK(pi <= 1.0);
    }
}

#include <doctest.h>

#include <random>

#include "mixtopo/model.hpp"
#include "support.hpp"

using namespace mixtopo;

TEST_CASE("validate: identity single component") {
    Mat cov = Mat::Identity(1, 1);
    Vec mean = Vec::Zero(1);
    const Mixture m = Mixture::make({{mean, cov}}, {1.0});
    CHECK(m.dim() == 1);
    CHECK(m.component_count() == 1);
}

TEST_CASE("validate: the unequal-variance two-component fixture") {
    const Mixture m = testsup::example1();
    CHECK(m.dim() == 2);
    CHECK(m.component(0).cov(1, 1) == doctest::Approx(0.05));
    CHECK(m.weight(0) == doctest::Approx(0.5));
}

TEST_CASE("validate: rejections") {
    Mat bad = Mat::Zero(2, 2);
    bad << 1.0, 0.0, 0.0, -0.1; // eigenvalue -0.1
    Vec mean = Vec::Zero(2);
    CHECK_THROWS_AS(Mixture::make({{mean, bad}}, {1.0}), NotPositiveDefinite);

    Mat eye = Mat::Identity(2, 2);
    CHECK_THROWS_AS(Mixture::make({{Vec::Zero(3), eye}}, {1.0}), DimensionMismatch);
    CHECK_THROWS_AS(Mixture::make({{mean, eye}}, {0.4}), BadWeights);
    CHECK_THROWS_AS(Mixture::make({{mean, eye}, {mean, eye}}, {1.4, -0.4}), BadWeights);

    Mat asym = eye;
    asym(0, 1) = 0.3; // not symmetric
    CHECK_THROWS_AS(Mixture::make({{mean, asym}}, {1.0}), NotPositiveDefinite);
}

TEST_CASE("validate: near-one weight sums are renormalized") {
    Mat eye = Mat::Identity(2, 2);
    Vec mean = Vec::Zero(2);
    const Mixture m =
        Mixture::make({{mean, eye}, {mean, eye}}, {0.5 + 2e-10, 0.5 + 2e-10});
    CHECK(m.weight(0) + m.weight(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("log_density: standard normal at zero") {
    Mat cov = Mat::Identity(1, 1);
    const Mixture m = Mixture::make({{Vec::Zero(1), cov}}, {1.0});
    CHECK(density(m, Vec::Zero(1)) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
}

TEST_CASE("log_density: duplicate components collapse") {
    Mat cov = Mat::Identity(1, 1);
    const Mixture dup =
        Mixture::make({{Vec::Zero(1), cov}, {Vec::Zero(1), cov}}, {0.5, 0.5});
    const Mixture one = Mixture::make({{Vec::Zero(1), cov}}, {1.0});
    for (double x : {-2.0, -0.3, 0.0, 1.7}) {
        Vec xv = Vec::Constant(1, x);
        CHECK(log_density(dup, xv) == doctest::Approx(log_density(one, xv)).epsilon(1e-14));
    }
}

TEST_CASE("log_density: matches the naive per-component sum") {
    const Mixture m = testsup::example1();
    Vec x(2);
    x << 0.9524, 0.0476;
    const double naive = testsup::naive_density(m, x);
    CHECK(density(m, x) == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("log_density: finite far into the tails") {
    const Mixture m = testsup::example1();
    Vec x(2);
    x << 120.0, -90.0;
    CHECK(std::isfinite(log_density(m, x)));
    CHECK(density(m, x) >= 0.0);
    CHECK_THROWS_AS(log_density(m, Vec::Zero(3)), DimensionMismatch);
}

TEST_CASE("gradient: zero at a Gaussian mean and at a symmetric midpoint") {
    Mat cov = Mat::Identity(2, 2);
    const Mixture one = Mixture::make({{Vec::Zero(2), cov}}, {1.0});
    CHECK(gradient(one, Vec::Zero(2)).norm() == doctest::Approx(0.0));

    Mat c1 = Mat::Identity(1, 1);
    const Mixture sym = Mixture::make(
        {{Vec::Constant(1, -1.0), c1}, {Vec::Constant(1, 1.0), c1}}, {0.5, 0.5});
    CHECK(gradient(sym, Vec::Zero(1)).norm() == doctest::Approx(0.0).epsilon(1e-16));
}

TEST_CASE("gradient: matches central finite differences on the fixture") {
    const Mixture m = testsup::example1();
    Vec x(2);
    x << 0.5, 0.5;
    const Vec fd = testsup::fd_gradient(m, x, 1e-6);
    const Vec an = gradient(m, x);
    CHECK((an - fd).norm() / fd.norm() < 1e-6);
}

TEST_CASE("hessian: second derivative of a standard normal at zero") {
    Mat cov = Mat::Identity(1, 1);
    const Mixture m = Mixture::make({{Vec::Zero(1), cov}}, {1.0});
    const Mat h = hessian(m, Vec::Zero(1));
    CHECK(h(0, 0) == doctest::Approx(-0.3989422804014327).epsilon(1e-12));
}

TEST_CASE("gradient and hessian: finite-difference agreement on random instances") {
    std::mt19937_64 rng(20240801);
    testsup::RandomMixtureSpec spec;
    spec.k_min = 1;
    spec.k_max = 3;
    double worst_g = 0.0, worst_h = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Mixture m = testsup::random_mixture(rng, spec);
        std::uniform_real_distribution<double> pos(-3.5, 3.5);
        Vec x(m.dim());
        for (int k = 0; k < m.dim(); ++k) x[k] = pos(rng);
        const Vec g = gradient(m, x);
        const Vec g_fd = testsup::fd_gradient(m, x, 1e-5);
        const Mat h = hessian(m, x);
        const Mat h_fd = testsup::fd_hessian(m, x, 1e-4);
        const double dref = density(m, x);
        worst_g = std::max(worst_g, (g - g_fd).norm() / std::max(g.norm(), 1e-9 * dref));
        worst_h = std::max(worst_h, (h - h_fd).norm() / std::max(h.norm(), 1e-9 * dref));
    }
    CHECK(worst_g < 1e-5);
    CHECK(worst_h < 1e-4);
}

TEST_CASE("posterior: equal-weight duplicates split evenly") {
    Mat cov = Mat::Identity(2, 2);
    const Mixture m =
        Mixture::make({{Vec::Zero(2), cov}, {Vec::Zero(2), cov}}, {0.5, 0.5});
    Vec x(2);
    x << 0.3, -1.2;
    const SimplexPoint p = posterior(m, x);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("posterior: dominance at a far-separated mean") {
    Mat cov = Mat::Identity(2, 2);
    Vec far = Vec::Constant(2, 12.0);
    const Mixture m = Mixture::make({{Vec::Zero(2), cov}, {far, cov}}, {0.5, 0.5});
    const SimplexPoint p = posterior(m, Vec::Zero(2));
    CHECK(p[0] >= 1.0 - 1e-6);
}

TEST_CASE("posterior: coordinates form a simplex point") {
    std::mt19937_64 rng(77);
    testsup::RandomMixtureSpec spec;
    spec.k_min = 2;
    spec.k_max = 4;
    for (int trial = 0; trial < 50; ++trial) {
        const Mixture m = testsup::random_mixture(rng, spec);
        std::uniform_real_distribution<double> pos(-4.0, 4.0);
        Vec x(m.dim());
        for (int k = 0; k < m.dim(); ++k) x[k] = pos(rng);
        const SimplexPoint p = posterior(m, x);
        double sum = 0.0;
        for (int k = 0; k < p.size(); ++k) {
            CHECK(p[k] >= 0.0);
            CHECK(p[k] <= 1.0);
            sum += p[k];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("density: invariant under component permutation") {
    std::mt19937_64 rng(31337);
    testsup::RandomMixtureSpec spec;
    spec.k_min = 3;
    spec.k_max = 3;
    const Mixture m = testsup::random_mixture(rng, spec);
    std::vector<std::pair<Vec, Mat>> perm;
    for (int j : {2, 0, 1})
        perm.emplace_back(m.component(j).mean, m.component(j).cov);
    const Mixture mp = Mixture::make(perm, {m.weight(2), m.weight(0), m.weight(1)});
    std::uniform_real_distribution<double> pos(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vec x(m.dim());
        for (int k = 0; k < m.dim(); ++k) x[k] = pos(rng);
        CHECK(log_density(m, x) == doctest::Approx(log_density(mp, x)).epsilon(1e-13));
    }
}

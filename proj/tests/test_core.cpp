#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wolff/measure.hpp"
#include "wolff/params.hpp"

using namespace wolff;

namespace {
Measure unit_bump(int n = 3, double R = 1.0, double gamma = 0.0, double c = 1.0) {
    return Measure({RadialPowerBump{Point(n, 0.0), R, gamma, c}});
}
}  // namespace

TEST_CASE("make_params: derived exponents and rejections") {
    auto pr = make_params(3, 2.0, 0.5, 1.0);
    CHECK(pr.growth_exp == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(pr.riccati_b == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pr.kernel_exp == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(make_params(3, 2.0, 1.5, 1.0), InvalidExponents);  // q >= p-1
    CHECK_THROWS_AS(make_params(3, 3.0, 1.0, 1.0), InvalidExponents);  // alpha p = n

    auto pr2 = make_params(5, 3.0, 1.0, 1.0);
    CHECK(pr2.growth_exp == doctest::Approx(2.0));
    CHECK(pr2.riccati_b == doctest::Approx(2.0));

    // internal consistency identities
    CHECK(pr2.riccati_b == pr2.kappa_exp);
    CHECK(pr2.growth_exp ==
          doctest::Approx(1.0 + pr2.q * pr2.growth_exp / (pr2.p - 1.0)).epsilon(1e-15));
}

TEST_CASE("hessian_params: exponent dictionary") {
    auto h1 = hessian_params(1, 3);
    CHECK(h1.alpha == doctest::Approx(1.0));
    CHECK(h1.p == doctest::Approx(2.0));
    auto h2 = hessian_params(2, 5);
    CHECK(h2.alpha == doctest::Approx(4.0 / 3.0));
    CHECK(h2.p == doctest::Approx(3.0));
    CHECK_THROWS_AS(hessian_params(3, 5), InvalidExponents);
}

TEST_CASE("sphere_cap_fraction: closed-form anchors") {
    CHECK(sphere_cap_fraction(3, 1.0, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sphere_cap_fraction(2, 1.0, 1.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(sphere_cap_fraction(4, 0.1, 0.1, 1.0) == 1.0);
    CHECK(sphere_cap_fraction(3, 5.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("sphere_cap_fraction vs Monte Carlo") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> U(0.1, 2.5);
    std::uniform_int_distribution<int> dims(2, 5);
    for (int trial = 0; trial < 50; ++trial) {
        int n = dims(rng);
        double d = U(rng), s = U(rng), r = U(rng);
        double exact = sphere_cap_fraction(n, d, s, r);
        auto mc = testing::mc_cap_fraction(n, d, s, r, 40000, 7000 + trial);
        CHECK(std::fabs(exact - mc.value) <= 3.0 * mc.stderr_ + 1e-9);
    }
}

TEST_CASE("ball_mass: atoms respect the open-ball convention") {
    Measure m({AtomComponent{{0.0, 0.0, 0.0}, 1.0}});
    Point x{1.0, 0.0, 0.0};
    CHECK(m.ball_mass(x, 2.0) == doctest::Approx(1.0));
    CHECK(m.ball_mass(x, 0.5) == 0.0);
    CHECK(m.ball_mass(x, 1.0) == 0.0);  // boundary atom excluded
    CHECK(m.ball_mass(x, 0.0) == 0.0);
}

TEST_CASE("ball_mass: concentric bump closed form") {
    auto m = unit_bump();
    Point o(3, 0.0);
    CHECK(m.ball_mass(o, 0.5) == doctest::Approx(M_PI / 6.0).epsilon(1e-12));
    CHECK(m.ball_mass(o, 1.0) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
    CHECK(m.ball_mass(o, 7.0) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
}

TEST_CASE("ball_mass: lens intersection frozen value") {
    // Unit-density unit ball, off-center ball: exact lens volume
    // (pi/12)(4+d)(2-d)^2 at d = 1.5, frozen after a >=1e7-sample MC check.
    auto m = unit_bump();
    Point x{1.5, 0.0, 0.0};
    const double frozen = 0.35997415822383045;
    CHECK(m.ball_mass(x, 1.0) == doctest::Approx(frozen).epsilon(1e-10));

    auto mc = testing::mc_ball_mass(m, x, 1.0, 200000, 99);
    CHECK(std::fabs(mc.value - frozen) <= 4.0 * mc.stderr_);
}

TEST_CASE("ball_mass: off-center matches Monte Carlo for random bump mixtures") {
    std::mt19937_64 rng(20240818);
    std::uniform_real_distribution<double> U(0.2, 2.0);
    std::uniform_int_distribution<int> dims(2, 5);
    for (int trial = 0; trial < 12; ++trial) {
        int n = dims(rng);
        std::vector<MeasureComponent> comps;
        for (int k = 0; k < 3; ++k) {
            Point c(n, 0.0);
            c[0] = U(rng) - 1.0;
            if (n > 1) c[1] = U(rng) - 1.0;
            comps.push_back(RadialPowerBump{c, U(rng), (k % 2) ? 0.0 : 0.7, U(rng)});
        }
        Measure m(comps);
        Point x(n, 0.0);
        x[0] = U(rng);
        double r = U(rng) + 0.3;
        double exact = m.ball_mass(x, r);
        auto mc = testing::mc_ball_mass(m, x, r, 120000, 1234 + trial);
        CHECK(std::fabs(exact - mc.value) <= 4.0 * mc.stderr_ + 1e-8 * exact);
    }
}

TEST_CASE("ball_mass: tiny-ball path stays accurate far from the center") {
    auto m = unit_bump(3, 1.0, 0.5, 2.0);
    Point x{0.6, 0.0, 0.0};
    // density at |x|: 2 * 0.6^{-0.5}
    double rho = 2.0 * std::pow(0.6, -0.5);
    for (double r : {1e-4, 1e-6}) {
        double v = m.ball_mass(x, r);
        double expect = rho * unit_ball_volume(3) * r * r * r;
        CHECK(v == doctest::Approx(expect).epsilon(5e-3));
    }
}

TEST_CASE("ball_mass: monotone in radius, additive over components") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.1, 2.0);
    Measure a = unit_bump(3, 1.3, 0.4, 0.8);
    Measure b({AtomComponent{{0.5, 0.2, 0.0}, 2.0},
               RadialPowerBump{{-0.4, 0.0, 0.1}, 0.7, 0.0, 1.2}});
    std::vector<MeasureComponent> both(a.components());
    for (const auto& c : b.components()) both.push_back(c);
    Measure ab(both);
    for (int t = 0; t < 40; ++t) {
        Point x{U(rng) - 1.0, U(rng) - 1.0, 0.0};
        double r1 = U(rng), r2 = r1 + U(rng);
        CHECK(ab.ball_mass(x, r1) <= ab.ball_mass(x, r2) * (1 + 1e-12) + 1e-15);
        double sum = a.ball_mass(x, r1) + b.ball_mass(x, r1);
        CHECK(ab.ball_mass(x, r1) == doctest::Approx(sum).epsilon(1e-10));
    }
}

TEST_CASE("ball_mass: translation covariance is exact") {
    // Dyadic coordinates so the shifted distances are bit-identical.
    Measure m({RadialPowerBump{{0.25, -0.5, 0.0}, 1.25, 0.5, 1.5},
               AtomComponent{{1.0, 0.0, 0.0}, 0.7}});
    Point v{1.0, 2.0, -1.0};
    Measure mt = m.translated(v);
    Point x{0.5, 0.125, 0.25};
    for (double r : {0.3, 1.0, 2.7}) {
        CHECK(mt.ball_mass(add(x, v), r) == m.ball_mass(x, r));
    }
}

TEST_CASE("breakpoints") {
    auto m = unit_bump();
    Point o(3, 0.0);
    auto bp0 = m.breakpoints(o);
    REQUIRE(bp0.size() == 1);
    CHECK(bp0[0] == doctest::Approx(1.0));

    Point far{3.0, 0.0, 0.0};
    auto bp = m.breakpoints(far);
    REQUIRE(bp.size() >= 2);
    CHECK(bp.front() == doctest::Approx(2.0));
    CHECK(bp.back() == doctest::Approx(4.0));

    Measure atoms({AtomComponent{{1.0, 0.0, 0.0}, 1.0}, AtomComponent{{2.0, 0.0, 0.0}, 1.0}});
    auto bpa = atoms.breakpoints(Point(3, 0.0));
    REQUIRE(bpa.size() == 2);
    CHECK(bpa[0] == doctest::Approx(1.0));
    CHECK(bpa[1] == doctest::Approx(2.0));
}

TEST_CASE("total_mass") {
    auto m = unit_bump();
    CHECK(m.total_mass().value() == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-13));

    Measure mix({RadialPowerBump{Point(3, 0.0), 1.0, 0.0, 1.0},
                 AtomComponent{{2.0, 0.0, 0.0}, 2.0}});
    CHECK(mix.total_mass().value() ==
          doctest::Approx(2.0 + 4.0 * M_PI / 3.0).epsilon(1e-13));

    Measure divergent({RadialProfile{Point(3, 0.0), {1.0}, {1.0}, -2.0}});
    auto tm = divergent.total_mass();
    CHECK(tm.is_infinite());
    CHECK(tm.reason() == InfReason::DivergentTail);
}

TEST_CASE("restricted_concentric clips pieces") {
    auto m = unit_bump(3, 2.0, 0.5, 1.0);
    Point o(3, 0.0);
    auto r = m.restricted_concentric(o, 1.0);
    CHECK(r.ball_mass(o, 5.0) == doctest::Approx(m.ball_mass(o, 1.0)).epsilon(1e-12));
    CHECK(r.ball_mass(o, 0.5) == doctest::Approx(m.ball_mass(o, 0.5)).epsilon(1e-12));
}

TEST_CASE("measure hash distinguishes measures and survives copies") {
    auto a = unit_bump();
    auto b = unit_bump(3, 1.0, 0.0, 1.0 + 1e-12);
    CHECK(a.hash() != b.hash());
    auto a2 = a;
    CHECK(a.hash() == a2.hash());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wolff/potentials.hpp"

using namespace wolff;

namespace {
Measure dirac_origin(int n = 3) { return Measure({AtomComponent{Point(n, 0.0), 1.0}}); }
Measure lebesgue_ball(int n = 3, double R = 1.0) {
    return Measure({RadialPowerBump{Point(n, 0.0), R, 0.0, 1.0}});
}
}  // namespace

TEST_CASE("wolff: Dirac closed form (p-1)/(n-ap) |x|^{-(n-ap)/(p-1)}") {
    auto pr = make_params(3, 2.0, 0.5, 1.0);
    Point x{2.0, 0.0, 0.0};
    CHECK(wolff_potential(pr, dirac_origin(), x).value() == doctest::Approx(0.5).epsilon(1e-12));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        int n = 3 + static_cast<int>(U(rng) * 3);  // 3..5
        double p = 1.4 + 2.0 * U(rng);
        double alpha = U(rng) * (n / p) * 0.9 + 0.02;
        if (!(alpha * p < n && alpha > 0)) continue;
        double q = 0.5 * (p - 1.0);
        auto prr = make_params(n, p, q, alpha);
        double ax = 0.3 + 3.0 * U(rng);
        Point xx(n, 0.0);
        xx[0] = ax;
        double expect = prr.pm1() / prr.n_ap() * std::pow(ax, -prr.n_ap() / prr.pm1());
        CHECK(wolff_potential(prr, dirac_origin(n), xx).value() ==
              doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("wolff: Lebesgue on B(0,1) at the center equals 2 pi") {
    auto pr = make_params(3, 2.0, 0.5, 1.0);
    CHECK(wolff_potential(pr, lebesgue_ball(), Point(3, 0.0)).value() ==
          doctest::Approx(2.0 * M_PI).epsilon(1e-9));
}

TEST_CASE("wolff: divergent tail detected eagerly") {
    auto pr = make_params(3, 2.0, 0.5, 1.0);
    Measure flat({RadialProfile{Point(3, 0.0), {1.0}, {1.0}, 0.0}});
    auto v = wolff_potential(pr, flat, Point{0.5, 0.0, 0.0});
    CHECK(v.is_infinite());
    CHECK(v.reason() == InfReason::DivergentTail);
}

TEST_CASE("wolff: singular core cases") {
    auto pr = make_params(3, 2.0, 0.5, 1.0);
    auto v = wolff_potential(pr, dirac_origin(), Point(3, 0.0));
    CHECK(v.is_infinite());
    CHECK(v.reason() == InfReason::SingularCore);

    // gamma >= alpha p at the center makes W infinite at that point only
    Measure sharp({RadialPowerBump{Point(3, 0.0), 1.0, 2.5, 1.0}});
    CHECK(wolff_potential(pr, sharp, Point(3, 0.0)).is_infinite());
    CHECK(wolff_potential(pr, sharp, Point{0.5, 0.0, 0.0}).is_finite());

    // truncation removes the core singularity
    CHECK(wolff_potential(pr, sharp, Point(3, 0.0), 0.25).is_finite());
}

TEST_CASE("wolff: truncated tail of a compact measure is closed-form") {
    auto pr = make_params(3, 2.0, 0.5, 1.0);
    auto m = lebesgue_ball();
    double mtot = 4.0 * M_PI / 3.0;
    // all mass inside radius 2 from the evaluation point
    double expect = mtot * (pr.pm1() / pr.n_ap()) * std::pow(2.0, -pr.n_ap() / pr.pm1());
    CHECK(wolff_potential(pr, m, Point(3, 0.0), 2.0).value() ==
          doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("wolff vs plain Riemann oracle on an off-center mixture") {
    auto pr = make_params(3, 2.6, 0.9, 0.8);
    Measure m({RadialPowerBump{{0.7, 0.0, 0.0}, 1.2, 0.9, 0.6},
               RadialPowerBump{{-0.5, 0.3, 0.0}, 0.8, 0.0, 1.0}});
    Point x{0.2, -0.1, 0.0};
    double fast = wolff_potential(pr, m, x).value();
    double crude = testing::riemann_wolff(pr, m, x, 1e-7, 1e5, 30000);
    CHECK(fast == doctest::Approx(crude).epsilon(2e-3));
}

TEST_CASE("riesz: Dirac and Lebesgue closed forms, singular core") {
    auto pr = make_params(3, 2.0, 0.5, 1.0);
    Point x{2.0, 0.0, 0.0};
    CHECK(riesz_potential(pr, dirac_origin(), x).value() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(riesz_potential(pr, lebesgue_ball(), Point(3, 0.0)).value() ==
          doctest::Approx(2.0 * M_PI).epsilon(1e-10));
    auto v = riesz_potential(pr, dirac_origin(), Point(3, 0.0));
    CHECK(v.is_infinite());
    CHECK(v.reason() == InfReason::SingularCore);
}

TEST_CASE("Riesz-Wolff identity (n-2a) W = I for mixtures") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 6; ++t) {
        int n = 3 + (t % 3);
        double alpha = 0.3 + 0.55 * U(rng) * (n / 2.0 - 0.3);
        auto pr = make_params(n, 2.0, 0.5, alpha);
        std::vector<MeasureComponent> comps;
        for (int k = 0; k < 4; ++k) {
            Point c(n, 0.0);
            c[0] = 2.0 * U(rng) - 1.0;
            c[1] = 2.0 * U(rng) - 1.0;
            if (U(rng) < 0.5)
                comps.push_back(AtomComponent{c, 0.2 + U(rng)});
            else
                comps.push_back(RadialPowerBump{c, 0.3 + U(rng), 0.0, 0.5 + U(rng)});
        }
        Measure m(comps);
        for (int j = 0; j < 8; ++j) {
            Point x(n, 0.0);
            x[0] = 3.0 * U(rng) - 1.5;
            x[1] = 3.0 * U(rng) - 1.5;
            auto w = wolff_potential(pr, m, x);
            auto r = riesz_potential(pr, m, x);
            if (!w.is_finite() || !r.is_finite()) continue;
            CHECK(pr.n_ap() * w.value() == doctest::Approx(r.value()).epsilon(1e-6));
        }
    }
}

TEST_CASE("wolff: mass scaling lambda^{1/(p-1)}") {
    auto pr = make_params(4, 2.5, 0.7, 0.9);
    Measure m({RadialPowerBump{Point(4, 0.0), 1.0, 0.5, 1.0}});
    Point x{0.4, 0.2, 0.0, 0.0};
    double base = wolff_potential(pr, m, x).value();
    for (double lam : {0.1, 2.0, 10.0}) {
        Measure ml({RadialPowerBump{Point(4, 0.0), 1.0, 0.5, lam}});
        double v = wolff_potential(pr, ml, x).value();
        CHECK(v == doctest::Approx(std::pow(lam, 1.0 / pr.pm1()) * base).epsilon(1e-10));
    }
}

TEST_CASE("tail_classify: analytic closed-form verdicts") {
    auto pr = make_params(3, 2.0, 0.5, 1.0);
    auto c1 = tail_classify(pr, lebesgue_ball());
    CHECK(c1.verdict == TailVerdict::V::Converges);
    CHECK(c1.analytic);

    // sigma(B(0,r)) = r^{n-p} exactly: density (n-p)/omega_n r^{-p}
    double coef = (3.0 - 2.0) / unit_sphere_area(3);
    Measure crit({RadialProfile{Point(3, 0.0), {1e-8}, {coef * std::pow(1e-8, -2.0)}, -2.0}});
    auto c2 = tail_classify(pr, crit);
    CHECK(c2.verdict == TailVerdict::V::Diverges);  // logarithmic divergence, analytic
    CHECK(c2.analytic);

    Measure grow({RadialProfile{Point(3, 0.0), {1.0}, {1.0}, 1.0}});
    CHECK(tail_classify(pr, grow).verdict == TailVerdict::V::Diverges);
}

TEST_CASE("tail_classify: empirical mass-growth fit") {
    auto pr = make_params(3, 2.0, 0.5, 1.0);
    auto cv = tail_classify(pr, lebesgue_ball(), TailMode::MassGrowth);
    CHECK(cv.verdict == TailVerdict::V::Converges);
    CHECK(std::fabs(cv.fitted_exponent) < 0.02);

    Measure grow({RadialProfile{Point(3, 0.0), {1.0}, {1.0}, 0.0}});
    auto dv = tail_classify(pr, grow, TailMode::MassGrowth);
    CHECK(dv.verdict == TailVerdict::V::Diverges);
    CHECK(dv.fitted_exponent == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("vanishing at infinity when the tail converges") {
    auto pr = make_params(3, 2.2, 0.6, 0.9);
    Measure m({RadialPowerBump{Point(3, 0.0), 1.0, 0.3, 1.0},
               RadialPowerBump{{0.4, 0.0, 0.0}, 0.5, 0.0, 0.7}});
    REQUIRE(tail_classify(pr, m).verdict == TailVerdict::V::Converges);
    std::mt19937_64 rng(5);
    double prev = std::numeric_limits<double>::infinity();
    for (double R : {4.0, 16.0, 64.0, 256.0}) {
        double inf_annulus = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 32; ++k) {
            auto dir = testing::random_unit_vector(rng, 3);
            double rad = R * (0.5 + 0.5 * (k + 0.5) / 32.0);
            Point x{rad * dir[0], rad * dir[1], rad * dir[2]};
            inf_annulus = std::min(inf_annulus, wolff_potential(pr, m, x).value());
        }
        CHECK(inf_annulus <= prev * (1 + 1e-9));
        prev = inf_annulus;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("kernel_integral: clipped collinear geometry matches Monte Carlo") {
    // bump centered at 2 e1, clipped by B(0, 2.2), kernel at the bump center
    Measure m({RadialPowerBump{{2.0, 0.0, 0.0}, 1.5, 0.8, 1.0}});
    double beta = 0.5;
    ClipBall clip{Point(3, 0.0), 2.2};
    double v = kernel_integral(m, Point{2.0, 0.0, 0.0}, beta, clip).value();

    std::mt19937_64 rng(31337);
    size_t N = 400000;
    double acc = 0.0;
    Point c{2.0, 0.0, 0.0};
    for (size_t i = 0; i < N; ++i) {
        auto y = testing::random_point_in_ball(rng, c, 1.5);
        if (norm(y) >= 2.2) continue;
        double s = dist(y, c);
        acc += std::pow(s, -0.8) * std::pow(s, -beta);
    }
    double vol = unit_ball_volume(3) * std::pow(1.5, 3);
    double mc = acc / N * vol;
    CHECK(v == doctest::Approx(mc).epsilon(0.02));

    // off-center candidate on the axis
    double v2 = kernel_integral(m, Point{-1.0, 0.0, 0.0}, beta, clip).value();
    double acc2 = 0.0;
    std::mt19937_64 rng2(4242);
    for (size_t i = 0; i < N; ++i) {
        auto y = testing::random_point_in_ball(rng2, c, 1.5);
        if (norm(y) >= 2.2) continue;
        double s = dist(y, c);
        double k = dist(y, Point{-1.0, 0.0, 0.0});
        acc2 += std::pow(s, -0.8) * std::pow(k, -beta);
    }
    double mc2 = acc2 / N * vol;
    CHECK(v2 == doctest::Approx(mc2).epsilon(0.02));
}

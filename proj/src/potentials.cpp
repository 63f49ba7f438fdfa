#include "wolff/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace wolff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double integrate_panel(const std::function<double(double)>& f, double a, double b,
                       double tol, double* err, bool endpoint_singular) {
    if (b <= a) return 0.0;
    if (endpoint_singular) {
        boost::math::quadrature::tanh_sinh<double> ts(12);
        double e = 0.0, l1 = 0.0;
        double v = ts.integrate(f, a, b, tol, &e, &l1);
        if (err) *err += e * std::fabs(v);
        return v;
    }
    double e = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 12, tol, &e);
    if (err) *err += e;
    return v;
}

}  // namespace

const char* to_string(TailVerdict::V v) {
    switch (v) {
        case TailVerdict::V::Converges: return "converges";
        case TailVerdict::V::Diverges: return "diverges";
        case TailVerdict::V::Inconclusive: return "inconclusive";
    }
    return "?";
}

double fit_loglog_slope(const std::vector<double>& r, const std::vector<double>& v) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0) || !(v[i] > 0.0)) continue;
        double x = std::log(r[i]), y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) return 0.0;
    double den = cnt * sxx - sx * sx;
    if (den == 0.0) return 0.0;
    return (cnt * sxy - sx * sy) / den;
}

TailVerdict tail_classify(const Params& pr, const Measure& m, TailMode mode,
                          double margin) {
    TailVerdict tv;
    tv.critical_exponent = pr.n_ap();
    if (m.empty()) {
        tv.verdict = TailVerdict::V::Converges;
        tv.analytic = true;
        return tv;
    }
    if (mode == TailMode::WolffTail) {
        // Every supported component has a closed-form tail.
        auto tp = m.tail_power();
        tv.analytic = true;
        tv.fitted_exponent = tp.beta;
        if (tp.finite_mass || tp.log_factor || tp.beta < pr.n_ap())
            tv.verdict = TailVerdict::V::Converges;
        else
            tv.verdict = TailVerdict::V::Diverges;  // beta >= n-ap diverges (log at equality)
        return tv;
    }
    // Empirical slope of the ball mass at the largest resolvable radii.
    Point origin(static_cast<size_t>(m.dimension()), 0.0);
    auto breaks = m.breakpoints(origin);
    double r_last = breaks.empty() ? 1.0 : breaks.back();
    tv.fit_lo = 2.0 * r_last;
    tv.fit_hi = 1e4 * r_last;
    tv.margin = margin;
    const int npts = 24;
    std::vector<double> rs, vs;
    BallMassEvaluator ev(m, origin);
    for (int i = 0; i < npts; ++i) {
        double r = tv.fit_lo * std::pow(tv.fit_hi / tv.fit_lo, i / double(npts - 1));
        rs.push_back(r);
        vs.push_back(ev(r));
    }
    tv.fitted_exponent = fit_loglog_slope(rs, vs);
    if (tv.fitted_exponent < pr.n_ap() - margin)
        tv.verdict = TailVerdict::V::Converges;
    else if (tv.fitted_exponent > pr.n_ap() + margin)
        tv.verdict = TailVerdict::V::Diverges;
    else
        tv.verdict = TailVerdict::V::Inconclusive;
    return tv;
}

QuadratureReport wolff_report(const Params& pr, const Measure& m, const Point& x,
                              double t, double rel_tol) {
    QuadratureReport rep;
    if (t < 0.0) throw std::invalid_argument("wolff: t >= 0 required");
    if (m.empty()) {
        rep.value = 0.0;
        return rep;
    }
    if (static_cast<int>(x.size()) != m.dimension())
        throw std::invalid_argument("wolff: point dimension mismatch");

    const double nap = pr.n_ap();
    const double ppow = 1.0 / pr.pm1();

    // Divergent tail costs O(1): classify before any quadrature.
    auto tp = m.tail_power();
    if (!tp.finite_mass && !tp.log_factor && tp.beta >= nap) {
        rep.value = ExtendedValue::infinite(InfReason::DivergentTail);
        return rep;
    }

    // Core singularities matter only for the untruncated potential.
    auto core = m.core_at(x);
    if (t == 0.0) {
        if (core.at_atom) {
            rep.value = ExtendedValue::infinite(InfReason::SingularCore);
            return rep;
        }
        if (core.has_density && core.density_expo + pr.alpha * pr.p <= 0.0) {
            rep.value = ExtendedValue::infinite(InfReason::SingularCore);
            return rep;
        }
    }

    BallMassEvaluator ev(m, x);
    auto integrand = [&](double r) {
        double mass = ev(r);
        if (mass <= 0.0) return 0.0;
        return std::pow(mass / std::pow(r, nap), ppow);
    };
    // In log-radius: d lambda = dr / r.
    auto g = [&](double lam) { return integrand(std::exp(lam)); };

    std::vector<double> breaks = ev.breakpoints();
    double r_last = breaks.empty() ? std::max(t, 1.0) : breaks.back();
    r_last = std::max(r_last, t);

    // Mass onset: largest radius with zero mass (always a breakpoint).
    double onset = 0.0;
    for (double b : breaks) {
        if (ev(b) <= 0.0) onset = b;
        else break;
    }

    double head = 0.0;
    double start = std::max(t, onset);
    if (t == 0.0 && onset == 0.0) {
        double r1 = breaks.empty() ? 1.0 : breaks.front();
        double r_head = r1 * 1e-8;
        double chi;
        if (core.has_density)
            chi = (core.density_expo + pr.alpha * pr.p) / pr.pm1();
        else
            chi = pr.alpha * pr.p / pr.pm1();  // locally bounded density
        head = integrand(r_head) / chi;
        start = r_head;
    }
    rep.tail_contribution = 0.0;

    double total = head;
    if (start < r_last) {
        std::vector<double> pts{start};
        for (double b : breaks)
            if (b > start * (1.0 + 1e-14) && b < r_last * (1.0 - 1e-14)) pts.push_back(b);
        pts.push_back(r_last);
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            // The 1/(p-1) power of a mass vanishing at the left endpoint has an
            // unbounded derivative when p < 2: hand those panels to tanh-sinh.
            bool sing = (pr.p < 2.0) && (ev(pts[i]) <= 0.0 || pts[i] <= onset * (1 + 1e-13));
            total += integrate_panel(g, std::log(pts[i]), std::log(pts[i + 1]),
                                     rel_tol, &rep.estimated_error, sing);
            ++rep.panels;
        }
    }

    // Tail beyond the last breakpoint.
    double tail = 0.0;
    double r0 = std::max(r_last, t);
    if (tp.finite_mass) {
        double mtot = m.total_mass().value();
        if (mtot > 0.0)
            tail = std::pow(mtot, ppow) * pr.pm1() / nap * std::pow(r0, -nap / pr.pm1());
    } else {
        // Exact ball masses under the substitution r = r0 / w.
        auto fw = [&](double w) { return integrand(r0 / w) / w; };
        boost::math::quadrature::tanh_sinh<double> ts(12);
        double e = 0.0, l1 = 0.0;
        tail = ts.integrate(fw, 0.0, 1.0, rel_tol, &e, &l1);
        rep.estimated_error += e * std::fabs(tail);
        ++rep.panels;
    }
    rep.tail_contribution = tail;
    rep.value = total + tail;
    return rep;
}

ExtendedValue wolff_potential(const Params& pr, const Measure& m, const Point& x, double t) {
    return wolff_report(pr, m, x, t).value;
}

namespace {

// Closed form of int_a^b density(s) * omega * s^{n-1-beta} ds for one table
// (full spherical shells, kernel evaluated at the component center).
double concentric_kernel_closed(const detail::RadialTable& tab, int n, double beta,
                                double a, double b) {
    double total = 0.0;
    const double omega = unit_sphere_area(n);
    for (const auto& p : tab.density_pieces()) {
        if (p.coef <= 0.0) continue;
        double lo = std::max(a, p.lo), hi = std::min(b, p.hi);
        if (hi <= lo) continue;
        double e1 = p.expo + n - beta;
        if (e1 == 0.0)
            total += p.coef * omega * std::log(hi / lo);
        else
            total += p.coef * omega * (std::pow(hi, e1) - std::pow(lo, e1)) / e1;
    }
    return total;
}

// Kernel integral of one radial component, optionally clipped by a collinear ball.
// c: component center, d = |x - c|.  Returns +inf via the out-parameter.
double radial_kernel_integral(const detail::RadialTable& tab, double d, double beta,
                              int n, bool* infinite, InfReason* why,
                              double clip_dp, double clip_R, bool clipped,
                              double d_signed) {
    const double omega = unit_sphere_area(n);
    const double scale = std::isfinite(tab.support_radius()) ? tab.support_radius() : 1.0;
    const bool at_center = d <= 1e-14 * (1.0 + scale);

    // Local and tail exponent screens.
    if (at_center && (!clipped || clip_dp < clip_R)) {
        if (tab.head_positive() && tab.head_exponent() + n - beta <= 0.0) {
            *infinite = true;
            *why = InfReason::SingularCore;
            return 0.0;
        }
    }
    if (!clipped && tab.unbounded() && tab.tail_coef() > 0.0 &&
        tab.tail_exponent() + n - beta >= 0.0) {
        *infinite = true;
        *why = InfReason::DivergentTail;
        return 0.0;
    }

    // s-range with positive contribution.
    double s_hi = clipped ? std::min(tab.support_radius(), clip_dp + clip_R)
                          : tab.support_radius();
    double s_lo = clipped ? std::max(0.0, clip_dp - clip_R) : 0.0;
    if (s_hi <= s_lo) return 0.0;

    if (at_center) {
        // Kernel is constant on each shell about the center: shells fully
        // inside the clip are closed forms; partially clipped shells keep a
        // smooth cap fraction.
        double full_hi = clipped ? std::min(s_hi, std::max(0.0, clip_R - clip_dp)) : s_hi;
        double total = 0.0;
        if (full_hi > 0.0) total += concentric_kernel_closed(tab, n, beta, 0.0, full_hi);
        if (clipped && s_hi > std::max(full_hi, s_lo)) {
            auto shell = [&](double s) {
                double rho = tab.density(s);
                if (rho <= 0.0) return 0.0;
                double frac = sphere_cap_fraction(n, clip_dp, s, clip_R);
                return rho * omega * std::pow(s, n - 1 - beta) * frac;
            };
            std::vector<double> pts{std::max(full_hi, s_lo)};
            for (double k : tab.kinks())
                if (k > pts.front() && k < s_hi) pts.push_back(k);
            pts.push_back(s_hi);
            std::sort(pts.begin(), pts.end());
            for (size_t i = 0; i + 1 < pts.size(); ++i)
                total += integrate_panel(shell, pts[i], pts[i + 1], 1e-10, nullptr, false);
        }
        return total;
    }

    auto u_min = [&](double s) {
        if (!clipped) return -1.0;
        if (clip_dp <= 1e-14 * (1.0 + clip_R)) return -1.0;  // concentric clip
        return (s * s + clip_dp * clip_dp - clip_R * clip_R) / (2.0 * s * clip_dp);
    };

    auto shell = [&](double s) {
        double rho = tab.density(s);
        if (rho <= 0.0) return 0.0;
        double mean = kernel_sphere_partial(n, d_signed, s, beta, u_min(s), 1.0);
        return rho * omega * std::pow(s, n - 1) * mean;
    };

    // Panels: component kinks, the kernel singularity s = d, clip tangency radii.
    bool unbounded = !std::isfinite(s_hi);
    double s_far = unbounded
        ? 2.0 * std::max({1.0, 2.0 * d, tab.kinks().empty() ? 1.0 : tab.kinks().back()})
        : s_hi;
    std::vector<double> pts{s_lo};
    auto push = [&](double v) {
        if (v > s_lo * (1.0 + 1e-14) + 1e-300 && v < s_far * (1.0 - 1e-14) &&
            std::isfinite(v))
            pts.push_back(v);
    };
    for (double k : tab.kinks()) push(k);
    if (d > 0.0) push(d);
    if (clipped && clip_dp > 0.0) {
        push(std::fabs(clip_dp - clip_R));
        push(clip_dp + clip_R);
    }
    pts.push_back(s_far);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        bool sing = (std::fabs(pts[i] - d) < 1e-13 * d ||
                     std::fabs(pts[i + 1] - d) < 1e-13 * d);
        total += integrate_panel(shell, pts[i], pts[i + 1], 1e-11, nullptr, sing);
    }
    if (unbounded) {
        auto fw = [&](double w) { return shell(s_far / w) * s_far / (w * w); };
        boost::math::quadrature::tanh_sinh<double> ts(12);
        total += ts.integrate(fw, 0.0, 1.0, 1e-10);
    }
    return total;
}

}  // namespace

ExtendedValue kernel_integral(const Measure& m, const Point& x, double beta,
                              const std::optional<ClipBall>& clip) {
    if (m.empty()) return 0.0;
    const int n = m.dimension();
    if (beta <= 0.0 || beta >= n)
        throw std::invalid_argument("kernel_integral: 0 < beta < n required");
    double total = 0.0;
    for (size_t i = 0; i < m.components().size(); ++i) {
        const auto& c = m.components()[i];
        if (const auto* a = std::get_if<AtomComponent>(&c)) {
            if (clip && !(dist(a->location, clip->center) < clip->radius)) continue;
            double d = dist(x, a->location);
            if (d <= 0.0) return ExtendedValue::infinite(InfReason::SingularCore);
            total += a->mass * std::pow(d, -beta);
            continue;
        }
        const auto& tab = *m.table(i);
        const Point& cc = *detail::center_of(c);
        double d = dist(x, cc);
        bool infinite = false;
        InfReason why = InfReason::None;
        double clip_dp = 0.0, clip_R = 0.0, d_signed = d;
        bool clipped = false;
        if (clip) {
            clipped = true;
            clip_dp = dist(clip->center, cc);
            clip_R = clip->radius;
            if (clip_dp > 1e-12 * (1.0 + clip_R)) {
                // axis from the component center toward the clip center
                Point ax = sub(clip->center, cc);
                Point xv = sub(x, cc);
                double dot = 0.0;
                for (size_t j = 0; j < ax.size(); ++j) dot += ax[j] * xv[j];
                double cosang = (d > 0.0) ? dot / (clip_dp * d) : 1.0;
                if (d > 1e-12 && std::fabs(std::fabs(cosang) - 1.0) > 1e-9)
                    throw std::invalid_argument(
                        "kernel_integral: clipped evaluation requires collinear geometry");
                d_signed = (cosang >= 0.0) ? d : -d;
            }
        }
        total += radial_kernel_integral(tab, d, beta, n, &infinite, &why,
                                        clip_dp, clip_R, clipped, d_signed);
        if (infinite) return ExtendedValue::infinite(why);
    }
    return total;
}

ExtendedValue riesz_potential(const Params& pr, const Measure& m, const Point& x) {
    if (pr.p != 2.0) throw std::invalid_argument("riesz: p = 2 required");
    return kernel_integral(m, x, pr.n - 2.0 * pr.alpha, std::nullopt);
}

}  // namespace wolff

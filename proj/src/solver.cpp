#include "wolff/solver.hpp"

#include <algorithm>
#include <cmath>

namespace wolff {

namespace {

constexpr double kEpsGuard = 1e-300;

Point on_axis(const Point& center, double r) {
    Point x(center);
    x[0] += r;
    return x;
}

// Measure sigma * u^power as piecewise densities about the common center.
Measure pushforward(const Measure& sigma, const RadialField& u, double power) {
    auto weight = u.power_pieces(power);
    std::vector<MeasureComponent> comps;
    for (size_t i = 0; i < sigma.components().size(); ++i) {
        if (std::holds_alternative<AtomComponent>(sigma.components()[i]))
            throw SolveError(SolveErrorKind::AtomInEvaluationSet,
                             "pushforward: atoms are not admissible in solves");
        auto prod = detail::multiply_pieces(
            sigma.table(i)->density_pieces(), weight);
        if (!prod.empty()) comps.push_back(PiecewiseDensity{u.center, prod});
    }
    return Measure(std::move(comps));
}

}  // namespace

RadialField RadialField::log_grid(Point center, double r_min, double r_max, int count) {
    if (!(r_min > 0.0 && r_max > r_min && count >= 8))
        throw std::invalid_argument("RadialField: bad grid spec");
    RadialField f;
    f.center = std::move(center);
    f.nodes.resize(count);
    f.values.assign(count, 0.0);
    for (int i = 0; i < count; ++i)
        f.nodes[i] = r_min * std::pow(r_max / r_min, i / double(count - 1));
    return f;
}

double RadialField::value_at(double r) const {
    if (nodes.empty()) return 0.0;
    if (r <= nodes.front()) {
        if (values.front() <= 0.0) return 0.0;
        return values.front() * std::pow(r / nodes.front(), head_exponent);
    }
    if (r >= nodes.back()) {
        if (values.back() <= 0.0) return 0.0;
        return values.back() * std::pow(r / nodes.back(), tail_exponent);
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    size_t i = static_cast<size_t>(it - nodes.begin()) - 1;
    double v0 = values[i], v1 = values[i + 1];
    if (v0 <= 0.0 || v1 <= 0.0) return 0.0;
    double a = std::log(v1 / v0) / std::log(nodes[i + 1] / nodes[i]);
    return v0 * std::pow(r / nodes[i], a);
}

std::vector<PowerPiece> RadialField::power_pieces(double power) const {
    std::vector<PowerPiece> out;
    if (nodes.empty()) return out;
    if (values.front() > 0.0) {
        double e = head_exponent * power;
        double c = std::pow(values.front(), power) * std::pow(nodes.front(), -e);
        out.push_back({0.0, nodes.front(), c, e});
    }
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (values[i] <= 0.0 || values[i + 1] <= 0.0) continue;
        double a = std::log(values[i + 1] / values[i]) / std::log(nodes[i + 1] / nodes[i]);
        double e = a * power;
        double c = std::pow(values[i], power) * std::pow(nodes[i], -e);
        out.push_back({nodes[i], nodes[i + 1], c, e});
    }
    if (values.back() > 0.0) {
        double e = tail_exponent * power;
        double c = std::pow(values.back(), power) * std::pow(nodes.back(), -e);
        out.push_back({nodes.back(), std::numeric_limits<double>::infinity(), c, e});
    }
    return out;
}

void RadialField::refresh_exponents() {
    auto fit_window = [&](double lo, double hi) {
        std::vector<double> rs, vs;
        for (size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i] >= lo && nodes[i] <= hi && values[i] > 0.0) {
                rs.push_back(nodes[i]);
                vs.push_back(values[i]);
            }
        return fit_loglog_slope(rs, vs);
    };
    if (nodes.size() >= 2) {
        head_exponent = fit_window(nodes.front(), nodes.front() * 10.0);
        tail_exponent = fit_window(nodes.back() / 10.0, nodes.back());
    }
}

double RadialField::sup_relative_change(const RadialField& other) const {
    double sup = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        double d = std::fabs(values[i] - other.values[i]) / (values[i] + kEpsGuard);
        sup = std::max(sup, d);
    }
    return sup;
}

RadialField apply_T(const Params& pr, const Measure& sigma, const RadialField& u,
                    double quad_tol) {
    Measure omega = pushforward(sigma, u, pr.q);
    auto tp = omega.tail_power();
    if (!tp.finite_mass && !tp.log_factor && tp.beta >= pr.n_ap())
        throw SolveError(SolveErrorKind::DivergentTail,
                         "apply_T: pushforward fails the Wolff tail criterion");
    RadialField out = u;
    for (size_t i = 0; i < u.nodes.size(); ++i) {
        auto rep = wolff_report(pr, omega, on_axis(u.center, u.nodes[i]), 0.0, quad_tol);
        out.values[i] = rep.value.value();  // tail screened above; no atoms here
    }
    out.refresh_exponents();
    return out;
}

std::pair<RadialField, SolveDiagnostics> solve_sublinear(const Params& pr,
                                                         const Measure& sigma,
                                                         const SolveOptions& opt) {
    SolveDiagnostics diag;
    if (sigma.has_atoms())
        throw SolveError(SolveErrorKind::AtomInEvaluationSet,
                         "solve: measures with atoms are rejected");
    auto center_opt = sigma.radial_center();
    if (sigma.empty()) {
        Point c = center_opt ? *center_opt : Point(2, 0.0);
        auto f = RadialField::log_grid(c, opt.grid.r_min > 0 ? opt.grid.r_min : 1e-3,
                                       opt.grid.r_max > 0 ? opt.grid.r_max : 1e3,
                                       opt.grid.count);
        diag.iterations = 1;
        return {f, diag};
    }
    if (!center_opt)
        throw SolveError(SolveErrorKind::NonradialUnsupported,
                         "solve: measure must be radial about one center");
    const Point center = *center_opt;

    if (!opt.skip_criteria_check) {
        auto tv = tail_classify(pr, sigma, TailMode::WolffTail);
        if (tv.verdict != TailVerdict::V::Converges)
            throw SolveError(SolveErrorKind::NonexistenceDetected,
                             "solve: Wolff tail integral diverges");
        // For finite-mass measures the intrinsic tail condition reduces to the
        // finiteness of the global embedding constant; failures of that kind
        // surface as non-convergent or unbounded iterates below.
    }

    double scale = sigma.support_radius_about(center);
    if (!std::isfinite(scale) || scale <= 0.0) {
        scale = 1.0;
        for (size_t i = 0; i < sigma.components().size(); ++i)
            if (const auto* t = sigma.table(i))
                if (!t->kinks().empty()) scale = std::max(scale, t->kinks().back());
    }
    double r_min = opt.grid.r_min > 0.0 ? opt.grid.r_min : 1e-3 * scale;
    double r_max = opt.grid.r_max > 0.0 ? opt.grid.r_max : 1e3 * scale;
    auto u = RadialField::log_grid(center, r_min, r_max, opt.grid.count);

    // u_0 = c0 (W sigma)^{(p-1)/(p-1-q)}
    RadialField wfield = u;
    for (size_t i = 0; i < u.nodes.size(); ++i) {
        auto v = wolff_potential(pr, sigma, on_axis(center, u.nodes[i]));
        if (!v.is_finite())
            throw SolveError(SolveErrorKind::NonexistenceDetected,
                             "solve: W sigma infinite on the grid: " + v.str());
        wfield.values[i] = v.value();
    }
    wfield.refresh_exponents();

    size_t probe = u.nodes.size() / 2;
    diag.probe_radius = u.nodes[probe];
    diag.probe_truncation = 0.5 * scale;
    double guard_scale = std::pow(wfield.values[probe], pr.growth_exp);

    if (opt.warm_start) {
        u = *opt.warm_start;
        diag.c0_used = 0.0;
    } else {
        double c0 = 1.0;
        bool ok = false;
        for (int halving = 0; halving < 60; ++halving) {
            for (size_t i = 0; i < u.nodes.size(); ++i)
                u.values[i] = c0 * std::pow(wfield.values[i], pr.growth_exp);
            u.head_exponent = wfield.head_exponent * pr.growth_exp;
            u.tail_exponent = wfield.tail_exponent * pr.growth_exp;
            RadialField tu = apply_T(pr, sigma, u, opt.quad_tol);
            bool dominates = true;
            for (size_t i = 0; i < u.nodes.size(); ++i)
                if (tu.values[i] < u.values[i] * (1.0 - 1e-12)) {
                    dominates = false;
                    break;
                }
            if (dominates) {
                ok = true;
                u = tu;
                diag.iterations = 1;
                break;
            }
            c0 *= 0.5;
        }
        if (!ok)
            throw SolveError(SolveErrorKind::InitializationFailed,
                             "solve: no admissible c0 after 60 halvings");
        diag.c0_used = c0;
    }

    double residual = std::numeric_limits<double>::infinity();
    while (diag.iterations < opt.max_iter) {
        RadialField next = apply_T(pr, sigma, u, opt.quad_tol);
        ++diag.iterations;
        for (size_t i = 0; i < u.nodes.size(); ++i)
            if (next.values[i] < u.values[i] * (1.0 - 1e-11)) diag.monotone = false;
        residual = next.sup_relative_change(u);
        {
            Measure om = pushforward(sigma, next, pr.q);
            auto aj = wolff_potential(pr, om, on_axis(center, diag.probe_radius),
                                      diag.probe_truncation);
            diag.aj_trace.push_back(aj.value_or_inf());
        }
        u = next;
        if (u.values[probe] > 1e6 * guard_scale)
            throw SolveError(SolveErrorKind::UnboundedIterates,
                             "solve: iterates exceed 1e6 x the initial scale");
        if (residual < opt.tol) break;
    }
    diag.residual = residual;
    if (residual >= opt.tol)
        throw SolveError(SolveErrorKind::NonconvergentIteration,
                         "solve: residual " + std::to_string(residual) + " after " +
                             std::to_string(diag.iterations) + " iterations");
    return {u, diag};
}

double weighted_ball_integral(const Measure& sigma, const RadialField& field,
                              double power, const Point& x, double r) {
    auto weight = field.power_pieces(power);
    double total = 0.0;
    for (size_t i = 0; i < sigma.components().size(); ++i) {
        if (const auto* a = std::get_if<AtomComponent>(&sigma.components()[i])) {
            if (dist(a->location, x) < r)
                total += a->mass *
                         std::pow(field.value_at(dist(a->location, field.center)), power);
            continue;
        }
        const Point* c = detail::center_of(sigma.components()[i]);
        if (dist(*c, field.center) > 1e-12 * (1.0 + norm(*c)))
            throw std::invalid_argument(
                "weighted_ball_integral: component not concentric with the field");
        auto prod = detail::multiply_pieces(sigma.table(i)->density_pieces(), weight);
        if (prod.empty()) continue;
        detail::RadialTable tab(prod, sigma.dimension());
        total += tab.offcenter_mass(dist(x, field.center), r);
    }
    return total;
}

LocalSolveResult local_solve(const Params& pr, const Measure& sigma,
                             const Point& center, double radius,
                             const SolveOptions& opt) {
    Measure restricted = sigma.restricted_concentric(center, radius);
    if (restricted.has_atoms())
        throw SolveError(SolveErrorKind::AtomInEvaluationSet,
                         "local_solve: restricted measure has atoms");
    LocalSolveResult res;
    if (restricted.empty()) {
        res.field = RadialField::log_grid(center, 1e-3 * radius, 1e3 * radius, 32);
        return res;
    }
    SolveOptions lo = opt;
    if (lo.grid.r_min <= 0.0) lo.grid.r_min = 1e-4 * radius;
    if (lo.grid.r_max <= 0.0) lo.grid.r_max = 1e2 * radius;
    auto [field, diag] = solve_sublinear(pr, restricted, lo);
    res.diag = diag;
    res.energy = weighted_ball_integral(restricted, field, pr.q, center, radius);
    res.field = std::move(field);
    return res;
}

RiccatiPair riccati_transform(const Params& pr, const RadialField& u) {
    RiccatiPair pair;
    pair.u = u;
    pair.v = u;
    double gamma = (pr.p - 1.0 - pr.q) / (pr.p - 1.0);
    double coef = 1.0 / gamma;
    for (size_t i = 0; i < u.values.size(); ++i)
        pair.v.values[i] = coef * std::pow(u.values[i], gamma);
    pair.v.head_exponent = u.head_exponent * gamma;
    pair.v.tail_exponent = u.tail_exponent * gamma;
    pair.b = pr.riccati_b;
    return pair;
}

}  // namespace wolff

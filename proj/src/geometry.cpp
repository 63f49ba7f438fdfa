#include "wolff/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace wolff {

double norm(const Point& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double dist(const Point& a, const Point& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dist: dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Point add(const Point& a, const Point& b) {
    Point r(a);
    for (size_t i = 0; i < a.size(); ++i) r[i] += b[i];
    return r;
}

Point sub(const Point& a, const Point& b) {
    Point r(a);
    for (size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
    return r;
}

Point axis_point(int n, double coord) {
    Point p(static_cast<size_t>(n), 0.0);
    p[0] = coord;
    return p;
}

double unit_sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("unit_sphere_area: n >= 1 required");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double unit_ball_volume(int n) { return unit_sphere_area(n) / n; }

double sphere_cap_fraction(int n, double d, double s, double r) {
    if (d < 0 || s < 0 || r < 0)
        throw std::invalid_argument("sphere_cap_fraction: nonnegative arguments required");
    if (r == 0.0) return 0.0;             // open ball of radius 0 is empty
    if (s == 0.0) return d < r ? 1.0 : 0.0;
    if (d == 0.0) return s < r ? 1.0 : 0.0;
    if (s <= r - d) return 1.0;           // sphere entirely inside
    if (s >= r + d) return 0.0;           // sphere entirely outside
    if (s <= d - r) return 0.0;           // ball too far to reach the sphere
    double ustar = (d * d + s * s - r * r) / (2.0 * d * s);
    ustar = std::clamp(ustar, -1.0, 1.0);
    // Angular measure of {u > ustar} with density (1-u^2)^{(n-3)/2}.
    double t = 0.5 * (1.0 + ustar);
    double a = 0.5 * (n - 1);
    return 1.0 - boost::math::ibeta(a, a, t);
}

namespace {

// integral over u in [u_lo, u_hi] of (A - B u)^{-beta/2} (1-u^2)^{(n-3)/2} du
// with A = d^2 + s^2, B = 2 d s (d may be signed).  Closed form for n = 3,
// quadrature otherwise.  Kernel distance evaluated as (d-s)^2 + 2ds(1-u) to
// stay exact near u = 1.
double kernel_angular_integral(int n, double d, double s, double beta,
                               double u_lo, double u_hi) {
    if (u_hi <= u_lo) return 0.0;
    const double B = 2.0 * d * s;
    if (B == 0.0) {
        double base = std::pow(std::max(std::fabs(d), s), -beta);
        if (n == 3) return base * (u_hi - u_lo);
        auto f = [&](double u) { return std::pow(1.0 - u * u, 0.5 * (n - 3)); };
        double w = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, u_lo, u_hi, 10, 1e-11);
        return base * w;
    }
    auto dist2 = [&](double u) {
        if (B > 0.0) return std::max((d - s) * (d - s) + B * (1.0 - u), 0.0);
        return std::max((d + s) * (d + s) - B * (1.0 + u), 0.0);
    };
    if (n == 3) {
        double wlo = dist2(u_lo), whi = dist2(u_hi);
        if (beta == 2.0) return (std::log(wlo) - std::log(whi)) / B;
        double ex = 1.0 - 0.5 * beta;
        return (std::pow(wlo, ex) - std::pow(whi, ex)) / (B * ex);
    }
    auto f = [&](double u) {
        return std::pow(dist2(u), -0.5 * beta) *
               std::pow(std::max((1.0 - u) * (1.0 + u), 0.0), 0.5 * (n - 3));
    };
    // Endpoint singularities (kernel at u=1 when |d| ~ s; the angular weight
    // at u = +-1 when n = 2) are algebraic: tanh-sinh handles both.
    bool singular = (u_lo <= -1.0 + 1e-12) || (u_hi >= 1.0 - 1e-12);
    if (singular) {
        boost::math::quadrature::tanh_sinh<double> ts(10);
        return ts.integrate(f, u_lo, u_hi, 1e-11);
    }
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, u_lo, u_hi, 10, 1e-11);
}

double angular_normalizer(int n) {
    // integral over [-1,1] of (1-u^2)^{(n-3)/2} du = sqrt(pi) Gamma((n-1)/2) / Gamma(n/2)
    return std::sqrt(M_PI) * std::tgamma(0.5 * (n - 1)) / std::tgamma(0.5 * n);
}

}  // namespace

double kernel_sphere_mean(int n, double d, double s, double beta) {
    if (beta == 0.0) return 1.0;
    if (d == 0.0 && s == 0.0) return std::numeric_limits<double>::infinity();
    if (d == 0.0) return std::pow(s, -beta);
    if (s == 0.0) return std::pow(d, -beta);
    if (d == s && beta >= n - 1)  // mean diverges exactly on the sphere
        return std::numeric_limits<double>::infinity();
    return kernel_angular_integral(n, d, s, beta, -1.0, 1.0) / angular_normalizer(n);
}

double kernel_sphere_partial(int n, double d, double s, double beta,
                             double u_lo, double u_hi) {
    u_lo = std::clamp(u_lo, -1.0, 1.0);
    u_hi = std::clamp(u_hi, -1.0, 1.0);
    if (u_hi <= u_lo) return 0.0;
    return kernel_angular_integral(n, d, s, beta, u_lo, u_hi) / angular_normalizer(n);
}

}  // namespace wolff

#ifndef WOLFF_POTENTIALS_HPP
#define WOLFF_POTENTIALS_HPP

#include <optional>
#include <vector>

#include "wolff/measure.hpp"
#include "wolff/params.hpp"

namespace wolff {

struct TailVerdict {
    enum class V { Converges, Diverges, Inconclusive };
    V verdict = V::Inconclusive;
    double fitted_exponent = 0.0;  // log-log growth of sigma(B(0,r))
    double critical_exponent = 0.0;
    double fit_lo = 0.0, fit_hi = 0.0;  // fit window (0,0 when analytic)
    double margin = 0.0;
    bool analytic = false;
};

const char* to_string(TailVerdict::V v);

struct QuadratureReport {
    ExtendedValue value;
    int panels = 0;
    double estimated_error = 0.0;
    double tail_contribution = 0.0;
};

enum class TailMode { WolffTail, MassGrowth };

/// W_{alpha,p} sigma(x) truncated at t:  int_t^inf [sigma(B(x,r))/r^{n-ap}]^{1/(p-1)} dr/r.
ExtendedValue wolff_potential(const Params& pr, const Measure& m, const Point& x, double t = 0.0);
QuadratureReport wolff_report(const Params& pr, const Measure& m, const Point& x,
                              double t = 0.0, double rel_tol = 1e-9);

/// Riesz potential I_{2 alpha} (p = 2 only), unnormalized kernel |x-y|^{2a-n}.
ExtendedValue riesz_potential(const Params& pr, const Measure& m, const Point& x);

/// int |x-y|^{-beta} d sigma(y), optionally restricted to an open ball.
/// Radial components clipped by a ball require x, the component center, and
/// the clip center to be collinear (all use sites satisfy this).
struct ClipBall {
    Point center;
    double radius = 0.0;
};
ExtendedValue kernel_integral(const Measure& m, const Point& x, double beta,
                              const std::optional<ClipBall>& clip = std::nullopt);

/// Convergence of the Wolff tail integral.  All supported component kinds
/// have closed-form tails, so WolffTail mode classifies analytically;
/// MassGrowth mode fits the empirical log-log slope of r -> sigma(B(0,r))
/// over [2 r_last, 1e4 r_last] with the configured slope margin.
TailVerdict tail_classify(const Params& pr, const Measure& m,
                          TailMode mode = TailMode::WolffTail, double margin = 0.05);

/// Least-squares slope of log v against log r (helper for the fit paths).
double fit_loglog_slope(const std::vector<double>& r, const std::vector<double>& v);

}  // namespace wolff

#endif  // WOLFF_POTENTIALS_HPP

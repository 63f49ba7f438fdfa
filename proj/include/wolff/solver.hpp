#ifndef WOLFF_SOLVER_HPP
#define WOLFF_SOLVER_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wolff/measure.hpp"
#include "wolff/params.hpp"
#include "wolff/potentials.hpp"

namespace wolff {

/// A nonnegative function of the radius on a logarithmic grid, extended by
/// power laws at both ends; carries solutions and radial potentials.
struct RadialField {
    Point center;
    std::vector<double> nodes;   // log-spaced, ascending
    std::vector<double> values;  // nonnegative
    double head_exponent = 0.0;  // value ~ v_1 (r/r_1)^head below the grid
    double tail_exponent = 0.0;  // value ~ v_m (r/r_m)^tail beyond the grid

    static RadialField log_grid(Point center, double r_min, double r_max, int count);

    double value_at(double r) const;
    /// values^power as a piecewise power density over [0, inf)
    std::vector<PowerPiece> power_pieces(double power = 1.0) const;
    /// refit head/tail exponents from the first/last decade of the grid
    void refresh_exponents();
    double sup_relative_change(const RadialField& other) const;
};

enum class SolveErrorKind {
    NonexistenceDetected,
    NonconvergentIteration,
    UnboundedIterates,
    InitializationFailed,
    AtomInEvaluationSet,
    NonradialUnsupported,
    DivergentTail,
};

class SolveError : public std::runtime_error {
public:
    SolveError(SolveErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    SolveErrorKind kind() const { return kind_; }

private:
    SolveErrorKind kind_;
};

struct SolveDiagnostics {
    int iterations = 0;
    bool monotone = true;
    double residual = 0.0;
    double c0_used = 1.0;
    double probe_radius = 0.0;
    double probe_truncation = 0.0;
    std::vector<double> aj_trace;  // A_j at the probe pair, one entry per iteration
};

struct GridSpec {
    double r_min = 0.0;  // 0: auto from the measure scale
    double r_max = 0.0;
    int count = 256;
};

struct SolveOptions {
    GridSpec grid;
    double tol = 1e-6;
    int max_iter = 200;
    bool skip_criteria_check = false;  // experiments only
    double quad_tol = 1e-8;
    const RadialField* warm_start = nullptr;
};

/// One Picard step u -> W_{alpha,p}(u^q d sigma) for sigma radial about u.center.
RadialField apply_T(const Params& pr, const Measure& sigma, const RadialField& u,
                    double quad_tol = 1e-8);

/// Minimal-solution construction: u_0 = c0 (W sigma)^{(p-1)/(p-1-q)} with c0
/// halved until T(u_0) >= u_0, then monotone iteration to the fixed point.
std::pair<RadialField, SolveDiagnostics> solve_sublinear(const Params& pr,
                                                         const Measure& sigma,
                                                         const SolveOptions& opt = {});

struct LocalSolveResult {
    RadialField field;
    double energy = 0.0;  // int_B u_B^q d sigma
    SolveDiagnostics diag;
};

/// Solve with sigma restricted to the open ball B(center, radius); the energy
/// feeds the embedding-constant estimate.
LocalSolveResult local_solve(const Params& pr, const Measure& sigma,
                             const Point& center, double radius,
                             const SolveOptions& opt = {});

struct RiccatiPair {
    RadialField u;
    RadialField v;
    double b = 0.0;
};

/// v = ((p-1)/(p-1-q)) u^{(p-1-q)/(p-1)} nodewise.
RiccatiPair riccati_transform(const Params& pr, const RadialField& u);

/// int over B(center_x, r) of field(|y - field.center|)^power d sigma(y),
/// for sigma radial about field.center and the ball center on the same axis.
double weighted_ball_integral(const Measure& sigma, const RadialField& field,
                              double power, const Point& x, double r);

}  // namespace wolff

#endif  // WOLFF_SOLVER_HPP

#ifndef WOLFF_MEASURE_HPP
#define WOLFF_MEASURE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

#include "wolff/extended_value.hpp"
#include "wolff/geometry.hpp"

namespace wolff {

/// Density amplitude * |y - center|^{-gamma} on the open ball of the given
/// truncation radius.  Finite total mass requires gamma < n (checked when the
/// measure is assembled, since n comes from the center's dimension).
struct RadialPowerBump {
    Point center;
    double radius = 1.0;
    double gamma = 0.0;
    double amplitude = 1.0;
};

struct AtomComponent {
    Point location;
    double mass = 1.0;
};

/// Tabulated radial density: piecewise power-law (linear in log-log) between
/// nodes, constant below the first node, and amplitude * (r/r_last)^tail
/// beyond the last.  Segments with a zero endpoint density are taken
/// identically zero.
struct RadialProfile {
    Point center;
    std::vector<double> nodes;
    std::vector<double> densities;
    double tail_exponent = 0.0;
};

/// density = coef * s^expo on [lo, hi); hi of the last piece may be +inf.
struct PowerPiece {
    double lo = 0.0;
    double hi = 0.0;
    double coef = 0.0;
    double expo = 0.0;
};

/// Canonical radial component used internally (e.g. for iteration
/// pushforwards); not part of the external JSON schema.
struct PiecewiseDensity {
    Point center;
    std::vector<PowerPiece> pieces;  // sorted, disjoint; gaps mean zero density
};

using MeasureComponent =
    std::variant<RadialPowerBump, AtomComponent, RadialProfile, PiecewiseDensity>;

namespace detail {

/// Per-component integration tables for one radial component in dimension n.
/// Pieces cover [0, inf) contiguously (zero-density filler pieces inserted).
class RadialTable {
public:
    RadialTable(const std::vector<PowerPiece>& pieces, int n);

    int dim() const { return n_; }
    double support_radius() const { return support_hi_; }
    bool unbounded() const { return !std::isfinite(support_hi_); }
    double total_mass() const { return total_mass_; }  // +inf possible
    /// density exponent at s -> 0+ (NaN when the density vanishes near 0)
    double head_exponent() const { return head_expo_; }
    bool head_positive() const { return head_positive_; }
    /// tail piece (coef, expo); coef 0 when compactly supported
    double tail_coef() const { return tail_coef_; }
    double tail_exponent() const { return tail_expo_; }

    double density(double s) const;
    double mass(double s) const;                       // sigma(B(center, s))
    double int_mass(double a, double b) const;         // int_a^b M(s) ds
    double int_mass_over_s2(double a, double b) const; // int_a^b M(s)/s^2 ds
    double offcenter_mass(double d, double r) const;   // mass of B(x, r), |x-center| = d
    /// boundaries where the density loses smoothness (excluding 0 and inf)
    const std::vector<double>& kinks() const { return kinks_; }
    /// normalized density pieces covering [0, inf)
    std::vector<PowerPiece> density_pieces() const;

private:
    struct P {
        double lo, hi;
        double coef, expo;  // density
        double A, C, E;     // mass on piece: A + (C/E) s^E, or A + C ln s when logm
        bool logm;
        double m_lo;        // cumulative mass at piece start
    };
    size_t piece_index(double s) const;
    double piece_mass(const P& p, double s) const;
    double piece_int_m(const P& p, double a, double b) const;
    double piece_int_m_s2(const P& p, double a, double b) const;
    double mass_limit_at_infinity() const;

    int n_ = 0;
    double omega_ = 0.0;
    std::vector<double> bnd_;   // piece start radii; piece i covers [bnd_[i], bnd_[i+1])
    std::vector<P> pieces_;
    std::vector<double> mass_pref_, p1_pref_, p2_pref_;  // prefixes at bnd_
    std::vector<double> kinks_;
    double total_mass_ = 0.0;
    double support_hi_ = 0.0;
    double head_expo_ = 0.0;
    bool head_positive_ = false;
    double tail_coef_ = 0.0;
    double tail_expo_ = 0.0;
};

std::vector<PowerPiece> pieces_of(const MeasureComponent& c);
const Point* center_of(const MeasureComponent& c);

/// Pointwise product of two piecewise-power densities (e.g. sigma-density
/// times an interpolated u^q weight); zero wherever either factor vanishes.
std::vector<PowerPiece> multiply_pieces(const std::vector<PowerPiece>& a,
                                        const std::vector<PowerPiece>& b);

}  // namespace detail

class Measure {
public:
    Measure() = default;
    explicit Measure(std::vector<MeasureComponent> comps);
    Measure(const Measure& o) : comps_(o.comps_), dim_(o.dim_), tables_(o.tables_) {}
    Measure& operator=(const Measure& o) {
        if (this != &o) {
            comps_ = o.comps_;
            dim_ = o.dim_;
            tables_ = o.tables_;
            std::lock_guard<std::mutex> lk(cache_mu_);
            bp_cache_.clear();
        }
        return *this;
    }
    Measure(Measure&& o) noexcept
        : comps_(std::move(o.comps_)), dim_(o.dim_), tables_(std::move(o.tables_)) {}
    Measure& operator=(Measure&& o) noexcept {
        comps_ = std::move(o.comps_);
        dim_ = o.dim_;
        tables_ = std::move(o.tables_);
        return *this;
    }

    bool empty() const;
    int dimension() const { return dim_; }
    const std::vector<MeasureComponent>& components() const { return comps_; }
    bool has_atoms() const;

    double ball_mass(const Point& x, double r) const;
    /// Radii where r -> ball_mass(x, r) loses smoothness, ascending.
    std::vector<double> breakpoints(const Point& x) const;
    ExtendedValue total_mass() const;
    Measure translated(const Point& v) const;

    /// Restriction to the open ball B(center, radius).  Radial components must
    /// be concentric with `center`; atoms strictly inside are kept.
    Measure restricted_concentric(const Point& center, double radius) const;

    bool is_radial_about(const Point& c) const;
    /// Common center when every radial component shares one (atoms ignored).
    std::optional<Point> radial_center() const;

    struct TailPower {
        double beta = 0.0;      // sigma(B(0,r)) ~ r^beta as r -> inf (0 if finite mass)
        bool finite_mass = true;
        bool log_factor = false;  // mass grows like log r (tail exponent exactly -n)
    };
    TailPower tail_power() const;

    struct CoreInfo {
        bool at_atom = false;
        bool has_density = false;  // x is the center of a component with positive density at 0+
        double density_expo = 0.0; // leading density exponent there
    };
    CoreInfo core_at(const Point& x) const;

    /// Distance beyond which B(x, r) contains the whole support (inf if unbounded).
    double support_radius_about(const Point& x) const;

    uint64_t hash() const;

    const detail::RadialTable* table(size_t comp_index) const;

private:
    std::vector<MeasureComponent> comps_;
    int dim_ = 0;
    std::vector<std::shared_ptr<const detail::RadialTable>> tables_;
    mutable std::mutex cache_mu_;
    mutable std::map<Point, std::shared_ptr<const std::vector<double>>> bp_cache_;
};

/// Evaluates r -> sigma(B(x, r)) for a fixed x with per-component geometry
/// precomputed; the workhorse of every potential quadrature.
class BallMassEvaluator {
public:
    BallMassEvaluator(const Measure& m, Point x);
    double operator()(double r) const;
    const std::vector<double>& breakpoints() const { return breaks_; }
    const Point& point() const { return x_; }

private:
    const Measure* m_;
    Point x_;
    std::vector<double> dists_;        // per radial component: |x - center|
    std::vector<size_t> radial_idx_;
    std::vector<double> atom_dist_;    // sorted
    std::vector<double> atom_cum_;     // cumulative atom mass by distance
    std::vector<double> breaks_;
};

}  // namespace wolff

#endif  // WOLFF_MEASURE_HPP

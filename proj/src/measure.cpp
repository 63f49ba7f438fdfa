#include "wolff/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace wolff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// b^ex - a^ex without cancellation for b close to a (0 <= a <= b).
double pow_diff(double a, double b, double ex) {
    if (b == a) return 0.0;
    if (a == 0.0) return std::pow(b, ex);
    double rel = (b - a) / a;
    if (rel < 0.5) return std::pow(a, ex) * std::expm1(ex * std::log1p(rel));
    return std::pow(b, ex) - std::pow(a, ex);
}

double point_tol(const Point& a, const Point& b) {
    return 1e-12 * (1.0 + norm(a) + norm(b));
}

bool same_point(const Point& a, const Point& b) {
    return dist(a, b) <= point_tol(a, b);
}

}  // namespace

namespace detail {

std::vector<PowerPiece> pieces_of(const MeasureComponent& c) {
    std::vector<PowerPiece> out;
    if (const auto* b = std::get_if<RadialPowerBump>(&c)) {
        if (!(b->radius > 0.0)) throw std::invalid_argument("bump: radius > 0 required");
        if (!(b->amplitude > 0.0)) throw std::invalid_argument("bump: amplitude > 0 required");
        out.push_back({0.0, b->radius, b->amplitude, -b->gamma});
        return out;
    }
    if (const auto* pr = std::get_if<RadialProfile>(&c)) {
        const auto& rn = pr->nodes;
        const auto& de = pr->densities;
        if (rn.size() != de.size() || rn.empty())
            throw std::invalid_argument("profile: nodes/densities size mismatch or empty");
        for (size_t i = 0; i < rn.size(); ++i) {
            if (!(rn[i] > 0.0) || (i > 0 && !(rn[i] > rn[i - 1])))
                throw std::invalid_argument("profile: nodes must be positive and strictly increasing");
            if (de[i] < 0.0) throw std::invalid_argument("profile: densities must be nonnegative");
        }
        if (de[0] > 0.0) out.push_back({0.0, rn[0], de[0], 0.0});  // constant head
        for (size_t i = 0; i + 1 < rn.size(); ++i) {
            if (de[i] > 0.0 && de[i + 1] > 0.0) {
                double slope = std::log(de[i + 1] / de[i]) / std::log(rn[i + 1] / rn[i]);
                double coef = de[i] * std::pow(rn[i], -slope);
                out.push_back({rn[i], rn[i + 1], coef, slope});
            }
        }
        if (de.back() > 0.0) {
            double tau = pr->tail_exponent;
            double coef = de.back() * std::pow(rn.back(), -tau);
            out.push_back({rn.back(), kInf, coef, tau});
        }
        return out;
    }
    if (const auto* pd = std::get_if<PiecewiseDensity>(&c)) return pd->pieces;
    throw std::invalid_argument("pieces_of: atom component has no density pieces");
}

const Point* center_of(const MeasureComponent& c) {
    if (const auto* b = std::get_if<RadialPowerBump>(&c)) return &b->center;
    if (const auto* a = std::get_if<AtomComponent>(&c)) return &a->location;
    if (const auto* p = std::get_if<RadialProfile>(&c)) return &p->center;
    return &std::get<PiecewiseDensity>(c).center;
}

RadialTable::RadialTable(const std::vector<PowerPiece>& raw, int n) : n_(n) {
    omega_ = unit_sphere_area(n);

    // Sort, validate, and fill gaps with zero-density pieces so that the
    // pieces cover [0, inf) contiguously.
    std::vector<PowerPiece> src(raw);
    std::sort(src.begin(), src.end(),
              [](const PowerPiece& a, const PowerPiece& b) { return a.lo < b.lo; });
    std::vector<PowerPiece> cov;
    double cursor = 0.0;
    for (const auto& p : src) {
        if (!(p.hi > p.lo)) throw std::invalid_argument("piece: hi > lo required");
        if (p.coef < 0.0) throw std::invalid_argument("piece: coef >= 0 required");
        if (p.lo < cursor - 1e-15 * std::max(1.0, cursor))
            throw std::invalid_argument("pieces overlap");
        if (p.lo > cursor) cov.push_back({cursor, p.lo, 0.0, 0.0});
        if (p.coef > 0.0 && p.lo == 0.0 && p.expo <= -static_cast<double>(n))
            throw std::invalid_argument("density not locally integrable at the origin");
        cov.push_back(p);
        cursor = p.hi;
    }
    if (std::isfinite(cursor)) cov.push_back({cursor, kInf, 0.0, 0.0});

    // Mass parameters and prefixes.
    double m = 0.0, p1 = 0.0, p2 = 0.0;
    for (size_t i = 0; i < cov.size(); ++i) {
        const auto& q = cov[i];
        P pc;
        pc.lo = q.lo;
        pc.hi = q.hi;
        pc.coef = q.coef;
        pc.expo = q.expo;
        pc.C = omega_ * q.coef;
        pc.E = q.expo + n;
        pc.logm = (pc.C > 0.0 && pc.E == 0.0);
        pc.m_lo = m;
        if (pc.C == 0.0) {
            pc.A = m;
            pc.E = 1.0;  // unused
        } else if (pc.logm) {
            pc.A = m - pc.C * std::log(q.lo);
        } else {
            pc.A = m - (pc.C / pc.E) * std::pow(q.lo, pc.E);
        }
        bnd_.push_back(q.lo);
        pieces_.push_back(pc);
        mass_pref_.push_back(m);
        p1_pref_.push_back(p1);
        p2_pref_.push_back(i == 0 ? 0.0 : p2);
        if (std::isfinite(q.hi)) {
            m = piece_mass(pc, q.hi);
            p1 += piece_int_m(pc, q.lo, q.hi);
            if (i >= 1) p2 += piece_int_m_s2(pc, q.lo, q.hi);
            else if (q.hi > 0.0 && pieces_.size() == 1) p2 = 0.0;  // anchor at bnd_[1]
        }
    }

    // Support, head/tail descriptors, kinks.
    support_hi_ = 0.0;
    head_positive_ = false;
    head_expo_ = std::numeric_limits<double>::quiet_NaN();
    tail_coef_ = 0.0;
    tail_expo_ = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = 0; i < pieces_.size(); ++i) {
        const auto& pc = pieces_[i];
        if (pc.coef > 0.0) {
            support_hi_ = pc.hi;
            if (pc.lo == 0.0) {
                head_positive_ = true;
                head_expo_ = pc.expo;
            }
            if (!std::isfinite(pc.hi)) {
                tail_coef_ = pc.coef;
                tail_expo_ = pc.expo;
            }
        }
    }
    if (std::isfinite(support_hi_)) {
        total_mass_ = mass(support_hi_);
    } else {
        // integrable tail iff expo + n < 0
        total_mass_ = (tail_expo_ + n < 0.0) ? mass_limit_at_infinity() : kInf;
    }
    for (size_t i = 1; i < bnd_.size(); ++i)
        if (bnd_[i] > 0.0 && std::isfinite(bnd_[i])) kinks_.push_back(bnd_[i]);
}

double RadialTable::mass_limit_at_infinity() const {
    const P& last = pieces_.back();
    if (last.C == 0.0) return last.m_lo;
    // A + (C/E) s^E with E < 0: limit A
    return last.A;
}

size_t RadialTable::piece_index(double s) const {
    auto it = std::upper_bound(bnd_.begin(), bnd_.end(), s);
    size_t i = static_cast<size_t>(it - bnd_.begin());
    return i == 0 ? 0 : i - 1;
}

double RadialTable::piece_mass(const P& p, double s) const {
    if (p.C == 0.0) return p.m_lo;
    if (p.logm) return p.m_lo + p.C * std::log(s / p.lo);
    return p.m_lo + (p.C / p.E) * pow_diff(p.lo, s, p.E);
}

double RadialTable::piece_int_m(const P& p, double a, double b) const {
    if (b <= a) return 0.0;
    if (p.C == 0.0) return p.A * (b - a);
    if (p.logm)
        return p.A * (b - a) + p.C * (b * (std::log(b) - 1.0) - a * (std::log(a) - 1.0));
    double e1 = p.E + 1.0;
    double t = (e1 == 0.0) ? std::log(b / a) : pow_diff(a, b, e1) / e1;
    return p.A * (b - a) + (p.C / p.E) * t;
}

double RadialTable::piece_int_m_s2(const P& p, double a, double b) const {
    if (b <= a) return 0.0;
    double const_term = (a == 0.0) ? 0.0 : p.A * (1.0 / a - 1.0 / b);
    if (p.A != 0.0 && a == 0.0)
        throw std::logic_error("int_mass_over_s2: divergent lower endpoint");
    if (p.C == 0.0) return const_term;
    if (p.logm)
        return const_term +
               p.C * ((std::log(a) + 1.0) / a - (std::log(b) + 1.0) / b);
    double e1 = p.E - 1.0;
    double t = (e1 == 0.0) ? std::log(b / a) : pow_diff(a, b, e1) / e1;
    return const_term + (p.C / p.E) * t;
}

std::vector<PowerPiece> RadialTable::density_pieces() const {
    std::vector<PowerPiece> out;
    for (const auto& p : pieces_)
        out.push_back({p.lo, p.hi, p.coef, p.expo});
    return out;
}

double RadialTable::density(double s) const {
    const P& p = pieces_[piece_index(s)];
    if (p.coef == 0.0) return 0.0;
    return p.coef * std::pow(s, p.expo);
}

double RadialTable::mass(double s) const {
    if (s <= 0.0) return 0.0;
    return piece_mass(pieces_[piece_index(s)], s);
}

double RadialTable::int_mass(double a, double b) const {
    if (b <= a) return 0.0;
    size_t ia = piece_index(a), ib = piece_index(b);
    if (ia == ib) return piece_int_m(pieces_[ia], a, b);
    double v = piece_int_m(pieces_[ia], a, bnd_[ia + 1]);
    v += p1_pref_[ib] - p1_pref_[ia + 1];
    v += piece_int_m(pieces_[ib], bnd_[ib], b);
    return v;
}

double RadialTable::int_mass_over_s2(double a, double b) const {
    if (b <= a) return 0.0;
    size_t ia = piece_index(a), ib = piece_index(b);
    if (ia == ib) return piece_int_m_s2(pieces_[ia], a, b);
    double v = piece_int_m_s2(pieces_[ia], a, bnd_[ia + 1]);
    v += p2_pref_[ib] - p2_pref_[ia + 1];
    v += piece_int_m_s2(pieces_[ib], bnd_[ib], b);
    return v;
}

double RadialTable::offcenter_mass(double d, double r) const {
    if (r <= 0.0) return 0.0;
    if (d <= 1e-14 * (1.0 + r)) return mass(r);
    double a = std::fabs(d - r), b = d + r;
    if (a >= support_hi_) return (r > d) ? total_mass_ : 0.0;

    if (n_ == 3 && r >= 1e-3 * d) {
        // sigma(B(x,r)) = [ int_a^b M + (r^2-d^2) int_a^b M/s^2 ] / (4d)
        double v = int_mass(a, b);
        if (a > 0.0) v += (r - d) * (r + d) * int_mass_over_s2(a, b);
        return std::max(v / (4.0 * d), 0.0);
    }

    if (r < 1e-3 * d) {
        // Tiny ring far from the center: the density is smooth on each piece
        // overlap, the cap factor a plain parabola-like bump.  Fixed-order
        // Gauss after s = d + r t is exact to roundoff here; the prefix path
        // would lose all digits to cancellation.
        double lo = std::max(a, 0.0), hi = std::min(b, support_hi_);
        if (hi <= lo) return 0.0;
        double ring = 0.0;
        size_t i0 = piece_index(lo), i1 = piece_index(std::nextafter(hi, 0.0));
        for (size_t i = i0; i <= i1 && i < pieces_.size(); ++i) {
            const P& p = pieces_[i];
            if (p.coef == 0.0) continue;
            double pa = std::max(lo, p.lo), pb = std::min(hi, std::min(p.hi, support_hi_));
            if (pb <= pa) continue;
            auto f = [&](double s) {
                double cap;
                if (n_ == 3) {
                    cap = std::clamp((r * r - (d - s) * (d - s)) / (4.0 * d * s), 0.0, 1.0);
                } else {
                    cap = sphere_cap_fraction(n_, d, s, r);
                }
                return p.coef * std::pow(s, p.expo + n_ - 1) * omega_ * cap;
            };
            ring += boost::math::quadrature::gauss<double, 30>::integrate(f, pa, pb);
        }
        return ring;
    }

    // General dimension: integration by parts against the cumulative mass,
    //   sigma(B(x,r)) = (1/Z) int_a^b M(s) w(u*(s)) (s^2 + r^2 - d^2)/(2 d s^2) ds,
    // with w(u) = (1-u^2)^{(n-3)/2} evaluated through the cancellation-free
    // products 1 -+ u* = ((r -+ (d-s))(r +- (d-s)))/(2ds) shifted appropriately.
    const double Z = std::sqrt(M_PI) * std::tgamma(0.5 * (n_ - 1)) / std::tgamma(0.5 * n_);
    auto integrand = [&](double s) {
        double m = piece_mass(pieces_[piece_index(s)], s);
        if (m <= 0.0) return 0.0;
        double om = (r - d + s) * (r + d - s) / (2.0 * d * s);   // 1 - u*
        double op = (d + s - r) * (d + s + r) / (2.0 * d * s);   // 1 + u*
        om = std::max(om, 0.0);
        op = std::max(op, 0.0);
        double w = std::pow(om * op, 0.5 * (n_ - 3));
        return m * w * (s * s + r * r - d * d) / (2.0 * d * s * s);
    };
    std::vector<double> pts{a};
    for (double k : kinks_)
        if (k > a * (1.0 + 1e-14) && k < b * (1.0 - 1e-14)) pts.push_back(k);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        bool endpoint = (i == 0) || (i + 2 == pts.size());
        if (endpoint && n_ != 3) {
            boost::math::quadrature::tanh_sinh<double> ts(10);
            total += ts.integrate(integrand, pts[i], pts[i + 1], 1e-10);
        } else {
            total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                integrand, pts[i], pts[i + 1], 9, 1e-11);
        }
    }
    return std::max(total / Z, 0.0);
}

std::vector<PowerPiece> multiply_pieces(const std::vector<PowerPiece>& a,
                                        const std::vector<PowerPiece>& b) {
    std::set<double> cuts{0.0};
    auto collect = [&cuts](const std::vector<PowerPiece>& v) {
        for (const auto& p : v) {
            cuts.insert(p.lo);
            if (std::isfinite(p.hi)) cuts.insert(p.hi);
        }
    };
    collect(a);
    collect(b);
    std::vector<double> cv(cuts.begin(), cuts.end());
    auto value = [](const std::vector<PowerPiece>& v, double lo,
                    double* coef, double* expo) {
        for (const auto& p : v)
            if (p.lo <= lo && lo < p.hi && p.coef > 0.0) {
                *coef = p.coef;
                *expo = p.expo;
                return true;
            }
        return false;
    };
    std::vector<PowerPiece> out;
    for (size_t i = 0; i < cv.size(); ++i) {
        double lo = cv[i];
        double hi = (i + 1 < cv.size()) ? cv[i + 1] : kInf;
        double ca, ea, cb, eb;
        if (!value(a, lo, &ca, &ea)) continue;
        if (!value(b, lo, &cb, &eb)) continue;
        out.push_back({lo, hi, ca * cb, ea + eb});
    }
    return out;
}

}  // namespace detail

Measure::Measure(std::vector<MeasureComponent> comps) : comps_(std::move(comps)) {
    if (comps_.empty()) return;
    dim_ = static_cast<int>(detail::center_of(comps_.front())->size());
    if (dim_ < 2) throw std::invalid_argument("Measure: dimension >= 2 required");
    tables_.resize(comps_.size());
    for (size_t i = 0; i < comps_.size(); ++i) {
        const Point* c = detail::center_of(comps_[i]);
        if (static_cast<int>(c->size()) != dim_)
            throw std::invalid_argument("Measure: mixed dimensions");
        if (const auto* a = std::get_if<AtomComponent>(&comps_[i])) {
            if (!(a->mass > 0.0)) throw std::invalid_argument("atom: mass > 0 required");
            continue;
        }
        if (const auto* b = std::get_if<RadialPowerBump>(&comps_[i])) {
            if (!(b->gamma < dim_))
                throw std::invalid_argument("bump: gamma < n required for finite mass");
        }
        tables_[i] = std::make_shared<detail::RadialTable>(
            detail::pieces_of(comps_[i]), dim_);
    }
}

bool Measure::empty() const {
    if (comps_.empty()) return true;
    for (size_t i = 0; i < comps_.size(); ++i) {
        if (std::holds_alternative<AtomComponent>(comps_[i])) return false;
        if (tables_[i] && tables_[i]->total_mass() > 0.0) return false;
    }
    return true;
}

bool Measure::has_atoms() const {
    for (const auto& c : comps_)
        if (std::holds_alternative<AtomComponent>(c)) return true;
    return false;
}

const detail::RadialTable* Measure::table(size_t i) const {
    return tables_[i] ? tables_[i].get() : nullptr;
}

double Measure::ball_mass(const Point& x, double r) const {
    if (comps_.empty() || r <= 0.0) return 0.0;
    return BallMassEvaluator(*this, x)(r);
}

std::vector<double> Measure::breakpoints(const Point& x) const {
    {
        std::lock_guard<std::mutex> lk(cache_mu_);
        auto it = bp_cache_.find(x);
        if (it != bp_cache_.end()) return *it->second;
    }
    std::set<double> bs;
    for (size_t i = 0; i < comps_.size(); ++i) {
        const Point* c = detail::center_of(comps_[i]);
        double d = dist(x, *c);
        if (const auto* a = std::get_if<AtomComponent>(&comps_[i])) {
            (void)a;
            if (d > 0.0) bs.insert(d);
            continue;
        }
        for (double k : tables_[i]->kinks()) {
            if (d + k > 0.0) bs.insert(d + k);
            double lo = std::fabs(d - k);
            if (lo > 0.0) bs.insert(lo);
        }
        if (d > 0.0) bs.insert(d);  // center of the component
    }
    auto out = std::make_shared<const std::vector<double>>(bs.begin(), bs.end());
    {
        std::lock_guard<std::mutex> lk(cache_mu_);
        bp_cache_.emplace(x, out);
    }
    return *out;
}

ExtendedValue Measure::total_mass() const {
    double total = 0.0;
    for (size_t i = 0; i < comps_.size(); ++i) {
        if (const auto* a = std::get_if<AtomComponent>(&comps_[i])) {
            total += a->mass;
            continue;
        }
        double m = tables_[i]->total_mass();
        if (!std::isfinite(m)) return ExtendedValue::infinite(InfReason::DivergentTail);
        total += m;
    }
    return total;
}

Measure Measure::translated(const Point& v) const {
    std::vector<MeasureComponent> out(comps_);
    for (auto& c : out) {
        std::visit([&](auto& cc) {
            if constexpr (std::is_same_v<std::decay_t<decltype(cc)>, AtomComponent>)
                cc.location = add(cc.location, v);
            else
                cc.center = add(cc.center, v);
        }, c);
    }
    return Measure(std::move(out));
}

Measure Measure::restricted_concentric(const Point& center, double radius) const {
    std::vector<MeasureComponent> out;
    for (size_t i = 0; i < comps_.size(); ++i) {
        if (const auto* a = std::get_if<AtomComponent>(&comps_[i])) {
            if (dist(a->location, center) < radius) out.push_back(*a);
            continue;
        }
        const Point* c = detail::center_of(comps_[i]);
        if (!same_point(*c, center))
            throw std::invalid_argument(
                "restricted_concentric: radial component not concentric with the ball");
        std::vector<PowerPiece> clipped;
        for (const auto& p : detail::pieces_of(comps_[i])) {
            if (p.lo >= radius) continue;
            PowerPiece q = p;
            q.hi = std::min(q.hi, radius);
            clipped.push_back(q);
        }
        if (!clipped.empty())
            out.push_back(PiecewiseDensity{center, std::move(clipped)});
    }
    return Measure(std::move(out));
}

bool Measure::is_radial_about(const Point& c) const {
    for (const auto& comp : comps_) {
        if (std::holds_alternative<AtomComponent>(comp)) return false;
        if (!same_point(*detail::center_of(comp), c)) return false;
    }
    return !comps_.empty();
}

std::optional<Point> Measure::radial_center() const {
    const Point* c = nullptr;
    for (const auto& comp : comps_) {
        if (std::holds_alternative<AtomComponent>(comp)) continue;
        if (!c) c = detail::center_of(comp);
        else if (!same_point(*c, *detail::center_of(comp))) return std::nullopt;
    }
    if (!c) return std::nullopt;
    return *c;
}

Measure::TailPower Measure::tail_power() const {
    TailPower tp;
    for (size_t i = 0; i < comps_.size(); ++i) {
        if (std::holds_alternative<AtomComponent>(comps_[i])) continue;
        const auto& t = *tables_[i];
        if (!t.unbounded() || !(t.tail_coef() > 0.0)) continue;
        double beta = t.tail_exponent() + dim_;
        if (beta > 0.0) {
            tp.finite_mass = false;
            if (beta > tp.beta) {
                tp.beta = beta;
                tp.log_factor = false;
            }
        } else if (beta == 0.0) {
            tp.finite_mass = false;
            if (tp.beta == 0.0) tp.log_factor = true;
        }
    }
    return tp;
}

Measure::CoreInfo Measure::core_at(const Point& x) const {
    CoreInfo ci;
    for (size_t i = 0; i < comps_.size(); ++i) {
        if (const auto* a = std::get_if<AtomComponent>(&comps_[i])) {
            if (same_point(a->location, x)) ci.at_atom = true;
            continue;
        }
        if (!same_point(*detail::center_of(comps_[i]), x)) continue;
        const auto& t = *tables_[i];
        if (t.head_positive()) {
            double e = t.head_exponent();
            if (!ci.has_density || e < ci.density_expo) {
                ci.has_density = true;
                ci.density_expo = e;
            }
        }
    }
    return ci;
}

double Measure::support_radius_about(const Point& x) const {
    double r = 0.0;
    for (size_t i = 0; i < comps_.size(); ++i) {
        const Point* c = detail::center_of(comps_[i]);
        double d = dist(x, *c);
        if (std::holds_alternative<AtomComponent>(comps_[i])) {
            r = std::max(r, d);
            continue;
        }
        if (tables_[i]->unbounded()) return kInf;
        r = std::max(r, d + tables_[i]->support_radius());
    }
    return r;
}

uint64_t Measure::hash() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    auto mixd = [&](double v) { mix(&v, sizeof(v)); };
    auto mixp = [&](const Point& pt) { for (double v : pt) mixd(v); };
    for (const auto& c : comps_) {
        std::visit([&](const auto& cc) {
            using T = std::decay_t<decltype(cc)>;
            if constexpr (std::is_same_v<T, RadialPowerBump>) {
                mixd(1);
                mixp(cc.center);
                mixd(cc.radius);
                mixd(cc.gamma);
                mixd(cc.amplitude);
            } else if constexpr (std::is_same_v<T, AtomComponent>) {
                mixd(2);
                mixp(cc.location);
                mixd(cc.mass);
            } else if constexpr (std::is_same_v<T, RadialProfile>) {
                mixd(3);
                mixp(cc.center);
                for (double v : cc.nodes) mixd(v);
                for (double v : cc.densities) mixd(v);
                mixd(cc.tail_exponent);
            } else {
                mixd(4);
                mixp(cc.center);
                for (const auto& p : cc.pieces) {
                    mixd(p.lo);
                    mixd(p.hi);
                    mixd(p.coef);
                    mixd(p.expo);
                }
            }
        }, c);
    }
    return h;
}

BallMassEvaluator::BallMassEvaluator(const Measure& m, Point x)
    : m_(&m), x_(std::move(x)) {
    if (m.empty()) return;
    std::vector<std::pair<double, double>> atoms;
    for (size_t i = 0; i < m.components().size(); ++i) {
        const auto& c = m.components()[i];
        if (const auto* a = std::get_if<AtomComponent>(&c)) {
            atoms.emplace_back(dist(x_, a->location), a->mass);
            continue;
        }
        radial_idx_.push_back(i);
        dists_.push_back(dist(x_, *detail::center_of(c)));
    }
    std::sort(atoms.begin(), atoms.end());
    double cum = 0.0;
    for (auto& [d, mass] : atoms) {
        atom_dist_.push_back(d);
        cum += mass;
        atom_cum_.push_back(cum);
    }
    breaks_ = m.breakpoints(x_);
}

double BallMassEvaluator::operator()(double r) const {
    if (r <= 0.0 || !m_) return 0.0;
    double total = 0.0;
    for (size_t k = 0; k < radial_idx_.size(); ++k) {
        const auto* t = m_->table(radial_idx_[k]);
        total += t->offcenter_mass(dists_[k], r);
    }
    if (!atom_dist_.empty()) {
        auto it = std::lower_bound(atom_dist_.begin(), atom_dist_.end(), r);
        if (it != atom_dist_.begin())
            total += atom_cum_[static_cast<size_t>(it - atom_dist_.begin()) - 1];
    }
    return total;
}

}  // namespace wolff

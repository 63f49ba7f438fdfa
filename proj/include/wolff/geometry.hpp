#ifndef WOLFF_GEOMETRY_HPP
#define WOLFF_GEOMETRY_HPP

#include <vector>

namespace wolff {

using Point = std::vector<double>;

double norm(const Point& x);
double dist(const Point& a, const Point& b);
Point add(const Point& a, const Point& b);
Point sub(const Point& a, const Point& b);
Point axis_point(int n, double coord);  // coord * e_1 in R^n

/// Surface area of the unit sphere S^{n-1} and volume of the unit ball.
double unit_sphere_area(int n);
double unit_ball_volume(int n);

/// Fraction of the sphere {|y - c| = s} lying inside the open ball B(x, r),
/// where d = |x - c|.  Computed through the regularized incomplete beta
/// function in dimension n; exact 0/1 in the tangent-free cases.
double sphere_cap_fraction(int n, double d, double s, double r);

/// Spherical mean of |x - y|^{-beta} over {|y - c| = s} with d = |x - c|.
/// Closed form for n = 3; Gauss quadrature in the polar angle otherwise.
/// Returns +inf when d == s == 0.
double kernel_sphere_mean(int n, double d, double s, double beta);

/// Mean of |x - y|^{-beta} over the part of the sphere {|y - c| = s} with
/// axial cosine u in [u_lo, u_hi], the axis pointing from c toward x at
/// distance d (d >= 0).  Weighted by the (unclipped) sphere measure, i.e.
/// integral over the u-range of the kernel times the angular density,
/// normalized by the FULL sphere measure.  Used for kernel integrals of
/// radial components clipped by a collinear ball.
double kernel_sphere_partial(int n, double d, double s, double beta,
                             double u_lo, double u_hi);

}  // namespace wolff

#endif  // WOLFF_GEOMETRY_HPP

#include "wolff/params.hpp"

#include <cmath>

namespace wolff {

Params make_params(int n, double p, double q, double alpha) {
    if (n < 2) throw InvalidExponents("dimension n >= 2 required, got n=" + std::to_string(n));
    if (!(p > 1.0)) throw InvalidExponents("p > 1 required");
    if (!(q > 0.0 && q < p - 1.0))
        throw InvalidExponents("0 < q < p-1 required (q=" + std::to_string(q) +
                               ", p-1=" + std::to_string(p - 1.0) + ")");
    if (!(alpha > 0.0 && alpha * p < n))
        throw InvalidExponents("0 < alpha*p < n required (alpha*p=" +
                               std::to_string(alpha * p) + ", n=" + std::to_string(n) + ")");

    Params pr;
    pr.n = n;
    pr.p = p;
    pr.q = q;
    pr.alpha = alpha;
    pr.growth_exp = (p - 1.0) / (p - 1.0 - q);
    pr.riccati_b = q * (p - 1.0) / (p - 1.0 - q);
    pr.kappa_exp = q * pr.growth_exp;  // same value through a second algebraic route
    pr.kernel_exp = (n - alpha * p) / (p - 1.0);

    // internal consistency of the derived exponents
    double slack = 64.0 * std::numeric_limits<double>::epsilon();
    if (std::fabs(pr.riccati_b - pr.kappa_exp) > slack * std::fabs(pr.riccati_b))
        throw InvalidExponents("derived exponent mismatch: b != eta");
    double e_rec = 1.0 + q * pr.growth_exp / (p - 1.0);
    if (std::fabs(pr.growth_exp - e_rec) > slack * std::fabs(pr.growth_exp))
        throw InvalidExponents("derived exponent mismatch: e != 1 + q e/(p-1)");
    return pr;
}

HessianExponents hessian_params(int k, int n) {
    if (k < 1) throw InvalidExponents("k >= 1 required");
    if (2 * k >= n)
        throw InvalidExponents("alpha*p = 2k = " + std::to_string(2 * k) +
                               " >= n = " + std::to_string(n));
    return HessianExponents{2.0 * k / (k + 1.0), static_cast<double>(k + 1)};
}

}  // namespace wolff

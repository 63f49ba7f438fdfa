#ifndef WOLFF_PARAMS_HPP
#define WOLFF_PARAMS_HPP

#include <stdexcept>
#include <string>

namespace wolff {

class InvalidExponents : public std::invalid_argument {
public:
    explicit InvalidExponents(const std::string& detail)
        : std::invalid_argument("invalid exponents: " + detail) {}
};

/// The exponent tuple (n, p, q, alpha) together with every derived exponent
/// the formulas use.  Validated on construction: 0 < q < p-1 (sublinearity)
/// and 0 < alpha*p < n (the potential is well defined).
struct Params {
    int n = 0;
    double p = 0.0;
    double q = 0.0;
    double alpha = 0.0;

    double growth_exp = 0.0;   // e = (p-1)/(p-1-q)
    double riccati_b = 0.0;    // b = q(p-1)/(p-1-q)
    double kappa_exp = 0.0;    // eta = q(p-1)/(p-1-q)
    double kernel_exp = 0.0;   // (n - alpha p)/(p-1)

    double pm1() const { return p - 1.0; }
    double n_ap() const { return n - alpha * p; }
};

Params make_params(int n, double p, double q, double alpha);

/// The k-Hessian exponent dictionary: alpha = 2k/(k+1), p = k+1.
/// Rejects 2k >= n (alpha*p = 2k must stay below n).
struct HessianExponents {
    double alpha;
    double p;
};
HessianExponents hessian_params(int k, int n);

}  // namespace wolff

#endif  // WOLFF_PARAMS_HPP

#ifndef WOLFF_EXTENDED_VALUE_HPP
#define WOLFF_EXTENDED_VALUE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wolff {

/// Why a quantity came out infinite.
enum class InfReason {
    None,
    DivergentTail,
    SingularCore,
    AtomInEvaluationSet,
};

inline const char* to_string(InfReason r) {
    switch (r) {
        case InfReason::None: return "none";
        case InfReason::DivergentTail: return "divergent_tail";
        case InfReason::SingularCore: return "singular_core";
        case InfReason::AtomInEvaluationSet: return "atom_in_evaluation_set";
    }
    return "unknown";
}

/// A nonnegative real extended with +infinity.  An infinite value always
/// carries the reason it arose; finite values never do.
class ExtendedValue {
public:
    ExtendedValue() = default;

    ExtendedValue(double v) {  // NOLINT: implicit by design
        if (std::isnan(v) || v < 0.0)
            throw std::invalid_argument("ExtendedValue: negative or NaN value");
        if (std::isinf(v))
            throw std::invalid_argument("ExtendedValue: bare infinity needs a reason tag");
        value_ = v;
    }

    static ExtendedValue infinite(InfReason r) {
        if (r == InfReason::None)
            throw std::invalid_argument("ExtendedValue: infinite value needs a non-none reason");
        ExtendedValue e;
        e.value_ = std::numeric_limits<double>::infinity();
        e.reason_ = r;
        return e;
    }

    bool is_finite() const { return std::isfinite(value_); }
    bool is_infinite() const { return !is_finite(); }

    /// Finite value; throws on infinity.
    double value() const {
        if (!is_finite())
            throw std::logic_error(std::string("ExtendedValue: infinite (") +
                                   to_string(reason_) + ")");
        return value_;
    }

    /// Finite value, or +inf as a plain double.
    double value_or_inf() const { return value_; }

    InfReason reason() const { return reason_; }

    std::string str() const {
        if (is_finite()) return std::to_string(value_);
        return std::string("inf[") + to_string(reason_) + "]";
    }

private:
    double value_ = 0.0;
    InfReason reason_ = InfReason::None;
};

}  // namespace wolff

#endif  // WOLFF_EXTENDED_VALUE_HPP

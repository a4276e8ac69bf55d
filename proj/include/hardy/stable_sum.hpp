#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace hardy {

/// Neumaier-compensated accumulator. Tracks the low-order bits that a plain
/// running sum drops, so prefix sums of 10^6 terms stay accurate to ~1 ulp.
class StableSum {
public:
    StableSum() = default;
    explicit StableSum(double init) : sum_(init) {}

    void add(double x) {
        const double t = sum_ + x;
        if (std::isfinite(t)) {
            if (std::abs(sum_) >= std::abs(x)) {
                comp_ += (sum_ - t) + x;
            } else {
                comp_ += (x - t) + sum_;
            }
        }
        // overflow propagates as +-inf with the compensation frozen, never NaN
        sum_ = t;
    }

    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// log(e^a + e^b), tolerant of -inf (empty) operands.
inline double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

/// Sum of |x_i|^p, compensated.
inline double pow_sum(std::span<const double> x, double p) {
    StableSum s;
    for (double v : x) s.add(std::pow(std::abs(v), p));
    return s.value();
}

/// lp norm of a vector.
inline double lp_norm(std::span<const double> x, double p) {
    return std::pow(pow_sum(x, p), 1.0 / p);
}

}  // namespace hardy

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hardy {

enum class BoundMethod { CartlidgeL, BennettE, MLog, MSum, LocalCond, Thm31Cond };

/// Behaviour of the per-index values on the computed prefix.
/// IncreasingTail means the maximum sits at the last index with a
/// nondecreasing tail, i.e. the reported value is a lower estimate of an
/// infinite supremum.
enum class Trend { IncreasingTail, AttainedInterior, Flat };

inline const char* to_string(BoundMethod m) {
    switch (m) {
        case BoundMethod::CartlidgeL: return "cartlidge_L";
        case BoundMethod::BennettE: return "bennett_E";
        case BoundMethod::MLog: return "m_log";
        case BoundMethod::MSum: return "m_sum";
        case BoundMethod::LocalCond: return "local_condition";
        case BoundMethod::Thm31Cond: return "thm31_condition";
    }
    return "?";
}

inline const char* to_string(Trend t) {
    switch (t) {
        case Trend::IncreasingTail: return "increasing_tail";
        case Trend::AttainedInterior: return "attained_interior";
        case Trend::Flat: return "flat";
    }
    return "?";
}

/// One computed constant or condition check.
///
/// For supremum-type methods (CartlidgeL, BennettE, MLog, MSum):
///   value = max(per_index), argmax = smallest 1-based index attaining it.
/// For condition checks (LocalCond, Thm31Cond):
///   value = the tested L, per_index = feasibility margins RHS - LHS,
///   argmax = index of the smallest margin, feasible = all margins >= 0.
struct BoundReport {
    BoundMethod method;
    double value = 0.0;
    std::vector<double> per_index;  // per_index[i] is the quantity at n = i+1
    std::size_t argmax = 0;         // 1-based
    Trend trend = Trend::Flat;
    std::optional<bool> feasible;
};

/// lhs <= rhs check for one inequality instance. pass absorbs roundoff on
/// mathematically true inequalities: residual >= -tolerance * max(1, |rhs|).
/// A right side that overflows to +inf against a finite left side counts as
/// pass (the true rhs exceeds every representable lhs); NaN never passes.
struct VerificationResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline constexpr double kVerifyTol = 1e-12;

inline VerificationResult make_verification(double lhs, double rhs, double tol = kVerifyTol) {
    VerificationResult r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = rhs - lhs;
    r.tolerance = tol;
    if (std::isfinite(lhs) && rhs == std::numeric_limits<double>::infinity()) {
        r.pass = true;
    } else {
        r.pass = std::isfinite(lhs) && std::isfinite(rhs) &&
                 r.residual >= -tol * std::max(1.0, std::abs(rhs));
    }
    return r;
}

}  // namespace hardy

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardy/report.hpp"
#include "hardy/stable_sum.hpp"
#include "hardy/weights.hpp"

namespace hardy {

inline constexpr double kBisectTol = 1e-12;
inline constexpr int kBisectMaxIter = 200;

namespace detail {

inline Trend classify_trend(const std::vector<double>& per_index, std::size_t argmax) {
    if (per_index.size() < 2) return Trend::Flat;
    double lo = per_index.front(), hi = per_index.front();
    for (double v : per_index) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) return Trend::Flat;
    if (argmax == per_index.size()) {
        const std::size_t tail = std::min<std::size_t>(3, per_index.size());
        bool nondecreasing = true;
        for (std::size_t i = per_index.size() - tail; i + 1 < per_index.size(); ++i) {
            if (per_index[i + 1] < per_index[i]) nondecreasing = false;
        }
        if (nondecreasing) return Trend::IncreasingTail;
    }
    return Trend::AttainedInterior;
}

inline BoundReport sup_report(BoundMethod method, std::vector<double> per_index) {
    BoundReport r;
    r.method = method;
    r.per_index = std::move(per_index);
    r.value = r.per_index.front();
    r.argmax = 1;
    for (std::size_t i = 1; i < r.per_index.size(); ++i) {
        if (r.per_index[i] > r.value) {
            r.value = r.per_index[i];
            r.argmax = i + 1;
        }
    }
    r.trend = classify_trend(r.per_index, r.argmax);
    return r;
}

inline BoundReport condition_report(BoundMethod method, double tested_L,
                                    std::vector<double> margins) {
    BoundReport r;
    r.method = method;
    r.value = tested_L;
    r.per_index = std::move(margins);
    bool ok = true;
    std::size_t worst = 1;
    for (std::size_t i = 0; i < r.per_index.size(); ++i) {
        if (r.per_index[i] < r.per_index[worst - 1]) worst = i + 1;
        if (!(r.per_index[i] >= 0.0)) ok = false;
    }
    r.argmax = worst;
    r.trend = classify_trend(r.per_index, worst);
    r.feasible = ok;
    return r;
}

inline void require_terms(const WeightSequence& w, std::size_t min_terms, const char* who) {
    if (w.size() < min_terms) {
        throw std::invalid_argument(std::string(who) + ": needs at least " +
                                    std::to_string(min_terms) + " weights, got " +
                                    std::to_string(w.size()));
    }
}

inline void require_L_in_range(double L, double p, const char* who) {
    if (!(std::isfinite(L) && L > 0.0 && L < p)) {
        throw std::domain_error(std::string(who) + ": L must lie in (0, p), got L=" +
                                std::to_string(L) + ", p=" + std::to_string(p));
    }
}

/// Smallest feasible parameter of a monotone predicate on (0, p), absolute
/// tolerance kBisectTol. Returns nullopt when even L = p(1 - 1e-12) fails.
/// Monotonicity is re-asserted around the returned threshold: feasible at L*,
/// infeasible at L* - 10*kBisectTol.
template <typename Feasible>
std::optional<double> min_feasible_L(double p, Feasible&& feasible) {
    double lo = kBisectTol;
    double hi = p * (1.0 - 1e-12);
    if (!feasible(hi)) return std::nullopt;
    if (feasible(lo)) return lo;
    for (int it = 0; it < kBisectMaxIter && hi - lo > kBisectTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if (!feasible(hi) || feasible(hi - 10.0 * kBisectTol)) {
        throw std::logic_error("min_feasible_L: feasibility not monotone around L*");
    }
    return hi;
}

}  // namespace detail

/// Cartlidge's constant L = sup_n (R_{n+1} - R_n), reported on the prefix
/// n = 1..N-1. When L < p this certifies ||A||_{p,p} <= p/(p-L).
inline BoundReport cartlidge_L(const WeightSequence& w) {
    detail::require_terms(w, 2, "cartlidge_L");
    std::vector<double> diffs(w.size() - 1);
    for (std::size_t n = 1; n < w.size(); ++n) {
        diffs[n - 1] = w.ratio(n + 1) - w.ratio(n);
    }
    return detail::sup_report(BoundMethod::CartlidgeL, std::move(diffs));
}

/// Margins of the local norm-bound condition
///   R_{n+1} <= R_n (1 - L λ_n/(p Λ_n))^{1-p} + L/p,   n = 1..N-1.
/// per_index[n-1] = RHS(n) - LHS(n); feasible iff all margins >= 0.
inline BoundReport check_local_condition(const WeightSequence& w, const Exponent& e, double L) {
    detail::require_terms(w, 2, "check_local_condition");
    detail::require_L_in_range(L, e.p(), "check_local_condition");
    const double p = e.p();
    std::vector<double> margins(w.size() - 1);
    for (std::size_t n = 1; n < w.size(); ++n) {
        const double rn = w.ratio(n);
        const double base = 1.0 - L / (p * rn);  // = 1 - L λ_n/(p Λ_n)
        if (!(base > 0.0)) {
            // unreachable for valid weights (R_n >= 1 and L < p), checked anyway
            throw std::domain_error("check_local_condition: nonpositive base at n=" +
                                    std::to_string(n));
        }
        const double rhs = rn * std::pow(base, 1.0 - p) + L / p;
        margins[n - 1] = rhs - w.ratio(n + 1);
    }
    return detail::condition_report(BoundMethod::LocalCond, L, std::move(margins));
}

/// Smallest L in (0, p) for which check_local_condition is feasible on this
/// prefix; the condition's RHS is increasing in L, so feasibility is monotone.
inline std::optional<double> min_L_local(const WeightSequence& w, const Exponent& e) {
    detail::require_terms(w, 2, "min_L_local");
    return detail::min_feasible_L(e.p(), [&](double L) {
        return *check_local_condition(w, e, L).feasible;
    });
}

/// Bennett's weighted Carleman constant
///   E = sup_n (Λ_{n+1}/λ_{n+1}) ∏_{k<=n} (λ_k/Λ_k)^{λ_k/Λ_n},
/// evaluated on n = 1..N-1 in the log domain with a running inner sum.
inline BoundReport bennett_E(const WeightSequence& w) {
    detail::require_terms(w, 2, "bennett_E");
    std::vector<double> per(w.size() - 1);
    StableSum inner;  // Σ_{k<=n} λ_k log(λ_k/Λ_k)
    for (std::size_t n = 1; n < w.size(); ++n) {
        inner.add(w.lambda(n) * std::log(w.lambda(n) / w.prefix(n)));
        per[n - 1] = std::exp(std::log(w.ratio(n + 1)) + inner.value() / w.prefix(n));
    }
    return detail::sup_report(BoundMethod::BennettE, std::move(per));
}

/// M = sup_n R_n log(R_{n+1}/R_n); E = e^M is then a Carleman constant.
inline BoundReport m_log(const WeightSequence& w) {
    detail::require_terms(w, 2, "m_log");
    std::vector<double> per(w.size() - 1);
    for (std::size_t n = 1; n < w.size(); ++n) {
        // log(R_{n+1}/R_n) via log1p keeps full precision when the ratios are close
        per[n - 1] = w.ratio(n) * std::log1p((w.ratio(n + 1) - w.ratio(n)) / w.ratio(n));
    }
    return detail::sup_report(BoundMethod::MLog, std::move(per));
}

/// M = sup_n (1/Λ_n) Σ_{k<=n} λ_k (R_{k+1} - R_k), running numerator.
inline BoundReport m_sum(const WeightSequence& w) {
    detail::require_terms(w, 2, "m_sum");
    std::vector<double> per(w.size() - 1);
    StableSum num;  // Σ_{k<=n} λ_k (R_{k+1} - R_k)
    for (std::size_t n = 1; n < w.size(); ++n) {
        num.add(w.lambda(n) * (w.ratio(n + 1) - w.ratio(n)));
        per[n - 1] = num.value() / w.prefix(n);
    }
    return detail::sup_report(BoundMethod::MSum, std::move(per));
}

/// Margins of the global condition
///   S_n = Σ_{k<=n} (λ_k/Λ_n) ∏_{i=k}^n ((R_{i+1} - L/p)/R_i)^{1/(p-1)} <= p/(p-L).
///
/// The double sum satisfies W_n = f_n (W_{n-1} + λ_n) with W_n = Λ_n S_n and
/// f_n the n-th product factor, so the whole prefix costs O(N); the
/// recurrence is carried in the log domain since the products can have
/// hundreds of factors. A nonpositive factor base (R_{i+1} <= L/p) is a hard
/// domain error naming the index: the expression is undefined there.
inline BoundReport check_thm31(const WeightSequence& w, const Exponent& e, double L) {
    detail::require_terms(w, 2, "check_thm31");
    detail::require_L_in_range(L, e.p(), "check_thm31");
    const double p = e.p();
    const double bound = p / (p - L);
    std::vector<double> margins(w.size() - 1);
    double log_W = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < w.size(); ++n) {
        const double base = w.ratio(n + 1) - L / p;
        if (!(base > 0.0)) {
            throw std::domain_error("check_thm31: nonpositive factor base at i=" +
                                    std::to_string(n) + " (R_{i+1} <= L/p)");
        }
        const double log_f = (std::log(base) - std::log(w.ratio(n))) / (p - 1.0);
        log_W = log_f + log_add(log_W, std::log(w.lambda(n)));
        const double s_n = std::exp(log_W - std::log(w.prefix(n)));
        margins[n - 1] = bound - s_n;
    }
    return detail::condition_report(BoundMethod::Thm31Cond, L, std::move(margins));
}

/// Smallest L in (0, p) for which check_thm31 is feasible on this prefix.
/// Every product factor is decreasing in L while p/(p-L) increases, so
/// feasibility is monotone; a domain error counts as infeasible at that L.
inline std::optional<double> min_L_thm31(const WeightSequence& w, const Exponent& e) {
    detail::require_terms(w, 2, "min_L_thm31");
    return detail::min_feasible_L(e.p(), [&](double L) {
        try {
            return *check_thm31(w, e, L).feasible;
        } catch (const std::domain_error&) {
            return false;
        }
    });
}

}  // namespace hardy

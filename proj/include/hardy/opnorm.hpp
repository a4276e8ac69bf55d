#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hardy/report.hpp"
#include "hardy/stable_sum.hpp"
#include "hardy/weights.hpp"

namespace hardy {

/// N x N finite section of a weighted mean matrix: a_{n,k} = λ_k/Λ_n for
/// k <= n, 0 above the diagonal. Rows sum to 1; entries are materialized on
/// demand and both the forward map and its transpose are applied matrix-free
/// in O(N) via running/suffix sums.
class FiniteSection {
public:
    FiniteSection(WeightSequence w, std::size_t n) : w_(std::move(w)), n_(n) {
        if (n == 0 || n > w_.size()) {
            throw std::invalid_argument("FiniteSection: size must be in [1, " +
                                        std::to_string(w_.size()) + "], got " + std::to_string(n));
        }
    }

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] const WeightSequence& weights() const { return w_; }

    /// a_{row,col}, 1-based.
    [[nodiscard]] double entry(std::size_t row, std::size_t col) const {
        if (col > row) return 0.0;
        return w_.lambda(col) / w_.prefix(row);
    }

    [[nodiscard]] std::vector<double> row(std::size_t r) const {
        std::vector<double> out(n_, 0.0);
        for (std::size_t k = 1; k <= r; ++k) out[k - 1] = entry(r, k);
        return out;
    }

    /// y_n = (Σ_{k<=n} λ_k x_k)/Λ_n, the running weighted averages.
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const {
        if (x.size() != n_) {
            throw std::invalid_argument("FiniteSection::apply: length mismatch");
        }
        std::vector<double> y(n_);
        StableSum num;
        for (std::size_t n = 1; n <= n_; ++n) {
            num.add(w_.lambda(n) * x[n - 1]);
            y[n - 1] = num.value() / w_.prefix(n);
        }
        return y;
    }

    /// z_k = λ_k Σ_{n>=k} y_n/Λ_n, by one suffix sweep.
    [[nodiscard]] std::vector<double> apply_transpose(std::span<const double> y) const {
        if (y.size() != n_) {
            throw std::invalid_argument("FiniteSection::apply_transpose: length mismatch");
        }
        std::vector<double> z(n_);
        StableSum tail;
        for (std::size_t k = n_; k >= 1; --k) {
            tail.add(y[k - 1] / w_.prefix(k));
            z[k - 1] = w_.lambda(k) * tail.value();
        }
        return z;
    }

private:
    WeightSequence w_;
    std::size_t n_;
};

inline FiniteSection build_section(const WeightSequence& w, std::size_t n) {
    return FiniteSection(w, n);
}

/// Certified lower bound on ||A||_{p,p}: value = ||A·witness||_p with the
/// witness a nonnegative unit vector, recomputed at return.
struct NormEstimate {
    double value = 0.0;
    std::size_t iterations = 0;
    double rel_change = 0.0;
    std::vector<double> witness;
    bool converged = false;
};

/// Nonlinear power iteration for the lp -> lp norm of an entrywise
/// nonnegative matrix: x <- normalize((Aᵀ((Ax)^{p-1}))^{1/(p-1)}) from the
/// uniform positive start. The Rayleigh-type ratio ||Ax||_p at unit x is a
/// valid lower bound at every iterate; iteration stops when its relative
/// change drops below tol. Deterministic: no randomness anywhere.
inline NormEstimate norm_estimate(const FiniteSection& a, const Exponent& e, double tol = 1e-10,
                                  std::size_t max_iter = 100000) {
    if (!(tol > 0.0)) throw std::invalid_argument("norm_estimate: tol must be > 0");
    const double p = e.p();
    const std::size_t n = a.size();

    std::vector<double> x(n, 1.0);
    const double unit = std::pow(static_cast<double>(n), -1.0 / p);
    for (double& v : x) v *= unit;

    NormEstimate best;
    best.witness = x;
    double prev_ratio = -1.0;
    double rel = std::numeric_limits<double>::infinity();

    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        std::vector<double> y = a.apply(x);
        const double ratio = lp_norm(y, p);  // x is unit in lp
        if (!std::isfinite(ratio)) {
            throw std::runtime_error("norm_estimate: non-finite iterate");
        }
        if (ratio > best.value) {
            best.value = ratio;
            best.witness = x;
        }
        if (prev_ratio > 0.0) {
            rel = std::abs(ratio - prev_ratio) / ratio;
            if (rel < tol) {
                best.converged = true;
                ++it;
                break;
            }
        }
        prev_ratio = ratio;

        for (double& v : y) v = std::pow(v, p - 1.0);
        std::vector<double> z = a.apply_transpose(y);
        for (double& v : z) v = std::pow(v, 1.0 / (p - 1.0));
        const double norm_z = lp_norm(z, p);
        if (!(norm_z > 0.0) || !std::isfinite(norm_z)) {
            throw std::runtime_error("norm_estimate: degenerate iterate");
        }
        for (double& v : z) v /= norm_z;
        x = std::move(z);
    }

    best.iterations = it;
    best.rel_change = rel;
    // re-normalize the stored witness and recompute the certified ratio at it
    const double wn = lp_norm(best.witness, p);
    for (double& v : best.witness) v /= wn;
    best.value = lp_norm(a.apply(best.witness), p);
    return best;
}

namespace detail {

/// Stick-breaking map from t in [0,1]^{m} to the simplex u (Σu = 1, u >= 0).
inline void stick_breaking(std::span<const double> t, std::span<double> u) {
    double rest = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        u[i] = rest * t[i];
        rest *= (1.0 - t[i]);
    }
    u[t.size()] = rest;
}

}  // namespace detail

/// Exhaustive maximization of ||Ax||_p over the nonnegative part of the lp
/// unit sphere (valid because A is entrywise nonnegative), for N <= 4:
/// dense grid over simplex parameters followed by compass-search refinement.
/// Independent of norm_estimate; used as its oracle.
inline double brute_force_norm(const FiniteSection& a, const Exponent& e) {
    const std::size_t n = a.size();
    if (n > 4) throw std::invalid_argument("brute_force_norm: N must be <= 4");
    const double p = e.p();
    if (n == 1) return a.entry(1, 1);

    const std::size_t m = n - 1;  // free parameters
    // grid resolutions: >= 1e5 points for N=2, 301^2 for N=3, 61^3 for N=4
    const std::size_t steps = (n == 2) ? 100000 : (n == 3) ? 300 : 60;

    std::vector<double> t(m, 0.0), u(n), x(n);
    const auto value_at = [&](std::span<const double> params) {
        detail::stick_breaking(params, u);
        for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(u[i], 1.0 / p);
        return lp_norm(a.apply(x), p);
    };

    std::vector<double> best_t(m, 0.0);
    double best = -1.0;
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
        for (std::size_t i = 0; i < m; ++i) {
            t[i] = static_cast<double>(idx[i]) / static_cast<double>(steps);
        }
        const double v = value_at(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
        std::size_t d = 0;
        while (d < m && ++idx[d] > steps) {
            idx[d] = 0;
            ++d;
        }
        if (d == m) break;
    }

    // compass search around the best grid point, halving the step
    double h = 1.0 / static_cast<double>(steps);
    t = best_t;
    while (h > 1e-12) {
        bool moved = false;
        for (std::size_t i = 0; i < m; ++i) {
            for (double dir : {+1.0, -1.0}) {
                std::vector<double> cand = t;
                cand[i] = std::clamp(cand[i] + dir * h, 0.0, 1.0);
                const double v = value_at(cand);
                if (v > best) {
                    best = v;
                    t = std::move(cand);
                    moved = true;
                }
            }
        }
        if (!moved) h *= 0.5;
    }
    return best;
}

/// Weighted lp Hardy inequality, finite form:
///   Σ_n A_n^p <= (p/(p-L))^p Σ_n a_n^p,  A_n the running weighted averages.
/// Valid whenever L satisfies Cartlidge's condition; reported as data.
inline VerificationResult verify_weighted_hardy(const WeightSequence& w, const Exponent& e,
                                                std::span<const double> a, double L,
                                                double tol = kVerifyTol) {
    const double p = e.p();
    if (!(L > 0.0 && L < p)) {
        throw std::domain_error("verify_weighted_hardy: L must lie in (0, p)");
    }
    if (a.size() > w.size()) {
        throw std::invalid_argument("verify_weighted_hardy: more terms than weights");
    }
    StableSum lhs, rhs;
    StableSum num;
    for (std::size_t n = 1; n <= a.size(); ++n) {
        num.add(w.lambda(n) * a[n - 1]);
        lhs.add(std::pow(std::abs(num.value()) / w.prefix(n), p));
        rhs.add(std::pow(std::abs(a[n - 1]), p));
    }
    return make_verification(lhs.value(), std::pow(p / (p - L), p) * rhs.value(), tol);
}

/// The lp master inequality with free positive parameters w_1..w_{N+1}:
///   Σ_n (Σ_{k<=n} aux_k)^{-(p-1)} (aux_n^{p-1}/λ_n^p - aux_{n+1}^{p-1}/λ_{n+1}^p) Λ_n^p A_n^p
///     <= Σ_n a_n^p.
/// Individual coefficients may be negative (telescoping); the inequality is
/// on the totals.
inline VerificationResult verify_53(const WeightSequence& w, const Exponent& e,
                                    std::span<const double> a, std::span<const double> aux,
                                    double tol = kVerifyTol) {
    const std::size_t n_terms = a.size();
    if (aux.size() != n_terms + 1) {
        throw std::invalid_argument("verify_53: aux must have N+1 entries");
    }
    if (w.size() < n_terms + 1) {
        throw std::invalid_argument("verify_53: needs N+1 weights");
    }
    for (double v : aux) {
        if (!(v > 0.0)) throw std::invalid_argument("verify_53: aux entries must be > 0");
    }
    for (double v : a) {
        if (!(v >= 0.0)) throw std::invalid_argument("verify_53: a entries must be >= 0");
    }
    const double p = e.p();
    StableSum lhs, rhs, aux_prefix, num;
    for (std::size_t n = 1; n <= n_terms; ++n) {
        aux_prefix.add(aux[n - 1]);
        num.add(w.lambda(n) * a[n - 1]);
        const double mean = num.value() / w.prefix(n);
        const double coeff =
            std::pow(aux_prefix.value(), -(p - 1.0)) *
            (std::pow(aux[n - 1], p - 1.0) / std::pow(w.lambda(n), p) -
             std::pow(aux[n], p - 1.0) / std::pow(w.lambda(n + 1), p)) *
            std::pow(w.prefix(n), p);
        lhs.add(coeff * std::pow(mean, p));
        rhs.add(std::pow(a[n - 1], p));
    }
    return make_verification(lhs.value(), rhs.value(), tol);
}

/// Running inner averages (Σ_{k<=n} λ_k ∏_{i=k}^n b_i^{1/(p-1)})/Λ_n for
/// n = 1..len(b), by the suffix-product recurrence Q_n = g_n (Q_{n-1} + λ_n)
/// carried in the log domain. With the local-condition b-strategy these all
/// equal p/(p-L).
inline std::vector<double> inner_mean_sequence(const WeightSequence& w, const Exponent& e,
                                               std::span<const double> b) {
    if (b.size() > w.size()) {
        throw std::invalid_argument("inner_mean_sequence: more b entries than weights");
    }
    const double p = e.p();
    std::vector<double> out(b.size());
    double log_q = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= b.size(); ++n) {
        if (!(b[n - 1] > 0.0)) {
            throw std::invalid_argument("inner_mean_sequence: b entries must be > 0");
        }
        const double log_g = std::log(b[n - 1]) / (p - 1.0);
        log_q = log_g + log_add(log_q, std::log(w.lambda(n)));
        out[n - 1] = std::exp(log_q - std::log(w.prefix(n)));
    }
    return out;
}

/// The recast master inequality with free positive b_1..b_N:
///   Σ_n ((Σ_{k<=n} λ_k ∏_{i=k}^n b_i^{1/(p-1)})/Λ_n)^{-(p-1)} (b_n/λ_n - 1/λ_{n+1}) Λ_n A_n^p
///     <= Σ_n a_n^p.
inline VerificationResult verify_54(const WeightSequence& w, const Exponent& e,
                                    std::span<const double> a, std::span<const double> b,
                                    double tol = kVerifyTol) {
    const std::size_t n_terms = a.size();
    if (b.size() != n_terms) {
        throw std::invalid_argument("verify_54: a and b must have equal length");
    }
    if (w.size() < n_terms + 1) {
        throw std::invalid_argument("verify_54: needs N+1 weights");
    }
    for (double v : a) {
        if (!(v >= 0.0)) throw std::invalid_argument("verify_54: a entries must be >= 0");
    }
    const double p = e.p();
    const std::vector<double> means = inner_mean_sequence(w, e, b);
    StableSum lhs, rhs, num;
    for (std::size_t n = 1; n <= n_terms; ++n) {
        num.add(w.lambda(n) * a[n - 1]);
        const double a_mean = num.value() / w.prefix(n);
        const double coeff = std::pow(means[n - 1], -(p - 1.0)) *
                             (b[n - 1] / w.lambda(n) - 1.0 / w.lambda(n + 1)) * w.prefix(n);
        lhs.add(coeff * std::pow(a_mean, p));
        rhs.add(std::pow(a[n - 1], p));
    }
    return make_verification(lhs.value(), rhs.value(), tol);
}

/// Coefficients c_n of the improved Hardy inequality (λ_n = 1, L = 1):
///   c_n = ((1/n) Σ_{k<=n} ∏_{i=k}^n (1 + (1-1/p)/i)^{1/(p-1)})^{-(p-1)}.
/// Each c_n exceeds (p/(p-1))^{1-p}, which is what makes the left side
/// strictly larger than the classically scaled Hardy form.
inline std::vector<double> hardy_improvement_coefficients(const Exponent& e, std::size_t n_terms) {
    if (n_terms == 0) {
        throw std::invalid_argument("hardy_improvement_coefficients: n_terms must be >= 1");
    }
    const double p = e.p();
    std::vector<double> c(n_terms);
    double log_q = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= n_terms; ++n) {
        const double log_g = std::log1p((1.0 - 1.0 / p) / static_cast<double>(n)) / (p - 1.0);
        log_q = log_g + log_add(log_q, 0.0);  // Q_n = g_n (Q_{n-1} + 1)
        c[n - 1] = std::exp(-(p - 1.0) * (log_q - std::log(static_cast<double>(n))));
    }
    return c;
}

struct HardyImprovement {
    VerificationResult check;
    /// (p/(p-1))^p Σ a_n^p - lhs: slack of the same left side against the
    /// classical Hardy right side, for comparison.
    double classical_slack = 0.0;
};

/// Improved Hardy inequality: Σ_n c_n (mean of a_1..a_n)^p <= (p/(p-1)) Σ a_n^p.
inline HardyImprovement verify_hardy_improvement(const Exponent& e, std::span<const double> a,
                                                 double tol = kVerifyTol) {
    const double p = e.p();
    for (double v : a) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument("verify_hardy_improvement: a entries must be >= 0");
        }
    }
    const std::vector<double> c = hardy_improvement_coefficients(e, std::max<std::size_t>(a.size(), 1));
    StableSum lhs, rhs, num;
    for (std::size_t n = 1; n <= a.size(); ++n) {
        num.add(a[n - 1]);
        lhs.add(c[n - 1] * std::pow(num.value() / static_cast<double>(n), p));
        rhs.add(std::pow(a[n - 1], p));
    }
    HardyImprovement out;
    out.check = make_verification(lhs.value(), (p / (p - 1.0)) * rhs.value(), tol);
    out.classical_slack = std::pow(p / (p - 1.0), p) * rhs.value() - lhs.value();
    return out;
}

}  // namespace hardy

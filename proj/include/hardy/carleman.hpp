#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hardy/report.hpp"
#include "hardy/stable_sum.hpp"
#include "hardy/weights.hpp"

namespace hardy {

/// Weighted geometric means G_n = ∏_{k<=n} a_k^{λ_k/Λ_n}, computed in the
/// log domain with one running sum (O(N) total). A zero entry collapses
/// every later G_n to 0 (log -inf convention); negative entries are errors.
inline std::vector<double> geo_means(const WeightSequence& w, std::span<const double> a) {
    if (a.size() > w.size()) throw std::invalid_argument("geo_means: more terms than weights");
    std::vector<double> g(a.size());
    StableSum logsum;  // Σ λ_k log a_k
    bool hit_zero = false;
    for (std::size_t n = 1; n <= a.size(); ++n) {
        const double an = a[n - 1];
        if (an < 0.0 || std::isnan(an)) {
            throw std::invalid_argument("geo_means: negative entry at n=" + std::to_string(n));
        }
        if (an == 0.0) hit_zero = true;
        if (!hit_zero) logsum.add(w.lambda(n) * std::log(an));
        g[n - 1] = hit_zero ? 0.0 : std::exp(logsum.value() / w.prefix(n));
    }
    return g;
}

// --- b-strategies -----------------------------------------------------------
//
// Each named rule assigns the free positive sequence b_n of the master
// inequalities; b_n is produced for n = 1..N-1 since every rule references
// λ_{n+1} or Λ_{n+1}.

struct BennettB {};                       // b_n = R_{n+1}/R_n
struct ExpMB { double m; };               // b_n = e^{M λ_n/Λ_n}
struct ThirdChoiceB {};                   // b_n = e^{(R_{n+1}-R_n)/R_n}
struct ThmOneOneB { double L, p; };       // b_n = (1 - L λ_n/(p Λ_n))^{-(p-1)}
struct ThmThreeOneB { double L, p; };     // solves Λ_n(b_n/λ_n - 1/λ_{n+1}) = 1 - L/p
struct ExplicitB { std::vector<double> values; };

using BStrategy = std::variant<BennettB, ExpMB, ThirdChoiceB, ThmOneOneB, ThmThreeOneB, ExplicitB>;

inline std::vector<double> make_b(const BStrategy& s, const WeightSequence& w) {
    if (w.size() < 2) throw std::invalid_argument("make_b: needs at least 2 weights");
    const std::size_t n_out = w.size() - 1;
    std::vector<double> b(n_out);

    struct Visitor {
        const WeightSequence& w;
        std::vector<double>& b;
        std::size_t n_out;

        void operator()(const BennettB&) const {
            for (std::size_t n = 1; n <= n_out; ++n) b[n - 1] = w.ratio(n + 1) / w.ratio(n);
        }
        void operator()(const ExpMB& s) const {
            if (!std::isfinite(s.m)) throw std::invalid_argument("make_b: ExpM needs finite M");
            for (std::size_t n = 1; n <= n_out; ++n) {
                b[n - 1] = std::exp(s.m * w.lambda(n) / w.prefix(n));
            }
        }
        void operator()(const ThirdChoiceB&) const {
            for (std::size_t n = 1; n <= n_out; ++n) {
                b[n - 1] = std::exp((w.ratio(n + 1) - w.ratio(n)) / w.ratio(n));
            }
        }
        void operator()(const ThmOneOneB& s) const {
            check_Lp(s.L, s.p);
            for (std::size_t n = 1; n <= n_out; ++n) {
                b[n - 1] = std::pow(1.0 - s.L * w.lambda(n) / (s.p * w.prefix(n)), -(s.p - 1.0));
            }
        }
        void operator()(const ThmThreeOneB& s) const {
            check_Lp(s.L, s.p);
            for (std::size_t n = 1; n <= n_out; ++n) {
                b[n - 1] = w.lambda(n) * (1.0 / w.lambda(n + 1) + (1.0 - s.L / s.p) / w.prefix(n));
            }
        }
        void operator()(const ExplicitB& s) const {
            if (s.values.size() != n_out) {
                throw std::invalid_argument("make_b: explicit list must have N-1 entries");
            }
            b = s.values;
        }

        static void check_Lp(double L, double p) {
            if (!(p > 1.0) || !(L > 0.0 && L < p)) {
                throw std::invalid_argument("make_b: requires 1 < p and 0 < L < p");
            }
        }
    };
    std::visit(Visitor{w, b, n_out}, s);

    for (std::size_t i = 0; i < b.size(); ++i) {
        if (!(b[i] > 0.0) || !std::isfinite(b[i])) {
            throw std::invalid_argument("make_b: produced nonpositive b at n=" + std::to_string(i + 1));
        }
    }
    return b;
}

/// Master inequality of Pečarić and Stolarsky:
///   Σ_n Λ_n (b_n - 1) G_n + Λ_N G_N <= Σ_n λ_n a_n b_n^{Λ_n/λ_n}.
inline VerificationResult verify_ps(const WeightSequence& w, std::span<const double> a,
                                    std::span<const double> b, double tol = kVerifyTol) {
    if (a.size() != b.size()) throw std::invalid_argument("verify_ps: a and b length mismatch");
    if (a.size() > w.size()) throw std::invalid_argument("verify_ps: more terms than weights");
    if (a.empty()) throw std::invalid_argument("verify_ps: empty input");
    for (double v : b) {
        if (!(v > 0.0)) throw std::invalid_argument("verify_ps: b entries must be > 0");
    }
    const std::vector<double> g = geo_means(w, a);
    StableSum lhs, rhs;
    for (std::size_t n = 1; n <= a.size(); ++n) {
        lhs.add(w.prefix(n) * (b[n - 1] - 1.0) * g[n - 1]);
        // b_n^{Λ_n/λ_n} = exp(R_n log b_n)
        rhs.add(w.lambda(n) * a[n - 1] * std::exp(w.ratio(n) * std::log(b[n - 1])));
    }
    lhs.add(w.prefix(a.size()) * g[a.size() - 1]);
    return make_verification(lhs.value(), rhs.value(), tol);
}

/// Per-term coefficient of G_n in the recast master inequality, split into
/// the linear factor Λ_n(b_n/λ_n - 1/λ_{n+1}) (sign carrier) and the
/// positive damping factor ∏_{k<=n} b_k^{-Λ_k/Λ_n}.
struct Coefficient52 {
    double linear = 0.0;
    double damping = 0.0;
};

inline std::vector<Coefficient52> coefficients_52(const WeightSequence& w,
                                                  std::span<const double> b) {
    if (b.size() + 1 > w.size()) {
        throw std::invalid_argument("coefficients_52: needs N+1 weights for N b entries");
    }
    std::vector<Coefficient52> out(b.size());
    StableSum logprod;  // Σ Λ_k log b_k
    for (std::size_t n = 1; n <= b.size(); ++n) {
        if (!(b[n - 1] > 0.0)) {
            throw std::invalid_argument("coefficients_52: b entries must be > 0");
        }
        logprod.add(w.prefix(n) * std::log(b[n - 1]));
        out[n - 1].linear = w.prefix(n) * (b[n - 1] / w.lambda(n) - 1.0 / w.lambda(n + 1));
        out[n - 1].damping = std::exp(-logprod.value() / w.prefix(n));
    }
    return out;
}

/// Recast master inequality with the free positive sequence b:
///   Σ_n Λ_n (b_n/λ_n - 1/λ_{n+1}) ∏_{k<=n} b_k^{-Λ_k/Λ_n} G_n <= Σ_n a_n.
/// Requires N+1 weights since λ_{N+1} appears in the last coefficient.
inline VerificationResult verify_52(const WeightSequence& w, std::span<const double> a,
                                    std::span<const double> b, double tol = kVerifyTol) {
    if (a.size() != b.size()) throw std::invalid_argument("verify_52: a and b length mismatch");
    if (a.empty()) throw std::invalid_argument("verify_52: empty input");
    const std::vector<Coefficient52> coeff = coefficients_52(w, b);
    const std::vector<double> g = geo_means(w, a);
    StableSum lhs, rhs;
    for (std::size_t n = 0; n < a.size(); ++n) {
        lhs.add(coeff[n].linear * coeff[n].damping * g[n]);
        rhs.add(a[n]);
    }
    return make_verification(lhs.value(), rhs.value(), tol);
}

/// (Σ_n G_n)/(Σ_n a_n); compare against candidate Carleman constants E.
inline double carleman_ratio(const WeightSequence& w, std::span<const double> a) {
    if (a.empty()) throw std::invalid_argument("carleman_ratio: empty input");
    const std::vector<double> g = geo_means(w, a);
    StableSum num, den;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num.add(g[i]);
        den.add(a[i]);
    }
    if (!(den.value() > 0.0)) throw std::invalid_argument("carleman_ratio: Σ a_n must be > 0");
    return num.value() / den.value();
}

struct ImprovedBennett {
    VerificationResult check;
    /// λ_2/Λ_2 > e^{-L}: when true the first-term constant e^{-L} beats the
    /// plain Bennett coefficient, so this display is a strict improvement.
    bool improvement_predicate = false;
};

/// The b_1-solved variant of the Bennett-style display:
///   e^{-L} G_1 + Σ_{n=2}^N (Λ_2(e^L-1)/(λ_1 e^L))^{λ_1/Λ_N}
///                (λ_{n+1}/Λ_{n+1}) ∏_{k<=n}(Λ_k/λ_k)^{λ_k/Λ_n} G_n <= Σ_n a_n.
inline ImprovedBennett verify_improved_bennett(const WeightSequence& w, std::span<const double> a,
                                               double L, double tol = kVerifyTol) {
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw std::domain_error("verify_improved_bennett: L must be > 0");
    }
    if (a.empty()) throw std::invalid_argument("verify_improved_bennett: empty input");
    if (w.size() < a.size() + 1) {
        throw std::invalid_argument("verify_improved_bennett: needs N+1 weights");
    }
    const std::size_t n_terms = a.size();
    const std::vector<double> g = geo_means(w, a);
    const double expL = std::exp(L);

    StableSum lhs, rhs;
    lhs.add(std::exp(-L) * g[0]);
    rhs.add(a[0]);
    if (n_terms >= 2) {
        const double b1_factor = std::pow(w.prefix(2) * (expL - 1.0) / (w.lambda(1) * expL),
                                          w.lambda(1) / w.prefix(n_terms));
        StableSum logratios;  // Σ λ_k log(Λ_k/λ_k)
        logratios.add(w.lambda(1) * std::log(w.ratio(1)));
        for (std::size_t n = 2; n <= n_terms; ++n) {
            logratios.add(w.lambda(n) * std::log(w.ratio(n)));
            const double prod = std::exp(logratios.value() / w.prefix(n));
            lhs.add(b1_factor * prod / w.ratio(n + 1) * g[n - 1]);
            rhs.add(a[n - 1]);
        }
    }
    ImprovedBennett out;
    out.check = make_verification(lhs.value(), rhs.value(), tol);
    out.improvement_predicate = w.lambda(2) / w.prefix(2) > std::exp(-L);
    return out;
}

/// The b_1-solved variant of the exponential-mean display:
///   G_1 + Σ_{n=2}^N (λ_2(e^L-1)/λ_1)^{λ_1/Λ_N}
///         Λ_n (e^{M λ_n/Λ_n}/λ_n - 1/λ_{n+1}) G_n <= e^M Σ_n a_n.
///
/// L and M are independent parameters here; a mathematically valid instance
/// needs M at least the prefix m_log value, which is not enforced — the
/// result is reported as data.
inline VerificationResult verify_improved_expm(const WeightSequence& w, std::span<const double> a,
                                               double L, double M, double tol = kVerifyTol) {
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw std::domain_error("verify_improved_expm: L must be > 0");
    }
    if (!std::isfinite(M)) throw std::domain_error("verify_improved_expm: M must be finite");
    if (a.empty()) throw std::invalid_argument("verify_improved_expm: empty input");
    if (w.size() < a.size() + 1) {
        throw std::invalid_argument("verify_improved_expm: needs N+1 weights");
    }
    const std::size_t n_terms = a.size();
    const std::vector<double> g = geo_means(w, a);

    StableSum lhs, rhs;
    lhs.add(g[0]);
    rhs.add(a[0]);
    if (n_terms >= 2) {
        const double b1_factor = std::pow(w.lambda(2) * (std::exp(L) - 1.0) / w.lambda(1),
                                          w.lambda(1) / w.prefix(n_terms));
        for (std::size_t n = 2; n <= n_terms; ++n) {
            const double lin = w.prefix(n) * (std::exp(M * w.lambda(n) / w.prefix(n)) / w.lambda(n) -
                                              1.0 / w.lambda(n + 1));
            lhs.add(b1_factor * lin * g[n - 1]);
            rhs.add(a[n - 1]);
        }
    }
    return make_verification(lhs.value(), std::exp(M) * rhs.value(), tol);
}

}  // namespace hardy

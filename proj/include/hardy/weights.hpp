#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hardy/stable_sum.hpp"

namespace hardy {

/// Hölder exponent pair: p in (1, inf) and its conjugate q = p/(p-1).
class Exponent {
public:
    explicit Exponent(double p) : p_(p) {
        if (!(std::isfinite(p) && p > 1.0)) {
            throw std::invalid_argument("Exponent: p must be finite and > 1, got " +
                                        std::to_string(p));
        }
        q_ = p / (p - 1.0);
    }

    [[nodiscard]] double p() const { return p_; }
    [[nodiscard]] double q() const { return q_; }

private:
    double p_;
    double q_;
};

/// A finite positive weight sequence λ_1..λ_N together with its prefix sums
/// Λ_n = λ_1 + ... + λ_n. Immutable after construction; prefix sums are
/// accumulated with compensated summation.
///
/// Every weight must be strictly positive: all the ratio conditions divide
/// by λ_n, so zero weights are rejected rather than treated as a limit.
class WeightSequence {
public:
    static WeightSequence from_values(std::vector<double> lambdas) {
        return WeightSequence(std::move(lambdas));
    }

    static WeightSequence constant(std::size_t n_terms) {
        return WeightSequence(std::vector<double>(checked(n_terms), 1.0));
    }

    /// λ_n = n^alpha. alpha = 0 reduces to constant weights.
    static WeightSequence power(double alpha, std::size_t n_terms) {
        if (!std::isfinite(alpha)) throw std::invalid_argument("power weights: alpha must be finite");
        std::vector<double> v(checked(n_terms));
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = std::pow(static_cast<double>(i + 1), alpha);
        }
        return WeightSequence(std::move(v));
    }

    /// λ_n = 1/n.
    static WeightSequence harmonic(std::size_t n_terms) {
        std::vector<double> v(checked(n_terms));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
        return WeightSequence(std::move(v));
    }

    /// One strictly positive decimal per line, UTF-8, no header.
    /// Parse errors report 1-based line numbers.
    static WeightSequence from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("weight file: cannot open '" + path + "'");
        std::vector<double> v;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            // tolerate trailing CR from CRLF files and surrounding blanks
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            const auto e = line.find_last_not_of(" \t\r");
            const std::string tok = line.substr(b, e - b + 1);
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw std::runtime_error("weight file '" + path + "' line " +
                                         std::to_string(lineno) + ": not a number: '" + tok + "'");
            }
            if (used != tok.size()) {
                throw std::runtime_error("weight file '" + path + "' line " +
                                         std::to_string(lineno) + ": trailing garbage: '" + tok + "'");
            }
            if (!(std::isfinite(x) && x > 0.0)) {
                throw std::runtime_error("weight file '" + path + "' line " +
                                         std::to_string(lineno) + ": weight must be finite and > 0");
            }
            v.push_back(x);
        }
        if (v.empty()) {
            throw std::runtime_error("weight file '" + path + "': no weights found");
        }
        return WeightSequence(std::move(v));
    }

    /// CLI weight-spec strings: `const`, `power:alpha=<real>`, `harmonic`,
    /// `file:<path>`. n_terms is ignored for `file:` specs.
    static WeightSequence from_spec(const std::string& spec, std::size_t n_terms) {
        if (spec == "const") return constant(n_terms);
        if (spec == "harmonic") return harmonic(n_terms);
        if (spec.rfind("power:alpha=", 0) == 0) {
            const std::string arg = spec.substr(12);
            std::size_t used = 0;
            double alpha = 0.0;
            try {
                alpha = std::stod(arg, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("weight spec '" + spec + "': bad alpha");
            }
            if (used != arg.size()) throw std::invalid_argument("weight spec '" + spec + "': bad alpha");
            return power(alpha, n_terms);
        }
        if (spec.rfind("file:", 0) == 0) return from_file(spec.substr(5));
        throw std::invalid_argument("weight spec '" + spec +
                                    "': expected const | power:alpha=<real> | harmonic | file:<path>");
    }

    [[nodiscard]] std::size_t size() const { return lambdas_.size(); }

    /// λ_n, 1-based.
    [[nodiscard]] double lambda(std::size_t n) const { return lambdas_[n - 1]; }
    /// Λ_n, 1-based.
    [[nodiscard]] double prefix(std::size_t n) const { return prefix_[n - 1]; }
    /// R_n = Λ_n/λ_n, 1-based. R_1 = 1 and R_n >= 1 always.
    [[nodiscard]] double ratio(std::size_t n) const { return prefix_[n - 1] / lambdas_[n - 1]; }

    [[nodiscard]] std::span<const double> lambdas() const { return lambdas_; }
    [[nodiscard]] std::span<const double> prefixes() const { return prefix_; }

private:
    explicit WeightSequence(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
        if (lambdas_.empty()) throw std::invalid_argument("WeightSequence: empty weights");
        prefix_.resize(lambdas_.size());
        StableSum acc;
        for (std::size_t i = 0; i < lambdas_.size(); ++i) {
            const double l = lambdas_[i];
            if (!std::isfinite(l)) {
                throw std::invalid_argument("WeightSequence: non-finite weight at n=" +
                                            std::to_string(i + 1));
            }
            if (!(l > 0.0)) {
                throw std::invalid_argument("WeightSequence: weight must be > 0 at n=" +
                                            std::to_string(i + 1));
            }
            acc.add(l);
            prefix_[i] = acc.value();
            if (i > 0 && !(prefix_[i] > prefix_[i - 1])) {
                throw std::invalid_argument(
                    "WeightSequence: prefix sums not strictly increasing at n=" +
                    std::to_string(i + 1));
            }
        }
        if (!std::isfinite(prefix_.back())) {
            throw std::invalid_argument("WeightSequence: prefix sum overflow");
        }
    }

    static std::size_t checked(std::size_t n_terms) {
        if (n_terms == 0) throw std::invalid_argument("WeightSequence: n_terms must be >= 1");
        return n_terms;
    }

    std::vector<double> lambdas_;
    std::vector<double> prefix_;
};

/// R_n = Λ_n/λ_n for n = 1..N.
inline std::vector<double> ratios(const WeightSequence& w) {
    std::vector<double> r(w.size());
    for (std::size_t n = 1; n <= w.size(); ++n) r[n - 1] = w.ratio(n);
    return r;
}

}  // namespace hardy

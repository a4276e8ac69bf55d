// hardy-bounds: compute norm-bound constants for weighted mean matrices,
// estimate lp operator norms of finite sections, and verify the inequality
// family on seeded random instances.
//
// Subcommands:
//   bounds  one row per bound constant / condition check
//   norm    power-iteration lower bound, brute force (N <= 4), upper bounds
//   verify  property runs over seeded random instances, per inequality
//   sweep   bound constants and norm lower bounds across an axis (p|alpha|n)
//
// Machine output (csv|json) is byte-deterministic for a fixed (command,
// seed); `table` is human-oriented. Exit status is 0 iff every requested
// check passed.

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hardy/bounds.hpp"
#include "hardy/carleman.hpp"
#include "hardy/opnorm.hpp"
#include "hardy/random.hpp"
#include "hardy/report.hpp"
#include "hardy/weights.hpp"

namespace {

using nlohmann::json;

struct Config {
    std::string weights = "const";
    std::size_t n = 1000;
    std::optional<double> p;
    std::optional<double> L;
    std::optional<double> M;
    std::string ineq = "all";
    std::size_t trials = 1000;
    std::uint64_t seed = 42;
    std::string format = "table";
    double tol = hardy::kVerifyTol;
    std::string out;
    std::string axis;            // sweep only
    std::vector<double> values;  // sweep only
};

// shortest round-trip decimal representation, locale-independent
std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// One output row: ordered key/value pairs, values already JSON-typed.
struct Row {
    std::vector<std::pair<std::string, json>> fields;
    void add(const std::string& key, json value) { fields.emplace_back(key, std::move(value)); }
};

std::string cell_text(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return fmt(v.get<double>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return v.dump();
}

struct Report {
    std::string command;
    json config;
    std::vector<Row> rows;
    bool pass = true;
    double worst_residual = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;

    std::string render(const std::string& format) const {
        if (format == "json") return render_json();
        if (format == "csv") return render_csv();
        return render_table();
    }

    std::string render_json() const {
        json doc;
        doc["command"] = command;
        doc["config"] = config;
        json jrows = json::array();
        for (const Row& r : rows) {
            json obj = json::object();
            for (const auto& [k, v] : r.fields) obj[k] = v;
            jrows.push_back(std::move(obj));
        }
        doc["rows"] = std::move(jrows);
        doc["summary"] = {{"pass", pass},
                          {"worst_residual", std::isfinite(worst_residual)
                                                 ? json(worst_residual)
                                                 : json(fmt(worst_residual))},
                          {"seed", seed}};
        return doc.dump(2) + "\n";
    }

    std::string render_csv() const {
        std::string out;
        if (rows.empty()) return out;
        for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
            if (i) out += ',';
            out += rows[0].fields[i].first;
        }
        out += '\n';
        for (const Row& r : rows) {
            for (std::size_t i = 0; i < r.fields.size(); ++i) {
                if (i) out += ',';
                out += cell_text(r.fields[i].second);
            }
            out += '\n';
        }
        return out;
    }

    std::string render_table() const {
        if (rows.empty()) return "";
        std::vector<std::size_t> widths(rows[0].fields.size(), 0);
        auto measure = [&](std::size_t i, const std::string& s) {
            widths[i] = std::max(widths[i], s.size());
        };
        for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
            measure(i, rows[0].fields[i].first);
        }
        for (const Row& r : rows) {
            for (std::size_t i = 0; i < r.fields.size(); ++i) measure(i, cell_text(r.fields[i].second));
        }
        std::string out;
        auto emit = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                out += cells[i];
                if (i + 1 < cells.size()) out += std::string(widths[i] - cells[i].size() + 2, ' ');
            }
            out += '\n';
        };
        std::vector<std::string> head;
        for (const auto& [k, v] : rows[0].fields) head.push_back(k);
        emit(head);
        for (const Row& r : rows) {
            std::vector<std::string> cells;
            for (const auto& [k, v] : r.fields) cells.push_back(cell_text(v));
            emit(cells);
        }
        out += "summary: " + std::string(pass ? "pass" : "FAIL") +
               "  worst_residual=" + fmt(worst_residual) + "  seed=" + std::to_string(seed) + "\n";
        return out;
    }
};

void write_output(const Report& rep, const Config& cfg) {
    const std::string text = rep.render(cfg.format);
    if (!cfg.out.empty()) {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file '" + cfg.out + "'");
        f << text;
    } else {
        std::cout << text;
    }
}

json base_config(const Config& cfg) {
    json j;
    j["weights"] = cfg.weights;
    j["n"] = cfg.n;
    j["p"] = cfg.p ? json(*cfg.p) : json();
    j["L"] = cfg.L ? json(*cfg.L) : json();
    j["seed"] = cfg.seed;
    j["tol"] = cfg.tol;
    return j;
}

void warn_increasing_tail(const hardy::BoundReport& r) {
    if (r.trend == hardy::Trend::IncreasingTail) {
        std::cerr << "warning: " << hardy::to_string(r.method)
                  << " has an increasing tail on this prefix; the reported value is a lower "
                     "estimate of the supremum\n";
    }
}

// ---------------------------------------------------------------- bounds ---

int cmd_bounds(const Config& cfg) {
    const auto w = hardy::WeightSequence::from_spec(cfg.weights, cfg.n);
    Report rep;
    rep.command = "bounds";
    rep.config = base_config(cfg);
    rep.seed = cfg.seed;

    auto sup_row = [&](const hardy::BoundReport& r, std::optional<double> implied) {
        warn_increasing_tail(r);
        Row row;
        row.add("method", hardy::to_string(r.method));
        row.add("value", r.value);
        row.add("argmax", r.argmax);
        row.add("trend", hardy::to_string(r.trend));
        row.add("feasible", r.feasible ? json(*r.feasible) : json());
        row.add("implied_constant", implied ? json(*implied) : json());
        rep.rows.push_back(std::move(row));
    };

    const auto cart = hardy::cartlidge_L(w);
    std::optional<double> cart_bound;
    if (cfg.p && cart.value > 0 && cart.value < *cfg.p) {
        cart_bound = *cfg.p / (*cfg.p - cart.value);
    }
    sup_row(cart, cart_bound);
    const auto bennett = hardy::bennett_E(w);
    sup_row(bennett, bennett.value);
    const auto mlog = hardy::m_log(w);
    sup_row(mlog, std::exp(mlog.value));
    const auto msum = hardy::m_sum(w);
    sup_row(msum, std::exp(msum.value));

    if (cfg.p) {
        const hardy::Exponent e(*cfg.p);
        auto min_row = [&](const char* name, const std::optional<double>& L) {
            Row row;
            row.add("method", name);
            row.add("value", L ? json(*L) : json());
            row.add("argmax", json());
            row.add("trend", json());
            row.add("feasible", L.has_value());
            row.add("implied_constant", L ? json(*cfg.p / (*cfg.p - *L)) : json());
            rep.rows.push_back(std::move(row));
        };
        min_row("min_L_local", hardy::min_L_local(w, e));
        min_row("min_L_thm31", hardy::min_L_thm31(w, e));

        if (cfg.L) {
            for (auto* check : {&hardy::check_local_condition, &hardy::check_thm31}) {
                const auto r = (*check)(w, e, *cfg.L);
                Row row;
                row.add("method", hardy::to_string(r.method));
                row.add("value", r.value);
                row.add("argmax", r.argmax);
                row.add("trend", json());
                row.add("feasible", *r.feasible);
                row.add("implied_constant",
                        *r.feasible ? json(*cfg.p / (*cfg.p - *cfg.L)) : json());
                rep.rows.push_back(std::move(row));
            }
        }
    }
    write_output(rep, cfg);
    return 0;
}

// ------------------------------------------------------------------ norm ---

int cmd_norm(const Config& cfg) {
    const auto w = hardy::WeightSequence::from_spec(cfg.weights, cfg.n);
    const double p = cfg.p.value_or(2.0);
    const hardy::Exponent e(p);
    const auto section = hardy::build_section(w, w.size());

    Report rep;
    rep.command = "norm";
    rep.config = base_config(cfg);
    rep.config["p"] = p;
    rep.seed = cfg.seed;

    const double est_tol = cfg.tol < 1e-6 ? cfg.tol : 1e-10;
    const auto est = hardy::norm_estimate(section, e, est_tol);
    {
        Row row;
        row.add("quantity", "lower_power_iteration");
        row.add("value", est.value);
        row.add("detail", "iterations=" + std::to_string(est.iterations) +
                              (est.converged ? "" : " not-converged"));
        rep.rows.push_back(std::move(row));
    }
    if (section.size() <= 4) {
        Row row;
        row.add("quantity", "brute_force");
        row.add("value", hardy::brute_force_norm(section, e));
        row.add("detail", "grid+refine");
        rep.rows.push_back(std::move(row));
    }

    double best_upper = std::numeric_limits<double>::infinity();
    auto upper_row = [&](const char* name, std::optional<double> L) {
        Row row;
        row.add("quantity", name);
        if (L) {
            const double bound = p / (p - *L);
            best_upper = std::min(best_upper, bound);
            row.add("value", bound);
            row.add("detail", "L=" + fmt(*L));
        } else {
            row.add("value", json());
            row.add("detail", "no feasible L on this prefix");
        }
        rep.rows.push_back(std::move(row));
    };
    if (w.size() >= 2) {  // condition checks reference R_{n+1}
        const auto cart = hardy::cartlidge_L(w);
        upper_row("upper_cartlidge", (cart.value > 0 && cart.value < p)
                                         ? std::optional<double>(cart.value)
                                         : std::nullopt);
        upper_row("upper_min_L_local", hardy::min_L_local(w, e));
        upper_row("upper_min_L_thm31", hardy::min_L_thm31(w, e));
    }

    rep.worst_residual = best_upper - est.value;
    rep.pass = est.value <= best_upper + 1e-9;
    if (!rep.pass) {
        std::cerr << "error: lower bound " << fmt(est.value) << " exceeds upper bound "
                  << fmt(best_upper) << "\n";
    }
    write_output(rep, cfg);
    return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------- verify ---

struct TrialOutcome {
    bool pass = true;
    double residual = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

// One seeded instance of one inequality. Instances follow the library's
// random recipe: a ~ exp(U(-3,3)), b ~ exp(U(-1,1)), λ ~ exp(U(-2,2)).
TrialOutcome run_trial(const std::string& ineq, const Config& cfg, std::uint64_t trial) {
    TrialOutcome out;
    out.seed = hardy::trial_seed(cfg.seed, trial);
    hardy::SplitMix64 rng(out.seed);
    const std::size_t n = 1 + static_cast<std::size_t>(rng.next() % cfg.n);
    const double p = cfg.p.value_or(2.0);
    const double L = cfg.L.value_or(1.0);
    const double M = cfg.M.value_or(1.0);

    const auto random_w = [&](std::size_t len) {
        return hardy::WeightSequence::from_values(hardy::log_uniform(rng, len, -2.0, 2.0));
    };
    const auto cfg_w = [&](std::size_t len) {
        return hardy::WeightSequence::from_spec(cfg.weights, len);
    };
    const auto nonneg_a = [&](std::size_t len) {
        auto a = hardy::log_uniform(rng, len, -3.0, 3.0);
        if (trial % 10 == 9) a[static_cast<std::size_t>(rng.next() % len)] = 0.0;
        return a;
    };

    hardy::VerificationResult r;
    if (ineq == "ps") {
        const auto w = random_w(n);
        const auto a = hardy::log_uniform(rng, n, -3.0, 3.0);
        const auto b = hardy::log_uniform(rng, n, -1.0, 1.0);
        r = hardy::verify_ps(w, a, b, cfg.tol);
    } else if (ineq == "52") {
        const auto w = random_w(n + 1);
        const auto a = hardy::log_uniform(rng, n, -3.0, 3.0);
        const auto b = hardy::log_uniform(rng, n, -1.0, 1.0);
        r = hardy::verify_52(w, a, b, cfg.tol);
    } else if (ineq == "53") {
        const auto w = random_w(n + 1);
        const auto a = nonneg_a(n);
        const auto aux = hardy::log_uniform(rng, n + 1, -1.0, 1.0);
        r = hardy::verify_53(w, hardy::Exponent(p), a, aux, cfg.tol);
    } else if (ineq == "54") {
        const auto w = random_w(n + 1);
        const auto a = nonneg_a(n);
        const auto b = hardy::log_uniform(rng, n, -1.0, 1.0);
        r = hardy::verify_54(w, hardy::Exponent(p), a, b, cfg.tol);
    } else if (ineq == "weighted-hardy") {
        const auto w = cfg_w(n);
        const auto a = nonneg_a(n);
        r = hardy::verify_weighted_hardy(w, hardy::Exponent(p), a, L, cfg.tol);
    } else if (ineq == "improved-bennett") {
        const auto w = cfg_w(n + 1);
        const auto a = hardy::log_uniform(rng, n, -3.0, 3.0);
        r = hardy::verify_improved_bennett(w, a, L, cfg.tol).check;
    } else if (ineq == "improved-expm") {
        const auto w = cfg_w(n + 1);
        const auto a = hardy::log_uniform(rng, n, -3.0, 3.0);
        r = hardy::verify_improved_expm(w, a, L, M, cfg.tol);
    } else if (ineq == "hardy-improved") {
        const auto a = nonneg_a(n);
        r = hardy::verify_hardy_improvement(hardy::Exponent(p), a, cfg.tol).check;
    } else {
        throw std::invalid_argument("unknown inequality '" + ineq + "'");
    }
    out.pass = r.pass;
    out.residual = r.residual;
    return out;
}

std::size_t thread_cap() {
    if (const char* env = std::getenv("HARDY_BOUNDS_THREADS")) {
        const auto v = std::strtoull(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

int cmd_verify(const Config& cfg) {
    static const std::vector<std::string> kAll{"ps",       "52",
                                              "53",       "54",
                                              "weighted-hardy", "improved-bennett",
                                              "improved-expm",  "hardy-improved"};
    std::vector<std::string> ineqs;
    if (cfg.ineq == "all") {
        ineqs = kAll;
    } else {
        ineqs.push_back(cfg.ineq);
    }
    if (cfg.trials < 1) throw std::invalid_argument("verify: trials must be >= 1");

    Report rep;
    rep.command = "verify";
    rep.config = base_config(cfg);
    rep.config["M"] = cfg.M ? json(*cfg.M) : json();
    rep.config["trials"] = cfg.trials;
    rep.config["ineq"] = cfg.ineq;
    rep.seed = cfg.seed;

    for (const std::string& ineq : ineqs) {
        std::vector<TrialOutcome> results(cfg.trials);
        const std::size_t n_threads = std::min<std::size_t>(thread_cap(), cfg.trials);
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        std::atomic<bool> threw{false};
        std::string error_text;
        std::mutex error_mutex;
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cfg.trials || threw.load()) break;
                    try {
                        results[i] = run_trial(ineq, cfg, i);
                    } catch (const std::exception& ex) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        error_text = ex.what();
                        threw.store(true);
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (threw.load()) throw std::runtime_error("verify " + ineq + ": " + error_text);

        // merge in trial-index order: output independent of thread count
        std::size_t passes = 0;
        double worst = std::numeric_limits<double>::infinity();
        std::uint64_t worst_seed = 0;
        std::size_t worst_trial = 0;
        for (std::size_t i = 0; i < cfg.trials; ++i) {
            passes += results[i].pass ? 1 : 0;
            if (results[i].residual < worst) {
                worst = results[i].residual;
                worst_seed = results[i].seed;
                worst_trial = i;
            }
        }
        Row row;
        row.add("ineq", ineq);
        row.add("trials", cfg.trials);
        row.add("passes", passes);
        row.add("failures", cfg.trials - passes);
        row.add("worst_residual", worst);
        row.add("worst_trial", worst_trial);
        row.add("worst_trial_seed", worst_seed);
        rep.rows.push_back(std::move(row));
        rep.pass = rep.pass && passes == cfg.trials;
        rep.worst_residual = std::min(rep.worst_residual, worst);
    }
    write_output(rep, cfg);
    return rep.pass ? 0 : 1;
}

// ----------------------------------------------------------------- sweep ---

int cmd_sweep(const Config& cfg) {
    if (cfg.axis != "p" && cfg.axis != "alpha" && cfg.axis != "n") {
        throw std::invalid_argument("sweep: --axis must be p, alpha or n");
    }
    if (cfg.values.empty()) {
        throw std::invalid_argument("sweep: --values must list at least one axis value");
    }
    Report rep;
    rep.command = "sweep";
    rep.config = base_config(cfg);
    rep.config["axis"] = cfg.axis;
    rep.config["values"] = cfg.values;
    rep.seed = cfg.seed;

    for (const double v : cfg.values) {
        double p = cfg.p.value_or(2.0);
        std::size_t n = cfg.n;
        std::string wspec = cfg.weights;
        if (cfg.axis == "p") {
            p = v;
        } else if (cfg.axis == "alpha") {
            wspec = "power:alpha=" + fmt(v);
        } else {
            if (!(v >= 1 && v == std::floor(v))) {
                throw std::invalid_argument("sweep: n values must be positive integers");
            }
            n = static_cast<std::size_t>(v);
        }
        const hardy::Exponent e(p);
        const auto w = hardy::WeightSequence::from_spec(wspec, n);
        const auto cart = hardy::cartlidge_L(w);
        const auto est = hardy::norm_estimate(hardy::build_section(w, w.size()), e);
        const auto l_local = hardy::min_L_local(w, e);
        const auto l_thm31 = hardy::min_L_thm31(w, e);

        Row row;
        row.add(cfg.axis, v);
        row.add("cartlidge_L", cart.value);
        row.add("trend", hardy::to_string(cart.trend));
        row.add("bennett_E", hardy::bennett_E(w).value);
        row.add("m_log", hardy::m_log(w).value);
        row.add("m_sum", hardy::m_sum(w).value);
        row.add("min_L_local", l_local ? json(*l_local) : json());
        row.add("min_L_thm31", l_thm31 ? json(*l_thm31) : json());
        row.add("implied_bound", (cart.value > 0 && cart.value < p)
                                     ? json(p / (p - cart.value))
                                     : json());
        row.add("norm_lower", est.value);
        rep.rows.push_back(std::move(row));
    }
    write_output(rep, cfg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"norm bounds and inequality verification for weighted mean matrices"};
    app.require_subcommand(1);

    Config cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--weights", cfg.weights,
                        "const | power:alpha=<real> | harmonic | file:<path>");
        sub->add_option("--p", cfg.p, "exponent p > 1");
        sub->add_option("--L", cfg.L, "norm-bound parameter L in (0, p)");
        sub->add_option("--M", cfg.M, "exponential-mean parameter M");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--format", cfg.format, "csv | json | table")
            ->check(CLI::IsMember({"csv", "json", "table"}));
        sub->add_option("--tol", cfg.tol, "verifier tolerance");
        sub->add_option("--out", cfg.out, "write output to file instead of stdout");
    };

    auto* bounds = app.add_subcommand("bounds", "bound constants and feasibility conditions");
    cfg.n = 1000;
    bounds->add_option("--n", cfg.n, "number of weight terms");
    add_common(bounds);

    auto* norm = app.add_subcommand("norm", "lp operator norm of the finite section");
    norm->add_option("--n", cfg.n, "section size");
    add_common(norm);

    auto* verify = app.add_subcommand("verify", "property runs over random instances");
    verify->add_option("--n", cfg.n, "max instance length");
    verify->add_option("--ineq", cfg.ineq,
                       "ps | 52 | 53 | 54 | weighted-hardy | improved-bennett | improved-expm | "
                       "hardy-improved | all");
    verify->add_option("--trials", cfg.trials, "number of random instances");
    add_common(verify);

    auto* sweep = app.add_subcommand("sweep", "bound constants across an axis");
    sweep->add_option("--n", cfg.n, "number of weight terms (fixed axes)");
    sweep->add_option("--axis", cfg.axis, "p | alpha | n");
    sweep->add_option("--values", cfg.values, "comma-separated axis values")->delimiter(',');
    add_common(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (bounds->parsed()) return cmd_bounds(cfg);
        if (norm->parsed()) {
            if (!norm->count("--n")) cfg.n = 100;
            return cmd_norm(cfg);
        }
        if (verify->parsed()) {
            if (!verify->count("--n")) cfg.n = 50;
            return cmd_verify(cfg);
        }
        if (sweep->parsed()) return cmd_sweep(cfg);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpq/analysis.hpp"
#include "lpq/closedform.hpp"
#include "lpq/io.hpp"
#include "lpq/offset.hpp"
#include "lpq/oracle.hpp"
#include "lpq/recovery.hpp"
#include "lpq/simulator.hpp"

// Subcommand bodies of the `lpq` tool. Each takes a fully resolved RunConfig
// and returns the process exit code, so tests can drive them directly.
namespace lpq::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kNoCandidate = 3,
    kVerificationFailed = 4,
};

enum class Format { Csv, Json };

inline Format parse_format(std::string_view s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw Error(ErrorCode::InvalidArgument, "unknown format '" + std::string(s) + "' (expected csv or json)");
}

inline std::string_view to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

struct RunConfig {
    label_t n = 16;
    label_t m = 3;
    label_t p = 4;
    label_t s = 1;
    bool strict = true;
    Algorithm algorithm = Algorithm::Amplified;
    std::uint64_t seed = 1;
    std::string out;  ///< file path (directory for sweep); empty means stdout
    Format format = Format::Csv;
    SearchMethod method = SearchMethod::Decreasing;
    std::int64_t runs = 1000;
    std::optional<std::int64_t> q_max;
    std::optional<std::int64_t> iterations_override;
    std::optional<label_t> y;
    bool verify = false;
    std::optional<std::int64_t> period;  ///< putative P for find-offset; defaults to p
    double counter_confidence = 2.0 / 3.0;
    int log2_min = 8;
    int log2_max = 14;

    [[nodiscard]] OracleSpec spec() const { return build_oracle(n, m, p, s, strict); }
};

/// Applies the keys of a JSON manifest on top of `cfg`. Keys mirror the flag
/// names with dashes replaced by underscores.
inline void apply_json(RunConfig &cfg, const nlohmann::json &j) {
    auto get = [&](const char *key, auto &dst) {
        if (j.contains(key)) dst = j.at(key).get<std::remove_reference_t<decltype(dst)>>();
    };
    auto get_opt = [&](const char *key, auto &dst) {
        if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<typename std::remove_reference_t<decltype(dst)>::value_type>();
    };
    get("n", cfg.n);
    get("m", cfg.m);
    get("p", cfg.p);
    get("s", cfg.s);
    get("strict", cfg.strict);
    get("seed", cfg.seed);
    get("out", cfg.out);
    get("runs", cfg.runs);
    get("verify", cfg.verify);
    get("counter_confidence", cfg.counter_confidence);
    get("log2_min", cfg.log2_min);
    get("log2_max", cfg.log2_max);
    get_opt("q_max", cfg.q_max);
    get_opt("iterations_override", cfg.iterations_override);
    get_opt("y", cfg.y);
    get_opt("period", cfg.period);
    if (j.contains("alg")) cfg.algorithm = parse_algorithm(j.at("alg").get<std::string>());
    if (j.contains("format")) cfg.format = parse_format(j.at("format").get<std::string>());
    if (j.contains("method")) {
        const auto m = j.at("method").get<std::string>();
        if (m == "counting") cfg.method = SearchMethod::Counting;
        else if (m == "decreasing") cfg.method = SearchMethod::Decreasing;
        else throw Error(ErrorCode::InvalidArgument, "unknown method '" + m + "'");
    }
}

namespace detail {

/// Sends a command's output to cfg.out, or to `fallback` when unset.
class Output {
  public:
    Output(const std::string &path, std::ostream &fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw Error(ErrorCode::InvalidArgument, "cannot open output file '" + path + "'");
            os_ = &file_;
        }
    }
    std::ostream &stream() { return *os_; }

  private:
    std::ofstream file_;
    std::ostream *os_;
};

}  // namespace detail

/// Closed-form and simulated Pr(y) side by side, with the largest absolute
/// deviation between them.
inline int cmd_spectrum(const RunConfig &cfg, std::ostream &out) {
    const OracleSpec spec = cfg.spec();
    const auto closed = closed_form_table(cfg.algorithm, spec, cfg.iterations_override);
    const auto simulated = simulated_table(cfg.algorithm, spec, cfg.iterations_override);
    double max_dev = 0.0;
    for (label_t y = 0; y < spec.n; ++y) max_dev = std::max(max_dev, std::abs(closed.pr(y) - simulated.pr(y)));

    detail::Output sink(cfg.out, out);
    auto &os = sink.stream();
    if (cfg.format == Format::Csv) {
        os << "# schema=" << io::kSchemaVersion << "\n";
        os << "# algorithm=" << lpq::to_string(cfg.algorithm) << " spec=" << io::spec_to_json(spec)
           << " max_abs_deviation=" << io::format_double(max_dev) << "\n";
        os << "y,case,pr_closed_form,pr_simulated,abs_deviation\n";
        for (label_t y = 0; y < spec.n; ++y) {
            os << y << ',' << lpq::to_string(closed.entries[static_cast<std::size_t>(y)].spectrum_case) << ','
               << io::format_double(closed.pr(y)) << ',' << io::format_double(simulated.pr(y)) << ','
               << io::format_double(std::abs(closed.pr(y) - simulated.pr(y))) << '\n';
        }
    } else {
        io::JsonWriter w(os);
        w.begin_object().field("schema", io::kSchemaVersion).field("algorithm", lpq::to_string(cfg.algorithm));
        w.key("spec");
        io::write_spec(w, spec);
        w.field("max_abs_deviation", max_dev);
        w.key("rows").begin_array();
        for (label_t y = 0; y < spec.n; ++y) {
            w.begin_object()
                .field("y", y)
                .field("case", lpq::to_string(closed.entries[static_cast<std::size_t>(y)].spectrum_case))
                .field("pr_closed_form", closed.pr(y))
                .field("pr_simulated", simulated.pr(y))
                .field("abs_deviation", std::abs(closed.pr(y) - simulated.pr(y)))
                .end_object();
        }
        w.end_array().end_object();
        os << '\n';
    }
    return kOk;
}

/// Per-y PrRatio against both baselines, the ratio bounds and their gaps, and
/// the success-set probability ratios with pass/fail verdicts.
inline int cmd_compare(const RunConfig &cfg, std::ostream &out) {
    const OracleSpec spec = cfg.spec();
    const auto amp = closed_form_table(Algorithm::Amplified, spec, cfg.iterations_override);
    const auto qft = closed_form_table(Algorithm::Qft, spec);
    const auto qhs = closed_form_table(Algorithm::Qhs, spec);
    const auto bq = pr_ratio_bounds(spec, Baseline::Qft);
    const auto bh = pr_ratio_bounds(spec, Baseline::Qhs);

    bool all_pass = true;
    struct Row {
        label_t y;
        SpectrumCase c;
        double ra, rq, rh;
        std::optional<double> ratio_q, ratio_h;
        bool pass_q, pass_h;
    };
    std::vector<Row> rows;
    for (label_t y = 0; y < spec.n; ++y) {
        Row r{y, amp.entries[static_cast<std::size_t>(y)].spectrum_case, amp.pr(y), qft.pr(y), qhs.pr(y), {}, {},
              true, true};
        if (r.c == SpectrumCase::Resonant || r.c == SpectrumCase::Generic) {
            r.ratio_q = r.ra / r.rq;
            r.ratio_h = r.ra / r.rh;
            r.pass_q = bq.contains(*r.ratio_q);
            r.pass_h = bh.contains(*r.ratio_h);
            all_pass = all_pass && r.pass_q && r.pass_h;
        }
        rows.push_back(r);
    }
    const double s_amp = success_probability(amp, spec), s_qft = success_probability(qft, spec),
                 s_qhs = success_probability(qhs, spec);
    std::optional<double> set_ratio_q, set_ratio_h;
    bool set_pass_q = true, set_pass_h = true;
    if (s_qft > 0.0 && s_qhs > 0.0) {
        set_ratio_q = s_amp / s_qft;
        set_ratio_h = s_amp / s_qhs;
        set_pass_q = bq.contains(*set_ratio_q);
        set_pass_h = bh.contains(*set_ratio_h);
    }

    detail::Output sink(cfg.out, out);
    auto &os = sink.stream();
    auto verdict = [](bool b) { return b ? "pass" : "fail"; };
    if (cfg.format == Format::Csv) {
        os << "# schema=" << io::kSchemaVersion << "\n";
        os << "# spec=" << io::spec_to_json(spec) << "\n";
        os << "# bounds_qft lower=" << io::format_double(bq.lower) << " upper=" << io::format_double(bq.upper)
           << " approx=" << io::format_double(bq.approx) << " gap=" << io::format_double(bq.gap()) << "\n";
        os << "# bounds_qhs lower=" << io::format_double(bh.lower) << " upper=" << io::format_double(bh.upper)
           << " approx=" << io::format_double(bh.approx) << " gap=" << io::format_double(bh.gap()) << "\n";
        os << "# success_set size=" << success_set(spec).size() << " pr_amplified=" << io::format_double(s_amp)
           << " pr_qft=" << io::format_double(s_qft) << " pr_qhs=" << io::format_double(s_qhs);
        if (set_ratio_q) {
            os << " ratio_qft=" << io::format_double(*set_ratio_q) << " verdict_qft=" << verdict(set_pass_q)
               << " ratio_qhs=" << io::format_double(*set_ratio_h) << " verdict_qhs=" << verdict(set_pass_h);
        }
        os << "\n# per_y_verdict=" << verdict(all_pass) << "\n";
        os << "y,case,pr_amplified,pr_qft,pr_qhs,ratio_qft,ratio_qhs,verdict_qft,verdict_qhs\n";
        for (const auto &r : rows) {
            os << r.y << ',' << lpq::to_string(r.c) << ',' << io::format_double(r.ra) << ','
               << io::format_double(r.rq) << ',' << io::format_double(r.rh) << ',';
            if (r.ratio_q) {
                os << io::format_double(*r.ratio_q) << ',' << io::format_double(*r.ratio_h) << ','
                   << verdict(r.pass_q) << ',' << verdict(r.pass_h) << '\n';
            } else {
                os << ",,excluded,excluded\n";
            }
        }
    } else {
        io::JsonWriter w(os);
        w.begin_object().field("schema", io::kSchemaVersion);
        w.key("spec");
        io::write_spec(w, spec);
        for (const auto &[name, b] : {std::pair{"bounds_qft", bq}, std::pair{"bounds_qhs", bh}}) {
            w.key(name)
                .begin_object()
                .field("lower", b.lower)
                .field("upper", b.upper)
                .field("approx", b.approx)
                .field("gap", b.gap())
                .end_object();
        }
        w.key("success_set").begin_object();
        w.field("size", static_cast<std::int64_t>(success_set(spec).size()))
            .field("pr_amplified", s_amp)
            .field("pr_qft", s_qft)
            .field("pr_qhs", s_qhs)
            .field("ratio_qft", set_ratio_q)
            .field("ratio_qhs", set_ratio_h)
            .field("verdict_qft", verdict(set_pass_q))
            .field("verdict_qhs", verdict(set_pass_h))
            .end_object();
        w.field("per_y_verdict", verdict(all_pass));
        w.key("rows").begin_array();
        for (const auto &r : rows) {
            w.begin_object()
                .field("y", r.y)
                .field("case", lpq::to_string(r.c))
                .field("pr_amplified", r.ra)
                .field("pr_qft", r.rq)
                .field("pr_qhs", r.rh)
                .field("ratio_qft", r.ratio_q)
                .field("ratio_qhs", r.ratio_h)
                .field("verdict_qft", r.ratio_q ? verdict(r.pass_q) : "excluded")
                .field("verdict_qhs", r.ratio_h ? verdict(r.pass_h) : "excluded")
                .end_object();
        }
        w.end_array().end_object();
        os << '\n';
    }
    return kOk;
}

/// Continued-fraction ladder for one measured y. With verify set, every
/// qualifying candidate is checked with test_period_known_s against the
/// configured instance.
inline int cmd_recover(const RunConfig &cfg, std::ostream &out) {
    if (!cfg.y) throw Error(ErrorCode::InvalidArgument, "recover needs --y");
    const auto rec = recover_period(*cfg.y, cfg.n, cfg.q_max);

    std::vector<std::pair<std::int64_t, bool>> checks;
    std::optional<std::int64_t> verified;
    if (cfg.verify) {
        const OracleHandle oracle(cfg.spec());
        for (const auto &c : rec.qualifying) {
            const bool ok = test_period_known_s(oracle, cfg.s, c.q, cfg.m);
            checks.emplace_back(c.q, ok);
            if (ok) {
                verified = c.q;
                break;
            }
        }
    }

    detail::Output sink(cfg.out, out);
    auto &os = sink.stream();
    if (cfg.format == Format::Csv) {
        os << "# schema=" << io::kSchemaVersion << "\n";
        os << "# y=" << rec.y << " n=" << rec.n << " status=" << lpq::to_string(rec.status)
           << " accepted=" << (rec.accepted ? std::to_string(*rec.accepted) : "none") << "\n";
        for (const auto &[q, ok] : checks) {
            os << "# verify q=" << q << " " << (ok ? "accepted" : "rejected") << "\n";
        }
        os << "index,d,q,qualifies\n";
        for (std::size_t i = 0; i < rec.candidates.size(); ++i) {
            const auto &c = rec.candidates[i];
            const bool q = std::find(rec.qualifying.begin(), rec.qualifying.end(), c) != rec.qualifying.end();
            os << i << ',' << c.d << ',' << c.q << ',' << (q ? "yes" : "no") << '\n';
        }
    } else {
        io::JsonWriter w(os);
        w.begin_object().field("schema", io::kSchemaVersion);
        w.key("recovery");
        io::write_recovery(w, rec);
        w.key("verification").begin_array();
        for (const auto &[q, ok] : checks) w.begin_object().field("q", q).field("passed", ok).end_object();
        w.end_array();
        w.field("verified", verified).end_object();
        os << '\n';
    }
    if (rec.status == RecoveryStatus::NoCandidate) return kNoCandidate;
    if (cfg.verify && !verified) return kVerificationFailed;
    return kOk;
}

inline int cmd_find_offset(const RunConfig &cfg, std::ostream &out) {
    const OracleSpec spec = cfg.spec();
    const OracleHandle oracle(spec);
    const std::int64_t period = cfg.period.value_or(spec.p);
    OffsetSearchOptions options;
    options.counter_confidence = cfg.counter_confidence;
    const auto result = cfg.method == SearchMethod::Counting
                            ? find_offset_counting(oracle, period, spec.m, cfg.seed, options)
                            : find_offset_decreasing(oracle, period, spec.m, cfg.seed, options);

    detail::Output sink(cfg.out, out);
    auto &os = sink.stream();
    if (cfg.format == Format::Csv) {
        os << "# schema=" << io::kSchemaVersion << "\n";
        os << "# method=" << lpq::to_string(result.method) << " status=" << lpq::to_string(result.status)
           << " offset=" << (result.offset ? std::to_string(*result.offset) : "none")
           << " p_candidate=" << result.p_candidate << " iterations=" << result.iterations
           << " retries=" << result.retries << " classical_queries=" << result.classical_queries
           << " quantum_oracle_calls=" << result.quantum_oracle_calls << "\n";
        if (result.counting) {
            os << "# counting t=" << result.counting->t << " reported_r=" << result.counting->r
               << " true_r=" << result.counting->true_r << " correct=" << (result.counting->correct ? "yes" : "no")
               << "\n";
        }
        os << "step,label\n";
        for (std::size_t i = 0; i < result.history.size(); ++i) os << i << ',' << result.history[i] << '\n';
    } else {
        io::JsonWriter w(os);
        io::write_search(w, result);
        os << '\n';
    }
    if (result.status == SearchStatus::Found) return kOk;
    return kVerificationFailed;
}

/// Work-factor rows for all three algorithms; with runs > 0 each row also
/// carries a Monte-Carlo trials-to-success estimate.
inline int cmd_trials(const RunConfig &cfg, std::ostream &out) {
    const OracleSpec spec = cfg.spec();
    const auto rows = workfactor_comparison(spec);
    std::vector<std::optional<EmpiricalStats>> empirical(rows.size());
    if (cfg.runs > 0) {
        MonteCarloOptions options;
        options.q_max = cfg.q_max;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            empirical[i] = monte_carlo_trials(rows[i].algorithm, spec, cfg.runs, derive_seed(cfg.seed, i), options);
        }
    }
    detail::Output sink(cfg.out, out);
    auto &os = sink.stream();
    const auto k = grover_schedule(spec.n, spec.m).k;
    if (cfg.format == Format::Csv) {
        os << "# spec=" << io::spec_to_json(spec) << " k=" << k << "\n";
        io::write_reports_csv(os, rows, empirical);
    } else {
        io::write_reports_json(os, spec, k, rows, empirical);
    }
    return kOk;
}

/// One report file per N = 2^log2_min .. 2^log2_max (M, P, s from the
/// config) written into the directory cfg.out, plus a summary on `out`.
inline int cmd_sweep(const RunConfig &cfg, std::ostream &out) {
    if (cfg.log2_min < 1 || cfg.log2_max < cfg.log2_min || cfg.log2_max > 24) {
        throw Error(ErrorCode::InvalidArgument, "sweep needs 1 <= log2-min <= log2-max <= 24");
    }
    const auto rows = workfactor_sweep(cfg.m, cfg.p, cfg.s, cfg.log2_min, cfg.log2_max);
    const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out);
    std::filesystem::create_directories(dir);

    double lo = rows.front().normalized_ratio_qft, hi = lo;
    for (const auto &row : rows) {
        const std::string ext = cfg.format == Format::Csv ? ".csv" : ".json";
        std::ofstream file(dir / ("sweep_N" + std::to_string(row.spec.n) + ext), std::ios::binary);
        if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write into '" + dir.string() + "'");
        if (cfg.format == Format::Csv) {
            file << "# spec=" << io::spec_to_json(row.spec) << " k=" << row.k << "\n";
            io::write_reports_csv(file, row.reports);
        } else {
            io::write_reports_json(file, row.spec, row.k, row.reports);
        }
        lo = std::min(lo, row.normalized_ratio_qft);
        hi = std::max(hi, row.normalized_ratio_qft);
    }
    out << "# schema=" << io::kSchemaVersion << "\n";
    out << "n,k,sqrt_n_over_m,ratio_qft,ratio_qhs,normalized_qft,normalized_qhs\n";
    for (const auto &row : rows) {
        out << row.spec.n << ',' << row.k << ',' << io::format_double(row.sqrt_n_over_m) << ','
            << io::format_double(row.reports[1].ratio_vs_amplified) << ','
            << io::format_double(row.reports[2].ratio_vs_amplified) << ','
            << io::format_double(row.normalized_ratio_qft) << ',' << io::format_double(row.normalized_ratio_qhs)
            << '\n';
    }
    out << "# band max/min=" << io::format_double(hi / lo) << " verdict=" << (hi / lo <= 4.0 ? "pass" : "fail")
        << "\n";
    return kOk;
}

}  // namespace lpq::cli

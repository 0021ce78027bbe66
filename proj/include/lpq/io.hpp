#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lpq/analysis.hpp"
#include "lpq/offset.hpp"
#include "lpq/oracle.hpp"
#include "lpq/recovery.hpp"
#include "lpq/spectrum.hpp"

// Text formats. Every floating-point value is written with 17 significant
// digits ("%.17g"), so a parsed value is bit-identical to the one in memory
// and files diff cleanly across implementations. CSV files start with a
// "# schema=1" line.
namespace lpq::io {

inline constexpr int kSchemaVersion = 1;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Streaming JSON emitter. nlohmann::json prints the shortest round-trip
/// form instead of a fixed 17 digits, so output goes through this and
/// nlohmann is used for reading.
class JsonWriter {
  public:
    explicit JsonWriter(std::ostream &os) : os_(os) {}

    JsonWriter &begin_object() { return open('{'); }
    JsonWriter &end_object() { return close('}'); }
    JsonWriter &begin_array() { return open('['); }
    JsonWriter &end_array() { return close(']'); }

    JsonWriter &key(std::string_view k) {
        separate();
        write_string(k);
        os_ << ':';
        after_key_ = true;
        return *this;
    }

    JsonWriter &value(double v) { return raw(format_double(v)); }
    JsonWriter &value(std::int64_t v) { return raw(std::to_string(v)); }
    JsonWriter &value(std::uint64_t v) { return raw(std::to_string(v)); }
    JsonWriter &value(int v) { return raw(std::to_string(v)); }
    JsonWriter &value(bool v) { return raw(v ? "true" : "false"); }
    JsonWriter &value(std::string_view v) {
        separate();
        write_string(v);
        return *this;
    }
    JsonWriter &value(const char *v) { return value(std::string_view(v)); }
    JsonWriter &null() { return raw("null"); }

    template <class T>
    JsonWriter &value(const std::optional<T> &v) {
        return v ? value(*v) : null();
    }

    template <class T>
    JsonWriter &field(std::string_view k, const T &v) {
        key(k);
        return value(v);
    }

  private:
    JsonWriter &open(char c) {
        separate();
        os_ << c;
        first_.push_back(true);
        return *this;
    }
    JsonWriter &close(char c) {
        os_ << c;
        first_.pop_back();
        return *this;
    }
    JsonWriter &raw(std::string_view text) {
        separate();
        os_ << text;
        return *this;
    }
    void separate() {
        if (after_key_) {
            after_key_ = false;
            return;
        }
        if (!first_.empty()) {
            if (!first_.back()) os_ << ',';
            first_.back() = false;
        }
    }
    void write_string(std::string_view s) {
        os_ << '"';
        for (char c : s) {
            switch (c) {
                case '"': os_ << "\\\""; break;
                case '\\': os_ << "\\\\"; break;
                case '\n': os_ << "\\n"; break;
                case '\t': os_ << "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        os_ << buf;
                    } else {
                        os_ << c;
                    }
            }
        }
        os_ << '"';
    }

    std::ostream &os_;
    std::vector<bool> first_;
    bool after_key_ = false;
};

// --- OracleSpec: {"n":..,"m":..,"p":..,"s":..} ---

inline void write_spec(JsonWriter &w, const OracleSpec &spec) {
    w.begin_object().field("n", spec.n).field("m", spec.m).field("p", spec.p).field("s", spec.s).end_object();
}

inline std::string spec_to_json(const OracleSpec &spec) {
    std::ostringstream os;
    JsonWriter w(os);
    write_spec(w, spec);
    return os.str();
}

/// Parses and validates a flat spec object.
inline OracleSpec spec_from_json(const nlohmann::json &j, bool strict = true) {
    for (const char *k : {"n", "m", "p", "s"}) {
        if (!j.contains(k) || !j.at(k).is_number_integer()) {
            throw Error(ErrorCode::InvalidArgument, std::string("spec field '") + k + "' missing or not an integer");
        }
    }
    return build_oracle(j.at("n").get<label_t>(), j.at("m").get<label_t>(), j.at("p").get<label_t>(),
                        j.at("s").get<label_t>(), strict);
}

inline OracleSpec parse_spec(std::string_view text, bool strict = true) {
    return spec_from_json(nlohmann::json::parse(text), strict);
}

// --- ProbabilityTable: CSV (y,pr,case,source) and JSON ---

inline void write_table_csv(std::ostream &os, const ProbabilityTable &table) {
    os << "# schema=" << kSchemaVersion << "\n";
    os << "y,pr,case,source\n";
    for (const auto &e : table.entries) {
        os << e.y << ',' << format_double(e.pr) << ',' << to_string(e.spectrum_case) << ',' << to_string(e.source)
           << '\n';
    }
}

inline void write_table_json(std::ostream &os, const ProbabilityTable &table) {
    JsonWriter w(os);
    w.begin_object().field("schema", kSchemaVersion).field("n", table.n).field("algorithm", to_string(table.algorithm));
    w.key("entries").begin_array();
    for (const auto &e : table.entries) {
        w.begin_object()
            .field("y", e.y)
            .field("pr", e.pr)
            .field("case", to_string(e.spectrum_case))
            .field("source", to_string(e.source))
            .end_object();
    }
    w.end_array().end_object();
    os << '\n';
}

inline SpectrumCase parse_case(std::string_view s) {
    if (s == "zero") return SpectrumCase::Zero;
    if (s == "resonant") return SpectrumCase::Resonant;
    if (s == "generic") return SpectrumCase::Generic;
    if (s == "null") return SpectrumCase::Null;
    throw Error(ErrorCode::InvalidArgument, "unknown spectrum case '" + std::string(s) + "'");
}

inline ProbabilityTable read_table_json(const nlohmann::json &j) {
    ProbabilityTable t;
    t.n = j.at("n").get<label_t>();
    t.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    for (const auto &e : j.at("entries")) {
        t.entries.push_back(TableEntry{e.at("y").get<label_t>(), e.at("pr").get<double>(),
                                       parse_case(e.at("case").get<std::string>()),
                                       e.at("source").get<std::string>() == "simulated" ? Source::Simulated
                                                                                        : Source::ClosedForm});
    }
    return t;
}

// --- RecoveryResult: {y, convergents: [[d,q]...], accepted, status} ---

inline void write_recovery(JsonWriter &w, const RecoveryResult &r) {
    w.begin_object().field("y", r.y).field("n", r.n);
    w.key("convergents").begin_array();
    for (const auto &c : r.candidates) w.begin_array().value(c.d).value(c.q).end_array();
    w.end_array();
    w.key("qualifying").begin_array();
    for (const auto &c : r.qualifying) w.begin_array().value(c.d).value(c.q).end_array();
    w.end_array();
    w.field("accepted", r.accepted).field("status", to_string(r.status)).end_object();
}

inline std::string recovery_to_json(const RecoveryResult &r) {
    std::ostringstream os;
    JsonWriter w(os);
    write_recovery(w, r);
    return os.str();
}

// --- Offset search transcript ---

inline void write_search(JsonWriter &w, const OffsetSearchResult &r) {
    w.begin_object()
        .field("method", to_string(r.method))
        .field("status", to_string(r.status))
        .field("offset", r.offset)
        .field("p_candidate", r.p_candidate);
    w.key("history").begin_array();
    for (label_t x : r.history) w.value(x);
    w.end_array();
    w.field("iterations", r.iterations)
        .field("retries", r.retries)
        .field("classical_queries", r.classical_queries)
        .field("loop_queries", r.loop_queries)
        .field("quantum_oracle_calls", r.quantum_oracle_calls);
    w.key("verifications").begin_array();
    for (const auto &[s1, ok] : r.verifications) w.begin_object().field("s", s1).field("passed", ok).end_object();
    w.end_array();
    w.key("counting");
    if (r.counting) {
        const auto &c = *r.counting;
        w.begin_object()
            .field("t", c.t)
            .field("reported_r", c.r)
            .field("true_r", c.true_r)
            .field("confidence", c.confidence)
            .field("correct", c.correct)
            .field("charged_cost", c.charged_cost)
            .end_object();
    } else {
        w.null();
    }
    w.end_object();
}

// --- Work-factor reports ---

inline void write_reports_csv(std::ostream &os, const std::vector<WorkfactorReport> &rows,
                              const std::vector<std::optional<EmpiricalStats>> &empirical = {}) {
    os << "# schema=" << kSchemaVersion << "\n";
    os << "algorithm,per_run_cost,success_probability,expected_runs,variance_runs,total_cost,ratio_vs_amplified,"
          "analytic_lower_bound,bound_holds,mc_runs,mc_mean,mc_variance,mc_ci95_low,mc_ci95_high\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        os << to_string(r.algorithm) << ',' << format_double(r.per_run_cost) << ','
           << format_double(r.success_probability) << ',' << format_double(r.expected_runs) << ','
           << format_double(r.variance_runs) << ',' << format_double(r.total_cost) << ','
           << format_double(r.ratio_vs_amplified) << ',' << format_double(r.analytic_lower_bound) << ','
           << (r.bound_holds ? "pass" : "fail");
        if (i < empirical.size() && empirical[i]) {
            const auto &e = *empirical[i];
            os << ',' << e.runs << ',' << format_double(e.mean) << ',' << format_double(e.variance) << ','
               << format_double(e.ci95_low) << ',' << format_double(e.ci95_high);
        } else {
            os << ",,,,,";
        }
        os << '\n';
    }
}

inline void write_empirical(JsonWriter &w, const EmpiricalStats &e) {
    w.begin_object()
        .field("runs", e.runs)
        .field("mean", e.mean)
        .field("variance", e.variance)
        .field("ci95_low", e.ci95_low)
        .field("ci95_high", e.ci95_high)
        .field("total_trials", e.total_trials)
        .field("false_candidates", e.false_candidates)
        .end_object();
}

inline void write_reports_json(std::ostream &os, const OracleSpec &spec, std::int64_t k,
                               const std::vector<WorkfactorReport> &rows,
                               const std::vector<std::optional<EmpiricalStats>> &empirical = {}) {
    JsonWriter w(os);
    w.begin_object().field("schema", kSchemaVersion);
    w.key("spec");
    write_spec(w, spec);
    w.field("k", k);
    w.key("reports").begin_array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        w.begin_object()
            .field("algorithm", to_string(r.algorithm))
            .field("per_run_cost", r.per_run_cost)
            .field("success_probability", r.success_probability)
            .field("expected_runs", r.expected_runs)
            .field("variance_runs", r.variance_runs)
            .field("total_cost", r.total_cost)
            .field("ratio_vs_amplified", r.ratio_vs_amplified)
            .field("analytic_lower_bound", r.analytic_lower_bound)
            .field("bound_holds", r.bound_holds);
        w.key("monte_carlo");
        if (i < empirical.size() && empirical[i]) {
            write_empirical(w, *empirical[i]);
        } else {
            w.null();
        }
        w.end_object();
    }
    w.end_array().end_object();
    os << '\n';
}

}  // namespace lpq::io

#include "sigstream/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "sigstream/dataset_io.hpp"
#include "sigstream/rng.hpp"

namespace sigstream {

using nlohmann::json;

const char* const kFeatureCountNote =
    "Feature totals are the full number of signature terms of the embedded path "
    "(d + d^2 + ... + d^L, e.g. 12 / 39 / 120 for a 3-d path at L = 2 / 3 / 4). Totals reported "
    "elsewhere for similar pipelines (7 / 23 / 74) come from an unstated pruning rule that is "
    "not reproduced here.";

std::string content_digest(std::string_view bytes) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

json manifest_json(const RunManifest& m, bool with_timestamp) {
    json out{{"tool", "sigstream"},
             {"tool_version", m.tool_version},
             {"seed", m.seed},
             {"config", m.config},
             {"input_digest", m.input_digest},
             {"command", m.command}};
    if (!m.sidecar.empty()) out["sidecar"] = m.sidecar;
    if (with_timestamp) out["created_utc"] = m.created_utc;
    return out;
}

namespace {

json metric_value(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json hyper_json(ClassifierKind kind, const HyperParams& h) {
    switch (kind) {
        case ClassifierKind::Logistic: return {{"lambda", h.lambda}, {"rho", h.rho}};
        case ClassifierKind::Svm: return {{"c", h.c}};
        case ClassifierKind::Knn: return {{"k", h.k}};
    }
    return json::object();
}

json entry_json(const ReportEntry& e) {
    json hyper = json::array();
    for (const auto& h : e.chosen) hyper.push_back(hyper_json(e.classifier, h));
    return json{
        {"classifier", to_string(e.classifier)},
        {"depth", e.depth},
        {"metrics",
         {{"sensitivity", metric_value(e.metrics.sensitivity)},
          {"specificity", metric_value(e.metrics.specificity)},
          {"accuracy", metric_value(e.metrics.accuracy)},
          {"f1", metric_value(e.metrics.f1)},
          {"auc", metric_value(e.metrics.auc)},
          {"kappa", metric_value(e.metrics.kappa)}}},
        {"confusion", {{"tp", e.metrics.tp}, {"tn", e.metrics.tn}, {"fp", e.metrics.fp}, {"fn", e.metrics.fn}}},
        {"features",
         {{"selected", e.selected_features},
          {"selected_count", e.selected_features.size()},
          {"total", e.total_features},
          {"usable", e.usable_features}}},
        {"hyperparameters_per_outer_fold", hyper},
        {"evaluated_rows", e.evaluated_rows}};
}

std::string fixed2(double v) {
    if (!std::isfinite(v)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string classifier_title(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::Logistic: return "Logistic regression";
        case ClassifierKind::Svm: return "SVM";
        case ClassifierKind::Knn: return "kNN";
    }
    return "";
}

void dump_value(const json& v, int indent, std::string& out) {
    const std::string pad_in(static_cast<std::size_t>(indent + 2), ' ');
    const std::string pad_out(static_cast<std::size_t>(indent), ' ');
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + json(key).dump() + ": ";
                dump_value(value, indent + 2, out);
            }
            out += "\n" + pad_out + "}";
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += pad_in;
                dump_value(v[i], indent + 2, out);
            }
            out += "\n" + pad_out + "]";
            return;
        }
        case json::value_t::number_float: {
            const double d = v.get<double>();
            out += std::isfinite(d) ? format_double(d) : "null";
            return;
        }
        default:
            out += v.dump();
    }
}

}  // namespace

std::string dump_json(const json& doc) {
    std::string out;
    dump_value(doc, 0, out);
    out += '\n';
    return out;
}

json report_json(const ClassificationReport& report, const RunManifest& manifest) {
    json entries = json::array();
    for (const auto& e : report.entries) entries.push_back(entry_json(e));
    json excluded = json::array();
    for (const auto& x : report.exclusions) excluded.push_back({{"subject", x.subject}, {"reason", x.reason}});
    return json{{"schema_version", kReportSchemaVersion},
                {"manifest", manifest_json(manifest, false)},
                {"mode", report.paper_mode ? "oversample-before-cv" : "inside-folds"},
                {"dataset",
                 {{"subjects", report.subjects},
                  {"group0", report.group0},
                  {"group1", report.group1},
                  {"synthetic_rows", report.synthetic_rows},
                  {"excluded", excluded}}},
                {"entries", entries},
                {"notes", json::array({kFeatureCountNote})}};
}

std::string render_table(const ClassificationReport& report) {
    constexpr std::size_t label_width = 20;
    constexpr std::size_t cell = 10;
    std::vector<const ReportEntry*> cols;
    for (const auto& e : report.entries) cols.push_back(&e);

    std::ostringstream os;
    // Classifier header spans its depth columns.
    os << pad("Classifier", label_width);
    for (std::size_t i = 0; i < cols.size();) {
        std::size_t j = i;
        while (j < cols.size() && cols[j]->classifier == cols[i]->classifier) ++j;
        os << "| " << pad(classifier_title(cols[i]->classifier), cell * (j - i) - 2);
        i = j;
    }
    os << "\n" << pad("Signature depth", label_width);
    for (const auto* e : cols) os << "| " << pad("L=" + std::to_string(e->depth), cell - 2);
    os << "\n" << pad("number of features", label_width);
    for (const auto* e : cols) {
        os << "| " << pad(std::to_string(e->selected_features.size()) + " (" +
                              std::to_string(e->total_features) + ")",
                          cell - 2);
    }
    os << "\n" << std::string(label_width + cell * cols.size(), '-') << "\n";

    const std::pair<const char*, double MetricBundle::*> rows[] = {
        {"sensitivity", &MetricBundle::sensitivity}, {"specificity", &MetricBundle::specificity},
        {"accuracy", &MetricBundle::accuracy},       {"f1-score", &MetricBundle::f1},
        {"AUC", &MetricBundle::auc},                 {"Cohen's kappa", &MetricBundle::kappa}};
    for (const auto& [name, member] : rows) {
        os << pad(name, label_width);
        for (const auto* e : cols) os << "| " << pad(fixed2(e->metrics.*member), cell - 2);
        os << "\n";
    }
    os << "\nsubjects: " << report.subjects << " (group 0: " << report.group0
       << ", group 1: " << report.group1 << "), excluded: " << report.exclusions.size()
       << ", mode: " << (report.paper_mode ? "oversample-before-cv" : "inside-folds") << "\n";
    os << "note: " << kFeatureCountNote << "\n";
    return os.str();
}

}  // namespace sigstream

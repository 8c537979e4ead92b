#include "sigstream/config.hpp"

#include <initializer_list>
#include <string>

namespace sigstream {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
    throw ConfigError((pointer.empty() ? "/" : pointer) + ": " + what);
}

void require_object(const json& doc, const std::string& pointer,
                    std::initializer_list<const char*> allowed) {
    if (!doc.is_object()) fail(pointer, "expected an object");
    for (const auto& [key, value] : doc.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) fail(pointer + "/" + key, "unknown key");
    }
}

std::uint64_t get_uint(const json& v, const std::string& pointer, std::uint64_t min_value) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        fail(pointer, "expected a non-negative integer");
    }
    const auto x = v.get<std::uint64_t>();
    if (x < min_value) fail(pointer, "expected an integer >= " + std::to_string(min_value));
    return x;
}

double get_real(const json& v, const std::string& pointer) {
    if (!v.is_number()) fail(pointer, "expected a number");
    return v.get<double>();
}

bool get_bool(const json& v, const std::string& pointer) {
    if (!v.is_boolean()) fail(pointer, "expected true or false");
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& pointer) {
    if (!v.is_string()) fail(pointer, "expected a string");
    return v.get<std::string>();
}

}  // namespace

SynthConfig parse_synth_config(const json& doc, SynthConfig c) {
    require_object(doc, "", {"n0", "n1", "weeks", "mean0", "mean1", "dispersion", "missing_prob",
                             "max_consecutive_missing", "seed"});
    if (doc.contains("n0")) c.n0 = get_uint(doc["n0"], "/n0", 1);
    if (doc.contains("n1")) c.n1 = get_uint(doc["n1"], "/n1", 1);
    if (doc.contains("weeks")) c.weeks = get_uint(doc["weeks"], "/weeks", 2);
    if (doc.contains("mean0")) c.mean0 = get_real(doc["mean0"], "/mean0");
    if (doc.contains("mean1")) c.mean1 = get_real(doc["mean1"], "/mean1");
    if (doc.contains("dispersion")) c.dispersion = get_real(doc["dispersion"], "/dispersion");
    if (doc.contains("missing_prob")) c.missing_prob = get_real(doc["missing_prob"], "/missing_prob");
    if (doc.contains("max_consecutive_missing")) {
        c.max_consecutive_missing = get_uint(doc["max_consecutive_missing"], "/max_consecutive_missing", 0);
    }
    if (doc.contains("seed")) c.seed = get_uint(doc["seed"], "/seed", 0);
    if (c.mean0 < 0) fail("/mean0", "expected a value >= 0");
    if (c.mean1 < 0) fail("/mean1", "expected a value >= 0");
    if (!(c.dispersion > 0)) fail("/dispersion", "expected a value > 0");
    if (!(c.missing_prob >= 0 && c.missing_prob < 1)) fail("/missing_prob", "expected a value in [0, 1)");
    return c;
}

json to_json(const SynthConfig& c) {
    return json{{"n0", c.n0},
                {"n1", c.n1},
                {"weeks", c.weeks},
                {"mean0", c.mean0},
                {"mean1", c.mean1},
                {"dispersion", c.dispersion},
                {"missing_prob", c.missing_prob},
                {"max_consecutive_missing", c.max_consecutive_missing},
                {"seed", c.seed}};
}

PipelineConfig parse_pipeline_config(const json& doc, PipelineConfig c) {
    require_object(doc, "", {"depths", "embedding", "cv", "classifiers", "seed", "threads",
                             "max_consecutive_missing"});
    if (doc.contains("depths")) {
        const auto& d = doc["depths"];
        if (!d.is_array() || d.empty()) fail("/depths", "expected a non-empty array");
        c.depths.clear();
        for (std::size_t i = 0; i < d.size(); ++i) {
            const auto p = "/depths/" + std::to_string(i);
            const auto depth = get_uint(d[i], p, 1);
            if (depth > static_cast<std::uint64_t>(kMaxDepth)) {
                fail(p, "expected a depth <= " + std::to_string(kMaxDepth));
            }
            c.depths.push_back(static_cast<int>(depth));
        }
    }
    if (doc.contains("embedding")) {
        const auto& e = doc["embedding"];
        require_object(e, "/embedding", {"kind", "axis"});
        if (e.contains("kind")) {
            try {
                c.embedding.kind = parse_embedding_kind(get_string(e["kind"], "/embedding/kind"));
            } catch (const InvalidInput& err) {
                fail("/embedding/kind", err.what());
            }
        }
        if (e.contains("axis")) c.embedding.axis = get_bool(e["axis"], "/embedding/axis");
    }
    if (doc.contains("cv")) {
        const auto& v = doc["cv"];
        require_object(v, "/cv", {"outer_folds", "inner_folds", "smote_inside_folds", "oversample",
                                  "adasyn", "smote_k", "selection"});
        if (v.contains("outer_folds")) c.cv.outer_folds = get_uint(v["outer_folds"], "/cv/outer_folds", 2);
        if (v.contains("inner_folds")) c.cv.inner_folds = get_uint(v["inner_folds"], "/cv/inner_folds", 2);
        if (v.contains("smote_inside_folds")) {
            c.cv.smote_inside_folds = get_bool(v["smote_inside_folds"], "/cv/smote_inside_folds");
        }
        if (v.contains("oversample")) c.cv.oversample = get_bool(v["oversample"], "/cv/oversample");
        if (v.contains("adasyn")) c.cv.adasyn = get_bool(v["adasyn"], "/cv/adasyn");
        if (v.contains("smote_k")) c.cv.smote_k = get_uint(v["smote_k"], "/cv/smote_k", 1);
        if (v.contains("selection")) {
            const auto& s = v["selection"];
            require_object(s, "/cv/selection", {"enabled", "rho", "steps", "folds"});
            SelectionConfig sel = c.cv.selection.value_or(SelectionConfig{});
            bool enabled = true;
            if (s.contains("enabled")) enabled = get_bool(s["enabled"], "/cv/selection/enabled");
            if (s.contains("rho")) {
                sel.rho = get_real(s["rho"], "/cv/selection/rho");
                if (!(sel.rho > 0 && sel.rho <= 1)) fail("/cv/selection/rho", "expected a value in (0, 1]");
            }
            if (s.contains("steps")) sel.steps = get_uint(s["steps"], "/cv/selection/steps", 2);
            if (s.contains("folds")) sel.folds = get_uint(s["folds"], "/cv/selection/folds", 2);
            c.cv.selection = enabled ? std::optional<SelectionConfig>(sel) : std::nullopt;
        }
    }
    if (doc.contains("classifiers")) {
        const auto& k = doc["classifiers"];
        if (!k.is_array() || k.empty()) fail("/classifiers", "expected a non-empty array");
        c.classifiers.clear();
        for (std::size_t i = 0; i < k.size(); ++i) {
            const auto p = "/classifiers/" + std::to_string(i);
            try {
                c.classifiers.push_back(parse_classifier_kind(get_string(k[i], p)));
            } catch (const InvalidInput& err) {
                fail(p, err.what());
            }
        }
    }
    if (doc.contains("seed")) c.seed = get_uint(doc["seed"], "/seed", 0);
    if (doc.contains("threads")) c.threads = get_uint(doc["threads"], "/threads", 1);
    if (doc.contains("max_consecutive_missing")) {
        c.max_consecutive_missing = get_uint(doc["max_consecutive_missing"], "/max_consecutive_missing", 0);
    }
    return c;
}

json to_json(const PipelineConfig& c) {
    json classifiers = json::array();
    for (auto k : c.classifiers) classifiers.push_back(to_string(k));
    json cv{{"outer_folds", c.cv.outer_folds},
            {"inner_folds", c.cv.inner_folds},
            {"smote_inside_folds", c.cv.smote_inside_folds},
            {"oversample", c.cv.oversample},
            {"adasyn", c.cv.adasyn},
            {"smote_k", c.cv.smote_k}};
    if (c.cv.selection) {
        cv["selection"] = {{"enabled", true},
                           {"rho", c.cv.selection->rho},
                           {"steps", c.cv.selection->steps},
                           {"folds", c.cv.selection->folds}};
    } else {
        cv["selection"] = {{"enabled", false}};
    }
    // threads omitted: output bytes do not depend on it.
    return json{{"depths", c.depths},
                {"embedding", {{"kind", to_string(c.embedding.kind)}, {"axis", c.embedding.axis}}},
                {"cv", cv},
                {"classifiers", classifiers},
                {"seed", c.seed},
                {"max_consecutive_missing", c.max_consecutive_missing}};
}

}  // namespace sigstream

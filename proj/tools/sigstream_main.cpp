// sigstream: signatures of data streams and the classification pipeline built
// on them. Exit codes: 0 success, 1 runtime failure, 2 bad input or config.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigstream/config.hpp"
#include "sigstream/dataset_io.hpp"
#include "sigstream/embeddings.hpp"
#include "sigstream/pipeline.hpp"
#include "sigstream/report.hpp"
#include "sigstream/signature.hpp"
#include "sigstream/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sigstream;

namespace {

constexpr const char* kOutputDirEnv = "SIGSTREAM_OUTPUT_DIR";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path resolve_output(const std::string& out) {
    fs::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) p = fs::path(dir) / p;
    }
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    const auto text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

RunManifest make_manifest(const std::string& command, json config, std::uint64_t seed,
                          const std::string& input_bytes) {
    RunManifest m;
    m.config = std::move(config);
    m.seed = seed;
    m.input_digest = content_digest(input_bytes);
    m.tool_version = SIGSTREAM_VERSION;
    m.command = command;
    m.created_utc = utc_now();
    return m;
}

fs::path sidecar_path(const fs::path& artifact) {
    auto p = artifact;
    p += ".manifest.json";
    return p;
}

// --- sig --------------------------------------------------------------------

struct SigOptions {
    std::string input;
    int depth = 0;
    std::string embedding = "raw";
    bool axis = false;
    bool time_augment = false;
    bool json_out = false;
    bool print_path = false;
    std::string out;
};

int column_named(const NumericTable& t, std::initializer_list<const char*> names) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        for (const char* n : names) {
            if (t.header[i] == n) return static_cast<int>(i);
        }
    }
    return -1;
}

StreamRecord table_to_record(const NumericTable& t) {
    const std::size_t width = t.rows.empty() ? 0 : t.rows.front().size();
    int value_col = column_named(t, {"value", "delay", "x"});
    int missing_col = column_named(t, {"missing"});
    int time_col = column_named(t, {"time", "t", "week"});
    if (t.header.empty()) {
        if (width == 1) value_col = 0;
        else if (width == 2) {
            value_col = 0;
            missing_col = 1;
        } else {
            throw InvalidInput("stream files need 1 column (value) or 2 columns (value,missing)");
        }
    }
    if (value_col < 0) throw InvalidInput("stream file has no value column");

    StreamRecord r;
    std::vector<double> times;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        bool missing = !row[static_cast<std::size_t>(value_col)].has_value();
        if (missing_col >= 0) {
            const auto& m = row[static_cast<std::size_t>(missing_col)];
            if (!m || (*m != 0.0 && *m != 1.0)) {
                throw ParseError(t.lines[i], "missing flag must be 0 or 1");
            }
            missing = *m == 1.0;
        }
        if (!missing && !row[static_cast<std::size_t>(value_col)]) {
            throw ParseError(t.lines[i], "observed row without a value");
        }
        r.values.push_back(missing ? 0.0 : *row[static_cast<std::size_t>(value_col)]);
        r.missing.push_back(missing);
        if (time_col >= 0) {
            const auto& tv = row[static_cast<std::size_t>(time_col)];
            if (!tv) throw ParseError(t.lines[i], "empty time");
            times.push_back(*tv);
        }
    }
    if (time_col >= 0) r.times = std::move(times);
    return r;
}

Path table_to_raw_path(const NumericTable& t) {
    std::vector<std::vector<double>> points;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        std::vector<double> p;
        for (const auto& v : t.rows[i]) {
            if (!v) throw ParseError(t.lines[i], "raw paths cannot have missing coordinates");
            p.push_back(*v);
        }
        points.push_back(std::move(p));
    }
    return Path(points);
}

int run_sig(const SigOptions& o) {
    const auto text = read_file(o.input);
    std::istringstream in(text);
    const auto table = read_numeric_table(in);

    EmbeddingConfig cfg;
    cfg.kind = parse_embedding_kind(o.embedding);
    cfg.axis = o.axis;
    cfg.time_augment = o.time_augment;
    cfg.integer_time = true;

    Path path = cfg.kind == EmbeddingKind::Raw ? table_to_raw_path(table) : [&] {
        const auto record = table_to_record(table);
        // Explicit times are honoured by the embeddings that take them.
        EmbeddingConfig c = cfg;
        c.integer_time = !record.times.has_value();
        return embed(record, c);
    }();

    const auto sig = signature(path, o.depth);
    const auto indices = multi_indices(path.dimension(), o.depth);
    std::ostringstream os;
    if (o.json_out) {
        json terms = json::array();
        for (std::size_t i = 0; i < indices.size(); ++i) {
            terms.push_back({{"index", to_string(indices[i])}, {"value", sig.terms()[i]}});
        }
        json points = json::array();
        for (std::size_t i = 0; i < path.size(); ++i) {
            auto p = path.point(i);
            points.push_back(std::vector<double>(p.begin(), p.end()));
        }
        json doc{{"embedding", to_string(cfg.kind)},
                 {"dimension", path.dimension()},
                 {"depth", o.depth},
                 {"path", points},
                 {"terms", terms},
                 {"input_digest", content_digest(text)},
                 {"tool_version", SIGSTREAM_VERSION}};
        os << dump_json(doc);
    } else {
        if (o.print_path) {
            for (std::size_t i = 0; i < path.size(); ++i) {
                os << "# point " << i << ":";
                for (double v : path.point(i)) os << ' ' << format_double(v);
                os << '\n';
            }
        }
        for (std::size_t i = 0; i < indices.size(); ++i) {
            os << to_string(indices[i]) << ' ' << format_double(sig.terms()[i]) << '\n';
        }
    }
    if (o.out.empty()) {
        std::cout << os.str();
    } else {
        write_text(resolve_output(o.out), os.str());
    }
    return 0;
}

// --- synth ------------------------------------------------------------------

struct SynthOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n0, n1, weeks;
    std::optional<double> mean0, mean1, dispersion, missing_prob;
    std::string out;
};

int run_synth(const SynthOptions& o) {
    auto cfg = parse_synth_config(load_config(o.config));
    if (o.seed) cfg.seed = *o.seed;
    if (o.n0) cfg.n0 = *o.n0;
    if (o.n1) cfg.n1 = *o.n1;
    if (o.weeks) cfg.weeks = *o.weeks;
    if (o.mean0) cfg.mean0 = *o.mean0;
    if (o.mean1) cfg.mean1 = *o.mean1;
    if (o.dispersion) cfg.dispersion = *o.dispersion;
    if (o.missing_prob) cfg.missing_prob = *o.missing_prob;
    validate(cfg);

    const auto records = synth_generate(cfg);
    std::ostringstream os;
    write_dataset(os, records);
    if (o.out.empty()) {
        std::cout << os.str();
        return 0;
    }
    const auto path = resolve_output(o.out);
    write_text(path, os.str());
    auto manifest = make_manifest("synth", to_json(cfg), cfg.seed, os.str());
    write_text(sidecar_path(path), dump_json(manifest_json(manifest, true)));
    std::cerr << "wrote " << records.size() << " subjects to " << path.string() << "\n";
    return 0;
}

// --- featurize --------------------------------------------------------------

struct FeaturizeOptions {
    std::string input;
    int depth = 0;
    std::string embedding = "delay";
    bool axis = false;
    bool raw = false;
    std::size_t threads = 1;
    std::string out;
};

int run_featurize(const FeaturizeOptions& o) {
    const auto text = read_file(o.input);
    std::istringstream in(text);
    const auto ingested = ingest(read_dataset(in), 2);
    EmbeddingConfig cfg;
    cfg.kind = parse_embedding_kind(o.embedding);
    cfg.axis = o.axis;
    std::vector<std::string> subjects;
    for (const auto& r : ingested.kept) subjects.push_back(r.subject);
    for (const auto& x : ingested.excluded) {
        std::cerr << "excluded " << x.subject << ": " << x.reason << "\n";
    }

    FeatureMatrix m;
    if (o.raw) {
        m = signature_features(ingested.kept, cfg, o.depth, o.threads);
    } else {
        auto f = featurize(ingested.kept, cfg, o.depth, o.threads);
        for (const auto& name : f.dropped_columns) std::cerr << "dropped zero-variance column " << name << "\n";
        m = std::move(f.matrix);
    }
    std::ostringstream os;
    write_features(os, m, subjects);
    if (o.out.empty()) {
        std::cout << os.str();
        return 0;
    }
    const auto path = resolve_output(o.out);
    write_text(path, os.str());
    json cfg_json{{"depth", o.depth},
                  {"embedding", to_string(cfg.kind)},
                  {"axis", o.axis},
                  {"standardized", !o.raw}};
    auto manifest = make_manifest("featurize", cfg_json, 0, text);
    write_text(sidecar_path(path), dump_json(manifest_json(manifest, true)));
    return 0;
}

// --- run --------------------------------------------------------------------

struct RunOptions {
    std::string input;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::vector<int> depths;
    std::optional<std::size_t> folds, inner_folds, threads;
    std::vector<std::string> classifiers;
    std::string embedding;
    bool paper_mode = false;
    bool axis = false;
    bool json_out = false;
    std::string out;
};

int run_run(const RunOptions& o) {
    auto cfg = parse_pipeline_config(load_config(o.config));
    if (o.seed) cfg.seed = *o.seed;
    if (!o.depths.empty()) cfg.depths = o.depths;
    if (o.folds) cfg.cv.outer_folds = *o.folds;
    if (o.inner_folds) cfg.cv.inner_folds = *o.inner_folds;
    if (o.threads) cfg.threads = *o.threads;
    if (!o.classifiers.empty()) {
        cfg.classifiers.clear();
        for (const auto& c : o.classifiers) cfg.classifiers.push_back(parse_classifier_kind(c));
    }
    if (!o.embedding.empty()) cfg.embedding.kind = parse_embedding_kind(o.embedding);
    if (o.axis) cfg.embedding.axis = true;
    if (o.paper_mode) cfg.cv.smote_inside_folds = false;
    if (cfg.cv.outer_folds < 2 || cfg.cv.inner_folds < 2) throw ConfigError("/cv: fold counts must be >= 2");
    validate(cfg);

    const auto text = read_file(o.input);
    std::istringstream in(text);
    const auto records = read_dataset(in);
    const auto report = run_experiment(records, cfg);

    auto manifest = make_manifest("run", to_json(cfg), cfg.seed, text);
    manifest.config["paper_mode"] = !cfg.cv.smote_inside_folds;
    fs::path base;
    if (!o.out.empty()) {
        base = resolve_output(o.out);
        auto json_path = base;
        json_path += ".json";
        manifest.sidecar = sidecar_path(json_path).filename().string();
        const auto doc = dump_json(report_json(report, manifest));
        write_text(json_path, doc);
        auto txt_path = base;
        txt_path += ".txt";
        write_text(txt_path, render_table(report));
        write_text(sidecar_path(json_path), dump_json(manifest_json(manifest, true)));
    }
    if (o.json_out) {
        std::cout << dump_json(report_json(report, manifest));
    } else {
        std::cout << render_table(report);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sigstream: path signatures of data streams and a classification pipeline"};
    app.set_version_flag("--version", std::string(SIGSTREAM_VERSION));
    app.require_subcommand(1);

    SigOptions sig_opts;
    auto* sig = app.add_subcommand("sig", "Truncated signature of one stream file");
    sig->add_option("input", sig_opts.input, "CSV stream or path file")->required()->check(CLI::ExistingFile);
    sig->add_option("--depth", sig_opts.depth, "Truncation depth")->required()->check(CLI::Range(1, kMaxDepth));
    sig->add_option("--embedding", sig_opts.embedding, "raw, axis, linear, lead-lag, missing-lift, delay")
        ->capture_default_str();
    sig->add_flag("--axis", sig_opts.axis, "Stairstep variant of the delay path");
    sig->add_flag("--time-augment", sig_opts.time_augment, "Lead-lag with a time coordinate");
    sig->add_flag("--json", sig_opts.json_out, "Emit one JSON object");
    sig->add_flag("--path", sig_opts.print_path, "Also print the embedded path");
    sig->add_option("--out", sig_opts.out, "Output file");

    SynthOptions synth_opts;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic two-group delay dataset");
    synth->add_option("--config", synth_opts.config, "JSON synth config")->check(CLI::ExistingFile);
    synth->add_option("--seed", synth_opts.seed, "Random seed");
    synth->add_option("--n0", synth_opts.n0, "Group 0 size");
    synth->add_option("--n1", synth_opts.n1, "Group 1 size");
    synth->add_option("--weeks", synth_opts.weeks, "Stream length");
    synth->add_option("--mean0", synth_opts.mean0, "Group 0 mean delay");
    synth->add_option("--mean1", synth_opts.mean1, "Group 1 mean delay");
    synth->add_option("--dispersion", synth_opts.dispersion, "Negative-binomial size");
    synth->add_option("--missing-prob", synth_opts.missing_prob, "Per-week missing probability");
    synth->add_option("--out", synth_opts.out, "Dataset CSV (stdout when absent)");

    FeaturizeOptions feat_opts;
    auto* feat = app.add_subcommand("featurize", "Signature feature matrix of a dataset");
    feat->add_option("input", feat_opts.input, "Dataset CSV")->required()->check(CLI::ExistingFile);
    feat->add_option("--depth", feat_opts.depth, "Truncation depth")->required()->check(CLI::Range(1, kMaxDepth));
    feat->add_option("--embedding", feat_opts.embedding, "Embedding kind")->capture_default_str();
    feat->add_flag("--axis", feat_opts.axis, "Stairstep variant of the delay path");
    feat->add_flag("--raw", feat_opts.raw, "Skip standardization");
    feat->add_option("--threads", feat_opts.threads, "Worker threads")->check(CLI::PositiveNumber);
    feat->add_option("--out", feat_opts.out, "Features CSV (stdout when absent)");

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Nested cross-validated classification report");
    run->add_option("input", run_opts.input, "Dataset CSV")->required()->check(CLI::ExistingFile);
    run->add_option("--config", run_opts.config, "JSON pipeline config")->check(CLI::ExistingFile);
    run->add_option("--seed", run_opts.seed, "Random seed");
    run->add_option("--depth,--depths", run_opts.depths, "Signature depths")->delimiter(',');
    run->add_option("--folds", run_opts.folds, "Outer folds");
    run->add_option("--inner-folds", run_opts.inner_folds, "Inner folds");
    run->add_option("--classifiers", run_opts.classifiers, "logistic,svm,knn")->delimiter(',');
    run->add_option("--embedding", run_opts.embedding, "Embedding kind");
    run->add_option("--threads", run_opts.threads, "Worker threads");
    run->add_flag("--paper-mode", run_opts.paper_mode, "Standardize and oversample before splitting");
    run->add_flag("--axis", run_opts.axis, "Stairstep variant of the delay path");
    run->add_flag("--json", run_opts.json_out, "Print the JSON report instead of the table");
    run->add_option("--out", run_opts.out, "Output prefix for .json, .txt and manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sig) return run_sig(sig_opts);
        if (*synth) return run_synth(synth_opts);
        if (*feat) return run_featurize(feat_opts);
        if (*run) return run_run(run_opts);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

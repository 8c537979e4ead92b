// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "sigstream/dataset_io.hpp"
#include "sigstream/embeddings.hpp"
#include "sigstream/metrics.hpp"
#include "sigstream/oversampling.hpp"
#include "sigstream/pipeline.hpp"
#include "sigstream/report.hpp"
#include "sigstream/signature.hpp"
#include "sigstream/synth.hpp"
#include "support.hpp"

using namespace sigstream;
using sigstream::testing::max_abs_diff;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool ok;
    std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Verdict()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
    std::cout << (v.ok ? "PASS" : "FAIL") << "  " << name << "  [" << v.detail << "; " << timing << "]"
              << std::endl;
    failures += v.ok ? 0 : 1;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// 200 seeded paths, dimension 1..4, 2..20 points.
std::vector<Path> corpus() {
    CounterRng rng(20240601, "acceptance-corpus");
    std::vector<Path> paths;
    for (int i = 0; i < 200; ++i) {
        const std::size_t dim = 1 + static_cast<std::size_t>(i % 4);
        const std::size_t points = 2 + rng.below(19);
        paths.push_back(sigstream::testing::random_path(rng, dim, points));
    }
    return paths;
}

Verdict identity_suite() {
    constexpr int depth = 4;
    const auto start = std::chrono::steady_clock::now();
    double chen = 0, tree = 0, reparam = 0, shuffle_rel = 0, scaling = 0;
    CounterRng rng(77, "acceptance-identities");
    std::map<std::pair<MultiIndex, MultiIndex>, ShuffleExpansion> shuffles;

    for (const auto& p : corpus()) {
        const std::size_t d = p.dimension();
        const auto s = signature(p, depth);
        const auto id = TruncatedSignature::identity(d, depth);

        for (std::size_t k = 1; k + 1 < p.size(); ++k) {
            const auto joined = chen_product(signature(p.slice(0, k), depth), signature(p.slice(k, p.size() - 1), depth));
            chen = std::max(chen, max_abs_diff(s, joined));
        }
        tree = std::max(tree, max_abs_diff(signature(p.concatenated(p.reversed()), depth), id));

        const std::size_t seg = rng.below(p.size() - 1);
        const double u = rng.uniform();
        std::vector<double> mid(d);
        for (std::size_t k = 0; k < d; ++k) mid[k] = p(seg, k) + u * (p(seg + 1, k) - p(seg, k));
        reparam = std::max(reparam, max_abs_diff(signature(p, 5), signature(p.with_inserted(seg, mid), 5)));

        const auto all = multi_indices(d, depth - 1);
        for (const auto& i : all) {
            for (const auto& j : all) {
                if (i.size() + j.size() > static_cast<std::size_t>(depth)) continue;
                auto it = shuffles.find({i, j});
                if (it == shuffles.end()) it = shuffles.emplace(std::make_pair(i, j), shuffle(i, j)).first;
                double rhs = 0.0;
                for (const auto& t : it->second.terms) rhs += static_cast<double>(t.multiplicity) * s.at(t.index);
                const double lhs = s.at(i) * s.at(j);
                shuffle_rel = std::max(shuffle_rel, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
            }
        }

        const double lambda = 0.5 + 2.0 * rng.uniform();
        std::vector<double> scaled(p.coordinates().begin(), p.coordinates().end());
        for (auto& v : scaled) v *= lambda;
        const auto t = signature(Path(d, scaled), depth);
        for (int k = 1; k <= depth; ++k) {
            const double f = std::pow(lambda, k);
            for (std::size_t n = 0; n < s.level(k).size(); ++n) {
                scaling = std::max(scaling, std::abs(t.level(k)[n] - f * s.level(k)[n]) / std::max(1.0, std::abs(t.level(k)[n])));
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = chen <= 1e-10 && tree <= 1e-10 && reparam <= 1e-12 && shuffle_rel <= 1e-9 &&
                    scaling <= 1e-10 && secs <= 60.0;
    return {ok, "200 paths; chen " + fmt(chen) + ", tree " + fmt(tree) + ", reparam " + fmt(reparam) +
                    ", shuffle(rel) " + fmt(shuffle_rel) + ", scaling(rel) " + fmt(scaling)};
}

Verdict oracle_equivalence() {
    double worst = 0.0;
    std::size_t compared = 0;
    for (const auto& p : corpus()) {
        const auto s = signature(p, 4);
        const auto indices = multi_indices(p.dimension(), 4);
        for (std::size_t i = 0; i < indices.size(); ++i) {
            worst = std::max(worst, std::abs(s.terms()[i] - signature_oracle(p, indices[i])));
            ++compared;
        }
    }
    return {worst <= 1e-9, std::to_string(compared) + " coefficients, max |diff| " + fmt(worst)};
}

Verdict missing_golden() {
    StreamRecord r;
    r.values = {1, 3, 0, 5, 3, 0, 0, 9, 3, 5};
    r.missing = {false, false, true, false, false, true, true, false, false, false};
    const std::vector<std::vector<double>> expected{{0, 1, 0}, {1, 3, 0}, {2, 3, 1}, {3, 5, 0}, {4, 3, 0},
                                                    {5, 3, 1}, {6, 3, 1}, {7, 9, 0}, {8, 3, 0}, {9, 5, 0}};
    const auto p = missing_lift(r);
    bool ok = p.size() == expected.size() && p.dimension() == 3;
    for (std::size_t i = 0; ok && i < p.size(); ++i) {
        ok = std::equal(expected[i].begin(), expected[i].end(), p.point(i).begin());
    }
    return {ok, "10 points, third point (" + format_double(p(2, 0)) + "," + format_double(p(2, 1)) + "," +
                    format_double(p(2, 2)) + ")"};
}

Verdict lead_lag_variation() {
    CounterRng rng(31, "acceptance-lead-lag");
    double worst = 0.0, worst_oracle = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(2 + rng.below(40));
        for (auto& v : x) v = 10.0 * rng.uniform() - 5.0;
        double qv = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i) qv += (x[i] - x[i - 1]) * (x[i] - x[i - 1]);
        const auto p = lead_lag(x);
        const double area = signed_area(signature(p, 2), 1, 2);
        const double oracle_area = 0.5 * (signature_oracle(p, {1, 2}) - signature_oracle(p, {2, 1}));
        worst = std::max(worst, std::abs(area - 0.5 * qv));
        worst_oracle = std::max(worst_oracle, std::abs(oracle_area - 0.5 * qv));
    }
    return {worst <= 1e-10 && worst_oracle <= 1e-10,
            "100 streams, max |area - QV/2| " + fmt(worst) + " (oracle " + fmt(worst_oracle) + ")"};
}

// Central 95% interval of Binomial(n, 1/2) as success fractions.
std::pair<double, double> binomial_band(std::size_t n) {
    std::vector<double> pmf(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        pmf[k] = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
    }
    double acc = 0.0;
    std::size_t lo = 0, hi = n;
    for (std::size_t k = 0; k <= n; ++k) {
        acc += pmf[k];
        if (acc >= 0.025) {
            lo = k;
            break;
        }
    }
    acc = 0.0;
    for (std::size_t k = n + 1; k-- > 0;) {
        acc += pmf[k];
        if (acc >= 0.025) {
            hi = k;
            break;
        }
    }
    return {static_cast<double>(lo) / n, static_cast<double>(hi) / n};
}

Verdict null_accuracy() {
    constexpr int seeds = 20;
    std::map<ClassifierKind, std::pair<std::size_t, std::size_t>> pooled;  // correct, total
    for (int s = 0; s < seeds; ++s) {
        SynthConfig sc;
        sc.n0 = 15;
        sc.n1 = 15;
        sc.mean0 = 3.0;
        sc.mean1 = 3.0;
        sc.missing_prob = 0.1;
        sc.seed = 1000 + static_cast<std::uint64_t>(s);
        PipelineConfig pc;
        pc.seed = sc.seed;
        pc.depths = {2};
        for (const auto& e : run_experiment(synth_generate(sc), pc).entries) {
            auto& [correct, total] = pooled[e.classifier];
            correct += e.metrics.tp + e.metrics.tn;
            total += e.evaluated_rows;
        }
    }
    bool ok = true;
    std::string detail;
    for (const auto& [kind, counts] : pooled) {
        const auto [lo, hi] = binomial_band(counts.second);
        const double acc = static_cast<double>(counts.first) / counts.second;
        ok = ok && acc >= lo && acc <= hi;
        detail += to_string(kind) + " " + fmt(acc) + " ";
    }
    const auto [lo, hi] = binomial_band(pooled.begin()->second.second);
    return {ok, "20 seeds, pooled accuracy " + detail + "in [" + fmt(lo) + ", " + fmt(hi) + "]"};
}

Verdict separable_accuracy() {
    double worst = 1.0;
    std::string detail;
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        SynthConfig sc;
        sc.seed = seed;
        sc.missing_prob = 0.1;
        PipelineConfig pc;
        pc.seed = seed;
        pc.depths = {2};
        for (const auto& e : run_experiment(synth_generate(sc), pc).entries) {
            worst = std::min(worst, e.metrics.accuracy);
        }
    }
    return {worst >= 0.85, "means 1.0 vs 6.0, n = 18/11, L = 2, 5 seeds x 3 classifiers, min accuracy " + fmt(worst)};
}

Verdict smote_arithmetic() {
    SynthConfig sc;
    sc.seed = 2;
    const auto f = featurize(synth_generate(sc), EmbeddingConfig{}, 2);
    OversampleOptions opts;
    opts.adasyn = true;
    opts.seed = 2;
    const auto b = balance(f.matrix, opts);
    const bool ok = f.matrix.count_label(0) == 18 && f.matrix.count_label(1) == 11 && b.synthetic == 7 &&
                    b.matrix.count_label(0) == 18 && b.matrix.count_label(1) == 18;
    return {ok, "18/11 -> " + std::to_string(b.synthetic) + " synthetic, " +
                    std::to_string(b.matrix.count_label(0)) + "/" + std::to_string(b.matrix.count_label(1))};
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path work_dir() {
    return fs::path(SIGSTREAM_TEST_TMP) / "acceptance";
}

Verdict determinism() {
    const auto root = work_dir();
    fs::remove_all(root);
    for (const char* sub : {"a", "b"}) fs::create_directories(root / sub);
    const std::string cli = std::string("\"") + SIGSTREAM_CLI + "\"";
    int rc = 0;
    for (const auto& [sub, threads] : {std::pair{"a", 1}, std::pair{"b", 4}}) {
        const auto dir = root / sub;
        rc |= shell(cli + " synth --seed 7 --missing-prob 0.1 --out \"" + (dir / "d.csv").string() + "\" 2>/dev/null");
        rc |= shell(cli + " run \"" + (dir / "d.csv").string() + "\" --seed 7 --threads " + std::to_string(threads) +
                    " --out \"" + (dir / "report").string() + "\" > /dev/null");
    }
    if (rc != 0) return {false, "cli invocation failed"};
    const auto a = slurp(root / "a" / "report.json");
    const auto b = slurp(root / "b" / "report.json");
    const bool data_same = slurp(root / "a" / "d.csv") == slurp(root / "b" / "d.csv");
    return {!a.empty() && a == b && data_same,
            "synth+run twice (threads 1 vs 4): datasets " + std::string(data_same ? "identical" : "differ") +
                ", report.json " + std::to_string(a.size()) + " bytes " + (a == b ? "identical" : "differ")};
}

Verdict report_shape() {
    const auto root = work_dir() / "a";
    const auto doc = nlohmann::json::parse(slurp(root / "report.json"));
    const auto table = slurp(root / "report.txt");
    const auto& entries = doc.at("entries");
    bool ok = entries.size() == 9;
    std::map<std::string, std::vector<int>> depths;
    const std::map<int, std::size_t> totals{{2, 12}, {3, 39}, {4, 120}};
    for (const auto& e : entries) {
        depths[e.at("classifier").get<std::string>()].push_back(e.at("depth").get<int>());
        ok = ok && e.at("metrics").size() == 6;
        for (const char* m : {"sensitivity", "specificity", "accuracy", "f1", "auc", "kappa"}) {
            ok = ok && e.at("metrics").contains(m);
        }
        ok = ok && e.at("features").at("total").get<std::size_t>() == totals.at(e.at("depth").get<int>());
        ok = ok && e.at("features").at("selected_count").get<std::size_t>() == e.at("features").at("selected").size();
    }
    ok = ok && depths.size() == 3;
    for (const auto& [kind, ds] : depths) ok = ok && ds == std::vector<int>{2, 3, 4};
    for (const char* row : {"Signature depth", "number of features", "sensitivity", "specificity", "accuracy",
                            "f1-score", "AUC", "Cohen's kappa"}) {
        ok = ok && table.find(row) != std::string::npos;
    }
    ok = ok && doc.at("notes").size() == 1;
    return {ok, std::to_string(entries.size()) + " entries (3 classifiers x 3 depths), 6 metrics each, totals 12/39/120"};
}

Verdict metrics_suite() {
    const std::vector<int> truth{1, 1, 1, 0, 0, 0};
    const std::vector<int> pred{1, 1, 0, 0, 0, 1};
    const std::vector<double> scores{0.9, 0.8, 0.4, 0.1, 0.2, 0.7};
    const auto m = compute_metrics(truth, pred, scores);
    const bool kappa_ok = std::abs(m.kappa - 1.0 / 3.0) <= 1e-15 && std::abs(m.accuracy - 2.0 / 3.0) <= 1e-15;

    const std::vector<double> ranked{0.9, 0.8, 0.7, 0.1, 0.2, 0.3};
    const auto perfect = compute_metrics(truth, truth, ranked);
    bool perfect_ok = true;
    for (double v : {perfect.sensitivity, perfect.specificity, perfect.accuracy, perfect.f1, perfect.auc, perfect.kappa}) {
        perfect_ok = perfect_ok && v == 1.0;
    }
    const std::vector<double> tied(6, 0.25);
    const double auc = roc_auc(truth, tied);
    return {kappa_ok && perfect_ok && auc == 0.5,
            "kappa " + fmt(m.kappa) + ", perfect all 1.0: " + (perfect_ok ? "yes" : "no") + ", tied AUC " + fmt(auc)};
}

}  // namespace

int main() {
    report("signature identity suite", identity_suite);
    report("oracle equivalence", oracle_equivalence);
    report("missing-data golden path", missing_golden);
    report("lead-lag area equals half the quadratic variation", lead_lag_variation);
    report("null synthetic data: accuracy within binomial band", null_accuracy);
    report("separated synthetic data: accuracy >= 0.85 for all classifiers", separable_accuracy);
    report("SMOTE arithmetic 18/11 -> 18/18", smote_arithmetic);
    report("determinism of synth+run, serial and parallel", determinism);
    report("report layout: classifiers x depths x metrics", report_shape);
    report("metrics unit cases", metrics_suite);
    std::cout << (failures == 0 ? "all acceptance checks passed" : std::to_string(failures) + " acceptance check(s) failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}

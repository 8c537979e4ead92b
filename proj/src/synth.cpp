#include "sigstream/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "sigstream/errors.hpp"
#include "sigstream/rng.hpp"

namespace sigstream {

double missing_mask_acceptance(double p, std::size_t weeks, std::size_t max_run) {
    if (weeks == 0) return 1.0;
    // state[r] = probability of a valid prefix ending in a missing run of length r
    std::vector<double> state(max_run + 1, 0.0);
    state[0] = 1.0 - p;  // first week observed
    for (std::size_t w = 1; w < weeks; ++w) {
        std::vector<double> next(max_run + 1, 0.0);
        double total = 0.0;
        for (double s : state) total += s;
        next[0] = total * (1.0 - p);
        for (std::size_t r = 1; r <= max_run; ++r) next[r] = state[r - 1] * p;
        state = std::move(next);
    }
    double total = 0.0;
    for (double s : state) total += s;
    return total;
}

void validate(const SynthConfig& c) {
    if (c.n0 == 0 || c.n1 == 0) throw ConfigError("synthetic groups must be non-empty");
    if (c.weeks < 2) throw ConfigError("synthetic streams need at least 2 weeks");
    if (!(c.mean0 >= 0.0) || !(c.mean1 >= 0.0)) throw ConfigError("delay means must be >= 0");
    if (!(c.dispersion > 0.0)) throw ConfigError("dispersion must be positive");
    if (!(c.missing_prob >= 0.0 && c.missing_prob < 1.0)) {
        throw ConfigError("missing probability must lie in [0, 1)");
    }
    const double acceptance = missing_mask_acceptance(c.missing_prob, c.weeks, c.max_consecutive_missing);
    if (acceptance < 1e-6) {
        throw ConfigError("missing probability " + std::to_string(c.missing_prob) +
                          " is too high to keep runs of missing weeks within " +
                          std::to_string(c.max_consecutive_missing) + " over " +
                          std::to_string(c.weeks) + " weeks");
    }
}

namespace {

double draw_delay(CounterRng& rng, double mean, double dispersion) {
    if (mean == 0.0) return 0.0;
    std::gamma_distribution<double> rate(dispersion, mean / dispersion);
    std::poisson_distribution<long> count(rate(rng));
    return static_cast<double>(count(rng));
}

std::vector<bool> draw_mask(CounterRng& rng, const SynthConfig& c) {
    std::vector<bool> mask(c.weeks, false);
    if (c.missing_prob == 0.0) return mask;
    while (true) {
        for (std::size_t w = 0; w < c.weeks; ++w) mask[w] = rng.uniform() < c.missing_prob;
        std::size_t run = 0;
        bool ok = !mask[0];
        for (std::size_t w = 0; ok && w < c.weeks; ++w) {
            run = mask[w] ? run + 1 : 0;
            ok = run <= c.max_consecutive_missing;
        }
        if (ok) return mask;
    }
}

}  // namespace

std::vector<StreamRecord> synth_generate(const SynthConfig& config) {
    validate(config);
    std::vector<StreamRecord> out;
    out.reserve(config.n0 + config.n1);
    for (int group : {0, 1}) {
        const std::size_t count = group == 0 ? config.n0 : config.n1;
        const double mean = group == 0 ? config.mean0 : config.mean1;
        for (std::size_t s = 0; s < count; ++s) {
            const auto subject_id = static_cast<std::uint64_t>(group) << 32 | s;
            CounterRng delay_rng(config.seed, "synth-delay", subject_id);
            CounterRng mask_rng(config.seed, "synth-mask", subject_id);

            char name[32];
            std::snprintf(name, sizeof name, "g%d-%03zu", group, s + 1);
            StreamRecord r;
            r.subject = name;
            r.label = group;
            r.missing = draw_mask(mask_rng, config);
            r.values.resize(config.weeks);
            r.times = std::vector<double>(config.weeks);
            for (std::size_t w = 0; w < config.weeks; ++w) {
                const double delay = draw_delay(delay_rng, mean, config.dispersion);
                r.values[w] = r.missing[w] ? 0.0 : delay;
                (*r.times)[w] = static_cast<double>(w + 1);
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace sigstream

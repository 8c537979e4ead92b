#pragma once

#include <cstdint>
#include <vector>

#include "sigstream/embeddings.hpp"

namespace sigstream {

/// Two-group weekly delay generator standing in for trial data.
struct SynthConfig {
    std::size_t n0 = 18;
    std::size_t n1 = 11;
    std::size_t weeks = 13;
    double mean0 = 1.0;
    double mean1 = 6.0;
    /// Negative-binomial size parameter; variance is mean + mean^2 / dispersion.
    double dispersion = 2.0;
    double missing_prob = 0.0;
    /// Longest allowed run of missing weeks.
    std::size_t max_consecutive_missing = 2;
    std::uint64_t seed = 0;
};

/// Probability that an i.i.d. Bernoulli(p) mask of length `weeks` starts with an
/// observed week and has no missing run longer than `max_run`.
double missing_mask_acceptance(double p, std::size_t weeks, std::size_t max_run);

/// Throws ConfigError for empty groups, fewer than 2 weeks, negative means,
/// non-positive dispersion, p outside [0, 1), or a missing constraint that
/// rejection sampling could not meet (acceptance below 1e-6).
void validate(const SynthConfig& config);

/// Subjects "g0-001".. then "g1-001".., weeks 1..N as times. Delays are
/// gamma-Poisson (negative binomial) draws; the missing mask is sampled i.i.d.
/// and redrawn until it satisfies the run constraint. Missing entries hold 0.
std::vector<StreamRecord> synth_generate(const SynthConfig& config);

}  // namespace sigstream

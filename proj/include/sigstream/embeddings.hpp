#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigstream/signature.hpp"

namespace sigstream {

/// One subject's raw stream. `values[i]` is ignored when `missing[i]` is set.
struct StreamRecord {
    std::string subject;
    std::vector<double> values;
    std::vector<bool> missing;
    std::optional<std::vector<double>> times;
    std::optional<int> label;

    std::size_t observed_count() const;
    /// Longest run of consecutive missing entries.
    std::size_t longest_missing_run() const;
    bool operator==(const StreamRecord&) const = default;
};

/// Throws InvalidInput on mismatched lengths, non-increasing times, a missing
/// first value, or non-finite observed values.
void validate(const StreamRecord& record);

struct TimeValue {
    double t;
    double x;
};

enum class EmbeddingKind { Raw, Axis, Linear, LeadLag, MissingLift, DelayPipeline };

struct EmbeddingConfig {
    EmbeddingKind kind = EmbeddingKind::DelayPipeline;
    /// Lead-lag only: prepend a lead-expanded time coordinate.
    bool time_augment = false;
    /// Use 0..N-1 (1..N for delay paths) instead of the record's own times.
    bool integer_time = true;
    /// Stairstep variant of the delay path: time moves before the lead value.
    bool axis = false;
};

std::string to_string(EmbeddingKind kind);
/// Accepts raw, axis, linear, lead-lag, missing-lift, delay.
EmbeddingKind parse_embedding_kind(const std::string& name);

/// Stairstep through (t, x) pairs, time first then value: 2n-1 points.
Path axis_path(std::span<const TimeValue> pairs);

/// The pairs themselves as a 2-d path.
Path linear_path(std::span<const TimeValue> pairs);

/// 2N+1 points for x_0..x_N: point 2n = (x_n, x_n), point 2n+1 = (x_{n+1}, x_n).
/// Coordinate 1 is the lead stream, coordinate 2 the lag stream.
Path lead_lag(std::span<const double> values);

/// (t, y, r) per entry: y carries the last observed value forward over gaps and
/// r flags the gap. Time is 0..N-1 unless the record supplies times.
Path missing_lift(const StreamRecord& record);

/// Lead-lag of the delays with a lead-expanded clock t = 1..N in front:
/// points (t_lead, d_lead, d_lag). With `axis`, every lead step is split so the
/// clock advances before the lead value.
Path delay_path(std::span<const double> delays, bool axis = false);

/// Values with gaps filled by the last observation.
std::vector<double> forward_filled(const StreamRecord& record);

/// Dispatches on `config.kind`. Axis and linear embeddings drop missing entries;
/// lead-lag and delay embeddings run on the forward-filled stream.
Path embed(const StreamRecord& record, const EmbeddingConfig& config);

/// Dimension of the path `embed` produces for this config.
std::size_t embedding_dimension(const EmbeddingConfig& config);

}  // namespace sigstream

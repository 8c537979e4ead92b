#include "sigstream/embeddings.hpp"

#include <algorithm>
#include <cmath>

namespace sigstream {

std::size_t StreamRecord::observed_count() const {
    return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), false));
}

std::size_t StreamRecord::longest_missing_run() const {
    std::size_t longest = 0;
    std::size_t run = 0;
    for (bool m : missing) {
        run = m ? run + 1 : 0;
        longest = std::max(longest, run);
    }
    return longest;
}

void validate(const StreamRecord& record) {
    const std::string who = record.subject.empty() ? "record" : "record '" + record.subject + "'";
    if (record.values.size() != record.missing.size()) {
        throw InvalidInput(who + ": values and missing mask differ in length");
    }
    if (record.values.empty()) throw InvalidInput(who + ": empty stream");
    if (record.observed_count() == 0) throw InvalidInput(who + ": every value is missing");
    if (record.missing.front()) {
        throw InvalidInput(who + ": first value is missing; nothing to carry forward");
    }
    for (std::size_t i = 0; i < record.values.size(); ++i) {
        if (!record.missing[i] && !std::isfinite(record.values[i])) {
            throw InvalidInput(who + ": value " + std::to_string(i) + " is not finite");
        }
    }
    if (record.times) {
        const auto& t = *record.times;
        if (t.size() != record.values.size()) {
            throw InvalidInput(who + ": times and values differ in length");
        }
        for (std::size_t i = 1; i < t.size(); ++i) {
            if (!(t[i] > t[i - 1])) {
                throw InvalidInput(who + ": times are not strictly increasing at position " +
                                   std::to_string(i));
            }
        }
    }
}

std::string to_string(EmbeddingKind kind) {
    switch (kind) {
        case EmbeddingKind::Raw: return "raw";
        case EmbeddingKind::Axis: return "axis";
        case EmbeddingKind::Linear: return "linear";
        case EmbeddingKind::LeadLag: return "lead-lag";
        case EmbeddingKind::MissingLift: return "missing-lift";
        case EmbeddingKind::DelayPipeline: return "delay";
    }
    return "unknown";
}

EmbeddingKind parse_embedding_kind(const std::string& name) {
    for (auto kind : {EmbeddingKind::Raw, EmbeddingKind::Axis, EmbeddingKind::Linear,
                      EmbeddingKind::LeadLag, EmbeddingKind::MissingLift,
                      EmbeddingKind::DelayPipeline}) {
        if (to_string(kind) == name) return kind;
    }
    if (name == "delay-pipeline") return EmbeddingKind::DelayPipeline;
    throw InvalidInput("unknown embedding '" + name + "'");
}

namespace {
void check_times(std::span<const TimeValue> pairs) {
    if (pairs.size() < 2) throw InvalidInput("need at least 2 (t, x) pairs");
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        if (!(pairs[i].t > pairs[i - 1].t)) {
            throw InvalidInput("invalid times: t is not strictly increasing at position " +
                               std::to_string(i));
        }
    }
}
}  // namespace

Path axis_path(std::span<const TimeValue> pairs) {
    check_times(pairs);
    std::vector<double> out;
    out.reserve((2 * pairs.size() - 1) * 2);
    out.insert(out.end(), {pairs[0].t, pairs[0].x});
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        out.insert(out.end(), {pairs[i].t, pairs[i - 1].x});
        out.insert(out.end(), {pairs[i].t, pairs[i].x});
    }
    return Path(2, std::move(out));
}

Path linear_path(std::span<const TimeValue> pairs) {
    check_times(pairs);
    std::vector<double> out;
    out.reserve(pairs.size() * 2);
    for (const auto& p : pairs) out.insert(out.end(), {p.t, p.x});
    return Path(2, std::move(out));
}

Path lead_lag(std::span<const double> values) {
    if (values.size() < 2) throw InvalidInput("lead-lag needs at least 2 values");
    std::vector<double> out;
    out.reserve((2 * values.size() - 1) * 2);
    out.insert(out.end(), {values[0], values[0]});
    for (std::size_t n = 1; n < values.size(); ++n) {
        out.insert(out.end(), {values[n], values[n - 1]});
        out.insert(out.end(), {values[n], values[n]});
    }
    return Path(2, std::move(out));
}

namespace {
// Lead-lag with a clock in front. clock[n] is the time of value n.
Path time_augmented_lead_lag(std::span<const double> values, std::span<const double> clock,
                             bool axis) {
    if (values.size() < 2) throw InvalidInput("lead-lag needs at least 2 values");
    std::vector<double> out;
    out.insert(out.end(), {clock[0], values[0], values[0]});
    for (std::size_t n = 1; n < values.size(); ++n) {
        if (axis) out.insert(out.end(), {clock[n], values[n - 1], values[n - 1]});
        out.insert(out.end(), {clock[n], values[n], values[n - 1]});
        out.insert(out.end(), {clock[n], values[n], values[n]});
    }
    return Path(3, std::move(out));
}

std::vector<double> integer_clock(std::size_t n, double start) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = start + static_cast<double>(i);
    return t;
}
}  // namespace

Path delay_path(std::span<const double> delays, bool axis) {
    if (delays.size() < 2) throw InvalidInput("delay path needs at least 2 delays");
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (!std::isfinite(delays[i]) || delays[i] < 0) {
            throw InvalidInput("delay " + std::to_string(i) + " is negative or not finite");
        }
    }
    const auto clock = integer_clock(delays.size(), 1.0);
    return time_augmented_lead_lag(delays, clock, axis);
}

std::vector<double> forward_filled(const StreamRecord& record) {
    validate(record);
    std::vector<double> out(record.values.size());
    double last = record.values[0];
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!record.missing[i]) last = record.values[i];
        out[i] = last;
    }
    return out;
}

Path missing_lift(const StreamRecord& record) {
    const auto filled = forward_filled(record);
    const auto clock = record.times ? *record.times : integer_clock(filled.size(), 0.0);
    std::vector<double> out;
    out.reserve(filled.size() * 3);
    for (std::size_t j = 0; j < filled.size(); ++j) {
        out.insert(out.end(), {clock[j], filled[j], record.missing[j] ? 1.0 : 0.0});
    }
    return Path(3, std::move(out));
}

std::size_t embedding_dimension(const EmbeddingConfig& config) {
    switch (config.kind) {
        case EmbeddingKind::Raw: return 1;
        case EmbeddingKind::Axis:
        case EmbeddingKind::Linear: return 2;
        case EmbeddingKind::LeadLag: return config.time_augment ? 3 : 2;
        case EmbeddingKind::MissingLift:
        case EmbeddingKind::DelayPipeline: return 3;
    }
    return 0;
}

Path embed(const StreamRecord& record, const EmbeddingConfig& config) {
    validate(record);
    switch (config.kind) {
        case EmbeddingKind::Raw: {
            std::vector<double> observed;
            for (std::size_t i = 0; i < record.values.size(); ++i) {
                if (!record.missing[i]) observed.push_back(record.values[i]);
            }
            return Path(1, std::move(observed));
        }
        case EmbeddingKind::Axis:
        case EmbeddingKind::Linear: {
            std::vector<TimeValue> pairs;
            for (std::size_t i = 0; i < record.values.size(); ++i) {
                if (record.missing[i]) continue;
                const double t = (config.integer_time || !record.times)
                                     ? static_cast<double>(i)
                                     : (*record.times)[i];
                pairs.push_back({t, record.values[i]});
            }
            return config.kind == EmbeddingKind::Axis ? axis_path(pairs) : linear_path(pairs);
        }
        case EmbeddingKind::LeadLag: {
            const auto filled = forward_filled(record);
            if (!config.time_augment) return lead_lag(filled);
            const auto clock = (config.integer_time || !record.times)
                                   ? integer_clock(filled.size(), 0.0)
                                   : *record.times;
            return time_augmented_lead_lag(filled, clock, config.axis);
        }
        case EmbeddingKind::MissingLift: {
            if (config.integer_time && record.times) {
                auto untimed = record;
                untimed.times.reset();
                return missing_lift(untimed);
            }
            return missing_lift(record);
        }
        case EmbeddingKind::DelayPipeline:
            return delay_path(forward_filled(record), config.axis);
    }
    throw InvalidInput("unknown embedding kind");
}

}  // namespace sigstream

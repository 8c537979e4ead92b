#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "sigstream/pipeline.hpp"

namespace sigstream {

inline constexpr int kReportSchemaVersion = 1;

/// Attached to every report: the feature totals are the full signature term
/// counts, which published tables built with unstated pruning may not match.
extern const char* const kFeatureCountNote;

/// Provenance of one run. Everything except `created_utc` is deterministic and
/// goes into the report; the timestamp lives only in the sidecar manifest file.
struct RunManifest {
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string input_digest;  // "fnv1a64:<hex>"
    std::string tool_version;
    std::string command;
    std::string sidecar;  // file name of the full manifest, if any
    std::string created_utc;
};

std::string content_digest(std::string_view bytes);

nlohmann::json manifest_json(const RunManifest& manifest, bool with_timestamp);

nlohmann::json report_json(const ClassificationReport& report, const RunManifest& manifest);

/// Fixed-layout text: one column per (classifier, depth), rows for the feature
/// counts and the six metrics.
std::string render_table(const ClassificationReport& report);

/// Serializes with sorted keys, two-space indent, and every floating-point
/// number printed with 17 significant digits; NaN becomes null.
std::string dump_json(const nlohmann::json& doc);

}  // namespace sigstream

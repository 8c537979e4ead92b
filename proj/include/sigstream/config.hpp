#pragma once

#include <json.hpp>

#include "sigstream/pipeline.hpp"
#include "sigstream/synth.hpp"

namespace sigstream {

/// Config documents are JSON objects; unknown keys and wrong types raise
/// ConfigError with a JSON pointer to the offending value, e.g.
/// "/cv/outer_folds: expected an integer >= 2".
SynthConfig parse_synth_config(const nlohmann::json& doc, SynthConfig base = {});
nlohmann::json to_json(const SynthConfig& config);

/// Keys: depths, embedding {kind, axis}, cv {outer_folds, inner_folds,
/// smote_inside_folds, oversample, adasyn, smote_k, selection {enabled, rho,
/// steps, folds}}, classifiers, seed, threads, max_consecutive_missing.
PipelineConfig parse_pipeline_config(const nlohmann::json& doc, PipelineConfig base = {});
nlohmann::json to_json(const PipelineConfig& config);

}  // namespace sigstream

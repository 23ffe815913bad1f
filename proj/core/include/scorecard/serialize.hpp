#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "scorecard/categorize.hpp"
#include "scorecard/evalmetrics.hpp"
#include "scorecard/pipeline.hpp"
#include "scorecard/rebalance.hpp"
#include "scorecard/scoring.hpp"

namespace scorecard {

using Json = nlohmann::json;

// Missing keys keep their defaults; unknown keys are rejected. NaN reals are
// written as null.

void to_json(Json& j, const GanConfig& v);
void from_json(const Json& j, GanConfig& v);
void to_json(Json& j, const RfConfig& v);
void from_json(const Json& j, RfConfig& v);
void to_json(Json& j, const LogisticOptions& v);
void from_json(const Json& j, LogisticOptions& v);
void to_json(Json& j, const ScoreConfig& v);
void from_json(const Json& j, ScoreConfig& v);
void to_json(Json& j, const BootstrapOptions& v);
void from_json(const Json& j, BootstrapOptions& v);
void to_json(Json& j, const PipelineConfig& v);
void from_json(const Json& j, PipelineConfig& v);

void to_json(Json& j, const RebalancePlan& v);
void from_json(const Json& j, RebalancePlan& v);
void to_json(Json& j, const MethodSpec& v);
void from_json(const Json& j, MethodSpec& v);
void to_json(Json& j, const BlockACell& v);
void from_json(const Json& j, BlockACell& v);
void to_json(Json& j, const WeightCell& v);
void from_json(const Json& j, WeightCell& v);
void to_json(Json& j, const RankedVariable& v);
void from_json(const Json& j, RankedVariable& v);
void to_json(Json& j, const ParsimonyPoint& v);
void from_json(const Json& j, ParsimonyPoint& v);

void to_json(Json& j, const VariableCuts& v);
void from_json(const Json& j, VariableCuts& v);
void to_json(Json& j, const CutoffTable& v);
void from_json(const Json& j, CutoffTable& v);
void to_json(Json& j, const VariablePoints& v);
void from_json(const Json& j, VariablePoints& v);
void to_json(Json& j, const ScoreTable& v);
void from_json(const Json& j, ScoreTable& v);
void to_json(Json& j, const Scorecard& v);
void from_json(const Json& j, Scorecard& v);

void to_json(Json& j, const Estimate& v);
void from_json(const Json& j, Estimate& v);
void to_json(Json& j, const MetricReport& v);
void from_json(const Json& j, MetricReport& v);

void to_json(Json& j, const PipelineRecord& v);
void from_json(const Json& j, PipelineRecord& v);

/// Parses a value, reporting malformed input as ValidationError.
template <class T>
T parse_json(const Json& j, std::string_view what);

/// Two-space indented text with a trailing newline.
std::string dump_json(const Json& j);

/// FNV-1a of the canonical JSON form of the configuration.
std::string config_hash(const PipelineConfig& cfg);

}  // namespace scorecard

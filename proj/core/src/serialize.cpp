#include "scorecard/serialize.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "scorecard/error.hpp"
#include "scorecard/hash.hpp"

namespace scorecard {

namespace {

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                std::string_view what) {
  if (!j.is_object()) throw ValidationError(fmt::format("{} must be a JSON object", what));
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto key : allowed) known = known || key == item.key();
    if (!known) throw ValidationError(fmt::format("unknown key '{}' in {}", item.key(), what));
  }
}

template <class T>
void read(const Json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it != j.end() && !it->is_null()) out = it->template get<T>();
}

Json real(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

double read_real(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::numeric_limits<double>::quiet_NaN();
  return it->get<double>();
}

std::string_view kind_name(FeatureKind k) {
  return k == FeatureKind::kCategorical ? "categorical" : "continuous";
}

FeatureKind parse_kind(const std::string& s) {
  if (s == "categorical") return FeatureKind::kCategorical;
  if (s == "continuous") return FeatureKind::kContinuous;
  throw ValidationError(fmt::format("unknown variable kind '{}'", s));
}

}  // namespace

void to_json(Json& j, const GanConfig& v) {
  j = Json{{"epochs", v.epochs},           {"noise_dim", v.noise_dim},
           {"hidden_units", v.hidden_units}, {"batch_size", v.batch_size},
           {"learning_rate", v.learning_rate}, {"momentum", v.momentum}};
}

void from_json(const Json& j, GanConfig& v) {
  check_keys(j,
             {"epochs", "noise_dim", "hidden_units", "batch_size", "learning_rate", "momentum"},
             "gan");
  read(j, "epochs", v.epochs);
  read(j, "noise_dim", v.noise_dim);
  read(j, "hidden_units", v.hidden_units);
  read(j, "batch_size", v.batch_size);
  read(j, "learning_rate", v.learning_rate);
  read(j, "momentum", v.momentum);
}

void to_json(Json& j, const RfConfig& v) {
  j = Json{{"n_trees", v.n_trees}, {"mtry", v.mtry},         {"min_leaf", v.min_leaf},
           {"max_bins", v.max_bins}, {"bootstrap", v.bootstrap}};
  j["max_depth"] = v.max_depth ? Json(*v.max_depth) : Json(nullptr);
}

void from_json(const Json& j, RfConfig& v) {
  check_keys(j, {"n_trees", "mtry", "min_leaf", "max_depth", "max_bins", "bootstrap"}, "rf");
  read(j, "n_trees", v.n_trees);
  read(j, "mtry", v.mtry);
  read(j, "min_leaf", v.min_leaf);
  read(j, "max_bins", v.max_bins);
  read(j, "bootstrap", v.bootstrap);
  if (j.contains("max_depth") && !j["max_depth"].is_null())
    v.max_depth = j["max_depth"].get<int>();
}

void to_json(Json& j, const LogisticOptions& v) {
  j = Json{{"max_iter", v.max_iter},
           {"tol", v.tol},
           {"ridge", v.ridge},
           {"fallback_ridge", v.fallback_ridge},
           {"separation_threshold", v.separation_threshold}};
}

void from_json(const Json& j, LogisticOptions& v) {
  check_keys(j, {"max_iter", "tol", "ridge", "fallback_ridge", "separation_threshold"},
             "logistic");
  read(j, "max_iter", v.max_iter);
  read(j, "tol", v.tol);
  read(j, "ridge", v.ridge);
  read(j, "fallback_ridge", v.fallback_ridge);
  read(j, "separation_threshold", v.separation_threshold);
}

void to_json(Json& j, const ScoreConfig& v) {
  j = Json{{"quantiles", v.quantiles},
           {"max_total", v.max_total},
           {"sample_weight", v.sample_weight},
           {"logistic", v.lr}};
}

void from_json(const Json& j, ScoreConfig& v) {
  check_keys(j, {"quantiles", "max_total", "sample_weight", "logistic"}, "score");
  read(j, "quantiles", v.quantiles);
  read(j, "max_total", v.max_total);
  read(j, "sample_weight", v.sample_weight);
  read(j, "logistic", v.lr);
}

void to_json(Json& j, const BootstrapOptions& v) {
  j = Json{{"replicates", v.replicates}, {"level", v.level}, {"seed", v.seed}};
}

void from_json(const Json& j, BootstrapOptions& v) {
  check_keys(j, {"replicates", "level", "seed"}, "bootstrap");
  read(j, "replicates", v.replicates);
  read(j, "level", v.level);
  read(j, "seed", v.seed);
}

void to_json(Json& j, const PipelineConfig& v) {
  std::vector<std::string> methods;
  for (auto m : v.methods) methods.emplace_back(method_name(m));
  j = Json{{"methods", methods},
           {"rate_grid", v.rate_grid},
           {"gan_epochs", v.gan_epochs},
           {"include_control", v.include_control},
           {"weight_search", v.weight_search},
           {"weight_step", v.weight_step},
           {"max_m", v.max_m},
           {"smote_k", v.rebalance.smote.k_neighbors},
           {"gan", v.rebalance.gan},
           {"rf", v.rf},
           {"score", v.score},
           {"bootstrap", v.bootstrap},
           {"seed", v.seed}};
}

void from_json(const Json& j, PipelineConfig& v) {
  check_keys(j,
             {"methods", "rate_grid", "gan_epochs", "include_control", "weight_search",
              "weight_step", "max_m", "smote_k", "gan", "rf", "score", "bootstrap", "seed"},
             "pipeline");
  if (j.contains("methods")) {
    v.methods.clear();
    for (const auto& name : j["methods"]) v.methods.push_back(parse_method(name.get<std::string>()));
  }
  read(j, "rate_grid", v.rate_grid);
  read(j, "gan_epochs", v.gan_epochs);
  read(j, "include_control", v.include_control);
  read(j, "weight_search", v.weight_search);
  read(j, "weight_step", v.weight_step);
  read(j, "max_m", v.max_m);
  read(j, "smote_k", v.rebalance.smote.k_neighbors);
  read(j, "gan", v.rebalance.gan);
  read(j, "rf", v.rf);
  read(j, "score", v.score);
  read(j, "bootstrap", v.bootstrap);
  read(j, "seed", v.seed);
}

void to_json(Json& j, const RebalancePlan& v) {
  j = Json{{"method", method_name(v.method)},
           {"source_rate", v.source_rate},
           {"target_rate", v.target_rate},
           {"n_pos", v.n_pos},
           {"n_neg", v.n_neg},
           {"target_pos", v.target_pos},
           {"target_neg", v.target_neg},
           {"alpha", v.alpha},
           {"remainder", v.remainder},
           {"intermediate_rate", v.intermediate_rate},
           {"intermediate_pos", v.intermediate_pos}};
}

void from_json(const Json& j, RebalancePlan& v) {
  v.method = parse_method(j.at("method").get<std::string>());
  v.source_rate = j.at("source_rate").get<double>();
  v.target_rate = j.at("target_rate").get<double>();
  v.n_pos = j.at("n_pos").get<long long>();
  v.n_neg = j.at("n_neg").get<long long>();
  v.target_pos = j.at("target_pos").get<long long>();
  v.target_neg = j.at("target_neg").get<long long>();
  v.alpha = j.at("alpha").get<long long>();
  v.remainder = j.at("remainder").get<long long>();
  v.intermediate_rate = j.at("intermediate_rate").get<double>();
  v.intermediate_pos = j.at("intermediate_pos").get<long long>();
}

void to_json(Json& j, const MethodSpec& v) {
  j = Json{{"method", method_name(v.method)}, {"gan_epochs", v.gan_epochs}};
}

void from_json(const Json& j, MethodSpec& v) {
  v.method = parse_method(j.at("method").get<std::string>());
  v.gan_epochs = j.at("gan_epochs").get<int>();
}

void to_json(Json& j, const BlockACell& v) {
  j = Json{{"label", v.label()},
           {"rate", v.rate},
           {"seed", v.seed},
           {"n_pos", v.n_pos},
           {"n_neg", v.n_neg},
           {"dataset_hash", v.dataset_hash},
           {"auc", real(v.auc)},
           {"error", v.error}};
  j["method"] = v.method ? Json(*v.method) : Json(nullptr);
  j["plan"] = v.plan ? Json(*v.plan) : Json(nullptr);
}

void from_json(const Json& j, BlockACell& v) {
  if (!j.at("method").is_null()) v.method = j["method"].get<MethodSpec>();
  if (!j.at("plan").is_null()) v.plan = j["plan"].get<RebalancePlan>();
  v.rate = j.at("rate").get<double>();
  v.seed = j.at("seed").get<std::uint64_t>();
  v.n_pos = j.at("n_pos").get<std::size_t>();
  v.n_neg = j.at("n_neg").get<std::size_t>();
  v.dataset_hash = j.at("dataset_hash").get<std::string>();
  v.auc = read_real(j, "auc");
  v.error = j.at("error").get<std::string>();
}

void to_json(Json& j, const WeightCell& v) { j = Json{{"weight", v.weight}, {"auc", real(v.auc)}}; }
void from_json(const Json& j, WeightCell& v) {
  v.weight = j.at("weight").get<double>();
  v.auc = read_real(j, "auc");
}

void to_json(Json& j, const RankedVariable& v) {
  j = Json{{"name", v.name}, {"importance", v.importance}};
}
void from_json(const Json& j, RankedVariable& v) {
  v.name = j.at("name").get<std::string>();
  v.importance = j.at("importance").get<double>();
}

void to_json(Json& j, const ParsimonyPoint& v) { j = Json{{"m", v.m}, {"auc", real(v.auc)}}; }
void from_json(const Json& j, ParsimonyPoint& v) {
  v.m = j.at("m").get<int>();
  v.auc = read_real(j, "auc");
}

void to_json(Json& j, const VariableCuts& v) {
  j = Json{{"name", v.name}, {"kind", kind_name(v.source_kind)}, {"cuts", v.cuts},
           {"levels", v.levels}};
}

void from_json(const Json& j, VariableCuts& v) {
  check_keys(j, {"name", "kind", "cuts", "levels"}, "cut points");
  v.name = j.at("name").get<std::string>();
  v.source_kind = parse_kind(j.at("kind").get<std::string>());
  v.cuts = j.at("cuts").get<std::vector<double>>();
  v.levels = j.at("levels").get<std::vector<std::string>>();
  validate_override(v.name, v.cuts);
  if (v.source_kind == FeatureKind::kContinuous && v.levels.size() != v.cuts.size() + 1)
    throw ValidationError(fmt::format("'{}': level count does not match its cut points", v.name));
}

void to_json(Json& j, const CutoffTable& v) { j = v.variables; }
void from_json(const Json& j, CutoffTable& v) {
  v.variables = j.get<std::vector<VariableCuts>>();
}

void to_json(Json& j, const VariablePoints& v) {
  j = Json{{"name", v.name}, {"levels", v.levels}, {"points", v.points}};
}

void from_json(const Json& j, VariablePoints& v) {
  check_keys(j, {"name", "levels", "points"}, "score table variable");
  v.name = j.at("name").get<std::string>();
  v.levels = j.at("levels").get<std::vector<std::string>>();
  v.points = j.at("points").get<std::vector<int>>();
  if (v.levels.size() != v.points.size())
    throw ValidationError(fmt::format("'{}': levels and points differ in length", v.name));
}

void to_json(Json& j, const ScoreTable& v) {
  j = Json{{"max_total", v.max_total}, {"variables", v.variables}};
}

void from_json(const Json& j, ScoreTable& v) {
  check_keys(j, {"max_total", "variables"}, "score table");
  v.max_total = j.at("max_total").get<int>();
  v.variables = j.at("variables").get<std::vector<VariablePoints>>();
}

void to_json(Json& j, const Scorecard& v) {
  j = Json{{"cutoffs", v.cutoffs}, {"table", v.table}};
}

void from_json(const Json& j, Scorecard& v) {
  v.cutoffs = j.at("cutoffs").get<CutoffTable>();
  v.table = j.at("table").get<ScoreTable>();
}

void to_json(Json& j, const Estimate& v) {
  j = Json{{"point", real(v.point)}, {"low", real(v.low)}, {"high", real(v.high)},
           {"defined", v.defined}};
}

void from_json(const Json& j, Estimate& v) {
  v.point = read_real(j, "point");
  v.low = read_real(j, "low");
  v.high = read_real(j, "high");
  v.defined = j.at("defined").get<bool>();
}

void to_json(Json& j, const MetricReport& v) {
  j = Json{{"threshold", v.threshold},
           {"auc", v.auc},
           {"sensitivity", v.sensitivity},
           {"specificity", v.specificity},
           {"balanced_accuracy", v.balanced_accuracy},
           {"npv", v.npv},
           {"ppv", v.ppv},
           {"n_bootstrap", v.n_bootstrap},
           {"seed", v.seed},
           {"redraws", v.redraws},
           {"degenerate", v.degenerate},
           {"notes", v.notes}};
}

void from_json(const Json& j, MetricReport& v) {
  v.threshold = j.at("threshold").get<double>();
  v.auc = j.at("auc").get<Estimate>();
  v.sensitivity = j.at("sensitivity").get<Estimate>();
  v.specificity = j.at("specificity").get<Estimate>();
  v.balanced_accuracy = j.at("balanced_accuracy").get<Estimate>();
  v.npv = j.at("npv").get<Estimate>();
  v.ppv = j.at("ppv").get<Estimate>();
  v.n_bootstrap = j.at("n_bootstrap").get<int>();
  v.seed = j.at("seed").get<std::uint64_t>();
  v.redraws = j.at("redraws").get<int>();
  v.degenerate = j.at("degenerate").get<bool>();
  v.notes = j.at("notes").get<std::vector<std::string>>();
}

void to_json(Json& j, const PipelineRecord& v) {
  Json overrides = Json::object();
  for (const auto& [name, cuts] : v.overrides) overrides[name] = cuts;
  j = Json{{"version", v.version},
           {"config_hash", v.config_hash},
           {"config", v.config},
           {"split", {{"seed", v.split_seed},
                      {"train_hash", v.train_hash},
                      {"validation_hash", v.validation_hash},
                      {"test_hash", v.test_hash}}},
           {"methods", v.methods},
           {"intermediate_m", v.intermediate_m},
           {"block_a", {{"grid", v.block_a}, {"winner", v.block_a_winner}}},
           {"processed_hash", v.processed_hash},
           {"block_b", {{"grid", v.block_b}, {"weight", v.weight}}},
           {"ranking", v.ranking},
           {"parsimony", v.parsimony},
           {"warnings", v.warnings},
           {"finalized", v.finalized},
           {"m", v.m},
           {"overrides", overrides}};
  j["scorecard"] = v.finalized ? Json(v.scorecard) : Json(nullptr);
  j["test_report"] = v.test_report ? Json(*v.test_report) : Json(nullptr);
}

void from_json(const Json& j, PipelineRecord& v) {
  v.version = j.at("version").get<std::string>();
  v.config_hash = j.at("config_hash").get<std::string>();
  v.config = j.at("config").get<PipelineConfig>();
  const auto& split = j.at("split");
  v.split_seed = split.at("seed").get<std::uint64_t>();
  v.train_hash = split.at("train_hash").get<std::string>();
  v.validation_hash = split.at("validation_hash").get<std::string>();
  v.test_hash = split.at("test_hash").get<std::string>();
  v.methods = j.at("methods").get<std::vector<MethodSpec>>();
  v.intermediate_m = j.at("intermediate_m").get<int>();
  v.block_a = j.at("block_a").at("grid").get<std::vector<BlockACell>>();
  v.block_a_winner = j.at("block_a").at("winner").get<std::size_t>();
  v.processed_hash = j.at("processed_hash").get<std::string>();
  v.block_b = j.at("block_b").at("grid").get<std::vector<WeightCell>>();
  v.weight = j.at("block_b").at("weight").get<double>();
  v.ranking = j.at("ranking").get<std::vector<RankedVariable>>();
  v.parsimony = j.at("parsimony").get<std::vector<ParsimonyPoint>>();
  v.warnings = j.at("warnings").get<std::vector<std::string>>();
  v.finalized = j.at("finalized").get<bool>();
  v.m = j.at("m").get<int>();
  v.overrides.clear();
  for (const auto& item : j.at("overrides").items())
    v.overrides[item.key()] = item.value().get<std::vector<double>>();
  if (!j.at("scorecard").is_null()) v.scorecard = j["scorecard"].get<Scorecard>();
  v.test_report.reset();
  if (!j.at("test_report").is_null()) v.test_report = j["test_report"].get<MetricReport>();
  if (v.config_hash != config_hash(v.config))
    throw ValidationError("record configuration does not match its recorded hash");
}

template <class T>
T parse_json(const Json& j, std::string_view what) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("malformed {}: {}", what, e.what()));
  }
}

template PipelineConfig parse_json<PipelineConfig>(const Json&, std::string_view);
template PipelineRecord parse_json<PipelineRecord>(const Json&, std::string_view);
template Scorecard parse_json<Scorecard>(const Json&, std::string_view);
template MetricReport parse_json<MetricReport>(const Json&, std::string_view);
template CutoffTable parse_json<CutoffTable>(const Json&, std::string_view);

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string config_hash(const PipelineConfig& cfg) {
  Fnv1a h;
  h.update(Json(cfg).dump());
  return h.hex();
}

}  // namespace scorecard

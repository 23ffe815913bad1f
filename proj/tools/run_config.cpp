#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include <scorecard/error.hpp>
#include <scorecard/hash.hpp>

namespace cli {

using scorecard::ValidationError;

namespace {

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
  if (!j.is_object()) throw ValidationError(fmt::format("{}: expected a JSON object", where));
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ValidationError(fmt::format("{}: unknown key '{}'", where, key));
  }
}

template <class T>
void read(const Json& j, const char* key, T& out, std::string_view where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("{}.{}: {}", where, key, e.what()));
  }
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || text.front() == '-')
    throw ValidationError(fmt::format("SCORECARD_SEED='{}' is not a non-negative integer", text));
  return v;
}

std::string_view missing_name(scorecard::MissingPolicy p) {
  return p == scorecard::MissingPolicy::kImpute ? "impute" : "drop";
}

Json feature_json(const scorecard::FeatureSpec& f) {
  Json j{{"name", f.name}, {"kind", f.is_categorical() ? "categorical" : "continuous"}};
  if (f.is_categorical()) j["levels"] = f.categories;
  return j;
}

}  // namespace

void RunConfig::validate() const {
  if (input.has_value() == synthetic.has_value())
    throw ValidationError("config must name exactly one of 'input' or 'synthetic'");
  if (input && !fs::exists(*input))
    throw ValidationError(fmt::format("input file '{}' does not exist", input->string()));
  if (label_column.empty()) throw ValidationError("label_column must not be empty");
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) throw ValidationError("split ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError(fmt::format("split ratios sum to {}, expected 1", sum));
  if (synthetic) {
    const auto& s = *synthetic;
    if (s.n == 0) throw ValidationError("synthetic.n must be positive");
    if (!(s.minority_rate > 0.0 && s.minority_rate <= 0.5))
      throw ValidationError("synthetic.minority_rate must be in (0, 0.5]");
    if (s.n_informative == 0) throw ValidationError("synthetic.n_informative must be positive");
  }
  pipeline.validate();
}

RunConfig load_run_config(const fs::path& path) {
  const Json j = read_json_file(path);
  check_keys(j, {"input", "synthetic", "label_column", "missing", "split", "output_dir", "pipeline"},
             "config");
  const fs::path base = path.parent_path();
  RunConfig cfg;
  if (j.contains("input")) {
    std::string p;
    read(j, "input", p, "config");
    cfg.input = resolve(base, p);
  }
  if (j.contains("synthetic")) {
    const auto& s = j.at("synthetic");
    check_keys(s, {"n", "minority_rate", "n_informative", "n_noise", "effect_size", "seed"},
               "synthetic");
    scorecard::SyntheticSpec spec;
    read(s, "n", spec.n, "synthetic");
    read(s, "minority_rate", spec.minority_rate, "synthetic");
    read(s, "n_informative", spec.n_informative, "synthetic");
    read(s, "n_noise", spec.n_noise, "synthetic");
    read(s, "effect_size", spec.effect_size, "synthetic");
    read(s, "seed", spec.seed, "synthetic");
    cfg.synthetic = spec;
  }
  read(j, "label_column", cfg.label_column, "config");
  if (j.contains("missing")) {
    std::string m;
    read(j, "missing", m, "config");
    if (m == "drop")
      cfg.missing = scorecard::MissingPolicy::kDropRow;
    else if (m == "impute")
      cfg.missing = scorecard::MissingPolicy::kImpute;
    else
      throw ValidationError(fmt::format("missing: expected 'drop' or 'impute', got '{}'", m));
  }
  if (j.contains("split")) {
    const auto& s = j.at("split");
    check_keys(s, {"ratios", "seed"}, "split");
    std::vector<double> ratios(cfg.ratios.begin(), cfg.ratios.end());
    read(s, "ratios", ratios, "split");
    if (ratios.size() != 3)
      throw ValidationError("split.ratios must hold three values (train, validation, test)");
    std::copy(ratios.begin(), ratios.end(), cfg.ratios.begin());
    read(s, "seed", cfg.split_seed, "split");
  }
  std::string out = cfg.output_dir.string();
  read(j, "output_dir", out, "config");
  cfg.output_dir = resolve(base, out);
  if (j.contains("pipeline"))
    cfg.pipeline = scorecard::parse_json<scorecard::PipelineConfig>(j.at("pipeline"), "pipeline");
  if (const char* env = std::getenv("SCORECARD_SEED")) cfg.pipeline.seed = parse_seed(env);
  cfg.validate();
  return cfg;
}

Json to_json(const RunConfig& cfg) {
  Json j;
  if (cfg.input) j["input"] = cfg.input->string();
  if (cfg.synthetic) {
    const auto& s = *cfg.synthetic;
    j["synthetic"] = {{"n", s.n},
                      {"minority_rate", s.minority_rate},
                      {"n_informative", s.n_informative},
                      {"n_noise", s.n_noise},
                      {"effect_size", s.effect_size},
                      {"seed", s.seed}};
  }
  j["label_column"] = cfg.label_column;
  j["missing"] = missing_name(cfg.missing);
  j["split"] = {{"ratios", cfg.ratios}, {"seed", cfg.split_seed}};
  j["output_dir"] = cfg.output_dir.string();
  j["pipeline"] = cfg.pipeline;
  return j;
}

std::string run_config_hash(const RunConfig& cfg) {
  // The output directory does not change any result.
  Json j = to_json(cfg);
  j.erase("output_dir");
  return scorecard::hash_hex(j.dump());
}

std::string split_config_hash(const RunConfig& cfg) {
  Json j = to_json(cfg);
  j.erase("output_dir");
  j.erase("pipeline");
  return scorecard::hash_hex(j.dump());
}

scorecard::Dataset load_source(const RunConfig& cfg) {
  if (cfg.synthetic) return scorecard::make_synthetic(*cfg.synthetic);
  scorecard::CsvOptions opt;
  opt.label_column = cfg.label_column;
  opt.missing = cfg.missing;
  return scorecard::load_csv(*cfg.input, opt);
}

Json to_json(const SplitManifest& m) {
  Json schema = Json::array();
  for (const auto& f : m.schema) schema.push_back(feature_json(f));
  Json parts = Json::object();
  for (int k = 0; k < 3; ++k)
    parts[kPartNames[k]] = {{"file", std::string(kPartNames[k]) + ".csv"},
                            {"rows", m.rows[k]},
                            {"hash", m.hashes[k]}};
  return Json{{"version", m.version},
              {"config_hash", m.config_hash},
              {"seed", m.seed},
              {"ratios", m.ratios},
              {"label", {{"column", m.coding.column},
                         {"negative", m.coding.negative},
                         {"positive", m.coding.positive}}},
              {"schema", schema},
              {"parts", parts}};
}

SplitManifest manifest_from_json(const Json& j) {
  try {
    SplitManifest m;
    m.version = j.at("version").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.ratios = j.at("ratios").get<std::array<double, 3>>();
    const auto& label = j.at("label");
    m.coding.column = label.at("column").get<std::string>();
    m.coding.negative = label.at("negative").get<std::string>();
    m.coding.positive = label.at("positive").get<std::string>();
    for (const auto& f : j.at("schema")) {
      const auto kind = f.at("kind").get<std::string>();
      if (kind == "categorical")
        m.schema.push_back(scorecard::FeatureSpec::categorical(
            f.at("name").get<std::string>(), f.at("levels").get<std::vector<std::string>>()));
      else
        m.schema.push_back(scorecard::FeatureSpec::continuous(f.at("name").get<std::string>()));
    }
    for (int k = 0; k < 3; ++k) {
      const auto& p = j.at("parts").at(kPartNames[k]);
      m.rows[k] = p.at("rows").get<std::size_t>();
      m.hashes[k] = p.at("hash").get<std::string>();
    }
    return m;
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("malformed split manifest: {}", e.what()));
  }
}

scorecard::Dataset load_with_manifest(const fs::path& csv, const SplitManifest& manifest) {
  scorecard::CsvOptions opt;
  opt.label_column = manifest.coding.column;
  opt.schema = manifest.schema;
  opt.positive_label = manifest.coding.positive;
  return scorecard::load_csv(csv, opt);
}

scorecard::Dataset load_part(const fs::path& dir, const SplitManifest& manifest, int part) {
  const auto path = dir / (std::string(kPartNames[part]) + ".csv");
  auto ds = load_with_manifest(path, manifest);
  if (ds.fingerprint() != manifest.hashes[part])
    throw ValidationError(fmt::format("'{}' does not match the split manifest", path.string()));
  return ds;
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw scorecard::DataError(fmt::format("cannot write '{}'", path.string()));
}

}  // namespace cli

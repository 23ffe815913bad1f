#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include <scorecard/csv.hpp>
#include <scorecard/dataset.hpp>
#include <scorecard/pipeline.hpp>
#include <scorecard/serialize.hpp>

namespace cli {

namespace fs = std::filesystem;
using scorecard::Json;

struct RunConfig {
  std::optional<fs::path> input;
  std::optional<scorecard::SyntheticSpec> synthetic;
  std::string label_column = "label";
  scorecard::MissingPolicy missing = scorecard::MissingPolicy::kDropRow;
  std::array<double, 3> ratios{0.6, 0.2, 0.2};
  std::uint64_t split_seed = 0;
  fs::path output_dir = "scorecard_out";
  scorecard::PipelineConfig pipeline;

  void validate() const;
};

/// Reads a run configuration. Relative paths are resolved against the
/// directory holding the file. SCORECARD_SEED, when set, replaces the
/// pipeline seed.
RunConfig load_run_config(const fs::path& path);

Json to_json(const RunConfig& cfg);
/// Hash of the normalized configuration (defaults filled in).
std::string run_config_hash(const RunConfig& cfg);
/// Hash of the fields that determine the split only.
std::string split_config_hash(const RunConfig& cfg);

/// The data named by the configuration (CSV file or synthetic generator).
scorecard::Dataset load_source(const RunConfig& cfg);

/// Manifest written next to the split CSVs.
struct SplitManifest {
  std::string version;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::array<double, 3> ratios{};
  std::vector<scorecard::FeatureSpec> schema;
  scorecard::LabelCoding coding;
  std::array<std::size_t, 3> rows{};
  std::array<std::string, 3> hashes;
};

inline constexpr std::array<const char*, 3> kPartNames{"train", "validation", "test"};

Json to_json(const SplitManifest& m);
SplitManifest manifest_from_json(const Json& j);

/// Loads one of the split CSVs with the manifest's schema and label coding
/// and checks its fingerprint against the manifest.
scorecard::Dataset load_part(const fs::path& dir, const SplitManifest& manifest, int part);
scorecard::Dataset load_with_manifest(const fs::path& csv, const SplitManifest& manifest);

Json read_json_file(const fs::path& path);
void write_text_file(const fs::path& path, const std::string& text);

}  // namespace cli

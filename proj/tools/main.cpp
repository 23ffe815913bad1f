#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <scorecard/csv.hpp>
#include <scorecard/error.hpp>
#include <scorecard/pipeline.hpp>
#include <scorecard/serialize.hpp>

#include "outputs.hpp"
#include "run_config.hpp"

namespace {

using namespace cli;
using scorecard::ValidationError;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

void write_json(const fs::path& path, const Json& j) {
  write_text_file(path, scorecard::dump_json(j));
  std::cout << path.string() << '\n';
}

void write_output(const fs::path& path, const std::string& text) {
  write_text_file(path, text);
  std::cout << path.string() << '\n';
}

SplitManifest read_manifest(const fs::path& dir) {
  const auto path = dir / "split.json";
  if (!fs::exists(path))
    throw ValidationError(
        fmt::format("no split manifest in '{}'; run 'scorecard split' first", dir.string()));
  return manifest_from_json(read_json_file(path));
}

scorecard::PipelineRecord read_record(const fs::path& path) {
  return scorecard::parse_json<scorecard::PipelineRecord>(read_json_file(path), "record");
}

std::string model_name(const scorecard::PipelineRecord& rec) {
  const auto& cell = rec.block_a.at(rec.block_a_winner);
  return cell.method ? "AutoScore-Imbalance " + cell.label() : "AutoScore";
}

// ---- split ----

int cmd_split(const fs::path& config_path) {
  const auto cfg = load_run_config(config_path);
  const auto data = load_source(cfg);
  const auto bundle = scorecard::stratified_split(data, cfg.ratios, cfg.split_seed);

  SplitManifest m;
  m.version = scorecard::version();
  m.config_hash = split_config_hash(cfg);
  m.seed = cfg.split_seed;
  m.ratios = cfg.ratios;
  m.schema = data.features();
  m.coding = data.label_coding();
  const scorecard::Dataset* parts[] = {&bundle.train, &bundle.validation, &bundle.test};
  for (int k = 0; k < 3; ++k) {
    const auto path = cfg.output_dir / (std::string(kPartNames[k]) + ".csv");
    fs::create_directories(cfg.output_dir);
    scorecard::save_csv(*parts[k], path);
    std::cout << path.string() << '\n';
    m.rows[k] = parts[k]->num_rows();
    m.hashes[k] = parts[k]->fingerprint();
  }
  write_json(cfg.output_dir / "split.json", to_json(m));
  return 0;
}

// ---- derive ----

int cmd_derive(const fs::path& config_path) {
  const auto cfg = load_run_config(config_path);
  const auto manifest = read_manifest(cfg.output_dir);
  if (manifest.config_hash != split_config_hash(cfg))
    throw ValidationError(
        "split manifest was written for a different data or split configuration; rerun split");
  const auto train = load_part(cfg.output_dir, manifest, 0);
  const auto validation = load_part(cfg.output_dir, manifest, 1);

  const auto rec =
      scorecard::derive(train, validation, manifest.hashes[2], manifest.seed, cfg.pipeline);
  print_warnings(rec.warnings);
  const auto& dir = cfg.output_dir;
  write_output(dir / "block_a.tsv", block_a_tsv(rec, rec.config_hash));
  write_output(dir / "block_b.tsv", block_b_tsv(rec, rec.config_hash));
  write_output(dir / "parsimony.tsv", parsimony_tsv(rec.parsimony, rec.config_hash));
  write_output(dir / "parsimony.svg", parsimony_svg(rec.parsimony, model_name(rec)));
  write_json(dir / "record.json", Json(rec));
  std::cerr << fmt::format("suggested m = {} (smallest m within 0.01 of the best AUC)\n",
                           scorecard::choose_m(rec.parsimony));
  return 0;
}

// ---- finalize ----

scorecard::CutOverrides read_overrides(const fs::path& path) {
  const auto j = read_json_file(path);
  if (!j.is_object()) throw ValidationError("overrides file must hold a JSON object");
  scorecard::CutOverrides out;
  for (const auto& [name, cuts] : j.items()) {
    try {
      out[name] = cuts.get<std::vector<double>>();
    } catch (const Json::exception&) {
      throw ValidationError(fmt::format("overrides for '{}' must be a list of numbers", name));
    }
    scorecard::validate_override(name, out[name]);
  }
  return out;
}

int cmd_finalize(const fs::path& record_path, const std::string& m_text,
                 const std::optional<fs::path>& overrides_path, std::optional<fs::path> out_dir) {
  auto rec = read_record(record_path);
  if (rec.test_report)
    throw ValidationError("record has already been evaluated on the test set");
  int m = 0;
  if (m_text == "auto") {
    m = scorecard::choose_m(rec.parsimony);
  } else {
    std::size_t used = 0;
    try {
      m = std::stoi(m_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != m_text.size())
      throw ValidationError(fmt::format("--m expects an integer or 'auto', got '{}'", m_text));
  }
  if (m < 1 || static_cast<std::size_t>(m) > rec.ranking.size())
    throw ValidationError(
        fmt::format("m must be in [1, {}], got {}", rec.ranking.size(), m));
  const auto overrides = overrides_path ? read_overrides(*overrides_path) : scorecard::CutOverrides{};

  const auto dir = record_path.parent_path();
  const auto manifest = read_manifest(dir);
  const auto train = load_part(dir, manifest, 0);
  scorecard::finalize(rec, train, m, overrides);
  print_warnings(rec.warnings);

  const auto out = out_dir.value_or(dir);
  write_json(out / "finalized_record.json", Json(rec));
  write_json(out / "scorecard.json", Json{{"version", rec.version},
                                           {"config_hash", rec.config_hash},
                                           {"m", rec.m},
                                           {"scorecard", rec.scorecard}});
  write_output(out / "scorecard.md",
               fmt::format("<!-- scorecard {} config_hash={} -->\n\n", rec.version,
                           rec.config_hash) +
                   scorecard::render_markdown(rec.scorecard.table));
  return 0;
}

// ---- evaluate ----

int cmd_evaluate(const fs::path& record_path, std::optional<fs::path> test_path,
                 std::optional<fs::path> out_dir) {
  auto rec = read_record(record_path);
  const auto dir = record_path.parent_path();
  const auto manifest = read_manifest(dir);
  const auto test = test_path ? load_with_manifest(*test_path, manifest) : load_part(dir, manifest, 2);
  const auto report = scorecard::evaluate_final(rec, test);
  const auto out = out_dir.value_or(dir);
  write_json(out / "evaluated_record.json", Json(rec));
  write_json(out / "report.json", Json{{"version", rec.version},
                                        {"config_hash", rec.config_hash},
                                        {"model", model_name(rec)},
                                        {"m", rec.m},
                                        {"report", report}});
  write_output(out / "report.tsv", report_tsv(model_name(rec), rec.m, report, rec.config_hash));
  return 0;
}

// ---- score ----

scorecard::Scorecard read_scorecard(const fs::path& path) {
  auto j = read_json_file(path);
  if (j.is_object() && j.contains("scorecard")) {
    if (j.at("scorecard").is_null()) throw ValidationError("record has not been finalized");
    j = j.at("scorecard");
  }
  return scorecard::parse_json<scorecard::Scorecard>(j, "scorecard");
}

int cmd_score(const fs::path& card_path, const fs::path& input, const fs::path& output) {
  const auto card = read_scorecard(card_path);
  std::ifstream in(input);
  if (!in) throw ValidationError(fmt::format("cannot open '{}'", input.string()));
  const auto table = scorecard::read_csv_table(in);

  std::ostringstream out;
  auto header = table.header;
  header.push_back("score");
  header.push_back("error");
  scorecard::write_csv_row(out, header);

  std::vector<std::string> missing;
  for (const auto& vp : card.table.variables)
    if (std::find(table.header.begin(), table.header.end(), vp.name) == table.header.end())
      missing.push_back(vp.name);

  std::size_t failures = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    auto cells = table.rows[r];
    std::string error;
    std::string score;
    if (!missing.empty()) {
      error = fmt::format("missing variable '{}'", missing.front());
    } else {
      std::map<std::string, std::string, std::less<>> record;
      for (std::size_t c = 0; c < table.header.size(); ++c) record[table.header[c]] = cells[c];
      try {
        score = std::to_string(scorecard::apply_score_text(card.table, card.cutoffs, record));
      } catch (const ValidationError& e) {
        error = e.what();
      }
    }
    if (!error.empty()) {
      ++failures;
      std::cerr << fmt::format("line {}: {}\n", table.line_numbers[r], error);
    }
    cells.push_back(score);
    cells.push_back(error);
    scorecard::write_csv_row(out, cells);
  }
  write_output(output, out.str());
  if (failures > 0) {
    std::cerr << fmt::format("{} of {} rows could not be scored\n", failures, table.rows.size());
    return 1;
  }
  return 0;
}

// ---- bench ----

int cmd_bench(const fs::path& config_path) {
  const auto cfg = load_run_config(config_path);
  const auto data = load_source(cfg);
  const auto bundle = scorecard::stratified_split(data, cfg.ratios, cfg.split_seed);
  const auto bench = scorecard::run_bench(bundle, cfg.pipeline);
  print_warnings(bench.warnings);

  const auto hash = run_config_hash(cfg);
  Json rows = Json::array();
  for (const auto& r : bench.rows) {
    Json row{{"model", r.model}, {"m", r.m}, {"report", r.report}};
    row["validation_auc"] = std::isnan(r.validation_auc) ? Json(nullptr) : Json(r.validation_auc);
    rows.push_back(row);
  }
  write_output(cfg.output_dir / "bench.tsv", bench_tsv(bench, hash));
  write_json(cfg.output_dir / "bench.json", Json{{"version", scorecard::version()},
                                                 {"config_hash", hash},
                                                 {"rows", rows},
                                                 {"warnings", bench.warnings}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derive integer-point risk scorecards from imbalanced tabular data"};
  app.set_version_flag("--version", scorecard::version());
  app.require_subcommand(1);

  fs::path config;
  auto* split = app.add_subcommand("split", "Write stratified train/validation/test CSVs");
  split->add_option("--config", config, "Run configuration (JSON)")->required();
  auto* derive = app.add_subcommand("derive", "Run the rebalancing and weight searches");
  derive->add_option("--config", config, "Run configuration (JSON)")->required();
  auto* bench = app.add_subcommand("bench", "Compare all sub-models and baselines");
  bench->add_option("--config", config, "Run configuration (JSON)")->required();

  fs::path record;
  std::string m_text;
  std::optional<fs::path> overrides, out_dir, test_path;
  auto* fin = app.add_subcommand("finalize", "Build the final score table for a chosen m");
  fin->add_option("--record", record, "Record written by derive")->required();
  fin->add_option("--m", m_text, "Number of variables, or 'auto'")->required();
  fin->add_option("--overrides", overrides, "JSON object of cut points per variable");
  fin->add_option("--out", out_dir, "Output directory (default: the record's directory)");

  auto* eval = app.add_subcommand("evaluate", "Score the held-out test set once");
  eval->add_option("--record", record, "Record written by finalize")->required();
  eval->add_option("--test", test_path, "Test CSV (default: test.csv next to the record)");
  eval->add_option("--out", out_dir, "Output directory (default: the record's directory)");

  fs::path card, input, output;
  auto* score = app.add_subcommand("score", "Add a score column to a CSV of records");
  score->add_option("--scorecard", card, "scorecard.json written by finalize")->required();
  score->add_option("--input", input, "Records to score (CSV)")->required();
  score->add_option("--output", output, "Scored CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*split) return cmd_split(config);
    if (*derive) return cmd_derive(config);
    if (*fin) return cmd_finalize(record, m_text, overrides, out_dir);
    if (*eval) return cmd_evaluate(record, test_path, out_dir);
    if (*score) return cmd_score(card, input, output);
    if (*bench) return cmd_bench(config);
  } catch (const scorecard::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const scorecard::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

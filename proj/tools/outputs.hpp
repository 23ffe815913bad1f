#pragma once

#include <string>
#include <vector>

#include <scorecard/pipeline.hpp>

namespace cli {

/// First line of every TSV the tool writes.
std::string tsv_preamble(const std::string& config_hash);

std::string parsimony_tsv(const std::vector<scorecard::ParsimonyPoint>& curve,
                          const std::string& config_hash);
std::string parsimony_svg(const std::vector<scorecard::ParsimonyPoint>& curve,
                          const std::string& title);
std::string block_a_tsv(const scorecard::PipelineRecord& record, const std::string& config_hash);
std::string block_b_tsv(const scorecard::PipelineRecord& record, const std::string& config_hash);
std::string report_tsv(const std::string& model, int m, const scorecard::MetricReport& report,
                       const std::string& config_hash);
std::string bench_tsv(const scorecard::BenchResult& bench, const std::string& config_hash);

}  // namespace cli

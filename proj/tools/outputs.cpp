#include "outputs.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include <scorecard/evalmetrics.hpp>

namespace cli {

namespace {

std::string number(double v) { return std::isnan(v) ? "NA" : fmt::format("{:.6f}", v); }

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string tsv_preamble(const std::string& config_hash) {
  return fmt::format("# scorecard {} config_hash={}\n", scorecard::version(), config_hash);
}

std::string parsimony_tsv(const std::vector<scorecard::ParsimonyPoint>& curve,
                          const std::string& config_hash) {
  std::string out = tsv_preamble(config_hash) + "m\tauc\n";
  for (const auto& p : curve) out += fmt::format("{}\t{}\n", p.m, number(p.auc));
  return out;
}

std::string parsimony_svg(const std::vector<scorecard::ParsimonyPoint>& curve,
                          const std::string& title) {
  constexpr double width = 640, height = 400;
  constexpr double left = 70, right = 20, top = 40, bottom = 60;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double lo = 1.0, hi = 0.0;
  for (const auto& p : curve) {
    lo = std::min(lo, p.auc);
    hi = std::max(hi, p.auc);
  }
  lo = std::floor(lo * 20.0) / 20.0;
  hi = std::ceil(hi * 20.0) / 20.0;
  if (hi <= lo) hi = lo + 0.05;
  const int max_m = curve.empty() ? 1 : curve.back().m;
  auto x_of = [&](int m) {
    return max_m == 1 ? left + plot_w / 2 : left + plot_w * (m - 1) / (max_m - 1);
  };
  auto y_of = [&](double auc) { return top + plot_h * (hi - auc) / (hi - lo); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
      width, height, left + plot_w / 2, escape_xml(title));
  svg += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n",
      left, top + plot_h, left + plot_w, top);
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:.3f}</text>\n",
        left, y_of(v), left + plot_w, left - 6, y_of(v) + 4, v);
  }
  const int step = std::max(1, max_m / 12);
  for (int m = 1; m <= max_m; m += step)
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x_of(m),
                       top + plot_h + 18, m);
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">Number of variables (m)</text>\n",
      left + plot_w / 2, height - 16);
  svg += fmt::format(
      "<text x=\"18\" y=\"{0:.2f}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 18 {0:.2f})\">Validation AUC</text>\n",
      top + plot_h / 2);

  std::string points;
  for (const auto& p : curve) {
    if (std::isnan(p.auc)) continue;
    if (!points.empty()) points += ' ';
    points += fmt::format("{:.2f},{:.2f}", x_of(p.m), y_of(p.auc));
  }
  svg += fmt::format("<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"{}\"/>\n",
                     points);
  for (const auto& p : curve)
    if (!std::isnan(p.auc))
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#1f77b4\"/>\n",
                         x_of(p.m), y_of(p.auc));
  svg += "</svg>\n";
  return svg;
}

std::string block_a_tsv(const scorecard::PipelineRecord& record, const std::string& config_hash) {
  std::string out = tsv_preamble(config_hash) + "method\trate\tn_pos\tn_neg\tauc\twinner\terror\n";
  for (std::size_t i = 0; i < record.block_a.size(); ++i) {
    const auto& c = record.block_a[i];
    out += fmt::format("{}\t{:.6g}\t{}\t{}\t{}\t{}\t{}\n", c.label(), c.rate, c.n_pos, c.n_neg,
                       number(c.auc), i == record.block_a_winner ? "yes" : "", c.error);
  }
  return out;
}

std::string block_b_tsv(const scorecard::PipelineRecord& record, const std::string& config_hash) {
  std::string out = tsv_preamble(config_hash) + "weight\tauc\tchosen\n";
  for (const auto& c : record.block_b)
    out += fmt::format("{:g}\t{}\t{}\n", c.weight, number(c.auc),
                       c.weight == record.weight ? "yes" : "");
  return out;
}

std::string report_tsv(const std::string& model, int m, const scorecard::MetricReport& report,
                       const std::string& config_hash) {
  return tsv_preamble(config_hash) + scorecard::tsv_header() + "\n" +
         scorecard::tsv_row(model, m, report) + "\n";
}

std::string bench_tsv(const scorecard::BenchResult& bench, const std::string& config_hash) {
  std::string out = tsv_preamble(config_hash) + scorecard::tsv_header() + "\n";
  for (const auto& row : bench.rows) out += scorecard::tsv_row(row.model, row.m, row.report) + "\n";
  return out;
}

}  // namespace cli

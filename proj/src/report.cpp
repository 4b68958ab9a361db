#include "wdrbo/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "wdrbo/errors.hpp"

#ifndef WDRBO_VERSION
#define WDRBO_VERSION "dev"
#endif

namespace wdrbo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError(where + ": not a number: '" + s + "'");
  return v;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string trace_csv(const RegretTrace& trace, bool with_timing) {
  std::ostringstream out;
  const Eigen::Index dx = trace.steps.empty() ? 0 : trace.steps.front().x.size();
  const Eigen::Index dc = trace.steps.empty() ? 0 : trace.steps.front().c.size();
  out << "seed,t";
  for (Eigen::Index i = 0; i < dx; ++i) out << ",x_" << i;
  for (Eigen::Index i = 0; i < dc; ++i) out << ",c_" << i;
  out << ",y,eps,r_inst,r_cum,elapsed_ms\n";
  for (const StepRecord& s : trace.steps) {
    out << trace.seed << ',' << s.t;
    for (Eigen::Index i = 0; i < dx; ++i) out << ',' << format_number(s.x(i));
    for (Eigen::Index i = 0; i < dc; ++i) out << ',' << format_number(s.c(i));
    out << ',' << format_number(s.y) << ',' << format_number(s.epsilon) << ',' << format_number(s.r_inst) << ','
        << format_number(s.r_cum) << ',' << format_number(with_timing ? s.elapsed_ms : 0.0) << '\n';
  }
  return out.str();
}

std::string summary_csv(const RunSummary& summary) {
  std::ostringstream out;
  out << "algorithm,t,n_seeds,mean_R,stderr_R\n";
  for (const SeriesSummary& s : summary.series) {
    for (std::size_t t = 0; t < s.mean.size(); ++t) {
      out << s.algorithm << ',' << t + 1 << ',' << s.n_seeds << ',' << format_number(s.mean[t]) << ','
          << format_number(s.std_error[t]) << '\n';
    }
  }
  return out.str();
}

RunSummary parse_summary_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "algorithm,t,n_seeds,mean_R,stderr_R") {
    throw InputError("summary.csv: unexpected header");
  }
  RunSummary summary;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = "summary.csv:" + std::to_string(lineno);
    const auto cells = split(line, ',');
    if (cells.size() != 5) throw InputError(where + ": expected 5 columns");
    if (summary.series.empty() || summary.series.back().algorithm != cells[0]) {
      summary.series.push_back({cells[0], 0, {}, {}, 0.0, 0.0});
    }
    SeriesSummary& s = summary.series.back();
    const int t = static_cast<int>(parse_number(cells[1], where));
    if (t != static_cast<int>(s.mean.size()) + 1) throw InputError(where + ": steps out of order");
    s.n_seeds = static_cast<int>(parse_number(cells[2], where));
    s.mean.push_back(parse_number(cells[3], where));
    s.std_error.push_back(parse_number(cells[4], where));
  }
  return summary;
}

std::string regret_svg(const RunSummary& summary, const std::string& title) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  constexpr double W = 720, H = 440, left = 70, right = 150, top = 40, bottom = 50;
  const double pw = W - left - right;
  const double ph = H - top - bottom;

  std::size_t horizon = 1;
  double ymax = 0.0;
  for (const SeriesSummary& s : summary.series) {
    horizon = std::max(horizon, s.mean.size());
    for (std::size_t t = 0; t < s.mean.size(); ++t) ymax = std::max(ymax, s.mean[t] + s.std_error[t]);
  }
  if (ymax <= 0.0) ymax = 1.0;
  auto px = [&](double t) { return left + pw * (horizon > 1 ? (t - 1.0) / double(horizon - 1) : 0.5); };
  auto py = [&](double v) { return top + ph * (1.0 - v / ymax); };

  std::ostringstream out;
  out.precision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = ymax * i / 4.0;
    out << "<text x=\"" << left - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << v << "</text>\n";
    const double t = 1.0 + double(horizon - 1) * i / 4.0;
    out << "<text x=\"" << px(t) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << std::lround(t)
        << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">t</text>\n";
  out << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + ph / 2 << ")\">cumulative expected regret</text>\n";

  for (std::size_t k = 0; k < summary.series.size(); ++k) {
    const SeriesSummary& s = summary.series[k];
    const char* color = kColors[k % std::size(kColors)];
    out << "<g class=\"series\" data-algorithm=\"" << s.algorithm << "\">\n";
    out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (std::size_t t = 0; t < s.mean.size(); ++t) out << px(double(t + 1)) << ',' << py(s.mean[t] + s.std_error[t]) << ' ';
    for (std::size_t t = s.mean.size(); t-- > 0;) out << px(double(t + 1)) << ',' << py(s.mean[t] - s.std_error[t]) << ' ';
    out << "\"/>\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t t = 0; t < s.mean.size(); ++t) out << px(double(t + 1)) << ',' << py(s.mean[t]) << ' ';
    out << "\"/>\n";
    const double ly = top + 16.0 * double(k + 1);
    out << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly << "\">" << s.algorithm << "</text>\n</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit(const RunSummary& summary, const std::vector<RegretTrace>& traces, const ExperimentConfig& config,
          const fs::path& outdir) {
  if (traces.empty()) throw InputError("emit: no traces to write");
  if (summary.series.empty()) throw InputError("emit: empty summary");
  std::set<std::pair<std::string, std::uint64_t>> keys;
  for (const RegretTrace& tr : traces) {
    if (!keys.insert({tr.algorithm, tr.seed}).second) {
      throw InputError("emit: duplicate trace for " + tr.algorithm + " seed " + std::to_string(tr.seed));
    }
  }

  // Render everything first so a failure leaves nothing behind.
  std::vector<std::pair<fs::path, std::string>> files;
  for (const RegretTrace& tr : traces) {
    files.emplace_back(outdir / tr.algorithm / ("seed_" + std::to_string(tr.seed) + ".csv"),
                       trace_csv(tr, config.record_timing));
  }
  files.emplace_back(outdir / "summary.csv", summary_csv(summary));
  files.emplace_back(outdir / "regret.svg", regret_svg(summary, config.env));

  json meta;
  meta["version"] = WDRBO_VERSION;
  meta["created"] = utc_timestamp();
  meta["config"] = json::parse(dump_config(config));
  json timing = json::object();
  for (const SeriesSummary& s : summary.series) {
    timing[s.algorithm] = {{"wall_ms_mean", s.wall_ms_mean}, {"wall_ms_stderr", s.wall_ms_stderr}, {"n_seeds", s.n_seeds}};
  }
  meta["timing"] = timing;
  json failures = json::array();
  json oracles = json::array();
  std::set<std::uint64_t> seen_seed;
  for (const RegretTrace& tr : traces) {
    if (!tr.failure.empty()) failures.push_back({{"algorithm", tr.algorithm}, {"seed", tr.seed}, {"reason", tr.failure}});
    if (seen_seed.insert(tr.seed).second) {
      oracles.push_back({{"seed", tr.seed},
                         {"x", std::vector<double>(tr.oracle.x.data(), tr.oracle.x.data() + tr.oracle.x.size())},
                         {"value", tr.oracle.value}});
    }
  }
  meta["failures"] = failures;
  meta["oracle"] = oracles;
  files.emplace_back(outdir / "meta.json", meta.dump(2) + "\n");

  std::error_code ec;
  for (const auto& [path, content] : files) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  for (const auto& [path, content] : files) write_file(path, content);
}

RunSummary load_summary(const fs::path& outdir) {
  RunSummary summary = parse_summary_csv(read_file(outdir / "summary.csv"));
  const fs::path meta_path = outdir / "meta.json";
  if (fs::exists(meta_path)) {
    const json meta = json::parse(read_file(meta_path));
    if (meta.contains("timing")) {
      for (SeriesSummary& s : summary.series) {
        if (!meta["timing"].contains(s.algorithm)) continue;
        const json& t = meta["timing"][s.algorithm];
        s.wall_ms_mean = t.at("wall_ms_mean").get<double>();
        s.wall_ms_stderr = t.at("wall_ms_stderr").get<double>();
      }
    }
  }
  return summary;
}

}  // namespace wdrbo

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wdrbo/harness.hpp"

namespace wdrbo {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

/// Trace CSV: seed,t,x_0..,c_0..,y,eps,r_inst,r_cum,elapsed_ms. Elapsed times
/// are written as 0 unless `with_timing`, so that runs compare byte for byte.
std::string trace_csv(const RegretTrace& trace, bool with_timing);

/// algorithm,t,n_seeds,mean_R,stderr_R
std::string summary_csv(const RunSummary& summary);
RunSummary parse_summary_csv(const std::string& text);

/// Cumulative regret vs t, one line with a +-1 standard error band per algorithm.
std::string regret_svg(const RunSummary& summary, const std::string& title);

/// Writes <outdir>/<algo>/seed_<s>.csv, summary.csv, regret.svg and meta.json.
/// Everything is validated before the first file is created.
void emit(const RunSummary& summary, const std::vector<RegretTrace>& traces, const ExperimentConfig& config,
          const std::filesystem::path& outdir);

/// Reads summary.csv and the timing block of meta.json back into a RunSummary.
RunSummary load_summary(const std::filesystem::path& outdir);

}  // namespace wdrbo

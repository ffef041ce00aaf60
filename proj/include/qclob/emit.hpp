#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qclob/analytics.hpp"
#include "qclob/fit.hpp"
#include "qclob/semiparam.hpp"
#include "qclob/simgen.hpp"

namespace qclob {

// write to <path>.tmp then rename, so readers never observe partial files
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// deterministic shortest-ish float formatting shared by all emitters
std::string format_double(double v);

nlohmann::json to_json(const ActivitySummary& summary);
nlohmann::json to_json(const SpreadStats& stats);
nlohmann::json to_json(const RelativeDistribution& dist);
nlohmann::json to_json(const GenTParams& params);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const CollapseReport& report);
nlohmann::json to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const nlohmann::json& j);

// Generator spec I/O; `issues` collects field-level problems.
GeneratorSpec generator_spec_from_json(const nlohmann::json& j, std::vector<std::string>& issues);
nlohmann::json to_json(const GeneratorSpec& spec);

std::string activity_summary_csv(const ActivitySummary& summary);
std::string spread_stats_csv(const SpreadStats& stats);
std::string distribution_csv(const RelativeDistribution& dist);
std::string size_ecdf_csv(const std::vector<Lots>& sizes);
std::string spectrum_csv(const std::vector<SpectrumPoint>& spectrum);
std::string hx_ecdf_csv(const std::vector<double>& ratios);
std::string deciles_csv(const std::vector<DecileRow>& rows);
std::string cancellation_ratio_csv(const std::map<Tick, double>& ratio);
std::string collapse_pairs_csv(const CollapseReport& report);
std::string qq_table_csv(const std::vector<double>& empirical_quantiles,
                         const std::vector<double>& model_quantiles);

}  // namespace qclob

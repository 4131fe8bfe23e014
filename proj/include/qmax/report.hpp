#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmax/pipeline.hpp"

namespace qmax {

struct EmitOptions {
  bool svg = false;
};

/// The report as JSON with a fixed key order.
nlohmann::ordered_json report_to_json(const AnalysisReport& report);

/// Directory name used for a series label: characters outside
/// [A-Za-z0-9._-] become '_'.
std::string sanitize_label(std::string_view label);

/// Writes report.json, the corridor ranking table (ranking_table.csv/.txt)
/// and per-series ranking.csv, ranking.txt, histogram.csv, pp.csv, qq.csv
/// (plus pp_<family>.csv / qq_<family>.csv for each GoF family and SVGs when
/// requested). A failed series gets error.txt instead. Every CSV is read back
/// and checked before returning. Returns written paths relative to `out_dir`,
/// sorted. Throws IoError with the path on any I/O failure.
std::vector<std::filesystem::path> emit_report(const AnalysisReport& report,
                                               const std::filesystem::path& out_dir,
                                               const EmitOptions& options = {});

/// Human-readable ranking text: "rank  family[, family...] (rss)".
std::string format_ranking_text(const RankingTable& table);

/// Checks header-plus-numeric-rows structure; returns an error message or "".
std::string check_numeric_csv(const std::filesystem::path& path,
                              const std::vector<std::string>& header);

}  // namespace qmax

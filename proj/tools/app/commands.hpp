#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "app/run_config.hpp"

namespace sicf::app {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitMissingInput = 3;
inline constexpr int kExitInvariant = 4;

// Artifact names inside the output directory.
inline constexpr const char* kScoresFile = "scores.jsonl";
inline constexpr const char* kMatricesFile = "matrices.jsonl";
inline constexpr const char* kRanksFile = "ranks.jsonl";
inline constexpr const char* kSelectionFile = "selection.jsonl";
inline constexpr const char* kElimReportFile = "elim_report.json";
inline constexpr const char* kGridSearchFile = "grid_search.jsonl";
inline constexpr const char* kUncertaintyCsv = "uncertainty_table.csv";
inline constexpr const char* kSsdsCsv = "ssds_table.csv";

/// The coefficient grid searched per fusion weight.
const std::vector<double>& coefficient_grid();

void cmd_score(const RunConfig& cfg);
void cmd_fuse(const RunConfig& cfg);
void cmd_select(const RunConfig& cfg);
void cmd_eval_elim(const RunConfig& cfg);
void cmd_report(const RunConfig& cfg, const std::filesystem::path& ssds_input);
void cmd_grid_search(const RunConfig& cfg);
void cmd_split(const RunConfig& cfg);

/// Parses argv, runs one subcommand and maps errors to exit statuses.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sicf::app

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "semcom/config.hpp"

namespace semcom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Scores a recovered text file against an original; prints a JSON report.
int cmd_score(const std::filesystem::path& original, const std::filesystem::path& recovered, double phi,
              std::ostream& out, std::ostream& err);

/// Lists the importance of every triple of one document (csv or json).
int cmd_importance(const SimConfig& cfg, const std::string& doc_id, const std::string& format, std::ostream& out,
                   std::ostream& err);

/// Trains the policy and writes convergence.csv, snapshot.json,
/// summary.json and config.resolved into `run_dir`. Apart from the wall-time
/// fields every output is a pure function of the config.
int cmd_train(const SimConfig& cfg, const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err);

/// Runs every method over the configured seeds; writes compare.csv (and one
/// convergence CSV per method and seed) into `run_dir`.
int cmd_compare(const SimConfig& cfg, const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err);

/// Dumps the user x RB MSS table as CSV.
int cmd_table(const SimConfig& cfg, std::ostream& out, std::ostream& err);

/// Writes a synthetic corpus in the JSON-lines schema.
int cmd_synth(std::size_t documents, std::uint64_t seed, const std::filesystem::path& path, std::ostream& err);

/// Parses a config file plus `key=value` overrides; on failure prints to
/// `err` and returns false.
bool resolve_config(const std::string& path, const std::vector<std::string>& overrides, SimConfig& cfg,
                    std::ostream& err);

}  // namespace semcom::cli

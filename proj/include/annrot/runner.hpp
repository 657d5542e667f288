#pragma once

#include "annrot/results.hpp"

namespace annrot {

// Exit codes shared by the CLI and the suites.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;      // malformed configuration
inline constexpr int kExitRefused = 3;     // mathematical precondition violated
inline constexpr int kExitInconclusive = 4;
inline constexpr int kExitAssert = 5;      // an asserted inequality failed

struct RunOutcome {
  ResultRecord record;
  int exit_code = kExitOk;
  std::string message;
};

// Loads configs/<name>.json from the repository's pinned configuration
// directory (overridable for tests via ANNROT_CONFIG_DIR env var).
json load_config(const std::string& name);

// Validates and dispatches a single-operation config
// ({"schema": "annrot-config-v1", "op": ..., "map": ..., ...}).
RunOutcome run_config(const json& cfg);

// Acceptance suites; each reads its pinned config file.
ResultRecord suite_paper_values();
ResultRecord suite_interval_props();
ResultRecord suite_theorem_c();
ResultRecord suite_structure();
ResultRecord suite_hulls();
ResultRecord suite_algebra();

// name in {paper-values, interval-props, theorem-c, structure, hulls,
// algebra, full}; "full" concatenates all of the above.
RunOutcome run_suite(const std::string& name);

// Renders the SVG artifacts a record supports into out_dir; returns the list
// of files written.
std::vector<std::string> plot_record(const ResultRecord& rec,
                                     const std::string& out_dir);

}  // namespace annrot

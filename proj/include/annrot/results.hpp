#pragma once

#include <string>
#include <vector>

#include "annrot/map.hpp"

namespace annrot {

inline constexpr const char* kResultSchema = "annrot-result-v1";

// One re-checkable inequality: everything needed to re-assert it without
// re-running orbits.
struct AssertEntry {
  std::string name;
  double lhs = 0.0;
  std::string op;  // "<=", "<", ">=", ">", "==", "!="
  double rhs = 0.0;
  bool pass = false;
};

bool evaluate_assert(const AssertEntry& a);

struct ResultRecord {
  json config;                 // full echo of the run configuration
  json payload;                // estimates / regions / certificates
  std::vector<AssertEntry> asserts;
  bool all_pass() const;
  json to_json() const;        // without timing (byte-compared content)
  static ResultRecord from_json(const json& j);
};

// Line-delimited records: one JSON object per line, sections "config",
// "payload", "asserts". Timing/worker info goes to <path>.timing.json so the
// record itself is byte-identical across runs and worker counts.
void write_record(const std::string& path, const ResultRecord& rec,
                  double wall_seconds, int workers);
ResultRecord read_record(const std::string& path);

// Re-validation pass: re-evaluates every stored inequality. Returns the names
// of failing asserts (empty = record checks out).
std::vector<std::string> check_record(const ResultRecord& rec);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace annrot

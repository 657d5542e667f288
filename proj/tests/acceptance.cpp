// Acceptance gate: one pass/fail line per pinned criterion. Criteria 1-8 read
// their inequalities from a single full-suite run; criterion 9 repeats the
// full suite to compare record bytes across runs and worker counts.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "annrot/parallel.hpp"
#include "annrot/runner.hpp"

using namespace annrot;

namespace {

struct Criterion {
  const char* label;
  bool (*match)(const std::string& name);
};

bool starts_with(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }
bool ends_with(const std::string& s, const char* p) {
  size_t n = std::strlen(p);
  return s.size() >= n && s.compare(s.size() - n, n, p) == 0;
}
bool contains(const std::string& s, const char* p) {
  return s.find(p) != std::string::npos;
}

const Criterion kCriteria[] = {
    {"local rotation sets of the linear plane contractions",
     [](const std::string& n) {
       return starts_with(n, "contraction_") ||
              starts_with(n, "quarter_turn_contraction_");
     }},
    {"annular rotation set and escaping orbits of the double-Reeb map",
     [](const std::string& n) { return starts_with(n, "double_reeb_"); }},
    {"zero in three self-similar bands of the twice-Reeb plane map",
     [](const std::string& n) {
       return starts_with(n, "band0_") || starts_with(n, "band1_") ||
              starts_with(n, "band2_") || starts_with(n, "twice_reeb_min");
     }},
    {"interval property and gap convergence across the zoo",
     [](const std::string& n) {
       return contains(n, "_final_gap") || contains(n, "_gap_monotone_");
     }},
    {"heteroclinic certificates (untilted and tilted skew products)",
     [](const std::string& n) {
       return starts_with(n, "untilted_") || starts_with(n, "tilted_");
     }},
    {"branch structure of the tilted iterate",
     [](const std::string& n) {
       return n == "h2_holds" || n == "theta_band0_nonempty" ||
              starts_with(n, "lambda_nesting") || n == "escape_time_cross_check" ||
              starts_with(n, "branch_") || starts_with(n, "backward_invariance");
     }},
    {"estimate hulls against measured Birkhoff hulls",
     [](const std::string& n) {
       return contains(n, "_hull_lo") || contains(n, "_hull_hi") ||
              contains(n, "_in_theta_hull");
     }},
    {"affine, conjugacy, and lift cocycle laws",
     [](const std::string& n) {
       return ends_with(n, "_affine_law") || ends_with(n, "_invariance") ||
              ends_with(n, "_equivariance") || ends_with(n, "_inverse") ||
              ends_with(n, "_cocycle");
     }},
};

std::string record_bytes(const ResultRecord& rec, const char* path) {
  write_record(path, rec, 0.0, worker_count());
  return read_text_file(path);
}

}  // namespace

int main() {
  bool all_pass = true;
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  set_worker_count(8);
  RunOutcome full1 = run_suite("full");
  std::printf("full suite run 1: %zu asserts in %.1f s\n",
              full1.record.asserts.size(), elapsed());

  for (size_t c = 0; c < std::size(kCriteria); ++c) {
    size_t total = 0, failed = 0;
    for (const auto& a : full1.record.asserts) {
      if (!kCriteria[c].match(a.name)) continue;
      ++total;
      if (!a.pass) {
        ++failed;
        std::printf("  criterion %zu offender: %s (%.17g %s %.17g)\n", c + 1,
                    a.name.c_str(), a.lhs, a.op.c_str(), a.rhs);
      }
    }
    bool pass = total > 0 && failed == 0;
    all_pass = all_pass && pass;
    std::printf("criterion %zu [%s]: %s (%zu asserts, %zu failed)\n", c + 1,
                kCriteria[c].label, pass ? "PASS" : "FAIL", total, failed);
  }
  size_t unclaimed = 0;
  for (const auto& a : full1.record.asserts) {
    bool claimed = false;
    for (const auto& crit : kCriteria) claimed = claimed || crit.match(a.name);
    if (!claimed) ++unclaimed;
  }
  if (unclaimed > 0) {
    std::printf("coverage gap: %zu suite asserts not claimed by any criterion\n",
                unclaimed);
    all_pass = false;
  }

  // criterion 9: byte-identical records across repeat runs and worker counts
  std::string r1 = record_bytes(full1.record, "acceptance_records/full_run1.jsonl");
  RunOutcome full2 = run_suite("full");
  std::string r2 = record_bytes(full2.record, "acceptance_records/full_run2.jsonl");
  std::printf("full suite run 2 done at %.1f s\n", elapsed());
  set_worker_count(1);
  RunOutcome full3 = run_suite("full");
  std::string r3 = record_bytes(full3.record, "acceptance_records/full_workers1.jsonl");
  std::printf("full suite run 3 (1 worker) done at %.1f s\n", elapsed());
  set_worker_count(0);
  bool det = (r1 == r2) && (r1 == r3);
  all_pass = all_pass && det;
  std::printf("criterion 9 [byte-identical records, reruns and 1 vs 8 workers]: %s\n",
              det ? "PASS" : "FAIL");

  std::printf("acceptance: %s (%.1f s)\n", all_pass ? "PASS" : "FAIL", elapsed());
  return all_pass ? 0 : 1;
}

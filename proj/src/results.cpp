#include "annrot/results.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace annrot {

bool evaluate_assert(const AssertEntry& a) {
  if (a.op == "<=") return a.lhs <= a.rhs;
  if (a.op == "<") return a.lhs < a.rhs;
  if (a.op == ">=") return a.lhs >= a.rhs;
  if (a.op == ">") return a.lhs > a.rhs;
  if (a.op == "==") return a.lhs == a.rhs;
  if (a.op == "!=") return a.lhs != a.rhs;
  throw SchemaError("unknown assert operator '" + a.op + "'");
}

bool ResultRecord::all_pass() const {
  for (const auto& a : asserts)
    if (!a.pass) return false;
  return true;
}

json ResultRecord::to_json() const {
  json arr = json::array();
  for (const auto& a : asserts)
    arr.push_back(json{{"name", a.name}, {"lhs", a.lhs}, {"op", a.op},
                       {"rhs", a.rhs}, {"pass", a.pass}});
  return json{{"schema", kResultSchema}, {"config", config}, {"payload", payload},
              {"asserts", arr}};
}

ResultRecord ResultRecord::from_json(const json& j) {
  if (j.value("schema", "") != kResultSchema)
    throw SchemaError("result record: unknown schema tag");
  ResultRecord rec;
  rec.config = j.at("config");
  rec.payload = j.at("payload");
  for (const auto& a : j.at("asserts")) {
    AssertEntry e;
    e.name = a.at("name").get<std::string>();
    e.lhs = a.at("lhs").get<double>();
    e.op = a.at("op").get<std::string>();
    e.rhs = a.at("rhs").get<double>();
    e.pass = a.at("pass").get<bool>();
    rec.asserts.push_back(e);
  }
  return rec;
}

void write_record(const std::string& path, const ResultRecord& rec,
                  double wall_seconds, int workers) {
  json full = rec.to_json();
  std::ostringstream out;
  out << json{{"schema", kResultSchema}, {"section", "config"},
              {"config", full["config"]}}.dump() << "\n";
  out << json{{"section", "payload"}, {"payload", full["payload"]}}.dump() << "\n";
  out << json{{"section", "asserts"}, {"asserts", full["asserts"]}}.dump() << "\n";
  write_text_file(path, out.str());
  write_text_file(path + ".timing.json",
                  json{{"wall_seconds", wall_seconds}, {"workers", workers}}.dump() + "\n");
}

ResultRecord read_record(const std::string& path) {
  std::istringstream in(read_text_file(path));
  json merged;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.contains("schema") && j.value("schema", "") != kResultSchema)
      throw SchemaError("result record: unknown schema tag in " + path);
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "section" && it.key() != "schema") merged[it.key()] = it.value();
  }
  merged["schema"] = kResultSchema;
  if (!merged.contains("asserts")) merged["asserts"] = json::array();
  if (!merged.contains("payload")) merged["payload"] = json::object();
  if (!merged.contains("config")) merged["config"] = json::object();
  return ResultRecord::from_json(merged);
}

std::vector<std::string> check_record(const ResultRecord& rec) {
  std::vector<std::string> failures;
  for (const auto& a : rec.asserts) {
    bool now = evaluate_assert(a);
    if (!now || now != a.pass)
      failures.push_back(a.name + " (" + std::to_string(a.lhs) + " " + a.op + " " +
                         std::to_string(a.rhs) + ")");
  }
  return failures;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (size_t k = 0; k < header.size(); ++k)
    out << header[k] << (k + 1 < header.size() ? "," : "\n");
  out.precision(17);
  for (const auto& row : rows)
    for (size_t k = 0; k < row.size(); ++k)
      out << row[k] << (k + 1 < row.size() ? "," : "\n");
  write_text_file(path, out.str());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write file: " + path);
  out << content;
}

}  // namespace annrot

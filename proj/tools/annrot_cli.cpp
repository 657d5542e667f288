#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "annrot/parallel.hpp"
#include "annrot/runner.hpp"

using namespace annrot;

namespace {

json parse_map_flag(const std::string& s) {
  if (!s.empty() && s.front() == '{') return json::parse(s);
  return json(s);
}

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct Cli {
  std::string config_path;
  std::string out_path;
  int threads = 0;
  long seed = -1;
  json cfg;  // assembled per-run configuration

  json base_config() const {
    json c = json::object();
    if (!config_path.empty()) c = json::parse(read_text_file(config_path));
    if (seed >= 0) c["plan"]["seed"] = seed;
    return c;
  }
};

int finish(const Cli& cli, const std::string& default_out, RunOutcome out,
           double wall_seconds) {
  std::string path = cli.out_path.empty() ? default_out : cli.out_path;
  write_record(path, out.record, wall_seconds, worker_count());
  size_t failed = 0;
  for (const auto& a : out.record.asserts) {
    if (!a.pass) ++failed;
    std::printf("[%s] %s  (%.17g %s %.17g)\n", a.pass ? "pass" : "FAIL",
                a.name.c_str(), a.lhs, a.op.c_str(), a.rhs);
  }
  if (!out.message.empty()) std::printf("%s\n", out.message.c_str());
  std::printf("record: %s  (asserts: %zu, failed: %zu)\n", path.c_str(),
              out.record.asserts.size(), failed);
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotation-set experiments for lifted annulus homeomorphisms"};
  app.require_subcommand(1);
  // global options (--out, --threads, ...) may follow the subcommand
  app.fallthrough();
  Cli cli;
  app.add_option("--config", cli.config_path, "configuration file (JSON)");
  app.add_option("--out", cli.out_path, "result record path");
  app.add_option("--threads", cli.threads, "worker count (0 = hardware)");
  app.add_option("--seed", cli.seed, "override the seed plan's RNG seed");

  // per-subcommand flag shortcuts; flags override --config fields
  std::string map_flag, point_flag, heights_flag, mode_flag, sign_flag, base_flag;
  std::string suite_name = "full", record_in, plot_dir = "plots";
  double eps_flag = -1.0;
  json over = json::object();  // numeric overrides keyed by config field

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--map", map_flag, "map family name or inline JSON spec");
    sub->add_option("--eps", eps_flag, "tilt parameter for --map skew-het");
    for (const char* f : {"horizon", "m", "y_lo", "y_hi", "grid_res", "n",
                          "level", "side", "burn_in", "length", "upper", "lower",
                          "depth", "x_lo", "x_hi", "cells_per_unit", "gamma0",
                          "gamma1", "gamma2"}) {
      std::string flag = "--" + std::string(f);
      for (auto& ch : flag) if (ch == '_') ch = '-';
      sub->add_option_function<double>(
          flag, [&over, f](double v) { over[f] = v; }, f);
    }
  };

  std::vector<std::string> ops = {"rho-n", "rho-k", "rho-loc", "rho-ann",
                                  "rho-mes", "theta", "branches", "theorem-c"};
  for (const auto& op : ops) {
    CLI::App* sub = app.add_subcommand(op, "run the '" + op + "' operation");
    add_common(sub);
    if (op == "rho-n") sub->add_option("--point", point_flag, "seed point x,y");
    if (op == "rho-ann")
      sub->add_option("--heights", heights_flag, "window heights, comma separated");
    if (op == "rho-loc") {
      for (const char* f : {"v0", "step", "w_levels"}) {
        std::string flag = "--" + std::string(f);
        for (auto& ch : flag) if (ch == '_') ch = '-';
        sub->add_option_function<double>(
            flag, [&over, f](double v) { over["schedule"][f] = v; }, f);
      }
    }
    if (op == "theta") sub->add_option("--mode", mode_flag, "maximal|forward|backward|classify");
    if (op == "branches") {
      sub->add_option("--sign", sign_flag, "unstable|stable");
      sub->add_option("--base-point", base_flag, "branch base point x,y");
    }
  }
  CLI::App* suite = app.add_subcommand("suite", "run an acceptance suite");
  suite->add_option("name", suite_name, "paper-values|interval-props|theorem-c|structure|hulls|algebra|full");
  CLI::App* plot = app.add_subcommand("plot", "render a record's SVG artifacts");
  plot->add_option("record", record_in, "result record path")->required();
  plot->add_option("--dir", plot_dir, "output directory");
  CLI::App* check = app.add_subcommand("check", "re-validate a stored record");
  check->add_option("record", record_in, "result record path")->required();

  CLI11_PARSE(app, argc, argv);
  set_worker_count(cli.threads);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    auto t0 = std::chrono::steady_clock::now();
    auto wall = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
    };

    if (name == "plot") {
      ResultRecord rec = read_record(record_in);
      for (const auto& f : plot_record(rec, plot_dir))
        std::printf("wrote %s\n", f.c_str());
      return kExitOk;
    }
    if (name == "check") {
      ResultRecord rec = read_record(record_in);
      std::vector<std::string> bad = check_record(rec);
      for (const auto& b : bad) std::printf("[FAIL] %s\n", b.c_str());
      std::printf("%zu asserts re-validated, %zu failed\n", rec.asserts.size(),
                  bad.size());
      return bad.empty() ? kExitOk : kExitAssert;
    }
    if (name == "suite") {
      RunOutcome out = run_suite(suite_name);
      return finish(cli, "out/suite_" + suite_name + ".jsonl", std::move(out), wall());
    }

    json cfg = cli.base_config();
    cfg["op"] = name;
    if (!map_flag.empty()) cfg["map"] = parse_map_flag(map_flag);
    if (eps_flag >= 0.0) cfg["eps"] = eps_flag;
    for (auto it = over.begin(); it != over.end(); ++it) cfg[it.key()] = it.value();
    if (name == "rho-loc" && cfg.contains("depth")) {
      cfg["schedule"]["depth"] = cfg["depth"];
      cfg.erase("depth");
    }
    if (!point_flag.empty()) cfg["point"] = parse_csv_doubles(point_flag);
    if (!heights_flag.empty()) cfg["window_heights"] = parse_csv_doubles(heights_flag);
    if (!mode_flag.empty()) cfg["mode"] = mode_flag;
    if (!sign_flag.empty()) cfg["sign"] = sign_flag;
    if (!base_flag.empty()) cfg["base_point"] = parse_csv_doubles(base_flag);
    RunOutcome out = run_config(cfg);
    if (name == "rho-n" && out.record.payload.contains("value"))
      std::printf("rho_n = %.17g\n", out.record.payload["value"].get<double>());
    return finish(cli, "out/" + name + ".jsonl", std::move(out), wall());
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return kExitSchema;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return kExitSchema;
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "refused: %s\n", e.what());
    return kExitRefused;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitAssert;
  }
}

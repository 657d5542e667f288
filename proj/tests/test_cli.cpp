#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "annrot/parallel.hpp"
#include "annrot/runner.hpp"

using namespace annrot;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = "./annrot " + args + " > /dev/null 2> /dev/null";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) { return read_text_file(path); }

}  // namespace

TEST_CASE("result records round trip and re-validate") {
  ResultRecord rec;
  rec.config = json{{"op", "demo"}};
  rec.payload = json{{"value", 0.5}};
  rec.asserts.push_back({"half_below_one", 0.5, "<=", 1.0, true});
  rec.asserts.push_back({"half_is_half", 0.5, "==", 0.5, true});
  write_record("records/demo.jsonl", rec, 1.25, 4);

  ResultRecord back = read_record("records/demo.jsonl");
  CHECK(back.config == rec.config);
  CHECK(back.payload == rec.payload);
  REQUIRE(back.asserts.size() == 2);
  CHECK(check_record(back).empty());
  CHECK(back.all_pass());

  // timing lives in the sidecar, never in the byte-compared record
  CHECK(slurp("records/demo.jsonl").find("wall") == std::string::npos);
  CHECK(slurp("records/demo.jsonl.timing.json").find("wall_seconds") !=
        std::string::npos);

  // a tampered inequality is caught by the re-validation pass
  back.asserts[0].op = ">=";
  std::vector<std::string> bad = check_record(back);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].rfind("half_below_one", 0) == 0);
}

TEST_CASE("run_config dispatches and flags schema violations with field paths") {
  json cfg = json::parse(read_text_file(std::string(ANNROT_CONFIG_DIR) +
                                        "/demo_rho_k.json"));
  RunOutcome out = run_config(cfg);
  CHECK(out.exit_code == kExitOk);
  CHECK(out.record.payload.contains("rho_k"));

  json missing = cfg;
  missing.erase("horizon");
  try {
    run_config(missing);
    FAIL("expected a SchemaError naming the missing field");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("horizon") != std::string::npos);
  }

  json bad_op = cfg;
  bad_op["op"] = "rho-zz";
  CHECK_THROWS_AS(run_config(bad_op), SchemaError);
}

TEST_CASE("run_config is deterministic across worker counts") {
  json cfg = json::parse(read_text_file(std::string(ANNROT_CONFIG_DIR) +
                                        "/demo_rho_k.json"));
  set_worker_count(1);
  std::string one = run_config(cfg).record.to_json().dump();
  set_worker_count(8);
  std::string eight = run_config(cfg).record.to_json().dump();
  set_worker_count(0);
  CHECK(one == eight);
}

TEST_CASE("cli: operations, exit codes, plot and check") {
  REQUIRE(std::filesystem::exists("annrot"));

  CHECK(run_cli("rho-n --map identity --n 5 --point 0.3,0.0 --out cli/rho_n.jsonl") == 0);
  ResultRecord rn = read_record("cli/rho_n.jsonl");
  CHECK(rn.payload.at("value").get<double>() == doctest::Approx(0.0));

  CHECK(run_cli("rho-k --map twist --y-lo -0.5 --y-hi 0.5 --m 1 --horizon 50 "
                "--out cli/rho_k.jsonl") == 0);
  CHECK(run_cli("check cli/rho_k.jsonl") == 0);
  CHECK(run_cli("plot cli/rho_k.jsonl --dir cli/plots") == 0);

  // malformed config -> schema exit code
  CHECK(run_cli("rho-k --map '{\"family\":\"martian\"}' --y-lo 0 --y-hi 1 "
                "--m 1 --horizon 10") == kExitSchema);
  CHECK(run_cli("rho-n --map identity --point 0.3,0.0") == kExitSchema);

  // violated mathematical precondition -> refusal exit code
  CHECK(run_cli("rho-k --map identity --y-lo 0 --y-hi 1 --m 20 --horizon 10") ==
        kExitRefused);
}

TEST_CASE("cli: staircase plot for a local rotation record") {
  CHECK(run_cli("rho-loc --map '{\"family\":\"plane_linear\",\"angle_turns\":0.25,"
                "\"modulus\":0.5}' --v0 1 --step 1 --depth 3 --w-levels 2 "
                "--side 1 --m 1 --horizon 100 --out cli/rho_loc.jsonl") == 0);
  CHECK(run_cli("plot cli/rho_loc.jsonl --dir cli/plots_loc") == 0);
  bool found_staircase = false;
  for (const auto& e : std::filesystem::directory_iterator("cli/plots_loc"))
    if (e.path().string().find("staircase") != std::string::npos)
      found_staircase = true;
  CHECK(found_staircase);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "kpath/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("kpath_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const std::string& capture = "") {
  std::string cmd = std::string(KPATH_CLI_PATH) + " " + args;
  if (!capture.empty()) cmd += " > " + capture + " 2>&1";
  else cmd += " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

}  // namespace

TEST_CASE("list enumerates exactly the registered experiments") {
  const std::string out = (scratch_dir() / "list.txt").string();
  CHECK(run_cli("list", out) == 0);
  const std::string text = kpath::read_text_file(out);
  CHECK(text.find("12 experiments") != std::string::npos);
  for (const char* name :
       {"mercer-recovery", "degenerate-inequality", "sharpness", "tau-threshold",
        "lemma61-sweep", "moment-growth", "criterion-concordance", "u-closed-form",
        "franklin-beta", "sequence-criteria", "determinism", "vp-consistency"})
    CHECK(text.find(name) != std::string::npos);
}

TEST_CASE("a subcommand writes payloads plus a hashed manifest") {
  const fs::path out = scratch_dir() / "sharp";
  CHECK(run_cli("--out " + out.string() + " sharpness --nu-max 3 --count 20") == 0);
  CHECK(fs::exists(out / "sharpness.csv"));
  CHECK(fs::exists(out / "sharpness_summary.json"));
  CHECK(fs::exists(out / "manifest_sharpness.json"));

  json summary = json::parse(kpath::read_text_file((out / "sharpness_summary.json").string()));
  CHECK(summary["max_abs_deviation"].get<double>() < 1e-6);

  json manifest = json::parse(kpath::read_text_file((out / "manifest_sharpness.json").string()));
  CHECK(manifest["experiment"] == "sharpness");
  CHECK(manifest.contains("config_hash"));
  CHECK(manifest.contains("generated_at"));
  CHECK(manifest["artifacts"].size() == 2);
  // The CSV itself carries no timestamp.
  const std::string csv = kpath::read_text_file((out / "sharpness.csv").string());
  CHECK(csv.rfind("nu,", 0) == 0);
}

TEST_CASE("reruns with the same seed are byte-identical") {
  const fs::path a = scratch_dir() / "det_a";
  const fs::path b = scratch_dir() / "det_b";
  const std::string args = " --seed 5 lemma61 --sweep 30 --max-degree 8";
  CHECK(run_cli("--out " + a.string() + args) == 0);
  CHECK(run_cli("--out " + b.string() + args) == 0);
  CHECK(kpath::read_text_file((a / "lemma61_sweep.csv").string()) ==
        kpath::read_text_file((b / "lemma61_sweep.csv").string()));
  CHECK(kpath::read_text_file((a / "lemma61_summary.json").string()) ==
        kpath::read_text_file((b / "lemma61_summary.json").string()));
}

TEST_CASE("named experiments run from a config file") {
  const fs::path out = scratch_dir() / "from_config";
  const std::string cfg = (scratch_dir() / "exp.conf").string();
  kpath::write_text_file(cfg, "experiment = sharpness\nseed = 11\nout_dir = " +
                                  out.string() + "\n");
  CHECK(run_cli("run --config " + cfg) == 0);
  CHECK(fs::exists(out / "sharpness.csv"));
}

TEST_CASE("usage and configuration problems exit with code 2") {
  CHECK(run_cli("bogus-subcommand") == 2);
  CHECK(run_cli("") == 2);  // a subcommand is required
  CHECK(run_cli("run --experiment no-such-experiment") == 2);
  CHECK(run_cli("mercer --kernel unknown_kernel") == 2);

  const std::string cfg = (scratch_dir() / "bad.conf").string();
  kpath::write_text_file(cfg, "experiment = sharpness\nbogus_key = 3\n");
  CHECK(run_cli("run --config " + cfg) == 2);
}

TEST_CASE("numeric failures exit with code 3") {
  // Degree 33 cannot be resolved on a 64-point grid.
  CHECK(run_cli("--out " + (scratch_dir() / "num").string() +
                " vpsum --grid 64 --degree 33 --trials 1") == 3);
}

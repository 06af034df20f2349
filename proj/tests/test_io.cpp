#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <string>

#include "kpath/io.hpp"

using namespace kpath;

namespace {
const std::set<std::string> keys{"alpha", "beta", "run.seed", "run.grid"};
}

TEST_CASE("config parses sections, comments and typed values") {
  const std::string text =
      "# header comment\n"
      "alpha = 1.5\n"
      "beta = hello world\n"
      "\n"
      "[run]\n"
      "seed = 42\n"
      "grid = 256  \n";
  Config cfg = Config::parse(text, keys);
  CHECK(cfg.get_double("alpha", 0.0) == 1.5);
  CHECK(cfg.get("beta", "") == "hello world");
  CHECK(cfg.get_u64("run.seed", 0) == 42);
  CHECK(cfg.get_int("run.grid", 0) == 256);
  CHECK(cfg.get_int("missing", 7) == 7);
  CHECK(cfg.has("alpha"));
  CHECK(!cfg.has("gamma"));
  CHECK(cfg.require("beta") == "hello world");
  CHECK_THROWS_AS(cfg.require("gamma"), ConfigError);
}

TEST_CASE("config rejects malformed input with line context") {
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    try {
      Config::parse(text, keys);
      FAIL("expected ConfigError for: " << text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  expect_error("alpha = 1\nbogus = 2\n", "line 2");
  expect_error("bogus = 2\n", "unknown key 'bogus'");
  expect_error("alpha = 1\nalpha = 2\n", "duplicate key");
  expect_error("[run\nseed = 1\n", "unterminated section");
  expect_error("[]\n", "empty section");
  expect_error("alpha\n", "expected key = value");
  expect_error("= 3\n", "empty key");
}

TEST_CASE("typed getters reject garbage values") {
  Config cfg = Config::parse("alpha = 1.5x\nbeta = -3\n[run]\nseed = -1\n", keys);
  CHECK_THROWS_AS(cfg.get_double("alpha", 0.0), ConfigError);
  CHECK(cfg.get_int("beta", 0) == -3);
  CHECK_THROWS_AS(cfg.get_u64("run.seed", 0), ConfigError);
}

TEST_CASE("double formatting round-trips through text") {
  for (double x : {0.1, 1.0 / 3.0, 6.283185307179586, 1e-17, -123456.789,
                   2.2250738585072014e-308}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("csv table layout and validation") {
  std::string csv = csv_table({"k", "value"}, {{1.0, 2.0}, {0.5, 0.25}});
  CHECK(csv == "k,value\n1,0.5\n2,0.25\n");
  CHECK(csv_table({"empty"}, {{}}) == "empty\n");
  CHECK_THROWS_AS(csv_table({"a", "b"}, {{1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(csv_table({"a", "b"}, {{1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("fnv1a matches the published test vectors") {
  CHECK(fnv1a_hash("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a_hash("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a_hash("foobar") == 0x85944171f73967e8ULL);
  CHECK(fnv1a_hash("x") != fnv1a_hash("y"));
}

TEST_CASE("text files round-trip bytes exactly") {
  const auto path = (std::filesystem::temp_directory_path() / "kpath_io_test.txt").string();
  const std::string payload = "line1\nline2\r\nbinary:\x01\x02\n";
  write_text_file(path, payload);
  CHECK(read_text_file(path) == payload);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file(path), std::runtime_error);
  CHECK_THROWS_AS(write_text_file("/nonexistent_dir_zzz/file.txt", "x"),
                  std::runtime_error);
}

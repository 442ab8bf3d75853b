#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "rbnedit/config.hpp"

using namespace rbnedit;

TEST_SUITE("config") {

TEST_CASE("defaults fill everything but the written keys") {
  const std::vector<ExperimentSpec> grid = parse_config("mode = stationary\n");
  REQUIRE(grid.size() == 1);
  const ExperimentSpec& spec = grid[0];
  CHECK(spec.mode == Mode::Stationary);
  CHECK(spec.r == 100);
  CHECK(spec.n == 10);
  CHECK(spec.n_input == 10);
  CHECK(spec.b == 2);
  CHECK(spec.b_prime == 2);
  CHECK(spec.k == 0);
  CHECK(spec.generations == 50000);
  CHECK(spec.cycles == 100);
  CHECK(spec.runs_per_landscape == 10);
  CHECK(spec.landscapes == 10);
  CHECK(spec.log_every == 50);
  CHECK(spec.seed == 1);
  CHECK_FALSE(spec.scramble_control);
  CHECK(spec.editing);
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
  const std::string text =
      "# experiment\n"
      "\n"
      "  mode = nonstationary  \n"
      "\tR=40\n"
      "seed = 99\n";
  const std::vector<ExperimentSpec> grid = parse_config(text);
  REQUIRE(grid.size() == 1);
  CHECK(grid[0].mode == Mode::Nonstationary);
  CHECK(grid[0].r == 40);
  CHECK(grid[0].seed == 99);
}

TEST_CASE("unknown keys are rejected with a position") {
  try {
    parse_config("R = 50\nBB = 3\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).find("unknown key 'BB'") !=
          std::string::npos);
  }
}

TEST_CASE("duplicate keys are rejected") {
  CHECK_THROWS_AS(parse_config("R = 50\nR = 60\n"), ConfigError);
}

TEST_CASE("malformed lines and values carry positions") {
  try {
    parse_config("R 50\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 1);
  }
  try {
    parse_config("R = fifty\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(parse_config("R =\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("seed = -4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("editing = maybe\n"), ConfigError);
}

TEST_CASE("list and range syntax expands the grid in order") {
  const std::vector<ExperimentSpec> grid =
      parse_config("B = 3,1\nK = 0..2\nN = 6\n");
  REQUIRE(grid.size() == 6);
  int idx = 0;
  for (int b : {1, 3})
    for (int k : {0, 1, 2}) {
      CHECK(grid[static_cast<std::size_t>(idx)].b == b);
      CHECK(grid[static_cast<std::size_t>(idx)].k == k);
      // B' follows each entry's B when not pinned.
      CHECK(grid[static_cast<std::size_t>(idx)].b_prime == b);
      ++idx;
    }
  CHECK_THROWS_AS(parse_config("B = 5..2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("B = 1,,2\n"), ConfigError);

  const std::vector<ExperimentSpec> pinned =
      parse_config("B = 1..2\nb_prime = 3\n");
  CHECK(pinned[0].b_prime == 3);
  CHECK(pinned[1].b_prime == 3);
}

TEST_CASE("coupled grids expand C; uncoupled grids collapse it") {
  const std::vector<ExperimentSpec> coupled =
      parse_config("mode = hetero_coevo\nC = 1,5\nN = 6\n");
  REQUIRE(coupled.size() == 2);
  CHECK(coupled[0].c == 1);
  CHECK(coupled[1].c == 5);

  const std::vector<ExperimentSpec> uncoupled =
      parse_config("mode = stationary\nC = 1,5\nN = 6\n");
  CHECK(uncoupled.size() == 1);
}

TEST_CASE("validation failures point at the user's key") {
  try {
    parse_config("N = 6\nK = 7\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("K must be in [0, N-1]") !=
          std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("R = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("B = 7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("mode = hetero_coevo\nS = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("cycles = 0\n"), ConfigError);
}

TEST_CASE("presets pin the documented profiles") {
  const std::vector<ExperimentSpec> desk = parse_config("preset = desk\n");
  REQUIRE(desk.size() == 5);  // B 1..5, K = 0
  CHECK(desk[0].r == 50);
  CHECK(desk[0].generations == 10000);
  CHECK(desk[0].landscapes == 5);
  CHECK(desk[0].runs_per_landscape == 10);
  CHECK(desk[0].b == 1);
  CHECK(desk[4].b == 5);
  CHECK(desk[0].k == 0);

  const std::vector<ExperimentSpec> paper = parse_config("preset = paper\n");
  REQUIRE(paper.size() == 30);  // B 1..5 x K 0..5
  CHECK(paper[0].r == 100);
  CHECK(paper[0].generations == 50000);
  CHECK(paper[0].landscapes == 10);

  // Explicit keys override the preset regardless of line order.
  const std::vector<ExperimentSpec> tweaked =
      parse_config("R = 64\npreset = desk\nK = 0..1\n");
  REQUIRE(tweaked.size() == 10);
  CHECK(tweaked[0].r == 64);
  CHECK(tweaked[0].generations == 10000);

  CHECK_THROWS_AS(parse_config("preset = huge\n"), ConfigError);
}

TEST_CASE("missing config files are reported") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/path.cfg"),
                  std::invalid_argument);
}

}  // TEST_SUITE

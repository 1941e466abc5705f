#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"

using namespace tmlab::cli;

TEST_SUITE("cli") {
  TEST_CASE("sweep specs") {
    const auto a = parse_sweep("p=1.5:0.5:3");
    CHECK(a.key == "p");
    CHECK(a.values == std::vector<double>{1.5, 2.0, 2.5, 3.0});
    CHECK(parse_sweep("k=1,4,9").values == std::vector<double>{1, 4, 9});
    CHECK_THROWS(parse_sweep("p"));
    CHECK_THROWS(parse_sweep("p=1:0:2"));
    CHECK(sweep_path("dir/out.json", "p", 1.5) == "dir/out_p1.5.json");
    RunConfig c;
    set_field(c, "alpha-ratio", 1.2);
    set_field(c, "N", 4.0);
    CHECK(c.alpha_ratio == 1.2);
    CHECK(c.N == 4);
    CHECK_THROWS(set_field(c, "out", 1.0));
  }

  TEST_CASE("non-finite numbers and CSV") {
    CHECK(num(INFINITY) == "inf");
    CHECK(num(-INFINITY) == "-inf");
    CHECK(num(NAN) == "nan");
    CHECK(num(0.5) == 0.5);
    CsvTable t{{"a", "b"}, {{0.1, 2.0}, {INFINITY, 1e-300}}};
    CHECK(to_csv(t) == "a,b\n0.1,2\ninf,1e-300\n");
  }

  TEST_CASE("atomic write replaces the target") {
    const auto path = std::filesystem::temp_directory_path() / "tmlab_unit_atomic.txt";
    write_atomic(path.string(), "first");
    write_atomic(path.string(), "second");
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == "second");
    std::filesystem::remove(path);
  }

  TEST_CASE("documents are deterministic and carry the schema fields") {
    RunConfig c;
    c.command = "weight";
    c.R = "inf";
    c.grid = 10;
    const auto a = document(c, run_command(c), 0.0).dump();
    const auto b = document(c, run_command(c), 1.0).dump();
    CHECK(a == b);
    const auto d = document(c, run_command(c), 0.0);
    CHECK(d["schema_version"] == kSchemaVersion);
    CHECK(d["config"]["R"] == "inf");
    CHECK(d["timing"].is_null());
    c.command = "nope";
    CHECK_THROWS(run_command(c));
  }
}

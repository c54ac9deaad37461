#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "generators.hpp"
#include "leafcurrent/commands.hpp"
#include "leafcurrent/config.hpp"
#include "leafcurrent/reports.hpp"

using namespace leafcurrent;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("leafcurrent_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig random_config(gen::Rng& rng) {
  RunConfig c;
  const auto e = gen::eta(rng);
  c.a = e.a;
  c.b = rng.coin() ? e.b : -e.b;
  c.profile = gen::profile_spec(rng);
  c.A = rng.log_uniform(0.1, 100.0);
  c.quad.tol_rel = rng.log_uniform(1e-12, 1e-4);
  c.quad.tol_abs = rng.log_uniform(1e-16, 1e-8);
  c.quad.max_subdivisions = rng.integer(100, 5000);
  c.quad.tail_cutoff_t = rng.uniform(10.0, 100.0);
  c.deltas.clear();
  double d = rng.uniform(0.5, 0.99);
  for (int i = rng.integer(1, 6); i > 0; --i) c.deltas.push_back(d *= rng.uniform(0.1, 0.9));
  c.s_values.clear();
  double s = rng.uniform(0.5, 3.0);
  for (int i = rng.integer(1, 6); i > 0; --i) c.s_values.push_back(s *= rng.uniform(1.1, 4.0));
  c.lambda = rng.uniform(0.1, 2.0);
  c.out = "out dir " + std::to_string(rng.integer(0, 999));
  c.threads = rng.integer(1, 8);
  c.seed = static_cast<std::uint64_t>(rng.integer(0, 1 << 30)) * 7919u;
  c.leaf_grid = rng.integer(2, 400);
  c.extend_grid = rng.integer(2, 400);
  return c;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "leafcurrent");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_SUITE("cli_reports") {
  TEST_CASE("property: config text round-trips exactly") {
    gen::Rng rng(81);
    for (int k = 0; k < 200; ++k) {
      const RunConfig c = random_config(rng);
      const std::string text = to_config_text(c);
      INFO(text);
      CHECK(parse_config_text(text) == c);
      CHECK_NOTHROW(c.validate());
    }
  }

  TEST_CASE("config parser: defaults, comments, errors") {
    CHECK(parse_config_text("") == RunConfig{});
    const RunConfig c = parse_config_text("# comment\n[geometry]\na = -2\n; other\n[current_mass]\ndeltas = 0.4,0.1\n");
    CHECK(c.a == -2.0);
    CHECK(c.deltas == std::vector<double>{0.4, 0.1});
    CHECK_THROWS_AS(parse_config_text("[geometry]\nc = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[plots]\na = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[geometry]\na = one\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[cli_reports]\nthreads = 1.5\n"), std::invalid_argument);

    RunConfig bad;
    bad.b = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = RunConfig{};
    bad.deltas = {0.1, 0.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = RunConfig{};
    bad.profile = "power:2";
    CHECK_THROWS(bad.validate());
  }

  TEST_CASE("negative b swaps the coordinates") {
    RunConfig c;
    c.a = 1.0;
    c.b = -1.0;
    std::string log;
    const Hyperbolicity h = config_hyperbolicity(c, &log);
    CHECK(h.a == doctest::Approx(0.5));
    CHECK(h.b == doctest::Approx(0.5));
    CHECK(log.find("b < 0") != std::string::npos);
    c.b = 1.0;
    log.clear();
    config_hyperbolicity(c, &log);
    CHECK(log.empty());
  }

  TEST_CASE("CSV layout") {
    CsvTable t({"x", "note"});
    t.add_cells({"1", "plain"});
    t.add_cells({"2", "has, comma and \"quotes\""});
    CHECK(t.str() == "x,note\r\n1,plain\r\n2,\"has, comma and \"\"quotes\"\"\"\r\n");
    CsvTable n({"a", "b"});
    n.add_row({0.1, 1e-300});
    CHECK(n.str() == "a,b\r\n0.1,1e-300\r\n");
    CHECK_THROWS(n.add_row({1.0}));
  }

  TEST_CASE("hashes and timestamps") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(iso8601_utc(std::chrono::system_clock::time_point{}) == "1970-01-01T00:00:00Z");
  }

  TEST_CASE("SVG output is well formed enough to open") {
    const std::string svg = SvgPlot("t<1>", "x", "y").log_x().log_y().add("s", {1, 10, 100}, {1, 0.1, 0.01}).str();
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("t&lt;1&gt;") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    const std::string heat = heat_map_svg("h", "x", "y", {0, 1}, {0, 1}, {1, 2, NAN, 4}, true);
    CHECK(heat.find("</svg>") != std::string::npos);
    CHECK_THROWS(heat_map_svg("h", "x", "y", {0, 1}, {0, 1}, {1, 2, 3}, false));
  }

  TEST_CASE("no arguments prints usage and exits nonzero; bad input exits 2") {
    std::string text;
    CHECK(run_cli({}, &text) == 2);
    CHECK(text.find("Usage") != std::string::npos);
    CHECK(run_cli({"frobnicate"}) == 2);
    CHECK(run_cli({"leaf", "--b", "0"}) == 2);
    CHECK(run_cli({"leaf", "--config", "/nonexistent.ini"}) == 2);
    CHECK(run_cli({"--help"}) == 0);
  }

  TEST_CASE("leaf command: rows, moduli, manifest") {
    const fs::path dir = scratch_dir("leaf");
    const fs::path ini = fs::temp_directory_path() / "leafcurrent_test_leaf.ini";
    {
      std::ofstream(ini) << "[cli_reports]\nleaf_grid = 20\n";
    }
    std::string text;
    REQUIRE(run_cli({"leaf", "--config", ini.string(), "--out", dir.string(), "--a", "0.5"}, &text) == 0);
    const std::string csv = slurp(dir / "leaf.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 20 * 20 + 1);

    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "u,v,re_z1,im_z1,re_z2,im_z2,abs_z1,abs_z2\r");
    while (std::getline(rows, line)) {
      double vals[8];
      char comma;
      std::istringstream ls(line);
      for (int i = 0; i < 8; ++i) ls >> vals[i] >> comma;
      CHECK(vals[6] < 1.0);
      CHECK(vals[7] < 1.0);
    }

    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["tool"] == "leafcurrent");
    CHECK(m["command"] == "leaf");
    CHECK(m["all_pass"] == true);
    const RunConfig back = parse_config_text(m["config"].get<std::string>());
    CHECK(back.a == 0.5);
    CHECK(back.leaf_grid == 20);
    CHECK(back.out == dir.string());
    // Every emitted file is listed with its hash.
    size_t listed = 0;
    for (const auto& f : m["files"]) {
      ++listed;
      const std::string body = slurp(dir / f["path"].get<std::string>());
      CHECK(f["sha256"] == sha256_hex(body));
      CHECK(f["bytes"] == body.size());
    }
    size_t on_disk = 0;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().filename() != "manifest.json") ++on_disk;
    CHECK(listed == on_disk);
  }

  TEST_CASE("extend command writes symmetric, positive fields") {
    const fs::path dir = scratch_dir("extend");
    RunConfig c;
    c.out = dir.string();
    c.extend_grid = 12;
    c.a = 0.0;
    std::ostringstream log;
    CHECK(run_command("extend", c, log) == 0);
    for (const char* f : {"extend_halfplane.csv", "extend_sector.csv", "extend_mean_value.csv",
                          "extend_halfplane.svg", "extend_sector.svg"})
      CHECK(fs::exists(dir / f));
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["pass"]["symmetry_residual_below_1e-6"] == true);
    CHECK(m["pass"]["positive"] == true);
  }

  TEST_CASE("same config, same seed, same threads: identical CSV bytes") {
    RunConfig c;
    c.extend_grid = 10;
    c.leaf_grid = 10;
    c.threads = 2;
    c.a = -1.0;
    c.deltas = {0.5, 0.3};
    std::ostringstream log;
    for (const std::string cmd : {"leaf", "extend", "mass"}) {
      c.out = scratch_dir(cmd + "_1").string();
      run_command(cmd, c, log);
      const fs::path first = c.out;
      c.out = scratch_dir(cmd + "_2").string();
      run_command(cmd, c, log);
      for (const auto& e : fs::directory_iterator(first))
        if (e.path().extension() == ".csv") {
          INFO(e.path().string());
          CHECK(slurp(e.path()) == slurp(fs::path(c.out) / e.path().filename()));
        }
    }
  }
}

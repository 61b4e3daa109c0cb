#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef LAMBERT_CREEP_CLI_PATH
#error "LAMBERT_CREEP_CLI_PATH must point at the lambert-creep binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(LAMBERT_CREEP_CLI_PATH) + " " + args + " 2>/dev/null";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    r.out.append(buf, got);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : s) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("lambert_creep_cli_" + std::to_string(getpid()));
  std::filesystem::create_directories(dir);
  return dir.string();
}

void write_text(const std::string& path, const std::string& text) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

}  // namespace

TEST_CASE("eval output is deterministic and matches known values") {
  const auto a = run_cli("eval w0 --grid 0:10:5:lin");
  const auto b = run_cli("eval w0 --grid 0:10:5:lin");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);

  const auto rows = lines_of(a.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "t [-],w0 [-]");
  CHECK(rows[1] == "0,0");
  const auto last = cells_of(rows[5]);
  REQUIRE(last.size() == 2);
  CHECK(std::stod(last[0]) == doctest::Approx(10.0));
  CHECK(std::stod(last[1]) ==
        doctest::Approx(1.7455280027406994).epsilon(1e-14));
}

TEST_CASE("eval psi_prime handles t = 0 through the closed form") {
  const auto r = run_cli("eval psi_prime --grid 0:2:3:lin");
  CHECK(r.exit_code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1] == "0,1");
  CHECK(std::stod(cells_of(rows[2])[1]) ==
        doctest::Approx(0.36189625663488922).epsilon(1e-13));
}

TEST_CASE("grid and argument errors exit with code 2") {
  CHECK(run_cli("eval w0 --grid -5:1:4:lin").exit_code == 2);
  CHECK(run_cli("eval nope").exit_code == 2);
  CHECK(run_cli("eval w0 --grid 1:0.5:4:lin").exit_code == 2);
  CHECK(run_cli("eval w0 --grid 0:1:1:lin").exit_code == 2);
  CHECK(run_cli("eval w0 --grid 0:1:9:log").exit_code == 2);
  CHECK(run_cli("eval w0 --grid a:b:9:lin").exit_code == 2);
  CHECK(run_cli("eval w0 --grid 0:1:9").exit_code == 2);
  CHECK(run_cli("spectra H --grid 0:1:4:lin").exit_code == 2);
  CHECK(run_cli("relax --t-max -3").exit_code == 2);
  CHECK(run_cli("relax --route sideways").exit_code == 2);
  CHECK(run_cli("bogus-subcommand").exit_code == 2);
}

TEST_CASE("spectra zero-fill the density rows below the cut") {
  const auto r = run_cli("spectra rho --grid 0:10:6:lin");
  CHECK(r.exit_code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "u [-],rho [-],est_error [-]");
  CHECK(rows[1] == "0,0,0");

  const auto below = run_cli("spectra rho --grid 0.05:0.3:3:lin");
  CHECK(below.exit_code == 0);
  for (const auto& line : lines_of(below.out)) {
    if (line.rfind("u [-]", 0) == 0) continue;
    const auto c = cells_of(line);
    REQUIRE(c.size() == 3);
    CHECK(std::stod(c[1]) == 0.0);
  }
}

TEST_CASE("relax emits the shared grid with both routes in agreement") {
  const auto r = run_cli("relax --t-max 2 --steps 8");
  CHECK(r.exit_code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] ==
        "t [-],phi_laplace [-],phi_volterra [-],abs_delta [-],unstable [-]");
  CHECK(rows[1] == "0,1,1,0,0");
  double prev = 2.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto c = cells_of(rows[i]);
    REQUIRE(c.size() == 5);
    const double lap = std::stod(c[1]);
    CHECK(lap <= prev);
    CHECK(std::stod(c[3]) < 1e-4);
    CHECK(c[4] == "0");
    prev = lap;
  }
}

TEST_CASE("relax linear test model reproduces the exponential") {
  const auto r =
      run_cli("relax --route laplace --test-model linear --t-max 1 --steps 4");
  CHECK(r.exit_code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 6);
  const auto last = cells_of(rows[5]);
  CHECK(std::stod(last[1]) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("validate reports the suite and signals failures via exit code") {
  const auto dir = scratch_dir();

  const auto ok = run_cli("validate --format json");
  CHECK(ok.exit_code == 0);
  const auto doc = nlohmann::json::parse(ok.out);
  CHECK(doc.at("all_pass").get<bool>());
  CHECK(doc.at("checks").size() == 15);
  for (const auto& c : doc.at("checks")) {
    CHECK(c.contains("name"));
    CHECK(c.contains("anchor"));
    CHECK(c.contains("computed"));
    CHECK(c.contains("target"));
    CHECK(c.contains("tol"));
    CHECK(c.contains("pass"));
  }

  const std::string strict = dir + "/strict.json";
  write_text(strict, "{\"tolerances\":{\"rho_integral\":1e-15}}");
  const auto fail = run_cli("validate --format json --config " + strict);
  CHECK(fail.exit_code == 1);
  const auto fdoc = nlohmann::json::parse(fail.out);
  CHECK_FALSE(fdoc.at("all_pass").get<bool>());
  int failed = 0;
  for (const auto& c : fdoc.at("checks")) {
    if (!c.at("pass").get<bool>()) {
      ++failed;
      CHECK(c.at("name").get<std::string>() == "rho_integral");
    }
  }
  CHECK(failed == 1);

  const std::string bad = dir + "/bad.json";
  write_text(bad, "{\"bogus\":1}");
  CHECK(run_cli("validate --config " + bad).exit_code == 2);
  CHECK(run_cli("validate --config " + dir + "/missing.json").exit_code == 2);

  const auto text = run_cli("validate");
  CHECK(text.exit_code == 0);
  CHECK(text.out.find("SUITE PASS 15/15") != std::string::npos);

  std::filesystem::remove_all(dir);
}

TEST_CASE("--out lands complete files with no temporary left behind") {
  const auto dir = scratch_dir();
  const std::string target = dir + "/phi.csv";
  const auto direct = run_cli("relax --t-max 1 --steps 4");
  const auto filed = run_cli("relax --t-max 1 --steps 4 --out " + target);
  CHECK(filed.exit_code == 0);
  CHECK(filed.out.empty());
  CHECK_FALSE(std::filesystem::exists(target + ".tmp"));

  std::FILE* f = std::fopen(target.c_str(), "rb");
  REQUIRE(f != nullptr);
  std::string contents;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) {
    contents.append(buf, got);
  }
  std::fclose(f);
  CHECK(contents == direct.out);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config JSON reaches the engine through the CLI") {
  const auto dir = scratch_dir();
  const std::string cfg = dir + "/inv.json";
  write_text(cfg, "{\"inversion\":{\"method\":\"gaver_stehfest\","
                  "\"gs_terms\":12}}");
  const auto r = run_cli("relax --route laplace --test-model linear "
                         "--t-max 1 --steps 4 --config " + cfg);
  CHECK(r.exit_code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(std::stod(cells_of(rows[5])[1]) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-5));

  write_text(cfg, "{\"inversion\":{\"gs_terms\":7}}");
  CHECK(run_cli("relax --config " + cfg).exit_code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("figures directory is reproducible byte for byte") {
  const auto dir = scratch_dir();
  const auto a = run_cli("figures --outdir " + dir + "/a");
  const auto b = run_cli("figures --outdir " + dir + "/b");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);

  const std::vector<std::string> stems = {
      "fig1_left",  "fig1_right",     "fig2_w0prime", "fig3_rho",
      "fig4_roundtrip", "fig5_rho_over_u", "fig6_K",   "fig7_phi"};
  for (const auto& stem : stems) {
    for (const char* ext : {".csv", ".gp"}) {
      const auto pa = dir + "/a/" + stem + ext;
      const auto pb = dir + "/b/" + stem + ext;
      REQUIRE(std::filesystem::exists(pa));
      REQUIRE(std::filesystem::exists(pb));
      std::FILE* fa = std::fopen(pa.c_str(), "rb");
      std::FILE* fb = std::fopen(pb.c_str(), "rb");
      REQUIRE(fa != nullptr);
      REQUIRE(fb != nullptr);
      std::string ca, cb;
      char buf[8192];
      std::size_t got;
      while ((got = std::fread(buf, 1, sizeof(buf), fa)) > 0) ca.append(buf, got);
      while ((got = std::fread(buf, 1, sizeof(buf), fb)) > 0) cb.append(buf, got);
      std::fclose(fa);
      std::fclose(fb);
      CHECK(ca == cb);
    }
  }

  // spot-check the roundtrip dataset: reconstruction error stays tiny
  {
    std::FILE* f = std::fopen((dir + "/a/fig4_roundtrip.csv").c_str(), "rb");
    REQUIRE(f != nullptr);
    std::string contents;
    char buf[8192];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) {
      contents.append(buf, got);
    }
    std::fclose(f);
    const auto rows = lines_of(contents);
    REQUIRE(rows.size() == 201);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(std::stod(cells_of(rows[i])[3]) < 1e-3);
    }
  }
  std::filesystem::remove_all(dir);
}

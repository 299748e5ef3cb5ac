#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = IPDX_CLI_PATH;
const fs::path kScratch = IPDX_TEST_TMPDIR;

struct RunResult {
  int exit_code;
  std::string out;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& args) {
  fs::create_directories(kScratch);
  const fs::path out_file = kScratch / "stdout.txt";
  const std::string cmd = kCli + " " + args + " > " + out_file.string() + " 2> " +
                          (kScratch / "stderr.txt").string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_file);
  return r;
}

}  // namespace

TEST_CASE("payoff command emits the compiled and closed-form matrices") {
  const auto r = run_cli("payoff --z 2.5 --beta 0.75 --set 3");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["compiled"]["strategies"][0] == "conditional");
  CHECK(j["compiled"]["entries"][0][0].get<double>() == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(j["compiled"]["entries"][1][0].get<double>() == doctest::Approx(12.5).epsilon(1e-12));
  CHECK(j["max_delta"].get<double>() < 1e-12);
  CHECK(j["meta"]["tool"] == "ipdx");
}

TEST_CASE("payoff at beta zero is the one-shot matrix") {
  const auto r = run_cli("payoff --beta 0 --z 2.5 --set 3");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["compiled"]["entries"][1][0].get<double>() == doctest::Approx(5.0));
}

TEST_CASE("invalid payoff ordering exits with the validation code") {
  const auto r = run_cli("payoff --t 3 --r 5");
  CHECK(r.exit_code == 2);
}

TEST_CASE("fixed-points reports the stable mixture at the anchor") {
  const auto r = run_cli("fixed-points --z 2.5 --beta 0.75 --set 3");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["fixed_points"].size() == 4);
  const auto& mixture = j["fixed_points"][3];
  CHECK(mixture["stability"] == "asymptotically-stable");
  CHECK(mixture["location"][0].get<double>() == doctest::Approx(0.875).epsilon(1e-12));
}

TEST_CASE("fixed-points groups the 4-strategy fixed line") {
  const auto r = run_cli("fixed-points --set 4 --z 2.5 --beta 0.9");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  bool found_line = false;
  for (const auto& entry : j["fixed_points"]) {
    if (entry.contains("alphas")) {
      found_line = true;
      CHECK(entry["alphas"].size() == 5);
    }
  }
  CHECK(found_line);
}

TEST_CASE("fixed-points survives the degenerate mixture denominator") {
  const auto r = run_cli("fixed-points --beta 0.5 --z 1.5 --set 3");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["fixed_points"].size() == 3);
}

TEST_CASE("integrate writes a trajectory CSV that reaches the attractor") {
  const fs::path out = kScratch / "traj.csv";
  const auto r = run_cli("integrate --seed 0.6,0.3 --z 2.5 --beta 0.9 --max-time 200 --out " +
                         out.string());
  REQUIRE(r.exit_code == 0);
  const auto csv = slurp(out);
  REQUIRE(csv.rfind("t,x1,x2\n", 0) == 0);
  const auto last_nl = csv.find_last_of('\n', csv.size() - 2);
  std::stringstream last_line(csv.substr(last_nl + 1));
  std::string t, x1, x2;
  std::getline(last_line, t, ',');
  std::getline(last_line, x1, ',');
  std::getline(last_line, x2, ',');
  CHECK(std::abs(std::stod(x1) - 1.0) < 1e-6);
  CHECK(std::abs(std::stod(x2)) < 1e-6);
}

TEST_CASE("integrate requires a seed matching the strategy set") {
  CHECK(run_cli("integrate --z 2.5 --beta 0.9").exit_code == 2);
  CHECK(run_cli("integrate --seed 0.2,0.2,0.2 --set 3").exit_code == 2);
  CHECK(run_cli("integrate --seed 0.2,0.2 --set 4").exit_code == 2);
  CHECK(run_cli("integrate --seed 0.9,0.9 --set 3").exit_code == 2);  // off the simplex
}

TEST_CASE("a wildly oversized step exits with the numerical-failure code") {
  const auto r = run_cli("integrate --seed 0.6,0.3 --z 6 --beta 0.5 --step 1000 "
                         "--max-time 100000");
  CHECK(r.exit_code == 3);
}

TEST_CASE("atlas CSV has one row per cell and is byte-stable") {
  const fs::path out = kScratch / "atlas.csv";
  const auto r = run_cli("atlas --resolution 20 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  const auto csv = slurp(out);
  CHECK(csv.rfind("beta,z,region\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 401);

  const fs::path out2 = kScratch / "atlas2.csv";
  REQUIRE(run_cli("atlas --resolution 20 --out " + out2.string()).exit_code == 0);
  CHECK(slurp(out2) == csv);
}

TEST_CASE("atlas and portrait emit SVG") {
  const auto r = run_cli("atlas --resolution 10 --format svg");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("<svg", 0) == 0);

  const auto r2 = run_cli("portrait --z 2.5 --beta 0.75 --set 3 --grid-density 2 "
                          "--max-time 5 --format svg");
  REQUIRE(r2.exit_code == 0);
  CHECK(r2.out.rfind("<svg", 0) == 0);
  CHECK(r2.out.find("circle") != std::string::npos);
}

TEST_CASE("portrait JSON carries region, fixed points, and trajectories") {
  const auto r = run_cli("portrait --z 2.5 --beta 0.75 --set 3 --grid-density 2 --max-time 5");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["region"] == "VI");
  CHECK(j["fixed_points"].size() == 4);
  CHECK(j["trajectories"].size() == 6);
}

TEST_CASE("invariant-check reports a tiny drift in region VI") {
  const fs::path out = kScratch / "audit.csv";
  const auto r = run_cli("invariant-check --z 2.5 --beta 0.75 --seed 0.3,0.3 --step 0.001 "
                         "--max-time 5 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  const auto csv = slurp(out);
  REQUIRE(csv.rfind("t,x1,x2,logC\n", 0) == 0);
  double lo = 1e300, hi = -1e300;
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    const auto pos = line.find_last_of(',');
    const double logc = std::stod(line.substr(pos + 1));
    lo = std::min(lo, logc);
    hi = std::max(hi, logc);
  }
  CHECK(hi - lo < 1e-8);
}

TEST_CASE("config file values load and CLI flags override them") {
  fs::create_directories(kScratch);
  const fs::path cfg = kScratch / "params.cfg";
  {
    std::ofstream f(cfg);
    f << "# anchor parameters\n";
    f << "z = 2.5\n";
    f << "beta = 0.9\n";
  }
  const auto r = run_cli("payoff --set 3 --config " + cfg.string());
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["params"]["beta"].get<double>() == doctest::Approx(0.9));
  CHECK(j["compiled"]["entries"][0][0].get<double>() == doctest::Approx(30.0));  // r/(1-beta)

  const auto r2 = run_cli("payoff --set 3 --config " + cfg.string() + " --beta 0.75");
  REQUIRE(r2.exit_code == 0);
  j = nlohmann::json::parse(r2.out);
  CHECK(j["params"]["beta"].get<double>() == doctest::Approx(0.75));
  CHECK(j["compiled"]["entries"][0][0].get<double>() == doctest::Approx(12.0));
}

TEST_CASE("atlas refuses non-standard dilemma payoffs") {
  CHECK(run_cli("atlas --t 6 --resolution 4").exit_code == 2);
}

TEST_CASE("unsupported format combinations are validation errors") {
  CHECK(run_cli("payoff --format svg").exit_code == 2);
  CHECK(run_cli("fixed-points --format csv").exit_code == 2);
}

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string output;
};

// Runs berrysim with the given arguments, capturing stdout and stderr.
Outcome berrysim(const std::string& args) {
  const std::string command = std::string(BERRYSIM_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buffer[4096];
  while (std::fgets(buffer, sizeof buffer, pipe) != nullptr) output += buffer;
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, output};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("berry_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

constexpr const char* kConfig = R"(
[loop]
detuning_mhz = -50
solid_angle_pi = 0.4375
tau_ns = 60

[noise]
kind = "radial"
s = 0.0666666667

[run]
realizations = 20
seed = 3

[sweep]
parameter = "solid_angle_pi"
values = [0.25, 0.4375]
)";

}  // namespace

TEST_CASE("theory subcommand") {
  const auto r = berrysim("theory");
  CHECK(r.status == 0);
  CHECK(r.output.find("sigma_geometric_rad   0.0329899") != std::string::npos);
  CHECK(r.output.find("sigma_dynamic_rad     0.5405") != std::string::npos);
  CHECK(r.output.find("theta_rad             0.674131") != std::string::npos);
  const auto fig4 = berrysim("theory --solid-angle-pi 0.37");
  CHECK(fig4.output.find("crossover_tau_ns      6.64") != std::string::npos);
}

TEST_CASE("validate subcommand") {
  TempDir dir;
  write(dir.path / "good.toml", kConfig);
  const auto good = berrysim("validate " + (dir.path / "good.toml").string());
  CHECK(good.status == 0);
  CHECK(good.output.find("\"resolved\"") != std::string::npos);

  write(dir.path / "bad.toml", "[loop]\nsolid_angle_pi = 0.2\ntau_ns = -1\n[noise]\ns = -1\n");
  const auto bad = berrysim("validate " + (dir.path / "bad.toml").string());
  CHECK(bad.status == 2);
  CHECK(bad.output.find("loop.tau_ns") != std::string::npos);
  CHECK(bad.output.find("noise.s") != std::string::npos);
}

TEST_CASE("run and replay") {
  TempDir dir;
  write(dir.path / "c.toml", kConfig);
  const auto run = berrysim("run custom --config " + (dir.path / "c.toml").string() + " --out " +
                            (dir.path / "a").string() + " --workers 2");
  REQUIRE(run.status == 0);
  const std::string csv = slurp(dir.path / "a" / "custom.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

  const auto replay = berrysim("replay " + (dir.path / "a" / "custom.manifest.json").string() +
                               " --out " + (dir.path / "b").string() + " --workers 1");
  REQUIRE(replay.status == 0);
  CHECK(slurp(dir.path / "b" / "custom.csv") == csv);
}

TEST_CASE("errors exit non-zero with a message") {
  TempDir dir;
  const auto unknown = berrysim("run fig9 --out " + dir.path.string());
  CHECK(unknown.status != 0);
  CHECK(unknown.output.find("fig9") != std::string::npos);

  write(dir.path / "blocker", "x");
  const auto blocked =
      berrysim("run fig2 --realizations 1 --out " + (dir.path / "blocker" / "out").string());
  CHECK(blocked.status != 0);
  CHECK(blocked.output.find("error") != std::string::npos);

  CHECK(berrysim("run custom").status != 0);
  CHECK(berrysim("").status != 0);
  CHECK(berrysim("replay " + (dir.path / "missing.json").string()).status != 0);
}

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;  // stdout and stderr interleaved
};

Result cli(const std::string& args) {
  const std::string cmd = std::string("\"") + QAOA_CLI + "\" " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qaoa_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string field(const std::string& out, const std::string& key) {
  const auto at = out.find(key + "=");
  if (at == std::string::npos) return {};
  const auto start = at + key.size() + 1;
  return out.substr(start, out.find_first_of(" \n", start) - start);
}

std::size_t count_files(const fs::path& dir) {
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}));
}

const std::string kTriangle = "3 3\n0 1\n0 2\n1 2\n";
const std::string kCycle5 = "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n";

}  // namespace

TEST_CASE("graphs enumerate writes one file per connected graph") {
  const auto dir = scratch("enum");
  auto r = cli("--out \"" + (dir / "n5").string() + "\" graphs enumerate --n 5");
  CHECK(r.code == 0);
  CHECK(count_files(dir / "n5") == 21);
  r = cli("--out \"" + (dir / "n2").string() + "\" graphs enumerate --n 2");
  CHECK(r.code == 0);
  CHECK(count_files(dir / "n2") == 1);
  CHECK(slurp(dir / "n2" / "n2-00.txt").find("2 1") != std::string::npos);
}

TEST_CASE("graphs solve lists every minimum cover") {
  const auto dir = scratch("solve");
  const auto r = cli("graphs solve \"" + write_file(dir / "tri.txt", kTriangle).string() + "\"");
  CHECK(r.code == 0);
  CHECK(r.out == "size=2, covers=110,101,011\n");
}

TEST_CASE("malformed graph files report the line") {
  const auto dir = scratch("bad");
  const auto bad = write_file(dir / "bad.txt", "3 2\n0 1\n1 1\n");
  const auto r = cli("graphs solve \"" + bad.string() + "\"");
  CHECK(r.code != 0);
  CHECK(r.out.find(":3") != std::string::npos);
}

TEST_CASE("run is deterministic under a fixed seed") {
  const auto dir = scratch("run");
  const auto g = write_file(dir / "c5.txt", kCycle5).string();
  const auto a = cli("--seed 7 run \"" + g + "\" --depth 2 --optimizer adam");
  const auto b = cli("--seed 7 run \"" + g + "\" --depth 2 --optimizer adam");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const double e = std::stod(field(a.out, "final_expectation"));
  CHECK(e >= 3.0 - 1e-9);  // B times the minimum cover size of C5
  CHECK(std::stoul(field(a.out, "evals_used")) <= 3000);

  const auto csv = dir / "runs.csv";
  CHECK(cli("--seed 7 --out \"" + csv.string() + "\" run \"" + g + "\" --depth 1 --optimizer powell").code == 0);
  CHECK(cli("--seed 8 --out \"" + csv.string() + "\" run \"" + g + "\" --depth 1 --optimizer powell").code == 0);
  const auto text = slurp(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  CHECK(text.rfind("graph_id,depth,", 0) == 0);
}

TEST_CASE("noisy run stays above the ground energy") {
  const auto dir = scratch("noisy");
  const auto g = write_file(dir / "c5.txt", kCycle5).string();
  const auto r = cli("--seed 3 run \"" + g + "\" --depth 2 --optimizer spsa --backend noisy --shots 2000 --budget 200");
  REQUIRE(r.code == 0);
  const double exact = std::stod(field(r.out, "exact_expectation"));
  const double sampled = std::stod(field(r.out, "final_expectation"));
  CHECK(exact >= 3.0 - 1e-9);
  CHECK(sampled >= 3.0 - 0.5);  // the best of many shot estimates may dip below
  const double sp = std::stod(field(r.out, "success_prob"));
  CHECK(sp >= 0.0);
  CHECK(sp <= 1.0);
}

TEST_CASE("unknown optimizer lists the valid names") {
  const auto dir = scratch("cobyla");
  const auto r = cli("run \"" + write_file(dir / "tri.txt", kTriangle).string() + "\" --optimizer cobyla");
  CHECK(r.code != 0);
  for (const char* name : {"spsa", "adam", "amsgrad", "nelder_mead", "powell", "cg", "bfgs", "lbfgs"})
    CHECK_MESSAGE(r.out.find(name) != std::string::npos, name);
}

TEST_CASE("bad flags are rejected") {
  CHECK(cli("").code != 0);
  CHECK(cli("graphs enumerate --n 0").code != 0);
  CHECK(cli("graphs enumerate --colour red").code != 0);
  CHECK(cli("run /no/such/graph.txt --optimizer bfgs").code != 0);
  CHECK(cli("--version").code == 0);
}

TEST_CASE("experiment writes results and needs a seed") {
  const auto dir = scratch("exp");
  const std::string body = R"("experiment": "optimizer_comparison", "graphs": {"n": 3, "indices": [1]},
                              "depths": [1], "optimizers": ["bfgs"])";
  const auto seeded = write_file(dir / "seeded.json", "{" + body + R"(, "seed": 5})");
  const auto unseeded = write_file(dir / "unseeded.json", "{" + body + "}");

  auto r = cli("--out \"" + (dir / "a").string() + "\" experiment \"" + seeded.string() + "\"");
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "a" / "results.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(fs::exists(dir / "a" / "metadata.json"));

  r = cli("--out \"" + (dir / "b").string() + "\" experiment \"" + unseeded.string() + "\"");
  CHECK(r.code != 0);
  CHECK(r.out.find("seed") != std::string::npos);
  r = cli("--seed 5 --out \"" + (dir / "c").string() + "\" experiment \"" + unseeded.string() + "\"");
  CHECK(r.code == 0);
  CHECK(slurp(dir / "c" / "results.csv") == csv);

  const auto broken = write_file(dir / "broken.json", "{" + body + R"(, "seed": 5, "trials": -1})");
  r = cli("experiment \"" + broken.string() + "\"");
  CHECK(r.code == 2);
  CHECK(r.out.find("trials") != std::string::npos);

  r = cli("report \"" + (dir / "a" / "results.csv").string() + "\" --kind depth_curve --format svg");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "a" / "depth_curve.svg"));
}

TEST_CASE("report without the needed column fails") {
  const auto dir = scratch("report");
  const auto csv = write_file(dir / "r.csv",
                              "graph_id,depth,optimizer,backend,trial,final_expectation\n"
                              "g,1,spsa,noisy,0,4.5\n");
  const auto r = cli("report \"" + csv.string() + "\" --kind success_curve");
  CHECK(r.code != 0);
  CHECK(r.out.find("success_prob") != std::string::npos);
  CHECK(cli("report \"" + csv.string() + "\" --kind boxplot_table").code == 0);
}

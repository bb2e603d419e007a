#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "archetypal/cli.hpp"
#include "archetypal/presets.hpp"

using namespace archetypal;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "archetypal_cli_tests") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("classify emits a json report") {
  ::unsetenv("ARCHETYPAL_SEED");
  const auto r = run_cli({"classify", "--preset", "de_rham"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("command").get<std::string>() == "classify");
  CHECK(j.at("K").get<double>() == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(j.at("regime").get<std::string>() == "supercritical");
  CHECK(j.at("q").get<double>() == 0.0);
  CHECK(j.at("kExact").get<bool>());
  CHECK(j.at("assumptionFlags").at("i").get<bool>());
  CHECK(j.at("seed").get<std::uint64_t>() == 0);
  CHECK(j.at("specSource").at("preset").get<std::string>() == "de_rham");
  CHECK(j.contains("spec"));
}

TEST_CASE("solve prints a cdf table and metadata") {
  const auto r = run_cli({"solve", "--preset", "bernoulli_convolution", "--a", "2", "--N",
                          "2000", "--m", "5", "--grid-min", "-2", "--grid-max", "2", "--seed",
                          "1"});
  REQUIRE(r.code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "x,F");
  std::vector<double> xs, fs_;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto comma = lines[i].find(',');
    REQUIRE(comma != std::string::npos);
    xs.push_back(std::stod(lines[i].substr(0, comma)));
    fs_.push_back(std::stod(lines[i].substr(comma + 1)));
  }
  CHECK(xs.front() == -2.0);
  CHECK(xs.back() == 2.0);
  CHECK(fs_.front() == 0.0);
  CHECK(fs_.back() == 1.0);
  CHECK(fs_[2] == doctest::Approx(0.5).epsilon(0.15));  // F(0), n = 2000

  const json meta = json::parse(r.err);
  CHECK(meta.at("command").get<std::string>() == "solve");
  CHECK(meta.at("tool").at("name").get<std::string>() == "archetypal");
  CHECK(meta.at("seed").get<std::uint64_t>() == 1);
  CHECK(meta.at("parameters").at("N").get<std::size_t>() == 2000);
  CHECK(meta.at("parameters").at("m").get<std::size_t>() == 5);
  CHECK(meta.at("diagnostics").at("N").get<std::size_t>() == 2000);
  CHECK(meta.at("diagnostics").at("caveats").empty());
}

TEST_CASE("chain output is seed-deterministic") {
  const std::vector<std::string> args{"chain", "--preset", "de_rham", "--n", "8", "--seed", "9"};
  const auto r1 = run_cli(args);
  const auto r2 = run_cli(args);
  REQUIRE(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(split_lines(r1.out)[0] == "n,alpha,beta,X,A,B,D");
  CHECK(split_lines(r1.out).size() == 9);

  auto other = args;
  other.back() = "10";
  const auto r3 = run_cli(other);
  REQUIRE(r3.code == 0);
  CHECK(r1.out != r3.out);
}

TEST_CASE("iterate prints history then grid") {
  const auto r = run_cli({"iterate", "--preset", "subcritical_demo", "--n", "5", "--m", "101",
                          "--grid-min", "-5", "--grid-max", "5"});
  REQUIRE(r.code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 1 + 5 + 1 + 101);
  CHECK(lines[0] == "iter,range,residual");
  CHECK(lines[1].rfind("1,", 0) == 0);
  CHECK(lines[5].rfind("5,", 0) == 0);
  CHECK(lines[6] == "x,y");
  CHECK(lines[7].rfind("-5,", 0) == 0);
}

TEST_CASE("charfn starts its grid at zero frequency") {
  const auto r = run_cli({"charfn", "--preset", "bernoulli_convolution", "--a", "2", "--N",
                          "500", "--s-count", "8"});
  REQUIRE(r.code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 1 + 9);
  CHECK(lines[0] == "s,re,im,abs");
  CHECK(lines[1] == "0,1,0,1");
}

TEST_CASE("verify runs a single suite and reports json") {
  ::unsetenv("ARCHETYPAL_SEED");
  const auto r = run_cli({"verify", "--suite", "classification"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("suite").get<std::string>() == "classification");
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("seed").get<std::uint64_t>() == 0);

  const auto bad = run_cli({"verify", "--suite", "nope"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("unknown verify suite") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"classify", "--bogus"}).code == 2);
  CHECK(run_cli({}).err.find("usage error") != std::string::npos);

  const auto both = run_cli({"classify", "--preset", "de_rham", "--spec", "x.json"});
  CHECK(both.code == 2);

  const auto none = run_cli({"classify"});
  CHECK(none.code == 2);
  CHECK(none.err.find("need either --preset or --spec") != std::string::npos);

  const auto seed = run_cli({"classify", "--preset", "de_rham", "--seed", "12x"});
  CHECK(seed.code == 2);
  CHECK(seed.err.find("seed") != std::string::npos);

  const auto missing = run_cli({"classify", "--spec", "/nonexistent/spec.json"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open spec file") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const auto r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("archetypal") != std::string::npos);
  CHECK(r.out.find("classify") != std::string::npos);
}

TEST_CASE("spec files load through --spec") {
  TempDir tmp;
  const fs::path spec_path = tmp.path / "spec.json";
  {
    std::ofstream out(spec_path);
    out << presets::preset("de_rham").to_json().dump();
  }
  const auto r = run_cli({"classify", "--spec", spec_path.string()});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("K").get<double>() == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(j.at("specSource").at("specFile").get<std::string>() == spec_path.string());

  const fs::path broken = tmp.path / "broken.json";
  {
    std::ofstream out(broken);
    out << "{not json";
  }
  const auto bad = run_cli({"classify", "--spec", broken.string()});
  CHECK(bad.code == 2);
}

TEST_CASE("seed resolution falls back to the environment") {
  const std::vector<std::string> args{"chain", "--preset", "de_rham", "--n", "6"};

  ::setenv("ARCHETYPAL_SEED", "7", 1);
  const auto from_env = run_cli(args);
  ::setenv("ARCHETYPAL_SEED", "3", 1);
  auto with_flag = args;
  with_flag.insert(with_flag.end(), {"--seed", "7"});
  const auto flag_wins = run_cli(with_flag);
  ::unsetenv("ARCHETYPAL_SEED");

  const auto explicit_7 = run_cli(with_flag);
  const auto default_0 = run_cli(args);

  REQUIRE(from_env.code == 0);
  CHECK(from_env.out == explicit_7.out);
  CHECK(flag_wins.out == explicit_7.out);
  CHECK(default_0.out != explicit_7.out);
}

TEST_CASE("solve output is independent of the worker count") {
  const std::vector<std::string> base{"solve",  "--preset", "bernoulli_convolution",
                                      "--a",    "2",        "--N",
                                      "20000",  "--seed",   "5",
                                      "--workers"};
  auto one = base;
  one.push_back("1");
  auto three = base;
  three.push_back("3");
  const auto r1 = run_cli(one);
  const auto r3 = run_cli(three);
  REQUIRE(r1.code == 0);
  REQUIRE(r3.code == 0);
  CHECK(r1.out == r3.out);
  CHECK(!r1.out.empty());
}

TEST_CASE("--out writes the table and a metadata sidecar") {
  TempDir tmp;
  const fs::path out_path = tmp.path / "cdf.csv";
  const auto r = run_cli({"solve", "--preset", "de_rham", "--N", "1000", "--m", "11", "--seed",
                          "2", "--out", out_path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.empty());

  const std::string csv = read_file(out_path);
  CHECK(csv.rfind("x,F\n", 0) == 0);
  CHECK(split_lines(csv).size() == 12);

  const json meta = json::parse(read_file(out_path.string() + ".meta.json"));
  CHECK(meta.at("command").get<std::string>() == "solve");
  CHECK(meta.at("tool").at("version").get<std::string>() == "0.1.0");
  CHECK(meta.at("seed").get<std::uint64_t>() == 2);
}

TEST_CASE("iterate --out splits grid and history files") {
  TempDir tmp;
  const fs::path out_path = tmp.path / "it.csv";
  const auto r = run_cli({"iterate", "--preset", "subcritical_demo", "--n", "3", "--m", "51",
                          "--out", out_path.string()});
  REQUIRE(r.code == 0);

  const std::string grid = read_file(out_path);
  CHECK(grid.rfind("x,y\n", 0) == 0);
  const fs::path history_path = tmp.path / "it.history.csv";
  const std::string hist = read_file(history_path);
  CHECK(hist.rfind("iter,range,residual\n", 0) == 0);

  const json meta = json::parse(read_file(out_path.string() + ".meta.json"));
  CHECK(meta.at("outputs").at("historyCsv").get<std::string>() == history_path.string());
}

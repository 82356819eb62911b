#include "sepals/csv.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  fs::path dir = fs::current_path() / "cli_scratch" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const fs::path& dir, const std::string& args) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + SEPALS_CLI_PATH + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

json read_json(const fs::path& path) { return json::parse(slurp(path)); }

sepals::csv::LabeledDataset read_csv(const fs::path& path) {
  std::ifstream in(path);
  return sepals::csv::read_dataset(in);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  Table t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (first) {
      t.header = cells;
      first = false;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

std::string beta_arg(int p) {
  std::string s = "1,1";
  for (int j = 2; j < p; ++j) s += ",0";
  return s;
}

}  // namespace

TEST_CASE("simulate defaults produce 500 rows of 31 columns and a manifest") {
  const auto dir = scratch("sim_default");
  const auto r = run(dir, "simulate --out " + (dir / "d.csv").string());
  REQUIRE(r.code == 0);
  const auto labeled = read_csv(dir / "d.csv");
  CHECK(labeled.data.n() == 500);
  CHECK(labeled.data.p() == 30);
  CHECK(labeled.response_name == "y");
  const auto manifest = read_json(dir / "d.csv.manifest.json");
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["seed"] == 42);
  CHECK(manifest["params"]["n"] == 500);
  CHECK(manifest["params"]["rotated"] == false);
  CHECK(manifest.contains("version"));
  CHECK(manifest.contains("timestamp"));
}

TEST_CASE("simulate is byte-identical for equal seeds and differs otherwise") {
  const auto dir = scratch("sim_determinism");
  REQUIRE(run(dir, "simulate --n 80 --p 4 --seed 9 --out " + (dir / "a.csv").string()).code == 0);
  REQUIRE(run(dir, "simulate --n 80 --p 4 --seed 9 --out " + (dir / "b.csv").string()).code == 0);
  REQUIRE(run(dir, "simulate --n 80 --p 4 --seed 10 --out " + (dir / "c.csv").string()).code == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.csv") != slurp(dir / "c.csv"));
}

TEST_CASE("noiseless simulate then fit recovers the true direction") {
  const auto dir = scratch("noiseless");
  REQUIRE(run(dir, "simulate --n 300 --p 6 --snr inf --out " + (dir / "d.csv").string()).code == 0);
  for (const char* prior : {"--prior none", "--prior sparse --lambda 1e-4"}) {
    const auto r = run(dir, "fit --data " + (dir / "d.csv").string() + " --k 40 " + prior +
                                " --beta-true " + beta_arg(6));
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["r"].get<double>() >= 1.0 - 1e-6);
  }
}

TEST_CASE("fit with vanishing prior strength matches the plain fit") {
  const auto dir = scratch("fit_reductions");
  const std::string data = (dir / "d.csv").string();
  REQUIRE(run(dir, "simulate --n 200 --p 5 --seed 3 --out " + data).code == 0);
  const auto none = run(dir, "fit --data " + data + " --k 25");
  const auto sparse = run(dir, "fit --data " + data + " --k 25 --prior sparse --lambda 0");
  const auto conj = run(dir, "fit --data " + data + " --k 25 --prior conjugate --kappa0 0 --mu0 0,0,1,0,0");
  REQUIRE(none.code == 0);
  REQUIRE(sparse.code == 0);
  REQUIRE(conj.code == 0);
  const auto b0 = json::parse(none.out)["beta"];
  CHECK(json::parse(sparse.out)["beta"] == b0);
  CHECK(json::parse(conj.out)["beta"] == b0);
  const auto parsed = json::parse(sparse.out);
  CHECK(parsed["k_effective"] == 25);
  CHECK(parsed["nonzero_support"].size() == 5);
  CHECK(parsed["prior"]["family"] == "sparse");
}

TEST_CASE("fit writes its result and manifest when --out is given") {
  const auto dir = scratch("fit_out");
  const std::string data = (dir / "d.csv").string();
  REQUIRE(run(dir, "simulate --n 100 --p 3 --out " + data).code == 0);
  REQUIRE(run(dir, "fit --data " + data + " --threshold 3 --out " + (dir / "f.json").string()).code == 0);
  const auto result = read_json(dir / "f.json");
  CHECK(result["beta"].size() == 3);
  CHECK(result["y_threshold"] == 3.0);
  CHECK(read_json(dir / "f.json.manifest.json")["command"] == "fit");
}

TEST_CASE("fit at k = 1 fails with a structured numerical error") {
  const auto dir = scratch("fit_k1");
  const std::string data = (dir / "d.csv").string();
  REQUIRE(run(dir, "simulate --n 100 --p 3 --out " + data).code == 0);
  const auto r = run(dir, "fit --data " + data + " --k 1");
  CHECK(r.code == 4);
  const auto err = json::parse(r.err);
  CHECK(err["error"] == "DegenerateDirection");
}

TEST_CASE("usage and input errors map to exit codes 2 and 3") {
  const auto dir = scratch("exit_codes");
  const std::string data = (dir / "d.csv").string();
  REQUIRE(run(dir, "simulate --n 50 --p 3 --out " + data).code == 0);
  CHECK(run(dir, "fit --data " + data).code == 2);
  CHECK(run(dir, "fit --data " + data + " --k 5 --threshold 2").code == 2);
  CHECK(run(dir, "fit --data " + data + " --k 5 --prior conjugate --kappa0 1").code == 2);
  CHECK(run(dir, "fit --data " + data + " --k 5 --prior sparse --lambda -1").code == 2);
  CHECK(run(dir, "fit --data " + data + " --k 500").code == 2);
  CHECK(run(dir, "fit --data " + data + " --k 5 --prior bogus").code == 2);
  CHECK(run(dir, "simulate --theta -1 --out " + (dir / "x.csv").string()).code == 2);
  CHECK(run(dir, "nosuchcommand").code == 2);
  CHECK(run(dir, "fit --data " + (dir / "missing.csv").string() + " --k 5").code == 3);
  std::ofstream(dir / "bad.csv") << "x1,x2,y\n1,2\n";
  CHECK(run(dir, "fit --data " + (dir / "bad.csv").string() + " --k 1").code == 3);
}

TEST_CASE("sweep with a single replication has collapsed bands") {
  const auto dir = scratch("sweep_single");
  const auto out = dir / "s.csv";
  REQUIRE(run(dir, "sweep --n 100 --p 4 --family conjugate --hyper-grid 0,0.01 --k-min 10 --k-max 12 "
                   "--reps 1 --out " + out.string()).code == 0);
  const auto t = read_table(out);
  REQUIRE(t.header == std::vector<std::string>{"family", "hyper", "k", "mean_r", "q05", "q95", "failures"});
  REQUIRE(t.rows.size() == 6);
  for (const auto& row : t.rows) {
    CHECK(row[0] == "conjugate");
    CHECK(row[3] == row[4]);
    CHECK(row[3] == row[5]);
  }
  CHECK(read_json(dir / "s.csv.manifest.json")["flagged_cells"] == 0);
}

TEST_CASE("sweep output does not depend on the number of workers") {
  const auto dir = scratch("sweep_jobs");
  const std::string common = "sweep --n 120 --p 5 --family sparse --hyper-grid 0,1e-3 --k-min 5 --k-max 30 --reps 12 ";
  REQUIRE(run(dir, common + "--jobs 1 --out " + (dir / "a.csv").string()).code == 0);
  REQUIRE(run(dir, common + "--jobs 8 --out " + (dir / "b.csv").string()).code == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
}

TEST_CASE("sweep rejects an inconsistent k range") {
  const auto dir = scratch("sweep_bad");
  CHECK(run(dir, "sweep --n 50 --family none --k-min 10 --k-max 60 --out " + (dir / "s.csv").string()).code == 2);
  CHECK(run(dir, "sweep --n 50 --family none --k-min 0 --k-max 5 --out " + (dir / "s.csv").string()).code == 2);
}

TEST_CASE("tail writes the Hill, QQ and histogram tables") {
  const auto dir = scratch("tail");
  const std::string data = (dir / "d.csv").string();
  REQUIRE(run(dir, "simulate --n 400 --p 3 --out " + data).code == 0);
  const auto r = run(dir, "tail --data " + data + " --k-max 100 --k 50 --out-dir " + (dir / "t").string());
  REQUIRE(r.code == 0);
  const auto hill = read_table(dir / "t" / "hill.csv");
  CHECK(hill.header == std::vector<std::string>{"k", "gamma_hat", "ci_low", "ci_high"});
  CHECK(hill.rows.size() == 100);
  CHECK(hill.rows.front()[0] == "1");
  const auto qq = read_table(dir / "t" / "qq.csv");
  CHECK(qq.header == std::vector<std::string>{"x", "y"});
  CHECK(qq.rows.size() == 50);
  const auto hist = read_table(dir / "t" / "hist.csv");
  long total = 0;
  for (const auto& row : hist.rows) total += std::stol(row[2]);
  CHECK(total == 400);
  const auto summary = json::parse(r.out);
  CHECK(summary["qq_slope"].get<double>() > 0.0);
  CHECK(read_json(dir / "t" / "manifest.json")["command"] == "tail");

  CHECK(run(dir, "tail --data " + data + " --k-max 400 --out-dir " + (dir / "u").string()).code == 2);
  CHECK(run(dir, "tail --data " + data + " --k-max 1 --out-dir " + (dir / "u").string()).code == 2);
}

TEST_CASE("tailcorr on noiseless data has unit correlation and a consistent argmax") {
  const auto dir = scratch("tailcorr");
  const std::string data = (dir / "d.csv").string();
  REQUIRE(run(dir, "simulate --n 300 --p 5 --snr inf --out " + data).code == 0);
  const auto r = run(dir, "tailcorr --data " + data + " --lambda-grid 0,1e-4 --k-grid 20:60:20 --out " +
                              (dir / "y.csv").string());
  REQUIRE(r.code == 0);
  const auto t = read_table(dir / "y.csv");
  REQUIRE(t.header == std::vector<std::string>{"k", "lambda", "rho_y", "flag"});
  REQUIRE(t.rows.size() == 6);
  double best = -2.0;
  for (const auto& row : t.rows) {
    REQUIRE(!row[2].empty());
    const double rho = std::stod(row[2]);
    CHECK(rho == doctest::Approx(1.0).epsilon(1e-9));
    best = std::max(best, rho);
  }
  const auto argmax = json::parse(r.out)["argmax"];
  CHECK(argmax["rho_y"].get<double>() == best);
  CHECK(read_json(dir / "y.csv.manifest.json")["argmax"] == argmax);
}

TEST_CASE("tailcorr per covariate: fixed first basis vector correlates perfectly with x1") {
  const auto dir = scratch("tailcorr_x");
  const std::string data = (dir / "d.csv").string();
  REQUIRE(run(dir, "simulate --n 300 --p 4 --out " + data).code == 0);
  REQUIRE(run(dir, "tailcorr --data " + data + " --family none --beta 1,0,0,0 --k-grid 30,60 --out " +
                       (dir / "x.csv").string()).code == 0);
  const auto t = read_table(dir / "x.csv");
  REQUIRE(t.header == std::vector<std::string>{"k", "j", "rho_xj", "flag"});
  REQUIRE(t.rows.size() == 8);
  for (const auto& row : t.rows) {
    if (row[1] == "1") CHECK(std::stod(row[2]) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("tailcorr flags failed cells instead of aborting") {
  const auto dir = scratch("tailcorr_flags");
  const std::string data = (dir / "d.csv").string();
  REQUIRE(run(dir, "simulate --n 200 --p 5 --out " + data).code == 0);
  REQUIRE(run(dir, "tailcorr --data " + data + " --lambda-grid 10 --k-grid 2,50 --out " + (dir / "y.csv").string())
              .code == 0);
  const auto t = read_table(dir / "y.csv");
  REQUIRE(t.rows.size() == 2);
  for (const auto& row : t.rows) {
    CHECK(row[2].empty());
    CHECK(row[3] == "OverShrunk");
  }
}

TEST_CASE("config file supplies defaults and explicit flags take precedence") {
  const auto dir = scratch("config");
  std::ofstream(dir / "c.json") << R"({"n": 60, "p": 3, "seed": 5, "rotated": true})";
  REQUIRE(run(dir, "simulate --config " + (dir / "c.json").string() + " --n 40 --out " + (dir / "a.csv").string())
              .code == 0);
  REQUIRE(run(dir, "simulate --n 40 --p 3 --seed 5 --rotated --out " + (dir / "b.csv").string()).code == 0);
  CHECK(read_csv(dir / "a.csv").data.n() == 40);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  const auto manifest = read_json(dir / "a.csv.manifest.json");
  CHECK(manifest["params"]["n"] == 40);
  CHECK(manifest["params"]["p"] == 3);
  CHECK(manifest["params"]["rotated"] == true);
  CHECK(run(dir, "simulate --config " + (dir / "missing.json").string() + " --out x.csv").code == 3);
}

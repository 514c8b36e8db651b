#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  const std::string cmd = std::string(HZETA_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string write_config(const std::string& name, const std::string& forms) {
  const fs::path dir = fs::temp_directory_path() / "hzeta_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / (name + ".json");
  std::ofstream(p) << R"({"name": ")" << name << R"(", "forms": )" << forms << "}";
  return p.string();
}

}  // namespace

TEST_CASE("validate") {
  Run a = run("validate " + write_config("plain", "[[1,0],[0,1]]"));
  CHECK(a.status == 0);
  CHECK(nlohmann::json::parse(a.out)["bad_primes"].empty());
  Run b = run("validate " + write_config("skew", "[[1,0],[1,2]]"));
  CHECK(b.status == 0);
  CHECK(nlohmann::json::parse(b.out)["bad_primes"] == nlohmann::json::array({2}));
  Run c = run("validate " + write_config("noncoprime", "[[2,0]]"));
  CHECK(c.status == 2);
  const std::string err = std::string(HZETA_CLI) + " validate " + write_config("noncoprime", "[[2,0]]") + " 2>&1";
  FILE* pipe = popen(err.c_str(), "r");
  char buf[512] = {0};
  CHECK(fread(buf, 1, sizeof buf - 1, pipe) > 0);
  pclose(pipe);
  CHECK(std::string(buf).find("non-coprime form") != std::string::npos);
}

TEST_CASE("count") {
  const std::string cfg = write_config("line", "[[1,0]]");
  Run one = run("count --config " + cfg + " --bmax 1");
  CHECK(one.status == 0);
  CHECK(one.out == "B,N\n1,1\n");
  Run two = run("count --config " + cfg + " --grid 10,100");
  CHECK(two.status == 0);
  CHECK(two.out.rfind("B,N\n10,", 0) == 0);
  const std::string plain = write_config("plain", "[[1,0],[0,1]]");
  Run s1 = run("count --config " + plain + " --geometric 10,3,8 --shards 1");
  Run s8 = run("count --config " + plain + " --geometric 10,3,8 --shards 8");
  CHECK(s1.status == 0);
  CHECK(s1.out == s8.out);
  CHECK(run("count --config " + cfg + " --grid 100,10").status == 2);
}

TEST_CASE("fourier") {
  const std::string plain = write_config("plain", "[[1,0],[0,1]]");
  Run good = run("fourier --config " + plain + " --p 3 --s 6,4,4");
  CHECK(good.status == 0);
  nlohmann::json g = nlohmann::json::parse(good.out);
  CHECK(g["verdict"] == "PASS");
  CHECK(g["difference"].get<double>() <= g["oracle"]["tail_bound"].get<double>());
  CHECK(g["closed"]["exact"].is_string());

  Run bad = run("fourier --config " + write_config("skew", "[[1,0],[1,2]]") + " --p 2 --s 6,4,4");
  CHECK(bad.status == 0);
  nlohmann::json b = nlohmann::json::parse(bad.out);
  CHECK(b["closed"] == "n/a");
  CHECK(b["oracle"]["value"]["re"].is_number());

  CHECK(run("fourier --config " + plain + " --p 3 --s 2,1,1").status == 2);
}

TEST_CASE("height, constant and fit") {
  const std::string cfg = write_config("line", "[[1,0]]");
  Run h = run("height --config " + cfg + " --point 1/2,3/2");
  CHECK(h.status == 0);
  nlohmann::json hj = nlohmann::json::parse(h.out);
  CHECK(hj["triple"] == nlohmann::json::array({"1", "3", "2"}));
  CHECK(hj["height_power"] == "980/1");

  Run k = run("constant --config " + cfg + " --p-max 1000");
  CHECK(k.status == 0);
  nlohmann::json kj = nlohmann::json::parse(k.out);
  CHECK(kj["alpha"] == "1/6");
  CHECK(kj["predicted_leading_coeff"].get<double>() == doctest::Approx(0.608).epsilon(0.01));
  // byte-identical on a rerun
  CHECK(run("constant --config " + cfg + " --p-max 1000").out == k.out);

  const fs::path csv = fs::temp_directory_path() / "hzeta_cli_test" / "series.csv";
  CHECK(run("count --config " + cfg + " --geometric 10,4,8 --out " + csv.string()).status == 0);
  Run f = run("fit --csv " + csv.string() + " --r 1");
  CHECK(f.status == 0);
  CHECK(nlohmann::json::parse(f.out)["stability_trace"].size() == 3);
}

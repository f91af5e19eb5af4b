#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + WEILMIX_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("bounds") {
  const auto r = run("bounds --family gu --n 50 --q 9 --r-min 44 --r-max 54 --format csv --svg cli_profile.svg");
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 12);
  CHECK(r.out.find("\r\n52,0.008641975308") != std::string::npos);
  std::ifstream svg("cli_profile.svg");
  std::string text((std::istreambuf_iterator<char>(svg)), {});
  CHECK(text.find("<polyline") != std::string::npos);

  CHECK(run("bounds --family sp-odd --n 10 --q 5 --r-min 21 --r-max 21").out.find("\r\n21,0.25") != std::string::npos);
  CHECK(run("bounds --family gl --n 2 --q 3 --r-min 0 --r-max 0 --exact-sum").out.find(",47,47.0,exact") !=
        std::string::npos);
  CHECK(run("bounds --family sp-odd --n 2 --q 4 --r-min 1 --r-max 2").code == 2);
  CHECK(run("bounds --family gu --n 3 --q 2 --variant linear --r-min 1 --r-max 2").code == 2);
  CHECK(run("bounds --family gu --n 3").code == 2);
}

TEST_CASE("dist") {
  const auto gu = run("dist --family gu --n 2 --q 2 --what fixed-space");
  CHECK(gu.out.find("0,5/9,") != std::string::npos);
  CHECK(gu.out.find("1,7/18,") != std::string::npos);
  CHECK(gu.out.find("2,1/18,") != std::string::npos);
  const auto sp = run("dist --family sp-odd --n 2 --q 5 --what sp-classes --mode c-pairs");
  CHECK(sp.out.find("Identity,1/312") != std::string::npos);
  CHECK(sp.out.find("A31,5/26") != std::string::npos);
  CHECK(sp.out.find("D21,125/312") != std::string::npos);
  const auto gl = run("dist --family gl --n 2 --q 2 --what pair-codim --format json");
  const auto j = nlohmann::json::parse(gl.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["rows"][0]["probability"] == "1/3");
  CHECK(j["rows"][2]["probability"] == "2/3");
  CHECK(run("dist --family gu --n 2 --q 2 --what sp-classes").code == 2);
}

TEST_CASE("simulate") {
  const std::string args = "simulate --family sp-even --n 10 --q 2 --what transv-product --steps 2 --samples 100000 --seed 7";
  const auto a = run(args);
  const auto b = run(args + " --threads 3");
  const auto c = run(args, "WEILMIX_THREADS=2");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(run(args, "WEILMIX_THREADS=zero").code == 2);
  CHECK(a.out.find("\r\n2,") != std::string::npos);
  CHECK(a.out.find("\"monte-carlo(seed=7, samples=100000)\"") != std::string::npos);
  const auto empty = run("simulate --family gu --n 2 --q 2 --what fixed-space --samples 0 --seed 1");
  CHECK(empty.code == 0);
  CHECK(count_lines(empty.out) == 1);
}

TEST_CASE("verify") {
  CHECK(run("verify --level quick").code == 0);
  const auto bad = run("verify --level quick --mutate gl-e0");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("codim_dist_gl vs oracle_pair_exact") != std::string::npos);
  const auto j = nlohmann::json::parse(run("verify --level quick --format json").out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["ok"] == true);
}

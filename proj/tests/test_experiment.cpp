#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pco/analysis.hpp"
#include "pco/cli.hpp"
#include "pco/errors.hpp"
#include "pco/experiment.hpp"
#include "pco/verify.hpp"

using namespace pco;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pco-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path spec_path(const std::string& name) { return fs::path(PCO_SPEC_DIR) / (name + ".spec"); }

}  // namespace

TEST_CASE("splitmix64 reference stream") {
  SplitMix64 rng(1234567);
  CHECK(rng() == 6457827717110365317ULL);
  CHECK(rng() == 3203168211198807973ULL);
  CHECK(rng() == 9817491932198370423ULL);
  CHECK(rng() == 4593380528125082431ULL);
  CHECK(rng() == 16408922859458223821ULL);
  SplitMix64 u(1);
  for (int k = 0; k < 1000; ++k) {
    const double v = u.uniform();
    REQUIRE((v >= 0.0 && v < 1.0));
  }
}

TEST_CASE("angle parsing") {
  CHECK(parse_angle("1.25") == 1.25);
  CHECK(parse_angle("pi") == kPi);
  CHECK(parse_angle("pi/2") == kPi / 2);
  CHECK(parse_angle("3*pi/2") == doctest::Approx(1.5 * kPi));
  CHECK(parse_angle("1.5pi") == doctest::Approx(1.5 * kPi));
  CHECK(parse_angle("2*pi") == kTwoPi);
  CHECK_THROWS_AS(parse_angle("tau"), UsageError);
  CHECK_THROWS_AS(parse_angle(""), UsageError);
}

TEST_CASE("spec parsing") {
  const auto s = parse_spec(
      "# comment\nname = demo\nn = 6\ndirection = uni\nl = 0.5\nrefractory = 2:pi/2\n"
      "tie = delay\ninit = semicircle\nseed = 42\nexpected_verdict = synchronized\n");
  CHECK(s.name == "demo");
  CHECK(s.n == 6);
  CHECK(s.direction == Direction::Unidirectional);
  CHECK(s.l == 0.5);
  REQUIRE(s.refractory.size() == 1);
  CHECK(s.refractory[0].first == 1);
  CHECK(s.refractory[0].second == doctest::Approx(kPi / 2));
  CHECK(s.tie == TiePolicy::Delay);
  CHECK(s.seed == 42);
  CHECK(s.expected_verdict == Verdict::Synchronized);
  CHECK_THROWS_AS(parse_spec("n = 8\nn = 9\n"), UsageError);
  CHECK_THROWS_AS(parse_spec("colour = red\n"), UsageError);
  CHECK_THROWS_AS(parse_spec("n eight\n"), UsageError);
  CHECK_THROWS_AS(parse_spec("direction = sideways\n"), UsageError);
  CHECK_THROWS_AS(parse_spec("refractory = 0:1\n"), UsageError);
}

TEST_CASE("initial conditions") {
  CHECK(make_initial("uniform-u2", 8, 1.0, 0).phases ==
        worst_case_state(8, 1.0, WorstCase::UniU2uniform).phases);
  CHECK(make_initial("worst-bi", 8, 0.8377, 0).phases ==
        worst_case_state(8, 0.8377, WorstCase::BiUbar).phases);
  CHECK(make_initial("random", 8, 0.5, 3).phases == make_initial("random", 8, 0.5, 3).phases);
  CHECK(make_initial("random", 8, 0.5, 3).phases != make_initial("random", 8, 0.5, 4).phases);
  const auto semi = make_initial("semicircle", 12, 0.5, 5);
  CHECK(classify(semi).spread < kPi);
  CHECK(make_initial("phases:0,pi/2,pi,3*pi/2", 4, 0.5, 0).phases[2] == kPi);
  CHECK_THROWS_AS(make_initial("phases:0,1,2", 4, 0.5, 0), UsageError);
  CHECK_THROWS_AS(make_initial("sideways", 4, 0.5, 0), UsageError);
}

TEST_CASE("semicircle draws stay within half a cycle") {
  SplitMix64 rng(77);
  for (int k = 0; k < 2000; ++k) {
    const auto x = semicircle_state(4 + rng.below(13), rng);
    double lo = kTwoPi;
    double hi = 0.0;
    for (double v : x.phases) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    REQUIRE(hi - lo < kPi);
    REQUIRE(lo >= 0.0);
    REQUIRE(hi <= kTwoPi);
  }
}

TEST_CASE("bundled specs reproduce their verdicts") {
  for (const char* name : {"fig2-top", "fig2-bottom", "fig3-top", "fig3-bottom", "fig4-top", "fig4-bottom"}) {
    CAPTURE(name);
    const auto spec = load_spec(spec_path(name));
    CHECK(spec.name == name);
    REQUIRE(spec.expected_verdict);
    const auto result = run_experiment(spec, false);
    CHECK(result.outcome.verdict == *spec.expected_verdict);
  }
}

TEST_CASE("fig4 bottom reaches exact equality") {
  const auto result = run_experiment(load_spec(spec_path("fig4-bottom")), false);
  REQUIRE(result.outcome.t_sync);
  CHECK(distance_vector(result.outcome.final_state).max() == 0.0);
}

TEST_CASE("simulate writes csv and outcome") {
  const auto dir = scratch("simulate");
  const auto r = cli({"simulate", spec_path("fig2-top").string(), "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("fig2-top,clustered_equilibrium") != std::string::npos);
  CHECK(fs::exists(dir / "fig2-top.csv"));
  const auto j = nlohmann::json::parse(slurp(dir / "fig2-top.outcome.json"));
  CHECK(j["verdict"] == "clustered_equilibrium");
  CHECK(j["spec_text"].get<std::string>().find("l = 0.8377") != std::string::npos);
}

TEST_CASE("simulate is deterministic") {
  const auto a = scratch("det-a");
  const auto b = scratch("det-b");
  const std::vector<std::string> flags = {"--n", "10", "--direction", "uni", "--l", "0.4",
                                          "--init", "random", "--seed", "99", "--record-every",
                                          "0.125", "--refractory", "3:pi/2", "--name", "rnd"};
  auto args_a = std::vector<std::string>{"simulate"};
  args_a.insert(args_a.end(), flags.begin(), flags.end());
  auto args_b = args_a;
  args_a.insert(args_a.end(), {"--out", a.string()});
  args_b.insert(args_b.end(), {"--out", b.string(), "--jobs", "3"});
  REQUIRE(cli(args_a).code == 0);
  REQUIRE(cli(args_b).code == 0);
  CHECK(slurp(a / "rnd.csv") == slurp(b / "rnd.csv"));
  CHECK(slurp(a / "rnd.outcome.json") == slurp(b / "rnd.outcome.json"));
  CHECK(!slurp(a / "rnd.csv").empty());
}

TEST_CASE("parallel simulate matches serial") {
  const auto a = scratch("par-a");
  const auto b = scratch("par-b");
  std::vector<std::string> base = {"simulate"};
  for (const char* n : {"fig2-top", "fig2-bottom", "fig3-top", "fig3-bottom"}) base.push_back(spec_path(n).string());
  auto serial = base;
  serial.insert(serial.end(), {"--out", a.string()});
  auto parallel = base;
  parallel.insert(parallel.end(), {"--out", b.string(), "--jobs", "4"});
  const auto rs = cli(serial);
  const auto rp = cli(parallel);
  CHECK(rs.out == rp.out);
  CHECK(slurp(a / "fig3-bottom.csv") == slurp(b / "fig3-bottom.csv"));
}

TEST_CASE("critical command") {
  CHECK(cli({"critical", "8", "bi"}).out == "0.837722\n");
  CHECK(cli({"critical", "8", "uni"}).out == "0.857143\n");
  CHECK(cli({"critical", "3"}).code == kExitUsage);
  const auto sweep = cli({"critical", "--sweep", "4:250"});
  CHECK(sweep.code == 0);
  std::istringstream in(sweep.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,direction,l_star");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2 * 247);
  CHECK(sweep.out.find("250,uni,0.99598") != std::string::npos);
  CHECK(sweep.out.find("250,bi,0.99596") != std::string::npos);

  const auto dir = scratch("critical");
  const auto file = dir / "curve.csv";
  CHECK(cli({"critical", "--spec", spec_path("fig5").string(), "--out", file.string()}).code == 0);
  CHECK(slurp(file) == sweep.out);
}

TEST_CASE("worst-case command") {
  const auto r = cli({"worst-case", "--n", "8", "--l", "0.8377", "--which", "bi-ubar"});
  CHECK(r.code == 0);
  CHECK(r.out.find("class=in_u1") != std::string::npos);
  CHECK(r.out.find("node,phase,distance\n1,6.2831853071795862,") != std::string::npos);
  CHECK(cli({"worst-case", "--which", "uni-u2-uniform", "--l", "1"}).out.find("class=in_u2") != std::string::npos);
  CHECK(cli({"worst-case", "--which", "nope"}).code == kExitUsage);
  CHECK(cli({"worst-case", "--which", "bi-ubar", "--l", "1"}).code == kExitUsage);
}

TEST_CASE("sweep command brackets the critical coupling") {
  const auto r = cli({"sweep", "--n", "8", "--direction", "bi", "--l-range", "0.8376:0.8379:4",
                      "--init-l", "0.8377", "--jobs", "2"});
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "l,verdict,t_sync,jumps,rounds");
  std::vector<std::string> verdicts;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    verdicts.push_back(line.substr(a + 1, line.find(',', a + 1) - a - 1));
  }
  REQUIRE(verdicts.size() == 4);
  CHECK(verdicts[1] == "clustered_equilibrium");
  CHECK(verdicts[2] == "synchronized");
  CHECK(verdicts[3] == "synchronized");
}

TEST_CASE("gamma command") {
  const auto r = cli({"gamma", "--n", "8", "--l", "0.86", "--direction", "uni"});
  CHECK(r.code == 0);
  CHECK(r.out.find("8,") != std::string::npos);
  CHECK(r.out.find("delta/(1-l)") != std::string::npos);
  CHECK(r.out.find("exceeds_half=true") != std::string::npos);
}

TEST_CASE("verify command examples") {
  const auto lemma1 = cli({"verify", "lemma1", "--seed", "7", "--trials", "200"});
  CHECK(lemma1.code == 0);
  CHECK(lemma1.out.find("lemma1,semicircle_synchronizes,PASS,200,0") != std::string::npos);

  const auto matrices = cli({"verify", "matrices"});
  CHECK(matrices.code == 0);
  CHECK(matrices.out.find("FAIL") == std::string::npos);

  const auto thresholds = cli({"verify", "thresholds", "--n", "8"});
  CHECK(thresholds.code == 0);
  CHECK(thresholds.out.find("FAIL") == std::string::npos);

  CHECK(cli({"verify", "nonsense"}).code == kExitUsage);
}

TEST_CASE("verify results do not depend on the job count") {
  VerifyOptions one{.seed = 3, .trials = 60, .n = 8, .jobs = 1};
  VerifyOptions four = one;
  four.jobs = 4;
  for (const char* suite : {"proposition1", "lemma2", "matrices"}) {
    CHECK(format_results(run_verify_suite(suite, one)) == format_results(run_verify_suite(suite, four)));
  }
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"bogus"}).code == kExitUsage);
  CHECK(cli({"simulate", "--n", "3"}).code == kExitUsage);
  CHECK(cli({"simulate", "--l", "1.5"}).code == kExitUsage);
  CHECK(cli({"simulate", "/nonexistent/file.spec"}).code == kExitUsage);
  CHECK(cli({"simulate", "--n", "eight"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == 0);
}

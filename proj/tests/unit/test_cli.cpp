#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "superact/cli.hpp"

using namespace superact;
namespace fs = std::filesystem;

namespace {
fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "superact_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "superact");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string out_path(const std::string& name) {
  const fs::path p = scratch_dir() / name;
  fs::remove(p);
  return p.string();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }
}  // namespace

TEST_CASE("grid parsing") {
  const auto g = parse_grid("0:1:101");
  CHECK(g.count == 101);
  const auto pts = g.points();
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 1.0);
  CHECK(parse_grid("0.5:0.5:1").points() == std::vector<double>{0.5});
  CHECK_THROWS_AS(parse_grid("0:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("0:x:3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("0:1:0"), std::invalid_argument);
}

TEST_CASE("state specs") {
  CHECK(max_abs_diff(parse_state_spec("noisy-ghz:0.5").matrix(), noisy_ghz(0.5).matrix()) == 0.0);
  CHECK(max_abs_diff(parse_state_spec("noise-model:0.5,0.9,0.8").matrix(), noise_model_state(0.5, 0.9, 0.8).matrix()) ==
        0.0);
  CHECK_THROWS_AS(parse_state_spec("noisy-ghz:1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_spec("noisy-ghz"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_spec("noise-model:0.5,0.9"), std::invalid_argument);
  CHECK_THROWS(parse_state_spec((scratch_dir() / "missing.json").string()));
}

TEST_CASE("config files") {
  const auto cfg = load_config(R"({"subcommand":"sweep","grid":{"start":0,"stop":1,"count":5},"seed":3,"curves":true})");
  CHECK(cfg.subcommand == "sweep");
  CHECK(cfg.grid.count == 5);
  CHECK(cfg.seed == 3);
  CHECK(cfg.curves);
  CHECK_THROWS_AS(load_config(R"({"bogus":1})"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("{"), std::invalid_argument);

  const fs::path conf = scratch_dir() / "curves.json";
  std::ofstream(conf) << R"({"subcommand":"sweep","curves":true,"grid":{"start":0,"stop":1,"count":3}})";
  const auto out = out_path("from_config.csv");
  CHECK(run({"--config", conf.string(), "-o", out}) == 0);
  CHECK(lines(slurp(out)) == 4);
}

TEST_CASE("parallel map keeps order") {
  const auto r = parallel_map(50, [](std::size_t i) { return std::to_string(i * i); });
  REQUIRE(r.size() == 50);
  for (std::size_t i = 0; i < 50; ++i) CHECK(r[i] == std::to_string(i * i));
  CHECK_THROWS_AS(parallel_map(10,
                               [](std::size_t i) -> std::string {
                                 if (i >= 3) throw std::runtime_error("boom " + std::to_string(i));
                                 return "";
                               }),
                  std::runtime_error);
  CHECK(worker_count() >= 1);
}

TEST_CASE("certify report") {
  const auto out = out_path("certify.json");
  CHECK(run({"certify", "noisy-ghz:0.5", "-o", out}) == 0);
  const auto rep = nlohmann::json::parse(slurp(out));
  CHECK(rep["gme_concurrence"].get<double>() == doctest::Approx(0.125));
  CHECK(rep["ghz_witness"].get<double>() == doctest::Approx(-0.0625));
  CHECK(rep["sle"][0]["value"].get<double>() > 0.0);
  CHECK(rep["sle_certified"].get<bool>());
  CHECK(rep["ppt_mixer"]["sign"] == "entangled");

  const auto pure = out_path("certify_pure.json");
  CHECK(run({"certify", "noisy-ghz:1.0", "-o", pure}) == 0);
  const auto rp = nlohmann::json::parse(slurp(pure));
  CHECK(rp["gme_concurrence"].get<double>() == doctest::Approx(1.0));
  CHECK(rp["ppt_mixer"]["sign"] == "entangled");

  const auto csv = out_path("certify.csv");
  CHECK(run({"certify", "noisy-ghz:0.5", "--format", "csv", "-o", csv}) == 0);
  CHECK(lines(slurp(csv)) == 2);
}

TEST_CASE("invalid inputs fail cleanly without output files") {
  const fs::path bad = scratch_dir() / "nonhermitian.json";
  std::ofstream(bad) << R"({"n_qubits":1,"re":[[1,0.5],[0,0]]})";
  const auto out = out_path("never.json");
  CHECK(run({"certify", bad.string(), "-o", out}) == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK_FALSE(fs::exists(out + ".tmp"));
  CHECK(run({"certify", "noisy-ghz:1.5", "-o", out}) == 2);
  CHECK(run({"certify", "-o", out}) == 2);
  CHECK(run({"distill", "--protocol", "magic", "noisy-ghz:0.5", "-o", out}) == 2);
  CHECK(run({"sweep", "--curves", "0:1:0", "-o", out}) == 2);
  CHECK(run({"coincidence", "--sample", "setting=zzq", "-o", out}) == 2);
  CHECK(run({"bogus"}) == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("distill subcommand") {
  const auto out = out_path("distill.json");
  CHECK(run({"distill", "noisy-ghz:0.5", "noisy-ghz:0.5", "-o", out}) == 0);
  const auto rep = nlohmann::json::parse(slurp(out));
  CHECK(rep["fidelity_ghz"].get<double>() == doctest::Approx(10.25 / 14).epsilon(1e-12));
  CHECK(rep["success_probability"].get<double>() == doctest::Approx(0.21875).epsilon(1e-12));

  const auto w = out_path("distill_w.json");
  CHECK(run({"distill", "--protocol", "cnot", "noisy-w:0.6", "noisy-w:0.6", "-o", w}) == 0);
  CHECK(nlohmann::json::parse(slurp(w))["w_witness"].get<double>() < 0.0);

  const auto loc = out_path("distill_loc.json");
  CHECK(run({"distill", "noisy-ghz:0.5", "--localize", "X:2", "-o", loc}) == 0);
  const double p = 0.5;
  const double f2 = (13 * p * p + 2 * p + 1) / (4 * (3 * p * p + 1));
  CHECK(nlohmann::json::parse(slurp(loc))["localization"]["epr_fidelity"].get<double>() ==
        doctest::Approx(f2).epsilon(1e-12));
}

TEST_CASE("sweep subcommand") {
  const auto out = out_path("curves.csv");
  CHECK(run({"sweep", "--curves", "0:1:101", "-o", out}) == 0);
  const auto text = slurp(out);
  CHECK(lines(text) == 102);
  CHECK(text.rfind("p,F_initial,F1,F2\n0,0.125,0.125,0.25\n", 0) == 0);
  CHECK(text.find("\n1,1,1,1\n") != std::string::npos);

  const auto one = out_path("curves1.csv");
  CHECK(run({"sweep", "--curves", "0.5:0.5:1", "-o", one}) == 0);
  CHECK(lines(slurp(one)) == 2);

  const auto th = out_path("thresholds.csv");
  CHECK(run({"sweep", "--thresholds", "GME,SLE", "-o", th}) == 0);
  const auto tt = slurp(th);
  CHECK(lines(tt) == 3);
  CHECK(tt.find("GME,0.4285") != std::string::npos);

  const auto cert = out_path("certifiers.csv");
  CHECK(run({"sweep", "--certifiers", "noisy-ghz", "--grid", "0.5:1:3", "-o", cert}) == 0);
  CHECK(lines(slurp(cert)) == 4);
}

TEST_CASE("coincidence subcommand") {
  const auto out = out_path("enum.csv");
  CHECK(run({"coincidence", "-o", out}) == 0);
  const auto text = slurp(out);
  CHECK(text.find("g1-g2-g3-g4,1,1,1,1,H,H,H,H,out,out,out,out,1,1,1,1,1,1,1,1,pass") != std::string::npos);
  CHECK(text.find("g1-g2^2-0-g4,1,2,0,1,H,HH,0,H,out,out,out,out,1,1,1,0,1,2,2,0,reject") != std::string::npos);

  const auto sched = out_path("schedule.csv");
  CHECK(run({"coincidence", "--schedule", "p=0.5", "-o", sched}) == 0);
  CHECK(slurp(sched).find("G0+,in,out,out,0.66666666666666663") != std::string::npos);

  const auto a = out_path("sample_a.json"), b = out_path("sample_b.json");
  CHECK(run({"coincidence", "--sample", "setting=zzz", "shots=1000", "seed=7", "-o", a}) == 0);
  CHECK(run({"coincidence", "--sample", "setting=zzz", "shots=1000", "seed=7", "-o", b}) == 0);
  CHECK(slurp(a) == slurp(b));
  const auto h = nlohmann::json::parse(slurp(a));
  CHECK(h["histogram"]["000"].get<int>() + h["histogram"]["111"].get<int>() == 1000);

  const auto f = out_path("fidelity.json");
  CHECK(run({"coincidence", "--fidelity", "--state", "noisy-ghz:0.6", "--sample", "shots=20000", "-o", f}) == 0);
  const auto fr = nlohmann::json::parse(slurp(f));
  CHECK(fr["exact_fidelity"].get<double>() == doctest::Approx(0.65));
  CHECK(std::abs(fr["fidelity_estimate"].get<double>() - 0.65) < 4 * fr["standard_error"].get<double>());
}

TEST_CASE("identical configurations give byte-identical files") {
  const std::vector<std::vector<std::string>> runs = {
      {"certify", "noise-model:0.5,0.9084,0.9210"},
      {"distill", "noisy-w:0.6", "--protocol", "cnot", "--certify"},
      {"sweep", "--curves", "0:1:11"},
      {"sweep", "--certifiers", "noisy-w", "--grid", "0.4:0.6:3"},
      {"coincidence", "--fidelity", "--state", "noisy-ghz:0.6", "--sample", "shots=5000", "seed=11"},
  };
  int k = 0;
  for (auto args : runs) {
    const auto first = out_path("repeat_a" + std::to_string(k) + ".out");
    const auto second = out_path("repeat_b" + std::to_string(k) + ".out");
    ++k;
    auto a1 = args, a2 = args;
    a1.insert(a1.end(), {"-o", first});
    a2.insert(a2.end(), {"-o", second});
    CHECK(run(a1) == 0);
    setenv("SUPERACT_THREADS", "1", 1);
    CHECK(run(a2) == 0);
    unsetenv("SUPERACT_THREADS");
    CHECK(slurp(first) == slurp(second));
    CHECK_FALSE(slurp(first).empty());
  }
}

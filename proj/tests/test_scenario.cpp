#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nhcl/scenario/dispatch.hpp"

using namespace nhcl;
using namespace nhcl::scenario;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nhcl_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Csv {
  std::string header;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const fs::path& p) {
  std::ifstream in(p);
  Csv out;
  std::getline(in, out.header);
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
    out.rows.push_back(row);
  }
  return out;
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::config);
    const std::string prefix = std::string(to_string(errc::config)) + ": ";
    const std::string what = e.what();
    EXPECT_EQ(what.rfind(prefix, 0), 0u);
    return what.substr(prefix.size());
  }
  ADD_FAILURE() << "accepted: " << text;
  return "";
}

int cli(const std::string& args) {
  const int status = std::system((std::string(NHCL_BIN) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ScenarioConfig quick(Kind k, const fs::path& out) {
  ScenarioConfig c = defaults(k);
  c.out = out.string();
  c.t_end = 10.0;
  c.n_steps = 100;
  return c;
}

}  // namespace

TEST(Config, TextRoundTripsForEveryScenario) {
  for (const auto& [kind, name] : kKindNames) {
    ScenarioConfig c = defaults(kind);
    c.tol = 3.3e-11;
    c.out = "some/dir";
    if (!is_spin(kind) && !is_anharmonic(kind)) c.omega_prime = 1.0;
    c.window_begin = 0.1;
    c.window_end = 1.0 / 3.0;
    EXPECT_EQ(parse_config(to_text(c)), c) << name;
  }
}

TEST(Config, EmptyFileGivesCaptionDefaults) {
  const ScenarioConfig c = parse_config("", std::string("damped_ho"));
  EXPECT_EQ(c, defaults(Kind::damped_ho));
  EXPECT_EQ(c.f0, 0.1);
  EXPECT_EQ(c.gamma, 0.1);
  EXPECT_EQ(c.q0, 2.0);
  EXPECT_EQ(c.p0, 0.0);
  EXPECT_EQ(c.quantum, QuantumSource::propagate);
}

TEST(Config, FileAndOverridesLayerOnDefaults) {
  const auto file = parse_entries("# comment\nscenario = driven_ho\n  gamma = 0.2   # trailing\n\n");
  const ScenarioConfig c = resolve(file, std::nullopt, {{"dim", "64"}});
  EXPECT_EQ(c.scenario, Kind::driven_ho);
  EXPECT_EQ(c.gamma, 0.2);
  EXPECT_EQ(c.dim, 64);
  EXPECT_EQ(c.f0, 1.0);
  EXPECT_EQ(resolve(file, std::string("husimi")).scenario, Kind::husimi);
}

TEST(Config, RejectsBadInputNamingTheKey) {
  EXPECT_EQ(config_error("scenario = damped_ho\nfoo = 1").rfind("foo:", 0), 0u);
  EXPECT_EQ(config_error("scenario = damped_ho\ngamma = -0.1").rfind("gamma:", 0), 0u);
  EXPECT_EQ(config_error("scenario = damped_ho\ndim = 1").rfind("dim:", 0), 0u);
  EXPECT_EQ(config_error("scenario = damped_ho\ndim = 2.5").rfind("dim:", 0), 0u);
  EXPECT_EQ(config_error("scenario = damped_ho\ngamma = abc").rfind("gamma:", 0), 0u);
  EXPECT_EQ(config_error("scenario = warp").rfind("scenario:", 0), 0u);
  EXPECT_EQ(config_error("gamma = 0.1").rfind("scenario:", 0), 0u);
  EXPECT_EQ(config_error("scenario = bloch\nL = 0.75").rfind("L:", 0), 0u);
  EXPECT_EQ(config_error("scenario = anharmonic\nquantum = closed_form").rfind("quantum:", 0), 0u);
  EXPECT_EQ(config_error("scenario = damped_ho\nquantum = magic").rfind("quantum:", 0), 0u);
  EXPECT_EQ(config_error("scenario = damped_ho\nbeta = 0.4").rfind("beta:", 0), 0u);
  EXPECT_NE(config_error("scenario = damped_ho\ngamma = 0.1\ngamma = 0.2").find("gamma"), std::string::npos);
  config_error("scenario = damped_ho\njust words");
}

TEST(Run, ClosedFormMatchesPropagationOffUnits) {
  // m, hbar and omega away from 1 so a unit slip would show.
  for (Kind k : {Kind::damped_ho, Kind::cat_state}) {
    ScenarioConfig c = defaults(k);
    c.m = 2.0;
    c.hbar = 0.5;
    c.omega = 1.3;
    c.f0 = 0.3;
    c.Omega = 0.8;
    c.dim = 64;
    c.tol = 1e-12;
    c.t_end = 10.0;
    c.n_steps = 50;
    const OscillatorRun num = run_oscillator(c);
    c.quantum = QuantumSource::closed_form;
    const OscillatorRun ex = run_oscillator(c);
    for (const char* name : {"q", "p", "H"}) {
      const auto &a = num.quantum.observable(name), &b = ex.quantum.observable(name);
      for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-8) << name << " t=" << num.quantum.times[j];
    }
    for (std::size_t j = 0; j < num.quantum.norms.size(); ++j)
      EXPECT_NEAR(num.quantum.norms[j] / ex.quantum.norms[j], 1.0, 1e-8);
  }
}

TEST(Run, OutputIsDeterministic) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  run(quick(Kind::damped_ho, a));
  run(quick(Kind::damped_ho, b));
  for (const char* f : {"trajectory.csv", "classical.csv", "limit_cycle.csv"}) {
    EXPECT_FALSE(slurp(a / f).empty()) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(Run, DampedOscillatorQuantumFollowsClassical) {
  const fs::path dir = scratch("damped");
  ScenarioConfig c = defaults(Kind::damped_ho);
  c.out = dir.string();
  const RunReport rep = run(c);
  EXPECT_TRUE(rep.ok);
  const Csv q = read_csv(dir / "trajectory.csv"), cl = read_csv(dir / "classical.csv");
  EXPECT_EQ(q.header, "t,q,p,H,norm");
  EXPECT_EQ(cl.header, "t,q,p,norm");
  ASSERT_EQ(q.rows.size(), 601u);
  ASSERT_EQ(cl.rows.size(), q.rows.size());
  for (std::size_t k = 0; k < q.rows.size(); ++k) {
    EXPECT_EQ(q.rows[k][0], cl.rows[k][0]);
    EXPECT_NEAR(q.rows[k][1], cl.rows[k][1], 1e-6);
    EXPECT_NEAR(q.rows[k][4] / cl.rows[k][3], 1.0, 1e-6);
  }
  const std::string meta = slurp(dir / "meta.txt");
  EXPECT_EQ(meta.rfind("# reproduces: Fig. 1", 0), 0u);
  EXPECT_NE(meta.find("scenario = damped_ho\n"), std::string::npos);
  EXPECT_NE(meta.find("f0 = 0.10000000000000001\n"), std::string::npos);
}

TEST(Run, CatStateStartsCentredAndJoinsTheLimitCycle) {
  const fs::path dir = scratch("cat");
  ScenarioConfig c = defaults(Kind::cat_state);
  c.out = dir.string();
  c.t_end = 80.0;
  c.n_steps = 800;
  run(c);
  const Csv q = read_csv(dir / "trajectory.csv"), lc = read_csv(dir / "limit_cycle.csv");
  EXPECT_NEAR(q.rows.front()[1], 0.0, 1e-12);
  EXPECT_NEAR(q.rows.front()[2], 0.0, 1e-12);
  for (std::size_t k = 0; k < q.rows.size(); ++k)
    if (q.rows[k][0] > 70.0) EXPECT_NEAR(q.rows[k][1], lc.rows[k][1], 5e-3) << "t=" << q.rows[k][0];
}

TEST(Run, DrivenClosedFormReachesTheCycle) {
  const fs::path dir = scratch("driven");
  ScenarioConfig c = defaults(Kind::driven_ho);
  c.out = dir.string();
  run(c);
  const Csv q = read_csv(dir / "trajectory.csv"), lc = read_csv(dir / "limit_cycle.csv");
  for (std::size_t k = 0; k < q.rows.size(); ++k)
    if (q.rows[k][0] > 55.0) EXPECT_NEAR(q.rows[k][1], lc.rows[k][1], 0.05) << "t=" << q.rows[k][0];
}

TEST(Run, HusimiWritesGridAndRidge) {
  const fs::path dir = scratch("husimi");
  ScenarioConfig c = defaults(Kind::husimi);
  c.out = dir.string();
  c.n_q = 31;
  c.n_p = 21;
  const RunReport rep = run(c);
  const Csv h = read_csv(dir / "husimi.csv"), r = read_csv(dir / "ridge.csv");
  EXPECT_EQ(h.header, "q,p,value");
  EXPECT_EQ(h.rows.size(), 31u * 21u);
  for (const auto& row : h.rows) EXPECT_GE(row[2], 0.0);
  EXPECT_FALSE(r.rows.empty());
  EXPECT_EQ(std::count(rep.files.begin(), rep.files.end(), "ridge.csv"), 1);
}

TEST(Run, SpinScenariosWriteTheirFiles) {
  const fs::path dir = scratch("bloch");
  ScenarioConfig c = quick(Kind::bloch, dir);
  c.L = 5.0;
  run(c);
  const Csv q = read_csv(dir / "trajectory.csv"), cl = read_csv(dir / "classical.csv");
  EXPECT_EQ(q.header, "t,sx,sy,sz,norm");
  EXPECT_EQ(cl.header, "t,sx,sy,sz,norm");
  EXPECT_NEAR(cl.rows.front()[4], 1.0, 1e-15);
  for (const auto& row : cl.rows) EXPECT_NEAR(row[1] * row[1] + row[2] * row[2] + row[3] * row[3], 0.25, 1e-9);

  const fs::path fp = scratch("fixed");
  ScenarioConfig f = defaults(Kind::fixed_points);
  f.out = fp.string();
  run(f);
  const std::string text = slurp(fp / "fixed_points.csv");
  EXPECT_NE(text.find(",sink,"), std::string::npos);
  EXPECT_NE(text.find(",source,"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "scenario = damped_ho\nt_end = 2\nn_steps = 20\n";
  const std::string base = "run " + cfg.string() + " --out " + (dir / "out").string();
  EXPECT_EQ(cli(base), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "meta.txt"));
  EXPECT_EQ(cli(base + " --set gamma=-0.1"), 2);
  EXPECT_EQ(cli(base + " --set nonsense=1"), 2);
  EXPECT_EQ(cli("run " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(cli(base + " --bogus"), 2);
  // Undamped drive exactly on resonance has no limit cycle.
  EXPECT_EQ(cli(base + " --scenario driven_ho --set gamma=0 --set Omega=1"), 3);
  EXPECT_EQ(cli(base + " --scenario fixed_points --set seeds=4"), 0);
}

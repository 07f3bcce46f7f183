#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "nhcl/acceptance.hpp"
#include "nhcl/scenario/run.hpp"

namespace nhcl::scenario {

// Runs one scenario and writes its files under c.out. For verify, ok is false
// unless every acceptance check passes.
inline RunReport run(const ScenarioConfig& c, const std::function<void(const std::string&)>& progress = {}) {
  validate(c);
  const std::filesystem::path dir(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw error(errc::config, "out: cannot create directory '" + c.out + "': " + ec.message());

  RunReport rep;
  switch (c.scenario) {
    case Kind::damped_ho:
    case Kind::driven_ho:
    case Kind::cat_state:
    case Kind::anharmonic:
    case Kind::revival:
      write_oscillator(dir, run_oscillator(c), rep);
      break;
    case Kind::husimi: {
      const OscillatorRun r = run_oscillator(c);
      write_oscillator(dir, r, rep);
      write_husimi(dir, run_husimi(c, r), rep);
      break;
    }
    case Kind::bloch: write_spin(dir, run_spin(c), rep); break;
    case Kind::fixed_points: write_fixed_points(dir, fixed_points(c.epsilon, c.v, c.g, c.gamma, c.seeds), rep); break;
    case Kind::verify: {
      std::ofstream out(dir / "verify.txt", std::ios::binary);
      for (const auto& r : acceptance::run_all([&](const acceptance::Result& r) {
             if (progress) progress(acceptance::format(r));
           })) {
        out << acceptance::format(r) << '\n';
        rep.lines.push_back(acceptance::format(r));
        rep.ok = rep.ok && r.pass;
      }
      rep.files.push_back("verify.txt");
      break;
    }
  }
  write_meta(dir, c, rep);
  return rep;
}

}  // namespace nhcl::scenario

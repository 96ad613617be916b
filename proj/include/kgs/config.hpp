#pragma once

// Experiment configuration: INI-style key-value tables, one file per run,
// plus the experiment driver shared by the command-line tool and the tests.

#include <cstdint>
#include <string>

#include "kgs/evolve.hpp"

namespace kgs {

struct SpectralScan {
  double v = 0.5;
  double omega_min = 0.05;
  double omega_max = 3.0;
  int samples = 60;
};

struct WienerParams {
  double k_max = 20.0;
  int n = 4001;
  double threshold = 1e-12;
};

struct FrozenParams {
  Vec3 v = Vec3(0.2, 0.0, 0.0);
  double T = 14.0;
  double dt = 0.0;   // 0 selects h/4
  std::uint64_t seed = 7;
  double r0 = 4.0;
  double k_max = 1.5;
  std::string mode = "transversal";  // transversal | secular
  double fit_t0 = 3.0;
};

struct DecayProbeParams {
  Vec3 v = Vec3::Zero();
  double t0 = 2.0;
  double t1 = 0.0;  // 0 selects the wraparound bound minus 1
  int samples = 40;
  std::uint64_t seed = 3;
  double r0 = 3.0;
  double k_max = 1.5;
  double fit_t0 = 5.0;
};

struct ExperimentSpec {
  std::string command = "simulate";
  RunConfig run;
  SpectralScan spectral;
  WienerParams wiener;
  FrozenParams frozen;
  DecayProbeParams decay;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  int project_every = 1;  // decomposition cadence for `scatter`

  void validate() const;
};

ExperimentSpec parse_config(const std::string& path);
ExperimentSpec parse_config_text(const std::string& text, const std::string& origin = "<string>");
std::string emit_config(const ExperimentSpec& spec);

/// Executes the configured experiment, writing CSV/JSON artifacts and a
/// manifest into spec.out_dir. Returns 0 on success; validation problems and
/// numerical failures surface as exceptions (mapped to exit codes 1/2 by the
/// CLI).
int run_experiment(const ExperimentSpec& spec);

}  // namespace kgs

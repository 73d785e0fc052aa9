#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wavenorm/local_energy.hpp"
#include "wavenorm/profiles.hpp"
#include "wavenorm/quadrature.hpp"
#include "wavenorm/spectral.hpp"

namespace wavenorm {

/// count log-spaced times from start to stop.
struct SampleSpec {
  double start = 1e2;
  double stop = 1e5;
  int count = 40;
};

struct LocalEnergySpec {
  double R = 5.0;
  std::vector<double> times;
};

/// Experiment description read from an INI file. Keys live in sections:
///   [run]          dimension
///   [u0], [u1]     kind plus the parameters of that kind
///   [constants]    delta0, M
///   [quadrature]   abs_tol, rel_tol, max_panels
///   [samples]      start, stop, count
///   [grid]         half_length, points
///   [local_energy] R, times (comma separated)
///   [output]       dir
struct ExperimentConfig {
  int dimension = 1;
  ProfilePair profiles{Profile::zero(1), Profile::zero(1)};
  ProofConstants constants;
  QuadConfig quad;
  SampleSpec samples;
  GridSpec grid;
  LocalEnergySpec local_energy;
  std::string out_dir = "out";

  std::vector<double> times() const;
};

/// Parses and validates. Throws ConfigError naming the offending key.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// The configuration used when none is given: the one-dimensional example
/// data u0 = 0, u1 = 2 on [-1, 1].
const std::string& default_config_text();
ExperimentConfig default_config();

}  // namespace wavenorm

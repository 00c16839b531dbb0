#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ckgf/gen.hpp"

namespace ckgf {

struct SweepFailure {
  std::uint64_t seed = 0;
  std::string message;
};

struct SweepResult {
  std::string suite;
  std::size_t instances = 0;
  std::size_t passed = 0;
  std::vector<SweepFailure> failures;

  bool ok() const { return passed == instances; }
};

/// Suite names accepted by run_sweep.
const std::vector<std::string>& sweep_suites();

/// Seeded property suite over generated instances; instance i uses seed
/// `seed + i`. Suite "all" runs every suite.
std::vector<SweepResult> run_sweep(const std::string& suite, std::uint64_t seed, std::size_t count,
                                   const Tolerances& tol = {});

/// Spec used by the sweeps for instance seed `s`, cycling controller and K modes.
GenSpec sweep_spec(std::uint64_t s, const Tolerances& tol = {});

}  // namespace ckgf

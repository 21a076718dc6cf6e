#pragma once

// Monte-Carlo tee experiments over random initial roll.

#include <cstdint>
#include <vector>

#include "omnipipe/planner.hpp"
#include "omnipipe/sim.hpp"

namespace omnipipe {

struct MonteCarloResult {
  long trials = 0;
  long successes = 0;
  double success_rate = 0.0;
  double ci_low = 0.0;   ///< Wilson 95 % interval
  double ci_high = 0.0;
  std::uint64_t seed = 0;
  bool with_holonomic = true;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
std::pair<double, double> wilson_interval(long successes, long trials,
                                          double z = 1.959963984540054);

/// Initial theta5 (rad, relative to the first turning segment) of trial
/// `index`: uniform on [0, 120) deg from a generator seeded with (seed, index),
/// so every trial is reproducible on its own.
double trial_theta5(std::uint64_t seed, long index);

/// Runs `trials` planned missions from random initial roll. Planning errors
/// count as failures. `threads` <= 0 uses the hardware concurrency; results do
/// not depend on it. Throws ValidationError when trials < 1.
MonteCarloResult monte_carlo_tee(const PipeNetwork& net, const PlannerConfig& pcfg,
                                 const SimConfig& scfg, const RobotGeometry& geom, long trials,
                                 std::uint64_t seed, bool with_holonomic, int threads = 0);

struct GridSweepResult {
  std::vector<double> theta5_deg;
  std::vector<Outcome> outcomes;
  long successes = 0;
};

/// Deterministic sweep of initial theta5 over [0, 120) deg in `step_deg`
/// increments.
GridSweepResult sweep_initial_theta5(const PipeNetwork& net, const PlannerConfig& pcfg,
                                     const SimConfig& scfg, const RobotGeometry& geom,
                                     double step_deg = 1.0);

}  // namespace omnipipe

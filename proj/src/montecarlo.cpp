#include "omnipipe/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "omnipipe/angles.hpp"
#include "omnipipe/error.hpp"

namespace omnipipe {
namespace {

double first_turn_roll(const PipeNetwork& net) {
  for (const auto& seg : net.segments()) {
    if (seg.kind != SegmentKind::Straight) return seg.turn_roll();
  }
  return 0.0;
}

bool trial_succeeds(const PipeNetwork& net, const PlannerConfig& pcfg, const SimConfig& scfg,
                    const RobotGeometry& geom,
                    const std::map<std::size_t, SingularityRegion>& regions, double roll) {
  try {
    const Plan plan = plan_mission(net, roll, pcfg, geom, regions);
    return run_mission(net, plan, scfg, geom, regions, roll).outcome == Outcome::Success;
  } catch (const PlanError&) {
    return false;
  } catch (const NoEscape&) {
    return false;
  }
}

}  // namespace

std::pair<double, double> wilson_interval(long successes, long trials, double z) {
  if (trials < 1) throw ValidationError("trials", "must be >= 1");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double trial_theta5(std::uint64_t seed, long index) {
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
  std::mt19937_64 rng(seq);
  // 53 random bits mapped onto [0, 1); avoids the library-specific
  // algorithm of uniform_real_distribution.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return deg_to_rad(kOrientationPeriodDeg) * u;
}

MonteCarloResult monte_carlo_tee(const PipeNetwork& net, const PlannerConfig& pcfg,
                                 const SimConfig& scfg, const RobotGeometry& geom, long trials,
                                 std::uint64_t seed, bool with_holonomic, int threads) {
  if (trials < 1) throw ValidationError("trials", "must be >= 1");
  PlannerConfig cfg = pcfg;
  cfg.with_holonomic = with_holonomic;
  cfg.validate();
  SimConfig sim = scfg;
  sim.record = false;
  sim.validate();
  const auto regions = tee_regions(net, geom, cfg);
  const double base_roll = first_turn_roll(net);

  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<long>(workers, trials));

  // Each worker owns a strided slice; the total is a plain integer sum, so it
  // is the same for every schedule.
  std::vector<long> counts(workers, 0);
  auto work = [&](unsigned w) {
    long local = 0;
    for (long i = w; i < trials; i += workers) {
      if (trial_succeeds(net, cfg, sim, geom, regions, base_roll + trial_theta5(seed, i))) ++local;
    }
    counts[w] = local;
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  MonteCarloResult res;
  res.trials = trials;
  for (long c : counts) res.successes += c;
  res.success_rate = static_cast<double>(res.successes) / static_cast<double>(trials);
  std::tie(res.ci_low, res.ci_high) = wilson_interval(res.successes, trials);
  res.seed = seed;
  res.with_holonomic = with_holonomic;
  return res;
}

GridSweepResult sweep_initial_theta5(const PipeNetwork& net, const PlannerConfig& pcfg,
                                     const SimConfig& scfg, const RobotGeometry& geom,
                                     double step_deg) {
  if (!(step_deg > 0.0)) throw ValidationError("step_deg", "must be > 0");
  SimConfig sim = scfg;
  sim.record = false;
  const auto regions = tee_regions(net, geom, pcfg);
  const double base_roll = first_turn_roll(net);
  GridSweepResult res;
  for (long k = 0;; ++k) {
    const double deg = static_cast<double>(k) * step_deg;
    if (deg >= kOrientationPeriodDeg) break;
    Outcome outcome = Outcome::Incomplete;
    try {
      const double roll = base_roll + deg_to_rad(deg);
      const Plan plan = plan_mission(net, roll, pcfg, geom, regions);
      outcome = run_mission(net, plan, sim, geom, regions, roll).outcome;
    } catch (const PlanError&) {
      outcome = Outcome::Incomplete;
    }
    res.theta5_deg.push_back(deg);
    res.outcomes.push_back(outcome);
    if (outcome == Outcome::Success) ++res.successes;
  }
  return res;
}

}  // namespace omnipipe

#include <algorithm>
#include <cmath>

#include "oscnorm/numeric.hpp"
#include "oscnorm/verify.hpp"

namespace oscnorm {

namespace {

void record(OracleStat& s, double a, double b, double scale) {
  const double ref = std::max({std::abs(a), std::abs(b), scale});
  const double err = ref > 0.0 ? std::abs(a - b) / ref : 0.0;
  ++s.comparisons;
  s.max_rel_error = std::max(s.max_rel_error, err);
  if (err > kOracleTolerance) ++s.mismatches;
}

double jn_objective(const CubeStatsTree& tree, std::span<const CubeRef> family, double p) {
  CompensatedSum acc;
  for (const CubeRef& r : family) {
    const CubeStats& s = tree.stats(r.level, r.morton);
    acc.add(std::pow(std::pow(s.measure, 1.0 / p - 1.0) * s.osc1, p));
  }
  return std::pow(acc.value(), 1.0 / p);
}

}  // namespace

bool OracleResult::passed() const {
  return std::all_of(stats.begin(), stats.end(), [](const OracleStat& s) { return s.mismatches == 0; });
}

OracleResult run_oracle(int dim, int max_level, std::size_t trials, std::uint64_t seed) {
  OracleResult out;
  out.stats = {{"jn"}, {"garo_front"}, {"gamma_slack"}};
  OracleStat& jn = out.stats[0];
  OracleStat& front = out.stats[1];
  OracleStat& slack = out.stats[2];

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const int level = static_cast<int>(trial % static_cast<std::size_t>(max_level + 1));
    const std::uint64_t s = seed * 7919u + trial;
    const GridFunction g = generate(RandomGen{s, RandomDistribution::normal}, dim, level);
    const CubeStatsTree tree(g);

    for (double p : {1.5, 2.0, 4.0}) {
      const FamilySelection best = brute_force_families(
          tree, [p](const CubeStatsTree& t, std::span<const CubeRef> f) { return jn_objective(t, f, p); });
      record(jn, jn_norm(tree, p), best.objective_value, 0.0);
    }

    // Best Σ osc2 per exact measure, then its strictly increasing part.
    std::vector<double> by_cells(g.size() + 1, 0.0);
    for_each_antichain(tree, [&](std::span<const CubeRef> family) {
      std::size_t cells = 0;
      CompensatedSum osc;
      for (const CubeRef& r : family) {
        cells += tree.cells_per_cube(r.level);
        osc.add(tree.stats(r.level, r.morton).osc2);
      }
      by_cells[cells] = std::max(by_cells[cells], osc.value());
    });
    // Compare the staircases k -> best Σ osc2 with measure <= k cells.
    FrontOptions exact;
    exact.mode = FrontMode::exact_budget;
    const ParetoFront computed = garo_front(tree, exact);
    double expected = 0.0;
    std::size_t next = 0;
    double reached = 0.0;
    for (std::size_t k = 0; k < by_cells.size(); ++k) {
      expected = std::max(expected, by_cells[k]);
      while (next < computed.points.size() && computed.points[next].cells <= k) {
        reached = std::max(reached, computed.points[next].osc);
        ++next;
      }
      record(front, reached, expected, 0.0);
    }

    const GridFunction gamma =
        scale(abs(generate(RandomGen{s + 0x9e3779b9u, RandomDistribution::uniform}, dim, level)), 0.6);
    const CubeStatsTree with_gamma = tree.with_gamma(gamma);
    const FamilySelection worst = brute_force_families(
        with_gamma, [](const CubeStatsTree& t, std::span<const CubeRef> f) {
          CompensatedSum acc;
          for (const CubeRef& r : f) {
            const CubeStats& c = t.stats(r.level, r.morton);
            acc.add(c.osc2 - *c.gamma_integral);
          }
          return acc.value();
        });
    record(slack, gamma_slack(with_gamma), worst.objective_value,
           std::max(tree.root().osc2, integral(gamma)));
  }
  return out;
}

}  // namespace oscnorm

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "oscnorm/cubetree.hpp"
#include "oscnorm/gridfn.hpp"
#include "oscnorm/rearrange.hpp"

namespace oscnorm {

/// Position of a cube inside a CubeStatsTree.
struct CubeRef {
  int level = 0;
  std::size_t morton = 0;

  friend bool operator==(const CubeRef&, const CubeRef&) = default;
  friend auto operator<=>(const CubeRef&, const CubeRef&) = default;
};

/// A disjoint family of dyadic cubes and its totals.
struct FamilySelection {
  std::vector<DyadicCube> cubes;
  double total_measure = 0.0;
  double total_osc = 0.0;  ///< Σ osc2
  double objective_value = 0.0;
};

bool is_antichain(std::span<const DyadicCube> cubes);

/// Builds a selection from tree positions; totals use compensated sums.
FamilySelection make_selection(const CubeStatsTree& tree, std::span<const CubeRef> refs,
                               double objective_value = 0.0);

// --- JN_p ------------------------------------------------------------------

/// sup over dyadic partitions of (Σ |Q|(|Q|^{-1} osc1(Q))^p)^{1/p}, i.e.
/// best(Q) = max(s_Q, Σ_children best) with s_Q = (|Q|^{1/p-1} osc1(Q))^p.
double jn_norm(const CubeStatsTree& tree, double p);
/// The maximizing family; objective_value is jn_norm.
FamilySelection jn_selection(const CubeStatsTree& tree, double p);

// --- GaRo_p ----------------------------------------------------------------

struct ParetoPoint {
  double measure = 0.0;
  double osc = 0.0;
  std::size_t cells = 0;  ///< measure in grid cells
};

enum class FrontMode { exact_budget, lambda_sweep };

struct FrontOptions {
  /// Unset: exact_budget up to 2^14 cells, lambda_sweep above.
  std::optional<FrontMode> mode;
  int sweep_count = 64;
  /// Explicit λ values for lambda_sweep; overrides sweep_count when nonempty.
  std::vector<double> lambdas;
  bool witnesses = false;
};

/// (measure, Σ osc2) pairs of optimal antichains, both coordinates strictly
/// increasing, starting at the origin. exact_budget gives every Pareto point
/// of the dyadic problem; lambda_sweep gives the vertices of its upper
/// concave envelope, a subset.
struct ParetoFront {
  FrontMode mode = FrontMode::exact_budget;
  std::vector<ParetoPoint> points;
  std::vector<FamilySelection> witnesses;  ///< parallel to points when requested
};

inline constexpr std::size_t kExactBudgetLimit = std::size_t{1} << 14;

FrontMode default_front_mode(const CubeStatsTree& tree);
ParetoFront garo_front(const CubeStatsTree& tree, const FrontOptions& options = {});

/// max over front points of osc / measure^{1/p'}; p = ∞ uses p' = 1.
double garo_norm(const ParetoFront& front, double p);
/// sup_Q osc2(Q)/|Q| over single dyadic cubes.
double garo_inf(const CubeStatsTree& tree);

const char* to_string(FrontMode mode);

// --- BMO and B_p -------------------------------------------------------------

struct BmoNorms {
  double osc1 = 0.0;  ///< sup_Q osc1(Q)/|Q|
  double osc2 = 0.0;  ///< sup_Q osc2(Q)/|Q|
};

BmoNorms bmo_norm(const CubeStatsTree& tree);

/// max over j = 1..L of 2^{j/p'} times the sum of the 2^{j(n-1)} largest
/// osc2 among level-j cubes.
double bbm_norm(const CubeStatsTree& tree, double p);

// --- Γ_f membership ----------------------------------------------------------

/// max over nonempty dyadic antichains of Σ (osc2(Q) - ∫_Q |γ|). The tree must
/// carry gamma integrals (CubeStatsTree::with_gamma).
double gamma_slack(const CubeStatsTree& tree_with_gamma);
double gamma_slack(const CubeStatsTree& tree, const GridFunction& gamma);
/// The maximizing family; objective_value is the slack.
FamilySelection gamma_slack_family(const CubeStatsTree& tree_with_gamma);

/// ri_norm(rearr(γ), X) after checking gamma_slack <= tolerance. Throws
/// ValidationError naming the slack when γ is not admissible.
double garoX_upper(const CubeStatsTree& tree, const GridFunction& gamma,
                   const RiSpaceSpec& space, double tolerance = 1e-9);

// --- Exhaustive oracles --------------------------------------------------------

inline constexpr std::size_t kBruteForceCubeLimit = 30;

/// Calls visit once per antichain of the tree, the empty one included.
/// Throws ValidationError when the tree has more than kBruteForceCubeLimit
/// cubes.
void for_each_antichain(const CubeStatsTree& tree,
                        const std::function<void(std::span<const CubeRef>)>& visit);

/// Nonempty antichains counted by for_each_antichain.
std::size_t count_antichains(const CubeStatsTree& tree);

/// argmax of objective over nonempty antichains (first maximizer in
/// enumeration order).
FamilySelection brute_force_families(
    const CubeStatsTree& tree,
    const std::function<double(const CubeStatsTree&, std::span<const CubeRef>)>& objective);

}  // namespace oscnorm

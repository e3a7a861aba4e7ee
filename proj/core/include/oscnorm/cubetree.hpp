#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oscnorm/gridfn.hpp"

namespace oscnorm {

/// A dyadic subcube of (0,1)^n: side 2^-level, lower corner index·2^-level.
struct DyadicCube {
  int level = 0;
  std::vector<std::int64_t> index;

  double measure() const;
  double side() const;
  /// True if `other` equals this cube or lies inside it.
  bool contains(const DyadicCube& other) const;

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
  friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

struct CubeStats {
  double measure = 0.0;   ///< |Q|
  double integral = 0.0;  ///< ∫_Q f
  double mean = 0.0;      ///< f_Q
  double osc1 = 0.0;      ///< ∫_Q |f - f_Q|
  double osc2 = 0.0;      ///< (1/|Q|) ∫_Q ∫_Q |f(x) - f(y)| dx dy
  std::optional<double> gamma_integral;  ///< ∫_Q γ for an attached majorant
};

/// Σ_{i<j} (v_j - v_i) for non-decreasing input, computed as
/// Σ_k (v_{k+1} - v_k)·k·(m-k) over consecutive gaps (all terms >= 0).
double pairsum_sorted(std::span<const double> sorted);

/// Row-major flat index of the cell at each Morton position: the cells of
/// every dyadic cube form one contiguous Morton range.
std::vector<std::size_t> morton_to_row_major(int dim, int level);

/// The level-j dyadic cube with the given Morton code.
DyadicCube morton_cube(int dim, int level, std::size_t morton);

/// Integrals of `g` over every dyadic cube, one vector per level in Morton
/// order. Parents are the fixed-order sum of their children, so additivity
/// holds exactly.
std::vector<std::vector<double>> dyadic_integrals(const GridFunction& g);

/// CubeStats for every dyadic cube of the grid, levels 0..L, Morton order
/// within a level. Children of Morton code k at level j are the codes
/// k·2^n .. k·2^n + 2^n - 1 at level j+1. Immutable once built.
class CubeStatsTree {
 public:
  explicit CubeStatsTree(const GridFunction& g);

  int dim() const { return dim_; }
  int level() const { return level_; }
  std::size_t arity() const { return std::size_t{1} << dim_; }
  std::size_t cubes_at(int j) const { return levels_[static_cast<std::size_t>(j)].size(); }
  std::size_t node_count() const;
  /// Number of grid cells inside a level-j cube.
  std::size_t cells_per_cube(int j) const { return std::size_t{1} << (dim_ * (level_ - j)); }

  const CubeStats& stats(int j, std::size_t morton) const {
    return levels_[static_cast<std::size_t>(j)][morton];
  }
  std::span<const CubeStats> level_stats(int j) const {
    return levels_[static_cast<std::size_t>(j)];
  }
  const CubeStats& root() const { return levels_[0][0]; }

  DyadicCube cube(int j, std::size_t morton) const;
  std::size_t morton(const DyadicCube& q) const;

  /// Copy with gamma_integral = ∫_Q |γ| populated on every cube.
  CubeStatsTree with_gamma(const GridFunction& gamma) const;
  bool has_gamma() const { return root().gamma_integral.has_value(); }

 private:
  CubeStatsTree() = default;

  int dim_ = 1;
  int level_ = 0;
  std::vector<std::vector<CubeStats>> levels_;
};

inline CubeStatsTree build_stats(const GridFunction& g) { return CubeStatsTree(g); }

}  // namespace oscnorm

#pragma once

#include <vector>

#include "oscnorm/gridfn.hpp"
#include "oscnorm/rearrange.hpp"

namespace oscnorm {

struct FracParams {
  double alpha = 0.5;  ///< in (0, 1)
  double p = 2.0;      ///< in [1, ∞)
};

void validate(const FracParams& fp);

/// q with 1/q = 1/p - α/n; infinity when αp = n. Throws when αp > n.
double sobolev_exponent(const FracParams& fp, int dim);

/// ∫ |z|^{α-n} over the centered unit cube [-1/2, 1/2]^n. Splitting the cube
/// into 2n pyramids over its faces gives 2n (1/2)^α/α · ∫_{[-1,1]^{n-1}}
/// (1+|w|²)^{(α-n)/2} dw; the smooth face integral uses tensor Gauss-Legendre.
double self_cell_integral(int dim, double alpha);

/// Offset kernels for one grid, indexed by the per-axis absolute offsets
/// |d_0|, ..., |d_{n-1}| (row-major, side^n entries). Entry 0 is unused.
class KernelTable {
 public:
  /// weight(d) = (h|d|)^exponent · h^n.
  KernelTable(int dim, int level, double exponent);

  int dim() const { return dim_; }
  int level() const { return level_; }
  double at(std::size_t offset_index) const { return weights_[offset_index]; }

 private:
  int dim_;
  int level_;
  std::vector<double> weights_;
};

/// D_{p,α}f(y) = (Σ_{x≠y} |f(x)-f(y)|^p |c_x-c_y|^{-n-αp} h^n)^{1/p} per cell.
GridFunction gagliardo_field(const GridFunction& g, const FracParams& fp);

/// ‖D_{p,α}f‖_{L^p} = ‖f‖_{W^{α,p}} on the grid.
double gagliardo_seminorm(const GridFunction& g, const FracParams& fp);

/// I_α g(y) = Σ_{x≠y} g(x)|c_x-c_y|^{α-n} h^n + g(y)·self_cell_integral·h^α.
GridFunction riesz_potential(const GridFunction& g, double alpha);

/// n^{(n+αp)/(2p)} · n^{(n-α)/2}.
double witness_constant(int dim, const FracParams& fp);

/// C_n · I_α(D_{p,α}f), an admissible majorant candidate for f.
GridFunction sobolev_witness(const GridFunction& g, const FracParams& fp);

/// ‖D_{p,α}f‖_Y.
double w_alpha_pY_norm(const GridFunction& g, const FracParams& fp, const RiSpaceSpec& space);

}  // namespace oscnorm

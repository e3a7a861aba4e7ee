#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oscnorm/gridfn.hpp"

namespace oscnorm {

/// Right-continuous non-increasing step function on [0,1):
/// value v_k on [t_{k-1}, t_k), with 0 = t_0 < ... < t_m = 1 and
/// v_1 >= ... >= v_m >= 0. Extended by 0 on [1, ∞).
///
/// This is the decreasing rearrangement f* of a grid function; the
/// distribution function, f** and the K-functional are derived from it.
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  /// Sorts |values| non-increasingly, each carrying `cell_measure`, and merges
  /// equal neighbours. Total measure must be 1.
  static StepFunction from_cells(std::span<const double> values, double cell_measure);

  std::size_t steps() const { return values_.size(); }
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }

  /// f*(s) for s >= 0.
  double value_at(double s) const;
  /// ∫_0^t f*(s) ds for t >= 0.
  double integral_to(double t) const;
  /// ∫_0^{t_k} f* at breakpoint k (k = 0..steps()).
  double integral_at_breakpoint(std::size_t k) const { return prefix_[k]; }
  double l1() const { return prefix_.back(); }
  /// ∫_{t_{k+1}}^1 (f** - f*) ds/s for k = 0..steps()-1.
  double tail_after(std::size_t k) const { return tail_[k + 1]; }
  double sup() const { return values_.front(); }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> prefix_;
  std::vector<double> tail_;
};

StepFunction rearr(const GridFunction& g);

/// λ(t) = |{f* > t}|. Throws for t < 0.
double distribution(const StepFunction& sf, double t);

/// f**(t) = (1/t) ∫_0^t f*. Throws for t <= 0.
double maximal_average(const StepFunction& sf, double t);

/// K(t; f, L¹, L∞) = ∫_0^t f* for t in (0, 1].
double kfunctional(const StepFunction& sf, double t);

/// ∫_t^1 (f**(s) - f*(s)) ds/s for t in (0, 1], by exact integration of
/// A/s² on each step (suffix sums precomputed per step function). Together with ‖f‖₁ this reconstructs f**(t).
double hardy_tail(const StepFunction& sf, double t);

// --- rearrangement-invariant norms -----------------------------------------

struct Lq {
  double q = 2.0;  ///< q in [1, ∞)
};
/// (∫_0^1 (f**(u) u^{1/s})^r du/u)^{1/r}; r = ∞ gives sup_u u^{1/s} f**(u).
struct Lorentz {
  double s = 2.0;  ///< s in (1, ∞)
  double r = 2.0;  ///< r in [1, ∞]
};
/// sup_t t λ(t)^{1/p}.
struct WeakLp {
  double p = 2.0;  ///< p in (1, ∞)
};
/// sup_{0<t<1} (f**(t) - f*(t)).
struct WeakLinfty {};
/// (∫_0^1 (f*(t) / (1 + log(1/t)))^N dt/t)^{1/N}, N = n/α.
struct BrezisWainger {
  double exponent = 2.0;  ///< N in (1, ∞)
};

using RiSpaceSpec = std::variant<Lq, Lorentz, WeakLp, WeakLinfty, BrezisWainger>;

void validate(const RiSpaceSpec& space);

/// Lorentz norms with finite r use per-step adaptive Gauss-Kronrod
/// quadrature at relative tolerance `quadrature_tol`; every other kind is
/// exact on the step structure.
double ri_norm(const StepFunction& sf, const RiSpaceSpec& space,
               double quadrature_tol = 1e-10);

/// "L1", "Lq:3", "lorentz:3,2", "lorentz:3,inf", "weak:2", "weakinf", "bw:2".
RiSpaceSpec parse_ri_space(std::string_view text);
std::string describe(const RiSpaceSpec& space);

}  // namespace oscnorm

#include "oscnorm/rearrange.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "oscnorm/error.hpp"
#include "oscnorm/numeric.hpp"

namespace oscnorm {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1) {
    throw ValidationError("step function needs m values and m+1 breakpoints");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw ValidationError("step function breakpoints must span [0, 1]");
  }
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] < breakpoints_[k + 1])) {
      throw ValidationError("step function breakpoints must be strictly increasing");
    }
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k]) || values_[k] < 0.0 || (k > 0 && values_[k] > values_[k - 1])) {
      throw ValidationError("step function values must be finite, non-negative, non-increasing");
    }
  }
  prefix_.resize(breakpoints_.size());
  prefix_[0] = 0.0;
  CompensatedSum acc;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    acc.add(values_[k] * (breakpoints_[k + 1] - breakpoints_[k]));
    prefix_[k + 1] = acc.value();
  }
  // tail_[k]: ∫ over steps k..m-1 of (f** - f*) ds/s; step 0 never enters
  // whole since t > 0.
  tail_.assign(values_.size() + 1, 0.0);
  CompensatedSum tail;
  for (std::size_t k = values_.size(); k-- > 1;) {
    const double offset = prefix_[k] - values_[k] * breakpoints_[k];
    tail.add(offset * (1.0 / breakpoints_[k] - 1.0 / breakpoints_[k + 1]));
    tail_[k] = tail.value();
  }
}

StepFunction StepFunction::from_cells(std::span<const double> values, double cell_measure) {
  std::vector<double> sorted(values.size());
  std::transform(values.begin(), values.end(), sorted.begin(), [](double v) { return std::abs(v); });
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  std::vector<double> breakpoints{0.0};
  std::vector<double> steps;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    steps.push_back(sorted[i]);
    breakpoints.push_back(static_cast<double>(j) * cell_measure);
    i = j;
  }
  if (breakpoints.back() != 1.0) {
    throw ValidationError("cells must carry total measure 1");
  }
  return {std::move(breakpoints), std::move(steps)};
}

double StepFunction::value_at(double s) const {
  if (s < 0.0) throw ValidationError("f* is defined for s >= 0");
  if (s >= 1.0) return 0.0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepFunction::integral_to(double t) const {
  if (t < 0.0) throw ValidationError("integral_to needs t >= 0");
  if (t >= 1.0) return prefix_.back();
  const auto k = static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin());
  // t lies in [t_{k-1}, t_k) where f* = v_k (1-based).
  return prefix_[k - 1] + values_[k - 1] * (t - breakpoints_[k - 1]);
}

StepFunction rearr(const GridFunction& g) {
  return StepFunction::from_cells(g.cells(), g.cell_measure());
}

double distribution(const StepFunction& sf, double t) {
  if (t < 0.0) throw ValidationError("distribution needs t >= 0");
  const auto vals = sf.values();
  // Values are non-increasing: count the leading steps above t.
  const auto k = static_cast<std::size_t>(
      std::partition_point(vals.begin(), vals.end(), [t](double v) { return v > t; }) - vals.begin());
  return sf.breakpoints()[k];
}

double maximal_average(const StepFunction& sf, double t) {
  if (!(t > 0.0)) throw ValidationError("maximal_average needs t > 0");
  return sf.integral_to(t) / t;
}

double kfunctional(const StepFunction& sf, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw ValidationError("kfunctional needs t in (0, 1]");
  return sf.integral_to(t);
}

namespace {

// On step k (0-based) f**(u) = (A + B u) / u with these coefficients.
double hardy_offset(const StepFunction& sf, std::size_t k) {
  return sf.integral_at_breakpoint(k) - sf.values()[k] * sf.breakpoints()[k];
}

}  // namespace

double hardy_tail(const StepFunction& sf, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw ValidationError("hardy_tail needs t in (0, 1]");
  if (t >= 1.0) return 0.0;
  const auto bp = sf.breakpoints();
  const auto k = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), t) - bp.begin()) - 1;
  return hardy_offset(sf, k) * (1.0 / t - 1.0 / bp[k + 1]) + sf.tail_after(k);
}

// --- norms -------------------------------------------------------------------

void validate(const RiSpaceSpec& space) {
  struct Check {
    void operator()(const Lq& x) const {
      if (!(x.q >= 1.0 && std::isfinite(x.q))) throw ValidationError("Lq needs q in [1, inf)");
    }
    void operator()(const Lorentz& x) const {
      if (!(x.s > 1.0 && std::isfinite(x.s))) throw ValidationError("Lorentz needs s in (1, inf)");
      if (!(x.r >= 1.0)) throw ValidationError("Lorentz needs r in [1, inf]");
    }
    void operator()(const WeakLp& x) const {
      if (!(x.p > 1.0 && std::isfinite(x.p))) throw ValidationError("weak Lp needs p in (1, inf)");
    }
    void operator()(const WeakLinfty&) const {}
    void operator()(const BrezisWainger& x) const {
      if (!(x.exponent > 1.0 && std::isfinite(x.exponent))) {
        throw ValidationError("Brezis-Wainger needs n/alpha in (1, inf)");
      }
    }
  };
  std::visit(Check{}, space);
}

namespace {

double lq_norm(const StepFunction& sf, double q) {
  CompensatedSum acc;
  const auto bp = sf.breakpoints();
  for (std::size_t k = 0; k < sf.steps(); ++k) {
    acc.add(std::pow(sf.values()[k], q) * (bp[k + 1] - bp[k]));
  }
  return std::pow(acc.value(), 1.0 / q);
}

double weak_lp_norm(const StepFunction& sf, double p) {
  // λ = t_k on [v_{k+1}, v_k); the supremum is approached as t increases to v_k.
  double best = 0.0;
  for (std::size_t k = 0; k < sf.steps(); ++k) {
    best = std::max(best, sf.values()[k] * std::pow(sf.breakpoints()[k + 1], 1.0 / p));
  }
  return best;
}

double weak_linfty_norm(const StepFunction& sf) {
  // f** - f* = A/t decreases inside each step, so the sup sits at a left end.
  double best = 0.0;
  const auto bp = sf.breakpoints();
  for (std::size_t k = 1; k < sf.steps(); ++k) {
    best = std::max(best, sf.integral_at_breakpoint(k) / bp[k] - sf.values()[k]);
  }
  return best;
}

double lorentz_sup(const StepFunction& sf, double s) {
  const double e = 1.0 / s;
  const auto bp = sf.breakpoints();
  double best = sf.values()[0] * std::pow(bp[1], e);
  for (std::size_t k = 1; k < sf.steps(); ++k) {
    const double A = hardy_offset(sf, k);
    const double B = sf.values()[k];
    const auto g = [&](double u) { return (A + B * u) * std::pow(u, e - 1.0); };
    best = std::max({best, g(bp[k]), g(bp[k + 1])});
    if (B > 0.0) {
      const double critical = A * (s - 1.0) / B;
      if (critical > bp[k] && critical < bp[k + 1]) best = std::max(best, g(critical));
    }
  }
  return best;
}

double lorentz_norm(const StepFunction& sf, double s, double r, double tol) {
  if (std::isinf(r)) return lorentz_sup(sf, s);
  const auto bp = sf.breakpoints();
  CompensatedSum acc;
  // First step: f** = v_1, integrand v_1^r u^{r/s - 1}.
  acc.add(std::pow(sf.values()[0], r) * (s / r) * std::pow(bp[1], r / s));
  for (std::size_t k = 1; k < sf.steps(); ++k) {
    const double a = bp[k];
    const double b = bp[k + 1];
    const double A = hardy_offset(sf, k);
    const double B = sf.values()[k];
    if (A == 0.0 && B == 0.0) continue;
    if (B == 0.0) {
      const double e = r / s - r;
      acc.add(std::pow(A, r) * (std::pow(b, e) - std::pow(a, e)) / e);
      continue;
    }
    const auto integrand = [&](double u) {
      return std::pow((A + B * u) * std::pow(u, 1.0 / s - 1.0), r) / u;
    };
    acc.add(boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, a, b, 15, tol));
  }
  return std::pow(acc.value(), 1.0 / r);
}

double brezis_wainger_norm(const StepFunction& sf, double N) {
  // With u = 1 + log(1/t): ∫ (1 + log(1/t))^{-N} dt/t = [u^{1-N}/(N-1)] between the ends.
  const auto bp = sf.breakpoints();
  const auto tail = [N](double t) {
    return t == 0.0 ? 0.0 : std::pow(1.0 + std::log(1.0 / t), 1.0 - N);
  };
  CompensatedSum acc;
  for (std::size_t k = 0; k < sf.steps(); ++k) {
    const double v = sf.values()[k];
    if (v == 0.0) continue;
    acc.add(std::pow(v, N) * (tail(bp[k + 1]) - tail(bp[k])) / (N - 1.0));
  }
  return std::pow(acc.value(), 1.0 / N);
}

}  // namespace

double ri_norm(const StepFunction& sf, const RiSpaceSpec& space, double quadrature_tol) {
  validate(space);
  struct Eval {
    const StepFunction& sf;
    double tol;
    double operator()(const Lq& x) const { return lq_norm(sf, x.q); }
    double operator()(const Lorentz& x) const { return lorentz_norm(sf, x.s, x.r, tol); }
    double operator()(const WeakLp& x) const { return weak_lp_norm(sf, x.p); }
    double operator()(const WeakLinfty&) const { return weak_linfty_norm(sf); }
    double operator()(const BrezisWainger& x) const { return brezis_wainger_norm(sf, x.exponent); }
  };
  return std::visit(Eval{sf, quadrature_tol}, space);
}

namespace {

double parse_exponent(std::string_view s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ValidationError("bad exponent '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

RiSpaceSpec parse_ri_space(std::string_view text) {
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  RiSpaceSpec out;
  if (kind == "L1") {
    out = Lq{1.0};
  } else if (kind == "Lq" || kind == "L") {
    out = Lq{parse_exponent(args)};
  } else if (kind == "lorentz") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw ValidationError("lorentz needs 's,r'");
    out = Lorentz{parse_exponent(args.substr(0, comma)), parse_exponent(args.substr(comma + 1))};
  } else if (kind == "weak") {
    out = WeakLp{parse_exponent(args)};
  } else if (kind == "weakinf") {
    out = WeakLinfty{};
  } else if (kind == "bw") {
    out = BrezisWainger{parse_exponent(args)};
  } else {
    throw ValidationError("unknown space '" + std::string(text) + "'");
  }
  validate(out);
  return out;
}

std::string describe(const RiSpaceSpec& space) {
  struct Describe {
    std::string operator()(const Lq& x) const { return "Lq:" + format_double(x.q); }
    std::string operator()(const Lorentz& x) const {
      return "lorentz:" + format_double(x.s) + "," + (std::isinf(x.r) ? "inf" : format_double(x.r));
    }
    std::string operator()(const WeakLp& x) const { return "weak:" + format_double(x.p); }
    std::string operator()(const WeakLinfty&) const { return "weakinf"; }
    std::string operator()(const BrezisWainger& x) const { return "bw:" + format_double(x.exponent); }
  };
  return std::visit(Describe{}, space);
}

}  // namespace oscnorm

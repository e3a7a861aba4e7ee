#include "oscnorm/czk.hpp"

#include <algorithm>
#include <cmath>

#include "oscnorm/error.hpp"
#include "oscnorm/numeric.hpp"
#include "oscnorm/rearrange.hpp"

namespace oscnorm {

CzDecomposition cz_decompose(const GridFunction& g, double lambda) {
  if (!(lambda > 0.0) || std::isinf(lambda)) throw ValidationError("height lambda must be positive and finite");
  const int L = g.level();
  const std::size_t arity = std::size_t{1} << g.dim();
  const auto abs_integrals = dyadic_integrals(abs(g));
  const auto integrals = dyadic_integrals(g);
  const auto perm = morton_to_row_major(g.dim(), L);

  std::vector<double> good(g.cells().begin(), g.cells().end());
  std::vector<double> bad(g.size(), 0.0);
  CzDecomposition out{lambda, {}, 0.0, g, g};
  CompensatedSum measure;

  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [j, k] = stack.back();
    stack.pop_back();
    const double size = std::ldexp(1.0, -g.dim() * j);
    if (abs_integrals[static_cast<std::size_t>(j)][k] / size > lambda) {
      const double avg = integrals[static_cast<std::size_t>(j)][k] / size;
      const std::size_t cells = std::size_t{1} << (g.dim() * (L - j));
      for (std::size_t m = k * cells; m < (k + 1) * cells; ++m) {
        const std::size_t flat = perm[m];
        good[flat] = avg;
        bad[flat] = g[flat] - avg;
      }
      out.stopping_cubes.push_back(morton_cube(g.dim(), j, k));
      measure.add(size);
    } else if (j < L) {
      for (std::size_t b = arity; b-- > 0;) stack.emplace_back(j + 1, k * arity + b);
    }
  }
  std::sort(out.stopping_cubes.begin(), out.stopping_cubes.end());
  out.stopping_measure = measure.value();
  out.good = GridFunction(g.dim(), L, std::move(good));
  out.bad = GridFunction(g.dim(), L, std::move(bad));
  return out;
}

CzKComparison cz_k_compare(const GridFunction& g, double t) {
  if (!(t > 0.0 && t < 1.0)) throw ValidationError("t must lie in (0, 1)");
  const StepFunction sf = rearr(g);
  CzKComparison out;
  out.t = t;
  out.k_exact = kfunctional(sf, t);
  out.lambda = std::max(sf.value_at(t), sf.l1());
  if (out.lambda <= 0.0) {
    out.ratio = 1.0;
    return out;
  }
  const CzDecomposition cz = cz_decompose(g, out.lambda);
  out.k_cz = integral(abs(cz.bad)) + t * sup_norm(cz.good);
  out.ratio = out.k_exact > 0.0 ? out.k_cz / out.k_exact : 1.0;
  return out;
}

}  // namespace oscnorm

#include "oscnorm/fracsobolev.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "oscnorm/error.hpp"
#include "oscnorm/numeric.hpp"

namespace oscnorm {

void validate(const FracParams& fp) {
  if (!(fp.alpha > 0.0 && fp.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (!(fp.p >= 1.0) || std::isinf(fp.p)) throw ValidationError("p must lie in [1, inf)");
}

double sobolev_exponent(const FracParams& fp, int dim) {
  validate(fp);
  const double inv = 1.0 / fp.p - fp.alpha / dim;
  if (inv < 0.0) {
    std::ostringstream msg;
    msg << "alpha*p = " << fp.alpha * fp.p << " exceeds the dimension " << dim;
    throw ValidationError(msg.str());
  }
  return inv == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv;
}

namespace {

double face_integral(int depth, double sq, double power) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  if (depth == 0) return std::pow(1.0 + sq, power);
  return Rule::integrate([&](double w) { return face_integral(depth - 1, sq + w * w, power); }, -1.0, 1.0);
}

}  // namespace

double self_cell_integral(int dim, double alpha) {
  if (dim < 1) throw ValidationError("dimension must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  const double face = face_integral(dim - 1, 0.0, (alpha - dim) / 2.0);
  return 2.0 * dim * std::pow(0.5, alpha) / alpha * face;
}

KernelTable::KernelTable(int dim, int level, double exponent) : dim_(dim), level_(level) {
  const std::size_t side = std::size_t{1} << level;
  std::size_t count = 1;
  for (int a = 0; a < dim; ++a) count *= side;
  const double h = std::ldexp(1.0, -level);
  const double c = std::ldexp(1.0, -dim * level);
  weights_.assign(count, 0.0);
  for (std::size_t o = 1; o < count; ++o) {
    std::size_t rest = o;
    double sq = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double d = static_cast<double>(rest % side);
      rest /= side;
      sq += d * d;
    }
    weights_[o] = std::pow(h * h * sq, exponent / 2.0) * c;
  }
}

namespace {

struct Coords {
  int dim;
  std::size_t side;
  std::vector<std::int64_t> idx;  // N x dim, row-major cell order

  explicit Coords(const GridFunction& g)
      : dim(g.dim()), side(static_cast<std::size_t>(g.side())), idx(g.size() * static_cast<std::size_t>(g.dim())) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::size_t rest = i;
      for (int a = dim - 1; a >= 0; --a) {
        idx[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)] =
            static_cast<std::int64_t>(rest % side);
        rest /= side;
      }
    }
  }

  // Offset index into a KernelTable: axis a has stride side^a.
  std::size_t offset(std::size_t x, std::size_t y) const {
    std::size_t o = 0;
    std::size_t stride = 1;
    const auto d = static_cast<std::size_t>(dim);
    for (std::size_t a = 0; a < d; ++a) {
      const std::int64_t diff = idx[x * d + a] - idx[y * d + a];
      o += static_cast<std::size_t>(diff < 0 ? -diff : diff) * stride;
      stride *= side;
    }
    return o;
  }
};

// Σ_{x≠y} |f(x)-f(y)|^p w(x-y) for every y.
std::vector<double> gagliardo_sums(const GridFunction& g, const FracParams& fp) {
  validate(fp);
  const int n = g.dim();
  const KernelTable kernel(n, g.level(), -n - fp.alpha * fp.p);
  const Coords coords(g);
  const std::size_t N = g.size();
  std::vector<double> sums(N, 0.0);
  const double p = fp.p;
  parallel_for(N, [&](std::size_t begin, std::size_t end) {
    for (std::size_t y = begin; y < end; ++y) {
      CompensatedSum acc;
      const double fy = g[y];
      for (std::size_t x = 0; x < N; ++x) {
        if (x == y) continue;
        const double diff = std::abs(g[x] - fy);
        if (diff == 0.0) continue;
        const double powered = p == 1.0 ? diff : p == 2.0 ? diff * diff : std::pow(diff, p);
        acc.add(powered * kernel.at(coords.offset(x, y)));
      }
      sums[y] = acc.value();
    }
  });
  return sums;
}

}  // namespace

GridFunction gagliardo_field(const GridFunction& g, const FracParams& fp) {
  std::vector<double> sums = gagliardo_sums(g, fp);
  for (double& s : sums) s = std::pow(s, 1.0 / fp.p);
  return GridFunction(g.dim(), g.level(), std::move(sums));
}

double gagliardo_seminorm(const GridFunction& g, const FracParams& fp) {
  const std::vector<double> sums = gagliardo_sums(g, fp);
  return std::pow(compensated_sum(sums) * g.cell_measure(), 1.0 / fp.p);
}

GridFunction riesz_potential(const GridFunction& g, double alpha) {
  const int n = g.dim();
  const double self = self_cell_integral(n, alpha) * std::pow(g.cell_side(), alpha);
  const KernelTable kernel(n, g.level(), alpha - n);
  const Coords coords(g);
  const std::size_t N = g.size();
  std::vector<double> out(N, 0.0);
  parallel_for(N, [&](std::size_t begin, std::size_t end) {
    for (std::size_t y = begin; y < end; ++y) {
      CompensatedSum acc;
      acc.add(g[y] * self);
      for (std::size_t x = 0; x < N; ++x) {
        if (x == y || g[x] == 0.0) continue;
        acc.add(g[x] * kernel.at(coords.offset(x, y)));
      }
      out[y] = acc.value();
    }
  });
  return GridFunction(n, g.level(), std::move(out));
}

double witness_constant(int dim, const FracParams& fp) {
  validate(fp);
  const double n = dim;
  return std::pow(n, (n + fp.alpha * fp.p) / (2.0 * fp.p)) * std::pow(n, (n - fp.alpha) / 2.0);
}

GridFunction sobolev_witness(const GridFunction& g, const FracParams& fp) {
  return scale(riesz_potential(gagliardo_field(g, fp), fp.alpha), witness_constant(g.dim(), fp));
}

double w_alpha_pY_norm(const GridFunction& g, const FracParams& fp, const RiSpaceSpec& space) {
  validate(space);
  return ri_norm(rearr(gagliardo_field(g, fp)), space);
}

}  // namespace oscnorm

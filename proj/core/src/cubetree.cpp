#include "oscnorm/cubetree.hpp"

#include <algorithm>
#include <cmath>

#include "oscnorm/error.hpp"
#include "oscnorm/numeric.hpp"

namespace oscnorm {

double DyadicCube::measure() const {
  return std::ldexp(1.0, -level * static_cast<int>(index.size()));
}

double DyadicCube::side() const { return std::ldexp(1.0, -level); }

bool DyadicCube::contains(const DyadicCube& other) const {
  if (other.level < level || other.index.size() != index.size()) return false;
  const int shift = other.level - level;
  for (std::size_t a = 0; a < index.size(); ++a) {
    if ((other.index[a] >> shift) != index[a]) return false;
  }
  return true;
}

double pairsum_sorted(std::span<const double> sorted) {
  const std::size_t m = sorted.size();
  CompensatedSum acc;
  for (std::size_t k = 1; k < m; ++k) {
    const double gap = sorted[k] - sorted[k - 1];
    if (gap != 0.0) acc.add(gap * (static_cast<double>(k) * static_cast<double>(m - k)));
  }
  return acc.value();
}

namespace {

// Splits a Morton code with `digits` digits of `dim` bits into per-axis
// coordinates; the first digit is the coarsest.
std::vector<std::int64_t> deinterleave(std::size_t code, int dim, int digits) {
  std::vector<std::int64_t> index(static_cast<std::size_t>(dim), 0);
  for (int d = 0; d < digits; ++d) {
    const std::size_t digit = (code >> (dim * (digits - 1 - d))) & ((std::size_t{1} << dim) - 1);
    for (int a = 0; a < dim; ++a) {
      const std::int64_t bit = static_cast<std::int64_t>((digit >> (dim - 1 - a)) & 1u);
      index[static_cast<std::size_t>(a)] |= bit << (digits - 1 - d);
    }
  }
  return index;
}

std::size_t interleave(std::span<const std::int64_t> index, int digits) {
  const int dim = static_cast<int>(index.size());
  std::size_t code = 0;
  for (int d = 0; d < digits; ++d) {
    for (int a = 0; a < dim; ++a) {
      const auto bit = static_cast<std::size_t>((index[static_cast<std::size_t>(a)] >> (digits - 1 - d)) & 1);
      code = (code << 1) | bit;
    }
  }
  return code;
}

}  // namespace

std::vector<std::size_t> morton_to_row_major(int dim, int level) {
  const std::size_t count = std::size_t{1} << (dim * level);
  std::vector<std::size_t> out(count);
  for (std::size_t code = 0; code < count; ++code) {
    const auto index = deinterleave(code, dim, level);
    std::size_t flat = 0;
    for (std::int64_t i : index) flat = (flat << level) | static_cast<std::size_t>(i);
    out[code] = flat;
  }
  return out;
}

DyadicCube morton_cube(int dim, int level, std::size_t morton) {
  return DyadicCube{level, deinterleave(morton, dim, level)};
}

std::vector<std::vector<double>> dyadic_integrals(const GridFunction& g) {
  const int n = g.dim();
  const int L = g.level();
  const auto perm = morton_to_row_major(n, L);
  const std::size_t arity = std::size_t{1} << n;
  std::vector<std::vector<double>> out(static_cast<std::size_t>(L) + 1);
  auto& finest = out[static_cast<std::size_t>(L)];
  finest.resize(g.size());
  const double c = g.cell_measure();
  for (std::size_t m = 0; m < g.size(); ++m) finest[m] = g[perm[m]] * c;
  for (int j = L - 1; j >= 0; --j) {
    const auto& below = out[static_cast<std::size_t>(j) + 1];
    auto& here = out[static_cast<std::size_t>(j)];
    here.resize(below.size() / arity);
    for (std::size_t k = 0; k < here.size(); ++k) {
      here[k] = pairwise_sum(std::span<const double>(below).subspan(k * arity, arity));
    }
  }
  return out;
}

CubeStatsTree::CubeStatsTree(const GridFunction& g) : dim_(g.dim()), level_(g.level()) {
  const int n = dim_;
  const int L = level_;
  const std::size_t N = g.size();
  const std::size_t arity = std::size_t{1} << n;
  const double c = g.cell_measure();

  const auto perm = morton_to_row_major(n, L);
  std::vector<double> sorted(N);
  for (std::size_t m = 0; m < N; ++m) sorted[m] = g[perm[m]];

  levels_.resize(static_cast<std::size_t>(L) + 1);
  auto& finest = levels_[static_cast<std::size_t>(L)];
  finest.resize(N);
  for (std::size_t m = 0; m < N; ++m) {
    finest[m] = CubeStats{c, sorted[m] * c, sorted[m], 0.0, 0.0, std::nullopt};
  }

  std::vector<double> deviations(N);
  std::vector<double> child_integrals(arity);
  for (int j = L - 1; j >= 0; --j) {
    const std::size_t block = std::size_t{1} << (n * (L - j));
    const std::size_t child_block = block / arity;
    // Merge sibling runs into one sorted run per level-j cube.
    for (std::size_t width = child_block; width < block; width *= 2) {
      for (std::size_t start = 0; start < N; start += 2 * width) {
        std::inplace_merge(sorted.begin() + static_cast<std::ptrdiff_t>(start),
                           sorted.begin() + static_cast<std::ptrdiff_t>(start + width),
                           sorted.begin() + static_cast<std::ptrdiff_t>(start + 2 * width));
      }
    }

    const auto& below = levels_[static_cast<std::size_t>(j) + 1];
    auto& here = levels_[static_cast<std::size_t>(j)];
    here.resize(N / block);
    const double measure = std::ldexp(1.0, -n * j);
    for (std::size_t k = 0; k < here.size(); ++k) {
      for (std::size_t b = 0; b < arity; ++b) child_integrals[b] = below[k * arity + b].integral;
      const double total = pairwise_sum(child_integrals);
      const double avg = total / measure;

      const std::span<const double> run(sorted.data() + k * block, block);
      const std::span<double> dev(deviations.data() + k * block, block);
      for (std::size_t i = 0; i < block; ++i) dev[i] = std::abs(run[i] - avg);
      const double osc1 = pairwise_sum(dev) * c;
      const double osc2 = 2.0 * (c / static_cast<double>(block)) * pairsum_sorted(run);
      here[k] = CubeStats{measure, total, avg, osc1, osc2, std::nullopt};
    }
  }
}

std::size_t CubeStatsTree::node_count() const {
  std::size_t total = 0;
  for (const auto& lvl : levels_) total += lvl.size();
  return total;
}

DyadicCube CubeStatsTree::cube(int j, std::size_t morton) const {
  if (j < 0 || j > level_ || morton >= cubes_at(j)) throw ValidationError("cube out of range");
  return DyadicCube{j, deinterleave(morton, dim_, j)};
}

std::size_t CubeStatsTree::morton(const DyadicCube& q) const {
  if (q.level < 0 || q.level > level_ || q.index.size() != static_cast<std::size_t>(dim_)) {
    throw ValidationError("cube does not belong to this tree");
  }
  return interleave(q.index, q.level);
}

CubeStatsTree CubeStatsTree::with_gamma(const GridFunction& gamma) const {
  if (gamma.dim() != dim_ || gamma.level() != level_) {
    throw ValidationError("grid mismatch between function and majorant");
  }
  const auto integrals = dyadic_integrals(abs(gamma));
  CubeStatsTree out = *this;
  for (std::size_t j = 0; j < out.levels_.size(); ++j) {
    for (std::size_t k = 0; k < out.levels_[j].size(); ++k) {
      out.levels_[j][k].gamma_integral = integrals[j][k];
    }
  }
  return out;
}

}  // namespace oscnorm

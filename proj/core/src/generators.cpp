#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "oscnorm/error.hpp"
#include "oscnorm/gridfn.hpp"

namespace oscnorm {
namespace {

std::vector<double> broadcast(const std::vector<double>& v, int dim, const char* what) {
  if (v.size() == 1) return std::vector<double>(static_cast<std::size_t>(dim), v.front());
  if (v.size() != static_cast<std::size_t>(dim)) {
    throw ValidationError(std::string(what) + " must have 1 or dim components");
  }
  return v;
}

// Per-axis cell coordinates for every row-major cell, computed once.
std::vector<std::vector<std::int64_t>> all_indices(int dim, int level) {
  const std::size_t count = std::size_t{1} << (dim * level);
  std::vector<std::vector<std::int64_t>> out(count);
  const GridFunction shape(dim, level, std::vector<double>(count, 0.0));
  for (std::size_t i = 0; i < count; ++i) out[i] = shape.cell_index(i);
  return out;
}

double overlap_fraction(double x0, double h, double lo, double hi) {
  const double a = std::max(x0, lo);
  const double b = std::min(x0 + h, hi);
  return b > a ? (b - a) / h : 0.0;
}

// ∫_0^u (-1)^floor(v) dv, a triangle wave with values in [0, 1].
double alternating_integral(double u) {
  const double k = std::floor(u);
  const double frac = u - k;
  return std::fmod(k, 2.0) == 0.0 ? frac : 1.0 - frac;
}

template <typename Pointwise>
std::vector<double> subsampled(int dim, int level, int m, Pointwise&& f) {
  if (m < 1) throw ValidationError("subsample order must be >= 1");
  const std::size_t count = std::size_t{1} << (dim * level);
  const double h = std::ldexp(1.0, -level);
  const double step = h / m;
  std::size_t samples = 1;
  for (int a = 0; a < dim; ++a) samples *= static_cast<std::size_t>(m);

  const auto indices = all_indices(dim, level);
  std::vector<double> out(count);
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (std::size_t c = 0; c < count; ++c) {
    double acc = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      std::size_t rem = s;
      for (int a = 0; a < dim; ++a) {
        const auto k = static_cast<double>(rem % static_cast<std::size_t>(m));
        rem /= static_cast<std::size_t>(m);
        x[static_cast<std::size_t>(a)] =
            static_cast<double>(indices[c][static_cast<std::size_t>(a)]) * h + (k + 0.5) * step;
      }
      acc += f(x);
    }
    out[c] = acc / static_cast<double>(samples);
  }
  return out;
}

double distance(const std::vector<double>& x, const std::vector<double>& center) {
  double d2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) d2 += (x[a] - center[a]) * (x[a] - center[a]);
  const double d = std::sqrt(d2);
  if (d == 0.0) throw ValidationError("sample point coincides with the singularity");
  return d;
}

// Children of a level-(j-1) row-major cell at level j, in row-major order of
// the child offsets.
std::vector<std::size_t> children_of(std::size_t parent, int dim, int parent_level) {
  const std::size_t parent_side = std::size_t{1} << parent_level;
  std::vector<std::size_t> coords(static_cast<std::size_t>(dim));
  std::size_t rem = parent;
  for (int a = dim - 1; a >= 0; --a) {
    coords[static_cast<std::size_t>(a)] = rem % parent_side;
    rem /= parent_side;
  }
  const std::size_t child_side = parent_side * 2;
  std::vector<std::size_t> out;
  out.reserve(std::size_t{1} << dim);
  for (std::size_t bits = 0; bits < (std::size_t{1} << dim); ++bits) {
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a) {
      const std::size_t bit = (bits >> (dim - 1 - a)) & 1u;
      flat = flat * child_side + coords[static_cast<std::size_t>(a)] * 2 + bit;
    }
    out.push_back(flat);
  }
  return out;
}

std::vector<double> random_cells(const RandomGen& spec, int dim, int level) {
  std::mt19937_64 rng(spec.seed);
  const std::size_t count = std::size_t{1} << (dim * level);
  std::vector<double> out(count);
  switch (spec.distribution) {
    case RandomDistribution::uniform: {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (double& v : out) v = u(rng);
      return out;
    }
    case RandomDistribution::normal: {
      std::normal_distribution<double> z(0.0, 1.0);
      for (double& v : out) v = z(rng);
      return out;
    }
    case RandomDistribution::cascade:
    case RandomDistribution::haar: {
      std::normal_distribution<double> z(0.0, 1.0);
      const bool cascade = spec.distribution == RandomDistribution::cascade;
      std::vector<double> current{cascade ? 1.0 : 0.0};
      for (int j = 1; j <= level; ++j) {
        std::vector<double> next(std::size_t{1} << (dim * j));
        const double amplitude = std::exp2(-0.25 * j);
        for (std::size_t parent = 0; parent < current.size(); ++parent) {
          const auto kids = children_of(parent, dim, j - 1);
          std::vector<double> draws(kids.size());
          for (double& d : draws) d = z(rng);
          if (cascade) {
            constexpr double sigma = 0.5;
            for (std::size_t k = 0; k < kids.size(); ++k) {
              next[kids[k]] = current[parent] * std::exp(sigma * draws[k] - 0.5 * sigma * sigma);
            }
          } else {
            double avg = 0.0;
            for (double d : draws) avg += d;
            avg /= static_cast<double>(draws.size());
            for (std::size_t k = 0; k < kids.size(); ++k) {
              next[kids[k]] = current[parent] + amplitude * (draws[k] - avg);
            }
          }
        }
        current = std::move(next);
      }
      return current;
    }
  }
  throw ValidationError("unknown random distribution");
}

struct Visitor {
  int dim;
  int level;

  std::vector<double> operator()(const ConstantGen& g) const {
    return std::vector<double>(std::size_t{1} << (dim * level), g.value);
  }

  std::vector<double> operator()(const IndicatorGen& g) const {
    const auto lo = broadcast(g.lo, dim, "indicator lo");
    const auto hi = broadcast(g.hi, dim, "indicator hi");
    const double h = std::ldexp(1.0, -level);
    const auto indices = all_indices(dim, level);
    std::vector<double> out(indices.size());
    for (std::size_t c = 0; c < indices.size(); ++c) {
      double frac = 1.0;
      for (std::size_t a = 0; a < static_cast<std::size_t>(dim); ++a) {
        frac *= overlap_fraction(static_cast<double>(indices[c][a]) * h, h, lo[a], hi[a]);
      }
      out[c] = g.value * frac;
    }
    return out;
  }

  std::vector<double> operator()(const StepGen& g) const {
    if (g.axis < 0 || g.axis >= dim) throw ValidationError("step axis out of range");
    const double h = std::ldexp(1.0, -level);
    const auto indices = all_indices(dim, level);
    std::vector<double> out(indices.size());
    for (std::size_t c = 0; c < indices.size(); ++c) {
      const double x0 = static_cast<double>(indices[c][static_cast<std::size_t>(g.axis)]) * h;
      const double above = overlap_fraction(x0, h, g.threshold, 2.0);
      out[c] = above == 1.0 ? g.above
               : above == 0.0 ? g.below
                              : g.below * (1.0 - above) + g.above * above;
    }
    return out;
  }

  std::vector<double> operator()(const PowerGen& g) const {
    if (!(g.exponent < dim)) {
      throw ValidationError("power exponent must be < dim for integrability");
    }
    const auto center = broadcast(g.center, dim, "power center");
    const double beta = g.exponent;
    return subsampled(dim, level, g.subsample, [&](const std::vector<double>& x) {
      return std::pow(distance(x, center), -beta);
    });
  }

  std::vector<double> operator()(const LogSingularityGen& g) const {
    const auto center = broadcast(g.center, dim, "logsing center");
    return subsampled(dim, level, g.subsample, [&](const std::vector<double>& x) {
      return -std::log(distance(x, center));
    });
  }

  std::vector<double> operator()(const CheckerboardGen& g) const {
    if (!(g.period > 0.0) || !std::isfinite(g.period)) {
      throw ValidationError("checkerboard period must be positive");
    }
    const double h = std::ldexp(1.0, -level);
    const double p = g.period;
    const auto indices = all_indices(dim, level);
    std::vector<double> out(indices.size());
    for (std::size_t c = 0; c < indices.size(); ++c) {
      double product = 1.0;
      for (std::size_t a = 0; a < static_cast<std::size_t>(dim); ++a) {
        const double x0 = static_cast<double>(indices[c][a]) * h;
        const double avg =
            (alternating_integral((x0 + h) * p) - alternating_integral(x0 * p)) / (p * h);
        product *= avg;
      }
      out[c] = 0.5 * (1.0 - product);
    }
    return out;
  }

  std::vector<double> operator()(const RandomGen& g) const { return random_cells(g, dim, level); }
};

// --- parsing ---------------------------------------------------------------

double to_double(std::string_view s, std::string_view key) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    throw ValidationError("bad value for '" + std::string(key) + "'");
  }
  return v;
}

std::int64_t to_int(std::string_view s, std::string_view key) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ValidationError("bad integer for '" + std::string(key) + "'");
  }
  return v;
}

std::vector<double> to_vector(std::string_view s, std::string_view key) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const auto slash = s.find('/', pos);
    out.push_back(to_double(s.substr(pos, slash - pos), key));
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  return out;
}

class Params {
 public:
  explicit Params(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      const auto item = text.substr(pos, comma - pos);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw ValidationError("generator parameter '" + std::string(item) + "' is not key=value");
      }
      values_[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
      pos = comma + 1;
    }
  }

  // Returns the value for the first present alias and marks it consumed.
  std::optional<std::string> take(std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      auto it = values_.find(k);
      if (it != values_.end()) {
        std::string v = it->second;
        values_.erase(it);
        return v;
      }
    }
    return std::nullopt;
  }

  void expect_consumed(std::string_view kind) const {
    if (!values_.empty()) {
      throw ValidationError("unknown parameter '" + values_.begin()->first + "' for generator " +
                            std::string(kind));
    }
  }

 private:
  std::map<std::string, std::string> values_;
};

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += '/';
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

GridFunction generate(const GeneratorSpec& spec, int dim, int level) {
  if (dim < 1) throw ValidationError("dim must be >= 1");
  if (level < 0) throw ValidationError("level must be >= 0");
  if (dim * level > kMaxGridExponent) throw ValidationError("grid too large");
  return {dim, level, std::visit(Visitor{dim, level}, spec)};
}

RandomDistribution parse_distribution(std::string_view name) {
  if (name == "uniform") return RandomDistribution::uniform;
  if (name == "normal") return RandomDistribution::normal;
  if (name == "cascade") return RandomDistribution::cascade;
  if (name == "haar") return RandomDistribution::haar;
  throw ValidationError("unknown random distribution '" + std::string(name) + "'");
}

std::string_view to_string(RandomDistribution d) {
  switch (d) {
    case RandomDistribution::uniform:
      return "uniform";
    case RandomDistribution::normal:
      return "normal";
    case RandomDistribution::cascade:
      return "cascade";
    case RandomDistribution::haar:
      return "haar";
  }
  return "?";
}

GeneratorSpec parse_generator(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  Params params(colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1));

  GeneratorSpec spec;
  if (kind == "constant") {
    ConstantGen g;
    if (auto v = params.take({"value", "c"})) g.value = to_double(*v, "value");
    spec = g;
  } else if (kind == "indicator") {
    IndicatorGen g;
    if (auto v = params.take({"lo"})) g.lo = to_vector(*v, "lo");
    if (auto v = params.take({"hi"})) g.hi = to_vector(*v, "hi");
    if (auto v = params.take({"value", "c"})) g.value = to_double(*v, "value");
    spec = g;
  } else if (kind == "step" || kind == "step01") {
    StepGen g;
    if (auto v = params.take({"threshold", "at"})) g.threshold = to_double(*v, "threshold");
    if (auto v = params.take({"below"})) g.below = to_double(*v, "below");
    if (auto v = params.take({"above"})) g.above = to_double(*v, "above");
    if (auto v = params.take({"axis"})) g.axis = static_cast<int>(to_int(*v, "axis"));
    spec = g;
  } else if (kind == "power") {
    PowerGen g;
    if (auto v = params.take({"center", "x0"})) g.center = to_vector(*v, "center");
    if (auto v = params.take({"exponent", "beta"})) g.exponent = to_double(*v, "exponent");
    if (auto v = params.take({"m", "subsample"})) g.subsample = static_cast<int>(to_int(*v, "m"));
    spec = g;
  } else if (kind == "logsing") {
    LogSingularityGen g;
    if (auto v = params.take({"center", "x0"})) g.center = to_vector(*v, "center");
    if (auto v = params.take({"m", "subsample"})) g.subsample = static_cast<int>(to_int(*v, "m"));
    spec = g;
  } else if (kind == "checkerboard") {
    CheckerboardGen g;
    if (auto v = params.take({"period"})) g.period = to_double(*v, "period");
    spec = g;
  } else if (kind == "random") {
    RandomGen g;
    if (auto v = params.take({"seed"})) g.seed = static_cast<std::uint64_t>(to_int(*v, "seed"));
    if (auto v = params.take({"dist", "distribution"})) g.distribution = parse_distribution(*v);
    spec = g;
  } else {
    throw ValidationError("unknown generator kind '" + std::string(kind) + "'");
  }
  params.expect_consumed(kind);
  return spec;
}

std::string describe(const GeneratorSpec& spec) {
  struct Describe {
    std::string operator()(const ConstantGen& g) const {
      return "constant:value=" + format_double(g.value);
    }
    std::string operator()(const IndicatorGen& g) const {
      return "indicator:lo=" + join(g.lo) + ",hi=" + join(g.hi) + ",value=" + format_double(g.value);
    }
    std::string operator()(const StepGen& g) const {
      return "step:threshold=" + format_double(g.threshold) + ",below=" + format_double(g.below) +
             ",above=" + format_double(g.above) + ",axis=" + std::to_string(g.axis);
    }
    std::string operator()(const PowerGen& g) const {
      return "power:center=" + join(g.center) + ",exponent=" + format_double(g.exponent) +
             ",m=" + std::to_string(g.subsample);
    }
    std::string operator()(const LogSingularityGen& g) const {
      return "logsing:center=" + join(g.center) + ",m=" + std::to_string(g.subsample);
    }
    std::string operator()(const CheckerboardGen& g) const {
      return "checkerboard:period=" + format_double(g.period);
    }
    std::string operator()(const RandomGen& g) const {
      return "random:seed=" + std::to_string(g.seed) + ",dist=" + std::string(to_string(g.distribution));
    }
  };
  return std::visit(Describe{}, spec);
}

}  // namespace oscnorm

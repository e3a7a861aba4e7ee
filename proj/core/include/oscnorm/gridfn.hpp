#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace oscnorm {

/// A real function on the unit cube (0,1)^n stored as cell averages on the
/// dyadic grid with 2^level cells per side. Cells are kept in row-major order
/// (the last axis varies fastest). Immutable after construction.
class GridFunction {
 public:
  /// Throws ValidationError unless cells.size() == 2^(dim*level) and every
  /// value is finite.
  GridFunction(int dim, int level, std::vector<double> cells);

  int dim() const { return dim_; }
  int level() const { return level_; }
  std::int64_t side() const { return std::int64_t{1} << level_; }
  std::size_t size() const { return cells_.size(); }
  /// Lebesgue measure of one cell, 2^(-dim*level).
  double cell_measure() const;
  /// Side length of one cell, 2^(-level).
  double cell_side() const;

  std::span<const double> cells() const { return cells_; }
  double operator[](std::size_t i) const { return cells_[i]; }

  /// Per-axis integer coordinates of a row-major cell index.
  std::vector<std::int64_t> cell_index(std::size_t flat) const;
  std::size_t flat_index(std::span<const std::int64_t> index) const;

  bool same_grid(const GridFunction& other) const {
    return dim_ == other.dim_ && level_ == other.level_;
  }

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  int dim_;
  int level_;
  std::vector<double> cells_;
};

/// Largest supported dim*level (2^26 cells).
inline constexpr int kMaxGridExponent = 26;

/// ∫ g over the unit cube, i.e. 2^(-nL) times the compensated cell sum.
double integral(const GridFunction& g);
double mean(const GridFunction& g);
GridFunction subtract_mean(const GridFunction& g);

GridFunction abs(const GridFunction& g);
GridFunction scale(const GridFunction& g, double factor);
GridFunction add_constant(const GridFunction& g, double c);
/// The same function on the next finer grid: each cell split into 2^n copies.
GridFunction refine(const GridFunction& g);
double sup_norm(const GridFunction& g);

// --- CSV -----------------------------------------------------------------
//
//   dim=<n>,level=<L>
//   v0,v1,...            (2^(nL) values; line breaks between rows are free)
//
// Values are written in shortest round-trip decimal form, so store(load(s))
// reproduces s for canonically written input.

GridFunction load_csv(std::string_view text);
std::string store_csv(const GridFunction& g);
GridFunction read_csv_file(const std::string& path);
void write_csv_file(const GridFunction& g, const std::string& path);

/// Shortest decimal text that parses back to exactly x.
std::string format_double(double x);

// --- Generators ------------------------------------------------------------

struct ConstantGen {
  double value = 0.0;
};

/// c·1_B for the box B = Π [lo_a, hi_a). A single lo/hi value is broadcast to
/// every axis. Exact cell averages.
struct IndicatorGen {
  std::vector<double> lo{0.5};
  std::vector<double> hi{1.0};
  double value = 1.0;
};

/// `below` for x_axis < threshold, `above` otherwise. Exact cell averages.
struct StepGen {
  double threshold = 0.5;
  double below = 0.0;
  double above = 1.0;
  int axis = 0;
};

/// |x - center|^(-exponent), averaged by midpoint subsampling with
/// `subsample` points per axis in every cell. Requires exponent < dim.
struct PowerGen {
  std::vector<double> center{0.0};
  double exponent = 0.5;
  int subsample = 16;
};

/// log(1 / |x - center|), midpoint subsampled like PowerGen.
struct LogSingularityGen {
  std::vector<double> center{0.5};
  int subsample = 16;
};

/// 0/1 checkerboard with `period` tiles per unit side; the tile containing the
/// origin has value 0. Exact cell averages for any period.
struct CheckerboardGen {
  double period = 2.0;
};

enum class RandomDistribution {
  uniform,  ///< i.i.d. uniform on [-1, 1]
  normal,   ///< i.i.d. standard normal
  cascade,  ///< multiplicative dyadic cascade, positive and multiscale
  haar,     ///< random dyadic martingale with decaying increments
};

struct RandomGen {
  std::uint64_t seed = 0;
  RandomDistribution distribution = RandomDistribution::uniform;
};

using GeneratorSpec = std::variant<ConstantGen, IndicatorGen, StepGen, PowerGen,
                                   LogSingularityGen, CheckerboardGen, RandomGen>;

/// Deterministic: identical (spec, dim, level) gives identical cells.
GridFunction generate(const GeneratorSpec& spec, int dim, int level);

/// Parses "kind" or "kind:key=value,key=value". Vector values use '/' between
/// components ("center=0.25/0.75"). Preset "step01" is a 0→1 step at 1/2.
GeneratorSpec parse_generator(std::string_view text);
std::string describe(const GeneratorSpec& spec);

RandomDistribution parse_distribution(std::string_view name);
std::string_view to_string(RandomDistribution d);

}  // namespace oscnorm

#include "oscnorm/gridfn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "oscnorm/error.hpp"
#include "oscnorm/numeric.hpp"

namespace oscnorm {

GridFunction::GridFunction(int dim, int level, std::vector<double> cells)
    : dim_(dim), level_(level), cells_(std::move(cells)) {
  if (dim < 1) throw ValidationError("dim must be >= 1");
  if (level < 0) throw ValidationError("level must be >= 0");
  if (dim * level > kMaxGridExponent) {
    throw ValidationError("grid too large: dim*level exceeds " +
                          std::to_string(kMaxGridExponent));
  }
  const std::size_t expected = std::size_t{1} << (dim * level);
  if (cells_.size() != expected) {
    throw ValidationError("cell count mismatch: expected " + std::to_string(expected) +
                          ", got " + std::to_string(cells_.size()));
  }
  for (double v : cells_) {
    if (!std::isfinite(v)) throw ValidationError("non-finite cell value");
  }
}

double GridFunction::cell_measure() const { return std::ldexp(1.0, -dim_ * level_); }

double GridFunction::cell_side() const { return std::ldexp(1.0, -level_); }

std::vector<std::int64_t> GridFunction::cell_index(std::size_t flat) const {
  std::vector<std::int64_t> index(static_cast<std::size_t>(dim_));
  const std::int64_t mask = side() - 1;
  for (int a = dim_ - 1; a >= 0; --a) {
    index[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(flat) & mask;
    flat >>= level_;
  }
  return index;
}

std::size_t GridFunction::flat_index(std::span<const std::int64_t> index) const {
  std::size_t flat = 0;
  for (std::int64_t i : index) flat = (flat << level_) | static_cast<std::size_t>(i);
  return flat;
}

double integral(const GridFunction& g) {
  return compensated_sum(g.cells()) * g.cell_measure();
}

double mean(const GridFunction& g) { return integral(g); }

GridFunction subtract_mean(const GridFunction& g) {
  return add_constant(g, -mean(g));
}

GridFunction abs(const GridFunction& g) {
  std::vector<double> out(g.cells().begin(), g.cells().end());
  for (double& v : out) v = std::abs(v);
  return {g.dim(), g.level(), std::move(out)};
}

GridFunction scale(const GridFunction& g, double factor) {
  std::vector<double> out(g.cells().begin(), g.cells().end());
  for (double& v : out) v *= factor;
  return {g.dim(), g.level(), std::move(out)};
}

GridFunction add_constant(const GridFunction& g, double c) {
  std::vector<double> out(g.cells().begin(), g.cells().end());
  for (double& v : out) v += c;
  return {g.dim(), g.level(), std::move(out)};
}

GridFunction refine(const GridFunction& g) {
  const int n = g.dim();
  const int fine_level = g.level() + 1;
  std::vector<double> out(g.size() << n);
  const std::size_t fine_side = std::size_t{1} << fine_level;
  for (std::size_t f = 0; f < out.size(); ++f) {
    // Coarse coordinate on each axis is the fine one shifted right by 1.
    std::size_t rem = f;
    std::size_t coarse = 0;
    std::size_t stride = 1;
    for (int a = n - 1; a >= 0; --a) {
      const std::size_t coord = rem % fine_side;
      rem /= fine_side;
      coarse += (coord >> 1) * stride;
      stride <<= g.level();
    }
    out[f] = g[coarse];
  }
  return {n, fine_level, std::move(out)};
}

double sup_norm(const GridFunction& g) {
  double m = 0.0;
  for (double v : g.cells()) m = std::max(m, std::abs(v));
  return m;
}

// --- CSV -------------------------------------------------------------------

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw ValidationError("cannot format value");
  return std::string(buf, ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw ValidationError("malformed number '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) throw ValidationError("non-finite cell value");
  return value;
}

int parse_header_field(std::string_view field, std::string_view key) {
  field = trim(field);
  const auto eq = field.find('=');
  if (eq == std::string_view::npos || trim(field.substr(0, eq)) != key) {
    throw ValidationError("malformed header: expected 'dim=<n>,level=<L>'");
  }
  const auto digits = trim(field.substr(eq + 1));
  int value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
    throw ValidationError("malformed header: bad " + std::string(key) + " value");
  }
  return value;
}

}  // namespace

GridFunction load_csv(std::string_view text) {
  const auto newline = text.find('\n');
  const std::string_view header =
      trim(newline == std::string_view::npos ? text : text.substr(0, newline));
  const std::string_view body =
      newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);

  const auto comma = header.find(',');
  if (comma == std::string_view::npos) {
    throw ValidationError("malformed header: expected 'dim=<n>,level=<L>'");
  }
  const int dim = parse_header_field(header.substr(0, comma), "dim");
  const int level = parse_header_field(header.substr(comma + 1), "level");
  if (dim < 1 || level < 0 || dim * level > kMaxGridExponent) {
    throw ValidationError("malformed header: dim/level out of range");
  }

  std::vector<double> cells;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t end = body.find_first_of(",\n", pos);
    if (end == std::string_view::npos) end = body.size();
    const auto token = trim(body.substr(pos, end - pos));
    if (!token.empty()) {
      cells.push_back(parse_number(token));
    } else if (end < body.size() && body[end] == ',') {
      throw ValidationError("malformed number ''");
    }
    pos = end + 1;
  }
  return {dim, level, std::move(cells)};
}

std::string store_csv(const GridFunction& g) {
  std::string out = "dim=" + std::to_string(g.dim()) + ",level=" + std::to_string(g.level()) + "\n";
  const std::size_t row = g.dim() == 1 ? g.size() : static_cast<std::size_t>(g.side());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out += format_double(g[i]);
    out += ((i + 1) % row == 0) ? '\n' : ',';
  }
  return out;
}

GridFunction read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return load_csv(buffer.str());
}

void write_csv_file(const GridFunction& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << store_csv(g);
  if (!out) throw IoError("error while writing '" + path + "'");
}

}  // namespace oscnorm

#include "oscnorm/oscnorms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oscnorm/error.hpp"
#include "oscnorm/numeric.hpp"

namespace oscnorm {

namespace {

void check_p(double p, bool allow_infinity) {
  if (std::isnan(p) || p <= 1.0 || (std::isinf(p) && !allow_infinity)) {
    std::ostringstream msg;
    msg << "exponent p must lie in (1, " << (allow_infinity ? "inf]" : "inf)") << ", got " << p;
    throw ValidationError(msg.str());
  }
}

double conjugate(double p) { return std::isinf(p) ? 1.0 : p / (p - 1.0); }

std::vector<CubeRef> children_of(const CubeStatsTree& tree, CubeRef q) {
  std::vector<CubeRef> out;
  out.reserve(tree.arity());
  for (std::size_t b = 0; b < tree.arity(); ++b) out.push_back({q.level + 1, q.morton * tree.arity() + b});
  return out;
}

}  // namespace

bool is_antichain(std::span<const DyadicCube> cubes) {
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    for (std::size_t k = 0; k < cubes.size(); ++k) {
      if (i != k && cubes[i].contains(cubes[k])) return false;
    }
  }
  return true;
}

FamilySelection make_selection(const CubeStatsTree& tree, std::span<const CubeRef> refs,
                               double objective_value) {
  FamilySelection sel;
  CompensatedSum measure, osc;
  sel.cubes.reserve(refs.size());
  for (const CubeRef& r : refs) {
    const CubeStats& s = tree.stats(r.level, r.morton);
    sel.cubes.push_back(tree.cube(r.level, r.morton));
    measure.add(s.measure);
    osc.add(s.osc2);
  }
  sel.total_measure = measure.value();
  sel.total_osc = osc.value();
  sel.objective_value = objective_value;
  return sel;
}

// --- JN_p ------------------------------------------------------------------

namespace {

struct JnTable {
  std::vector<std::vector<double>> best;
  std::vector<std::vector<char>> take;
};

JnTable jn_table(const CubeStatsTree& tree, double p) {
  check_p(p, false);
  const int L = tree.level();
  const std::size_t arity = tree.arity();
  JnTable t;
  t.best.resize(static_cast<std::size_t>(L) + 1);
  t.take.resize(static_cast<std::size_t>(L) + 1);
  for (int j = L; j >= 0; --j) {
    const auto stats = tree.level_stats(j);
    auto& best = t.best[static_cast<std::size_t>(j)];
    auto& take = t.take[static_cast<std::size_t>(j)];
    best.resize(stats.size());
    take.resize(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k) {
      const double s = std::pow(std::pow(stats[k].measure, 1.0 / p - 1.0) * stats[k].osc1, p);
      double below = 0.0;
      if (j < L) {
        const auto& next = t.best[static_cast<std::size_t>(j) + 1];
        below = pairwise_sum(std::span<const double>(next).subspan(k * arity, arity));
      }
      take[k] = (j == L || s >= below) ? 1 : 0;
      best[k] = std::max(s, below);
    }
  }
  return t;
}

}  // namespace

double jn_norm(const CubeStatsTree& tree, double p) {
  const JnTable t = jn_table(tree, p);
  return std::pow(t.best[0][0], 1.0 / p);
}

FamilySelection jn_selection(const CubeStatsTree& tree, double p) {
  const JnTable t = jn_table(tree, p);
  std::vector<CubeRef> refs;
  std::vector<CubeRef> stack{{0, 0}};
  while (!stack.empty()) {
    const CubeRef q = stack.back();
    stack.pop_back();
    if (t.take[static_cast<std::size_t>(q.level)][q.morton]) {
      refs.push_back(q);
    } else {
      const auto kids = children_of(tree, q);
      stack.insert(stack.end(), kids.rbegin(), kids.rend());
    }
  }
  std::sort(refs.begin(), refs.end());
  return make_selection(tree, refs, std::pow(t.best[0][0], 1.0 / p));
}

// --- GaRo_p: exact budget --------------------------------------------------------

namespace {

using Table = std::vector<double>;

Table max_plus(const Table& a, const Table& b) {
  Table c(a.size() + b.size() - 1, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) c[i + k] = std::max(c[i + k], a[i] + b[k]);
  }
  return c;
}

// F[j][q] is indexed by budget in cells, 0..cells_per_cube(j).
struct BudgetTables {
  std::vector<std::vector<Table>> f;

  const Table& at(CubeRef q) const { return f[static_cast<std::size_t>(q.level)][q.morton]; }
};

// Prefix max-plus convolutions of the children tables of q.
std::vector<Table> child_prefixes(const CubeStatsTree& tree, const BudgetTables& t, CubeRef q) {
  const auto kids = children_of(tree, q);
  std::vector<Table> prefix;
  prefix.reserve(kids.size());
  prefix.push_back(t.at(kids[0]));
  for (std::size_t b = 1; b < kids.size(); ++b) prefix.push_back(max_plus(prefix.back(), t.at(kids[b])));
  return prefix;
}

BudgetTables budget_tables(const CubeStatsTree& tree) {
  const int L = tree.level();
  BudgetTables t;
  t.f.resize(static_cast<std::size_t>(L) + 1);
  for (int j = L; j >= 0; --j) {
    auto& tables = t.f[static_cast<std::size_t>(j)];
    tables.resize(tree.cubes_at(j));
    auto fill = [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const double osc = tree.stats(j, k).osc2;
        if (j == L) {
          tables[k] = Table{0.0, osc};
          continue;
        }
        Table conv = child_prefixes(tree, t, {j, k}).back();
        conv.back() = std::max(conv.back(), osc);
        tables[k] = std::move(conv);
      }
    };
    parallel_for(tables.size(), fill);
  }
  return t;
}

void backtrack(const CubeStatsTree& tree, const BudgetTables& t, CubeRef q, std::size_t budget,
               std::vector<CubeRef>& out) {
  if (budget == 0) return;
  const std::size_t m = tree.cells_per_cube(q.level);
  if (q.level == tree.level()) {
    out.push_back(q);
    return;
  }
  const auto prefix = child_prefixes(tree, t, q);
  if (budget == m && tree.stats(q.level, q.morton).osc2 >= prefix.back()[m]) {
    out.push_back(q);
    return;
  }
  const auto kids = children_of(tree, q);
  std::size_t k = budget;
  for (std::size_t b = kids.size() - 1; b > 0; --b) {
    const Table& before = prefix[b - 1];
    const Table& last = t.at(kids[b]);
    const double target = prefix[b][k];
    std::size_t pick = last.size();
    for (std::size_t i = 0; i < last.size() && i <= k; ++i) {
      if (k - i < before.size() && before[k - i] + last[i] == target) {
        pick = i;
        break;
      }
    }
    if (pick == last.size()) throw std::logic_error("budget backtrack lost its split");
    backtrack(tree, t, kids[b], pick, out);
    k -= pick;
  }
  backtrack(tree, t, kids[0], k, out);
}

ParetoFront exact_front(const CubeStatsTree& tree, bool witnesses) {
  const BudgetTables t = budget_tables(tree);
  const Table& root = t.at({0, 0});
  const double cell = tree.stats(tree.level(), 0).measure;
  ParetoFront front;
  front.mode = FrontMode::exact_budget;
  front.points.push_back({0.0, 0.0, 0});
  double best = 0.0;
  for (std::size_t k = 1; k < root.size(); ++k) {
    if (root[k] > best) {
      best = root[k];
      front.points.push_back({static_cast<double>(k) * cell, root[k], k});
    }
  }
  if (witnesses) {
    for (const ParetoPoint& pt : front.points) {
      std::vector<CubeRef> refs;
      backtrack(tree, t, {0, 0}, pt.cells, refs);
      std::sort(refs.begin(), refs.end());
      front.witnesses.push_back(make_selection(tree, refs, pt.osc));
    }
  }
  return front;
}

// --- GaRo_p: λ sweep -----------------------------------------------------------

struct SweepResult {
  std::size_t cells = 0;
  double osc = 0.0;
  std::vector<CubeRef> refs;
};

SweepResult sweep_once(const CubeStatsTree& tree, double lambda, bool witnesses) {
  const int L = tree.level();
  const std::size_t arity = tree.arity();
  std::vector<std::vector<double>> val(static_cast<std::size_t>(L) + 1);
  std::vector<std::vector<std::size_t>> cells(static_cast<std::size_t>(L) + 1);
  std::vector<std::vector<double>> osc(static_cast<std::size_t>(L) + 1);
  // 0: empty, 1: take the cube, 2: descend.
  std::vector<std::vector<char>> choice(static_cast<std::size_t>(L) + 1);
  for (int j = L; j >= 0; --j) {
    const auto ju = static_cast<std::size_t>(j);
    const auto stats = tree.level_stats(j);
    const std::size_t m = tree.cells_per_cube(j);
    val[ju].assign(stats.size(), 0.0);
    cells[ju].assign(stats.size(), 0);
    osc[ju].assign(stats.size(), 0.0);
    choice[ju].assign(stats.size(), 0);
    for (std::size_t k = 0; k < stats.size(); ++k) {
      const double own = stats[k].osc2 - lambda * stats[k].measure;
      double below = 0.0;
      std::size_t below_cells = 0;
      double below_osc = 0.0;
      if (j < L) {
        for (std::size_t b = 0; b < arity; ++b) {
          const std::size_t c = k * arity + b;
          below += val[ju + 1][c];
          below_cells += cells[ju + 1][c];
          below_osc += osc[ju + 1][c];
        }
      }
      if (own > 0.0 && own >= below) {
        val[ju][k] = own;
        cells[ju][k] = m;
        osc[ju][k] = stats[k].osc2;
        choice[ju][k] = 1;
      } else if (below > 0.0) {
        val[ju][k] = below;
        cells[ju][k] = below_cells;
        osc[ju][k] = below_osc;
        choice[ju][k] = 2;
      }
    }
  }
  SweepResult r{cells[0][0], osc[0][0], {}};
  if (witnesses) {
    std::vector<CubeRef> stack{{0, 0}};
    while (!stack.empty()) {
      const CubeRef q = stack.back();
      stack.pop_back();
      const char c = choice[static_cast<std::size_t>(q.level)][q.morton];
      if (c == 1) {
        r.refs.push_back(q);
      } else if (c == 2) {
        const auto kids = children_of(tree, q);
        stack.insert(stack.end(), kids.begin(), kids.end());
      }
    }
    std::sort(r.refs.begin(), r.refs.end());
  }
  return r;
}

double cross(const ParetoPoint& o, const ParetoPoint& a, const ParetoPoint& b) {
  return (a.measure - o.measure) * (b.osc - o.osc) - (a.osc - o.osc) * (b.measure - o.measure);
}

ParetoFront sweep_front(const CubeStatsTree& tree, const FrontOptions& options) {
  std::vector<double> lambdas = options.lambdas;
  const double top = garo_inf(tree);
  if (lambdas.empty()) {
    if (options.sweep_count < 2) throw ValidationError("lambda sweep needs at least 2 values");
    lambdas.push_back(0.0);
    if (top > 0.0) {
      const int steps = options.sweep_count - 1;
      const double hi = top * (1.0 - 1e-9);
      const double lo = top * 1e-8;
      for (int i = 0; i < steps; ++i) {
        const double frac = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
        lambdas.push_back(hi * std::pow(lo / hi, frac));
      }
    }
  }
  for (double l : lambdas) {
    if (!(l >= 0.0) || std::isinf(l)) throw ValidationError("sweep values must be finite and >= 0");
  }

  std::vector<SweepResult> results(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) results[i] = sweep_once(tree, lambdas[i], options.witnesses);
  });

  const double cell = tree.stats(tree.level(), 0).measure;
  struct Candidate {
    ParetoPoint point;
    std::size_t source;
  };
  std::vector<Candidate> cands{{{0.0, 0.0, 0}, results.size()}};
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.cells == 0) continue;
    cands.push_back({{static_cast<double>(r.cells) * cell, r.osc, r.cells}, i});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.point.cells != b.point.cells) return a.point.cells < b.point.cells;
    return a.point.osc > b.point.osc;
  });

  std::vector<Candidate> hull;
  for (const Candidate& c : cands) {
    if (!hull.empty() && hull.back().point.cells == c.point.cells) continue;
    while (hull.size() >= 2 && cross(hull[hull.size() - 2].point, hull.back().point, c.point) >= 0.0) {
      hull.pop_back();
    }
    hull.push_back(c);
  }

  ParetoFront front;
  front.mode = FrontMode::lambda_sweep;
  for (const Candidate& c : hull) {
    if (!front.points.empty() && c.point.osc <= front.points.back().osc) break;
    front.points.push_back(c.point);
    if (options.witnesses) {
      std::vector<CubeRef> refs;
      if (c.source < results.size()) refs = results[c.source].refs;
      front.witnesses.push_back(make_selection(tree, refs, c.point.osc));
    }
  }
  return front;
}

}  // namespace

FrontMode default_front_mode(const CubeStatsTree& tree) {
  return tree.cells_per_cube(0) <= kExactBudgetLimit ? FrontMode::exact_budget
                                                      : FrontMode::lambda_sweep;
}

ParetoFront garo_front(const CubeStatsTree& tree, const FrontOptions& options) {
  const FrontMode mode = options.mode.value_or(default_front_mode(tree));
  if (mode == FrontMode::exact_budget) return exact_front(tree, options.witnesses);
  return sweep_front(tree, options);
}

double garo_norm(const ParetoFront& front, double p) {
  check_p(p, true);
  const double exponent = 1.0 / conjugate(p);
  double best = 0.0;
  for (const ParetoPoint& pt : front.points) {
    if (pt.measure <= 0.0) continue;
    best = std::max(best, pt.osc / std::pow(pt.measure, exponent));
  }
  return best;
}

double garo_inf(const CubeStatsTree& tree) { return bmo_norm(tree).osc2; }

const char* to_string(FrontMode mode) {
  return mode == FrontMode::exact_budget ? "exact_budget" : "lambda_sweep";
}

// --- BMO and B_p -------------------------------------------------------------

BmoNorms bmo_norm(const CubeStatsTree& tree) {
  BmoNorms out;
  for (int j = 0; j <= tree.level(); ++j) {
    for (const CubeStats& s : tree.level_stats(j)) {
      out.osc1 = std::max(out.osc1, s.osc1 / s.measure);
      out.osc2 = std::max(out.osc2, s.osc2 / s.measure);
    }
  }
  return out;
}

double bbm_norm(const CubeStatsTree& tree, double p) {
  check_p(p, true);
  const double pc = conjugate(p);
  const int n = tree.dim();
  double best = 0.0;
  std::vector<double> osc;
  for (int j = 1; j <= tree.level(); ++j) {
    const auto stats = tree.level_stats(j);
    const std::size_t cap = std::size_t{1} << (j * (n - 1));
    osc.resize(stats.size());
    std::transform(stats.begin(), stats.end(), osc.begin(), [](const CubeStats& s) { return s.osc2; });
    std::partial_sort(osc.begin(), osc.begin() + static_cast<std::ptrdiff_t>(cap), osc.end(),
                      std::greater<>());
    const double sum = compensated_sum(std::span<const double>(osc).first(cap));
    best = std::max(best, std::pow(2.0, j / pc) * sum);
  }
  return best;
}

// --- Γ_f membership ----------------------------------------------------------

namespace {

struct SlackTable {
  std::vector<std::vector<double>> best;
  std::vector<std::vector<char>> take;
};

SlackTable slack_table(const CubeStatsTree& tree) {
  if (!tree.has_gamma()) throw ValidationError("tree carries no majorant integrals");
  const int L = tree.level();
  const std::size_t arity = tree.arity();
  SlackTable t;
  t.best.resize(static_cast<std::size_t>(L) + 1);
  t.take.resize(static_cast<std::size_t>(L) + 1);
  for (int j = L; j >= 0; --j) {
    const auto ju = static_cast<std::size_t>(j);
    const auto stats = tree.level_stats(j);
    t.best[ju].resize(stats.size());
    t.take[ju].resize(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k) {
      const double own = stats[k].osc2 - *stats[k].gamma_integral;
      if (j == L) {
        t.best[ju][k] = own;
        t.take[ju][k] = 1;
        continue;
      }
      // Best nonempty union over the children.
      double positive = 0.0;
      double top = -std::numeric_limits<double>::infinity();
      bool any_nonneg = false;
      for (std::size_t b = 0; b < arity; ++b) {
        const double v = t.best[ju + 1][k * arity + b];
        top = std::max(top, v);
        if (v >= 0.0) {
          any_nonneg = true;
          positive += v;
        }
      }
      const double below = any_nonneg ? positive : top;
      t.take[ju][k] = own >= below ? 1 : 0;
      t.best[ju][k] = std::max(own, below);
    }
  }
  return t;
}

}  // namespace

double gamma_slack(const CubeStatsTree& tree_with_gamma) {
  return slack_table(tree_with_gamma).best[0][0];
}

double gamma_slack(const CubeStatsTree& tree, const GridFunction& gamma) {
  return gamma_slack(tree.with_gamma(gamma));
}

FamilySelection gamma_slack_family(const CubeStatsTree& tree_with_gamma) {
  const SlackTable t = slack_table(tree_with_gamma);
  const std::size_t arity = tree_with_gamma.arity();
  std::vector<CubeRef> refs;
  std::vector<CubeRef> stack{{0, 0}};
  while (!stack.empty()) {
    const CubeRef q = stack.back();
    stack.pop_back();
    const auto qu = static_cast<std::size_t>(q.level);
    if (t.take[qu][q.morton]) {
      refs.push_back(q);
      continue;
    }
    const auto kids = children_of(tree_with_gamma, q);
    bool any_nonneg = false;
    for (const CubeRef& c : kids) any_nonneg = any_nonneg || t.best[qu + 1][c.morton] >= 0.0;
    if (any_nonneg) {
      for (const CubeRef& c : kids) {
        if (t.best[qu + 1][c.morton] >= 0.0) stack.push_back(c);
      }
    } else {
      std::size_t arg = 0;
      for (std::size_t b = 1; b < arity; ++b) {
        if (t.best[qu + 1][kids[b].morton] > t.best[qu + 1][kids[arg].morton]) arg = b;
      }
      stack.push_back(kids[arg]);
    }
  }
  std::sort(refs.begin(), refs.end());
  return make_selection(tree_with_gamma, refs, t.best[0][0]);
}

double garoX_upper(const CubeStatsTree& tree, const GridFunction& gamma, const RiSpaceSpec& space,
                   double tolerance) {
  validate(space);
  const double slack = gamma_slack(tree, gamma);
  if (slack > tolerance) {
    std::ostringstream msg;
    msg << "majorant is not admissible: slack " << format_double(slack) << " exceeds tolerance "
        << format_double(tolerance);
    throw ValidationError(msg.str());
  }
  return ri_norm(rearr(gamma), space);
}

}  // namespace oscnorm

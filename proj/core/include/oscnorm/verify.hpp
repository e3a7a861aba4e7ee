#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "oscnorm/cubetree.hpp"
#include "oscnorm/fracsobolev.hpp"
#include "oscnorm/gridfn.hpp"
#include "oscnorm/oscnorms.hpp"
#include "oscnorm/rearrange.hpp"

namespace oscnorm {

enum class CheckStatus { pass, fail, report_only };
enum class CheckKind {
  upper_bound,  ///< lhs <= rhs
  identity,     ///< lhs is a relative error, rhs its bound
  membership,   ///< lhs is a slack, rhs = 0
};

const char* to_string(CheckStatus s);
const char* to_string(CheckKind k);

using MetaValue = std::variant<std::string, double, std::int64_t>;

struct InequalityReport {
  std::string name;
  CheckKind kind = CheckKind::upper_bound;
  double lhs = 0.0;
  double rhs = 0.0;
  double paper_constant = 1.0;
  double empirical_ratio = 0.0;  ///< lhs/rhs; NaN when undefined
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::pass;
  std::vector<std::pair<std::string, MetaValue>> metadata;
};

inline constexpr double kExactTolerance = 1e-9;
inline constexpr double kQuadratureTolerance = 1e-6;
inline constexpr double kMembershipTolerance = 1e-9;
inline constexpr double kIdentityTolerance = 1e-8;

/// lhs <= rhs·(1 + tolerance) + 1e-14.
bool within(double lhs, double rhs, double tolerance);

struct CheckParams {
  double p = 2.0;
  /// Fractional parameters for the Sobolev checks; defaults per dimension.
  std::optional<FracParams> frac;
  /// Space for "lola1".
  RiSpaceSpec space = Lq{2.0};
  FrontOptions front;
  std::string function_label;
};

/// All check names, in report order.
const std::vector<std::string>& check_names();
bool is_sobolev_check(const std::string& name);

/// (α, p) sets with p < n/α used by "limite" and the witness checks.
std::vector<FracParams> limite_params(int dim);
/// α = 1/2, p = n/α.
FracParams laver1_params(int dim);
/// α = 1/2, p = 1.
FracParams obtenida_params(int dim);

/// Per-function cache shared by the checks: cube tree, Pareto front,
/// rearrangements, Gagliardo fields and witnesses.
class CheckContext {
 public:
  CheckContext(GridFunction g, FrontOptions front = {});

  const GridFunction& function() const { return g_; }
  const GridFunction& centered();
  const CubeStatsTree& tree();
  const ParetoFront& front();
  const StepFunction& rearranged();
  const StepFunction& rearranged_centered();
  const GridFunction& field(const FracParams& fp);
  const GridFunction& witness(const FracParams& fp);
  double seminorm(const FracParams& fp);

 private:
  using Key = std::pair<double, double>;

  GridFunction g_;
  FrontOptions front_options_;
  std::optional<GridFunction> centered_;
  std::optional<CubeStatsTree> tree_;
  std::optional<ParetoFront> front_;
  std::optional<StepFunction> rearr_;
  std::optional<StepFunction> rearr_centered_;
  std::map<Key, GridFunction> fields_;
  std::map<Key, GridFunction> witnesses_;
};

/// Throws ValidationError for unknown names or inconsistent parameters.
InequalityReport run_check(const std::string& name, CheckContext& ctx, const CheckParams& params);
InequalityReport run_check(const std::string& name, const GridFunction& g, const CheckParams& params);

// --- Suites --------------------------------------------------------------------

struct CorpusEntry {
  std::string label;
  GeneratorSpec spec;
  int dim = 1;
  int level = 0;
};

struct CorpusSpec {
  std::uint64_t seed = 0;
  std::vector<int> dims{1, 2};
  std::vector<int> levels{3, 4, 5, 6, 7, 8};
};

/// Deterministic corpus: ten generators for every (dim, level) pair.
std::vector<CorpusEntry> make_corpus(const CorpusSpec& spec);

struct SuiteOptions {
  std::vector<std::string> checks;  ///< empty: every check
  std::vector<double> p_values{1.5, 2.0, 4.0};
  /// Sobolev checks run only on grids with at most this many cells.
  std::size_t max_sobolev_cells = 4096;
};

struct CheckSummary {
  std::string name;
  std::size_t count = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t report_only = 0;
  double worst_ratio = 0.0;  ///< max finite empirical ratio
  double mean_ratio = 0.0;
  double cv = 0.0;  ///< coefficient of variation of the finite ratios
};

struct SuiteResult {
  std::vector<InequalityReport> reports;  ///< ordered by corpus index, then check
  std::vector<CheckSummary> summary;      ///< ordered by check_names()
  bool all_passed() const;
};

// --- Exhaustive cross-checks ------------------------------------------------------

struct OracleStat {
  std::string name;
  std::size_t comparisons = 0;
  std::size_t mismatches = 0;
  double max_rel_error = 0.0;
};

struct OracleResult {
  std::vector<OracleStat> stats;  ///< jn, garo_front, gamma_slack
  bool passed() const;
};

inline constexpr double kOracleTolerance = 1e-12;

/// Compares jn_norm (p = 3/2, 2, 4), the exact-budget Pareto front and
/// gamma_slack with brute_force_families / for_each_antichain on `trials`
/// random functions; trial i uses level i mod (max_level + 1). Slack errors
/// are relative to max(|slack|, osc2(Q_0), ∫|γ|).
OracleResult run_oracle(int dim, int max_level, std::size_t trials, std::uint64_t seed);

SuiteResult run_suite(const std::vector<CorpusEntry>& corpus, const SuiteOptions& options = {});
std::vector<CheckSummary> summarize(const std::vector<InequalityReport>& reports);

}  // namespace oscnorm

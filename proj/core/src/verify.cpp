#include "oscnorm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oscnorm/czk.hpp"
#include "oscnorm/error.hpp"
#include "oscnorm/numeric.hpp"

namespace oscnorm {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::report_only:
      return "report_only";
  }
  return "?";
}

const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::upper_bound:
      return "upper_bound";
    case CheckKind::identity:
      return "identity";
    case CheckKind::membership:
      return "membership";
  }
  return "?";
}

bool within(double lhs, double rhs, double tolerance) {
  return lhs <= rhs * (1.0 + tolerance) + 1e-14;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "delaintro", "burka",    "belaprima", "belas",     "belas-lower",       "bela",
      "belast",    "ladeboca", "lola1",     "vale1",     "vale1-witness",     "vale2",
      "limite",    "laver1",   "obtenida",  "tipica-membership", "brezis-wainger", "cz-kfunctional"};
  return names;
}

bool is_sobolev_check(const std::string& name) {
  return name == "vale1-witness" || name == "limite" || name == "laver1" || name == "obtenida" ||
         name == "tipica-membership" || name == "brezis-wainger";
}

std::vector<FracParams> limite_params(int dim) {
  if (dim == 1) return {{0.5, 1.5}};
  if (dim == 2) return {{0.5, 2.0}, {0.25, 2.0}};
  return {{0.5, 2.0}};
}

FracParams laver1_params(int dim) { return {0.5, dim / 0.5}; }

FracParams obtenida_params(int /*dim*/) { return {0.5, 1.0}; }

// --- CheckContext ----------------------------------------------------------------

CheckContext::CheckContext(GridFunction g, FrontOptions front)
    : g_(std::move(g)), front_options_(std::move(front)) {}

const GridFunction& CheckContext::centered() {
  if (!centered_) centered_ = subtract_mean(g_);
  return *centered_;
}

const CubeStatsTree& CheckContext::tree() {
  if (!tree_) tree_.emplace(g_);
  return *tree_;
}

const ParetoFront& CheckContext::front() {
  if (!front_) front_ = garo_front(tree(), front_options_);
  return *front_;
}

const StepFunction& CheckContext::rearranged() {
  if (!rearr_) rearr_ = rearr(g_);
  return *rearr_;
}

const StepFunction& CheckContext::rearranged_centered() {
  if (!rearr_centered_) rearr_centered_ = rearr(centered());
  return *rearr_centered_;
}

const GridFunction& CheckContext::field(const FracParams& fp) {
  const Key key{fp.alpha, fp.p};
  auto it = fields_.find(key);
  if (it == fields_.end()) it = fields_.emplace(key, gagliardo_field(g_, fp)).first;
  return it->second;
}

const GridFunction& CheckContext::witness(const FracParams& fp) {
  const Key key{fp.alpha, fp.p};
  auto it = witnesses_.find(key);
  if (it == witnesses_.end()) {
    GridFunction w = scale(riesz_potential(field(fp), fp.alpha), witness_constant(g_.dim(), fp));
    it = witnesses_.emplace(key, std::move(w)).first;
  }
  return it->second;
}

double CheckContext::seminorm(const FracParams& fp) {
  const GridFunction& d = field(fp);
  CompensatedSum acc;
  for (double v : d.cells()) acc.add(fp.p == 1.0 ? v : std::pow(v, fp.p));
  return std::pow(acc.value() * g_.cell_measure(), 1.0 / fp.p);
}

// --- checks -------------------------------------------------------------------------

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

InequalityReport start(const std::string& name, CheckContext& ctx, const CheckParams& params) {
  InequalityReport r;
  r.name = name;
  r.tolerance = kExactTolerance;
  const GridFunction& g = ctx.function();
  r.metadata.emplace_back("function", params.function_label);
  r.metadata.emplace_back("dim", std::int64_t{g.dim()});
  r.metadata.emplace_back("level", std::int64_t{g.level()});
  return r;
}

std::string front_mode(CheckContext& ctx) { return std::string("dyadic/") + to_string(ctx.front().mode); }

void finish(InequalityReport& r, bool report_only) {
  if (r.kind == CheckKind::membership) {
    r.empirical_ratio = kNaN;
  } else if (r.rhs != 0.0) {
    r.empirical_ratio = r.lhs / r.rhs;
  } else {
    r.empirical_ratio = r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : kNaN;
  }
  if (report_only) {
    r.status = CheckStatus::report_only;
  } else if (r.kind == CheckKind::membership) {
    r.status = !std::isnan(r.lhs) && r.lhs <= r.tolerance ? CheckStatus::pass : CheckStatus::fail;
  } else {
    r.status = !std::isnan(r.lhs) && !std::isnan(r.rhs) && within(r.lhs, r.rhs, r.tolerance)
                   ? CheckStatus::pass
                   : CheckStatus::fail;
  }
}

void check_p(double p) {
  if (!(p > 1.0) || std::isinf(p)) throw ValidationError("check needs a finite p > 1");
}

FracParams frac_or(const CheckParams& params, const FracParams& fallback) {
  const FracParams fp = params.frac.value_or(fallback);
  validate(fp);
  return fp;
}

void add_frac(InequalityReport& r, const FracParams& fp) {
  r.metadata.emplace_back("alpha", fp.alpha);
  r.metadata.emplace_back("p", fp.p);
}

// L(s,∞) through f**; s = ∞ is the Bennett-DeVore-Sharpley space.
double weak_type_norm(const StepFunction& sf, double s) {
  if (std::isinf(s)) return ri_norm(sf, WeakLinfty{});
  return ri_norm(sf, Lorentz{s, std::numeric_limits<double>::infinity()});
}

// sup over grid t < 1/4 of (f** - f*)(t) / (c_n γ**(t)). On each step of f*
// the left side times t is constant while t γ**(t) grows, so left step ends,
// all of them grid points, carry the supremum.
void vale1_bound(InequalityReport& r, CheckContext& ctx, const GridFunction& gamma) {
  const GridFunction& g = ctx.function();
  const StepFunction& f = ctx.rearranged();
  const StepFunction gs = rearr(gamma);
  const double cn = std::ldexp(1.0, g.dim() + 3);
  r.paper_constant = cn;
  r.lhs = 0.0;
  r.rhs = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  double worst_t = kNaN;
  const double c = g.cell_measure();
  for (std::size_t k = 1; static_cast<double>(k) * c < 0.25; ++k) {
    const double t = static_cast<double>(k) * c;
    const double lhs = maximal_average(f, t) - f.value_at(t);
    const double rhs = cn * maximal_average(gs, t);
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (ratio > worst) {
      worst = ratio;
      worst_t = t;
      r.lhs = lhs;
      r.rhs = rhs;
    }
  }
  r.metadata.emplace_back("t", worst_t);
}

}  // namespace

InequalityReport run_check(const std::string& name, CheckContext& ctx, const CheckParams& params) {
  const GridFunction& g = ctx.function();
  const int n = g.dim();
  InequalityReport r = start(name, ctx, params);
  bool report_only = false;

  if (name == "delaintro") {
    check_p(params.p);
    r.metadata.emplace_back("p", params.p);
    r.metadata.emplace_back("mode", front_mode(ctx));
    r.paper_constant = 2.0;
    r.lhs = garo_norm(ctx.front(), params.p);
    r.rhs = 2.0 * jn_norm(ctx.tree(), params.p);
  } else if (name == "burka") {
    check_p(params.p);
    r.metadata.emplace_back("p", params.p);
    r.metadata.emplace_back("mode", front_mode(ctx));
    r.lhs = bbm_norm(ctx.tree(), params.p);
    r.rhs = garo_norm(ctx.front(), params.p);
    // A swept front only bounds the right side from below.
    report_only = ctx.front().mode == FrontMode::lambda_sweep;
  } else if (name == "belaprima") {
    check_p(params.p);
    r.metadata.emplace_back("p", params.p);
    r.metadata.emplace_back("mode", front_mode(ctx));
    r.paper_constant = 2.0 * params.p / (params.p - 1.0);
    r.lhs = garo_norm(ctx.front(), params.p);
    r.rhs = r.paper_constant * ri_norm(ctx.rearranged_centered(), WeakLp{params.p});
  } else if (name == "belas") {
    r.metadata.emplace_back("mode", std::string("dyadic"));
    const BmoNorms b = bmo_norm(ctx.tree());
    r.paper_constant = 2.0;
    r.lhs = b.osc2;
    r.rhs = 2.0 * b.osc1;
  } else if (name == "belas-lower") {
    r.metadata.emplace_back("mode", std::string("dyadic"));
    const BmoNorms b = bmo_norm(ctx.tree());
    r.lhs = b.osc1;
    r.rhs = b.osc2;
  } else if (name == "bela") {
    check_p(params.p);
    r.metadata.emplace_back("p", params.p);
    r.metadata.emplace_back("mode", front_mode(ctx));
    r.tolerance = kQuadratureTolerance;
    r.lhs = weak_type_norm(ctx.rearranged_centered(), params.p);
    r.rhs = garo_norm(ctx.front(), params.p);
    report_only = true;
  } else if (name == "belast") {
    r.metadata.emplace_back("mode", std::string("dyadic"));
    r.lhs = ri_norm(ctx.rearranged_centered(), WeakLinfty{});
    r.rhs = bmo_norm(ctx.tree()).osc1;
    report_only = true;
  } else if (name == "ladeboca") {
    r.metadata.emplace_back("mode", std::string("dyadic"));
    const double np = n == 1 ? std::numeric_limits<double>::infinity() : n / (n - 1.0);
    r.metadata.emplace_back("exponent", np);
    r.lhs = weak_type_norm(ctx.rearranged_centered(), np);
    r.rhs = bbm_norm(ctx.tree(), std::numeric_limits<double>::infinity());
    report_only = true;
  } else if (name == "lola1") {
    validate(params.space);
    r.metadata.emplace_back("space", describe(params.space));
    r.metadata.emplace_back("mode", std::string("dyadic"));
    r.paper_constant = 2.0;
    r.tolerance = std::holds_alternative<Lorentz>(params.space) ? kQuadratureTolerance : kExactTolerance;
    try {
      r.lhs = garoX_upper(ctx.tree(), scale(abs(g), 2.0), params.space, kMembershipTolerance);
    } catch (const ValidationError&) {
      r.lhs = kNaN;
    }
    r.rhs = 2.0 * ri_norm(ctx.rearranged(), params.space);
  } else if (name == "vale1") {
    r.metadata.emplace_back("majorant", std::string("2|f|"));
    vale1_bound(r, ctx, scale(abs(g), 2.0));
  } else if (name == "vale1-witness") {
    const FracParams fp = frac_or(params, limite_params(n).front());
    add_frac(r, fp);
    r.metadata.emplace_back("majorant", std::string("sobolev_witness"));
    r.tolerance = kQuadratureTolerance;
    vale1_bound(r, ctx, ctx.witness(fp));
  } else if (name == "vale2") {
    r.kind = CheckKind::identity;
    r.metadata.emplace_back("mode", std::string("exact"));
    const StepFunction& sf = ctx.rearranged_centered();
    const double c = g.cell_measure();
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      for (double offset : {0.5, 1.0}) {
        const double t = (static_cast<double>(k) + offset) * c;
        if (t >= 1.0) continue;
        const double direct = maximal_average(sf, t);
        const double rebuilt = hardy_tail(sf, t) + sf.l1();
        const double err = std::abs(direct - rebuilt);
        const double scale_ref = std::max(std::abs(direct), std::abs(rebuilt));
        worst = std::max(worst, scale_ref > 0.0 ? err / scale_ref : 0.0);
      }
    }
    r.lhs = worst;
    r.rhs = kIdentityTolerance;
    r.tolerance = 0.0;
  } else if (name == "limite") {
    const FracParams fp = frac_or(params, limite_params(n).front());
    if (!(fp.alpha * fp.p < n)) throw ValidationError("limite needs alpha*p < n");
    const double q = sobolev_exponent(fp, n);
    add_frac(r, fp);
    r.metadata.emplace_back("q", q);
    r.metadata.emplace_back("mode", front_mode(ctx));
    r.tolerance = kQuadratureTolerance;
    r.paper_constant = std::pow(n, (n + fp.alpha * fp.p) / (2.0 * fp.p));
    r.lhs = garo_norm(ctx.front(), q);
    r.rhs = r.paper_constant * ctx.seminorm(fp);
  } else if (name == "laver1") {
    const FracParams fp = frac_or(params, laver1_params(n));
    if (std::abs(fp.alpha * fp.p - n) > 1e-12) throw ValidationError("laver1 needs alpha*p = n");
    add_frac(r, fp);
    r.metadata.emplace_back("mode", front_mode(ctx));
    r.tolerance = kQuadratureTolerance;
    r.paper_constant = std::pow(n, fp.alpha);
    r.lhs = garo_norm(ctx.front(), std::numeric_limits<double>::infinity());
    r.rhs = r.paper_constant * ctx.seminorm(fp);
  } else if (name == "obtenida") {
    const FracParams fp = frac_or(params, obtenida_params(n));
    if (fp.p != 1.0) throw ValidationError("obtenida needs p = 1");
    const double q = sobolev_exponent(fp, n);
    add_frac(r, fp);
    r.metadata.emplace_back("q", q);
    r.metadata.emplace_back("mode", front_mode(ctx));
    r.tolerance = kQuadratureTolerance;
    r.paper_constant = std::pow(n, (n + fp.alpha) / 2.0);
    r.lhs = garo_norm(ctx.front(), q);
    r.rhs = r.paper_constant * ctx.seminorm(fp);
  } else if (name == "tipica-membership") {
    const FracParams fp = frac_or(params, limite_params(n).front());
    add_frac(r, fp);
    r.metadata.emplace_back("mode", std::string("dyadic"));
    r.kind = CheckKind::membership;
    r.tolerance = kMembershipTolerance;
    r.paper_constant = witness_constant(n, fp);
    r.lhs = gamma_slack(ctx.tree(), ctx.witness(fp));
    r.rhs = 0.0;
  } else if (name == "brezis-wainger") {
    const FracParams fp = frac_or(params, laver1_params(n));
    const double N = n / fp.alpha;
    add_frac(r, fp);
    r.metadata.emplace_back("mode", std::string("dyadic"));
    r.tolerance = kQuadratureTolerance;
    r.paper_constant = witness_constant(n, fp);
    try {
      r.lhs = garoX_upper(ctx.tree(), ctx.witness(fp), BrezisWainger{N}, kMembershipTolerance);
    } catch (const ValidationError&) {
      r.lhs = kNaN;
      r.metadata.emplace_back("note", std::string("witness not admissible"));
    }
    r.rhs = ri_norm(rearr(ctx.field(fp)), Lorentz{N, N});
    report_only = true;
  } else if (name == "cz-kfunctional") {
    double worst = -1.0;
    double worst_t = kNaN;
    for (double t : {0.5, 0.25, 0.125, 0.0625, 0.03125}) {
      const CzKComparison cmp = cz_k_compare(g, t);
      if (cmp.ratio > worst) {
        worst = cmp.ratio;
        worst_t = t;
        r.lhs = cmp.k_cz;
        r.rhs = cmp.k_exact;
      }
    }
    r.metadata.emplace_back("t", worst_t);
    r.metadata.emplace_back("mode", std::string("dyadic"));
    report_only = true;
  } else {
    throw ValidationError("unknown check: " + name);
  }

  finish(r, report_only);
  return r;
}

InequalityReport run_check(const std::string& name, const GridFunction& g, const CheckParams& params) {
  CheckContext ctx(g, params.front);
  return run_check(name, ctx, params);
}

// --- suites -------------------------------------------------------------------------

bool SuiteResult::all_passed() const {
  return std::none_of(reports.begin(), reports.end(),
                      [](const InequalityReport& r) { return r.status == CheckStatus::fail; });
}

std::vector<CheckSummary> summarize(const std::vector<InequalityReport>& reports) {
  std::vector<CheckSummary> out;
  for (const std::string& name : check_names()) {
    CheckSummary s;
    s.name = name;
    std::vector<double> ratios;
    for (const InequalityReport& r : reports) {
      if (r.name != name) continue;
      ++s.count;
      if (r.status == CheckStatus::pass) ++s.passed;
      if (r.status == CheckStatus::fail) ++s.failed;
      if (r.status == CheckStatus::report_only) ++s.report_only;
      if (std::isfinite(r.empirical_ratio)) ratios.push_back(r.empirical_ratio);
    }
    if (s.count == 0) continue;
    if (!ratios.empty()) {
      s.worst_ratio = *std::max_element(ratios.begin(), ratios.end());
      s.mean_ratio = compensated_sum(ratios) / static_cast<double>(ratios.size());
      CompensatedSum var;
      for (double v : ratios) var.add((v - s.mean_ratio) * (v - s.mean_ratio));
      const double sd = std::sqrt(var.value() / static_cast<double>(ratios.size()));
      s.cv = s.mean_ratio != 0.0 ? sd / std::abs(s.mean_ratio) : 0.0;
    }
    out.push_back(std::move(s));
  }
  return out;
}

SuiteResult run_suite(const std::vector<CorpusEntry>& corpus, const SuiteOptions& options) {
  const std::vector<std::string>& selected = options.checks.empty() ? check_names() : options.checks;
  for (const std::string& name : selected) {
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
      throw ValidationError("unknown check: " + name);
    }
  }

  std::vector<std::vector<InequalityReport>> per_function(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const CorpusEntry& e = corpus[i];
      CheckContext ctx(generate(e.spec, e.dim, e.level));
      const bool sobolev_ok = ctx.function().size() <= options.max_sobolev_cells;
      auto& out = per_function[i];
      for (const std::string& name : check_names()) {
        if (std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
        if (is_sobolev_check(name) && !sobolev_ok) continue;
        CheckParams params;
        params.function_label = e.label;
        if (name == "delaintro" || name == "burka" || name == "belaprima" || name == "bela") {
          for (double p : options.p_values) {
            params.p = p;
            out.push_back(run_check(name, ctx, params));
          }
        } else if (name == "limite") {
          for (const FracParams& fp : limite_params(e.dim)) {
            params.frac = fp;
            out.push_back(run_check(name, ctx, params));
          }
        } else {
          out.push_back(run_check(name, ctx, params));
        }
      }
    }
  });

  SuiteResult result;
  for (auto& reports : per_function) {
    for (auto& r : reports) result.reports.push_back(std::move(r));
  }
  result.summary = summarize(result.reports);
  return result;
}

}  // namespace oscnorm

#include "oscnorm_cli/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>

#include "oscnorm/cubetree.hpp"
#include "oscnorm/error.hpp"
#include "oscnorm/fracsobolev.hpp"
#include "oscnorm/gridfn.hpp"
#include "oscnorm/oscnorms.hpp"
#include "oscnorm/rearrange.hpp"
#include "oscnorm/verify.hpp"
#include "oscnorm_cli/json_report.hpp"

namespace oscnorm::cli {

namespace {

using Json = nlohmann::ordered_json;

struct InputOptions {
  std::string input;
  std::string gen;
  int dim = 1;
  int level = 4;

  void attach(CLI::App& app) {
    app.add_option("--input,-i", input, "Grid function CSV file");
    app.add_option("--gen,-g", gen, "Generator spec, e.g. step01 or power:exponent=0.5");
    app.add_option("--dim", dim, "Dimension for --gen")->check(CLI::Range(1, 8));
    app.add_option("--level", level, "Grid level for --gen")->check(CLI::Range(0, kMaxGridExponent));
  }

  GridFunction load() const {
    if (input.empty() == gen.empty()) throw CLI::ValidationError("exactly one of --input or --gen is required");
    if (!input.empty()) return read_csv_file(input);
    return generate(parse_generator(gen), dim, level);
  }

  Json describe_source(const GridFunction& g) const {
    Json j;
    j["source"] = input.empty() ? "gen:" + oscnorm::describe(parse_generator(gen)) : "file:" + input;
    j["dim"] = g.dim();
    j["level"] = g.level();
    j["cells"] = g.size();
    return j;
  }
};

double parse_real(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ValidationError("malformed number: " + text);
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  const auto range = text.find("..");
  if (range != std::string::npos) {
    const int lo = std::stoi(text.substr(0, range));
    const int hi = std::stoi(text.substr(range + 2));
    if (hi < lo) throw ValidationError("empty range: " + text);
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  for (const std::string& item : split(text, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw ValidationError("empty list: " + text);
  return out;
}

Json maybe(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json norm_object(double value, const std::string& mode) {
  Json j;
  j["value"] = value;
  j["mode"] = mode;
  return j;
}

Json front_json(const ParetoFront& front) {
  Json points = Json::array();
  for (std::size_t i = 0; i < front.points.size(); ++i) {
    Json pt;
    pt["measure"] = front.points[i].measure;
    pt["osc"] = front.points[i].osc;
    if (i < front.witnesses.size()) {
      Json cubes = Json::array();
      for (const DyadicCube& q : front.witnesses[i].cubes) {
        Json c;
        c["level"] = q.level;
        c["index"] = q.index;
        cubes.push_back(c);
      }
      pt["cubes"] = std::move(cubes);
    }
    points.push_back(std::move(pt));
  }
  return points;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << text;
  if (!file) throw IoError("write failed: " + path);
}

const char* front_label(const ParetoFront& front) {
  return front.mode == FrontMode::exact_budget ? "dyadic/exact_budget" : "dyadic/lambda_sweep";
}

// --- subcommands ---------------------------------------------------------------

struct GenCommand {
  InputOptions in;
  std::string output;

  int run(std::ostream& out) const {
    if (!in.input.empty()) throw CLI::ValidationError("gen takes --gen, not --input");
    write_text(store_csv(in.load()), output, out);
    return kExitOk;
  }
};

struct NormsCommand {
  InputOptions in;
  double p = 2.0;
  std::optional<double> q;
  std::string lorentz;
  double bw = 2.0;
  std::string front_mode = "auto";
  int sweep_count = 64;
  bool witnesses = false;

  int run(std::ostream& out) const {
    const GridFunction g = in.load();
    if (!(p > 1.0) || std::isinf(p)) throw ValidationError("--p must be a finite value > 1");
    const double qv = q.value_or(p);
    Lorentz lz{p, p};
    if (!lorentz.empty()) {
      const auto parts = split(lorentz, ',');
      if (parts.size() != 2) throw ValidationError("--lorentz expects s,r");
      lz = {parse_real(parts[0]), parse_real(parts[1])};
    }
    validate(RiSpaceSpec{lz});
    validate(RiSpaceSpec{Lq{qv}});
    validate(RiSpaceSpec{BrezisWainger{bw}});

    const CubeStatsTree tree(g);
    FrontOptions fo;
    if (front_mode == "exact") fo.mode = FrontMode::exact_budget;
    else if (front_mode == "sweep") fo.mode = FrontMode::lambda_sweep;
    else if (front_mode != "auto") throw ValidationError("--front-mode must be auto, exact or sweep");
    fo.sweep_count = sweep_count;
    fo.witnesses = witnesses;
    const ParetoFront front = garo_front(tree, fo);
    const BmoNorms bmo = bmo_norm(tree);
    const StepFunction sf = rearr(g);

    Json norms;
    norms["jn"] = norm_object(jn_norm(tree, p), "dyadic");
    norms["jn"]["p"] = p;
    norms["garo"] = norm_object(garo_norm(front, p), front_label(front));
    norms["garo"]["p"] = p;
    norms["garo"]["front_points"] = front.points.size();
    if (witnesses) norms["garo"]["front"] = front_json(front);
    norms["bbm"] = norm_object(bbm_norm(tree, p), "dyadic");
    norms["bbm"]["p"] = p;
    norms["bmo_osc1"] = norm_object(bmo.osc1, "dyadic");
    norms["bmo_osc2"] = norm_object(bmo.osc2, "dyadic");
    norms["weak_lp"] = norm_object(ri_norm(sf, WeakLp{p}), "exact");
    norms["weak_lp"]["p"] = p;
    norms["lorentz"] = norm_object(ri_norm(sf, lz), std::isinf(lz.r) ? "exact" : "quadrature");
    norms["lorentz"]["s"] = lz.s;
    norms["lorentz"]["r"] = maybe(lz.r);
    norms["weak_linfty"] = norm_object(ri_norm(sf, WeakLinfty{}), "exact");
    norms["brezis_wainger"] = norm_object(ri_norm(sf, BrezisWainger{bw}), "exact");
    norms["brezis_wainger"]["exponent"] = bw;
    norms["l1"] = norm_object(sf.l1(), "exact");
    norms["lq"] = norm_object(ri_norm(sf, Lq{qv}), "exact");
    norms["lq"]["q"] = qv;

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["function"] = in.describe_source(g);
    j["norms"] = std::move(norms);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
};

struct SobolevCommand {
  InputOptions in;
  double alpha = 0.5;
  double p = 2.0;
  std::string y_space;
  std::string x_space;

  int run(std::ostream& out) const {
    const GridFunction g = in.load();
    const FracParams fp{alpha, p};
    validate(fp);
    const double q = sobolev_exponent(fp, g.dim());
    const RiSpaceSpec y = y_space.empty() ? RiSpaceSpec{Lq{p}} : parse_ri_space(y_space);
    RiSpaceSpec x = std::isinf(q) ? RiSpaceSpec{BrezisWainger{g.dim() / alpha}} : RiSpaceSpec{Lq{q}};
    if (!x_space.empty()) x = parse_ri_space(x_space);
    validate(y);
    validate(x);

    const GridFunction field = gagliardo_field(g, fp);
    const double seminorm = gagliardo_seminorm(g, fp);
    const GridFunction witness = sobolev_witness(g, fp);
    const CubeStatsTree tree(g);
    const double slack = gamma_slack(tree, witness);
    const bool admissible = slack <= kMembershipTolerance;

    Json stats;
    const auto cells = field.cells();
    stats["min"] = *std::min_element(cells.begin(), cells.end());
    stats["max"] = *std::max_element(cells.begin(), cells.end());
    stats["mean"] = mean(field);
    stats["l1"] = integral(abs(field));

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["function"] = in.describe_source(g);
    j["params"] = {{"alpha", alpha}, {"p", p}, {"q", maybe(q)}};
    j["gagliardo_field"] = std::move(stats);
    j["seminorm"] = seminorm;
    j["w_alpha_pY"] = {{"space", describe(y)}, {"value", ri_norm(rearr(field), y)}, {"mode", "exact"}};
    j["witness"] = {{"constant", witness_constant(g.dim(), fp)}, {"slack", slack}, {"admissible", admissible}};
    Json upper;
    upper["space"] = describe(x);
    upper["value"] = admissible ? Json(ri_norm(rearr(witness), x)) : Json(nullptr);
    upper["mode"] = "dyadic";
    j["garoX_upper"] = std::move(upper);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
};

struct VerifyCommand {
  std::uint64_t seed = 0;
  std::string dims = "1,2";
  std::string levels = "3..8";
  std::string checks;
  std::string p_values = "1.5,2,4";
  std::size_t max_sobolev_cells = 4096;
  std::string output;

  int run(std::ostream& out) const {
    CorpusSpec spec;
    spec.seed = seed;
    spec.dims = parse_int_list(dims);
    spec.levels = parse_int_list(levels);
    for (int d : spec.dims) {
      if (d < 1 || d > 3) throw ValidationError("--dims entries must lie in 1..3");
    }
    for (int l : spec.levels) {
      if (l < 0 || l > 12) throw ValidationError("--levels entries must lie in 0..12");
    }
    SuiteOptions options;
    options.checks = split(checks, ',');
    options.p_values.clear();
    for (const std::string& s : split(p_values, ',')) options.p_values.push_back(parse_real(s));
    options.max_sobolev_cells = max_sobolev_cells;

    const auto corpus = make_corpus(spec);
    const SuiteResult result = run_suite(corpus, options);
    const std::string text = suite_json(result, seed, corpus.size());
    write_text(text, output, out);
    if (!output.empty()) {
      for (const CheckSummary& s : result.summary) {
        out << s.name << ": " << s.passed << " pass, " << s.failed << " fail, " << s.report_only
            << " report-only, worst ratio " << format_double(s.worst_ratio) << "\n";
      }
    }
    return result.all_passed() ? kExitOk : kExitCheckFailed;
  }
};

struct OracleCommand {
  int dim = 1;
  int max_level = 3;
  std::size_t trials = 100;
  std::uint64_t seed = 0;

  int run(std::ostream& out) const {
    const OracleResult r = run_oracle(dim, max_level, trials, seed);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["dim"] = dim;
    j["max_level"] = max_level;
    j["trials"] = trials;
    j["seed"] = seed;
    j["tolerance"] = kOracleTolerance;
    Json stats = Json::object();
    for (const OracleStat& s : r.stats) {
      stats[s.name] = {{"comparisons", s.comparisons},
                       {"mismatches", s.mismatches},
                       {"max_rel_error", s.max_rel_error}};
    }
    j["checks"] = std::move(stats);
    j["passed"] = r.passed();
    out << j.dump(2) << "\n";
    return r.passed() ? kExitOk : kExitCheckFailed;
  }
};

struct RearrangeCommand {
  InputOptions in;
  std::string format = "csv";

  int run(std::ostream& out) const {
    const StepFunction sf = rearr(in.load());
    const auto t = sf.breakpoints();
    const auto v = sf.values();
    if (format == "csv") {
      out << "breakpoint,value\n";
      for (std::size_t k = 0; k < v.size(); ++k) out << format_double(t[k]) << "," << format_double(v[k]) << "\n";
      out << "1,0\n";
      return kExitOk;
    }
    Json steps = Json::array();
    for (std::size_t k = 0; k < v.size(); ++k) steps.push_back({{"start", t[k]}, {"end", t[k + 1]}, {"value", v[k]}});
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["steps"] = std::move(steps);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oscillation norms on dyadic grids and inequality checks", "oscnorm"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  GenCommand gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated grid function as CSV");
  gen.in.attach(*gen_cmd);
  gen_cmd->add_option("--output,-o", gen.output, "Output path (default stdout)");

  NormsCommand norms;
  auto* norms_cmd = app.add_subcommand("norms", "Compute oscillation and rearrangement-invariant norms");
  norms.in.attach(*norms_cmd);
  norms_cmd->add_option("--p", norms.p, "Exponent p in (1, inf)");
  norms_cmd->add_option("--q", norms.q, "Exponent for the L^q norm (default p)");
  norms_cmd->add_option("--lorentz", norms.lorentz, "Lorentz indices s,r (default p,p)");
  norms_cmd->add_option("--bw", norms.bw, "Brezis-Wainger exponent");
  norms_cmd->add_option("--front-mode", norms.front_mode, "auto, exact or sweep");
  norms_cmd->add_option("--sweep-count", norms.sweep_count, "Number of lambda values in sweep mode");
  norms_cmd->add_flag("--witnesses", norms.witnesses, "Include the Pareto front with witnessing cubes");

  SobolevCommand sob;
  auto* sob_cmd = app.add_subcommand("sobolev", "Fractional Sobolev seminorms and majorant witnesses");
  sob.in.attach(*sob_cmd);
  sob_cmd->add_option("--alpha", sob.alpha, "Smoothness alpha in (0, 1)");
  sob_cmd->add_option("--p", sob.p, "Integrability p in [1, inf)");
  sob_cmd->add_option("--y", sob.y_space, "Space Y for the field norm (default Lq:p)");
  sob_cmd->add_option("--x", sob.x_space, "Space X for the majorant bound (default Lq:q, or bw:n/alpha)");

  VerifyCommand ver;
  auto* ver_cmd = app.add_subcommand("verify", "Run the inequality suite on the seeded corpus");
  ver_cmd->add_option("--seed", ver.seed, "Corpus seed");
  ver_cmd->add_option("--dims", ver.dims, "Dimensions, e.g. 1,2");
  ver_cmd->add_option("--levels", ver.levels, "Levels, e.g. 3..6 or 3,5");
  ver_cmd->add_option("--checks", ver.checks, "Comma-separated check names (default all)");
  ver_cmd->add_option("--p-values", ver.p_values, "Exponents for the p-dependent checks");
  ver_cmd->add_option("--max-sobolev-cells", ver.max_sobolev_cells, "Largest grid for Sobolev checks");
  ver_cmd->add_option("--output,-o", ver.output, "Report path (default stdout)");

  OracleCommand orc;
  auto* orc_cmd = app.add_subcommand("oracle", "Cross-check the tree recursions by exhaustive enumeration");
  orc_cmd->add_option("--dim", orc.dim, "Dimension")->check(CLI::Range(1, 2));
  orc_cmd->add_option("--max-level", orc.max_level, "Largest level")->check(CLI::Range(0, 3));
  orc_cmd->add_option("--trials", orc.trials, "Number of random functions");
  orc_cmd->add_option("--seed", orc.seed, "Seed");

  RearrangeCommand rea;
  auto* rea_cmd = app.add_subcommand("rearrange", "Print the decreasing rearrangement as steps");
  rea.in.attach(*rea_cmd);
  rea_cmd->add_option("--format", rea.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
    if (gen_cmd->parsed()) return gen.run(out);
    if (norms_cmd->parsed()) return norms.run(out);
    if (sob_cmd->parsed()) return sob.run(out);
    if (ver_cmd->parsed()) return ver.run(out);
    if (orc_cmd->parsed()) return orc.run(out);
    if (rea_cmd->parsed()) return rea.run(out);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "file error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("oscnorm");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace oscnorm::cli

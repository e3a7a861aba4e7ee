#include "oscnorm_cli/json_report.hpp"

#include <json.hpp>

namespace oscnorm::cli {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const InequalityReport& r) {
  Json meta = Json::object();
  for (const auto& [key, value] : r.metadata) {
    std::visit([&, k = key](const auto& v) { meta[k] = v; }, value);
  }
  Json j;
  j["name"] = r.name;
  j["kind"] = to_string(r.kind);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["paper_constant"] = r.paper_constant;
  j["empirical_ratio"] = r.empirical_ratio;
  j["tolerance"] = r.tolerance;
  j["status"] = to_string(r.status);
  j["metadata"] = std::move(meta);
  return j;
}

Json to_json(const CheckSummary& s) {
  Json j;
  j["name"] = s.name;
  j["count"] = s.count;
  j["passed"] = s.passed;
  j["failed"] = s.failed;
  j["report_only"] = s.report_only;
  j["worst_ratio"] = s.worst_ratio;
  j["mean_ratio"] = s.mean_ratio;
  j["cv"] = s.cv;
  return j;
}

}  // namespace

std::string suite_json(const SuiteResult& result, std::uint64_t seed, std::size_t corpus_size) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = seed;
  j["corpus_size"] = corpus_size;
  j["all_passed"] = result.all_passed();
  Json reports = Json::array();
  for (const auto& r : result.reports) reports.push_back(to_json(r));
  j["reports"] = std::move(reports);
  Json summary = Json::array();
  for (const auto& s : result.summary) summary.push_back(to_json(s));
  j["summary"] = std::move(summary);
  return j.dump(2) + "\n";
}

std::string report_json(const InequalityReport& report) { return to_json(report).dump(2) + "\n"; }

}  // namespace oscnorm::cli

#pragma once

#include <string>
#include <vector>

#include "oscnorm/verify.hpp"

namespace oscnorm::cli {

inline constexpr int kSchemaVersion = 1;

// {"schema_version": 1, "seed": ..., "corpus_size": ..., "reports": [...],
//  "summary": [...]}, two-space indented.
std::string suite_json(const SuiteResult& result, std::uint64_t seed, std::size_t corpus_size);
std::string report_json(const InequalityReport& report);

}  // namespace oscnorm::cli

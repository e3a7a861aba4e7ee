#include <string>

#include "oscnorm/verify.hpp"

namespace oscnorm {

std::vector<CorpusEntry> make_corpus(const CorpusSpec& spec) {
  std::vector<CorpusEntry> out;
  for (int dim : spec.dims) {
    for (int level : spec.levels) {
      const std::uint64_t base = spec.seed * 1000003u + static_cast<std::uint64_t>(dim) * 1009u +
                                 static_cast<std::uint64_t>(level) * 31u;
      const std::vector<GeneratorSpec> specs{
          ConstantGen{3.0},
          IndicatorGen{{0.25}, {0.75}, 2.0},
          StepGen{1.0 / 3.0, -1.0, 2.0, 0},
          PowerGen{{0.0}, 0.4 * dim, 8},
          LogSingularityGen{{0.5}, 8},
          CheckerboardGen{3.0},
          RandomGen{base + 1, RandomDistribution::uniform},
          RandomGen{base + 2, RandomDistribution::normal},
          RandomGen{base + 3, RandomDistribution::cascade},
          RandomGen{base + 4, RandomDistribution::haar},
      };
      for (const GeneratorSpec& g : specs) {
        out.push_back({describe(g), g, dim, level});
      }
    }
  }
  return out;
}

}  // namespace oscnorm

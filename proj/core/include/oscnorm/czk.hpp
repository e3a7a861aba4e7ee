#pragma once

#include <vector>

#include "oscnorm/cubetree.hpp"
#include "oscnorm/gridfn.hpp"

namespace oscnorm {

/// Dyadic Calderón-Zygmund decomposition f = good + bad at height λ.
struct CzDecomposition {
  double lambda = 0.0;
  /// Maximal dyadic cubes with (1/|Q|)∫_Q |f| > λ.
  std::vector<DyadicCube> stopping_cubes;
  double stopping_measure = 0.0;
  GridFunction good;  ///< f off the stopping cubes, f_Q on each of them
  GridFunction bad;   ///< f - f_Q on each stopping cube, 0 elsewhere
};

/// Top-down stopping time on averages of |f|; the split acts on signed f.
/// Q_0 is the single stopping cube when mean|f| > λ.
CzDecomposition cz_decompose(const GridFunction& g, double lambda);

struct CzKComparison {
  double t = 0.0;
  double lambda = 0.0;  ///< max(f*(t), mean|f|)
  double k_exact = 0.0;  ///< ∫_0^t f*
  double k_cz = 0.0;     ///< ‖bad‖₁ + t‖good‖∞
  double ratio = 0.0;    ///< k_cz / k_exact; 1 when both vanish
};

CzKComparison cz_k_compare(const GridFunction& g, double t);

}  // namespace oscnorm

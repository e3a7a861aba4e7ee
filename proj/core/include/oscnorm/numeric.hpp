#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace oscnorm {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> values);

// Recursive halving. For power-of-two lengths, an array in which every value
// is repeated 2^k times in aligned groups sums to exactly 2^k times the sum of
// the undoubled array.
double pairwise_sum(std::span<const double> values);

/// Number of worker threads used by the parallel kernels. Reads
/// OSCNORM_THREADS once; defaults to the hardware concurrency.
unsigned worker_count();

/// Runs body(begin, end) over a partition of [0, n) on up to worker_count()
/// threads. Chunks are disjoint; body must only write to its own range.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace oscnorm

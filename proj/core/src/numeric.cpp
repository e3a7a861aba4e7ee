#include "oscnorm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace oscnorm {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

double pairwise_sum(std::span<const double> values) {
  switch (values.size()) {
    case 0:
      return 0.0;
    case 1:
      return values[0];
    case 2:
      return values[0] + values[1];
    default: {
      const std::size_t half = values.size() / 2;
      return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
    }
  }
}

unsigned worker_count() {
  static const unsigned count = [] {
    if (const char* env = std::getenv("OSCNORM_THREADS")) {
      try {
        const long v = std::stol(env);
        if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
      } catch (...) {
      }
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }();
  return count;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(n, chunk));
}

}  // namespace oscnorm

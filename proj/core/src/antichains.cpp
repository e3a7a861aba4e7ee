#include <limits>
#include <sstream>

#include "oscnorm/error.hpp"
#include "oscnorm/oscnorms.hpp"

namespace oscnorm {

namespace {

void check_size(const CubeStatsTree& tree) {
  if (tree.node_count() > kBruteForceCubeLimit) {
    std::ostringstream msg;
    msg << "tree too large for exhaustive enumeration: " << tree.node_count() << " cubes (limit "
        << kBruteForceCubeLimit << ")";
    throw ValidationError(msg.str());
  }
}

// Each pending cube is either taken whole or replaced by its children.
void enumerate(const CubeStatsTree& tree, std::vector<CubeRef>& pending, std::vector<CubeRef>& family,
               const std::function<void(std::span<const CubeRef>)>& visit) {
  if (pending.empty()) {
    visit(family);
    return;
  }
  const CubeRef q = pending.back();
  pending.pop_back();

  family.push_back(q);
  enumerate(tree, pending, family, visit);
  family.pop_back();

  const std::size_t mark = pending.size();
  if (q.level < tree.level()) {
    for (std::size_t b = tree.arity(); b-- > 0;) {
      pending.push_back({q.level + 1, q.morton * tree.arity() + b});
    }
  }
  enumerate(tree, pending, family, visit);
  pending.resize(mark);
  pending.push_back(q);
}

}  // namespace

void for_each_antichain(const CubeStatsTree& tree,
                        const std::function<void(std::span<const CubeRef>)>& visit) {
  check_size(tree);
  std::vector<CubeRef> pending{{0, 0}};
  std::vector<CubeRef> family;
  enumerate(tree, pending, family, visit);
}

std::size_t count_antichains(const CubeStatsTree& tree) {
  check_size(tree);
  std::size_t a = 2;
  for (int j = tree.level() - 1; j >= 0; --j) {
    std::size_t prod = 1;
    for (std::size_t b = 0; b < tree.arity(); ++b) prod *= a;
    a = prod + 1;
  }
  return a - 1;
}

FamilySelection brute_force_families(
    const CubeStatsTree& tree,
    const std::function<double(const CubeStatsTree&, std::span<const CubeRef>)>& objective) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<CubeRef> arg;
  for_each_antichain(tree, [&](std::span<const CubeRef> family) {
    if (family.empty()) return;
    const double v = objective(tree, family);
    if (v > best) {
      best = v;
      arg.assign(family.begin(), family.end());
    }
  });
  return make_selection(tree, arg, best);
}

}  // namespace oscnorm

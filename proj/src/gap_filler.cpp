#include "chainbal/gap_filler.hpp"

#include <algorithm>
#include <cstdlib>

namespace chainbal {

namespace {

std::vector<int> greedy_core(const BalancedColoring& f, int h0,
                             std::span<const int> elements) {
  // Ascending element lists per sign; the greedy always pops a head.
  std::vector<int> plus, minus;
  for (int x : elements) (f.at(x) > 0 ? plus : minus).push_back(x);
  std::sort(plus.begin(), plus.end());
  std::sort(minus.begin(), minus.end());

  const int h_end = h0 + static_cast<int>(plus.size()) - static_cast<int>(minus.size());
  std::vector<int> order;
  order.reserve(elements.size());
  std::size_t pi = 0, mi = 0;
  int h = h0;
  while (pi < plus.size() || mi < minus.size()) {
    const long long remaining =
        static_cast<long long>(plus.size() - pi) + static_cast<long long>(minus.size() - mi);
    const int sigma = h_end - h;  // label sum of what is still unplaced
    // (remaining - sigma)/2 minus-elements and (remaining + sigma)/2
    // plus-elements must be left; cross-check against the actual lists.
    if ((remaining - sigma) % 2 != 0 ||
        static_cast<long long>(minus.size() - mi) != (remaining - sigma) / 2)
      throw state_error("gap ordering count identity violated");
    int x;
    if (h == 1) {
      if (mi >= minus.size())
        throw state_error("gap ordering needs a minus element but none remain");
      x = minus[mi++];
    } else if (h == -1) {
      if (pi >= plus.size())
        throw state_error("gap ordering needs a plus element but none remain");
      x = plus[pi++];
    } else if (h == 0) {
      // Smallest index overall.
      if (pi < plus.size() && (mi >= minus.size() || plus[pi] < minus[mi]))
        x = plus[pi++];
      else
        x = minus[mi++];
    } else {
      throw state_error("gap ordering left the balanced band");
    }
    h += f.at(x);
    order.push_back(x);
  }
  if (h != h_end) throw state_error("gap ordering endpoint mismatch");
  return order;
}

}  // namespace

std::vector<int> greedy_order_span(const BalancedColoring& f, int h0,
                                   std::span<const int> elements) {
  if (std::abs(h0) > 1) throw domain_error("gap base imbalance must be within 1");
  long long sum = h0;
  for (int x : elements) sum += f.at(x);
  if (std::abs(sum) > 1) throw domain_error("gap endpoint imbalance must be within 1");
  return greedy_core(f, h0, elements);
}

std::vector<int> greedy_order(const GapInstance& inst) {
  if (inst.f == nullptr) throw domain_error("gap instance without coloring");
  if ((inst.base & inst.block) != 0)
    throw domain_error("gap base and block must be disjoint");
  const int h0 = imbalance(*inst.f, inst.base);
  if (std::abs(h0) > 1) throw domain_error("gap base imbalance must be within 1");
  if (std::abs(imbalance(*inst.f, inst.base | inst.block)) > 1)
    throw domain_error("gap endpoint imbalance must be within 1");
  std::vector<int> elements;
  for (Mask m = inst.block; m != 0; m &= m - 1) elements.push_back(__builtin_ctz(m));
  return greedy_core(*inst.f, h0, elements);
}

namespace {

bool oracle_dfs(const BalancedColoring& f, int h, Mask remaining,
                std::vector<int>& order) {
  if (remaining == 0) return true;
  for (Mask m = remaining; m != 0; m &= m - 1) {
    const int x = __builtin_ctz(m);
    const int h2 = h + f.at(x);
    if (std::abs(h2) > 1) continue;
    order.push_back(x);
    if (oracle_dfs(f, h2, remaining ^ (Mask{1} << x), order)) return true;
    order.pop_back();
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> exhaustive_order_oracle(const GapInstance& inst) {
  if (inst.f == nullptr) throw domain_error("gap instance without coloring");
  if ((inst.base & inst.block) != 0)
    throw domain_error("gap base and block must be disjoint");
  if (popcount(inst.block) > kMaxOracleBlock)
    throw capacity_error("ordering oracle capped at blocks of 12");
  std::vector<int> order;
  if (oracle_dfs(*inst.f, imbalance(*inst.f, inst.base), inst.block, order))
    return order;
  return std::nullopt;
}

}  // namespace chainbal

#include "chainbal/local_patterns.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_set>

#include "chainbal/errors.hpp"

namespace chainbal {

Mask segment_mask(const Segment& seg) {
  if (seg.end() > 32) throw capacity_error("mask form requires elements < 32");
  Mask m = 0;
  for (int i = seg.start; i < seg.end(); ++i) m |= Mask{1} << i;
  return m;
}

Mask LocalPattern::mask() const {
  Mask m = gap_subset;
  for (int i = 0; i < from.a; ++i) m |= Mask{1} << seg.left_elem(i);
  for (int i = 0; i < from.b; ++i) m |= Mask{1} << seg.right_elem(i);
  return m;
}

BigUint local_pattern_count(const Segment& seg, const ConstantsProfile& p) {
  const std::int64_t ml = seg.left_size(), mr = seg.right_size();
  if (seg.len < 1) throw domain_error("pattern count needs a nonempty segment");
  const std::int64_t budget =
      std::min(pattern_budget_floor(p, seg.len), ml + mr);
  BigUint total;
  for (std::int64_t g = 0; g <= budget; ++g) {
    // Number of (start, end) pairs with travel exactly g, weighted by the
    // 2^g subsets of the gap region: starts with da on the left admit
    // (ml - da + 1)(mr - db + 1) grid anchors.
    unsigned __int128 cg = 0;
    for (std::int64_t da = std::max<std::int64_t>(0, g - mr);
         da <= std::min(g, ml); ++da) {
      const std::int64_t db = g - da;
      cg += static_cast<unsigned __int128>(ml - da + 1) *
            static_cast<unsigned __int128>(mr - db + 1);
    }
    BigUint term(static_cast<std::uint64_t>(cg >> 64));
    term <<= 64;
    term += BigUint(static_cast<std::uint64_t>(cg));
    term <<= static_cast<std::uint64_t>(g);
    total += term;
  }
  return total;
}

std::optional<LocalPattern> local_membership(Mask A, const Segment& seg,
                                             const ConstantsProfile& p) {
  if ((A & ~segment_mask(seg)) != 0)
    throw dimension_error("set reaches outside the segment");
  LocalPattern w;
  w.seg = seg;
  auto peel = [](const std::vector<bool>& occ) {
    int solid = 0;
    while (solid < static_cast<int>(occ.size()) && occ[solid]) ++solid;
    int furthest = solid;
    for (int i = solid; i < static_cast<int>(occ.size()); ++i)
      if (occ[i]) furthest = i + 1;
    return std::pair<int, int>(solid, furthest);
  };
  std::vector<bool> left(seg.left_size()), right(seg.right_size());
  for (int i = 0; i < seg.left_size(); ++i)
    left[i] = (A >> seg.left_elem(i)) & 1;
  for (int i = 0; i < seg.right_size(); ++i)
    right[i] = (A >> seg.right_elem(i)) & 1;
  std::tie(w.from.a, w.to.a) = peel(left);
  std::tie(w.from.b, w.to.b) = peel(right);
  if (static_cast<double>(w.travel()) > pattern_budget(p, seg.len))
    return std::nullopt;
  w.gap_subset = A;
  for (int i = 0; i < w.from.a; ++i) w.gap_subset &= ~(Mask{1} << seg.left_elem(i));
  for (int i = 0; i < w.from.b; ++i) w.gap_subset &= ~(Mask{1} << seg.right_elem(i));
  return w;
}

std::vector<Mask> local_pattern_masks(const Segment& seg, const ConstantsProfile& p,
                                      std::uint64_t work_cap) {
  segment_mask(seg);  // range check
  const int ml = seg.left_size(), mr = seg.right_size();
  const std::int64_t budget = std::min<std::int64_t>(pattern_budget_floor(p, std::max(seg.len, 1)),
                                                     ml + mr);
  std::unordered_set<Mask> out;
  std::uint64_t work = 0;
  for (int a = 0; a <= ml; ++a) {
    for (int b = 0; b <= mr; ++b) {
      Mask prefix = 0;
      for (int i = 0; i < a; ++i) prefix |= Mask{1} << seg.left_elem(i);
      for (int i = 0; i < b; ++i) prefix |= Mask{1} << seg.right_elem(i);
      for (int a2 = a; a2 <= ml; ++a2) {
        if (a2 - a > budget) break;
        for (int b2 = b; b2 <= mr; ++b2) {
          if ((a2 - a) + (b2 - b) > budget) break;
          Mask region = 0;
          for (int i = a; i < a2; ++i) region |= Mask{1} << seg.left_elem(i);
          for (int i = b; i < b2; ++i) region |= Mask{1} << seg.right_elem(i);
          // All subsets of the region, including empty.
          Mask t = region;
          for (;;) {
            if (++work > work_cap)
              throw capacity_error("pattern enumeration exceeded work cap");
            out.insert(prefix | t);
            if (t == 0) break;
            t = (t - 1) & region;
          }
        }
      }
    }
  }
  std::vector<Mask> v(out.begin(), out.end());
  std::sort(v.begin(), v.end());
  return v;
}

namespace {

struct CompositeContext {
  const ConstantsProfile* profile;
  int max_depth;
  std::uint64_t work = 0;
  std::uint64_t work_cap = 0;
  std::int64_t ground = 0;
  std::map<std::tuple<int, int, int>, std::vector<Mask>> memo;

  void charge() {
    if (++work > work_cap)
      throw capacity_error("composite enumeration exceeded work cap; analytic bound " +
                           composite_count_bound(ground, *profile).decimal());
  }

  const std::vector<Mask>& masks(const Segment& seg, int depth_left) {
    auto key = std::make_tuple(seg.start, seg.len, depth_left);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    std::unordered_set<Mask> out;
    std::vector<Mask> local = local_pattern_masks(seg, *profile);
    for (Mask m : local) {
      charge();
      out.insert(m);
    }
    if (depth_left > 0 && seg.len >= 1) {
      for (int len = 1; len <= seg.len; ++len) {
        if (!shrinkage_ok(len, seg.len)) continue;
        for (int start = seg.start; start + len <= seg.end(); ++start) {
          const Segment sub{start, len};
          const Mask sub_mask = segment_mask(sub);
          const std::vector<Mask>& inner = masks(sub, depth_left - 1);
          for (Mask L : local) {
            if ((L & sub_mask) != 0) continue;
            for (Mask s : inner) {
              charge();
              out.insert(L | s);
            }
          }
        }
      }
    }
    std::vector<Mask> v(out.begin(), out.end());
    std::sort(v.begin(), v.end());
    return memo.emplace(key, std::move(v)).first->second;
  }
};

}  // namespace

SetSystem enumerate_composites(int n, const ConstantsProfile& p,
                               std::uint64_t work_cap) {
  if (n < 1 || n > 16)
    throw capacity_error("composite enumeration capped at n <= 16; analytic bound " +
                         composite_count_bound(n, p).decimal());
  CompositeContext ctx;
  ctx.profile = &p;
  ctx.max_depth = depth_limit(n, p);
  ctx.work_cap = work_cap;
  ctx.ground = n;
  std::vector<Mask> all = ctx.masks(Segment{0, n}, ctx.max_depth);
  return SetSystem(n, std::move(all));
}

namespace {

bool composite_search(Mask x, const Segment& seg, int depth_used, int max_depth,
                      const ConstantsProfile& p, std::vector<Segment>& stack) {
  if (local_membership(x, seg, p).has_value()) return true;
  if (depth_used >= max_depth) return false;
  for (int len = 1; len <= seg.len; ++len) {
    if (!shrinkage_ok(len, seg.len)) continue;
    for (int start = seg.start; start + len <= seg.end(); ++start) {
      const Segment sub{start, len};
      const Mask sub_mask = segment_mask(sub);
      const Mask L = x & ~sub_mask;
      if (!local_membership(L, seg, p).has_value()) continue;
      if (composite_search(x & sub_mask, sub, depth_used + 1, max_depth, p, stack)) {
        stack.push_back(sub);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

std::optional<CompositeWitness> composite_membership(Mask x, int n,
                                                     const ConstantsProfile& p) {
  if (n < 1 || n > 32) throw capacity_error("composite membership requires n <= 32");
  const Segment root{0, n};
  if ((x & ~segment_mask(root)) != 0)
    throw dimension_error("set reaches outside the ground segment");
  std::vector<Segment> stack;
  if (!composite_search(x, root, 0, depth_limit(n, p), p, stack)) return std::nullopt;
  CompositeWitness w;
  w.segments.push_back(root);
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) w.segments.push_back(*it);
  return w;
}

BigUint composite_count_bound(std::int64_t n, const ConstantsProfile& p) {
  if (n < 1) throw domain_error("ground size must be >= 1");
  const int jmax = depth_limit(n, p);
  BigUint b = BigUint::pow(static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(6 + 3 * p.pattern_exponent()));
  b.mul_small(static_cast<std::uint64_t>(jmax + 1));
  return b;
}

}  // namespace chainbal

#include "chainbal/builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <span>

#include "chainbal/birth_death.hpp"
#include "chainbal/errors.hpp"
#include "chainbal/gap_filler.hpp"

namespace chainbal {

const char* to_string(FailureReason r) {
  switch (r) {
    case FailureReason::none: return "none";
    case FailureReason::height: return "height";
    case FailureReason::gap: return "gap";
    case FailureReason::deviation: return "deviation";
    case FailureReason::shrinkage: return "shrinkage";
    case FailureReason::residual_slack: return "residual_slack";
    case FailureReason::descent: return "descent";
    case FailureReason::depth: return "depth";
    case FailureReason::invariant: return "invariant";
  }
  return "unknown";
}

namespace {

double log_clamped(std::int64_t m) {
  return std::log(static_cast<double>(std::max<std::int64_t>(m, 1)));
}

void append_block(MaximalChain& chain, const BalancedColoring& f, int h_from,
                  std::span<const int> block) {
  std::vector<int> ordered = greedy_order_span(f, h_from, block);
  chain.order.insert(chain.order.end(), ordered.begin(), ordered.end());
}

}  // namespace

BuilderTrace build_chain(const BalancedColoring& f, const ConstantsProfile& profile,
                         Rng& rng) {
  profile.validate();
  const int n = f.n();
  BuilderTrace out;
  out.n = n;
  out.hypotheses_ok = check_hypotheses(profile, n).ok;

  const int jmax = depth_limit(n, profile);
  RngCoin coins(rng);

  Segment seg{0, n};
  int h_in = 0;
  std::vector<int> pending_tail;  // tail of the previous scale, not yet ordered
  int pending_anchor_h = 0;       // imbalance at the anchor it grows from

  auto fail = [&](ScaleRecord rec, FailureReason r, int scale) {
    out.scales.push_back(std::move(rec));
    out.reason = r;
    out.failure_scale = scale;
    return out;
  };

  for (int j = 0;; ++j) {
    if (j > jmax + 1)
      throw state_error("scale recursion ran past the depth audit");
    ScaleRecord rec;
    rec.seg = seg;
    rec.h_in = h_in;
    rec.path = run_segment(seg, GridPosition{0, 0}, h_in, seg.len, f, coins);
    const SteeredTrace& tr = rec.path;
    const std::int64_t T = static_cast<std::int64_t>(tr.steps.size());

    // Grid position before each step and the element each step consumed.
    std::vector<GridPosition> grid(static_cast<std::size_t>(T) + 1);
    std::vector<int> consumed(static_cast<std::size_t>(T));
    {
      GridPosition pos{0, 0};
      for (std::int64_t t = 0; t < T; ++t) {
        grid[static_cast<std::size_t>(t)] = pos;
        consumed[static_cast<std::size_t>(t)] = tr.element_consumed(t + 1, pos);
        (tr.steps[static_cast<std::size_t>(t)].block == 0) ? ++pos.a : ++pos.b;
      }
      grid[static_cast<std::size_t>(T)] = pos;
    }

    const auto& visits = tr.balanced_visits;
    if (visits.empty()) return fail(std::move(rec), FailureReason::descent, j);
    rec.descent_len = visits.front();
    if (j == 0 && rec.descent_len != 0)
      throw state_error("root scale must start balanced");
    if (rec.descent_len >
        static_cast<std::int64_t>(profile.descent_coeff) * std::abs(h_in))
      return fail(std::move(rec), FailureReason::descent, j);

    rec.start_grid = grid[static_cast<std::size_t>(rec.descent_len)];
    rec.effective_size = seg.len - rec.start_grid.a - rec.start_grid.b;
    if (j > 0 && 2 * rec.effective_size < profile.base_threshold)
      return fail(std::move(rec), FailureReason::invariant, j);

    rec.height_bound = 1.0 + profile.height_coeff * log_clamped(rec.effective_size);
    rec.gap_bound = profile.gap_coeff * log_clamped(rec.effective_size);
    rec.residual_bound =
        deviation_bound(std::max<std::int64_t>(rec.effective_size, 1));

    for (std::int64_t t = rec.descent_len; t <= T; ++t)
      rec.max_height =
          std::max<std::int64_t>(rec.max_height, std::abs(tr.imbalance_at(t)));
    if (static_cast<double>(rec.max_height) > rec.height_bound)
      return fail(std::move(rec), FailureReason::height, j);

    for (std::size_t i = 1; i < visits.size(); ++i)
      rec.max_gap = std::max(rec.max_gap, visits[i] - visits[i - 1]);
    rec.tail_len = T - visits.back();
    rec.max_gap = std::max(rec.max_gap, rec.tail_len);
    if (static_cast<double>(rec.max_gap) > rec.gap_bound)
      return fail(std::move(rec), FailureReason::gap, j);

    rec.exhaust_grid = grid[static_cast<std::size_t>(T)];
    rec.h_out = tr.h_end;
    rec.residual = residual_of(tr);
    const std::int64_t m_next = rec.residual.len;
    if (static_cast<double>(m_next) > rec.residual_bound)
      return fail(std::move(rec), FailureReason::deviation, j);

    const bool base = m_next < profile.base_threshold;
    if (!base) {
      if (j + 1 > jmax) return fail(std::move(rec), FailureReason::depth, j);
      if (!shrinkage_ok(m_next, seg.len))
        return fail(std::move(rec), FailureReason::shrinkage, j);
      const auto cube = static_cast<unsigned __int128>(m_next) *
                        static_cast<unsigned __int128>(m_next) *
                        static_cast<unsigned __int128>(m_next);
      const auto square = static_cast<unsigned __int128>(rec.effective_size) *
                          static_cast<unsigned __int128>(rec.effective_size);
      if (8 * cube < square)
        return fail(std::move(rec), FailureReason::residual_slack, j);
    }

    // All audits passed: order this scale's blocks into the chain.
    for (auto v : visits)
      rec.anchor_grids.push_back(grid[static_cast<std::size_t>(v)]);

    std::vector<int> transition = std::move(pending_tail);
    pending_tail.clear();
    transition.insert(transition.end(), consumed.begin(),
                      consumed.begin() + rec.descent_len);
    append_block(out.chain, f, pending_anchor_h, transition);
    rec.anchor_levels.push_back(static_cast<std::int64_t>(out.chain.order.size()));

    for (std::size_t i = 1; i < visits.size(); ++i) {
      append_block(out.chain, f, tr.imbalance_at(visits[i - 1]),
                   std::span<const int>(consumed).subspan(
                       static_cast<std::size_t>(visits[i - 1]),
                       static_cast<std::size_t>(visits[i] - visits[i - 1])));
      rec.anchor_levels.push_back(static_cast<std::int64_t>(out.chain.order.size()));
    }

    if (base) {
      rec.base_case = true;
      std::vector<int> final_block(consumed.begin() + visits.back(), consumed.end());
      for (int e = rec.residual.start; e < rec.residual.end(); ++e)
        final_block.push_back(e);
      append_block(out.chain, f, tr.imbalance_at(visits.back()), final_block);
      out.scales.push_back(std::move(rec));
      break;
    }

    pending_tail.assign(consumed.begin() + visits.back(), consumed.end());
    pending_anchor_h = tr.imbalance_at(visits.back());
    seg = rec.residual;
    h_in = tr.h_end;
    out.scales.push_back(std::move(rec));
  }

  if (static_cast<int>(out.chain.order.size()) != n)
    throw state_error("completed chain does not cover the ground set");
  int h = 0;
  for (int e : out.chain.order) {
    h += f.at(e);
    if (std::abs(h) > 1)
      throw state_error("completed chain left the balanced band");
  }
  out.success = true;
  return out;
}

namespace {

// Contiguous slice of one half of a segment, tracked while consuming a block.
struct Region {
  int base = 0;  // global id of the half's first element
  int lo = 0, hi = 0;
  int count = 0;

  bool contains(int e) const { return e >= base + lo && e < base + hi; }
  int size() const { return hi - lo; }
};

Region left_region(const Segment& seg, int lo, int hi) {
  return Region{seg.start, lo, hi};
}
Region right_region(const Segment& seg, int lo, int hi) {
  return Region{seg.split(), lo, hi};
}

}  // namespace

Verdict verify_trace(const BuilderTrace& trace, const BalancedColoring& f,
                     const ConstantsProfile& profile) {
  auto fail = [](std::string why) { return Verdict{false, std::move(why)}; };
  const int n = f.n();
  if (trace.n != n) return fail("ground size mismatch");
  const auto& order = trace.chain.order;
  if (static_cast<int>(order.size()) != n) return fail("chain not maximal");
  {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int e : order) {
      if (e < 0 || e >= n) return fail("chain element out of range");
      if (seen[static_cast<std::size_t>(e)]) return fail("chain repeats an element");
      seen[static_cast<std::size_t>(e)] = 1;
    }
    int h = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      h += f.at(order[i]);
      if (std::abs(h) > 1)
        return fail("prefix imbalance exceeds 1 at level " + std::to_string(i + 1));
    }
  }

  const auto& scales = trace.scales;
  if (scales.empty()) return fail("no scale records");
  if (static_cast<int>(scales.size()) - 1 > depth_limit(n, profile))
    return fail("nesting depth exceeds limit");
  if (scales[0].seg.start != 0 || scales[0].seg.len != n)
    return fail("root segment is not the ground set");

  // Per-scale structural claims that do not need the level walk.
  for (std::size_t j = 0; j < scales.size(); ++j) {
    const ScaleRecord& r = scales[j];
    if (r.anchor_grids.size() != r.anchor_levels.size() || r.anchor_grids.empty())
      return fail("scale lacks anchors");
    if (!(r.anchor_grids.front() == r.start_grid))
      return fail("start grid disagrees with the first anchor");
    const int mL = r.seg.left_size(), mR = r.seg.right_size();
    GridPosition prev{0, 0};
    for (GridPosition g : r.anchor_grids) {
      if (g.a < prev.a || g.b < prev.b) return fail("anchor grids not monotone");
      prev = g;
    }
    if (r.exhaust_grid.a < prev.a || r.exhaust_grid.b < prev.b ||
        r.exhaust_grid.a > mL || r.exhaust_grid.b > mR)
      return fail("exhaustion grid out of order");
    if (r.exhaust_grid.a != mL && r.exhaust_grid.b != mR)
      return fail("no half is exhausted at the recorded grid");
    Segment expect = r.exhaust_grid.a == mL
                         ? Segment{r.seg.split() + r.exhaust_grid.b,
                                   mR - r.exhaust_grid.b}
                         : Segment{r.seg.start + r.exhaust_grid.a,
                                   mL - r.exhaust_grid.a};
    if (expect.start != r.residual.start || expect.len != r.residual.len)
      return fail("recorded residual disagrees with the exhaustion grid");
    const bool last = j + 1 == scales.size();
    if (r.base_case != last)
      return fail(last ? "trace ends without the base case"
                       : "base case before the last scale");
    if (!last) {
      const ScaleRecord& next = scales[j + 1];
      if (next.seg.start != r.residual.start || next.seg.len != r.residual.len)
        return fail("segment does not match the parent residual");
      if (!shrinkage_ok(next.seg.len, r.seg.len))
        return fail("segment shrinkage violated");
    }
  }

  // Level walk: every chain level must sit inside its block's regions, and
  // every block must fill its regions exactly (so anchors are solid prefix
  // pairs and the terminal pattern of each level is within budget).
  std::int64_t level = 0;
  auto consume_block = [&](std::int64_t to_level,
                           std::vector<Region> regions) -> const char* {
    if (to_level < level || to_level > n) return "block boundaries not increasing";
    for (; level < to_level; ++level) {
      const int e = order[static_cast<std::size_t>(level)];
      bool placed = false;
      for (Region& rg : regions)
        if (rg.contains(e)) {
          ++rg.count;
          placed = true;
          break;
        }
      if (!placed) return "element outside its block regions";
    }
    for (const Region& rg : regions)
      if (rg.count != rg.size()) return "block does not fill its regions";
    return nullptr;
  };

  for (std::size_t j = 0; j < scales.size(); ++j) {
    const ScaleRecord& r = scales[j];
    const double budget = pattern_budget(profile, r.seg.len);
    const int mL = r.seg.left_size(), mR = r.seg.right_size();

    if (j == 0) {
      if (r.anchor_levels.front() != 0 || !(r.anchor_grids.front() == GridPosition{}))
        return fail("root scale does not start at the empty chain");
    } else {
      const ScaleRecord& prev = scales[j - 1];
      const GridPosition from = prev.anchor_grids.back();
      const GridPosition to = prev.exhaust_grid;
      const double prev_budget = pattern_budget(profile, prev.seg.len);
      if (static_cast<double>((to.a - from.a) + (to.b - from.b)) > prev_budget)
        return fail("tail travel exceeds the pattern budget");
      const GridPosition desc = r.anchor_grids.front();
      if (static_cast<double>(desc.a + desc.b) > budget)
        return fail("descent travel exceeds the pattern budget");
      const char* err = consume_block(
          r.anchor_levels.front(),
          {left_region(prev.seg, from.a, to.a), right_region(prev.seg, from.b, to.b),
           left_region(r.seg, 0, desc.a), right_region(r.seg, 0, desc.b)});
      if (err) return fail(err);
    }

    for (std::size_t i = 1; i < r.anchor_grids.size(); ++i) {
      const GridPosition from = r.anchor_grids[i - 1];
      const GridPosition to = r.anchor_grids[i];
      if (static_cast<double>((to.a - from.a) + (to.b - from.b)) > budget)
        return fail("gap travel exceeds the pattern budget");
      const char* err = consume_block(r.anchor_levels[i],
                                      {left_region(r.seg, from.a, to.a),
                                       right_region(r.seg, from.b, to.b)});
      if (err) return fail(err);
    }

    if (r.base_case) {
      const GridPosition from = r.anchor_grids.back();
      if (static_cast<double>((mL - from.a) + (mR - from.b)) > budget)
        return fail("final block exceeds the pattern budget");
      const char* err = consume_block(
          n, {left_region(r.seg, from.a, mL), right_region(r.seg, from.b, mR)});
      if (err) return fail(err);
    }
  }
  if (level != n) return fail("chain levels left unaccounted");
  return Verdict{true, ""};
}

}  // namespace chainbal

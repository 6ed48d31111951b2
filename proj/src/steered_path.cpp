#include "chainbal/steered_path.hpp"

#include <cstdlib>

namespace chainbal {

bool ScriptedCoin::pick_right() {
  if (next_ >= outcomes_.size()) throw state_error("scripted coin ran out of outcomes");
  return outcomes_[next_++];
}

namespace {

void check_position(const Segment& seg, GridPosition pos) {
  if (seg.len < 0 || seg.start < 0) throw domain_error("malformed segment");
  if (pos.a < 0 || pos.a > seg.left_size() || pos.b < 0 || pos.b > seg.right_size())
    throw domain_error("grid position outside segment");
}

}  // namespace

SteerResult steer_step(const Segment& seg, GridPosition pos, int imbalance,
                       std::int64_t pool_before, const BalancedColoring& f,
                       CoinSource& coins) {
  check_position(seg, pos);
  const bool left_active = pos.a < seg.left_size();
  const bool right_active = pos.b < seg.right_size();
  if (!left_active && !right_active)
    throw state_error("steer_step with both halves exhausted");

  bool go_right;
  bool coin_used = false;
  if (left_active && right_active) {
    const int hl = imbalance + f.at(seg.left_elem(pos.a));
    const int hr = imbalance + f.at(seg.right_elem(pos.b));
    const int al = std::abs(hl), ar = std::abs(hr);
    if (al != ar) {
      go_right = ar < al;
    } else {
      go_right = coins.pick_right();
      coin_used = true;
    }
  } else {
    go_right = right_active;  // forced extension of the surviving half
  }

  SteerResult r;
  r.pos = pos;
  int elem;
  if (go_right) {
    elem = seg.right_elem(pos.b);
    r.pos.b += 1;
  } else {
    elem = seg.left_elem(pos.a);
    r.pos.a += 1;
  }
  r.imbalance = imbalance + f.at(elem);
  r.step.block = go_right ? 1 : 0;
  r.step.fvalue = static_cast<std::int8_t>(f.at(elem));
  r.step.coin_used = coin_used;
  r.step.imbalance_after = r.imbalance;
  r.step.deviation_after = 0;  // caller-relative; filled by run_segment
  r.step.pool_after = pool_before - 1;
  return r;
}

SteeredTrace run_segment(const Segment& seg, GridPosition start, int h0,
                         std::int64_t pool0, const BalancedColoring& f,
                         CoinSource& coins) {
  check_position(seg, start);
  if (seg.end() > f.n()) throw dimension_error("segment exceeds coloring ground set");
  SteeredTrace tr;
  tr.seg = seg;
  tr.start = start;
  tr.h0 = h0;
  tr.pool0 = pool0;
  if (std::abs(h0) <= 1) tr.balanced_visits.push_back(0);

  GridPosition pos = start;
  int h = h0;
  std::int64_t pool = pool0;
  for (;;) {
    if (pos.a == seg.left_size() || pos.b == seg.right_size()) {
      tr.exhaustion_step = static_cast<std::int64_t>(tr.steps.size());
      break;
    }
    SteerResult r = steer_step(seg, pos, h, pool, f, coins);
    pos = r.pos;
    h = r.imbalance;
    pool = r.step.pool_after;
    r.step.deviation_after = (pos.a - start.a) - (pos.b - start.b);
    tr.steps.push_back(r.step);
    if (std::abs(h) <= 1)
      tr.balanced_visits.push_back(static_cast<std::int64_t>(tr.steps.size()));
  }
  tr.end = pos;
  tr.h_end = h;
  return tr;
}

Segment residual_of(const SteeredTrace& trace) {
  if (!trace.exhaustion_step.has_value())
    throw state_error("residual requested from a non-exhausted trace");
  const Segment& seg = trace.seg;
  if (trace.end.a == seg.left_size())
    return Segment{seg.split() + trace.end.b, seg.right_size() - trace.end.b};
  return Segment{seg.start + trace.end.a, seg.left_size() - trace.end.a};
}

Rat64 forced_probability(std::int64_t pool, int h) {
  if (h < 1) throw domain_error("forced probability needs imbalance >= 1");
  if (pool < 2 || pool < h) throw domain_error("pool too small for imbalance");
  if ((pool - h) % 2 != 0)
    throw domain_error("pool and imbalance must have equal parity");
  const long long P = (pool - h) / 2;  // pool elements carrying sgn(H)
  if (P <= 1) return Rat64::zero();
  return Rat64(P * (P - 1), pool * (pool - 1));
}

}  // namespace chainbal

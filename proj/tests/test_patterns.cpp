// test_patterns.cpp -- tuning profiles, budget arithmetic, and the local /
// composite pattern families.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "chainbal/constants.hpp"
#include "chainbal/errors.hpp"
#include "chainbal/local_patterns.hpp"
#include "chainbal/rng.hpp"

using namespace chainbal;

namespace {

const ConstantsProfile kPaper{4, 28, 8, 700};
const ConstantsProfile kToy{1, 1, 1, 2};

// Triple count straight from the definition: anchor pairs (a <= a2, b <= b2)
// within the travel budget, weighted by the subsets of the gap region.
std::uint64_t brute_triples(const Segment& seg, const ConstantsProfile& p) {
  const std::int64_t budget =
      std::min<std::int64_t>(pattern_budget_floor(p, seg.len), seg.len);
  std::uint64_t total = 0;
  for (int a = 0; a <= seg.left_size(); ++a)
    for (int a2 = a; a2 <= seg.left_size(); ++a2)
      for (int b = 0; b <= seg.right_size(); ++b)
        for (int b2 = b; b2 <= seg.right_size(); ++b2) {
          const std::int64_t g = (a2 - a) + (b2 - b);
          if (g <= budget) total += std::uint64_t{1} << g;
        }
  return total;
}

}  // namespace

TEST_CASE("profile validation and derived coefficients") {
  CHECK_NOTHROW(kPaper.validate());
  CHECK_NOTHROW(kToy.validate());
  CHECK_THROWS_AS((ConstantsProfile{0, 28, 8, 700}.validate()), domain_error);
  CHECK_THROWS_AS((ConstantsProfile{4, 28, 8, 1}.validate()), domain_error);
  CHECK(kPaper.transition_coeff() == 60);
  CHECK(kPaper.pattern_exponent() == 64);
  CHECK(kToy.transition_coeff() == 2);
  CHECK(kToy.pattern_exponent() == 6);
}

TEST_CASE("budget helpers agree with each other") {
  for (std::int64_t m : {1, 2, 3, 7, 16, 700, 16384}) {
    CAPTURE(m);
    CHECK(pattern_budget_floor(kPaper, m) ==
          static_cast<std::int64_t>(std::floor(pattern_budget(kPaper, m) + 1e-9)));
    CHECK(pattern_budget_floor(kToy, m) ==
          static_cast<std::int64_t>(std::floor(pattern_budget(kToy, m) + 1e-9)));
  }
  CHECK(pattern_budget(kPaper, 1) == 700.0);  // ln 1 = 0 keeps it exact
  CHECK(pattern_budget_floor(kToy, 2) == 3);
  CHECK_THROWS_AS(pattern_budget(kPaper, 0), domain_error);
}

TEST_CASE("shrinkage is the exact cube-square comparison") {
  CHECK(shrinkage_ok(4, 8));    // 64 <= 64
  CHECK(!shrinkage_ok(5, 8));   // 125 > 64
  CHECK(shrinkage_ok(645, 16384));
  CHECK(!shrinkage_ok(646, 16384));
  CHECK(shrinkage_ok(0, 0));
  CHECK_THROWS_AS(shrinkage_ok(-1, 8), domain_error);
}

TEST_CASE("depth limits count the two-thirds halvings to the threshold") {
  CHECK(depth_limit(2, kToy) == 0);
  CHECK(depth_limit(12, kToy) == 4);
  CHECK(depth_limit(700, kPaper) == 0);
  CHECK(depth_limit(701, kPaper) == 1);
  CHECK(depth_limit(16384, kPaper) == 1);
  CHECK(depth_limit(1'000'000, kPaper) == 2);
  CHECK_THROWS_AS(depth_limit(0, kPaper), domain_error);
}

TEST_CASE("hypothesis margins at the documented pinch points") {
  const double h1 = h1_value(kPaper, 700);
  CHECK(h1 == doctest::Approx(700.0 - 8.0 - 48.0 * std::log(700.0) - 350.0));
  CHECK(std::llround(h1 + 350.0) == 378);  // descent headroom reads 378 >= 350

  const double h2 = h2_value(kPaper, 350);
  CHECK(h2 == doctest::Approx(350.0 - std::pow(350.0, 2.0 / 3.0) -
                              28.0 * std::log(350.0)));
  CHECK(std::llround(350.0 - std::pow(350.0, 2.0 / 3.0)) == 300);
  CHECK(std::llround(28.0 * std::log(350.0)) == 164);  // residual room 300 >= 164

  HypothesisReport rep = check_hypotheses(kPaper, std::int64_t{1} << 20);
  CHECK(rep.ok);
  CHECK(rep.h1_worst_at == 700);
  CHECK(rep.h1_worst == doctest::Approx(h1));
  CHECK(rep.h2_worst_at == 350);
  CHECK(rep.h2_worst == doctest::Approx(h2));

  HypothesisReport toy = check_hypotheses(kToy, 4096);
  CHECK(!toy.ok);  // the toy profile deliberately fails the height headroom
}

TEST_CASE("segment masks and their cap") {
  CHECK(segment_mask(Segment{2, 3}) == 0b11100u);
  CHECK(segment_mask(Segment{0, 32}) == full_mask(32));
  CHECK_THROWS_AS(segment_mask(Segment{20, 13}), capacity_error);
}

TEST_CASE("tiny segment family counted and listed by hand") {
  Segment seg{0, 2};
  CHECK(local_pattern_count(seg, kToy).decimal() == "16");
  std::vector<Mask> masks = local_pattern_masks(seg, kToy);
  CHECK(masks == std::vector<Mask>{0, 1, 2, 3});
  CHECK_THROWS_AS(local_pattern_count(Segment{0, 0}, kToy), domain_error);
}

TEST_CASE("pattern counts match the brute triple enumeration") {
  for (int len : {1, 2, 3, 5, 6, 7, 8}) {
    Segment seg{0, len};
    for (const ConstantsProfile* p : {&kPaper, &kToy}) {
      CAPTURE(len);
      BigUint count = local_pattern_count(seg, *p);
      REQUIRE(count.fits_u64());
      CHECK(count.low64() == brute_triples(seg, *p));
    }
  }
  // A case where the budget truncates: toy allowance on 16 elements is 7.
  Segment wide{0, 16};
  CHECK(pattern_budget_floor(kToy, 16) == 7);
  BigUint count = local_pattern_count(wide, kToy);
  REQUIRE(count.fits_u64());
  CHECK(count.low64() == brute_triples(wide, kToy));
}

TEST_CASE("generous budgets make every subset a pattern") {
  std::vector<Mask> masks = local_pattern_masks(Segment{0, 6}, kPaper);
  CHECK(masks.size() == 64);
  std::vector<Mask> offset = local_pattern_masks(Segment{2, 3}, kPaper);
  CHECK(offset.size() == 8);
  for (Mask m : offset) CHECK((m & ~segment_mask(Segment{2, 3})) == 0);
}

TEST_CASE("pattern enumeration respects its work cap") {
  CHECK_THROWS_AS(local_pattern_masks(Segment{0, 20}, kPaper, 1000), capacity_error);
}

TEST_CASE("membership produces the minimal witness") {
  // Lone second element: both solid prefixes are empty, the left gap region
  // must stretch to cover index 1.
  Segment seg{0, 4};
  auto w = local_membership(0b0010u, seg, kPaper);
  REQUIRE(w.has_value());
  CHECK(w->from == GridPosition{0, 0});
  CHECK(w->to == GridPosition{2, 0});
  CHECK(w->travel() == 2);
  CHECK(w->gap_subset == 0b0010u);
  CHECK(w->mask() == 0b0010u);

  // Solid prefixes {0} and {2} of the two halves cost no travel at all.
  auto solid = local_membership(0b0101u, seg, kPaper);
  REQUIRE(solid.has_value());
  CHECK(solid->from == GridPosition{1, 1});
  CHECK(solid->to == GridPosition{1, 1});
  CHECK(solid->travel() == 0);
  CHECK(solid->gap_subset == 0u);

  CHECK_THROWS_AS(local_membership(0b10000u, seg, kPaper), dimension_error);
}

TEST_CASE("membership rejects sets beyond the travel budget") {
  // Toy allowance on 16 elements is 7; the lone last-left element needs 8.
  Segment seg{0, 16};
  CHECK(!local_membership(Mask{1} << 7, seg, kToy).has_value());
  CHECK(local_membership(Mask{1} << 6, seg, kToy).has_value());
}

TEST_CASE("membership and enumeration define the same family") {
  Segment seg{0, 8};
  std::vector<Mask> masks = local_pattern_masks(seg, kToy);
  std::unordered_set<Mask> family(masks.begin(), masks.end());
  for (Mask A = 0; A < 256; ++A) {
    CAPTURE(A);
    auto w = local_membership(A, seg, kToy);
    CHECK(w.has_value() == (family.count(A) > 0));
    if (w.has_value()) CHECK(w->mask() == A);
  }
}

TEST_CASE("composite enumeration equals the membership filter") {
  SetSystem composites = enumerate_composites(6, kToy);
  std::unordered_set<Mask> listed(composites.sets().begin(), composites.sets().end());
  int members = 0;
  for (Mask x = 0; x < 64; ++x) {
    CAPTURE(x);
    const bool in = composite_membership(x, 6, kToy).has_value();
    CHECK(in == (listed.count(x) > 0));
    members += in ? 1 : 0;
  }
  CHECK(members == static_cast<int>(composites.sets().size()));
  BigUint bound = composite_count_bound(6, kToy);
  CHECK(BigUint(static_cast<std::uint64_t>(members)) <= bound);
}

TEST_CASE("composite witnesses nest with exact shrinkage") {
  auto trivial = composite_membership(0u, 6, kToy);
  REQUIRE(trivial.has_value());
  CHECK(trivial->depth() == 0);
  CHECK(trivial->segments.front().start == 0);
  CHECK(trivial->segments.front().len == 6);

  Rng rng(derive_seed(5, 0, 0));
  const int n = 10;
  int witnessed = 0;
  for (int i = 0; i < 400; ++i) {
    Mask x = static_cast<Mask>(rng.below(std::uint64_t{1} << n));
    auto w = composite_membership(x, n, kToy);
    if (!w.has_value()) continue;
    ++witnessed;
    REQUIRE(!w->segments.empty());
    CHECK(w->segments.front().start == 0);
    CHECK(w->segments.front().len == n);
    CHECK(w->depth() <= depth_limit(n, kToy));
    for (std::size_t j = 1; j < w->segments.size(); ++j) {
      CHECK(w->segments[j - 1].contains(w->segments[j]));
      CHECK(shrinkage_ok(w->segments[j].len, w->segments[j - 1].len));
    }
  }
  CHECK(witnessed > 0);
}

TEST_CASE("composite caps and input checks") {
  CHECK_THROWS_AS(enumerate_composites(17, kToy), capacity_error);
  CHECK_THROWS_AS(enumerate_composites(0, kToy), domain_error);
  CHECK_THROWS_AS(composite_membership(0u, 33, kToy), capacity_error);
  CHECK_THROWS_AS(composite_membership(0b1000000u, 6, kToy), dimension_error);

  const std::string bound = composite_count_bound(12, kToy).decimal();
  CHECK_THROWS_WITH_AS(enumerate_composites(12, kToy, 10),
                       ("composite enumeration exceeded work cap; analytic bound " + bound)
                           .c_str(),
                       capacity_error);
}

TEST_CASE("composite count bound closes over the depth and exponent") {
  // Toy exponent 6 gives n^(6 + 18); at n = 12 the depth limit is 4.
  BigUint bound = composite_count_bound(12, kToy);
  CHECK(bound.decimal() == "397484236016954220667207680");  // 5 * 12^24
  BigUint check = BigUint::pow(12, 24);
  check.mul_small(5);
  CHECK(bound == check);
  CHECK(composite_count_bound(1, kToy).decimal() == "1");
  CHECK_THROWS_AS(composite_count_bound(0, kToy), domain_error);
}

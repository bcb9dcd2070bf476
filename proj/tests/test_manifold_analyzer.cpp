#include <doctest.h>

#include <stdexcept>

#include "borel4/manifold_analyzer.hpp"

using namespace borel4;

namespace {

// S^1 x S^3 # CP^2 with a rotation action fixing a torus and a point
ManifoldActionData torus_sum_data() {
  ManifoldActionData d;
  d.p = 3;
  d.group_rank = 1;
  d.b1 = 1;
  d.b2 = 1;
  d.r0 = 1;
  d.chi = 1;
  d.flags.orientation_preserving = true;
  d.flags.homologically_trivial = true;
  d.flags.fixed_set_nonempty = true;
  d.flags.h1_fix_to_m_surjective = true;
  d.flags.h1_torsion_free = true;
  return d;
}

ManifoldActionData cp2_data() {
  ManifoldActionData d;
  d.p = 3;
  d.group_rank = 2;
  d.b1 = 0;
  d.b2 = 1;
  d.r0 = 1;
  d.chi = 3;
  d.flags.orientation_preserving = true;
  d.flags.homologically_trivial = true;
  d.flags.pseudofree = true;
  d.flags.h1_torsion_free = true;
  d.flags.h1_zero = true;
  return d;
}

}  // namespace

TEST_CASE("data validation") {
  ManifoldActionData d = torus_sum_data();
  CHECK_NOTHROW(d.validate());
  d.chi = 5;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = torus_sum_data();
  d.r0 = 0;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);  // Swan arithmetic
  d = torus_sum_data();
  d.flags.h1_zero = true;  // contradicts b1 = 1
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("collapse rules") {
  // surjective H_1(F) -> H_1(M) with non-empty fixed set
  Verdict v = collapse_verdict(torus_sum_data());
  CHECK(v.outcome == Outcome::Collapses);
  CHECK(v.rule == "fixed_h1_surjective_collapse");

  // non-trivial invariant kernel
  ManifoldActionData d = torus_sum_data();
  d.flags.h1_fix_to_m_surjective = false;
  d.flags.orientation_preserving = true;
  d.flags.kernel_has_trivial_action = true;
  v = collapse_verdict(d);
  CHECK(v.outcome == Outcome::DoesNotCollapse);
  CHECK(v.rule == "invariant_kernel_noncollapse");

  // iff-rule for cyclic actions: failing surjectivity
  d = torus_sum_data();
  d.flags.h1_fix_to_m_surjective = false;
  d.flags.orientation_preserving = false;
  v = collapse_verdict(d);
  CHECK(v.outcome == Outcome::DoesNotCollapse);
  CHECK(v.rule == "cyclic_h1_surjectivity_iff");

  // rank-2 iff-rule on H_1 = 0
  ManifoldActionData r2;
  r2.p = 3;
  r2.group_rank = 2;
  r2.b1 = 1;
  r2.b2 = 4;
  r2.r0 = 4;
  r2.chi = 4;
  r2.flags.homologically_trivial = true;
  r2.flags.fixed_set_nonempty = true;
  r2.flags.h1_torsion_free = true;
  v = collapse_verdict(r2);
  CHECK(v.outcome == Outcome::DoesNotCollapse);
  CHECK(v.rule == "rank_two_h1_zero_iff");

  // degenerate case: H_1 = 0 with a fixed point forces collapse
  ManifoldActionData s4;
  s4.p = 3;
  s4.group_rank = 2;
  s4.b2 = 3;
  s4.r0 = 3;
  s4.chi = 5;
  s4.flags.homologically_trivial = true;
  s4.flags.fixed_set_nonempty = true;
  s4.flags.h1_zero = true;
  v = collapse_verdict(s4);
  CHECK(v.outcome == Outcome::Collapses);
  CHECK(v.rule == "h1_zero_fixed_point_collapse");

  // missing hypotheses stay inconclusive
  ManifoldActionData bare;
  bare.p = 3;
  bare.b2 = 0;
  bare.chi = 2;
  v = collapse_verdict(bare);
  CHECK(v.outcome == Outcome::Inconclusive);
}

TEST_CASE("totals comparison") {
  CHECK(totals_test(5, 5).outcome == Outcome::Collapses);
  CHECK(totals_test(8, 4).outcome == Outcome::DoesNotCollapse);
  CHECK(totals_test(6, 2).outcome == Outcome::DoesNotCollapse);
  CHECK_THROWS_AS(totals_test(4, 6), std::invalid_argument);
}

TEST_CASE("fixed-set constraints") {
  FixedSetConstraints c = fixed_set_constraints(torus_sum_data());
  CHECK(c.b1f == 2);
  CHECK(c.b0f_plus_b2f == 3);
  CHECK(c.chi_f == 1);

  // the declared fixed set T^2 + point matches
  FixedSetData f;
  f.isolated_points = 1;
  f.surfaces = {{1, true}};
  CHECK(f.b0() == 2);
  CHECK(f.b1(3) == 2);
  CHECK(f.b2(3) == 1);
  CHECK(f.chi() == 1);
  CHECK(f.total(3) == 5);

  // homology 4-sphere shape
  ManifoldActionData s;
  s.p = 3;
  s.group_rank = 1;
  s.chi = 2;
  s.flags.homologically_trivial = true;
  s.flags.h1_fix_to_m_surjective = true;
  c = fixed_set_constraints(s);
  CHECK(c.b1f == 0);
  CHECK(c.b0f_plus_b2f == 2);
  CHECK(c.chi_f == 2);

  // the linear projective-plane picture: CP^1 + point
  ManifoldActionData lin = cp2_data();
  lin.group_rank = 1;
  lin.flags.pseudofree = false;
  lin.flags.fixed_set_nonempty = true;
  lin.flags.h1_fix_to_m_surjective = true;
  c = fixed_set_constraints(lin);
  CHECK(c.b1f == 0);
  CHECK(c.b0f_plus_b2f == 3);
  CHECK(c.chi_f == 3);

  ManifoldActionData chi0 = torus_sum_data();
  chi0.b2 = 0;
  chi0.r0 = 0;
  chi0.chi = 0;
  CHECK_THROWS_AS(fixed_set_constraints(chi0), std::invalid_argument);
}

TEST_CASE("non-orientable fixed surfaces use F_p Betti numbers") {
  FixedSetData f;
  f.surfaces = {{1, false}};  // projective plane
  CHECK(f.b1(2) == 1);
  CHECK(f.b2(2) == 1);
  CHECK(f.b1(3) == 0);
  CHECK(f.b2(3) == 0);
  CHECK(f.chi() == 1);
  CHECK(f.has_nonorientable());
}

TEST_CASE("dimension formulas and the vanishing of b") {
  {
    DimFormulas f = lemma_dim_formulas(cp2_data(), 0);
    CHECK(f.h5 == 0);
    CHECK(f.h6 == 3);
    CHECK(f.h5_mod_p == 3);
  }
  {
    DimFormulas f = lemma_dim_formulas(torus_sum_data(), 0);
    CHECK(f.h5 == 2);
    CHECK(f.h6 == 3);
    CHECK(f.h5_mod_p == 5);
    CHECK(f.h5 + f.h6 == f.h5_mod_p);
  }
  for (int b1 = 0; b1 <= 4; ++b1)
    for (int t = 0; t <= 4; ++t)
      for (int r0 = 0; r0 <= 4; ++r0)
        for (int r1 = 0; r1 <= 4; ++r1) {
          ManifoldActionData d;
          d.p = 3;
          d.group_rank = 1;
          d.b1 = b1;
          d.t = t;
          d.r0 = r0;
          d.r1 = r1;
          d.b2 = r0 + 2 * r1;
          d.chi = 2 - 2 * b1 + d.b2;
          DimFormulas f = lemma_dim_formulas(d, 0);
          CHECK(f.h5 + f.h6 == f.h5_mod_p);
          CHECK(deduce_b_zero(d) == 0);
        }

  ManifoldActionData deep;
  deep.p = 3;
  deep.group_rank = 1;
  deep.b1 = 2;
  deep.t = 3;
  deep.r0 = 1;
  deep.r1 = 1;
  deep.b2 = 1 + 2 * 1;
  deep.chi = 2 - 4 + 3;
  CHECK(deduce_b_zero(deep) == 0);
  CHECK_THROWS_AS(lemma_dim_formulas(deep, 4), std::invalid_argument);  // b > t

  // a perturbed mod-p dimension admits no non-negative solution
  DimFormulas f = lemma_dim_formulas(deep, 0);
  CHECK_THROWS_AS(solve_b_from_mod_p_dim(deep, f.h5_mod_p + 2), std::invalid_argument);
}

TEST_CASE("singular set dimension count") {
  CHECK(singular_set_bound(cp2_data()) == 4);

  ManifoldActionData d4;
  d4.p = 2;
  d4.group_rank = 2;
  d4.b2 = 2;
  d4.r0 = 2;
  d4.chi = 4;
  d4.flags.pseudofree = true;
  d4.flags.homologically_trivial = true;
  CHECK(singular_set_bound(d4) == 6);

  ManifoldActionData bad = cp2_data();
  bad.b2 = 2;
  bad.r0 = 2;
  bad.chi = 4;  // 3 does not divide 4
  CHECK_THROWS_AS(singular_set_bound(bad), std::domain_error);
  CHECK(singular_bound_verdict(bad).outcome == Outcome::RuledOut);
  CHECK(singular_bound_verdict(cp2_data()).outcome == Outcome::Consistent);
}

TEST_CASE("rank bounds for pseudofree actions") {
  ManifoldActionData d = cp2_data();

  Verdict v = pseudofree_rank_verdict(5, 2, d);
  CHECK(v.outcome == Outcome::RuledOut);
  CHECK(v.note == "mui_degree_unreachable");
  bool found = false;
  for (const auto& [key, val] : v.evidence)
    if (key == "gamma3_degree" && val == 11) found = true;
  CHECK(found);
  CHECK(pseudofree_rank_verdict(7, 2, d).outcome == Outcome::RuledOut);

  v = pseudofree_rank_verdict(3, 3, d);
  CHECK(v.outcome == Outcome::RuledOut);
  CHECK(v.note == "rank3_mui_degrees_out_of_range");

  v = pseudofree_rank_verdict(2, 3, d);
  CHECK(v.outcome == Outcome::RuledOut);
  CHECK(v.note == "no_common_nonrestricting_quadratic");

  CHECK(pseudofree_rank_verdict(3, 2, d).outcome == Outcome::Consistent);
  CHECK(pseudofree_rank_verdict(2, 2, d).outcome == Outcome::Consistent);
  for (int p : {2, 3, 5, 7}) CHECK(pseudofree_rank_verdict(p, 1, d).outcome == Outcome::Consistent);

  ManifoldActionData no_flags = cp2_data();
  no_flags.flags.pseudofree = false;
  CHECK_THROWS_AS(pseudofree_rank_verdict(3, 2, no_flags), std::invalid_argument);
}

TEST_CASE("cyclic duality bookkeeping on a computed run") {
  // the handle-sum manifold: b1 = 1, b2 = 4, chi = 4, four fixed points
  ManifoldActionData d;
  d.p = 3;
  d.group_rank = 1;
  d.b1 = 1;
  d.b2 = 4;
  d.r0 = 4;
  d.chi = 4;
  d.flags.homologically_trivial = true;
  d.flags.pseudofree = true;
  d.flags.fixed_set_nonempty = true;
  d.flags.h1_torsion_free = true;

  FiberAlgebra fib(3, {{{"1"}, {"a"}, {"z1", "z2", "z3", "z4"}, {"b"}, {"w"}}},
                   {{"a", "b", {{"w", 1}}},
                    {"z1", "z2", {{"w", 1}}},
                    {"z3", "z4", {{"w", 1}}}});
  PresentationPtr ring = cohomology_ring(GroupSpec(3, 1));

  DifferentialSpec d2;
  d2.page = 2;
  auto entry = [&](const char* label, const char* coeff, const char* target_label) {
    DifferentialEntry e{AlgebraElement::one(ring), 0, {}, {}};
    auto [deg, idx] = fib.find_class(label);
    e.source_fiber_degree = deg;
    e.source_fiber.assign(static_cast<std::size_t>(fib.betti(deg)), 0);
    e.source_fiber[static_cast<std::size_t>(idx)] = 1;
    if (coeff) {
      auto [td, ti] = fib.find_class(target_label);
      DifferentialTerm t{parse_element(ring, coeff), td, {}};
      t.fiber.assign(static_cast<std::size_t>(fib.betti(td)), 0);
      t.fiber[static_cast<std::size_t>(ti)] = 1;
      e.target.push_back(std::move(t));
    }
    return e;
  };
  d2.entries.push_back(entry("a", nullptr, nullptr));
  d2.entries.push_back(entry("b", "u1", "z1"));
  d2.entries.push_back(entry("z1", nullptr, nullptr));
  d2.entries.push_back(entry("z2", "u1", "a"));
  d2.entries.push_back(entry("z3", nullptr, nullptr));
  d2.entries.push_back(entry("z4", nullptr, nullptr));

  SpectralRun run = run_schedule(GroupSpec(3, 1), fib, {d2}, {});
  Verdict v = prop_cyclic_checks(d, run);
  CHECK(v.outcome == Outcome::Consistent);
  bool r_zero = false;
  for (const auto& [key, val] : v.evidence)
    if (key == "R" && val == 0) r_zero = true;
  CHECK(r_zero);

  // b2 < 2 b1 is ruled out before any engine data is consulted
  ManifoldActionData thin;
  thin.p = 3;
  thin.group_rank = 1;
  thin.b1 = 1;
  thin.b2 = 1;
  thin.r0 = 1;
  thin.chi = 1;
  thin.flags.homologically_trivial = true;
  thin.flags.pseudofree = true;
  CHECK(prop_cyclic_checks(thin, run).outcome == Outcome::RuledOut);
}

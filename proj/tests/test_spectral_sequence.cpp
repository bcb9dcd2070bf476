#include <doctest.h>

#include <stdexcept>

#include "borel4/spectral_sequence.hpp"

using namespace borel4;

namespace {

FiberAlgebra cp2_fiber(int p) {
  return FiberAlgebra(p, {{{"1"}, {}, {"z"}, {}, {"w"}}}, {{"z", "z", {{"w", 1}}}});
}

// connected sum of two copies of S^2 x S^2 with an extra handle: Betti
// numbers (1,1,4,1,1), intersection form two hyperbolic pairs, a.b = w
FiberAlgebra handle_sum_fiber(int p) {
  return FiberAlgebra(p,
                      {{{"1"}, {"a"}, {"z1", "z2", "z3", "z4"}, {"b"}, {"w"}}},
                      {{"a", "b", {{"w", 1}}},
                       {"z1", "z2", {{"w", 1}}},
                       {"z3", "z4", {{"w", 1}}}});
}

DifferentialSpec cp2_d3(PresentationPtr ring) {
  DifferentialSpec d3;
  d3.page = 3;
  DifferentialEntry z{AlgebraElement::one(ring), 2, {1}, {}};
  z.target.push_back({parse_element(ring, "x1*u2 - x2*u1"), 0, {1}});
  d3.entries.push_back(std::move(z));
  return d3;
}

DifferentialSpec cp2_d5(PresentationPtr ring) {
  DifferentialSpec d5;
  d5.page = 5;
  DifferentialEntry g1w{parse_element(ring, "x1*x2"), 4, {1}, {}};
  g1w.target.push_back({parse_element(ring, "x1*u2^3 - x2*u1^3"), 0, {1}});
  d5.entries.push_back(std::move(g1w));
  DifferentialEntry g2w{parse_element(ring, "x1*u2 - x2*u1"), 4, {1}, {}};
  g2w.target.push_back({parse_element(ring, "u1*u2^3 - u2*u1^3"), 0, {1}});
  d5.entries.push_back(std::move(g2w));
  return d5;
}

}  // namespace

TEST_CASE("the second page is the tensor product") {
  SSPage e2 = build_e2(GroupSpec(3, 2), cp2_fiber(3), 12);
  CHECK(e2.dim(2, 2) == 3);  // dim H^2(G) * b_2
  CHECK(e2.dim(0, 0) == 1);
  CHECK(e2.dim(3, 5) == 0);
  CHECK(e2.dim(4, 1) == 0);
  CHECK(e2.dim(6, 4) == 7);
}

TEST_CASE("zero differentials leave the page unchanged") {
  SSPage e2 = build_e2(GroupSpec(3, 2), cp2_fiber(3), 10);
  DifferentialSpec zero;
  zero.page = 2;
  SSPage e3 = turn_page(leibniz_extend(e2, zero));
  for (int k = 0; k <= 10; ++k)
    for (int l = 0; l <= 4; ++l) CHECK(e3.dim(k, l) == e2.dim(k, l));
}

TEST_CASE("trivial group: the limit totals are the fiber Betti numbers") {
  SpectralRun run = run_schedule(GroupSpec(3, 0), cp2_fiber(3), {}, {});
  const SSPage& last = run.final_page();
  CHECK(totals(last, 0) == 1);
  CHECK(totals(last, 1) == 0);
  CHECK(totals(last, 2) == 1);
  CHECK(totals(last, 3) == 0);
  CHECK(totals(last, 4) == 1);
  CHECK(totals(last, 5) == 0);
}

TEST_CASE("all-zero differentials reproduce the closed-form totals") {
  {
    SpectralRun run = run_schedule(GroupSpec(3, 2), cp2_fiber(3), {}, {});
    const SSPage& last = run.final_page();
    // rank 2: dim H^k(G) = k+1, fiber rows 0, 2, 4
    for (int q = 5; q <= last.cutoff(); ++q)
      CHECK(totals(last, q) == (q + 1) + (q - 1) + (q - 3));
  }
  {
    SpectralRun run = run_schedule(GroupSpec(3, 1), handle_sum_fiber(3), {}, {});
    const SSPage& last = run.final_page();
    for (int q = 5; q <= last.cutoff(); ++q) CHECK(totals(last, q) == 8);  // sum of Betti numbers
  }
}

TEST_CASE("projective-plane run replicates the worked computation") {
  GroupSpec g(3, 2);
  PresentationPtr ring = cohomology_ring(g);
  EngineOptions opts;
  opts.cutoff = 12;
  opts.require_essential_bottom_row = true;
  SpectralRun run = run_schedule(g, cp2_fiber(3), {cp2_d3(ring), cp2_d5(ring)}, opts);

  // the Leibniz rule must produce d_3(w) = -gamma_2 z without w specified
  const SSPage& e3 = run.page(3);
  const FpMatrix& d34 = e3.differential(0, 4);
  REQUIRE(d34.rows() == 1);
  auto h3 = degree_basis(*ring, 3);
  FpVector expected = element_coordinates(parse_element(ring, "- x1*u2 + x2*u1"), h3);
  CHECK(d34.row(0) == expected);

  CHECK(image_dim(e3.differential(3, 2)) == 3);
  CHECK(image_dim(e3.differential(5, 2)) == 4);
  CHECK(image_dim(e3.differential(1, 4)) == 2);
  CHECK(image_dim(e3.differential(2, 4)) == 2);

  const SSPage& e4 = run.page(4);
  CHECK(e4.dim(4, 2) == 0);
  CHECK(e4.dim(6, 0) == 4);
  CHECK(e4.dim(5, 2) == 0);
  CHECK(e4.dim(7, 0) == 5);
  CHECK(e4.dim(8, 0) == 5);
  CHECK(e4.dim(2, 4) == 1);
  CHECK(e4.dim(3, 4) == 1);

  // the fourth page equals the fifth
  const SSPage& e5 = run.page(5);
  for (int k = 0; k <= 12; ++k)
    for (int l = 0; l <= 4; ++l) CHECK(e5.dim(k, l) == e4.dim(k, l));

  const SSPage& e6 = run.final_page();
  for (int q = 5; q <= 8; ++q) CHECK(totals(e6, q) == 4);
  CHECK(e6.dim(2, 4) == 0);
  CHECK(e6.dim(3, 4) == 0);

  // engine invariants: monotone decay and vanishing compositions
  for (std::size_t i = 0; i + 1 < run.pages.size(); ++i)
    for (int k = 0; k <= 12; ++k)
      for (int l = 0; l <= 4; ++l)
        CHECK(run.pages[i + 1].dim(k, l) <= run.pages[i].dim(k, l));
  for (int r = 2; r <= 5; ++r) {
    const SSPage& pg = run.page(r);
    for (int k = 0; k + 2 * r <= pg.max_column(); ++k)
      for (int l = r - 1; l <= 4; ++l) {
        if (l - r + 1 + r - 1 > 4 || l - 2 * (r - 1) < 0) continue;
        const FpMatrix& first = pg.differential(k, l);
        const FpMatrix& second = pg.differential(k + r, l - r + 1);
        if (first.cols() != second.rows()) continue;
        CHECK(first.multiply(second).is_zero());
      }
  }
}

TEST_CASE("cyclic pseudofree run with an injective degree-3 differential") {
  GroupSpec g(3, 1);
  PresentationPtr ring = cohomology_ring(g);
  FiberAlgebra fib = handle_sum_fiber(3);

  DifferentialSpec d2;
  d2.page = 2;
  auto entry = [&](const std::string& fiber_label, const char* coeff_expr,
                   const char* target_fiber) {
    DifferentialEntry e{AlgebraElement::one(ring), 0, {}, {}};
    auto [deg, idx] = fib.find_class(fiber_label);
    e.source_fiber_degree = deg;
    e.source_fiber.assign(static_cast<std::size_t>(fib.betti(deg)), 0);
    e.source_fiber[static_cast<std::size_t>(idx)] = 1;
    if (coeff_expr) {
      auto [tdeg, tidx] = fib.find_class(target_fiber);
      DifferentialTerm t{parse_element(ring, coeff_expr), tdeg, {}};
      t.fiber.assign(static_cast<std::size_t>(fib.betti(tdeg)), 0);
      t.fiber[static_cast<std::size_t>(tidx)] = 1;
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

  SpectralRun run = run_schedule(g, fib, {d2}, {});
  const SSPage& e3 = run.page(3);
  CHECK(e3.dim(2, 3) == 0);
  CHECK(e3.dim(4, 1) == 0);
  CHECK(e3.dim(3, 2) == 2);  // b2 - 2 b1 + 2R with R = 0
  CHECK(sikora_constraint_check(e3));
  CHECK(totals(e3, 5) == 4);
  CHECK(totals(run.final_page(), 5) == 4);
  CHECK(totals(run.final_page(), 6) == 4);

  // one-sided variant: surjective on the row-2 side only, so the duality
  // balance fails
  DifferentialSpec lopsided;
  lopsided.page = 2;
  lopsided.entries.push_back(entry("a", nullptr, nullptr));
  lopsided.entries.push_back(entry("b", nullptr, nullptr));
  lopsided.entries.push_back(entry("z1", nullptr, nullptr));
  lopsided.entries.push_back(entry("z2", "u1", "a"));
  lopsided.entries.push_back(entry("z3", nullptr, nullptr));
  lopsided.entries.push_back(entry("z4", nullptr, nullptr));
  SpectralRun bad = run_schedule(g, fib, {lopsided}, {});
  CHECK_FALSE(sikora_constraint_check(bad.page(3)));
}

TEST_CASE("rejected specifications") {
  GroupSpec g(3, 2);
  PresentationPtr ring = cohomology_ring(g);
  FiberAlgebra fib = cp2_fiber(3);

  // wrong target degree
  {
    DifferentialSpec d3;
    d3.page = 3;
    DifferentialEntry z{AlgebraElement::one(ring), 2, {1}, {}};
    z.target.push_back({parse_element(ring, "u1"), 0, {1}});  // degree 2, needs 3
    d3.entries.push_back(std::move(z));
    SSPage e3 = turn_page(leibniz_extend(build_e2(g, fib, 10), DifferentialSpec{2, {}}));
    CHECK_THROWS_AS(leibniz_extend(e3, d3), std::invalid_argument);
  }

  // bottom-row target outside the essential ideal
  {
    DifferentialSpec d3;
    d3.page = 3;
    DifferentialEntry z{AlgebraElement::one(ring), 2, {1}, {}};
    z.target.push_back({parse_element(ring, "x1*u1"), 0, {1}});
    d3.entries.push_back(std::move(z));
    EngineOptions opts;
    opts.require_essential_bottom_row = true;
    CHECK_THROWS_AS(run_schedule(g, fib, {d3}, opts), std::invalid_argument);
    CHECK_NOTHROW(run_schedule(g, fib, {d3}, {}));  // without the flag it is a legal run
  }

  // conflicting value for the derived class d_3(w)
  {
    DifferentialSpec d3 = cp2_d3(ring);
    DifferentialEntry w{AlgebraElement::one(ring), 4, {1}, {}};
    w.target.push_back({parse_element(ring, "x1*u2 - x2*u1"), 2, {1}});  // wrong sign
    d3.entries.push_back(std::move(w));
    CHECK_THROWS_AS(run_schedule(g, fib, {d3}, {}), std::invalid_argument);
  }

  // a class that died earlier cannot carry a non-zero differential
  {
    SpectralRun run = run_schedule(g, fib, {cp2_d3(ring)}, {});
    const SSPage& e5 = run.page(5);
    DifferentialSpec d5;
    d5.page = 5;
    DifferentialEntry w{AlgebraElement::one(ring), 4, {1}, {}};
    w.target.push_back({parse_element(ring, "u1^3*x1*x2"), 0, {1}});
    d5.entries.push_back(std::move(w));
    CHECK_THROWS_AS(leibniz_extend(e5, d5), std::invalid_argument);
  }

  // under-determined page: one of the surviving fiber generators is missing
  {
    GroupSpec cyclic(3, 1);
    PresentationPtr r1 = cohomology_ring(cyclic);
    FiberAlgebra handle = handle_sum_fiber(3);
    DifferentialSpec d2;
    d2.page = 2;
    DifferentialEntry b{AlgebraElement::one(r1), 3, {1}, {}};
    b.target.push_back({parse_element(r1, "u1"), 2, {1, 0, 0, 0}});
    d2.entries.push_back(std::move(b));
    CHECK_THROWS_AS(run_schedule(cyclic, handle, {d2}, {}), std::invalid_argument);
  }
}

TEST_CASE("totals guard the cutoff") {
  SpectralRun run = run_schedule(GroupSpec(3, 1), cp2_fiber(3), {}, {});
  CHECK_THROWS_AS(totals(run.final_page(), run.final_page().cutoff() + 1), std::out_of_range);
}

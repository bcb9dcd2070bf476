#include "borel4/manifold_analyzer.hpp"

#include <stdexcept>

namespace borel4 {

void ManifoldActionData::validate() const {
  if (!is_prime(p)) throw std::invalid_argument("manifold data: p must be prime");
  if (group_rank < 0) throw std::invalid_argument("manifold data: negative rank");
  if (b1 < 0 || b2 < 0 || t < 0 || r0 < 0 || r1 < 0 || r2 < 0)
    throw std::invalid_argument("manifold data: counts must be non-negative");
  if (chi != 2 - 2 * b1 + b2)
    throw std::invalid_argument("manifold data: chi must equal 2 - 2*b1 + b2");
  if (r0 + (p - 1) * r1 + p * r2 != b2)
    throw std::invalid_argument("manifold data: r0 + (p-1)*r1 + p*r2 must equal b2");
  if (flags.h1_zero && (b1 > 0 || t > 0))
    throw std::invalid_argument("manifold data: h1_zero contradicts b1 > 0 or torsion");
  if (flags.h1_torsion_free && t > 0)
    throw std::invalid_argument("manifold data: h1_torsion_free contradicts t > 0");
  if (flags.pseudofree && flags.fixed_set_nonempty && group_rank >= 2)
    throw std::invalid_argument(
        "manifold data: a rank >= 2 pseudofree action has empty global fixed set");
}

int FixedSetData::b0() const { return isolated_points + static_cast<int>(surfaces.size()); }

int FixedSetData::b1(int p) const {
  int s = 0;
  for (const auto& surf : surfaces) {
    if (surf.orientable)
      s += 2 * surf.genus;
    else
      s += p == 2 ? surf.genus : surf.genus - 1;
  }
  return s;
}

int FixedSetData::b2(int p) const {
  int s = 0;
  for (const auto& surf : surfaces) s += (surf.orientable || p == 2) ? 1 : 0;
  return s;
}

int FixedSetData::total(int p) const { return b0() + b1(p) + b2(p); }

int FixedSetData::chi() const {
  int s = isolated_points;
  for (const auto& surf : surfaces) s += surf.orientable ? 2 - 2 * surf.genus : 2 - surf.genus;
  return s;
}

bool FixedSetData::has_nonorientable() const {
  for (const auto& surf : surfaces)
    if (!surf.orientable) return true;
  return false;
}

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Collapses: return "Collapses";
    case Outcome::DoesNotCollapse: return "DoesNotCollapse";
    case Outcome::RuledOut: return "RuledOut";
    case Outcome::Consistent: return "Consistent";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Verdict collapse_verdict(const ManifoldActionData& d) {
  d.validate();
  const auto& f = d.flags;

  if (d.group_rank == 1 && f.orientation_preserving && f.fixed_set_nonempty &&
      f.h1_fix_to_m_surjective) {
    return {Outcome::Collapses,
            "fixed_h1_surjective_collapse",
            {{"b1", d.b1}, {"t", d.t}},
            "H_1(F) surjects onto H_1(M) with non-empty fixed set"};
  }
  if (d.group_rank == 1 && f.kernel_has_trivial_action) {
    return {Outcome::DoesNotCollapse,
            "invariant_kernel_noncollapse",
            {},
            "ker(H^1(M) -> H^1(F)) is non-trivial with trivial action"};
  }
  if (d.group_rank == 1 && d.p % 2 == 1 && f.homologically_trivial && f.fixed_set_nonempty &&
      f.h1_torsion_free) {
    if (f.h1_fix_to_m_surjective)
      return {Outcome::Collapses, "cyclic_h1_surjectivity_iff", {}, "surjectivity holds"};
    return {Outcome::DoesNotCollapse, "cyclic_h1_surjectivity_iff", {}, "surjectivity fails"};
  }
  if (d.group_rank == 2 && d.p % 2 == 1 && f.homologically_trivial && f.fixed_set_nonempty &&
      f.h1_torsion_free) {
    if (f.h1_zero)
      return {Outcome::Collapses, "rank_two_h1_zero_iff", {{"b1", d.b1}}, "H_1(M) = 0"};
    return {Outcome::DoesNotCollapse, "rank_two_h1_zero_iff", {{"b1", d.b1}}, "H_1(M) != 0"};
  }
  if (f.homologically_trivial && f.fixed_set_nonempty && f.h1_zero) {
    return {Outcome::Collapses,
            "h1_zero_fixed_point_collapse",
            {},
            "no differential can reach the base row"};
  }
  return {Outcome::Inconclusive, "collapse_rules", {}, "no rule's hypotheses are fully present"};
}

Verdict totals_test(int manifold_totals, int fixed_totals) {
  if (fixed_totals > manifold_totals)
    throw std::invalid_argument("totals_test: fixed-set total exceeds the manifold total");
  Verdict v;
  v.rule = "totals_comparison";
  v.evidence = {{"fixed_totals", fixed_totals}, {"manifold_totals", manifold_totals}};
  v.outcome = fixed_totals == manifold_totals ? Outcome::Collapses : Outcome::DoesNotCollapse;
  return v;
}

FixedSetConstraints fixed_set_constraints(const ManifoldActionData& d) {
  d.validate();
  if (d.p == 2) throw std::invalid_argument("fixed_set_constraints: p must be odd");
  if (!d.flags.homologically_trivial || !d.flags.h1_fix_to_m_surjective)
    throw std::invalid_argument("fixed_set_constraints: hypotheses missing");
  if (d.chi == 0) throw std::invalid_argument("fixed_set_constraints: chi must be non-zero");
  return {2 * d.b1, 2 + d.b2, 2 - 2 * d.b1 + d.r0 - d.r1};
}

DimFormulas lemma_dim_formulas(const ManifoldActionData& d, int b) {
  if (b < 0 || b > d.t) throw std::invalid_argument("lemma_dim_formulas: need 0 <= b <= t");
  DimFormulas out;
  out.h5 = 2 * d.b1 + (d.t - b) + d.t + d.r1;
  out.h6 = 2 + (d.t - b) + d.t + d.r0;
  out.h5_mod_p = 2 + 2 * d.b1 + 4 * d.t + d.r0 + d.r1;
  return out;
}

int solve_b_from_mod_p_dim(const ManifoldActionData& d, int measured_h5_mod_p) {
  // h5(b) + h6(b) = h5(0) + h6(0) - 2b, so 2b = h5(0)+h6(0) - measured
  DimFormulas at_zero = lemma_dim_formulas(d, 0);
  int diff = at_zero.h5 + at_zero.h6 - measured_h5_mod_p;
  if (diff < 0 || diff % 2 != 0)
    throw std::invalid_argument("solve_b_from_mod_p_dim: no non-negative solution, data inconsistent");
  return diff / 2;
}

int deduce_b_zero(const ManifoldActionData& d) {
  return solve_b_from_mod_p_dim(d, lemma_dim_formulas(d, 0).h5_mod_p);
}

int singular_set_bound(const ManifoldActionData& d) {
  if (d.group_rank != 2) throw std::invalid_argument("singular_set_bound: rank-2 actions only");
  if (!d.flags.pseudofree || !d.flags.homologically_trivial)
    throw std::invalid_argument("singular_set_bound: hypotheses missing");
  if (d.chi == 0) return 0;  // vacuous; chi != 0 is the standing hypothesis
  if (d.chi % d.p != 0)
    throw std::domain_error("singular_set_bound: p does not divide chi");
  return (d.chi / d.p) * (d.p + 1);
}

Verdict singular_bound_verdict(const ManifoldActionData& d) {
  Verdict v;
  v.rule = "singular_orbit_count";
  try {
    int bound = singular_set_bound(d);
    v.outcome = Outcome::Consistent;
    v.evidence = {{"bound", bound}, {"chi", d.chi}, {"p", d.p}};
  } catch (const std::domain_error&) {
    v.outcome = Outcome::RuledOut;
    v.evidence = {{"chi", d.chi}, {"p", d.p}};
    v.note = "a pseudofree rank-2 action forces p | chi";
  }
  return v;
}

Verdict pseudofree_rank_verdict(int p, int rank, const ManifoldActionData& d) {
  if (!is_prime(p)) throw std::invalid_argument("pseudofree_rank_verdict: p must be prime");
  if (rank < 1) throw std::invalid_argument("pseudofree_rank_verdict: rank must be >= 1");
  if (!d.flags.pseudofree || !d.flags.homologically_trivial)
    throw std::invalid_argument("pseudofree_rank_verdict: pseudofree + homologically trivial required");
  if (d.chi == 0) throw std::invalid_argument("pseudofree_rank_verdict: chi must be non-zero");

  Verdict v;
  v.rule = "pseudofree_rank_bound";
  if (rank == 1) {
    v.outcome = Outcome::Consistent;
    v.note = "cyclic actions are not constrained by the rank bound";
    return v;
  }
  if (p >= 5) {
    // gamma_3 sits in degree 2p+1; a differential d_r, r <= 5, reaching it
    // needs source column 2p+1-r >= 2p-4 >= 6, beyond the columns <= 3
    // that determine every differential
    v.outcome = Outcome::RuledOut;
    v.note = "mui_degree_unreachable";
    v.evidence = {{"gamma3_degree", 2 * p + 1},
                  {"min_source_column", 2 * p + 1 - 5},
                  {"max_determined_column", 3}};
    return v;
  }
  if (p == 3 && rank >= 3) {
    v.outcome = Outcome::RuledOut;
    v.note = "rank3_mui_degrees_out_of_range";
    for (int deg : mui_degrees(3, 3))
      v.evidence.emplace_back("mui_degree", deg);
    return v;
  }
  if (p == 2 && rank >= 3) {
    QuadraticSearchStats stats;
    auto witness = search_nonrestricting_quadratic(3, &stats);
    v.outcome = witness ? Outcome::Consistent : Outcome::RuledOut;
    v.note = "no_common_nonrestricting_quadratic";
    v.evidence = {{"candidates", stats.candidates},
                  {"restriction_checks", stats.restriction_checks},
                  {"witness_found", witness ? 1 : 0}};
    return v;
  }
  v.outcome = Outcome::Consistent;
  v.note = "rank-2 actions at p = 2, 3 are realized";
  return v;
}

Verdict prop_cyclic_checks(const ManifoldActionData& d, const SpectralRun& run) {
  d.validate();
  if (d.group_rank != 1) throw std::invalid_argument("prop_cyclic_checks: cyclic actions only");
  if (!d.flags.pseudofree || !d.flags.homologically_trivial)
    throw std::invalid_argument("prop_cyclic_checks: pseudofree + homologically trivial required");
  if (d.chi == 0) throw std::invalid_argument("prop_cyclic_checks: chi must be non-zero");

  Verdict v;
  v.rule = "cyclic_pseudofree_duality";
  if (d.b2 < 2 * d.b1) {
    v.outcome = Outcome::RuledOut;
    v.evidence = {{"b2", d.b2}, {"two_b1", 2 * d.b1}};
    v.note = "b2 >= 2 b1 fails";
    return v;
  }

  const SSPage& e2 = run.page(2);
  const SSPage& e3 = run.page(3);
  // rows of the matrix are the source basis; the map's kernel is the
  // null space of the transpose
  const FpMatrix& d23 = e2.differential(2, 3);
  int big_r = static_cast<int>(kernel_basis(d23.transposed()).size());

  if (e3.dim(2, 3) != big_r || e3.dim(4, 1) != big_r)
    throw std::logic_error("prop_cyclic_checks: dim E_3^{2,3} = dim E_3^{4,1} = R violated");
  if (e3.dim(3, 2) != d.b2 - 2 * d.b1 + 2 * big_r)
    throw std::logic_error("prop_cyclic_checks: dim E_3^{3,2} identity violated");
  int sum5 = totals(e3, 5);
  if (sum5 != 2 + d.b2 - 2 * d.b1 + 4 * big_r)
    throw std::logic_error("prop_cyclic_checks: level-5 sum identity violated");

  bool sikora = sikora_constraint_check(e3);
  v.evidence = {{"R", big_r},
                {"e3_totals_q5", sum5},
                {"chi", d.chi},
                {"sikora_balance", sikora ? 1 : 0}};
  if (big_r == 0 && sum5 == d.chi && sikora) {
    v.outcome = Outcome::Consistent;
  } else {
    v.outcome = Outcome::RuledOut;
    v.note = "R must vanish and the level-5 total must equal chi";
  }
  return v;
}

}  // namespace borel4

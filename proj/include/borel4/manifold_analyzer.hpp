#pragma once

#include <string>
#include <utility>
#include <vector>

#include "borel4/spectral_sequence.hpp"

namespace borel4 {

struct ActionFlags {
  bool orientation_preserving = false;
  bool homologically_trivial = false;
  bool pseudofree = false;
  bool fixed_set_nonempty = false;
  bool h1_fix_to_m_surjective = false;
  bool h1_torsion_free = false;
  bool kernel_has_trivial_action = false;  // ker(H^1(M) -> H^1(F)) non-trivial with trivial action
  bool h1_zero = false;
};

/// Numeric invariants of a (manifold, action) pair: Betti numbers b1, b2
/// (b0 = b4 = 1 and b3 = b1 are implied), the p-elementary torsion
/// dimension t of H_1, the multiplicities r0/r1/r2 of the
/// trivial/cyclotomic/free summands of H^2 modulo torsion, the Euler
/// characteristic, and the hypothesis flags of the supported results.
struct ManifoldActionData {
  int p = 2;
  int group_rank = 1;
  int b1 = 0, b2 = 0;
  int t = 0;
  int r0 = 0, r1 = 0, r2 = 0;
  int chi = 2;
  ActionFlags flags;

  /// chi = 2 - 2 b1 + b2, r0 + (p-1) r1 + p r2 = b2, counts >= 0, flag
  /// coherence (h1_zero forces b1 = 0 and t = 0). Throws on violation.
  void validate() const;

  /// Total F_p dimension of H^*(M): 2 + 2(b1 + t) + b2 + 2t.
  int fp_total() const { return 2 + 2 * (b1 + t) + b2 + 2 * t; }
};

struct SurfaceSpec {
  int genus = 0;  // crosscap count when non-orientable
  bool orientable = true;
};

struct FixedSetData {
  int isolated_points = 0;
  std::vector<SurfaceSpec> surfaces;

  int b0() const;
  int b1(int p) const;  // F_p Betti number; non-orientable pieces depend on p
  int b2(int p) const;
  int total(int p) const;
  int chi() const;  // field independent
  bool has_nonorientable() const;
};

enum class Outcome { Collapses, DoesNotCollapse, RuledOut, Consistent, Inconclusive };

std::string outcome_name(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  std::string rule;  // fixed tag naming the result that fired
  std::vector<std::pair<std::string, long long>> evidence;
  std::string note;
};

/// Rule-based collapse decision. Rules fire only when every hypothesis
/// flag is present; otherwise the verdict is Inconclusive.
///   fixed_h1_surjective_collapse : rank 1, orientation preserving,
///       F non-empty, H_1(F) ->> H_1(M)  =>  Collapses
///   invariant_kernel_noncollapse : rank 1, ker(H^1 M -> H^1 F) non-trivial
///       with trivial action  =>  DoesNotCollapse
///   cyclic_h1_surjectivity_iff   : rank 1, p odd, homologically trivial,
///       F non-empty, H_1 torsion free  =>  iff on the surjectivity flag
///   rank_two_h1_zero_iff         : rank 2, p odd, homologically trivial,
///       F non-empty, H_1 torsion free  =>  iff on h1_zero
///   h1_zero_fixed_point_collapse : homologically trivial, F non-empty,
///       H_1 = 0  =>  Collapses (no differential reaches the base row)
Verdict collapse_verdict(const ManifoldActionData& d);

/// Total-dimension criterion: equal totals collapse, smaller fixed-set
/// totals do not; fixed-set totals above the manifold totals violate the
/// standing inequality and throw.
Verdict totals_test(int manifold_totals, int fixed_totals);

struct FixedSetConstraints {
  int b1f;           // 2 b1(M)
  int b0f_plus_b2f;  // 2 + b2(M)
  int chi_f;         // 2 - 2 b1 + r0 - r1
};

/// Requires p odd, homological triviality, the surjectivity flag and
/// chi != 0.
FixedSetConstraints fixed_set_constraints(const ManifoldActionData& d);

struct DimFormulas {
  int h5;        // 2 b1 + (t - b) + t + r1
  int h6;        // 2 + (t - b) + t + r0
  int h5_mod_p;  // 2 + 2 b1 + 4 t + r0 + r1
};

DimFormulas lemma_dim_formulas(const ManifoldActionData& d, int b);

/// Unique b >= 0 with h5(b) + h6(b) = h5_mod_p; zero on every consistent
/// data row. The second form takes an externally measured mod-p dimension
/// and rejects data admitting no non-negative solution.
int deduce_b_zero(const ManifoldActionData& d);
int solve_b_from_mod_p_dim(const ManifoldActionData& d, int measured_h5_mod_p);

/// (chi / p) * (p + 1), the per-degree dimension of H^*(G; H^0 of the
/// singular set) for a pseudofree rank-2 action. Throws when p does not
/// divide chi; singular_bound_verdict reports that case as RuledOut.
int singular_set_bound(const ManifoldActionData& d);
Verdict singular_bound_verdict(const ManifoldActionData& d);

/// The rank bounds for pseudofree homologically trivial actions:
/// RuledOut for (p >= 5, n >= 2), (p = 3, n >= 3), (p = 2, n >= 3), each
/// with the governing sub-argument tag; Consistent otherwise.
Verdict pseudofree_rank_verdict(int p, int rank, const ManifoldActionData& d);

/// Dimension bookkeeping of the cyclic pseudofree case on a computed run:
/// requires b2 >= 2 b1, extracts R = dim ker d_2^{2,3}, verifies
/// dim E_3^{2,3} = dim E_3^{4,1} = R, dim E_3^{3,2} = b2 - 2 b1 + 2R and
/// the level-5 sum 2 + b2 - 2 b1 + 4R; Consistent iff R = 0 and the sum
/// equals chi.
Verdict prop_cyclic_checks(const ManifoldActionData& d, const SpectralRun& run);

}  // namespace borel4

#pragma once

#include <vector>

#include "borel4/graded_algebra.hpp"

namespace borel4 {

/// Elementary abelian group (Z/p)^rank. Rank 0 (the trivial group) is
/// accepted so spectral-sequence edge cases stay expressible; subgroup
/// enumeration requires rank >= 1.
struct GroupSpec {
  int p;
  int rank;
  GroupSpec(int p_, int rank_);
  bool operator==(const GroupSpec&) const = default;
};

/// F_p cohomology ring of the group: for p odd, rank polynomial
/// generators u1..un in degree 2 and rank exterior generators x1..xn in
/// degree 1; for p = 2, rank degree-1 polynomial generators x1..xn.
PresentationPtr cohomology_ring(const GroupSpec& g);

int group_dim(const GroupSpec& g, int q);  // dim_F_p H^q(G)

/// A subgroup of (Z/p)^n presented either by a generating vector (order-p
/// subgroup) or a hyperplane functional (index-p subgroup). Vectors are
/// normalized so the first non-zero coordinate is 1.
struct SubgroupSpec {
  enum class Kind { OrderP, IndexP };
  GroupSpec parent;
  Kind kind;
  FpVector vec;

  static SubgroupSpec order_p(const GroupSpec& parent, FpVector generator);
  static SubgroupSpec index_p(const GroupSpec& parent, FpVector functional);
  bool operator==(const SubgroupSpec&) const = default;
};

/// All (p^n - 1)/(p - 1) order-p subgroups in a fixed deterministic
/// order (normalized vectors, lexicographically).
std::vector<SubgroupSpec> order_p_subgroups(const GroupSpec& g);

/// Ring-level restriction H*(G) -> H*(K). For an order-p subgroup with
/// generator v: x_i -> v_i x, u_i -> v_i u. For an index-p subgroup the
/// generators are substituted along a basis of ker(functional).
AlgebraMap restriction_map(const GroupSpec& g, const SubgroupSpec& k);

/// Bockstein and P^1 (or Sq^1 at p = 2) on the cohomology ring:
/// beta(x_i) = u_i, beta(u_i) = 0, P^1(u_i) = u_i^p, P^1(x_i) = 0.
SteenrodAction steenrod_action(const GroupSpec& g);

/// Coefficient modules for H^q(Z/p; -), positive degrees only, reported
/// as F_p-dimensions.
enum class CoefficientKind {
  TrivialZ,       // Z with trivial action
  Cyclotomic,     // Z[zeta_p]
  FreeGroupRing,  // Z[G], cohomologically trivial
  TrivialTorsion, // (Z/p)^multiplicity with trivial action
  TrivialFp,      // F_p^multiplicity with trivial action
};

struct CoefficientModule {
  CoefficientKind kind;
  int multiplicity = 1;
};

int cp_integral_dims(const CoefficientModule& module, int q);  // q >= 1

/// dim_F_p H^q(Z/p; Z^{r0} + Z[zeta]^{r1} + Z[G]^{r2} + (Z/p)^t), q >= 1.
struct H2ModuleDims {
  int r0 = 0, r1 = 0, r2 = 0, t = 0;
  int dim(int q) const;
};

/// dim H^q(G; F_p[G/K]^multiplicity) via Shapiro: equals the multiplicity
/// for every q when K has order p.
struct PermutationModule {
  SubgroupSpec stabilizer;
  int multiplicity = 1;
};

int shapiro_dim(const GroupSpec& g, const PermutationModule& module, int q);

}  // namespace borel4

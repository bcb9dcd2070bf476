#pragma once

#include <optional>
#include <string>
#include <vector>

#include "borel4/group_cohomology.hpp"

namespace borel4 {

/// Graded ideal of a group cohomology ring, stored per degree as a
/// reduced-echelon span of coordinate vectors up to a cutoff.
class GradedIdeal {
 public:
  GradedIdeal(GroupSpec group, int cutoff);

  const GroupSpec& group() const { return group_; }
  const PresentationPtr& ambient() const { return ambient_; }
  int cutoff() const { return cutoff_; }

  int dim(int q) const;
  std::vector<AlgebraElement> basis(int q) const;
  bool contains(const AlgebraElement& e) const;  // degree must be <= cutoff

  /// One entry per basis direction, in insertion order: which operation
  /// first produced a class in that direction.
  const std::vector<std::string>& provenance(int q) const;

  bool insert(const AlgebraElement& e, const std::string& origin);

 private:
  GroupSpec group_;
  PresentationPtr ambient_;
  int cutoff_;
  std::vector<EchelonSpan> spans_;
  std::vector<std::vector<std::string>> provenance_;
};

/// Smallest ideal containing the seed class and closed under the
/// Bockstein and P^1 (Sq^1 at p = 2), saturated degree by degree up to
/// the cutoff. Supported groups: rank 2 (any p) and rank 3 at p = 2.
/// Seeds: x1 x2 for rank 2 odd p; the product of the distinct non-zero
/// linear forms for p = 2.
GradedIdeal steenrod_closure(const GroupSpec& g, int cutoff);

/// Definitional essential cohomology for rank 2: per-degree intersection
/// of the kernels of the restrictions to the (p+1) order-p subgroups.
/// Independent of any Steenrod convention; used as the oracle for
/// steenrod_closure.
GradedIdeal ess_by_restriction_kernels(const GroupSpec& g, int cutoff);

bool ess_membership(const GradedIdeal& ideal, const AlgebraElement& e);

struct MuiGeneratorSet {
  std::vector<AlgebraElement> generators;
  std::vector<int> degrees;
};

/// Free-module generators of the essential ideal over the polynomial
/// part: for rank 2 odd p these are x1x2, x1u2 - x2u1, x1u2^p - x2u1^p,
/// u1u2^p - u2u1^p in degrees 2, 3, 2p+1, 2p+2.
MuiGeneratorSet mui_generators(const GroupSpec& g);

/// Degrees of the full generator set, including the rank-3 p = 3 list
/// {3,4,8,9,20,21,25,26} which is shipped as cited data (recomputing it
/// needs the full invariant theory and is out of scope).
std::vector<int> mui_degrees(int p, int rank);

/// True iff dim Ess^q equals the free-module count
/// sum_gen dim R^{q - deg gen} for every q <= cutoff, R the polynomial
/// part of the ambient ring.
bool verify_free_module(const GradedIdeal& ideal, const MuiGeneratorSet& gens, int cutoff);

struct QuadraticSearchStats {
  int candidates = 0;
  long long restriction_checks = 0;
};

/// p = 2 only: exhaustive scan of the quadratic classes
/// sum a_i x_i^2 + sum b_ij x_i x_j for one restricting non-trivially to
/// every order-2 subgroup. Returns the first witness in enumeration
/// order, or nullopt (n = 3: all 64 candidates fail at one of the 7
/// subgroups).
std::optional<AlgebraElement> search_nonrestricting_quadratic(int n,
                                                              QuadraticSearchStats* stats = nullptr);

}  // namespace borel4

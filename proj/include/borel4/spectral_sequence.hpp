#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "borel4/essential_ideal.hpp"
#include "borel4/group_cohomology.hpp"

namespace borel4 {

/// Cohomology of the fiber 4-manifold: an F_p basis in degrees 0..4 with
/// labelled classes and a structure-constant multiplication table.
/// Degree 0 is {1}, degree 4 the orientation class. Validated at
/// construction: graded commutativity, associativity in the stored range,
/// and non-singularity of the pairing H^l x H^{4-l} -> H^4.
class FiberAlgebra {
 public:
  struct ProductRule {
    std::string a, b;
    std::vector<std::pair<std::string, int>> result;  // label, coefficient
  };

  FiberAlgebra(int p, std::array<std::vector<std::string>, 5> labels,
               const std::vector<ProductRule>& rules);

  int p() const { return p_; }
  int betti(int l) const;
  const std::vector<std::string>& labels(int l) const { return labels_[l]; }
  std::pair<int, int> find_class(const std::string& label) const;  // (degree, index)

  /// Structure constants of class (l1,i) * (l2,j) over the basis of
  /// degree l1+l2; zero vector when l1+l2 > 4.
  FpVector product(int l1, int i, int l2, int j) const;

  int total_dim() const;  // sum of the Betti numbers

 private:
  int p_;
  std::array<std::vector<std::string>, 5> labels_;
  // table_[l1][l2] flattened by (i * b_{l2} + j)
  std::array<std::array<std::vector<FpVector>, 5>, 5> table_;
};

/// One differential's worth of input: page r plus the values of d_r on
/// surviving classes written as (coefficient in H^*(G), fiber class) with
/// coefficient degree <= 3. Everything else follows by multiplicativity.
struct DifferentialTerm {
  AlgebraElement coeff;  // element of H^{k}(G)
  int fiber_degree = 0;
  FpVector fiber;  // coordinates over the fiber basis in fiber_degree
};

struct DifferentialEntry {
  AlgebraElement source_coeff;  // degree <= 3; the unit for fiber-level classes
  int source_fiber_degree = 0;
  FpVector source_fiber;
  std::vector<DifferentialTerm> target;  // empty = zero
};

struct DifferentialSpec {
  int page = 2;
  std::vector<DifferentialEntry> entries;
};

struct EngineOptions {
  int cutoff = -1;  // defaults to 2p + 6
  bool require_essential_bottom_row = false;
  std::shared_ptr<const GradedIdeal> essential;  // built on demand when null
};

/// One page of the Borel spectral sequence for a homologically trivial
/// action: E_2^{k,l} = H^k(G) x H^l(M). Basis vectors of later pages are
/// stored as coordinate vectors over the E_2 cell basis (group monomial x
/// fiber class), reduced against the accumulated image span, so bases and
/// dumps are canonical.
class SSPage {
 public:
  int page() const { return r_; }
  int cutoff() const { return cutoff_; }
  int max_column() const { return kmax_; }
  const GroupSpec& group() const { return group_; }
  const FiberAlgebra& fiber() const { return *fiber_; }

  int dim(int k, int l) const;
  const std::vector<FpVector>& basis(int k, int l) const;
  const EchelonSpan& boundary(int k, int l) const;

  bool has_differentials() const { return has_d_; }
  const FpMatrix& differential(int k, int l) const;  // rows: source basis, cols: target basis

  int cell_width(int k, int l) const;
  std::string basis_label(int k, int l, int i) const;

  friend SSPage build_e2(const GroupSpec& g, const FiberAlgebra& f, int cutoff);
  friend SSPage leibniz_extend(const SSPage& page, const DifferentialSpec& spec,
                               const EngineOptions& opts);
  friend SSPage turn_page(const SSPage& page);

 private:
  SSPage() = default;
  struct Cell {
    std::vector<FpVector> basis;
    std::optional<EchelonSpan> boundary;
    std::optional<FpMatrix> d;
  };
  Cell& cell(int k, int l);
  const Cell& cell(int k, int l) const;

  GroupSpec group_{2, 1};
  std::shared_ptr<const FiberAlgebra> fiber_;
  PresentationPtr ring_;
  int r_ = 2, cutoff_ = 0, kmax_ = 0;
  bool has_d_ = false;
  std::vector<std::array<Cell, 5>> cells_;               // [k][l]
  std::vector<std::vector<Monomial>> group_basis_;       // per column
};

SSPage build_e2(const GroupSpec& g, const FiberAlgebra& f, int cutoff);

/// Extends the specified differential to every bidegree by the graded
/// Leibniz rule (base classes are d_r-cycles) and H*(G)-linearity, checks
/// d_r compositions vanish, and rejects specifications that are
/// inconsistent or fail to determine some surviving class.
SSPage leibniz_extend(const SSPage& page, const DifferentialSpec& spec,
                      const EngineOptions& opts = {});

SSPage turn_page(const SSPage& page);

/// Sum over k+l = q of the page dimensions, q <= cutoff.
int totals(const SSPage& page, int q);

/// Duality balance on the three-row corner of the E_3 page of a cyclic
/// pseudofree run: dim E_3^{2,1} must equal dim E_3^{2,3}.
bool sikora_constraint_check(const SSPage& e3);

struct SpectralRun {
  std::vector<SSPage> pages;  // pages 2..6; each of 2..5 carries its matrices
  const SSPage& final_page() const { return pages.back(); }
  const SSPage& page(int r) const;
};

/// Runs E_2 -> E_6 (= E_infinity for a 4-dimensional fiber), applying the
/// given specs on their pages and the zero differential elsewhere.
SpectralRun run_schedule(const GroupSpec& g, const FiberAlgebra& f,
                         const std::vector<DifferentialSpec>& specs,
                         const EngineOptions& opts = {});

}  // namespace borel4

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "borel4/fp_matrix.hpp"

namespace borel4 {

struct GeneratorSpec {
  std::string name;
  int degree = 0;
  bool operator==(const GeneratorSpec&) const = default;
};

/// A graded-commutative F_p-algebra presented as polynomial generators
/// tensor exterior (square-zero) generators. For p odd the polynomial
/// degrees must be even and the exterior degrees odd. For p = 2 there is
/// no sign rule, exterior generators are disallowed, and polynomial
/// generators of any positive degree (notably degree 1) are accepted.
class AlgebraPresentation {
 public:
  AlgebraPresentation(int p, std::vector<GeneratorSpec> poly, std::vector<GeneratorSpec> ext);

  int p() const { return p_; }
  const std::vector<GeneratorSpec>& poly_gens() const { return poly_; }
  const std::vector<GeneratorSpec>& ext_gens() const { return ext_; }

  // index of a generator by name: (is_ext, position); throws if unknown
  std::pair<bool, int> find_generator(const std::string& name) const;

  bool operator==(const AlgebraPresentation& o) const;

 private:
  int p_;
  std::vector<GeneratorSpec> poly_, ext_;
};

using PresentationPtr = std::shared_ptr<const AlgebraPresentation>;

PresentationPtr make_presentation(int p, std::vector<GeneratorSpec> poly,
                                  std::vector<GeneratorSpec> ext);

/// Exponent record of one admissible monomial: arbitrary exponents on the
/// polynomial generators, 0/1 on the exterior ones.
struct Monomial {
  std::vector<int> poly_exp;
  std::vector<std::uint8_t> ext_exp;

  int degree(const AlgebraPresentation& pres) const;
  bool is_unit() const;
  bool operator==(const Monomial&) const = default;
};

/// Basis order used everywhere: fewer exterior factors first, then the
/// exterior pattern (earliest-declared factor first), then the polynomial
/// exponents in descending lex. Deterministic across runs, so coordinate
/// vectors and golden files are stable.
bool monomial_less(const Monomial& a, const Monomial& b);

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return monomial_less(a, b); }
};

/// Homogeneous element: presentation + degree + sparse coefficient map.
/// Zero coefficients are never stored; the zero element keeps its degree.
class AlgebraElement {
 public:
  static AlgebraElement zero(PresentationPtr pres, int degree);
  static AlgebraElement one(PresentationPtr pres);
  static AlgebraElement generator(PresentationPtr pres, const std::string& name);
  static AlgebraElement from_monomial(PresentationPtr pres, Monomial m, int coeff);

  const PresentationPtr& pres() const { return pres_; }
  int degree() const { return degree_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<Monomial, int, MonomialLess>& terms() const { return coeffs_; }

  void add_term(Monomial m, int coeff);  // checks homogeneity

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement scaled(int c) const;
  AlgebraElement operator-() const { return scaled(-1); }

  bool operator==(const AlgebraElement& o) const;

 private:
  AlgebraElement(PresentationPtr pres, int degree) : pres_(std::move(pres)), degree_(degree) {}
  PresentationPtr pres_;
  int degree_;
  std::map<Monomial, int, MonomialLess> coeffs_;
};

/// Graded-commutative product; the Koszul sign comes from reordering the
/// exterior factors and x^2 = 0 kills repeated exterior generators.
AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  return multiply(a, b);
}
AlgebraElement power(const AlgebraElement& a, int n);

/// Complete ordered monomial basis of the degree-q component.
std::vector<Monomial> degree_basis(const AlgebraPresentation& pres, int q);
int degree_dim(const AlgebraPresentation& pres, int q);

FpVector element_coordinates(const AlgebraElement& e, const std::vector<Monomial>& basis);
AlgebraElement element_from_coordinates(PresentationPtr pres, int degree,
                                        const std::vector<Monomial>& basis, const FpVector& v);

/// Degree-preserving algebra homomorphism, given by generator images.
/// Images of exterior generators must square to zero in the target.
class AlgebraMap {
 public:
  AlgebraMap(PresentationPtr source, PresentationPtr target,
             std::vector<AlgebraElement> poly_images, std::vector<AlgebraElement> ext_images);

  const PresentationPtr& source() const { return source_; }
  const PresentationPtr& target() const { return target_; }
  const AlgebraElement& poly_image(int i) const { return poly_images_[i]; }
  const AlgebraElement& ext_image(int i) const { return ext_images_[i]; }

 private:
  PresentationPtr source_, target_;
  std::vector<AlgebraElement> poly_images_, ext_images_;
};

AlgebraElement apply_map(const AlgebraMap& f, const AlgebraElement& e);
AlgebraMap identity_map(PresentationPtr pres);
AlgebraMap compose(const AlgebraMap& g, const AlgebraMap& f);  // g after f

enum class SteenrodOp { Bockstein, PowerOne };

/// Bockstein and first power operation, stored as generator images and
/// extended by the Cartan rule: the Bockstein is a graded derivation,
/// P^1(ab) = P^1(a) b + a P^1(b).
struct SteenrodAction {
  PresentationPtr pres;
  std::vector<AlgebraElement> bockstein_poly, bockstein_ext;  // degree +1
  std::vector<AlgebraElement> power_poly, power_ext;          // degree +2(p-1), unused for p = 2
};

AlgebraElement steenrod_apply(const SteenrodAction& s, SteenrodOp op, const AlgebraElement& e);
int steenrod_degree_shift(const AlgebraPresentation& pres, SteenrodOp op);

/// "x1*u2 - x2*u1" style rendering; coefficients are balanced around 0
/// so that p-1 prints as a leading minus.
std::string render_monomial(const AlgebraPresentation& pres, const Monomial& m);
std::string render_element(const AlgebraElement& e);

/// Inverse of render_element for scenario files and golden tests.
/// Accepts sums/differences of optional-integer-coefficient monomials,
/// e.g. "x1*u2 - x2*u1", "2*u1^3", "1", "0".
AlgebraElement parse_element(PresentationPtr pres, const std::string& text);

}  // namespace borel4

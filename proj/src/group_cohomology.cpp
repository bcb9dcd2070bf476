#include "borel4/group_cohomology.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace borel4 {

GroupSpec::GroupSpec(int p_, int rank_) : p(p_), rank(rank_) {
  if (!is_prime(p)) throw std::invalid_argument("GroupSpec: p must be prime");
  if (rank < 0) throw std::invalid_argument("GroupSpec: rank must be non-negative");
}

PresentationPtr cohomology_ring(const GroupSpec& g) {
  std::vector<GeneratorSpec> poly, ext;
  for (int i = 1; i <= g.rank; ++i) {
    std::string idx = std::to_string(i);
    if (g.p == 2) {
      poly.push_back({"x" + idx, 1});
    } else {
      poly.push_back({"u" + idx, 2});
      ext.push_back({"x" + idx, 1});
    }
  }
  return make_presentation(g.p, std::move(poly), std::move(ext));
}

int group_dim(const GroupSpec& g, int q) {
  if (q < 0) return 0;
  return degree_dim(*cohomology_ring(g), q);
}

static FpVector normalized(FpVector v, int p, const char* what) {
  for (int& x : v) x = fp_normalize(x, p);
  auto it = std::find_if(v.begin(), v.end(), [](int x) { return x != 0; });
  if (it == v.end()) throw std::invalid_argument(std::string(what) + ": zero vector");
  int inv = fp_inv(*it, p);
  for (int& x : v) x = fp_mul(x, inv, p);
  return v;
}

SubgroupSpec SubgroupSpec::order_p(const GroupSpec& parent, FpVector generator) {
  if (parent.rank < 1) throw std::invalid_argument("order_p: parent must have rank >= 1");
  if (generator.size() != static_cast<std::size_t>(parent.rank))
    throw std::invalid_argument("order_p: vector length must equal the rank");
  return SubgroupSpec{parent, Kind::OrderP, normalized(std::move(generator), parent.p, "order_p")};
}

SubgroupSpec SubgroupSpec::index_p(const GroupSpec& parent, FpVector functional) {
  if (parent.rank < 1) throw std::invalid_argument("index_p: parent must have rank >= 1");
  if (functional.size() != static_cast<std::size_t>(parent.rank))
    throw std::invalid_argument("index_p: functional length must equal the rank");
  return SubgroupSpec{parent, Kind::IndexP, normalized(std::move(functional), parent.p, "index_p")};
}

std::vector<SubgroupSpec> order_p_subgroups(const GroupSpec& g) {
  if (g.rank < 1) throw std::invalid_argument("order_p_subgroups: rank must be >= 1");
  std::vector<SubgroupSpec> out;
  FpVector v(g.rank, 0);
  // lexicographic sweep over all non-zero vectors, keeping the normalized ones
  while (true) {
    int i = g.rank - 1;
    while (i >= 0 && v[i] == g.p - 1) v[i--] = 0;
    if (i < 0) break;
    ++v[i];
    auto first = std::find_if(v.begin(), v.end(), [](int x) { return x != 0; });
    if (first != v.end() && *first == 1) out.push_back(SubgroupSpec{g, SubgroupSpec::Kind::OrderP, v});
  }
  return out;
}

AlgebraMap restriction_map(const GroupSpec& g, const SubgroupSpec& k) {
  if (!(k.parent == g)) throw std::invalid_argument("restriction_map: subgroup of a different group");
  PresentationPtr src = cohomology_ring(g);

  // columns of the substitution: coefficient of the j-th target generator
  // in the image of the i-th source generator
  std::vector<FpVector> coeff;  // coeff[i][j]
  int target_rank;
  if (k.kind == SubgroupSpec::Kind::OrderP) {
    target_rank = 1;
    coeff.assign(g.rank, FpVector(1, 0));
    for (int i = 0; i < g.rank; ++i) coeff[i][0] = k.vec[i];
  } else {
    // basis of ker(functional): for each non-pivot coordinate i, the
    // vector e_i - (f_i / f_j) e_j where j is the pivot
    target_rank = g.rank - 1;
    if (target_rank < 0) throw std::invalid_argument("restriction_map: rank too small");
    int pivot = 0;
    while (k.vec[pivot] == 0) ++pivot;
    coeff.assign(g.rank, FpVector(target_rank, 0));
    int col = 0;
    int inv = fp_inv(k.vec[pivot], g.p);
    for (int i = 0; i < g.rank; ++i) {
      if (i == pivot) continue;
      // kernel basis vector w_col = e_i - (f_i/f_pivot) e_pivot
      coeff[i][col] = 1;
      coeff[pivot][col] = fp_neg(fp_mul(k.vec[i], inv, g.p), g.p);
      ++col;
    }
  }

  GroupSpec target(g.p, target_rank);
  PresentationPtr dst = cohomology_ring(target);

  auto linear_image = [&](const std::string& prefix, int degree, int i) {
    AlgebraElement img = AlgebraElement::zero(dst, degree);
    for (int j = 0; j < target_rank; ++j) {
      if (coeff[i][j] == 0) continue;
      img = img + AlgebraElement::generator(dst, prefix + std::to_string(j + 1)).scaled(coeff[i][j]);
    }
    return img;
  };

  std::vector<AlgebraElement> poly_images, ext_images;
  for (int i = 0; i < g.rank; ++i) {
    if (g.p == 2) {
      poly_images.push_back(linear_image("x", 1, i));
    } else {
      poly_images.push_back(linear_image("u", 2, i));
      ext_images.push_back(linear_image("x", 1, i));
    }
  }
  return AlgebraMap(src, dst, std::move(poly_images), std::move(ext_images));
}

SteenrodAction steenrod_action(const GroupSpec& g) {
  PresentationPtr pres = cohomology_ring(g);
  SteenrodAction s;
  s.pres = pres;
  if (g.p == 2) {
    for (int i = 1; i <= g.rank; ++i) {
      AlgebraElement x = AlgebraElement::generator(pres, "x" + std::to_string(i));
      s.bockstein_poly.push_back(multiply(x, x));  // Sq^1 x = x^2
    }
  } else {
    for (int i = 1; i <= g.rank; ++i) {
      std::string idx = std::to_string(i);
      s.bockstein_poly.push_back(AlgebraElement::zero(pres, 3));  // beta u = 0
      s.power_poly.push_back(power(AlgebraElement::generator(pres, "u" + idx), g.p));
      s.bockstein_ext.push_back(AlgebraElement::generator(pres, "u" + idx));  // beta x = u
      s.power_ext.push_back(AlgebraElement::zero(pres, 1 + 2 * (g.p - 1)));   // P^1 x = 0
    }
  }
  return s;
}

int cp_integral_dims(const CoefficientModule& module, int q) {
  if (q < 1) throw std::invalid_argument("cp_integral_dims: positive-degree table only");
  if (module.multiplicity < 0) throw std::invalid_argument("cp_integral_dims: negative multiplicity");
  switch (module.kind) {
    case CoefficientKind::TrivialZ:
      return q % 2 == 0 ? module.multiplicity : 0;
    case CoefficientKind::Cyclotomic:
      return q % 2 == 1 ? module.multiplicity : 0;
    case CoefficientKind::FreeGroupRing:
      return 0;
    case CoefficientKind::TrivialTorsion:
    case CoefficientKind::TrivialFp:
      return module.multiplicity;
  }
  return 0;
}

int H2ModuleDims::dim(int q) const {
  int d = 0;
  d += cp_integral_dims({CoefficientKind::TrivialZ, r0}, q);
  d += cp_integral_dims({CoefficientKind::Cyclotomic, r1}, q);
  d += cp_integral_dims({CoefficientKind::FreeGroupRing, r2}, q);
  d += cp_integral_dims({CoefficientKind::TrivialTorsion, t}, q);
  return d;
}

int shapiro_dim(const GroupSpec& g, const PermutationModule& module, int q) {
  if (q < 0) throw std::invalid_argument("shapiro_dim: negative degree");
  if (module.multiplicity < 0) throw std::invalid_argument("shapiro_dim: negative multiplicity");
  if (!(module.stabilizer.parent == g))
    throw std::invalid_argument("shapiro_dim: stabilizer of a different group");
  if (module.stabilizer.kind != SubgroupSpec::Kind::OrderP)
    throw std::invalid_argument("shapiro_dim: stabilizer must have order p");
  // H^q(G; F_p[G/K]) = H^q(K; F_p), which is one-dimensional in every degree
  return module.multiplicity;
}

}  // namespace borel4

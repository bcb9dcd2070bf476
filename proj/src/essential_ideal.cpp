#include "borel4/essential_ideal.hpp"

#include <deque>
#include <stdexcept>

namespace borel4 {

GradedIdeal::GradedIdeal(GroupSpec group, int cutoff)
    : group_(group), ambient_(cohomology_ring(group)), cutoff_(cutoff) {
  if (cutoff < 0) throw std::invalid_argument("GradedIdeal: negative cutoff");
  for (int q = 0; q <= cutoff; ++q)
    spans_.emplace_back(group.p, static_cast<std::size_t>(degree_dim(*ambient_, q)));
  provenance_.resize(cutoff + 1);
}

int GradedIdeal::dim(int q) const {
  if (q < 0 || q > cutoff_) return 0;
  return spans_[q].dim();
}

std::vector<AlgebraElement> GradedIdeal::basis(int q) const {
  std::vector<AlgebraElement> out;
  if (q < 0 || q > cutoff_) return out;
  auto monos = degree_basis(*ambient_, q);
  for (const auto& row : spans_[q].rows())
    out.push_back(element_from_coordinates(ambient_, q, monos, row));
  return out;
}

bool GradedIdeal::contains(const AlgebraElement& e) const {
  if (e.is_zero()) return true;
  if (!(*e.pres() == *ambient_)) throw std::invalid_argument("GradedIdeal: wrong ambient ring");
  if (e.degree() > cutoff_)
    throw std::out_of_range("GradedIdeal: degree above the computed cutoff");
  return spans_[e.degree()].contains(element_coordinates(e, degree_basis(*ambient_, e.degree())));
}

const std::vector<std::string>& GradedIdeal::provenance(int q) const { return provenance_.at(q); }

bool GradedIdeal::insert(const AlgebraElement& e, const std::string& origin) {
  if (e.is_zero()) return false;
  if (e.degree() > cutoff_) return false;
  bool grew = spans_[e.degree()].insert(element_coordinates(e, degree_basis(*ambient_, e.degree())));
  if (grew) provenance_[e.degree()].push_back(origin);
  return grew;
}

bool ess_membership(const GradedIdeal& ideal, const AlgebraElement& e) { return ideal.contains(e); }

namespace {

AlgebraElement closure_seed(const GroupSpec& g, PresentationPtr pres) {
  if (g.p != 2) {
    if (g.rank != 2) throw std::invalid_argument("steenrod_closure: odd p supports rank 2 only");
    return multiply(AlgebraElement::generator(pres, "x1"), AlgebraElement::generator(pres, "x2"));
  }
  if (g.rank != 2 && g.rank != 3)
    throw std::invalid_argument("steenrod_closure: p = 2 supports rank 2 and 3 only");
  // product of the distinct non-zero linear forms
  AlgebraElement seed = AlgebraElement::one(pres);
  for (const auto& k : order_p_subgroups(g)) {
    AlgebraElement form = AlgebraElement::zero(pres, 1);
    for (int i = 0; i < g.rank; ++i)
      if (k.vec[i])
        form = form + AlgebraElement::generator(pres, "x" + std::to_string(i + 1)).scaled(k.vec[i]);
    seed = multiply(seed, form);
  }
  return seed;
}

}  // namespace

GradedIdeal steenrod_closure(const GroupSpec& g, int cutoff) {
  PresentationPtr pres = cohomology_ring(g);
  AlgebraElement seed = closure_seed(g, pres);
  if (cutoff < seed.degree())
    throw std::invalid_argument("steenrod_closure: cutoff below the seed degree");

  GradedIdeal ideal(g, cutoff);
  SteenrodAction steenrod = steenrod_action(g);

  std::vector<AlgebraElement> gens;
  for (const auto& gspec : pres->poly_gens()) gens.push_back(AlgebraElement::generator(pres, gspec.name));
  for (const auto& gspec : pres->ext_gens()) gens.push_back(AlgebraElement::generator(pres, gspec.name));

  std::deque<AlgebraElement> work;
  ideal.insert(seed, "seed");
  work.push_back(seed);

  while (!work.empty()) {
    AlgebraElement e = std::move(work.front());
    work.pop_front();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (e.degree() + gens[i].degree() > cutoff) continue;
      AlgebraElement prod = multiply(e, gens[i]);
      if (ideal.insert(prod, "mul " + render_element(gens[i]))) work.push_back(std::move(prod));
    }
    if (e.degree() + 1 <= cutoff) {
      AlgebraElement b = steenrod_apply(steenrod, SteenrodOp::Bockstein, e);
      if (ideal.insert(b, g.p == 2 ? "sq1" : "bockstein")) work.push_back(std::move(b));
    }
    if (g.p != 2 && e.degree() + 2 * (g.p - 1) <= cutoff) {
      AlgebraElement pw = steenrod_apply(steenrod, SteenrodOp::PowerOne, e);
      if (ideal.insert(pw, "power")) work.push_back(std::move(pw));
    }
  }
  return ideal;
}

GradedIdeal ess_by_restriction_kernels(const GroupSpec& g, int cutoff) {
  if (g.rank != 2) throw std::invalid_argument("ess_by_restriction_kernels: rank 2 only");
  PresentationPtr pres = cohomology_ring(g);
  GradedIdeal ideal(g, cutoff);

  std::vector<AlgebraMap> restrictions;
  for (const auto& k : order_p_subgroups(g)) restrictions.push_back(restriction_map(g, k));
  GroupSpec sub(g.p, 1);
  PresentationPtr sub_pres = cohomology_ring(sub);

  for (int q = 1; q <= cutoff; ++q) {
    auto monos = degree_basis(*pres, q);
    auto sub_monos = degree_basis(*sub_pres, q);
    std::size_t n = monos.size();
    FpMatrix m(g.p, restrictions.size() * sub_monos.size(), n);
    for (std::size_t j = 0; j < n; ++j) {
      AlgebraElement basis_el = element_from_coordinates(pres, q, monos, [&] {
        FpVector unit(n, 0);
        unit[j] = 1;
        return unit;
      }());
      for (std::size_t r = 0; r < restrictions.size(); ++r) {
        FpVector img = element_coordinates(apply_map(restrictions[r], basis_el), sub_monos);
        for (std::size_t t = 0; t < sub_monos.size(); ++t)
          m.set(r * sub_monos.size() + t, j, img[t]);
      }
    }
    for (const auto& v : kernel_basis(m))
      ideal.insert(element_from_coordinates(pres, q, monos, v), "restriction kernel");
  }
  return ideal;
}

MuiGeneratorSet mui_generators(const GroupSpec& g) {
  PresentationPtr pres = cohomology_ring(g);
  MuiGeneratorSet out;
  if (g.p != 2) {
    if (g.rank != 2) throw std::invalid_argument("mui_generators: odd p supports rank 2 only");
    AlgebraElement x1 = AlgebraElement::generator(pres, "x1");
    AlgebraElement x2 = AlgebraElement::generator(pres, "x2");
    AlgebraElement u1 = AlgebraElement::generator(pres, "u1");
    AlgebraElement u2 = AlgebraElement::generator(pres, "u2");
    out.generators.push_back(multiply(x1, x2));
    out.generators.push_back(multiply(x1, u2) - multiply(x2, u1));
    out.generators.push_back(multiply(x1, power(u2, g.p)) - multiply(x2, power(u1, g.p)));
    out.generators.push_back(multiply(u1, power(u2, g.p)) - multiply(u2, power(u1, g.p)));
  } else {
    if (g.rank != 2 && g.rank != 3)
      throw std::invalid_argument("mui_generators: p = 2 supports rank 2 and 3 only");
    out.generators.push_back(closure_seed(g, pres));
  }
  for (const auto& e : out.generators) out.degrees.push_back(e.degree());
  return out;
}

std::vector<int> mui_degrees(int p, int rank) {
  if (rank == 2 && p != 2) return {2, 3, 2 * p + 1, 2 * p + 2};
  if (rank == 2 && p == 2) return {3};
  if (rank == 3 && p == 2) return {7};
  if (rank == 3 && p == 3) return {3, 4, 8, 9, 20, 21, 25, 26};  // cited data, not recomputed
  throw std::invalid_argument("mui_degrees: no table for this (p, rank)");
}

bool verify_free_module(const GradedIdeal& ideal, const MuiGeneratorSet& gens, int cutoff) {
  if (cutoff > ideal.cutoff()) throw std::invalid_argument("verify_free_module: cutoff too large");
  PresentationPtr poly_part =
      make_presentation(ideal.group().p, ideal.ambient()->poly_gens(), {});
  for (int q = 0; q <= cutoff; ++q) {
    int expected = 0;
    for (int d : gens.degrees)
      if (q - d >= 0) expected += degree_dim(*poly_part, q - d);
    if (ideal.dim(q) != expected) return false;
  }
  return true;
}

std::optional<AlgebraElement> search_nonrestricting_quadratic(int n, QuadraticSearchStats* stats) {
  if (n < 1) throw std::invalid_argument("search_nonrestricting_quadratic: rank must be >= 1");
  GroupSpec g(2, n);
  PresentationPtr pres = cohomology_ring(g);

  std::vector<AlgebraElement> quad_monomials;  // x_i^2 first, then x_i x_j, i < j
  for (int i = 0; i < n; ++i) {
    AlgebraElement x = AlgebraElement::generator(pres, "x" + std::to_string(i + 1));
    quad_monomials.push_back(multiply(x, x));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      quad_monomials.push_back(multiply(AlgebraElement::generator(pres, "x" + std::to_string(i + 1)),
                                        AlgebraElement::generator(pres, "x" + std::to_string(j + 1))));

  std::vector<AlgebraMap> restrictions;
  for (const auto& k : order_p_subgroups(g)) restrictions.push_back(restriction_map(g, k));

  std::optional<AlgebraElement> witness;
  const int bits = static_cast<int>(quad_monomials.size());
  for (int mask = 0; mask < (1 << bits); ++mask) {
    AlgebraElement alpha = AlgebraElement::zero(pres, 2);
    for (int b = 0; b < bits; ++b)
      if ((mask >> b) & 1) alpha = alpha + quad_monomials[b];
    if (stats) ++stats->candidates;
    bool ok = true;
    for (const auto& res : restrictions) {
      if (stats) ++stats->restriction_checks;
      if (apply_map(res, alpha).is_zero()) ok = false;
    }
    if (ok && !witness) witness = alpha;
  }
  return witness;
}

}  // namespace borel4

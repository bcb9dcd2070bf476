#include "borel4/spectral_sequence.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace borel4 {

namespace {

// headroom above the reported cutoff so that four page turns of column
// shifts 2+3+4+5 never starve a reported cell of its targets
constexpr int kColumnHeadroom = 14;

std::string cell_name(int k, int l) {
  std::ostringstream os;
  os << "(" << k << "," << l << ")";
  return os.str();
}

}  // namespace

FiberAlgebra::FiberAlgebra(int p, std::array<std::vector<std::string>, 5> labels,
                           const std::vector<ProductRule>& rules)
    : p_(p), labels_(std::move(labels)) {
  if (!is_prime(p)) throw std::invalid_argument("FiberAlgebra: modulus must be prime");
  if (labels_[0] != std::vector<std::string>{"1"})
    throw std::invalid_argument("FiberAlgebra: degree 0 basis must be {1}");
  if (labels_[4].size() != 1)
    throw std::invalid_argument("FiberAlgebra: degree 4 must hold a single orientation class");
  if (labels_[1].size() != labels_[3].size())
    throw std::invalid_argument("FiberAlgebra: degrees 1 and 3 must pair up");
  std::vector<std::string> all;
  for (const auto& per_degree : labels_)
    for (const auto& s : per_degree) {
      if (s.empty()) throw std::invalid_argument("FiberAlgebra: empty label");
      all.push_back(s);
    }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument("FiberAlgebra: labels must be unique");

  for (int l1 = 0; l1 <= 4; ++l1)
    for (int l2 = 0; l2 + l1 <= 4; ++l2)
      table_[l1][l2].assign(labels_[l1].size() * labels_[l2].size(),
                            FpVector(labels_[l1 + l2].size(), 0));

  // unit row and column
  for (int l = 0; l <= 4; ++l)
    for (int i = 0; i < betti(l); ++i) {
      FpVector unit(labels_[l].size(), 0);
      unit[i] = 1;
      table_[0][l][static_cast<std::size_t>(i)] = unit;
      table_[l][0][static_cast<std::size_t>(i) * 1] = unit;
    }

  std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, bool> given;
  for (const auto& rule : rules) {
    auto [la, ia] = find_class(rule.a);
    auto [lb, ib] = find_class(rule.b);
    if (la == 0 || lb == 0) throw std::invalid_argument("FiberAlgebra: unit products are implicit");
    if (la + lb > 4) throw std::invalid_argument("FiberAlgebra: product above the top degree");
    FpVector value(labels_[la + lb].size(), 0);
    for (const auto& [label, c] : rule.result) {
      auto [lt, it] = find_class(label);
      if (lt != la + lb) throw std::invalid_argument("FiberAlgebra: product term in wrong degree");
      value[it] = fp_add(value[it], fp_normalize(c, p_), p_);
    }
    int sign = (p_ != 2 && (la * lb) % 2 == 1) ? -1 : 1;
    auto key = std::make_pair(std::make_pair(la, ia), std::make_pair(lb, ib));
    auto tkey = std::make_pair(std::make_pair(lb, ib), std::make_pair(la, ia));
    if (given.count(key)) throw std::invalid_argument("FiberAlgebra: duplicate product rule");
    given[key] = true;
    table_[la][lb][static_cast<std::size_t>(ia) * labels_[lb].size() + ib] = value;
    if (!given.count(tkey)) {
      FpVector t = sign == 1 ? value : fpvec_scale(value, p_ - 1, p_);
      table_[lb][la][static_cast<std::size_t>(ib) * labels_[la].size() + ia] = t;
    } else {
      FpVector t = table_[lb][la][static_cast<std::size_t>(ib) * labels_[la].size() + ia];
      FpVector expect = sign == 1 ? value : fpvec_scale(value, p_ - 1, p_);
      if (t != expect) throw std::invalid_argument("FiberAlgebra: table is not graded-commutative");
    }
  }

  // associativity in the stored range
  for (int la = 1; la <= 2; ++la)
    for (int lb = 1; la + lb <= 3; ++lb)
      for (int lc = 1; la + lb + lc <= 4; ++lc)
        for (int ia = 0; ia < betti(la); ++ia)
          for (int ib = 0; ib < betti(lb); ++ib)
            for (int ic = 0; ic < betti(lc); ++ic) {
              FpVector ab = product(la, ia, lb, ib);
              FpVector left(labels_[la + lb + lc].size(), 0);
              for (int m = 0; m < betti(la + lb); ++m)
                if (ab[m] != 0) fpvec_axpy(left, ab[m], product(la + lb, m, lc, ic), p_);
              FpVector bc = product(lb, ib, lc, ic);
              FpVector right(labels_[la + lb + lc].size(), 0);
              for (int m = 0; m < betti(lb + lc); ++m)
                if (bc[m] != 0) fpvec_axpy(right, bc[m], product(la, ia, lb + lc, m), p_);
              if (left != right)
                throw std::invalid_argument("FiberAlgebra: table is not associative");
            }

  // Poincare pairing must be non-singular in every degree
  for (int l = 0; l <= 4; ++l) {
    int b = betti(l);
    if (b != betti(4 - l)) throw std::invalid_argument("FiberAlgebra: pairing needs b_l = b_{4-l}");
    if (b == 0) continue;
    FpMatrix pairing(p_, b, b);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) pairing.set(i, j, product(l, i, 4 - l, j)[0]);
    if (rank(pairing) != b)
      throw std::invalid_argument("FiberAlgebra: Poincare pairing is singular in degree " +
                                  std::to_string(l));
  }
}

int FiberAlgebra::betti(int l) const {
  if (l < 0 || l > 4) return 0;
  return static_cast<int>(labels_[l].size());
}

std::pair<int, int> FiberAlgebra::find_class(const std::string& label) const {
  for (int l = 0; l <= 4; ++l)
    for (std::size_t i = 0; i < labels_[l].size(); ++i)
      if (labels_[l][i] == label) return {l, static_cast<int>(i)};
  throw std::invalid_argument("FiberAlgebra: unknown class " + label);
}

FpVector FiberAlgebra::product(int l1, int i, int l2, int j) const {
  if (l1 + l2 > 4) return {};
  return table_[l1][l2][static_cast<std::size_t>(i) * labels_[l2].size() + j];
}

int FiberAlgebra::total_dim() const {
  int s = 0;
  for (int l = 0; l <= 4; ++l) s += betti(l);
  return s;
}

SSPage::Cell& SSPage::cell(int k, int l) { return cells_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]; }
const SSPage::Cell& SSPage::cell(int k, int l) const {
  return cells_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
}

int SSPage::cell_width(int k, int l) const {
  if (k < 0 || k > kmax_ || l < 0 || l > 4) return 0;
  return static_cast<int>(group_basis_[static_cast<std::size_t>(k)].size()) * fiber_->betti(l);
}

int SSPage::dim(int k, int l) const {
  if (k < 0 || k > kmax_ || l < 0 || l > 4) return 0;
  return static_cast<int>(cell(k, l).basis.size());
}

const std::vector<FpVector>& SSPage::basis(int k, int l) const {
  if (k < 0 || k > kmax_ || l < 0 || l > 4) throw std::out_of_range("SSPage::basis: bidegree outside the window");
  return cell(k, l).basis;
}

const EchelonSpan& SSPage::boundary(int k, int l) const {
  if (k < 0 || k > kmax_ || l < 0 || l > 4) throw std::out_of_range("SSPage::boundary: bidegree outside the window");
  return *cell(k, l).boundary;
}

const FpMatrix& SSPage::differential(int k, int l) const {
  const auto& c = cell(k, l);
  if (!c.d) throw std::logic_error("SSPage::differential: no matrix at " + cell_name(k, l));
  return *c.d;
}

std::string SSPage::basis_label(int k, int l, int i) const {
  const FpVector& v = basis(k, l)[static_cast<std::size_t>(i)];
  const auto& gb = group_basis_[static_cast<std::size_t>(k)];
  const int b = fiber_->betti(l);
  const int p = group_.p;
  std::ostringstream os;
  bool first = true;
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    if (v[idx] == 0) continue;
    int gi = static_cast<int>(idx) / b;
    int fi = static_cast<int>(idx) % b;
    int balanced = v[idx] <= p / 2 ? v[idx] : v[idx] - p;
    bool neg = balanced < 0;
    int mag = neg ? -balanced : balanced;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    std::string gpart = render_monomial(*ring_, gb[static_cast<std::size_t>(gi)]);
    std::string fpart = fiber_->labels(l)[static_cast<std::size_t>(fi)];
    std::vector<std::string> pieces;
    if (mag != 1) pieces.push_back(std::to_string(mag));
    if (gpart != "1") pieces.push_back(gpart);
    if (fpart != "1") pieces.push_back(fpart);
    if (pieces.empty()) pieces.push_back("1");
    for (std::size_t t = 0; t < pieces.size(); ++t) os << (t ? "*" : "") << pieces[t];
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

// E_2-level bilinear product: (a (x) u) * (b (x) v) with the interchange
// sign (-1)^{|u||b|}; group parts multiply in H^*(G), fiber parts through
// the structure-constant table.
FpVector e2_product(const SSPage& page, int k1, int l1, const FpVector& v1, int k2, int l2,
                    const FpVector& v2, const std::vector<std::vector<Monomial>>& gb,
                    PresentationPtr ring, const FiberAlgebra& fib) {
  const int p = fib.p();
  const int b1 = fib.betti(l1), b2 = fib.betti(l2);
  const int bt = fib.betti(l1 + l2);
  FpVector out(static_cast<std::size_t>(page.cell_width(k1 + k2, l1 + l2)), 0);
  if (out.empty()) return out;
  const auto& target_monos = gb[static_cast<std::size_t>(k1 + k2)];
  int sign = (p != 2 && (l1 * k2) % 2 == 1) ? -1 : 1;
  for (std::size_t i1 = 0; i1 < v1.size(); ++i1) {
    if (v1[i1] == 0) continue;
    int g1 = static_cast<int>(i1) / b1, f1 = static_cast<int>(i1) % b1;
    for (std::size_t i2 = 0; i2 < v2.size(); ++i2) {
      if (v2[i2] == 0) continue;
      int g2 = static_cast<int>(i2) / b2, f2 = static_cast<int>(i2) % b2;
      FpVector fprod = fib.product(l1, f1, l2, f2);
      if (fprod.empty() || fpvec_is_zero(fprod)) continue;
      AlgebraElement gprod = multiply(
          AlgebraElement::from_monomial(ring, gb[static_cast<std::size_t>(k1)][static_cast<std::size_t>(g1)], 1),
          AlgebraElement::from_monomial(ring, gb[static_cast<std::size_t>(k2)][static_cast<std::size_t>(g2)], 1));
      if (gprod.is_zero()) continue;
      FpVector gcoords = element_coordinates(gprod, target_monos);
      int c = fp_normalize(static_cast<long long>(v1[i1]) * v2[i2] * sign, p);
      for (std::size_t gi = 0; gi < gcoords.size(); ++gi) {
        if (gcoords[gi] == 0) continue;
        for (std::size_t fi = 0; fi < fprod.size(); ++fi) {
          if (fprod[fi] == 0) continue;
          std::size_t idx = gi * static_cast<std::size_t>(bt) + fi;
          out[idx] = fp_normalize(out[idx] + static_cast<long long>(c) * gcoords[gi] * fprod[fi], p);
        }
      }
    }
  }
  return out;
}

struct KnownClass {
  int k, l;
  FpVector v;   // E_2 coordinates at (k, l)
  FpVector dv;  // E_2 coordinates at (k + r, l - r + 1); empty when that row is < 0
};

}  // namespace

SSPage build_e2(const GroupSpec& g, const FiberAlgebra& f, int cutoff) {
  if (cutoff < 4) throw std::invalid_argument("build_e2: cutoff must be at least the fiber dimension");
  if (f.p() != g.p) throw std::invalid_argument("build_e2: fiber and group moduli differ");
  SSPage page;
  page.group_ = g;
  page.fiber_ = std::make_shared<const FiberAlgebra>(f);
  page.ring_ = cohomology_ring(g);
  page.r_ = 2;
  page.cutoff_ = cutoff;
  page.kmax_ = cutoff + kColumnHeadroom;
  page.group_basis_.resize(static_cast<std::size_t>(page.kmax_) + 1);
  for (int k = 0; k <= page.kmax_; ++k)
    page.group_basis_[static_cast<std::size_t>(k)] = degree_basis(*page.ring_, k);
  page.cells_.resize(static_cast<std::size_t>(page.kmax_) + 1);
  for (int k = 0; k <= page.kmax_; ++k)
    for (int l = 0; l <= 4; ++l) {
      auto& c = page.cell(k, l);
      int w = page.cell_width(k, l);
      c.boundary.emplace(g.p, static_cast<std::size_t>(w));
      for (int i = 0; i < w; ++i) {
        FpVector unit(static_cast<std::size_t>(w), 0);
        unit[static_cast<std::size_t>(i)] = 1;
        c.basis.push_back(std::move(unit));
      }
    }
  return page;
}

SSPage leibniz_extend(const SSPage& input, const DifferentialSpec& spec, const EngineOptions& opts) {
  if (spec.page != input.page())
    throw std::invalid_argument("leibniz_extend: spec is for page " + std::to_string(spec.page) +
                                ", not " + std::to_string(input.page()));
  SSPage page = input;
  const int r = page.r_;
  const int p = page.group_.p;
  const int kmax = page.kmax_;
  const auto& fib = *page.fiber_;
  auto width = [&](int k, int l) { return page.cell_width(k, l); };
  auto target_of = [&](int k, int l) { return std::make_pair(k + r, l - r + 1); };
  auto target_valid = [&](int k, int l) {
    auto [tk, tl] = target_of(k, l);
    return tl >= 0 && tk <= kmax;
  };

  // -- fast path: the all-zero differential
  if (spec.entries.empty()) {
    for (int k = 0; k <= kmax; ++k)
      for (int l = 0; l <= 4; ++l) {
        auto& c = page.cell(k, l);
        auto [tk, tl] = target_of(k, l);
        std::size_t tdim = target_valid(k, l) ? page.cell(tk, tl).basis.size() : 0;
        c.d.emplace(p, c.basis.size(), tdim);
      }
    page.has_d_ = true;
    return page;
  }

  // -- validate entries, building the primitive known classes
  std::vector<KnownClass> primitives;
  std::map<std::pair<int, int>, LinearExtension> prim_ext;
  auto add_primitive = [&](int k, int l, FpVector v, FpVector dv) {
    const bool tvalid = target_valid(k, l);
    FpVector dv_reduced;
    if (tvalid) {
      auto [tk, tl] = target_of(k, l);
      if (dv.empty()) dv.assign(static_cast<std::size_t>(width(tk, tl)), 0);
      dv_reduced = page.cell(tk, tl).boundary->reduce(dv);
    } else if (!dv.empty() && !fpvec_is_zero(dv)) {
      throw std::invalid_argument("differential value with no admissible bidegree at " +
                                  cell_name(k, l));
    }
    if (fpvec_is_zero(v)) {
      if (!fpvec_is_zero(dv_reduced))
        throw std::invalid_argument(
            "Leibniz rule assigns a non-zero value to the zero class at " + cell_name(k, l));
      return;
    }
    auto key = std::make_pair(k, l);
    auto it = prim_ext.find(key);
    if (it == prim_ext.end())
      it = prim_ext
               .emplace(key, LinearExtension(p, static_cast<std::size_t>(width(k, l)),
                                             dv_reduced.size()))
               .first;
    switch (it->second.insert(v, dv_reduced)) {
      case LinearExtension::Insert::Conflict:
        throw std::invalid_argument("differential specification is inconsistent at " +
                                    cell_name(k, l));
      case LinearExtension::Insert::Consistent:
        return;
      case LinearExtension::Insert::NewPivot:
        primitives.push_back({k, l, std::move(v), std::move(dv)});
        return;
    }
  };
  {
    // the unit is a permanent cycle; its H^*(G)-multiples cover row 0
    FpVector unit(1, 1);
    primitives.push_back({0, 0, unit, {}});
  }

  std::shared_ptr<const GradedIdeal> essential = opts.essential;
  auto check_essential = [&](const AlgebraElement& a) {
    if (!opts.require_essential_bottom_row || page.group_.rank <= 1 || a.is_zero()) return;
    if (!essential) {
      int need = 0;
      for (const auto& e : spec.entries)
        for (const auto& t : e.target)
          if (!t.coeff.is_zero()) need = std::max(need, t.coeff.degree());
      essential = std::make_shared<const GradedIdeal>(steenrod_closure(page.group_, std::max(need, 8)));
    }
    if (!essential->contains(a))
      throw std::invalid_argument("differential target " + render_element(a) +
                                  " lands on the base row but is not essential");
  };

  for (const auto& entry : spec.entries) {
    const int ks = entry.source_coeff.is_zero() ? 0 : entry.source_coeff.degree();
    const int ls = entry.source_fiber_degree;
    if (ks > 3) throw std::invalid_argument("differential source coefficient degree exceeds 3");
    if (ls < 0 || ls > 4) throw std::invalid_argument("differential source row outside 0..4");
    if (entry.source_fiber.size() != static_cast<std::size_t>(fib.betti(ls)))
      throw std::invalid_argument("differential source fiber coordinates have the wrong length");
    FpVector coeff_coords =
        element_coordinates(entry.source_coeff, page.group_basis_[static_cast<std::size_t>(ks)]);
    FpVector v(static_cast<std::size_t>(width(ks, ls)), 0);
    for (std::size_t gi = 0; gi < coeff_coords.size(); ++gi)
      for (std::size_t fi = 0; fi < entry.source_fiber.size(); ++fi)
        v[gi * entry.source_fiber.size() + fi] =
            fp_mul(coeff_coords[gi], entry.source_fiber[fi], p);
    if (fpvec_is_zero(v)) throw std::invalid_argument("differential source class is zero");

    const int tl = ls - r + 1;
    const int tk = ks + r;
    FpVector dv;
    if (tl < 0) {
      if (!entry.target.empty())
        throw std::invalid_argument("differential from row " + std::to_string(ls) +
                                    " on page " + std::to_string(r) + " must vanish");
    } else {
      dv.assign(static_cast<std::size_t>(width(tk, tl)), 0);
      for (const auto& term : entry.target) {
        if (term.fiber_degree != tl)
          throw std::invalid_argument("differential target row must be " + std::to_string(tl));
        if (!term.coeff.is_zero() && term.coeff.degree() != tk)
          throw std::invalid_argument("differential target column must be " + std::to_string(tk));
        if (term.fiber.size() != static_cast<std::size_t>(fib.betti(tl)))
          throw std::invalid_argument("differential target fiber coordinates have the wrong length");
        if (tl == 0) check_essential(term.coeff);
        if (term.coeff.is_zero()) continue;
        FpVector tc = element_coordinates(term.coeff, page.group_basis_[static_cast<std::size_t>(tk)]);
        for (std::size_t gi = 0; gi < tc.size(); ++gi)
          for (std::size_t fi = 0; fi < term.fiber.size(); ++fi) {
            std::size_t idx = gi * term.fiber.size() + fi;
            dv[idx] = fp_normalize(dv[idx] + static_cast<long long>(tc[gi]) * term.fiber[fi], p);
          }
      }
    }

    // the named source must be a surviving class on this page
    const auto& src_cell = page.cell(ks, ls);
    FpVector reduced = src_cell.boundary->reduce(v);
    if (fpvec_is_zero(reduced)) {
      bool dead_target =
          dv.empty() || fpvec_is_zero(page.cell(ks + r, tl).boundary->reduce(dv));
      if (!dead_target)
        throw std::invalid_argument("differential assigns a non-zero value to a class that is zero on page " +
                                    std::to_string(r));
      continue;
    }
    std::vector<FpVector> alive = src_cell.basis;
    for (const auto& row : src_cell.boundary->rows()) alive.push_back(row);
    if (!coordinates_in(alive, v, p))
      throw std::invalid_argument("differential source does not survive to page " + std::to_string(r));
    add_primitive(ks, ls, std::move(v), std::move(dv));
  }

  // -- close the primitives under fiber-level products (Leibniz rule);
  //    conflicting product routes surface as inconsistent specifications
  std::size_t fresh_from = 1;  // skip pairing the unit
  while (fresh_from < primitives.size()) {
    std::size_t fresh_to = primitives.size();
    for (std::size_t a = 1; a < fresh_to; ++a)
      for (std::size_t b = std::max(a, fresh_from); b < fresh_to; ++b) {
        const auto pa = primitives[a], pb = primitives[b];
        if (pa.l < 1 || pb.l < 1) continue;
        int k = pa.k + pb.k, l = pa.l + pb.l;
        if (l > 4 || k > kmax) continue;
        FpVector v = e2_product(page, pa.k, pa.l, pa.v, pb.k, pb.l, pb.v, page.group_basis_,
                                page.ring_, fib);
        FpVector dv;
        if (l - r + 1 >= 0 && k + r <= kmax) {
          dv.assign(static_cast<std::size_t>(width(k + r, l - r + 1)), 0);
          if (!pa.dv.empty()) {
            FpVector t = e2_product(page, pa.k + r, pa.l - r + 1, pa.dv, pb.k, pb.l, pb.v,
                                    page.group_basis_, page.ring_, fib);
            fpvec_axpy(dv, 1, t, p);
          }
          if (!pb.dv.empty()) {
            FpVector t = e2_product(page, pa.k, pa.l, pa.v, pb.k + r, pb.l - r + 1, pb.dv,
                                    page.group_basis_, page.ring_, fib);
            int sign = (p != 2 && (pa.k + pa.l) % 2 == 1) ? p - 1 : 1;
            fpvec_axpy(dv, sign, t, p);
          }
        }
        add_primitive(k, l, std::move(v), std::move(dv));
      }
    fresh_from = fresh_to;
  }

  // -- assemble per-cell sample maps: boundary rows vanish, primitives act
  //    through their H^*(G)-multiples with the Leibniz sign
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= 4; ++l) {
      auto& c = page.cell(k, l);
      c.d.reset();
      const bool tvalid = target_valid(k, l);
      if (c.basis.empty() || !tvalid) {
        // nothing to determine: no surviving source classes, or the target
        // bidegree falls outside the first quadrant / the column window
        c.d.emplace(p, c.basis.size(), tvalid ? page.cell(k + r, l - r + 1).basis.size() : 0);
        continue;
      }
      const auto [tk, tl] = target_of(k, l);
      const std::size_t tw = static_cast<std::size_t>(width(tk, tl));

      LinearExtension samples(p, static_cast<std::size_t>(width(k, l)), tw);
      const EchelonSpan* tboundary = tvalid ? &*page.cell(tk, tl).boundary : nullptr;
      for (const auto& row : c.boundary->rows()) samples.insert(row, FpVector(tw, 0));
      for (const auto& prim : primitives) {
        if (prim.l != l || prim.k > k) continue;
        int gk = k - prim.k;
        for (const auto& mono : page.group_basis_[static_cast<std::size_t>(gk)]) {
          FpVector gvec(page.group_basis_[static_cast<std::size_t>(gk)].size() * 1, 0);
          // coordinates of the monomial inside its own degree component
          {
            auto coords = element_coordinates(AlgebraElement::from_monomial(page.ring_, mono, 1),
                                              page.group_basis_[static_cast<std::size_t>(gk)]);
            gvec = std::move(coords);
          }
          FpVector v =
              e2_product(page, gk, 0, gvec, prim.k, prim.l, prim.v, page.group_basis_, page.ring_, fib);
          FpVector dval(tw, 0);
          if (tvalid && !prim.dv.empty()) {
            FpVector t = e2_product(page, gk, 0, gvec, prim.k + r, prim.l - r + 1, prim.dv,
                                    page.group_basis_, page.ring_, fib);
            int sign = (p != 2 && gk % 2 == 1) ? p - 1 : 1;
            fpvec_axpy(dval, sign, t, p);
          }
          if (tboundary) dval = tboundary->reduce(std::move(dval));
          if (samples.insert(std::move(v), std::move(dval)) == LinearExtension::Insert::Conflict)
            throw std::invalid_argument("differential specification is inconsistent at " +
                                        cell_name(k, l));
        }
      }

      // reduced target representatives for coordinate solving
      std::vector<FpVector> treduced;
      if (tvalid)
        for (const auto& tb : page.cell(tk, tl).basis) treduced.push_back(tboundary->reduce(tb));

      FpMatrix d(p, c.basis.size(), tvalid ? treduced.size() : 0);
      bool fringe_undetermined = false;
      for (std::size_t i = 0; i < c.basis.size(); ++i) {
        auto val = samples.eval(c.basis[i]);
        if (!val) {
          // cells in the headroom fringe may legitimately lack coverage;
          // they are never reported and their staleness never reaches the
          // reported window
          if (k > kmax - r) {
            fringe_undetermined = true;
            break;
          }
          throw std::invalid_argument("differential is not determined by the specification at " +
                                      cell_name(k, l));
        }
        if (tw == 0) continue;
        FpVector reduced = tboundary->reduce(std::move(*val));
        auto coords = coordinates_in(treduced, reduced, p);
        if (!coords)
          throw std::invalid_argument("differential image at " + cell_name(k, l) +
                                      " is not a surviving class (d o d != 0?)");
        for (std::size_t j = 0; j < coords->size(); ++j) d.set(i, j, (*coords)[j]);
      }
      if (!fringe_undetermined) c.d = std::move(d);
    }

  // -- composition check: d_r o d_r = 0 wherever both matrices live
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= 4; ++l) {
      const auto& c = page.cell(k, l);
      if (!c.d || !target_valid(k, l)) continue;
      auto [tk, tl] = target_of(k, l);
      const auto& t = page.cell(tk, tl);
      if (!t.d || !target_valid(tk, tl)) continue;
      if (c.d->cols() != t.d->rows()) continue;
      if (!c.d->multiply(*t.d).is_zero())
        throw std::invalid_argument("d o d != 0 between " + cell_name(k, l) + " and " +
                                    cell_name(tk, tl));
    }

  page.has_d_ = true;
  return page;
}

SSPage turn_page(const SSPage& input) {
  if (!input.has_differentials())
    throw std::logic_error("turn_page: page has no differential matrices");
  SSPage next = input;
  const int r = input.page();
  const int p = input.group().p;
  const int kmax = input.max_column();

  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= 4; ++l) {
      auto& c = next.cell(k, l);

      // accumulate the incoming image into the boundary span
      int sk = k - r, sl = l + r - 1;
      if (sk >= 0 && sl <= 4) {
        const auto& s = input.cell(sk, sl);
        if (s.d && s.d->cols() == input.basis(k, l).size()) {
          for (std::size_t i = 0; i < s.d->rows(); ++i) {
            FpVector img(static_cast<std::size_t>(input.cell_width(k, l)), 0);
            for (std::size_t j = 0; j < s.d->cols(); ++j)
              if ((*s.d)(i, j) != 0) fpvec_axpy(img, (*s.d)(i, j), input.basis(k, l)[j], p);
            c.boundary->insert(std::move(img));
          }
        }
      }

      // surviving representatives: kernel combinations, independent mod
      // the enlarged boundary
      std::vector<FpVector> candidates;
      const auto& old = input.cell(k, l);
      if (old.d) {
        // rows of the matrix are the source basis, so the kernel of the
        // map is the null space of the transpose
        for (const auto& lambda : kernel_basis(old.d->transposed())) {
          FpVector v(static_cast<std::size_t>(input.cell_width(k, l)), 0);
          for (std::size_t j = 0; j < lambda.size(); ++j)
            if (lambda[j] != 0) fpvec_axpy(v, lambda[j], old.basis[j], p);
          candidates.push_back(std::move(v));
        }
      } else {
        candidates = old.basis;  // stale fringe above the reported window
      }
      EchelonSpan probe = *c.boundary;
      c.basis.clear();
      for (auto& v : candidates) {
        FpVector reduced = c.boundary->reduce(v);
        if (probe.insert(v)) c.basis.push_back(std::move(reduced));
      }
      c.d.reset();
    }

  next.r_ = r + 1;
  next.has_d_ = false;
  return next;
}

int totals(const SSPage& page, int q) {
  if (q < 0) return 0;
  if (q > page.cutoff())
    throw std::out_of_range("totals: degree above the configured cutoff");
  int s = 0;
  for (int l = 0; l <= 4 && l <= q; ++l) s += page.dim(q - l, l);
  return s;
}

bool sikora_constraint_check(const SSPage& e3) {
  if (e3.page() != 3) throw std::invalid_argument("sikora_constraint_check: expects the E_3 page");
  return e3.dim(2, 1) == e3.dim(2, 3);
}

const SSPage& SpectralRun::page(int r) const {
  for (const auto& pg : pages)
    if (pg.page() == r) return pg;
  throw std::out_of_range("SpectralRun: no page " + std::to_string(r));
}

SpectralRun run_schedule(const GroupSpec& g, const FiberAlgebra& f,
                         const std::vector<DifferentialSpec>& specs, const EngineOptions& opts) {
  EngineOptions options = opts;
  if (options.cutoff < 0) options.cutoff = 2 * g.p + 6;
  for (const auto& s : specs)
    if (s.page < 2 || s.page > 5)
      throw std::invalid_argument("run_schedule: differentials live on pages 2..5");
  for (std::size_t i = 0; i < specs.size(); ++i)
    for (std::size_t j = i + 1; j < specs.size(); ++j)
      if (specs[i].page == specs[j].page)
        throw std::invalid_argument("run_schedule: one specification per page");

  if (options.require_essential_bottom_row && g.rank >= 2 && !options.essential) {
    int need = 8;
    for (const auto& s : specs)
      for (const auto& e : s.entries)
        for (const auto& t : e.target)
          if (!t.coeff.is_zero()) need = std::max(need, t.coeff.degree());
    options.essential = std::make_shared<const GradedIdeal>(steenrod_closure(g, need));
  }

  SpectralRun run;
  run.pages.push_back(build_e2(g, f, options.cutoff));
  for (int r = 2; r <= 5; ++r) {
    const DifferentialSpec* spec = nullptr;
    for (const auto& s : specs)
      if (s.page == r) spec = &s;
    DifferentialSpec zero;
    zero.page = r;
    SSPage extended = leibniz_extend(run.pages.back(), spec ? *spec : zero, options);
    run.pages.back() = extended;
    run.pages.push_back(turn_page(extended));
  }
  return run;
}

}  // namespace borel4

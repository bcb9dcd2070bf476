#include "borel4/graded_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace borel4 {

namespace {

bool valid_name(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

}  // namespace

AlgebraPresentation::AlgebraPresentation(int p, std::vector<GeneratorSpec> poly,
                                         std::vector<GeneratorSpec> ext)
    : p_(p), poly_(std::move(poly)), ext_(std::move(ext)) {
  if (!is_prime(p)) throw std::invalid_argument("presentation: modulus must be prime");
  std::vector<std::string> names;
  for (const auto& g : poly_) {
    if (!valid_name(g.name)) throw std::invalid_argument("presentation: bad generator name " + g.name);
    if (g.degree <= 0) throw std::invalid_argument("presentation: generator degree must be positive");
    if (p != 2 && g.degree % 2 != 0)
      throw std::invalid_argument("presentation: polynomial generator degree must be even for odd p");
    names.push_back(g.name);
  }
  for (const auto& g : ext_) {
    if (p == 2)
      throw std::invalid_argument("presentation: exterior generators are not used at p = 2");
    if (!valid_name(g.name)) throw std::invalid_argument("presentation: bad generator name " + g.name);
    if (g.degree <= 0 || g.degree % 2 == 0)
      throw std::invalid_argument("presentation: exterior generator degree must be odd and positive");
    names.push_back(g.name);
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw std::invalid_argument("presentation: generator names must be unique");
}

std::pair<bool, int> AlgebraPresentation::find_generator(const std::string& name) const {
  for (std::size_t i = 0; i < poly_.size(); ++i)
    if (poly_[i].name == name) return {false, static_cast<int>(i)};
  for (std::size_t i = 0; i < ext_.size(); ++i)
    if (ext_[i].name == name) return {true, static_cast<int>(i)};
  throw std::invalid_argument("unknown generator: " + name);
}

bool AlgebraPresentation::operator==(const AlgebraPresentation& o) const {
  return p_ == o.p_ && poly_ == o.poly_ && ext_ == o.ext_;
}

PresentationPtr make_presentation(int p, std::vector<GeneratorSpec> poly,
                                  std::vector<GeneratorSpec> ext) {
  return std::make_shared<const AlgebraPresentation>(p, std::move(poly), std::move(ext));
}

int Monomial::degree(const AlgebraPresentation& pres) const {
  int d = 0;
  for (std::size_t i = 0; i < poly_exp.size(); ++i) d += poly_exp[i] * pres.poly_gens()[i].degree;
  for (std::size_t i = 0; i < ext_exp.size(); ++i)
    if (ext_exp[i]) d += pres.ext_gens()[i].degree;
  return d;
}

bool Monomial::is_unit() const {
  return std::all_of(poly_exp.begin(), poly_exp.end(), [](int e) { return e == 0; }) &&
         std::all_of(ext_exp.begin(), ext_exp.end(), [](std::uint8_t e) { return e == 0; });
}

bool monomial_less(const Monomial& a, const Monomial& b) {
  int ca = std::accumulate(a.ext_exp.begin(), a.ext_exp.end(), 0);
  int cb = std::accumulate(b.ext_exp.begin(), b.ext_exp.end(), 0);
  if (ca != cb) return ca < cb;
  if (a.ext_exp != b.ext_exp)
    return std::lexicographical_compare(b.ext_exp.begin(), b.ext_exp.end(), a.ext_exp.begin(),
                                        a.ext_exp.end());
  return std::lexicographical_compare(b.poly_exp.begin(), b.poly_exp.end(), a.poly_exp.begin(),
                                      a.poly_exp.end());
}

AlgebraElement AlgebraElement::zero(PresentationPtr pres, int degree) {
  return AlgebraElement(std::move(pres), degree);
}

AlgebraElement AlgebraElement::one(PresentationPtr pres) {
  AlgebraElement e(pres, 0);
  Monomial m{std::vector<int>(pres->poly_gens().size(), 0),
             std::vector<std::uint8_t>(pres->ext_gens().size(), 0)};
  e.add_term(std::move(m), 1);
  return e;
}

AlgebraElement AlgebraElement::generator(PresentationPtr pres, const std::string& name) {
  auto [is_ext, idx] = pres->find_generator(name);
  Monomial m{std::vector<int>(pres->poly_gens().size(), 0),
             std::vector<std::uint8_t>(pres->ext_gens().size(), 0)};
  int degree;
  if (is_ext) {
    m.ext_exp[idx] = 1;
    degree = pres->ext_gens()[idx].degree;
  } else {
    m.poly_exp[idx] = 1;
    degree = pres->poly_gens()[idx].degree;
  }
  AlgebraElement e(std::move(pres), degree);
  e.add_term(std::move(m), 1);
  return e;
}

AlgebraElement AlgebraElement::from_monomial(PresentationPtr pres, Monomial m, int coeff) {
  AlgebraElement e(pres, m.degree(*pres));
  e.add_term(std::move(m), coeff);
  return e;
}

void AlgebraElement::add_term(Monomial m, int coeff) {
  if (m.poly_exp.size() != pres_->poly_gens().size() ||
      m.ext_exp.size() != pres_->ext_gens().size())
    throw std::invalid_argument("add_term: monomial shape does not match presentation");
  for (int e : m.poly_exp)
    if (e < 0) throw std::invalid_argument("add_term: negative exponent");
  for (std::uint8_t e : m.ext_exp)
    if (e > 1) throw std::invalid_argument("add_term: exterior exponent above 1");
  coeff = fp_normalize(coeff, pres_->p());
  if (coeff == 0) return;
  if (m.degree(*pres_) != degree_)
    throw std::invalid_argument("add_term: inhomogeneous term rejected");
  auto it = coeffs_.find(m);
  if (it == coeffs_.end()) {
    coeffs_.emplace(std::move(m), coeff);
  } else {
    it->second = fp_add(it->second, coeff, pres_->p());
    if (it->second == 0) coeffs_.erase(it);
  }
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  if (!(*pres_ == *o.pres_)) throw std::invalid_argument("element sum: presentation mismatch");
  if (!is_zero() && !o.is_zero() && degree_ != o.degree_)
    throw std::invalid_argument("element sum: inhomogeneous result rejected");
  AlgebraElement out(pres_, is_zero() ? o.degree_ : degree_);
  for (const auto& [m, c] : coeffs_) out.add_term(m, c);
  for (const auto& [m, c] : o.coeffs_) out.add_term(m, c);
  return out;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  return *this + o.scaled(-1);
}

AlgebraElement AlgebraElement::scaled(int c) const {
  AlgebraElement out(pres_, degree_);
  c = fp_normalize(c, pres_->p());
  for (const auto& [m, k] : coeffs_) out.add_term(m, fp_mul(k, c, pres_->p()));
  return out;
}

bool AlgebraElement::operator==(const AlgebraElement& o) const {
  if (!(*pres_ == *o.pres_)) return false;
  if (is_zero() && o.is_zero()) return true;
  if (degree_ != o.degree_) return false;
  return std::equal(coeffs_.begin(), coeffs_.end(), o.coeffs_.begin(), o.coeffs_.end(),
                    [](const auto& a, const auto& b) { return a.first == b.first && a.second == b.second; });
}

namespace {

// Product of two canonical monomials: merged exponents plus the Koszul
// sign from interleaving the exterior factors; returns coeff 0 when an
// exterior generator repeats.
std::pair<Monomial, int> monomial_product(const Monomial& a, const Monomial& b, int p) {
  Monomial out;
  out.poly_exp.resize(a.poly_exp.size());
  for (std::size_t i = 0; i < a.poly_exp.size(); ++i) out.poly_exp[i] = a.poly_exp[i] + b.poly_exp[i];
  out.ext_exp.resize(a.ext_exp.size());
  int sign = 1;
  int b_seen = 0;  // exterior factors of b with index < current a-index
  // count inversions: pairs (i in a, j in b) with i > j
  std::vector<int> b_prefix(a.ext_exp.size() + 1, 0);
  for (std::size_t j = 0; j < a.ext_exp.size(); ++j) b_prefix[j + 1] = b_prefix[j] + (b.ext_exp[j] ? 1 : 0);
  for (std::size_t i = 0; i < a.ext_exp.size(); ++i) {
    if (a.ext_exp[i] && b.ext_exp[i]) return {out, 0};
    out.ext_exp[i] = a.ext_exp[i] | b.ext_exp[i];
    if (a.ext_exp[i]) b_seen += b_prefix[i];
  }
  if (p != 2 && b_seen % 2 == 1) sign = -1;
  return {out, sign};
}

}  // namespace

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(*a.pres() == *b.pres())) throw std::invalid_argument("multiply: presentation mismatch");
  const int p = a.pres()->p();
  AlgebraElement out = AlgebraElement::zero(a.pres(), a.degree() + b.degree());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      auto [m, sign] = monomial_product(ma, mb, p);
      if (sign == 0) continue;
      out.add_term(std::move(m), fp_normalize(static_cast<long long>(ca) * cb * sign, p));
    }
  return out;
}

AlgebraElement power(const AlgebraElement& a, int n) {
  if (n < 0) throw std::invalid_argument("power: negative exponent");
  AlgebraElement out = AlgebraElement::one(a.pres());
  for (int i = 0; i < n; ++i) out = multiply(out, a);
  return out;
}

std::vector<Monomial> degree_basis(const AlgebraPresentation& pres, int q) {
  if (q < 0) return {};
  const auto& poly = pres.poly_gens();
  const auto& ext = pres.ext_gens();
  std::vector<Monomial> out;

  std::vector<std::uint8_t> pattern(ext.size(), 0);
  std::vector<std::vector<std::uint8_t>> patterns;
  const int n_ext = static_cast<int>(ext.size());
  for (int mask = 0; mask < (1 << n_ext); ++mask) {
    for (int i = 0; i < n_ext; ++i) pattern[i] = (mask >> i) & 1;
    patterns.push_back(pattern);
  }
  std::sort(patterns.begin(), patterns.end(), [](const auto& a, const auto& b) {
    int ca = std::accumulate(a.begin(), a.end(), 0);
    int cb = std::accumulate(b.begin(), b.end(), 0);
    if (ca != cb) return ca < cb;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  });

  std::vector<int> exps(poly.size(), 0);
  // descending-lex enumeration of polynomial exponent vectors of given degree
  auto emit = [&](auto&& self, std::size_t i, int remaining, const std::vector<std::uint8_t>& pat) -> void {
    if (i == poly.size()) {
      if (remaining == 0) out.push_back(Monomial{exps, pat});
      return;
    }
    if (i + 1 == poly.size()) {
      if (remaining % poly[i].degree == 0) {
        exps[i] = remaining / poly[i].degree;
        out.push_back(Monomial{exps, pat});
        exps[i] = 0;
      }
      return;
    }
    for (int e = remaining / poly[i].degree; e >= 0; --e) {
      exps[i] = e;
      self(self, i + 1, remaining - e * poly[i].degree, pat);
    }
    exps[i] = 0;
  };

  for (const auto& pat : patterns) {
    int ext_degree = 0;
    for (std::size_t i = 0; i < pat.size(); ++i)
      if (pat[i]) ext_degree += ext[i].degree;
    int rest = q - ext_degree;
    if (rest < 0) continue;
    if (poly.empty()) {
      if (rest == 0) out.push_back(Monomial{{}, pat});
      continue;
    }
    emit(emit, 0, rest, pat);
  }
  return out;
}

int degree_dim(const AlgebraPresentation& pres, int q) {
  return static_cast<int>(degree_basis(pres, q).size());
}

FpVector element_coordinates(const AlgebraElement& e, const std::vector<Monomial>& basis) {
  FpVector v(basis.size(), 0);
  for (const auto& [m, c] : e.terms()) {
    auto it = std::find(basis.begin(), basis.end(), m);
    if (it == basis.end()) throw std::invalid_argument("element_coordinates: monomial outside basis");
    v[static_cast<std::size_t>(it - basis.begin())] = c;
  }
  return v;
}

AlgebraElement element_from_coordinates(PresentationPtr pres, int degree,
                                        const std::vector<Monomial>& basis, const FpVector& v) {
  if (v.size() != basis.size())
    throw std::invalid_argument("element_from_coordinates: length mismatch");
  AlgebraElement e = AlgebraElement::zero(std::move(pres), degree);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (v[i] != 0) e.add_term(basis[i], v[i]);
  return e;
}

AlgebraMap::AlgebraMap(PresentationPtr source, PresentationPtr target,
                       std::vector<AlgebraElement> poly_images, std::vector<AlgebraElement> ext_images)
    : source_(std::move(source)),
      target_(std::move(target)),
      poly_images_(std::move(poly_images)),
      ext_images_(std::move(ext_images)) {
  if (poly_images_.size() != source_->poly_gens().size() ||
      ext_images_.size() != source_->ext_gens().size())
    throw std::invalid_argument("AlgebraMap: one image per source generator required");
  for (std::size_t i = 0; i < poly_images_.size(); ++i) {
    const auto& img = poly_images_[i];
    if (!(*img.pres() == *target_)) throw std::invalid_argument("AlgebraMap: image outside target");
    if (!img.is_zero() && img.degree() != source_->poly_gens()[i].degree)
      throw std::invalid_argument("AlgebraMap: image degree mismatch");
  }
  for (std::size_t i = 0; i < ext_images_.size(); ++i) {
    const auto& img = ext_images_[i];
    if (!(*img.pres() == *target_)) throw std::invalid_argument("AlgebraMap: image outside target");
    if (!img.is_zero() && img.degree() != source_->ext_gens()[i].degree)
      throw std::invalid_argument("AlgebraMap: image degree mismatch");
    if (!multiply(img, img).is_zero())
      throw std::invalid_argument("AlgebraMap: exterior image must square to zero");
  }
}

AlgebraElement apply_map(const AlgebraMap& f, const AlgebraElement& e) {
  if (!(*e.pres() == *f.source())) throw std::invalid_argument("apply_map: presentation mismatch");
  AlgebraElement out = AlgebraElement::zero(f.target(), e.degree());
  for (const auto& [m, c] : e.terms()) {
    AlgebraElement term = AlgebraElement::one(f.target()).scaled(c);
    for (std::size_t i = 0; i < m.poly_exp.size(); ++i)
      if (m.poly_exp[i] > 0) term = multiply(term, power(f.poly_image(static_cast<int>(i)), m.poly_exp[i]));
    for (std::size_t i = 0; i < m.ext_exp.size(); ++i)
      if (m.ext_exp[i]) term = multiply(term, f.ext_image(static_cast<int>(i)));
    if (term.is_zero()) continue;
    out = out + term;
  }
  return out;
}

AlgebraMap identity_map(PresentationPtr pres) {
  std::vector<AlgebraElement> poly, ext;
  for (const auto& g : pres->poly_gens()) poly.push_back(AlgebraElement::generator(pres, g.name));
  for (const auto& g : pres->ext_gens()) ext.push_back(AlgebraElement::generator(pres, g.name));
  return AlgebraMap(pres, pres, std::move(poly), std::move(ext));
}

AlgebraMap compose(const AlgebraMap& g, const AlgebraMap& f) {
  if (!(*f.target() == *g.source())) throw std::invalid_argument("compose: middle presentation mismatch");
  std::vector<AlgebraElement> poly, ext;
  for (std::size_t i = 0; i < f.source()->poly_gens().size(); ++i)
    poly.push_back(apply_map(g, f.poly_image(static_cast<int>(i))));
  for (std::size_t i = 0; i < f.source()->ext_gens().size(); ++i)
    ext.push_back(apply_map(g, f.ext_image(static_cast<int>(i))));
  return AlgebraMap(f.source(), g.target(), std::move(poly), std::move(ext));
}

int steenrod_degree_shift(const AlgebraPresentation& pres, SteenrodOp op) {
  if (op == SteenrodOp::Bockstein) return 1;
  return 2 * (pres.p() - 1);
}

AlgebraElement steenrod_apply(const SteenrodAction& s, SteenrodOp op, const AlgebraElement& e) {
  const auto& pres = s.pres;
  if (!(*e.pres() == *pres)) throw std::invalid_argument("steenrod_apply: presentation mismatch");
  const int p = pres->p();
  if (op == SteenrodOp::PowerOne && p == 2)
    throw std::invalid_argument("steenrod_apply: P^1 is not defined at p = 2 (use the Bockstein/Sq^1)");
  const auto& gen_images_poly = op == SteenrodOp::Bockstein ? s.bockstein_poly : s.power_poly;
  const auto& gen_images_ext = op == SteenrodOp::Bockstein ? s.bockstein_ext : s.power_ext;
  const int shift = steenrod_degree_shift(*pres, op);
  const bool signed_op = op == SteenrodOp::Bockstein && p != 2;

  AlgebraElement out = AlgebraElement::zero(pres, e.degree() + shift);
  for (const auto& [m, c] : e.terms()) {
    // factors in canonical order: polynomial powers, then exterior gens
    struct Factor {
      bool is_ext;
      int idx;
      int exp;
      int degree;
    };
    std::vector<Factor> factors;
    for (std::size_t i = 0; i < m.poly_exp.size(); ++i)
      if (m.poly_exp[i] > 0)
        factors.push_back({false, static_cast<int>(i), m.poly_exp[i],
                           pres->poly_gens()[i].degree * m.poly_exp[i]});
    for (std::size_t i = 0; i < m.ext_exp.size(); ++i)
      if (m.ext_exp[i])
        factors.push_back({true, static_cast<int>(i), 1, pres->ext_gens()[i].degree});

    for (std::size_t k = 0; k < factors.size(); ++k) {
      const auto& fk = factors[k];
      const AlgebraElement& d_gen = fk.is_ext ? gen_images_ext[fk.idx] : gen_images_poly[fk.idx];
      if (d_gen.is_zero()) continue;
      int coeff = fp_normalize(static_cast<long long>(c) * (fk.exp % p), p);
      if (coeff == 0) continue;
      int prefix_degree = 0;
      AlgebraElement term = AlgebraElement::one(pres).scaled(coeff);
      for (std::size_t j = 0; j < k; ++j) {
        const auto& fj = factors[j];
        AlgebraElement g = AlgebraElement::generator(
            pres, fj.is_ext ? pres->ext_gens()[fj.idx].name : pres->poly_gens()[fj.idx].name);
        term = multiply(term, power(g, fj.exp));
        prefix_degree += fj.degree;
      }
      if (signed_op && prefix_degree % 2 == 1) term = term.scaled(-1);
      AlgebraElement g = AlgebraElement::generator(
          pres, fk.is_ext ? pres->ext_gens()[fk.idx].name : pres->poly_gens()[fk.idx].name);
      term = multiply(term, power(g, fk.exp - 1));
      term = multiply(term, d_gen);
      for (std::size_t j = k + 1; j < factors.size(); ++j) {
        const auto& fj = factors[j];
        AlgebraElement h = AlgebraElement::generator(
            pres, fj.is_ext ? pres->ext_gens()[fj.idx].name : pres->poly_gens()[fj.idx].name);
        term = multiply(term, power(h, fj.exp));
      }
      if (!term.is_zero()) out = out + term;
    }
  }
  return out;
}

std::string render_monomial(const AlgebraPresentation& pres, const Monomial& m) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < m.ext_exp.size(); ++i) {
    if (!m.ext_exp[i]) continue;
    if (!first) os << "*";
    os << pres.ext_gens()[i].name;
    first = false;
  }
  for (std::size_t i = 0; i < m.poly_exp.size(); ++i) {
    if (m.poly_exp[i] == 0) continue;
    if (!first) os << "*";
    os << pres.poly_gens()[i].name;
    if (m.poly_exp[i] > 1) os << "^" << m.poly_exp[i];
    first = false;
  }
  if (first) os << "1";
  return os.str();
}

std::string render_element(const AlgebraElement& e) {
  if (e.is_zero()) return "0";
  const int p = e.pres()->p();
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : e.terms()) {
    int balanced = c <= p / 2 ? c : c - p;
    bool neg = balanced < 0;
    int mag = neg ? -balanced : balanced;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    if (mag != 1 || m.is_unit()) {
      os << mag;
      if (!m.is_unit()) os << "*";
    }
    if (!m.is_unit()) os << render_monomial(*e.pres(), m);
    first = false;
  }
  return os.str();
}

AlgebraElement parse_element(PresentationPtr pres, const std::string& text) {
  struct Term {
    int coeff;
    std::string body;
  };
  std::vector<Term> split;
  int sign = 1;
  std::string cur;
  auto flush = [&]() {
    std::string trimmed;
    for (char ch : cur)
      if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
    if (!trimmed.empty()) split.push_back({sign, trimmed});
    cur.clear();
  };
  for (char ch : text) {
    if (ch == '+' || ch == '-') {
      flush();
      sign = ch == '-' ? -1 : 1;
    } else {
      cur += ch;
    }
  }
  flush();
  if (split.empty()) throw std::invalid_argument("parse_element: empty expression");

  AlgebraElement out = AlgebraElement::zero(pres, 0);
  bool degree_set = false;
  for (const auto& term : split) {
    long long coeff = term.coeff;
    bool killed = false;  // a repeated exterior factor zeroes the term
    Monomial m{std::vector<int>(pres->poly_gens().size(), 0),
               std::vector<std::uint8_t>(pres->ext_gens().size(), 0)};
    std::stringstream body(term.body);
    std::string factor;
    while (std::getline(body, factor, '*')) {
      if (factor.empty()) throw std::invalid_argument("parse_element: empty factor in " + term.body);
      if (std::isdigit(static_cast<unsigned char>(factor[0]))) {
        std::size_t used = 0;
        long long v = std::stoll(factor, &used);
        if (used != factor.size())
          throw std::invalid_argument("parse_element: bad numeric factor " + factor);
        coeff *= v;
        continue;
      }
      int exp = 1;
      std::string name = factor;
      auto caret = factor.find('^');
      if (caret != std::string::npos) {
        name = factor.substr(0, caret);
        std::string e = factor.substr(caret + 1);
        if (e.empty()) throw std::invalid_argument("parse_element: missing exponent in " + factor);
        exp = std::stoi(e);
        if (exp < 0) throw std::invalid_argument("parse_element: negative exponent in " + factor);
      }
      auto [is_ext, idx] = pres->find_generator(name);
      if (is_ext) {
        if (exp > 1 || (m.ext_exp[idx] && exp == 1)) killed = true;
        if (exp == 1) m.ext_exp[idx] = 1;
      } else {
        m.poly_exp[idx] += exp;
      }
    }
    int c = killed ? 0 : fp_normalize(coeff, pres->p());
    if (c == 0) continue;
    AlgebraElement t = AlgebraElement::from_monomial(pres, m, c);
    if (!degree_set) {
      out = t;
      degree_set = true;
    } else {
      out = out + t;
    }
  }
  return out;
}

}  // namespace borel4

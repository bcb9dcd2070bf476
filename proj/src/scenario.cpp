#include "borel4/scenario.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace borel4 {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error(where + ": " + what);
}

void check_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const auto& a : allowed)
      if (key == a) ok = true;
    if (!ok) fail(where, "unknown field \"" + key + "\"");
  }
}

int get_int(const json& obj, const std::string& key, const std::string& where,
            std::optional<int> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(where, "missing field \"" + key + "\"");
  }
  if (!obj[key].is_number_integer()) fail(where, "field \"" + key + "\" must be an integer");
  return obj[key].get<int>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) return false;
  if (!obj[key].is_boolean()) fail(where, "field \"" + key + "\" must be a boolean");
  return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string())
    fail(where, "missing or non-string field \"" + key + "\"");
  return obj[key].get<std::string>();
}

// "z", "2*z1 + z2": integer-coefficient combination of same-degree fiber
// classes; returns (degree, coordinates)
std::pair<int, FpVector> parse_fiber_combo(const FiberAlgebra& fib, const std::string& text,
                                           const std::string& where) {
  int sign = 1;
  std::string cur;
  std::vector<std::pair<int, std::string>> terms;
  auto flush = [&]() {
    std::string t;
    for (char ch : cur)
      if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (!t.empty()) terms.push_back({sign, t});
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
  if (terms.empty()) fail(where, "empty fiber expression");

  int degree = -1;
  FpVector coords;
  for (auto& [s, body] : terms) {
    long long coeff = s;
    std::string label;
    std::stringstream ss(body);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
      if (factor.empty()) fail(where, "empty factor in \"" + body + "\"");
      if (std::isdigit(static_cast<unsigned char>(factor[0]))) {
        coeff *= std::stoll(factor);
      } else {
        if (!label.empty()) fail(where, "fiber expressions are linear; got \"" + body + "\"");
        label = factor;
      }
    }
    if (label.empty()) label = "1";  // bare integers are multiples of the unit class
    auto [l, idx] = fib.find_class(label);
    if (degree < 0) {
      degree = l;
      coords.assign(static_cast<std::size_t>(fib.betti(l)), 0);
    } else if (degree != l) {
      fail(where, "fiber classes of mixed degree in \"" + text + "\"");
    }
    coords[static_cast<std::size_t>(idx)] =
        fp_normalize(coords[static_cast<std::size_t>(idx)] + coeff, fib.p());
  }
  return {degree, coords};
}

FiberAlgebra parse_fiber(const json& obj, int p, const std::string& where) {
  check_keys(obj, {"classes", "products"}, where);
  if (!obj.contains("classes") || !obj["classes"].is_array() || obj["classes"].size() != 5)
    fail(where, "\"classes\" must be an array of 5 label arrays (degrees 0..4)");
  std::array<std::vector<std::string>, 5> labels;
  for (int l = 0; l <= 4; ++l) {
    if (!obj["classes"][l].is_array()) fail(where, "\"classes\" entries must be arrays");
    for (const auto& s : obj["classes"][l]) {
      if (!s.is_string()) fail(where, "class labels must be strings");
      labels[static_cast<std::size_t>(l)].push_back(s.get<std::string>());
    }
  }
  std::vector<FiberAlgebra::ProductRule> rules;
  if (obj.contains("products")) {
    if (!obj["products"].is_array()) fail(where, "\"products\" must be an array");
    for (const auto& r : obj["products"]) {
      check_keys(r, {"a", "b", "result"}, where + ".products");
      FiberAlgebra::ProductRule rule;
      rule.a = get_string(r, "a", where + ".products");
      rule.b = get_string(r, "b", where + ".products");
      if (!r.contains("result") || !r["result"].is_array())
        fail(where, "product rule needs a \"result\" array");
      for (const auto& term : r["result"]) {
        if (!term.is_array() || term.size() != 2 || !term[0].is_string() ||
            !term[1].is_number_integer())
          fail(where, "product result terms are [label, coefficient] pairs");
        rule.result.push_back({term[0].get<std::string>(), term[1].get<int>()});
      }
      rules.push_back(std::move(rule));
    }
  }
  return FiberAlgebra(p, std::move(labels), rules);
}

DifferentialSpec parse_differential(const json& obj, const FiberAlgebra& fib,
                                    PresentationPtr ring, const std::string& where) {
  check_keys(obj, {"page", "entries"}, where);
  DifferentialSpec spec;
  spec.page = get_int(obj, "page", where);
  if (spec.page < 2 || spec.page > 5) fail(where, "pages 2..5 only");
  if (obj.contains("entries")) {
    if (!obj["entries"].is_array()) fail(where, "\"entries\" must be an array");
    for (const auto& e : obj["entries"]) {
      check_keys(e, {"coeff", "fiber", "target"}, where + ".entries");
      DifferentialEntry entry{AlgebraElement::one(ring), 0, {}, {}};
      if (e.contains("coeff")) entry.source_coeff = parse_element(ring, get_string(e, "coeff", where));
      auto [deg, coords] = parse_fiber_combo(fib, get_string(e, "fiber", where), where);
      entry.source_fiber_degree = deg;
      entry.source_fiber = std::move(coords);
      if (e.contains("target")) {
        if (!e["target"].is_array()) fail(where, "\"target\" must be an array");
        for (const auto& t : e["target"]) {
          if (!t.is_array() || t.size() != 2 || !t[0].is_string() || !t[1].is_string())
            fail(where, "target terms are [coefficient-expression, fiber-expression] pairs");
          DifferentialTerm term{parse_element(ring, t[0].get<std::string>()), 0, {}};
          auto [td, tc] = parse_fiber_combo(fib, t[1].get<std::string>(), where);
          term.fiber_degree = td;
          term.fiber = std::move(tc);
          entry.target.push_back(std::move(term));
        }
      }
      spec.entries.push_back(std::move(entry));
    }
  }
  return spec;
}

ordered_json verdict_json(const Verdict& v) {
  ordered_json out;
  out["rule"] = v.rule;
  out["outcome"] = outcome_name(v.outcome);
  ordered_json ev = ordered_json::object();
  for (const auto& [key, value] : v.evidence) {
    if (ev.contains(key)) {  // repeated keys become arrays (e.g. degree lists)
      if (!ev[key].is_array()) ev[key] = ordered_json::array({ev[key]});
      ev[key].push_back(value);
    } else {
      ev[key] = value;
    }
  }
  out["evidence"] = ev;
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

}  // namespace

const std::vector<std::string>& Scenario::known_checks() {
  static const std::vector<std::string> checks = {
      "totals",       "collapse_rules", "fixed_set_betti", "dim_formulas",
      "singular_bound", "rank_bound",   "spectral_run",    "cyclic_duality"};
  return checks;
}

Scenario scenario_from_json_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(origin + ":" + std::to_string(line) + ":" + std::to_string(col), e.what());
  }

  check_keys(root,
             {"schema", "name", "manifold", "fixed_set", "fiber", "differentials", "checks",
              "cutoff"},
             origin);
  if (get_int(root, "schema", origin) != 1) fail(origin, "unsupported schema version");

  Scenario s;
  s.name = get_string(root, "name", origin);

  if (!root.contains("manifold")) fail(origin, "missing \"manifold\"");
  const json& m = root["manifold"];
  check_keys(m, {"p", "group_rank", "b1", "b2", "t", "r0", "r1", "r2", "chi", "flags"},
             origin + ".manifold");
  s.manifold.p = get_int(m, "p", origin + ".manifold");
  s.manifold.group_rank = get_int(m, "group_rank", origin + ".manifold");
  s.manifold.b1 = get_int(m, "b1", origin + ".manifold");
  s.manifold.b2 = get_int(m, "b2", origin + ".manifold");
  s.manifold.t = get_int(m, "t", origin + ".manifold", 0);
  s.manifold.r0 = get_int(m, "r0", origin + ".manifold", 0);
  s.manifold.r1 = get_int(m, "r1", origin + ".manifold", 0);
  s.manifold.r2 = get_int(m, "r2", origin + ".manifold", 0);
  s.manifold.chi = get_int(m, "chi", origin + ".manifold", 2 - 2 * s.manifold.b1 + s.manifold.b2);
  if (m.contains("flags")) {
    const json& f = m["flags"];
    check_keys(f,
               {"orientation_preserving", "homologically_trivial", "pseudofree",
                "fixed_set_nonempty", "h1_fix_to_m_surjective", "h1_torsion_free",
                "kernel_has_trivial_action", "h1_zero"},
               origin + ".manifold.flags");
    s.manifold.flags.orientation_preserving = get_bool(f, "orientation_preserving", origin);
    s.manifold.flags.homologically_trivial = get_bool(f, "homologically_trivial", origin);
    s.manifold.flags.pseudofree = get_bool(f, "pseudofree", origin);
    s.manifold.flags.fixed_set_nonempty = get_bool(f, "fixed_set_nonempty", origin);
    s.manifold.flags.h1_fix_to_m_surjective = get_bool(f, "h1_fix_to_m_surjective", origin);
    s.manifold.flags.h1_torsion_free = get_bool(f, "h1_torsion_free", origin);
    s.manifold.flags.kernel_has_trivial_action = get_bool(f, "kernel_has_trivial_action", origin);
    s.manifold.flags.h1_zero = get_bool(f, "h1_zero", origin);
  }
  s.manifold.validate();

  if (root.contains("fixed_set")) {
    const json& fs = root["fixed_set"];
    check_keys(fs, {"isolated_points", "surfaces"}, origin + ".fixed_set");
    s.fixed_set.isolated_points = get_int(fs, "isolated_points", origin + ".fixed_set", 0);
    if (fs.contains("surfaces")) {
      if (!fs["surfaces"].is_array()) fail(origin, "\"surfaces\" must be an array");
      for (const auto& surf : fs["surfaces"]) {
        check_keys(surf, {"genus", "orientable"}, origin + ".fixed_set.surfaces");
        SurfaceSpec sp;
        sp.genus = get_int(surf, "genus", origin + ".fixed_set.surfaces", 0);
        sp.orientable = surf.contains("orientable") ? surf["orientable"].get<bool>() : true;
        s.fixed_set.surfaces.push_back(sp);
      }
    }
  }

  if (root.contains("fiber"))
    s.fiber = parse_fiber(root["fiber"], s.manifold.p, origin + ".fiber");

  if (root.contains("differentials")) {
    if (!s.fiber) fail(origin, "\"differentials\" require a \"fiber\"");
    if (!root["differentials"].is_array()) fail(origin, "\"differentials\" must be an array");
    PresentationPtr ring = cohomology_ring(GroupSpec(s.manifold.p, s.manifold.group_rank));
    for (const auto& dspec : root["differentials"])
      s.differentials.push_back(parse_differential(dspec, *s.fiber, ring, origin + ".differentials"));
  }

  if (root.contains("checks")) {
    if (!root["checks"].is_array()) fail(origin, "\"checks\" must be an array");
    for (const auto& c : root["checks"]) {
      if (!c.is_string()) fail(origin, "check names must be strings");
      std::string name = c.get<std::string>();
      bool known = false;
      for (const auto& k : Scenario::known_checks())
        if (k == name) known = true;
      if (!known) fail(origin, "unknown check \"" + name + "\"");
      s.checks.push_back(name);
    }
  }
  s.cutoff = get_int(root, "cutoff", origin, -1);

  for (const auto& check : s.checks)
    if ((check == "spectral_run" || check == "cyclic_duality") && !s.fiber)
      fail(origin, "check \"" + check + "\" requires a fiber algebra");

  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str(), path);
}

int Report::exit_code() const {
  for (const auto& v : verdicts)
    if (v.outcome == Outcome::RuledOut || v.outcome == Outcome::DoesNotCollapse) return 2;
  return 0;
}

std::string Report::to_json(bool include_dumps) const {
  ordered_json out;
  out["scenario"] = scenario;
  out["verdicts"] = ordered_json::array();
  for (const auto& v : verdicts) out["verdicts"].push_back(verdict_json(v));
  if (include_dumps) {
    out["page_dumps"] = ordered_json::array();
    for (const auto& c : page_dumps) {
      ordered_json cell;
      cell["page"] = c.page;
      cell["k"] = c.k;
      cell["l"] = c.l;
      cell["dim"] = c.dim;
      cell["basis"] = c.basis;
      out["page_dumps"].push_back(cell);
    }
  }
  return out.dump(2) + "\n";
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << "scenario " << scenario << "\n";
  for (const auto& v : verdicts) {
    os << "  [" << outcome_name(v.outcome) << "] " << v.rule;
    if (!v.note.empty()) os << " -- " << v.note;
    os << "\n";
    for (const auto& [key, value] : v.evidence) os << "      " << key << " = " << value << "\n";
  }
  return os.str();
}

Report run_scenario(const Scenario& s, bool want_dumps) {
  Report report;
  report.scenario = s.name;
  const ManifoldActionData& d = s.manifold;

  std::optional<SpectralRun> run;
  auto ensure_run = [&]() -> const SpectralRun& {
    if (!run) {
      if (!s.fiber) throw std::runtime_error("scenario has no fiber algebra for an engine run");
      EngineOptions opts;
      opts.cutoff = s.cutoff;
      opts.require_essential_bottom_row = d.flags.fixed_set_nonempty || d.flags.pseudofree;
      run = run_schedule(GroupSpec(d.p, d.group_rank), *s.fiber, s.differentials, opts);
    }
    return *run;
  };

  for (const auto& check : s.checks) {
    if (check == "totals") {
      report.verdicts.push_back(totals_test(d.fp_total(), s.fixed_set.total(d.p)));
    } else if (check == "collapse_rules") {
      report.verdicts.push_back(collapse_verdict(d));
    } else if (check == "fixed_set_betti") {
      FixedSetConstraints want = fixed_set_constraints(d);
      Verdict v;
      v.rule = "fixed_set_betti";
      v.evidence = {{"expected_b1f", want.b1f},
                    {"declared_b1f", s.fixed_set.b1(d.p)},
                    {"expected_b0f_plus_b2f", want.b0f_plus_b2f},
                    {"declared_b0f_plus_b2f", s.fixed_set.b0() + s.fixed_set.b2(d.p)},
                    {"expected_chi_f", want.chi_f},
                    {"declared_chi_f", s.fixed_set.chi()}};
      bool ok = want.b1f == s.fixed_set.b1(d.p) &&
                want.b0f_plus_b2f == s.fixed_set.b0() + s.fixed_set.b2(d.p) &&
                want.chi_f == s.fixed_set.chi();
      v.outcome = ok ? Outcome::Consistent : Outcome::RuledOut;
      if (s.fixed_set.has_nonorientable() && d.p != 2)
        v.note = "warning: non-orientable fixed surface with p odd";
      report.verdicts.push_back(v);
    } else if (check == "dim_formulas") {
      DimFormulas f = lemma_dim_formulas(d, 0);
      int b = deduce_b_zero(d);
      Verdict v;
      v.rule = "equivariant_dim_identities";
      v.outcome = (b == 0 && f.h5 + f.h6 == f.h5_mod_p) ? Outcome::Consistent : Outcome::RuledOut;
      v.evidence = {{"h5", f.h5}, {"h6", f.h6}, {"h5_mod_p", f.h5_mod_p}, {"b", b}};
      report.verdicts.push_back(v);
    } else if (check == "singular_bound") {
      report.verdicts.push_back(singular_bound_verdict(d));
    } else if (check == "rank_bound") {
      report.verdicts.push_back(pseudofree_rank_verdict(d.p, d.group_rank, d));
    } else if (check == "cyclic_duality") {
      report.verdicts.push_back(prop_cyclic_checks(d, ensure_run()));
    } else if (check == "spectral_run") {
      const SpectralRun& r = ensure_run();
      const SSPage& last = r.final_page();
      Verdict v;
      v.rule = "spectral_engine_run";
      // monotone decay of cell dimensions across page turns
      bool monotone = true;
      for (std::size_t i = 0; i + 1 < r.pages.size(); ++i)
        for (int k = 0; k <= last.cutoff(); ++k)
          for (int l = 0; l <= 4; ++l)
            if (r.pages[i + 1].dim(k, l) > r.pages[i].dim(k, l)) monotone = false;
      v.evidence.emplace_back("monotone_decay", monotone ? 1 : 0);
      for (int q = 5; q <= last.cutoff(); ++q)
        v.evidence.emplace_back("totals_q" + std::to_string(q), totals(last, q));
      v.outcome = monotone ? Outcome::Consistent : Outcome::RuledOut;
      if (d.group_rank == 2 && d.flags.pseudofree && d.flags.homologically_trivial &&
          d.chi != 0 && d.chi % d.p == 0) {
        int bound = singular_set_bound(d);
        v.evidence.emplace_back("singular_bound", bound);
        for (int q = 5; q <= last.cutoff(); ++q)
          if (totals(last, q) != bound) {
            v.outcome = Outcome::RuledOut;
            v.note = "limit totals disagree with the singular-set dimension count";
          }
      }
      report.verdicts.push_back(v);
      if (want_dumps) {
        for (const auto& pg : r.pages)
          for (int k = 0; k <= pg.cutoff(); ++k)
            for (int l = 0; l <= 4; ++l) {
              if (pg.dim(k, l) == 0) continue;
              CellDump cd{pg.page(), k, l, pg.dim(k, l), {}};
              for (int i = 0; i < pg.dim(k, l); ++i) cd.basis.push_back(pg.basis_label(k, l, i));
              report.page_dumps.push_back(std::move(cd));
            }
      }
    }
  }

  // flag rule-vs-totals disagreement instead of resolving it
  bool says_collapse = false, says_noncollapse = false;
  for (const auto& v : report.verdicts) {
    if (v.outcome == Outcome::Collapses) says_collapse = true;
    if (v.outcome == Outcome::DoesNotCollapse) says_noncollapse = true;
  }
  if (says_collapse && says_noncollapse) {
    Verdict v;
    v.outcome = Outcome::Inconclusive;
    v.rule = "verdict_disagreement";
    v.note = "a collapse rule and the totals comparison disagree; reporting both";
    report.verdicts.push_back(v);
  }
  return report;
}

}  // namespace borel4

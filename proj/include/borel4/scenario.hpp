#pragma once

#include <optional>
#include <string>
#include <vector>

#include "borel4/manifold_analyzer.hpp"

namespace borel4 {

/// One self-contained input to the analyzer: invariant data, declared
/// fixed set, optionally a fiber algebra plus differential specifications
/// for an engine run, and the list of checks to perform. Loaded from the
/// versioned JSON schema (schema = 1, unknown fields rejected).
struct Scenario {
  std::string name;
  ManifoldActionData manifold;
  FixedSetData fixed_set;
  std::optional<FiberAlgebra> fiber;
  std::vector<DifferentialSpec> differentials;
  std::vector<std::string> checks;
  int cutoff = -1;  // engine default when negative

  static const std::vector<std::string>& known_checks();
};

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text, const std::string& origin);

struct CellDump {
  int page, k, l, dim;
  std::vector<std::string> basis;
};

struct Report {
  std::string scenario;
  std::vector<Verdict> verdicts;
  std::vector<CellDump> page_dumps;

  /// 0 when every verdict is Collapses/Consistent/Inconclusive,
  /// 2 when any is RuledOut/DoesNotCollapse.
  int exit_code() const;
  std::string to_json(bool include_dumps) const;  // deterministic, 2-space indent
  std::string to_text() const;
};

Report run_scenario(const Scenario& s, bool want_dumps = false);

}  // namespace borel4

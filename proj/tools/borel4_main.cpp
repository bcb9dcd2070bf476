// Command-line front end: scenario analysis, essential-ideal tables,
// group cohomology dimension tables, and the quadratic-form scan.

#include <CLI11.hpp>
#include <future>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "borel4/essential_ideal.hpp"
#include "borel4/scenario.hpp"

using namespace borel4;

namespace {

int cmd_analyze(const std::vector<std::string>& files, bool as_json, bool dumps, int jobs) {
  struct Slot {
    std::string file;
    std::string output;
    int code = 1;
  };
  std::vector<Slot> slots(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) slots[i].file = files[i];

  auto work = [&](Slot& slot) {
    try {
      Scenario s = load_scenario(slot.file);
      Report r = run_scenario(s, dumps);
      slot.output = as_json ? r.to_json(dumps) : r.to_text();
      slot.code = r.exit_code();
    } catch (const std::exception& e) {
      slot.output = std::string("error: ") + e.what() + "\n";
      slot.code = 1;
    }
  };

  if (jobs <= 1 || slots.size() <= 1) {
    for (auto& slot : slots) work(slot);
  } else {
    std::vector<std::future<void>> pending;
    std::size_t next = 0;
    while (next < slots.size() || !pending.empty()) {
      while (next < slots.size() && pending.size() < static_cast<std::size_t>(jobs))
        pending.push_back(std::async(std::launch::async, work, std::ref(slots[next++])));
      pending.front().wait();
      pending.erase(pending.begin());
    }
  }

  int worst = 0;
  for (const auto& slot : slots) {
    std::cout << slot.output;
    worst = std::max(worst, slot.code);
  }
  return worst;
}

int cmd_ess(int p, int n, int cutoff, bool as_json) {
  GroupSpec g(p, n);
  if (cutoff < 0) cutoff = 2 * p + 4;
  GradedIdeal ideal = steenrod_closure(g, cutoff);
  MuiGeneratorSet gens = mui_generators(g);

  if (as_json) {
    nlohmann::ordered_json out;
    out["p"] = p;
    out["rank"] = n;
    out["cutoff"] = cutoff;
    out["dims"] = nlohmann::ordered_json::array();
    for (int q = 0; q <= cutoff; ++q) out["dims"].push_back(ideal.dim(q));
    out["generators"] = nlohmann::ordered_json::array();
    for (const auto& gen : gens.generators)
      out["generators"].push_back({{"degree", gen.degree()}, {"class", render_element(gen)}});
    out["free_module"] = verify_free_module(ideal, gens, cutoff);
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  std::cout << "essential ideal of (Z/" << p << ")^" << n << " up to degree " << cutoff << "\n";
  std::cout << "  q   dim  basis\n";
  for (int q = 0; q <= cutoff; ++q) {
    std::cout << std::setw(3) << q << std::setw(6) << ideal.dim(q) << "  ";
    bool first = true;
    for (const auto& e : ideal.basis(q)) {
      if (!first) std::cout << ", ";
      std::cout << render_element(e);
      first = false;
    }
    std::cout << "\n";
  }
  std::cout << "generators (gamma_i):\n";
  for (std::size_t i = 0; i < gens.generators.size(); ++i)
    std::cout << "  gamma" << i + 1 << " (degree " << gens.degrees[i]
              << ") = " << render_element(gens.generators[i]) << "\n";
  std::cout << "free over the polynomial part: "
            << (verify_free_module(ideal, gens, cutoff) ? "yes" : "NO") << "\n";
  return 0;
}

int cmd_grouptable(int p, int n, int qmax, bool as_json) {
  GroupSpec g(p, n);
  if (as_json) {
    nlohmann::ordered_json out;
    out["p"] = p;
    out["rank"] = n;
    out["dims"] = nlohmann::ordered_json::array();
    for (int q = 0; q <= qmax; ++q) out["dims"].push_back(group_dim(g, q));
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "dim H^q((Z/" << p << ")^" << n << "; F_" << p << ")\n";
  for (int q = 0; q <= qmax; ++q) std::cout << std::setw(3) << q << std::setw(6) << group_dim(g, q) << "\n";
  return 0;
}

int cmd_search_quadratic(int n, bool as_json) {
  QuadraticSearchStats stats;
  auto witness = search_nonrestricting_quadratic(n, &stats);
  if (as_json) {
    nlohmann::ordered_json out;
    out["rank"] = n;
    out["candidates"] = stats.candidates;
    out["restriction_checks"] = stats.restriction_checks;
    out["witness"] = witness ? nlohmann::ordered_json(render_element(*witness))
                             : nlohmann::ordered_json(nullptr);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "scanned " << stats.candidates << " quadratic classes against "
            << stats.restriction_checks / std::max(stats.candidates, 1) << " subgroups each\n";
  if (witness)
    std::cout << "witness: " << render_element(*witness) << "\n";
  else
    std::cout << "none\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Borel spectral sequence toolkit for p-torus actions on 4-manifolds"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  bool as_json = false, dumps = false;
  int jobs = 1;
  auto* analyze = app.add_subcommand("analyze", "run the checks requested by scenario files");
  analyze->add_option("files", files, "scenario JSON files")->required()->expected(-1);
  analyze->add_flag("--json", as_json, "emit JSON reports");
  analyze->add_flag("--dump-pages", dumps, "include per-page cell dumps (JSON)");
  analyze->add_option("--jobs", jobs, "evaluate scenarios concurrently")->check(CLI::PositiveNumber);

  int ess_p = 3, ess_n = 2, ess_cutoff = -1;
  bool ess_json = false;
  auto* ess = app.add_subcommand("ess", "essential-ideal dimensions and generators");
  ess->add_option("-p", ess_p, "prime")->required();
  ess->add_option("-n", ess_n, "rank")->required();
  ess->add_option("--cutoff", ess_cutoff, "top degree (default 2p+4)");
  ess->add_flag("--json", ess_json, "emit JSON");

  int gt_p = 3, gt_n = 2, gt_qmax = 12;
  bool gt_json = false;
  auto* gt = app.add_subcommand("grouptable", "dimension table of H^*((Z/p)^n; F_p)");
  gt->add_option("-p", gt_p, "prime")->required();
  gt->add_option("-n", gt_n, "rank")->required();
  gt->add_option("--qmax", gt_qmax, "top degree");
  gt->add_flag("--json", gt_json, "emit JSON");

  int sq_n = 3;
  bool sq_json = false;
  auto* sq = app.add_subcommand("search-quadratic",
                                "scan for a quadratic class restricting non-trivially to every "
                                "order-2 subgroup (p = 2)");
  sq->add_option("-n", sq_n, "rank")->required();
  sq->add_flag("--json", sq_json, "emit JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return cmd_analyze(files, as_json, dumps, jobs);
    if (*ess) return cmd_ess(ess_p, ess_n, ess_cutoff, ess_json);
    if (*gt) return cmd_grouptable(gt_p, gt_n, gt_qmax, gt_json);
    if (*sq) return cmd_search_quadratic(sq_n, sq_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

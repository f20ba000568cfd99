// crn: command-line front end. Every command prints one JSON document on
// stdout (or a text summary with --pretty).
//
// Exit codes: 0 success, 2 input error, 3 numerical failure,
// 4 an implication arrow was violated.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "crn/detbal.hpp"
#include "crn/error.hpp"
#include "crn/graph.hpp"
#include "crn/parser.hpp"
#include "crn/ssa.hpp"
#include "crn/stoch.hpp"
#include "json_out.hpp"
#include "report.hpp"

namespace {

using namespace crn;
using crn::cli::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitViolation = 4;

// "N" -> [0,N]^n; "N1,N2,..." -> per-species upper bounds; "lo:hi" entries
// set both bounds.
Box parse_box(const std::string& text, std::size_t n) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 1 && parts.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "--box needs 1 or " + std::to_string(n) + " entries");
  }
  DiscreteState lo{IntVector(n, 0)}, hi{IntVector(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& p = parts.size() == 1 ? parts[0] : parts[i];
    try {
      auto colon = p.find(':');
      std::size_t used = 0;
      if (colon == std::string::npos) {
        hi[i] = std::stoll(p, &used);
        if (used != p.size()) throw std::invalid_argument(p);
      } else {
        lo[i] = std::stoll(p.substr(0, colon), &used);
        hi[i] = std::stoll(p.substr(colon + 1));
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "bad --box entry '" + p + "'");
    }
  }
  return Box(lo, hi);
}

void emit(const ordered_json& j) { std::fputs(cli::dump(j).c_str(), stdout); }

std::string verdict_text(const Verdict& v) {
  std::string out(to_string(v.status));
  if (v.witness) {
    out += "  [" + v.witness->condition + ": " + format_double(v.witness->lhs) + " vs " +
           format_double(v.witness->rhs) + "]";
  }
  return out;
}

void print_state_report(const StateBalanceReport& r) {
  std::printf("  rb:  %s\n  cb:  %s\n  rvb: %s\n  cyb: %s\n  equilibrium: %s (|drift| %s)\n",
              verdict_text(r.rb).c_str(), verdict_text(r.cb).c_str(), verdict_text(r.rvb).c_str(),
              verdict_text(r.cyb).c_str(), verdict_text(r.is_equilibrium).c_str(),
              format_double(r.drift_norm).c_str());
}

void print_measure_report(const MeasureBalanceReport& r) {
  std::printf("  rb:  %s\n  cb:  %s\n  rvb: %s\n  cyb: %s\n  stationary: %s\n  boundary skipped: %zu\n",
              verdict_text(r.rb).c_str(), verdict_text(r.cb).c_str(), verdict_text(r.rvb).c_str(),
              verdict_text(r.cyb).c_str(), verdict_text(r.stationary).c_str(), r.boundary_skipped);
}

struct Common {
  std::string file;
  bool pretty = false;
};

int cmd_parse(const Common& c) {
  auto sys = load_network(c.file);
  const auto text = format_network(sys);
  if (c.pretty) {
    std::fputs(text.c_str(), stdout);
    return kExitOk;
  }
  ordered_json j;
  j["species"] = sys.network().species().names();
  j["complex_count"] = sys.network().num_complexes();
  j["reaction_count"] = sys.network().num_reactions();
  j["canonical"] = text;
  emit(j);
  return kExitOk;
}

int cmd_classify_state(const Common& c, const std::string& state_text, double tol) {
  auto sys = load_network(c.file);
  const auto& sp = sys.network().species();
  auto state = parse_det_state(state_text, sp);
  auto rep = classify_state(sys, state, tol);
  if (c.pretty) {
    std::printf("state %s\n", format_state(state, sp).c_str());
    print_state_report(rep);
    return kExitOk;
  }
  ordered_json j;
  j["species"] = sp.names();
  j["state"] = cli::state_json(state);
  j["tol"] = tol;
  j["report"] = cli::report_json(rep);
  emit(j);
  return kExitOk;
}

int cmd_analyze(const Common& c, const std::vector<std::string>& seeds, const std::string& box,
                double tol) {
  auto sys = load_network(c.file);
  const auto& sp = sys.network().species();
  cli::AnalyzeOptions opts;
  opts.tol = tol;
  opts.box = parse_box(box, sp.size());
  for (const auto& s : seeds) opts.seeds.push_back(parse_discrete_state(s, sp));
  auto rep = cli::analyze(sys, opts);

  if (c.pretty) {
    const auto& g = rep.graph;
    std::printf("graph: reversible=%d weakly_reversible=%d deficiency=%s linkage=%zu s=%zu cycles=%zu\n",
                g.reversible, g.weakly_reversible,
                g.deficiency ? std::to_string(*g.deficiency).c_str() : "n/a", g.linkage_classes,
                g.stoich_dim, g.cycles);
    std::printf("det: rb_state=%s cb_state=%s cyb_system=%d rvb_states=%zu\n",
                rep.det.rb_state ? format_state(*rep.det.rb_state, sp).c_str() : "none",
                rep.det.cb_state ? format_state(*rep.det.cb_state, sp).c_str() : "none",
                rep.det.cyb_system, rep.det.rvb_states.size());
    for (const auto& ns : rep.det.classified) {
      std::printf("%s state %s\n", ns.role.c_str(), format_state(ns.state, sp).c_str());
      print_state_report(ns.report);
    }
    for (const auto& ca : rep.components) {
      std::printf("component of %s: %zu states, closed=%d truncated=%d active=%d\n",
                  format_state(ca.component.seed, sp).c_str(), ca.component.states.size(),
                  ca.component.closed, ca.component.truncated, ca.active);
      if (ca.report) print_measure_report(*ca.report);
      if (!ca.note.empty()) std::printf("  note: %s\n", ca.note.c_str());
    }
    for (const auto& a : rep.implications) {
      std::printf("%-40s %s (%zu)%s%s\n", a.id.c_str(), std::string(cli::to_string(a.status)).c_str(),
                  a.instances, a.detail.empty() ? "" : "  ", a.detail.c_str());
    }
  } else {
    emit(cli::system_report_json(rep, sp));
  }
  if (rep.any_violated()) {
    std::fprintf(stderr, "crn: implication violated; this is a bug\n");
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_stationary(const Common& c, const std::string& seed_text, const std::string& box_text,
                   bool allow_truncated, bool compare_poisson, double tol) {
  auto sys = load_network(c.file);
  const auto& sp = sys.network().species();
  const auto seed = parse_discrete_state(seed_text, sp);
  const auto box = parse_box(box_text, sp.size());
  auto comp = communicating_class(sys, seed, box);
  StationaryOptions so;
  so.allow_truncated = allow_truncated;
  auto pi = stationary_distribution(sys, comp, so);
  auto rep = comp.closed ? classify_exact_measure(sys, pi, tol) : classify_measure(sys, pi, box, tol);

  ordered_json poisson = nullptr;
  if (compare_poisson) {
    poisson = ordered_json::object();
    std::optional<DetState> cb;
    std::string note;
    if (!is_weakly_reversible(sys.network())) {
      note = "not weakly reversible";
    } else {
      cb = solve_complex_balanced(sys);
      if (!cb) note = "no complex balanced equilibrium";
    }
    if (cb) {
      auto prod = poisson_product(*cb, comp.states);
      poisson["cb_state"] = cli::state_json(*cb);
      poisson["tv"] = tv_distance(pi, prod);
    } else {
      poisson["cb_state"] = nullptr;
      poisson["tv"] = nullptr;
    }
    poisson["note"] = note;
  }

  if (c.pretty) {
    std::printf("component of %s: %zu states, closed=%d truncated=%d\n", format_state(seed, sp).c_str(),
                comp.states.size(), comp.closed, comp.truncated);
    print_measure_report(rep);
    if (compare_poisson) {
      if (poisson["tv"].is_null()) {
        std::printf("poisson: %s\n", poisson["note"].get<std::string>().c_str());
      } else {
        std::printf("poisson: TV %s\n", format_double(poisson["tv"].get<double>()).c_str());
      }
    }
    return kExitOk;
  }
  ordered_json j;
  j["species"] = sp.names();
  j["component"] = cli::component_json(comp);
  j["approximate"] = !comp.closed;
  j["distribution"] = cli::measure_json(pi);
  j["measure"] = cli::report_json(rep);
  j["poisson"] = poisson;
  emit(j);
  return kExitOk;
}

int cmd_simulate(const Common& c, const std::string& init_text, double t_end, std::uint64_t seed,
                 std::optional<double> burn_in, std::uint64_t max_jumps, bool compare,
                 const std::string& box_text) {
  auto sys = load_network(c.file);
  const auto& sp = sys.network().species();
  const auto x0 = parse_discrete_state(init_text, sp);
  SsaConfig cfg;
  cfg.seed = seed;
  cfg.t_end = t_end;
  if (burn_in) cfg.burn_in = *burn_in;
  cfg.max_jumps = max_jumps;
  auto occ = occupancy_measure(sys, x0, cfg);

  ordered_json cmp = nullptr;
  if (compare) {
    const auto box = parse_box(box_text, sp.size());
    auto comp = communicating_class(sys, x0, box);
    StationaryOptions so;
    so.allow_truncated = true;
    auto pi = stationary_distribution(sys, comp, so);
    cmp = ordered_json::object();
    cmp["component"] = cli::component_json(comp);
    cmp["tv"] = tv_distance(occ, pi);
  }

  if (c.pretty) {
    std::printf("occupancy over (%s, %s]: %zu states\n", format_double(cfg.effective_burn_in()).c_str(),
                format_double(t_end).c_str(), occ.support_size());
    if (compare) std::printf("TV to stationary: %s\n", format_double(cmp["tv"].get<double>()).c_str());
    return kExitOk;
  }
  ordered_json j;
  j["species"] = sp.names();
  j["init"] = cli::state_json(x0);
  j["t_end"] = t_end;
  j["seed"] = seed;
  j["burn_in"] = cfg.effective_burn_in();
  j["occupancy"] = cli::measure_json(occ);
  j["compare"] = cmp;
  emit(j);
  return kExitOk;
}

int report_error(const Error& e) {
  ordered_json j;
  ordered_json err;
  err["code"] = std::string(to_string(e.code()));
  err["message"] = e.what();
  if (e.span()) {
    err["line"] = e.span()->line;
    err["column"] = e.span()->column;
  }
  j["error"] = err;
  emit(j);
  std::fprintf(stderr, "crn: %s\n", e.what());
  return is_input_error(e.code()) ? kExitInput : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balance analysis for mass-action reaction networks"};
  app.require_subcommand(1);
  Common common;
  double tol = kDefaultTol;
  std::string box = "50";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", common.file, ".crn file")->required();
    sub->add_flag("--pretty", common.pretty, "human-readable summary instead of JSON");
  };

  auto* parse = app.add_subcommand("parse", "validate and print the canonical form");
  add_common(parse);

  auto* classify = app.add_subcommand("classify-state", "classify a concentration vector");
  add_common(classify);
  std::string state;
  classify->add_option("--state", state, "e.g. A=1,B=1")->required();
  classify->add_option("--tol", tol, "relative tolerance");

  auto* analyze = app.add_subcommand("analyze", "full analysis and implication check");
  add_common(analyze);
  std::vector<std::string> seeds;
  analyze->add_option("--seed-state", seeds, "seed of a component to solve (repeatable)");
  analyze->add_option("--box", box, "N, or per-species N1,N2,.. / lo:hi");
  analyze->add_option("--tol", tol, "relative tolerance");

  auto* stationary = app.add_subcommand("stationary", "stationary distribution of one component");
  add_common(stationary);
  std::string seed_state;
  bool allow_truncated = false, compare_poisson = false;
  stationary->add_option("--seed-state", seed_state, "state in the component")->required();
  stationary->add_option("--box", box, "N, or per-species N1,N2,.. / lo:hi");
  stationary->add_flag("--allow-truncated", allow_truncated, "accept a component cut by the box");
  stationary->add_flag("--compare-poisson", compare_poisson, "TV against the product-form distribution");
  stationary->add_option("--tol", tol, "relative tolerance");

  auto* simulate = app.add_subcommand("simulate", "SSA occupancy measure");
  add_common(simulate);
  std::string init;
  double t_end = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> burn_in;
  bool compare = false;
  std::uint64_t max_jumps = SsaConfig{}.max_jumps;
  simulate->add_option("--init", init, "initial counts")->required();
  simulate->add_option("--t-end", t_end, "final time")->required();
  simulate->add_option("--seed", seed, "64-bit seed")->required();
  simulate->add_option("--burn-in", burn_in, "discarded initial time (default 1% of t-end)");
  simulate->add_option("--max-jumps", max_jumps, "abort a path after this many jumps");
  simulate->add_flag("--compare", compare, "TV against the stationary distribution");
  simulate->add_option("--box", box, "box for --compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*parse) return cmd_parse(common);
    if (*classify) return cmd_classify_state(common, state, tol);
    if (*analyze) return cmd_analyze(common, seeds, box, tol);
    if (*stationary) {
      return cmd_stationary(common, seed_state, box, allow_truncated, compare_poisson, tol);
    }
    if (*simulate) return cmd_simulate(common, init, t_end, seed, burn_in, max_jumps, compare, box);
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "crn: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitInput;
}

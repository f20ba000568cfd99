#include "json_out.hpp"

#include <cmath>
#include <cstdio>

namespace crn::cli {

namespace {

void write(const ordered_json& j, std::string& out) {
  switch (j.type()) {
    case ordered_json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += ordered_json(it.key()).dump();
        out += ':';
        write(it.value(), out);
      }
      out += '}';
      break;
    }
    case ordered_json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write(j[i], out);
      }
      out += ']';
      break;
    }
    case ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const ordered_json& j, bool trailing_newline) {
  std::string out;
  write(j, out);
  if (trailing_newline) out += '\n';
  return out;
}

ordered_json state_json(const DetState& c) {
  auto arr = ordered_json::array();
  for (double v : c.values) arr.push_back(v);
  return arr;
}

ordered_json state_json(const DiscreteState& x) {
  auto arr = ordered_json::array();
  for (auto v : x.values) arr.push_back(v);
  return arr;
}

ordered_json verdict_json(const Verdict& v) {
  ordered_json j;
  j["status"] = std::string(to_string(v.status));
  if (v.witness) {
    ordered_json w;
    w["condition"] = v.witness->condition;
    auto st = ordered_json::array();
    for (double s : v.witness->state) st.push_back(s);
    w["state"] = st;
    w["lhs"] = v.witness->lhs;
    w["rhs"] = v.witness->rhs;
    j["witness"] = w;
  }
  return j;
}

ordered_json report_json(const StateBalanceReport& r) {
  ordered_json j;
  j["rb"] = verdict_json(r.rb);
  j["cb"] = verdict_json(r.cb);
  j["rvb"] = verdict_json(r.rvb);
  j["cyb"] = verdict_json(r.cyb);
  j["is_equilibrium"] = verdict_json(r.is_equilibrium);
  j["drift_norm"] = r.drift_norm;
  return j;
}

ordered_json report_json(const MeasureBalanceReport& r) {
  ordered_json j;
  j["rb"] = verdict_json(r.rb);
  j["cb"] = verdict_json(r.cb);
  j["rvb"] = verdict_json(r.rvb);
  j["cyb"] = verdict_json(r.cyb);
  j["stationary"] = verdict_json(r.stationary);
  j["boundary_skipped"] = r.boundary_skipped;
  return j;
}

ordered_json measure_json(const Measure& mu) {
  auto arr = ordered_json::array();
  for (const auto& [x, w] : mu.weights()) {
    ordered_json e;
    e["state"] = state_json(x);
    e["p"] = w;
    arr.push_back(e);
  }
  return arr;
}

ordered_json component_json(const ComponentResult& c) {
  ordered_json j;
  j["seed"] = state_json(c.seed);
  j["size"] = c.states.size();
  j["closed"] = c.closed;
  j["truncated"] = c.truncated;
  j["leaks"] = c.leaks;
  return j;
}

ordered_json component_analysis_json(const ComponentAnalysis& ca) {
  ordered_json j;
  j["component"] = component_json(ca.component);
  j["active"] = ca.active;
  j["exact"] = ca.exact;
  j["unisolvent_support"] = ca.unisolvent;
  j["stationary"] = ca.report ? verdict_json(ca.report->stationary) : ordered_json(nullptr);
  j["measure"] = ca.report ? report_json(*ca.report) : ordered_json(nullptr);
  j["note"] = ca.note;
  return j;
}

ordered_json system_report_json(const SystemReport& rep, const SpeciesTable& species) {
  ordered_json j;
  j["species"] = species.names();

  ordered_json g;
  g["reversible"] = rep.graph.reversible;
  g["weakly_reversible"] = rep.graph.weakly_reversible;
  g["deficiency"] = rep.graph.deficiency ? ordered_json(*rep.graph.deficiency) : ordered_json(nullptr);
  g["linkage_class_count"] = rep.graph.linkage_classes;
  g["stoich_dim"] = rep.graph.stoich_dim;
  g["cycle_count"] = rep.graph.cycles;
  j["graph"] = g;

  ordered_json d;
  d["rb_state"] = rep.det.rb_state ? state_json(*rep.det.rb_state) : ordered_json(nullptr);
  d["cb_state"] = rep.det.cb_state ? state_json(*rep.det.cb_state) : ordered_json(nullptr);
  d["cb_note"] = rep.det.cb_note;
  d["cyb_system"] = rep.det.cyb_system;
  auto rvb = ordered_json::array();
  for (const auto& c : rep.det.rvb_states) rvb.push_back(state_json(c));
  d["rvb_states"] = rvb;
  auto cls = ordered_json::array();
  for (const auto& ns : rep.det.classified) {
    ordered_json e;
    e["role"] = ns.role;
    e["state"] = state_json(ns.state);
    e["report"] = report_json(ns.report);
    cls.push_back(e);
  }
  d["classified"] = cls;
  j["det"] = d;

  auto st = ordered_json::array();
  for (const auto& ca : rep.components) st.push_back(component_analysis_json(ca));
  j["stoch"] = st;

  auto imp = ordered_json::array();
  for (const auto& a : rep.implications) {
    ordered_json e;
    e["id"] = a.id;
    e["statement"] = a.statement;
    e["status"] = std::string(to_string(a.status));
    e["instances"] = a.instances;
    e["detail"] = a.detail;
    imp.push_back(e);
  }
  j["implications"] = imp;
  return j;
}

}  // namespace crn::cli

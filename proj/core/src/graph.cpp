#include "crn/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "crn/detbal.hpp"
#include "crn/error.hpp"
#include "crn/stoch.hpp"

namespace crn {

namespace {

std::vector<std::vector<std::size_t>> out_adjacency(const ReactionNetwork& net) {
  std::vector<std::vector<std::size_t>> adj(net.num_complexes());
  for (const auto& r : net.reactions()) adj[r.source].push_back(r.target);
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

LinkagePartition linkage_classes(const ReactionNetwork& net) {
  const std::size_t m = net.num_complexes();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& r : net.reactions()) {
    auto a = find_root(parent, r.source);
    auto b = find_root(parent, r.target);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  LinkagePartition out;
  out.class_of.assign(m, 0);
  std::vector<std::size_t> id_of_root(m, m);
  for (std::size_t v = 0; v < m; ++v) {
    auto root = find_root(parent, v);
    if (id_of_root[root] == m) {
      id_of_root[root] = out.classes.size();
      out.classes.emplace_back();
    }
    out.class_of[v] = id_of_root[root];
    out.classes[id_of_root[root]].push_back(v);
  }
  return out;
}

std::vector<std::size_t> strong_components(const std::vector<std::vector<std::size_t>>& adj,
                                           std::size_t* count) {
  // Iterative Tarjan.
  const std::size_t n = adj.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next edge)
  std::size_t next_index = 0;
  std::size_t next_comp = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e == 0 && index[v] == kUnset) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (e < adj[v].size()) {
        std::size_t w = adj[v][e++];
        if (index[w] == kUnset) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        for (;;) {
          std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
          if (w == v) break;
        }
        ++next_comp;
      }
      std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) {
        std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }

  // Relabel by smallest member so ids do not depend on traversal order.
  std::vector<std::size_t> relabel(next_comp, kUnset);
  std::size_t next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (relabel[comp[v]] == kUnset) relabel[comp[v]] = next++;
    comp[v] = relabel[comp[v]];
  }
  if (count) *count = next_comp;
  return comp;
}

bool is_reversible(const ReactionNetwork& net) {
  return std::all_of(net.reactions().begin(), net.reactions().end(), [&](const Reaction& r) {
    return net.find_reaction(r.target, r.source).has_value();
  });
}

bool is_weakly_reversible(const ReactionNetwork& net) {
  auto comp = strong_components(out_adjacency(net));
  return std::all_of(net.reactions().begin(), net.reactions().end(),
                     [&](const Reaction& r) { return comp[r.source] == comp[r.target]; });
}

int deficiency(const ReactionNetwork& net) {
  if (net.empty()) throw Error(ErrorCode::EmptyNetwork, "deficiency of the empty network");
  const auto m = static_cast<int>(net.num_complexes());
  const auto l = static_cast<int>(linkage_classes(net).size());
  const auto s = static_cast<int>(stoichiometric_basis(net).dimension());
  return m - l - s;
}

// ---------------------------------------------------------------------------
// Johnson's elementary circuit enumeration.

namespace {

class JohnsonEnumerator {
 public:
  JohnsonEnumerator(const std::vector<std::vector<std::size_t>>& adj, const CycleOptions& opts)
      : adj_(adj), opts_(opts), blocked_(adj.size(), false), blocked_by_(adj.size()) {}

  std::vector<DirectedCycle> run() {
    const std::size_t n = adj_.size();
    for (start_ = 0; start_ < n; ++start_) {
      // Restrict to vertices >= start_ and keep only start_'s strong component.
      std::vector<std::vector<std::size_t>> sub(n);
      for (std::size_t v = start_; v < n; ++v)
        for (auto w : adj_[v])
          if (w >= start_) sub[v].push_back(w);
      auto comp = strong_components(sub);
      allowed_.assign(n, false);
      bool any = false;
      for (std::size_t v = start_; v < n; ++v) {
        if (comp[v] == comp[start_]) {
          allowed_[v] = true;
          if (v != start_) any = true;
        }
      }
      if (!any) continue;
      for (std::size_t v = start_; v < n; ++v) {
        blocked_[v] = false;
        blocked_by_[v].clear();
      }
      circuit(start_);
    }
    std::sort(found_.begin(), found_.end());
    return std::move(found_);
  }

 private:
  bool circuit(std::size_t v) {
    bool closed = false;
    path_.push_back(v);
    blocked_[v] = true;
    for (auto w : adj_[v]) {
      if (!allowed_[w]) continue;
      if (w == start_) {
        emit();
        closed = true;
      } else if (!blocked_[w]) {
        if (circuit(w)) closed = true;
      }
    }
    if (closed) {
      unblock(v);
    } else {
      for (auto w : adj_[v]) {
        if (!allowed_[w]) continue;
        auto& b = blocked_by_[w];
        if (std::find(b.begin(), b.end(), v) == b.end()) b.push_back(v);
      }
    }
    path_.pop_back();
    return closed;
  }

  void unblock(std::size_t u) {
    std::vector<std::size_t> work{u};
    while (!work.empty()) {
      std::size_t x = work.back();
      work.pop_back();
      if (!blocked_[x]) continue;
      blocked_[x] = false;
      for (auto w : blocked_by_[x]) work.push_back(w);
      blocked_by_[x].clear();
    }
  }

  void emit() {
    if (++seen_ > opts_.max_cycles) {
      throw Error(ErrorCode::CycleBudgetExceeded,
                  "more than " + std::to_string(opts_.max_cycles) + " directed cycles");
    }
    if (path_.size() >= opts_.min_len) found_.push_back(DirectedCycle{path_});
  }

  const std::vector<std::vector<std::size_t>>& adj_;
  CycleOptions opts_;
  std::size_t start_ = 0;
  std::vector<bool> allowed_;
  std::vector<bool> blocked_;
  std::vector<std::vector<std::size_t>> blocked_by_;
  std::vector<std::size_t> path_;
  std::vector<DirectedCycle> found_;
  std::size_t seen_ = 0;
};

}  // namespace

std::vector<DirectedCycle> simple_cycles(const ReactionNetwork& net, const CycleOptions& opts) {
  auto adj = out_adjacency(net);
  return JohnsonEnumerator(adj, opts).run();
}

// ---------------------------------------------------------------------------
// Active subnetworks

std::vector<bool> active_reactions(const MassActionSystem& sys,
                                   std::span<const DiscreteState> states) {
  std::vector<bool> active(sys.network().num_reactions(), false);
  for (const auto& x : states) {
    auto rates = propensity(sys, x);
    for (std::size_t r = 0; r < rates.size(); ++r)
      if (rates[r] > 0.0) active[r] = true;
  }
  return active;
}

std::vector<bool> active_reactions(const MassActionSystem& sys, std::span<const DetState> states) {
  std::vector<bool> active(sys.network().num_reactions(), false);
  for (const auto& c : states) {
    auto rates = det_rates(sys, c);
    for (std::size_t r = 0; r < rates.size(); ++r)
      if (rates[r] > 0.0) active[r] = true;
  }
  return active;
}

ReactionNetwork subnetwork(const ReactionNetwork& net, const std::vector<bool>& active) {
  std::vector<std::size_t> keep_rx;
  std::set<std::size_t> keep_cx;
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    if (!active[r]) continue;
    keep_rx.push_back(r);
    keep_cx.insert(net.reactions()[r].source);
    keep_cx.insert(net.reactions()[r].target);
  }
  if (keep_rx.empty()) return ReactionNetwork{};

  std::vector<std::size_t> keep_sp;
  for (std::size_t s = 0; s < net.num_species(); ++s) {
    bool used = std::any_of(keep_cx.begin(), keep_cx.end(),
                            [&](std::size_t c) { return net.complexes()[c].coeffs[s] != 0; });
    if (used) keep_sp.push_back(s);
  }
  std::vector<std::string> names;
  for (auto s : keep_sp) names.push_back(net.species().name(s));

  std::vector<Complex> complexes;
  std::vector<std::size_t> old_to_new(net.num_complexes(), 0);
  for (auto c : keep_cx) {
    Complex y;
    for (auto s : keep_sp) y.coeffs.push_back(net.complexes()[c].coeffs[s]);
    old_to_new[c] = complexes.size();
    complexes.push_back(std::move(y));
  }
  std::vector<Reaction> reactions;
  for (auto r : keep_rx) {
    const auto& rx = net.reactions()[r];
    reactions.push_back({old_to_new[rx.source], old_to_new[rx.target]});
  }
  return build_network(SpeciesTable(std::move(names)), std::move(complexes), std::move(reactions));
}

ReactionNetwork active_subnetwork(const MassActionSystem& sys,
                                  std::span<const DiscreteState> states) {
  return subnetwork(sys.network(), active_reactions(sys, states));
}

ReactionNetwork active_subnetwork(const MassActionSystem& sys, std::span<const DetState> states) {
  return subnetwork(sys.network(), active_reactions(sys, states));
}

}  // namespace crn

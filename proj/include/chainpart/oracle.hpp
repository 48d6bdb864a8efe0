#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "chainpart/instance.hpp"

namespace chainpart {

// Per-vertex optimal costs. choice_end[v] is the real vertex the winning
// chain from v ends at; reconstruction follows these ends top-down.
struct Solution {
  std::vector<Cost> F;  // 1-based over real vertices
  Cost optimal = 0;
  std::vector<VertexId> choice_end;
};

namespace oracle {

// Reference dynamic program straight from the definitions: for each vertex
// in post-order, walk every downward chain that fits the weight bound and
// take the cheapest chain end. Runs in O(n * max window size).
inline Solution naive_solve(const AugmentedTree& t) {
  const Instance& inst = t.base;
  Solution sol;
  sol.F.assign(size_t(inst.n) + 1, 0);
  sol.choice_end.assign(size_t(inst.n) + 1, 0);
  std::vector<Cost> child_f_sum(size_t(inst.n) + 1, 0);

  struct Frame {
    VertexId u;
    Weight weight;  // chain weight from v down to u
    Cost max_s;     // chain cost so far
    Cost off_sum;   // optimal costs of subtrees hanging off the chain above u
  };
  std::vector<Frame> stack;
  for (VertexId v : t.postorder) {
    Cost a = 0;
    for (VertexId c : t.children(v)) a += sol.F[c];
    child_f_sum[v] = a;

    Cost best = std::numeric_limits<Cost>::max();
    VertexId best_end = 0;
    stack.clear();
    stack.push_back({v, inst.w[v], inst.s[v], 0});
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      // Option: the chain v..u ends here; everything hanging off it is
      // partitioned optimally on its own.
      Cost option = f.max_s + f.off_sum + child_f_sum[f.u];
      if (option < best || (option == best && f.u < best_end)) {
        best = option;
        best_end = f.u;
      }
      for (VertexId c : t.children(f.u)) {
        Weight wc = f.weight + inst.w[c];
        if (wc > inst.w0) continue;
        stack.push_back({c, wc, std::max(f.max_s, inst.s[c]),
                         f.off_sum + child_f_sum[f.u] - sol.F[c]});
      }
    }
    sol.F[v] = best;
    sol.choice_end[v] = best_end;
  }
  sol.optimal = sol.F[inst.root];
  return sol;
}

// Exhaustive enumeration over all chain partitions for tiny instances: each
// vertex either starts a new chain or extends the chain that currently ends
// at its parent. Vertices are processed parents-first.
inline Cost exhaustive_solve(const Instance& inst) {
  if (inst.n > 12) throw std::invalid_argument("exhaustive_solve: n must be <= 12");
  std::vector<std::vector<VertexId>> kids(size_t(inst.n) + 1);
  for (VertexId v = 1; v <= inst.n; ++v)
    if (inst.parent[v] != 0) kids[inst.parent[v]].push_back(v);
  std::vector<VertexId> order;
  order.reserve(size_t(inst.n));
  std::vector<VertexId> queue{inst.root};
  for (size_t q = 0; q < queue.size(); ++q) {
    VertexId u = queue[q];
    order.push_back(u);
    for (VertexId c : kids[u]) queue.push_back(c);
  }

  struct Chain {
    VertexId end;
    Weight weight;
    Cost max_s;
  };
  std::vector<Chain> chains;
  std::vector<int32_t> chain_of(size_t(inst.n) + 1, -1);
  Cost best = std::numeric_limits<Cost>::max();

  auto rec = [&](auto&& self, size_t idx) -> void {
    if (idx == order.size()) {
      Cost total = 0;
      for (const Chain& c : chains) total += c.max_s;
      best = std::min(best, total);
      return;
    }
    VertexId u = order[idx];
    // Start a new chain at u.
    if (inst.w[u] <= inst.w0) {
      chains.push_back({u, inst.w[u], inst.s[u]});
      chain_of[u] = int32_t(chains.size()) - 1;
      self(self, idx + 1);
      chains.pop_back();
      chain_of[u] = -1;
    }
    // Extend the chain that currently ends at u's parent.
    VertexId p = inst.parent[u];
    if (p != 0) {
      Chain& c = chains[chain_of[p]];
      if (c.end == p && c.weight + inst.w[u] <= inst.w0) {
        Chain saved = c;
        c.end = u;
        c.weight += inst.w[u];
        c.max_s = std::max(c.max_s, inst.s[u]);
        chain_of[u] = chain_of[p];
        self(self, idx + 1);
        chains[chain_of[p]] = saved;
        chain_of[u] = -1;
      }
    }
  };
  rec(rec, 0);
  return best;
}

// Definitional set computations used by the audits.

// Real vertices of T_v reachable as chain ends within the weight bound.
inline std::vector<VertexId> window_of(const AugmentedTree& t, VertexId v) {
  std::vector<VertexId> out;
  std::vector<std::pair<VertexId, Weight>> stack{{v, t.base.w[v]}};
  while (!stack.empty()) {
    auto [u, wt] = stack.back();
    stack.pop_back();
    if (wt > t.base.w0) continue;
    out.push_back(u);
    for (VertexId c : t.children(u)) stack.push_back({c, wt + t.base.w[c]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Augmented vertices whose parent is in the window but which are not; the
// auxiliary child of a window leaf is always here.
inline std::vector<VertexId> margin_of(const AugmentedTree& t, VertexId v) {
  std::vector<VertexId> win = window_of(t, v);
  std::vector<char> in_win(size_t(t.base.n) + 1, 0);
  for (VertexId u : win) in_win[u] = 1;
  std::vector<VertexId> out;
  for (VertexId u : win) {
    for (VertexId c : t.children(u))
      if (!in_win[c]) out.push_back(c);
    if (t.aux_of[u] != 0) out.push_back(t.aux_of[u]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Vertices of T_v whose s strictly exceeds every strict ancestor's s within
// T_v (the root always qualifies; an equal ancestor wins the tie).
inline std::vector<VertexId> s_maximal_set(const AugmentedTree& t, VertexId v) {
  std::vector<VertexId> out;
  std::vector<std::pair<VertexId, Cost>> stack{{v, std::numeric_limits<Cost>::min()}};
  while (!stack.empty()) {
    auto [u, above] = stack.back();
    stack.pop_back();
    if (t.base.s[u] > above) out.push_back(u);
    Cost next_above = std::max(above, t.base.s[u]);
    for (VertexId c : t.children(u)) stack.push_back({c, next_above});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// First s-maximal proper ancestor of j within T_v (j may be auxiliary).
inline VertexId next_scan(const AugmentedTree& t, VertexId v, VertexId j) {
  std::vector<VertexId> path;  // v .. parent(j), top-down
  for (VertexId u = t.parent_aug[j]; u != 0; u = t.parent_aug[u]) {
    path.push_back(u);
    if (u == v) break;
  }
  std::reverse(path.begin(), path.end());
  Cost run = std::numeric_limits<Cost>::min();
  VertexId last_smax = 0;
  for (VertexId u : path) {
    if (t.base.s[u] > run) {
      last_smax = u;
      run = t.base.s[u];
    }
  }
  return last_smax;
}

// Definitional sum(v,i): total of the optimal costs of every subtree hanging
// off the chain from v to i's parent (i itself hangs off the chain end).
inline Cost sum_of(const AugmentedTree& t, const std::vector<Cost>& F, VertexId v, VertexId i) {
  std::vector<VertexId> path;
  for (VertexId u = t.parent_aug[i]; u != 0; u = t.parent_aug[u]) {
    path.push_back(u);
    if (u == v) break;
  }
  Cost total = 0;
  std::vector<char> on_chain(size_t(t.base.n) + 1, 0);
  for (VertexId u : path) on_chain[u] = 1;
  for (VertexId u : path)
    for (VertexId c : t.children(u))
      if (!on_chain[c]) total += F[c];
  return total;
}

// Definitional cost(v,i) = sum(v,i) + s of the first s-maximal ancestor.
inline Cost cost_of(const AugmentedTree& t, const std::vector<Cost>& F, VertexId v, VertexId i) {
  return sum_of(t, F, v, i) + t.base.s[next_scan(t, v, i)];
}

}  // namespace oracle
}  // namespace chainpart

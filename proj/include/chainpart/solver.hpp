#pragma once

#include <cassert>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "chainpart/instance.hpp"
#include "chainpart/lazy_heap.hpp"
#include "chainpart/oracle.hpp"

namespace chainpart {

// Per-run accounting: every vertex may exit the window at most once and may
// lose s-maximality at most once.
struct SolveCounters {
  std::vector<uint8_t> window_exits;  // 1-based per real vertex
  std::vector<uint8_t> smax_losses;
  int64_t window_exits_total = 0;
  int64_t smax_losses_total = 0;
};

// Bottom-up chain partition solver.
//
// For the subtree currently rooted at v the state keeps, per Definition-style
// contracts, six heap families:
//   W[v]    (max)  window vertices keyed by the weight of the chain from v
//   S[x]    (min)  s-maximal window vertices i with next(v,i)=x, key s_i
//   Hf[x]   (min)  the same vertices keyed cost(x,i)
//   Hmf[x]  (min)  margin vertices i with next(v,i)=x keyed cost(x,i)
//   Hs[v]   (min)  one representative per nonempty Hf[x]: its minimum,
//                  keyed by the cost seen from the current root
//   Hms[v]  (min)  likewise for the Hmf families
// plus a union-find realizing next() and the per-family representative ids.
//
// W keys are composite (weight * (n+1) + depth) so that equal chain weights
// pop deepest-first; the weight-bound test compares against (w0+1)*(n+1).
class Solver {
 public:
  using CostHeapFamily = HeapFamily<Cost>;
  using CostHeap = CostHeapFamily::Heap;
  using WeightHeapFamily = HeapFamily<WideKey>;
  using WeightHeap = WeightHeapFamily::Heap;

  explicit Solver(const AugmentedTree& t) : t_(t), inst_(t.base) {
    const int32_t n = inst_.n;
    scale_ = WideKey(n) + 1;
    over_limit_ = WideKey(inst_.w0 + 1) * scale_;
    f_.assign(size_t(n) + 1, 0);
    choice_end_.assign(size_t(n) + 1, 0);
    child_f_sum_.assign(size_t(n) + 1, 0);
    dsu_.resize(size_t(n) + 1);
    for (int32_t v = 0; v <= n; ++v) dsu_[v] = v;
    rep_hf_.assign(size_t(n) + 1, 0);
    rep_hmf_.assign(size_t(n) + 1, 0);
    counters_.window_exits.assign(size_t(n) + 1, 0);
    counters_.smax_losses.assign(size_t(n) + 1, 0);
    w_heap_.reserve(size_t(n) + 1);
    s_heap_.reserve(size_t(n) + 1);
    hf_heap_.reserve(size_t(n) + 1);
    hmf_heap_.reserve(size_t(n) + 1);
    hs_heap_.reserve(size_t(n) + 1);
    hms_heap_.reserve(size_t(n) + 1);
    for (int32_t v = 0; v <= n; ++v) {
      w_heap_.push_back(w_.create(HeapOrder::Max));
      s_heap_.push_back(s_.create(HeapOrder::Min));
      hf_heap_.push_back(hf_.create(HeapOrder::Min));
      hmf_heap_.push_back(hmf_.create(HeapOrder::Min));
      hs_heap_.push_back(hs_.create(HeapOrder::Min));
      hms_heap_.push_back(hms_.create(HeapOrder::Min));
    }
  }

  // Invoked right after F[v] is fixed; inspect state through the accessors.
  void set_audit_hook(std::function<void(VertexId)> hook) { audit_hook_ = std::move(hook); }

  Solution solve() {
    for (VertexId v : t_.postorder) process_vertex(v);
    Solution sol;
    sol.F = f_;
    sol.choice_end = choice_end_;
    sol.optimal = f_[inst_.root];
    return sol;
  }

  const SolveCounters& counters() const { return counters_; }

  // next(v,j): first s-maximal proper ancestor under the current root.
  VertexId next_of(VertexId j) const { return find(t_.parent_aug[j]); }
  bool is_s_maximal(VertexId x) const { return find(x) == x; }

  // Read access for audits.
  const WeightHeapFamily& w_family() const { return w_; }
  const CostHeapFamily& s_family() const { return s_; }
  const CostHeapFamily& hf_family() const { return hf_; }
  const CostHeapFamily& hmf_family() const { return hmf_; }
  const CostHeapFamily& hs_family() const { return hs_; }
  const CostHeapFamily& hms_family() const { return hms_; }
  const WeightHeap& w_heap(VertexId v) const { return w_heap_[v]; }
  const CostHeap& s_heap(VertexId v) const { return s_heap_[v]; }
  const CostHeap& hf_heap(VertexId v) const { return hf_heap_[v]; }
  const CostHeap& hmf_heap(VertexId v) const { return hmf_heap_[v]; }
  const CostHeap& hs_heap(VertexId v) const { return hs_heap_[v]; }
  const CostHeap& hms_heap(VertexId v) const { return hms_heap_[v]; }
  VertexId rep_hf(VertexId family) const { return rep_hf_[family]; }
  VertexId rep_hmf(VertexId family) const { return rep_hmf_[family]; }

 private:
  VertexId find(VertexId x) const {
    while (dsu_[x] != x) {
      dsu_[x] = dsu_[dsu_[x]];
      x = dsu_[x];
    }
    return x;
  }

  WideKey wkey(Weight weight, VertexId v) const { return WideKey(weight) * scale_ + t_.depth[v]; }

  void process_vertex(VertexId v) {
    Cost a = 0;
    for (VertexId i : t_.children(v)) a += f_[i];
    child_f_sum_[v] = a;

    for (VertexId i : t_.children(v)) {
      hf_.insert(hf_heap_[v], i, a + inst_.s[v]);  // cost(v,i) for a child
      s_.insert(s_heap_[v], i, inst_.s[i]);
      w_.add_all(w_heap_[i], WideKey(inst_.w[v]) * scale_);
      sweep_margin(i, v);
      w_.meld(w_heap_[v], w_heap_[i]);
      Cost b = a - f_[i];  // updates cost(i,*) to cost(v,*) in the sum term
      hms_.add_all(hms_heap_[i], b);
      hms_.meld(hms_heap_[v], hms_heap_[i]);
      hs_.add_all(hs_heap_[i], b);
      hs_.meld(hs_heap_[v], hs_heap_[i]);
    }
    // A leaf's auxiliary child starts in the margin: the chain that simply
    // ends at the leaf costs s_leaf.
    if (t_.aux_of[v] != 0) hmf_.insert(hmf_heap_[v], t_.aux_of[v], inst_.s[v]);

    sweep_s_maximal(v);
    w_.insert(w_heap_[v], v, wkey(inst_.w[v], v));

    // Promote the minima of v's own first-layer families.
    if (!hf_heap_[v].empty()) {
      VertexId m = hf_.find_extreme(hf_heap_[v]);
      hs_.insert(hs_heap_[v], m, hf_.key_value(hf_heap_[v], m));
      rep_hf_[v] = m;
    }
    if (!hmf_heap_[v].empty()) {
      VertexId m = hmf_.find_extreme(hmf_heap_[v]);
      hms_.insert(hms_heap_[v], m, hmf_.key_value(hmf_heap_[v], m));
      rep_hmf_[v] = m;
    }

    VertexId best_elem = 0;
    Cost best_key = 0;
    if (!hs_heap_[v].empty()) {
      best_elem = hs_.find_extreme(hs_heap_[v]);
      best_key = hs_.key_value(hs_heap_[v], best_elem);
    }
    if (!hms_heap_[v].empty()) {
      VertexId e = hms_.find_extreme(hms_heap_[v]);
      Cost k = hms_.key_value(hms_heap_[v], e);
      if (best_elem == 0 || k < best_key || (k == best_key && e < best_elem)) {
        best_elem = e;
        best_key = k;
      }
    }
    assert(best_elem != 0);
    f_[v] = best_key;
    choice_end_[v] = t_.parent_aug[best_elem];
    if (audit_hook_) audit_hook_(v);
  }

  // Moves every vertex of W[i] whose chain weight from v exceeds w0 out of
  // the window. W[i] has already been shifted by w_v, so keys are v-rooted;
  // the second-layer heaps are still i-rooted (their shift happens after).
  void sweep_margin(VertexId i, VertexId v) {
    WeightHeap& wi = w_heap_[i];
    while (!wi.empty()) {
      VertexId x = w_.find_extreme(wi);
      if (w_.key_value(wi, x) < over_limit_) break;
      ++counters_.window_exits[x];
      ++counters_.window_exits_total;
      const bool x_alive = find(x) == x;

      // (1) x's children leave the margin for good. They all share one
      // family: x itself when x is still s-maximal, next(i,x) otherwise.
      VertexId f = find(x);
      CostHeap& fam1 = hmf_heap_[f];
      VertexId rep1 = rep_hmf_[f];
      bool rep_dies = rep1 != 0 && t_.parent_aug[rep1] == x;
      Cost fam1_off = 0;
      if (rep_dies) {
        fam1_off = hms_.key_value(hms_heap_[i], rep1) - hmf_.key_value(fam1, rep1);
        hms_.erase(hms_heap_[i], rep1);
        rep_hmf_[f] = 0;
      }
      Cost child_cost = 0;
      bool have_child_cost = false;
      auto drop_child = [&](VertexId j) {
        if (!have_child_cost) {
          child_cost = hmf_.key_value(fam1, j);  // cost(f, j)
          have_child_cost = true;
        }
        hmf_.erase(fam1, j);
      };
      for (VertexId j : t_.children(x)) drop_child(j);
      if (t_.aux_of[x] != 0) drop_child(t_.aux_of[x]);
      if (rep_dies && !fam1.empty()) {
        VertexId k1 = hmf_.find_extreme(fam1);
        hms_.insert(hms_heap_[i], k1, hmf_.key_value(fam1, k1) + fam1_off);
        rep_hmf_[f] = k1;
      }

      // (2) x leaves the window-side heaps; capture what step (3) needs.
      VertexId fx;  // the family x moves into (v when x == i)
      Cost key3;
      Cost fx_off = 0;
      bool have_fx_off = false;
      if (x_alive) {
        fx = find(t_.parent_aug[x]);
        CostHeap& hf_fam = hf_heap_[fx];
        key3 = hf_.key_value(hf_fam, x);  // cost(fx, x), stored directly
        if (fx != v) {
          VertexId frep = rep_hf_[fx];
          assert(frep != 0);
          fx_off = hs_.key_value(hs_heap_[i], frep) - hf_.key_value(hf_fam, frep);
          have_fx_off = true;
        }
        if (rep_hf_[fx] == x) {
          hs_.erase(hs_heap_[i], x);
          hf_.erase(hf_fam, x);
          if (!hf_fam.empty()) {
            VertexId k2 = hf_.find_extreme(hf_fam);
            hs_.insert(hs_heap_[i], k2, hf_.key_value(hf_fam, k2) + fx_off);
            rep_hf_[fx] = k2;
          } else {
            rep_hf_[fx] = 0;
          }
        } else {
          hf_.erase(hf_fam, x);
        }
        s_.erase(s_heap_[fx], x);  // x is no longer a window s-maximal vertex
      } else {
        fx = f;
        assert(have_child_cost);
        // cost(fx,x) from a child's cost: extending the chain over x trades
        // the hanging F[x] for the F of x's children.
        key3 = child_cost - child_f_sum_[x] + f_[x];
        if (rep_dies) {
          fx_off = fam1_off;
          have_fx_off = true;
        }
      }

      // (3) x enters the margin family fx.
      hmf_.insert(hmf_heap_[fx], x, key3);
      if (fx != v) {
        VertexId r3 = rep_hmf_[fx];
        if (r3 != 0) {
          Cost rk = hmf_.key_value(hmf_heap_[fx], r3);
          if (key3 < rk || (key3 == rk && x < r3)) {
            Cost off = hms_.key_value(hms_heap_[i], r3) - rk;
            hms_.erase(hms_heap_[i], r3);
            hms_.insert(hms_heap_[i], x, key3 + off);
            rep_hmf_[fx] = x;
          }
        } else {
          assert(have_fx_off);
          hms_.insert(hms_heap_[i], x, key3 + fx_off);
          rep_hmf_[fx] = x;
        }
      }

      // (4)
      w_.erase(wi, x);
    }
  }

  // Melds away every family whose owner y loses s-maximality to v. The
  // representative's second-layer key still carries s_y where cost(v,*)
  // needs s_v, hence the (s_v - s_y) correction in the family offset.
  void sweep_s_maximal(VertexId v) {
    CostHeap& sv = s_heap_[v];
    while (!sv.empty()) {
      VertexId y = s_.find_extreme(sv);
      Cost sy = s_.key_value(sv, y);
      if (sy > inst_.s[v]) break;
      ++counters_.smax_losses[y];
      ++counters_.smax_losses_total;

      if (!hf_heap_[y].empty()) {
        VertexId z = hf_.find_extreme(hf_heap_[y]);
        assert(z == rep_hf_[y]);
        Cost g = hs_.key_value(hs_heap_[v], z) - hf_.key_value(hf_heap_[y], z) + inst_.s[v] - sy;
        hf_.add_all(hf_heap_[y], g);
        hf_.meld(hf_heap_[v], hf_heap_[y]);
        hs_.erase(hs_heap_[v], z);
        rep_hf_[y] = 0;
      }
      if (!hmf_heap_[y].empty()) {
        VertexId z = hmf_.find_extreme(hmf_heap_[y]);
        assert(z == rep_hmf_[y]);
        Cost g = hms_.key_value(hms_heap_[v], z) - hmf_.key_value(hmf_heap_[y], z) + inst_.s[v] - sy;
        hmf_.add_all(hmf_heap_[y], g);
        hmf_.meld(hmf_heap_[v], hmf_heap_[y]);
        hms_.erase(hms_heap_[v], z);
        rep_hmf_[y] = 0;
      }
      s_.meld(sv, s_heap_[y]);
      s_.erase(sv, y);
      hf_.erase(hf_heap_[v], y);
      hmf_.erase(hmf_heap_[v], y);
      dsu_[y] = v;
    }
  }

  const AugmentedTree& t_;
  const Instance& inst_;
  WideKey scale_ = 1;
  WideKey over_limit_ = 0;

  WeightHeapFamily w_;
  CostHeapFamily s_, hf_, hmf_, hs_, hms_;
  std::vector<WeightHeap> w_heap_;
  std::vector<CostHeap> s_heap_, hf_heap_, hmf_heap_, hs_heap_, hms_heap_;

  std::vector<Cost> f_;
  std::vector<VertexId> choice_end_;
  std::vector<Cost> child_f_sum_;
  mutable std::vector<VertexId> dsu_;
  std::vector<VertexId> rep_hf_, rep_hmf_;
  SolveCounters counters_;
  std::function<void(VertexId)> audit_hook_;
};

inline Solution solve(const AugmentedTree& t) { return Solver(t).solve(); }

// Unfolds the recorded chain ends into an explicit partition. Each chain is
// emitted root-end first; subtrees hanging off a chain recurse with their own
// recorded ends. O(n) total.
inline Partition reconstruct(const AugmentedTree& t, const Solution& sol) {
  Partition p;
  std::vector<VertexId> todo{t.base.root};
  std::vector<VertexId> path;
  while (!todo.empty()) {
    VertexId r = todo.back();
    todo.pop_back();
    VertexId end = sol.choice_end[r];
    path.clear();
    for (VertexId u = end;; u = t.parent_aug[u]) {
      path.push_back(u);
      if (u == r) break;
    }
    std::vector<VertexId> chain(path.rbegin(), path.rend());
    for (size_t k = 0; k < chain.size(); ++k) {
      VertexId next_on_chain = k + 1 < chain.size() ? chain[k + 1] : 0;
      for (VertexId c : t.children(chain[k]))
        if (c != next_on_chain) todo.push_back(c);
    }
    p.chains.push_back(std::move(chain));
  }
  return p;
}

}  // namespace chainpart

#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chainpart {

enum class HeapOrder : uint8_t { Min, Max };

// Addressable meldable binomial heaps with lazy additive tags.
//
// A HeapFamily owns the node arena and the element registry shared by every
// heap it creates; an element id may live in at most one heap of the family
// at a time. An element's effective key is
//
//     stored key + sum of tags on the path from its node to the tree root.
//
// Tags apply to a node and its whole subtree. When two roots are linked the
// loser's tag absorbs the negation of the winner's tag, so linking never
// changes any effective key and melds stay O(log n). add_all tags each root
// directly. Deleting pushes the doomed slot's content to the root by content
// swaps; a survivor moving down compensates its stored key by the tag of the
// slot it enters.
//
// find_extreme is O(1) through a cached extreme element maintained by every
// mutating operation; insert/delete/meld/add_all/key_value are O(log n).
// Ties everywhere resolve toward the smaller element id, and the heap
// property is kept on (effective key, element id) pairs, so the cached
// extreme is always the unique lexicographic extreme.
//
// Ownership queries (contains, erase-of-absent) are O(alpha) through a
// union-find over heap identities: melding aliases the absorbed heap's
// identity into the target and hands the absorbed object a fresh one.
template <typename Key>
class HeapFamily {
 public:
  using ElementId = int32_t;
  static constexpr ElementId kNone = -1;

  class Heap {
   public:
    Heap() = default;
    Heap(Heap&& o) noexcept { *this = std::move(o); }
    Heap& operator=(Heap&& o) noexcept {
      id_ = o.id_;
      head_ = o.head_;
      size_ = o.size_;
      cached_ = o.cached_;
      order_ = o.order_;
      o.id_ = -1;
      o.head_ = -1;
      o.size_ = 0;
      o.cached_ = kNone;
      return *this;
    }
    Heap(const Heap&) = delete;
    Heap& operator=(const Heap&) = delete;

    int64_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    HeapOrder order() const { return order_; }

   private:
    friend class HeapFamily;
    int32_t id_ = -1;
    int32_t head_ = -1;  // root list, increasing rank
    int64_t size_ = 0;
    ElementId cached_ = kNone;
    HeapOrder order_ = HeapOrder::Min;
  };

  struct AuditEntry {
    ElementId elem;
    Key effective_key;
    int16_t tree_rank;  // rank of the binomial tree holding the element
  };

  HeapFamily() = default;
  HeapFamily(const HeapFamily&) = delete;
  HeapFamily& operator=(const HeapFamily&) = delete;

  Heap create(HeapOrder order) {
    Heap h;
    h.id_ = fresh_heap_id();
    h.order_ = order;
    return h;
  }

  void insert(Heap& h, ElementId elem, Key key) {
    if (elem < 0) throw std::logic_error("insert: negative element id");
    ensure_registry(elem);
    if (node_of_[elem] != -1)
      throw std::logic_error("insert: duplicate element id " + std::to_string(elem));
    int32_t nd = alloc_node();
    Node& n = pool_[nd];
    n.stored = key;
    n.tag = Key(0);
    n.elem = elem;
    n.parent = n.child = n.sibling = -1;
    n.rank = 0;
    node_of_[elem] = nd;
    heap_of_[elem] = h.id_;
    h.head_ = merge_root_lists(h.head_, nd, h.order_);
    ++h.size_;
    // A fresh node's effective key stays == key no matter how it gets linked.
    if (h.cached_ == kNone ||
        better(key, elem, effective(node_of_[h.cached_]), h.cached_, h.order_)) {
      h.cached_ = elem;
    }
  }

  // O(1): returns the cached extreme element, kNone when empty.
  ElementId find_extreme(const Heap& h) const {
    last_find_visits_ = h.cached_ == kNone ? 0 : 1;
    return h.cached_;
  }

  Key key_value(const Heap& h, ElementId elem) const {
    if (!contains(h, elem))
      throw std::logic_error("key_value: element " + std::to_string(elem) + " not in heap");
    return effective(node_of_[elem], &last_key_visits_);
  }

  void add_all(Heap& h, Key delta) {
    for (int32_t r = h.head_; r != -1; r = pool_[r].sibling) pool_[r].tag += delta;
  }

  // Absorbs `from` into `into`; `from` ends up empty but stays usable.
  void meld(Heap& into, Heap& from) {
    if (&into == &from) throw std::invalid_argument("meld: heap melded with itself");
    if (into.order_ != from.order_) throw std::invalid_argument("meld: order mismatch");
    if (from.size_ == 0) return;
    dsu_[dsu_find(from.id_)] = dsu_find(into.id_);
    from.id_ = fresh_heap_id();
    ElementId cand = from.cached_;
    Key cand_key = effective(node_of_[cand]);
    into.head_ = merge_root_lists(into.head_, from.head_, into.order_);
    into.size_ += from.size_;
    from.head_ = -1;
    from.size_ = 0;
    from.cached_ = kNone;
    if (into.cached_ == kNone ||
        better(cand_key, cand, effective(node_of_[into.cached_]), into.cached_, into.order_)) {
      into.cached_ = cand;
    }
  }

  // Deleting an element that is not in `h` is a silent no-op.
  void erase(Heap& h, ElementId elem) {
    if (!contains(h, elem)) return;
    int32_t cur = node_of_[elem];
    // Push the doomed slot's content to the root; survivors moving down
    // compensate their stored key by the tag of the slot they enter.
    while (pool_[cur].parent != -1) {
      int32_t par = pool_[cur].parent;
      pool_[cur].elem = pool_[par].elem;
      pool_[cur].stored = pool_[par].stored - pool_[cur].tag;
      node_of_[pool_[cur].elem] = cur;
      cur = par;
    }
    remove_root(h, cur);
    // Detach children, push the dying root's tag down, rebuild an
    // increasing-rank list (children are stored in decreasing rank).
    int32_t rebuilt = -1;
    int32_t kid = pool_[cur].child;
    while (kid != -1) {
      int32_t nxt = pool_[kid].sibling;
      pool_[kid].parent = -1;
      pool_[kid].tag += pool_[cur].tag;
      pool_[kid].sibling = rebuilt;
      rebuilt = kid;
      kid = nxt;
    }
    h.head_ = merge_root_lists(h.head_, rebuilt, h.order_);
    node_of_[elem] = -1;
    free_node(cur);
    --h.size_;
    if (h.cached_ == elem) rescan_cache(h);
  }

  bool contains(const Heap& h, ElementId elem) const {
    return elem >= 0 && size_t(elem) < node_of_.size() && node_of_[elem] != -1 &&
           dsu_find(heap_of_[elem]) == dsu_find(h.id_);
  }

  // --- test hooks -----------------------------------------------------

  // Flat (element, effective key, tree rank) view of a heap.
  std::vector<AuditEntry> audit(const Heap& h) const {
    std::vector<AuditEntry> out;
    out.reserve(size_t(h.size_));
    for (int32_t r = h.head_; r != -1; r = pool_[r].sibling)
      collect(r, pool_[r].rank, Key(0), out);
    return out;
  }

  // Full structural verification; throws std::logic_error on any violation.
  void check_structure(const Heap& h) const {
    int64_t counted = 0;
    int32_t prev_rank = -1;
    ElementId best_elem = kNone;
    Key best_key{};
    for (int32_t r = h.head_; r != -1; r = pool_[r].sibling) {
      if (pool_[r].rank <= prev_rank) fail("root ranks not strictly increasing");
      prev_rank = pool_[r].rank;
      if (pool_[r].parent != -1) fail("root has a parent");
      counted += check_tree(r, pool_[r].rank, Key(0), h.order_);
      Key k = pool_[r].stored + pool_[r].tag;
      if (best_elem == kNone || better(k, pool_[r].elem, best_key, best_elem, h.order_)) {
        best_elem = pool_[r].elem;
        best_key = k;
      }
    }
    if (counted != h.size_) fail("size does not match node count");
    if (best_elem != h.cached_) fail("cached extreme is stale");
  }

  int64_t last_find_extreme_visits() const { return last_find_visits_; }
  int64_t last_key_value_visits() const { return last_key_visits_; }

 private:
  struct Node {
    Key stored{};
    Key tag{};
    ElementId elem = kNone;
    int32_t parent = -1;
    int32_t child = -1;    // highest-rank child; siblings in decreasing rank
    int32_t sibling = -1;  // next sibling / next root
    int16_t rank = 0;
  };

  bool better(Key ka, ElementId ea, Key kb, ElementId eb, HeapOrder ord) const {
    if (ka != kb) return ord == HeapOrder::Min ? ka < kb : ka > kb;
    return ea < eb;
  }

  Key effective(int32_t idx, int64_t* visits = nullptr) const {
    Key k = pool_[idx].stored;
    int64_t v = 0;
    for (int32_t cur = idx; cur != -1; cur = pool_[cur].parent) {
      k += pool_[cur].tag;
      ++v;
    }
    if (visits) *visits = v;
    return k;
  }

  int32_t alloc_node() {
    if (!free_.empty()) {
      int32_t idx = free_.back();
      free_.pop_back();
      return idx;
    }
    pool_.emplace_back();
    return int32_t(pool_.size()) - 1;
  }

  void free_node(int32_t idx) {
    pool_[idx] = Node{};
    free_.push_back(idx);
  }

  void ensure_registry(ElementId elem) {
    if (size_t(elem) >= node_of_.size()) {
      node_of_.resize(size_t(elem) + 1, -1);
      heap_of_.resize(size_t(elem) + 1, -1);
    }
  }

  int32_t fresh_heap_id() {
    dsu_.push_back(int32_t(dsu_.size()));
    return dsu_.back();
  }

  int32_t dsu_find(int32_t x) const {
    while (dsu_[x] != x) {
      dsu_[x] = dsu_[dsu_[x]];
      x = dsu_[x];
    }
    return x;
  }

  // Links two equal-rank roots; the loser's tag absorbs the negation of the
  // winner's tag so every effective key below it is preserved.
  int32_t link(int32_t a, int32_t b, HeapOrder ord) {
    if (!better(pool_[a].stored + pool_[a].tag, pool_[a].elem,
                pool_[b].stored + pool_[b].tag, pool_[b].elem, ord)) {
      std::swap(a, b);
    }
    pool_[b].tag -= pool_[a].tag;
    pool_[b].parent = a;
    pool_[b].sibling = pool_[a].child;
    pool_[a].child = b;
    ++pool_[a].rank;
    return a;
  }

  int32_t merge_root_lists(int32_t a, int32_t b, HeapOrder ord) {
    // Zip the two increasing-rank lists together.
    int32_t head = -1, tail = -1;
    auto take = [&](int32_t& lst) {
      int32_t n = lst;
      lst = pool_[n].sibling;
      pool_[n].sibling = -1;
      if (tail == -1)
        head = n;
      else
        pool_[tail].sibling = n;
      tail = n;
    };
    while (a != -1 && b != -1) {
      if (pool_[a].rank <= pool_[b].rank)
        take(a);
      else
        take(b);
    }
    while (a != -1) take(a);
    while (b != -1) take(b);

    // Resolve duplicate ranks with carry links. With at most three equal
    // ranks in a row, skip the first of a triple and link the later pair.
    int32_t prev = -1, cur = head;
    while (cur != -1) {
      int32_t nxt = pool_[cur].sibling;
      if (nxt == -1 || pool_[cur].rank != pool_[nxt].rank) {
        prev = cur;
        cur = nxt;
        continue;
      }
      int32_t nn = pool_[nxt].sibling;
      if (nn != -1 && pool_[nn].rank == pool_[cur].rank) {
        prev = cur;
        cur = nxt;
        continue;
      }
      int32_t win = link(cur, nxt, ord);
      pool_[win].sibling = nn;
      if (prev == -1)
        head = win;
      else
        pool_[prev].sibling = win;
      cur = win;
    }
    return head;
  }

  void remove_root(Heap& h, int32_t r) {
    int32_t prev = -1, cur = h.head_;
    while (cur != r) {
      prev = cur;
      cur = pool_[cur].sibling;
    }
    if (prev == -1)
      h.head_ = pool_[r].sibling;
    else
      pool_[prev].sibling = pool_[r].sibling;
    pool_[r].sibling = -1;
  }

  // The heap property on (key, id) makes every tree's extreme its root, so
  // scanning roots recovers the global extreme.
  void rescan_cache(Heap& h) {
    h.cached_ = kNone;
    Key best{};
    for (int32_t r = h.head_; r != -1; r = pool_[r].sibling) {
      Key k = pool_[r].stored + pool_[r].tag;
      if (h.cached_ == kNone || better(k, pool_[r].elem, best, h.cached_, h.order_)) {
        h.cached_ = pool_[r].elem;
        best = k;
      }
    }
  }

  void collect(int32_t idx, int16_t tree_rank, Key above, std::vector<AuditEntry>& out) const {
    Key here = above + pool_[idx].tag;
    out.push_back({pool_[idx].elem, pool_[idx].stored + here, tree_rank});
    for (int32_t c = pool_[idx].child; c != -1; c = pool_[c].sibling)
      collect(c, tree_rank, here, out);
  }

  int64_t check_tree(int32_t idx, int32_t expect_rank, Key above, HeapOrder ord) const {
    if (pool_[idx].rank != expect_rank) fail("tree rank mismatch");
    Key here = above + pool_[idx].tag;
    Key key_here = pool_[idx].stored + here;
    int64_t count = 1;
    int32_t expect_child = expect_rank - 1;
    for (int32_t c = pool_[idx].child; c != -1; c = pool_[c].sibling) {
      if (pool_[c].parent != idx) fail("broken parent link");
      if (pool_[c].rank != expect_child) fail("child ranks out of order");
      Key child_key = pool_[c].stored + here + pool_[c].tag;
      if (!better(key_here, pool_[idx].elem, child_key, pool_[c].elem, ord) &&
          !(key_here == child_key && pool_[idx].elem == pool_[c].elem)) {
        fail("heap order violated on effective keys");
      }
      count += check_tree(c, expect_child, here, ord);
      --expect_child;
    }
    if (expect_child != -1) fail("missing children for rank");
    if (node_of_[pool_[idx].elem] != idx) fail("registry out of sync");
    return count;
  }

  [[noreturn]] static void fail(const char* what) { throw std::logic_error(what); }

  std::vector<Node> pool_;
  std::vector<int32_t> free_;
  std::vector<int32_t> node_of_;  // element -> node index, -1 when absent
  std::vector<int32_t> heap_of_;  // element -> heap id at insert time
  mutable std::vector<int32_t> dsu_;
  mutable int64_t last_find_visits_ = 0;
  mutable int64_t last_key_visits_ = 0;
};

}  // namespace chainpart

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chainpart/common.hpp"

namespace chainpart {

// A rooted tree with per-vertex weight w and cost s, plus the global chain
// weight bound w0. Vertices are 1..n; arrays are 1-based with slot 0 unused.
// Immutable after construction; safe to share read-only across threads.
struct Instance {
  int32_t n = 0;
  Weight w0 = 0;
  std::vector<VertexId> parent;  // parent[v], 0 for the root
  std::vector<Weight> w;
  std::vector<Cost> s;
  VertexId root = 0;
};

// A chain partition: every chain is listed root-end first.
struct Partition {
  std::vector<std::vector<VertexId>> chains;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Returns every violated instance invariant; empty means valid.
inline std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  if (inst.n < 1) {
    out.push_back("n must be at least 1");
    return out;
  }
  size_t want = size_t(inst.n) + 1;
  if (inst.parent.size() != want || inst.w.size() != want || inst.s.size() != want) {
    out.push_back("array sizes do not match n");
    return out;
  }
  if (inst.w0 < 0) out.push_back("w0 is negative");
  int roots = 0;
  for (VertexId v = 1; v <= inst.n; ++v) {
    if (inst.parent[v] == 0) {
      ++roots;
    } else if (inst.parent[v] < 0 || inst.parent[v] > inst.n) {
      out.push_back("parent of " + std::to_string(v) + " out of range");
    } else if (inst.parent[v] == v) {
      out.push_back("cycle at " + std::to_string(v));
    }
    if (inst.w[v] < 0) out.push_back("w_" + std::to_string(v) + " is negative");
    if (inst.s[v] < 0) out.push_back("s_" + std::to_string(v) + " is negative");
    if (inst.w[v] > inst.w0) out.push_back("w_" + std::to_string(v) + " exceeds w0");
  }
  if (roots == 0) out.push_back("no root");
  if (roots > 1) out.push_back("multiple roots");
  if (!out.empty()) return out;

  // Reachability from the root doubles as the cycle check.
  VertexId root = 0;
  for (VertexId v = 1; v <= inst.n; ++v)
    if (inst.parent[v] == 0) root = v;
  std::vector<std::vector<VertexId>> kids(want);
  for (VertexId v = 1; v <= inst.n; ++v)
    if (inst.parent[v] != 0) kids[inst.parent[v]].push_back(v);
  std::vector<char> seen(want, 0);
  std::vector<VertexId> stack{root};
  seen[root] = 1;
  int32_t reached = 0;
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    ++reached;
    for (VertexId c : kids[u]) {
      seen[c] = 1;
      stack.push_back(c);
    }
  }
  if (reached != inst.n) {
    for (VertexId v = 1; v <= inst.n; ++v)
      if (!seen[v]) out.push_back("cycle at " + std::to_string(v));
  }

  Cost max_s = 0;
  Weight max_w = 0;
  for (VertexId v = 1; v <= inst.n; ++v) {
    max_s = std::max(max_s, inst.s[v]);
    max_w = std::max(max_w, inst.w[v]);
  }
  // Key-arithmetic headroom: all cost sums and chain weights must fit.
  if (max_s > 0 && Cost(inst.n) > kKeyLimit / (max_s + 1))
    out.push_back("n * max(s) exceeds the key range");
  if (max_w > 0 && Weight(inst.n) > kKeyLimit / (max_w + 1))
    out.push_back("depth * max(w) may exceed the key range");
  if (inst.w0 > kKeyLimit) out.push_back("w0 exceeds the key range");
  return out;
}

// Text format:
//   line 1:      n w0
//   lines 2..n+1: parent w s     (parent 0 marks the root)
// '#' begins a comment line; blank lines are skipped. Errors carry the
// physical line number.
inline Instance parse_text(std::istream& in) {
  Instance inst;
  int lineno = 0;
  int records = 0;
  std::vector<int> record_line;  // vertex -> physical line
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    if (!have_header) {
      long long n = 0, w0 = 0;
      if (!(ls >> n >> w0)) throw ParseError(lineno, "malformed header, expected `n w0`");
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, "trailing tokens after `n w0`");
      if (n < 1 || n > (1 << 30)) throw ParseError(lineno, "vertex count out of range");
      if (w0 < 0 || w0 > kKeyLimit) throw ParseError(lineno, "token overflow in w0");
      inst.n = int32_t(n);
      inst.w0 = w0;
      inst.parent.assign(size_t(n) + 1, 0);
      inst.w.assign(size_t(n) + 1, 0);
      inst.s.assign(size_t(n) + 1, 0);
      record_line.assign(size_t(n) + 1, 0);
      have_header = true;
      continue;
    }
    if (records == inst.n) throw ParseError(lineno, "more vertex records than n");
    long long parent = 0, w = 0, s = 0;
    if (!(ls >> parent >> w >> s))
      throw ParseError(lineno, "malformed vertex record, expected `parent w s`");
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing tokens after `parent w s`");
    VertexId v = ++records;
    if (parent < 0 || parent > inst.n) throw ParseError(lineno, "parent of " + std::to_string(v) + " out of range");
    if (w < 0 || w > kKeyLimit) throw ParseError(lineno, "token overflow in w_" + std::to_string(v));
    if (s < 0 || s > kKeyLimit) throw ParseError(lineno, "token overflow in s_" + std::to_string(v));
    inst.parent[v] = VertexId(parent);
    inst.w[v] = w;
    inst.s[v] = s;
    record_line[v] = lineno;
  }
  if (!have_header) throw ParseError(lineno == 0 ? 1 : lineno, "empty input");
  if (records != inst.n)
    throw ParseError(lineno, "expected " + std::to_string(inst.n) + " vertex records, got " +
                                 std::to_string(records));
  for (VertexId v = 1; v <= inst.n; ++v)
    if (inst.parent[v] == 0) inst.root = v;

  auto violations = validate(inst);
  if (!violations.empty()) {
    // Attribute per-vertex violations to their record line.
    const std::string& msg = violations.front();
    int at = 1;
    for (VertexId v = 1; v <= inst.n; ++v) {
      std::string tag_w = "w_" + std::to_string(v);
      std::string tag_cycle = "cycle at " + std::to_string(v);
      std::string tag_parent = "parent of " + std::to_string(v);
      if (msg.rfind(tag_w, 0) == 0 || msg.rfind(tag_cycle, 0) == 0 ||
          msg.rfind(tag_parent, 0) == 0) {
        at = record_line[v];
        break;
      }
    }
    throw ParseError(at, msg);
  }
  return inst;
}

inline Instance parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_text(in);
}

inline std::string emit_text(const Instance& inst) {
  std::ostringstream out;
  out << inst.n << ' ' << inst.w0 << '\n';
  for (VertexId v = 1; v <= inst.n; ++v)
    out << inst.parent[v] << ' ' << inst.w[v] << ' ' << inst.s[v] << '\n';
  return out.str();
}

// JSON emission mirrors the instance fields verbatim.
inline std::string emit_json(const Instance& inst) {
  std::ostringstream out;
  auto array = [&](auto getter) {
    out << '[';
    for (VertexId v = 1; v <= inst.n; ++v) {
      if (v > 1) out << ',';
      out << getter(v);
    }
    out << ']';
  };
  out << "{\"n\":" << inst.n << ",\"w0\":" << inst.w0 << ",\"parent\":";
  array([&](VertexId v) { return inst.parent[v]; });
  out << ",\"w\":";
  array([&](VertexId v) { return inst.w[v]; });
  out << ",\"s\":";
  array([&](VertexId v) { return inst.s[v]; });
  out << '}';
  return out.str();
}

// The instance plus one auxiliary zero-weight zero-cost child per leaf.
// Auxiliary ids are n+1..n+L in ascending leaf order; they stand for the
// option "the chain ends at this leaf" and never appear in outputs.
struct AugmentedTree {
  Instance base;
  int32_t total = 0;                 // n + number of auxiliary vertices
  std::vector<VertexId> parent_aug;  // over 1..total
  std::vector<VertexId> aux_of;      // leaf -> its auxiliary child, else 0
  std::vector<int32_t> child_off;    // CSR over real children, 1..n+1
  std::vector<VertexId> child_dat;
  std::vector<VertexId> postorder;  // real vertices, children before parents
  std::vector<int32_t> depth;       // root at depth 0

  bool is_aux(VertexId v) const { return v > base.n; }
  VertexId aux_count() const { return total - base.n; }

  struct ChildRange {
    const VertexId* b;
    const VertexId* e;
    const VertexId* begin() const { return b; }
    const VertexId* end() const { return e; }
    int32_t size() const { return int32_t(e - b); }
  };
  ChildRange children(VertexId v) const {
    return {child_dat.data() + child_off[v], child_dat.data() + child_off[v + 1]};
  }
};

inline AugmentedTree augment(const Instance& inst) {
  AugmentedTree t;
  t.base = inst;
  const int32_t n = inst.n;
  t.child_off.assign(size_t(n) + 2, 0);
  for (VertexId v = 1; v <= n; ++v)
    if (inst.parent[v] != 0) ++t.child_off[inst.parent[v] + 1];
  for (int32_t v = 1; v <= n; ++v) t.child_off[v + 1] += t.child_off[v];
  t.child_dat.assign(size_t(n > 0 ? n - 1 : 0), 0);
  {
    std::vector<int32_t> cursor(t.child_off.begin(), t.child_off.end() - 1);
    for (VertexId v = 1; v <= n; ++v)
      if (inst.parent[v] != 0) t.child_dat[cursor[inst.parent[v]]++] = v;
  }
  t.aux_of.assign(size_t(n) + 1, 0);
  t.total = n;
  for (VertexId v = 1; v <= n; ++v)
    if (t.children(v).size() == 0) t.aux_of[v] = ++t.total;
  t.parent_aug.assign(size_t(t.total) + 1, 0);
  for (VertexId v = 1; v <= n; ++v) {
    t.parent_aug[v] = inst.parent[v];
    if (t.aux_of[v] != 0) t.parent_aug[t.aux_of[v]] = v;
  }
  t.depth.assign(size_t(n) + 1, 0);
  t.postorder.reserve(size_t(n));
  // Two-pass stack DFS: preorder push, reverse for postorder.
  std::vector<VertexId> stack{inst.root};
  std::vector<VertexId> pre;
  pre.reserve(size_t(n));
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    pre.push_back(u);
    for (VertexId c : t.children(u)) {
      t.depth[c] = t.depth[u] + 1;
      stack.push_back(c);
    }
  }
  t.postorder.assign(pre.rbegin(), pre.rend());
  return t;
}

struct EvalResult {
  bool feasible = false;
  Cost cost = 0;
  std::string violation;
};

// Checks the partition invariants (disjoint cover, parent/child consecutive
// links, per-chain weight bound) and returns the sum of per-chain maxima.
inline EvalResult evaluate_partition(const Instance& inst, const Partition& p) {
  EvalResult r;
  std::vector<char> seen(size_t(inst.n) + 1, 0);
  int64_t covered = 0;
  for (const auto& chain : p.chains) {
    if (chain.empty()) {
      r.violation = "empty chain";
      return r;
    }
    Weight total_w = 0;
    Cost max_s = 0;
    for (size_t k = 0; k < chain.size(); ++k) {
      VertexId u = chain[k];
      if (u < 1 || u > inst.n) {
        r.violation = "vertex " + std::to_string(u) + " out of range";
        return r;
      }
      if (seen[u]) {
        r.violation = "vertex " + std::to_string(u) + " covered twice";
        return r;
      }
      seen[u] = 1;
      ++covered;
      total_w += inst.w[u];
      max_s = std::max(max_s, inst.s[u]);
      if (k > 0 && inst.parent[u] != chain[k - 1]) {
        r.violation = std::to_string(chain[k - 1]) + "," + std::to_string(u) +
                      " not parent/child-consecutive";
        return r;
      }
    }
    if (total_w > inst.w0) {
      r.violation = "chain weight " + std::to_string(total_w) + " > " + std::to_string(inst.w0);
      return r;
    }
    r.cost += max_s;
  }
  if (covered != inst.n) {
    r.violation = "not all vertices covered";
    return r;
  }
  r.feasible = true;
  return r;
}

enum class TreeShape { UniformAttach, Path, Star, Caterpillar, Binary };
enum class W0Mode { Tight, Loose };

inline const char* to_token(TreeShape s) {
  switch (s) {
    case TreeShape::UniformAttach: return "uniform-attach";
    case TreeShape::Path: return "path";
    case TreeShape::Star: return "star";
    case TreeShape::Caterpillar: return "caterpillar";
    case TreeShape::Binary: return "binary";
  }
  return "?";
}

inline bool shape_from_token(const std::string& tok, TreeShape& out) {
  for (TreeShape s : {TreeShape::UniformAttach, TreeShape::Path, TreeShape::Star,
                      TreeShape::Caterpillar, TreeShape::Binary}) {
    if (tok == to_token(s)) {
      out = s;
      return true;
    }
  }
  return false;
}

struct GenParams {
  int32_t n = 1;
  TreeShape shape = TreeShape::UniformAttach;
  W0Mode w0_mode = W0Mode::Tight;
  Weight w_max = 10;
  Cost s_max = 100;
  uint64_t seed = 0;
};

// Seeded instance generator; byte-identical output for equal parameters.
// Bounded draws go through the raw engine so results do not depend on the
// standard library's distribution internals.
inline Instance generate_random(const GenParams& p) {
  if (p.n < 1) throw std::invalid_argument("generate_random: n must be >= 1");
  if (p.w_max < 1) throw std::invalid_argument("generate_random: w_max must be >= 1");
  if (p.s_max < 0) throw std::invalid_argument("generate_random: s_max must be >= 0");
  std::mt19937_64 eng(p.seed);
  auto bounded = [&](uint64_t k) { return k == 0 ? 0 : eng() % k; };

  Instance inst;
  inst.n = p.n;
  inst.w0 = p.w0_mode == W0Mode::Tight ? 2 * p.w_max : Weight(p.n) * p.w_max;
  inst.parent.assign(size_t(p.n) + 1, 0);
  inst.w.assign(size_t(p.n) + 1, 0);
  inst.s.assign(size_t(p.n) + 1, 0);
  inst.root = 1;
  int32_t spine = (p.n + 1) / 2;
  for (VertexId v = 2; v <= p.n; ++v) {
    switch (p.shape) {
      case TreeShape::UniformAttach: inst.parent[v] = VertexId(1 + bounded(uint64_t(v) - 1)); break;
      case TreeShape::Path: inst.parent[v] = v - 1; break;
      case TreeShape::Star: inst.parent[v] = 1; break;
      case TreeShape::Caterpillar:
        // Path spine of the first half; later vertices hang off it as legs.
        inst.parent[v] = v <= spine ? v - 1 : VertexId(1 + (v - spine - 1) % spine);
        break;
      case TreeShape::Binary: inst.parent[v] = v / 2; break;
    }
  }
  Weight wcap = std::min<Weight>(p.w_max, inst.w0);
  for (VertexId v = 1; v <= p.n; ++v) {
    inst.w[v] = 1 + Weight(bounded(uint64_t(wcap)));
    inst.s[v] = Cost(bounded(uint64_t(p.s_max) + 1));
  }
  return inst;
}

}  // namespace chainpart

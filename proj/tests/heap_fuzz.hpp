#pragma once

// Randomized heap-vs-reference driver shared by the unit and acceptance
// suites. Every operation is replayed against a sorted-map reference and the
// full structural audit runs after each one; the first divergence throws a
// std::logic_error carrying the seed for replay.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainpart/lazy_heap.hpp"

namespace chainpart::testing {

struct FuzzStats {
  int64_t sequences = 0;
  int64_t ops = 0;
};

namespace detail {

using Family = HeapFamily<int64_t>;
using Heap = Family::Heap;
using Ref = std::map<int32_t, int64_t>;  // element -> effective key

inline int32_t ref_extreme(const Ref& ref, HeapOrder ord) {
  int32_t best = Family::kNone;
  int64_t bk = 0;
  for (const auto& [e, k] : ref) {
    if (best == Family::kNone || (ord == HeapOrder::Min ? k < bk : k > bk)) {
      best = e;
      bk = k;
    }
    // std::map iterates ids ascending, so ties keep the smaller id.
  }
  return best;
}

[[noreturn]] inline void mismatch(uint64_t seed, const std::string& what) {
  throw std::logic_error("heap fuzz mismatch (seed " + std::to_string(seed) + "): " + what);
}

inline void verify(uint64_t seed, const Family& fam, const Heap& h, const Ref& ref) {
  fam.check_structure(h);
  if (h.size() != int64_t(ref.size())) mismatch(seed, "size");
  auto entries = fam.audit(h);
  if (entries.size() != ref.size()) mismatch(seed, "audit size");
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.elem < b.elem; });
  auto it = ref.begin();
  for (const auto& e : entries) {
    if (e.elem != it->first || e.effective_key != it->second) mismatch(seed, "keys diverge");
    ++it;
  }
  int32_t want = ref_extreme(ref, h.order());
  if (fam.find_extreme(h) != want) mismatch(seed, "find_extreme");
  if (fam.last_find_extreme_visits() > 1) mismatch(seed, "find_extreme visit bound");
}

}  // namespace detail

inline FuzzStats run_heap_fuzz(uint64_t seed, int64_t sequences, int max_ops) {
  using namespace detail;
  std::mt19937_64 eng(seed);
  FuzzStats stats;
  for (int64_t sq = 0; sq < sequences; ++sq) {
    ++stats.sequences;
    HeapOrder ord = eng() % 2 ? HeapOrder::Min : HeapOrder::Max;
    // Mostly short sequences with an occasional long one.
    int ops = 1 + int(eng() % (eng() % 100 == 0 ? uint64_t(max_ops) : 48));
    Family fam;
    std::vector<Heap> heaps;
    std::vector<Ref> refs;
    int nheaps = 1 + int(eng() % 3);
    for (int h = 0; h < nheaps; ++h) {
      heaps.push_back(fam.create(ord));
      refs.emplace_back();
    }
    int32_t next_elem = 0;
    for (int op = 0; op < ops; ++op) {
      ++stats.ops;
      int h = int(eng() % heaps.size());
      switch (eng() % 10) {
        case 0:
        case 1:
        case 2: {
          int64_t key = int64_t(eng() % 2001) - 1000;
          int32_t e = next_elem++;
          fam.insert(heaps[h], e, key);
          refs[h][e] = key;
          break;
        }
        case 3:
        case 4: {  // erase: half the time a present element, half arbitrary
          if (refs[h].empty() || eng() % 2) {
            int32_t e = int32_t(eng() % uint64_t(next_elem + 1));
            bool present = refs[h].count(e) > 0;
            fam.erase(heaps[h], e);
            if (present) refs[h].erase(e);
          } else {
            auto it = refs[h].begin();
            std::advance(it, eng() % refs[h].size());
            fam.erase(heaps[h], it->first);
            refs[h].erase(it);
          }
          break;
        }
        case 5: {
          int64_t d = int64_t(eng() % 401) - 200;
          fam.add_all(heaps[h], d);
          for (auto& [e, k] : refs[h]) k += d;
          break;
        }
        case 6: {
          int g = int(eng() % heaps.size());
          if (g == h) break;
          fam.meld(heaps[h], heaps[g]);
          refs[h].insert(refs[g].begin(), refs[g].end());
          refs[g].clear();
          break;
        }
        case 7: {
          (void)fam.find_extreme(heaps[h]);
          break;
        }
        case 8: {  // key_value probe with its visit bound
          if (refs[h].empty()) break;
          auto it = refs[h].begin();
          std::advance(it, eng() % refs[h].size());
          if (fam.key_value(heaps[h], it->first) != it->second) mismatch(seed, "key_value");
          double bound = std::log2(double(heaps[h].size())) + 1.0;
          if (double(fam.last_key_value_visits()) > bound + 1e-9)
            mismatch(seed, "key_value visit bound");
          break;
        }
        default: {
          if (fam.contains(heaps[h], next_elem)) mismatch(seed, "contains absent");
          if (!refs[h].empty()) {
            auto it = refs[h].begin();
            if (!fam.contains(heaps[h], it->first)) mismatch(seed, "contains present");
            size_t other = (size_t(h) + 1) % heaps.size();
            if (other != size_t(h) && refs[other].count(it->first) == 0 &&
                fam.contains(heaps[other], it->first))
              mismatch(seed, "contains cross-heap");
          }
          break;
        }
      }
      for (size_t k = 0; k < heaps.size(); ++k) verify(seed, fam, heaps[k], refs[k]);
    }
  }
  return stats;
}

}  // namespace chainpart::testing

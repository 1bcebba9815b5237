#pragma once

// independent reference implementations used by the tests

#include <deque>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "leafy/la.hpp"
#include "leafy/lla.hpp"
#include "leafy/vass.hpp"

namespace oracle {

struct BruteVass {
  bool reachable = false;
  bool bound_hit = false;  // some configuration was cut off by the bound
};

// plain breadth-first search over (state, counters) with every counter <= bound
inline BruteVass brute_reach(const leafy::vass::Vass& v, const leafy::vass::Query& q, int bound) {
  using Conf = std::pair<int, std::vector<int>>;
  auto zero = std::vector<int>(v.num_counters, 0);
  auto src = q.source_counters.empty() ? zero : q.source_counters;
  auto tgt = q.target_counters.empty() ? zero : q.target_counters;
  BruteVass r;
  std::set<Conf> seen;
  std::deque<std::pair<Conf, int>> todo{{{q.source, src}, 0}};
  seen.insert({q.source, src});
  while (!todo.empty()) {
    auto [c, steps] = todo.front();
    todo.pop_front();
    if (q.targets.count(c.first) && c.second == tgt && (steps > 0 || !q.require_step)) {
      r.reachable = true;
      return r;
    }
    for (auto& t : v.trans) {
      if (t.src != c.first) continue;
      auto n = c.second;
      bool ok = true;
      for (int d : t.dec)
        if (--n[d] < 0) ok = false;
      if (!ok) continue;
      for (int i : t.inc) ++n[i];
      for (int x : n)
        if (x > bound) ok = false;
      if (!ok) {
        r.bound_hit = true;
        continue;
      }
      Conf next{t.dst, n};
      // the target may equal the source, so the zero-step node is revisited once
      if (seen.insert(next).second || (steps == 0 && next == Conf{q.source, src}))
        todo.push_back({next, steps + 1});
    }
  }
  return r;
}

inline leafy::vass::Vass random_vass(std::mt19937_64& rng, int states, int counters, int trans) {
  leafy::vass::Vass v;
  v.num_counters = counters;
  for (int i = 0; i < states; ++i) v.add_state("s" + std::to_string(i));
  std::uniform_int_distribution<int> st(0, states - 1), ct(0, counters - 1), nd(0, 2);
  for (int i = 0; i < trans; ++i) {
    leafy::vass::Transition t;
    t.src = st(rng);
    t.dst = st(rng);
    int nd_ = nd(rng), ni = nd(rng);
    for (int j = 0; j < nd_; ++j) t.dec.push_back(ct(rng));
    for (int j = 0; j < ni; ++j) t.inc.push_back(ct(rng));
    t.label = i;
    v.add(t);
  }
  return v;
}

// A 3-LLA with two states at levels 0 and 1 and three at levels 2 and 3.
// Even nodes create at most one child: state 0 is fresh, 1 has created its
// child, and at level 2 state 2 means the child has returned. A level-1 node
// has one pending child at a time (it creates from 0 and moves to 1), so the
// TEST searches stay finite. The remaining tuples are drawn at random.
inline leafy::lla::LocalAutomaton tiny_lla(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.45);
  leafy::la::LeafyAutomaton a;
  for (auto q : {"q", "a"}) a.add_letter(q, true);
  for (auto q : {"qq", "aa"}) a.add_letter(q, true);
  for (auto q : {"d", "b"}) a.add_letter(q, false);
  for (auto q : {"dd", "bb"}) a.add_letter(q, false);
  const std::vector<std::string> two = {"0", "1"}, three = {"0", "1", "2"};
  for (int l = 0; l <= 3; ++l)
    for (auto& s : l < 2 ? two : three) a.add_state(l, s);
  auto some = [&](const std::vector<std::string>& from) {
    std::vector<std::string> out;
    for (auto& s : from)
      if (coin(rng)) out.push_back(s);
    if (out.empty()) out.push_back(from[rng() % from.size()]);
    return out;
  };
  a.add(0, true, {}, "q", {"0"});
  for (auto& s : some(two)) a.add(1, true, {"0"}, "a", {"1", s});
  for (auto& s : some(two)) a.add(1, false, {"1", s}, "b", {"1"});
  a.add(0, false, {"1"}, "d", {});
  if (coin(rng)) a.add(0, false, {"0"}, "d", {});
  a.add(2, true, {"1", "0"}, "qq", {"1", "1", "0"});
  // level 3 leaves the level-1 state alone
  for (auto& s : two) {
    a.add(3, true, {"1", s, "0"}, "aa", {"1", s, "1", "0"});
    if (coin(rng)) a.add(3, true, {"1", s, "0"}, "aa", {"1", s, "1", "1"});
    for (auto& t : some({"0", "1"})) a.add(3, false, {"1", s, "1", t}, "bb", {"1", s, "2"});
  }
  for (auto& s : two)
    for (auto& s2 : some(two)) {
      a.add(2, false, {"1", s, "2"}, "dd", {"1", s2});
      if (coin(rng)) a.add(2, false, {"1", s, "0"}, "dd", {"1", s2});
    }
  return leafy::lla::localize(a, {{0, 1}, {2, 1}});
}

}  // namespace oracle

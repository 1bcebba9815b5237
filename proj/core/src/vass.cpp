#include "leafy/vass.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <unordered_set>

namespace leafy::vass {

int Vass::add_state(const std::string& name) {
  state_names.push_back(name);
  return num_states++;
}

int Vass::add(const Transition& t) {
  trans.push_back(t);
  for (int c : t.dec) num_counters = std::max(num_counters, c + 1);
  for (int c : t.inc) num_counters = std::max(num_counters, c + 1);
  num_states = std::max({num_states, t.src + 1, t.dst + 1});
  if (static_cast<int>(state_names.size()) < num_states) state_names.resize(num_states);
  return static_cast<int>(trans.size()) - 1;
}

const std::vector<int>& Vass::out(int state) const {
  if (indexed_ != trans.size() || static_cast<int>(out_.size()) != num_states) {
    out_.assign(num_states, {});
    for (std::size_t i = 0; i < trans.size(); ++i) out_[trans[i].src].push_back(static_cast<int>(i));
    indexed_ = trans.size();
  }
  return out_[state];
}

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Reachable: return "Reachable";
    case Verdict::Unreachable: return "Unreachable";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

using Counters = std::vector<int>;

// control state then one byte per counter
using Key = std::string;

struct Node {
  Key key;
  int parent;
  int via;
};

Counters fill(const std::vector<int>& given, int n) {
  Counters c(n, 0);
  for (std::size_t i = 0; i < given.size() && static_cast<int>(i) < n; ++i) c[i] = given[i];
  return c;
}

Key pack(int state, const Counters& c) {
  Key k(sizeof(int) + c.size(), '\0');
  std::memcpy(k.data(), &state, sizeof(int));
  for (std::size_t i = 0; i < c.size(); ++i) k[sizeof(int) + i] = static_cast<char>(c[i]);
  return k;
}

int state_of(const Key& k) {
  int s;
  std::memcpy(&s, k.data(), sizeof(int));
  return s;
}

unsigned char& counter_of(Key& k, int i) {
  return reinterpret_cast<unsigned char&>(k[sizeof(int) + i]);
}

// 0: fires, 1: blocked by a guard, 2: exceeds the cap
int fire(const Transition& t, const Key& from, int cap, Key& out) {
  out = from;
  std::memcpy(out.data(), &t.dst, sizeof(int));
  for (int x : t.dec) {
    auto& c = counter_of(out, x);
    if (c == 0) return 1;
    --c;
  }
  for (int x : t.inc) {
    auto& c = counter_of(out, x);
    if (c >= cap) return 2;
    ++c;
  }
  return 0;
}

std::vector<int> path(const std::vector<Node>& nodes, int i) {
  std::vector<int> w;
  for (; nodes[i].parent != -1; i = nodes[i].parent) w.push_back(nodes[i].via);
  std::reverse(w.begin(), w.end());
  return w;
}

template <class OnTarget>
void search(const Vass& v, const Query& q, int cap, std::size_t max_nodes, bool& closed,
            bool& cap_hit, std::size_t& explored, int& max_counter, OnTarget&& on_target) {
  if (cap < 1 || cap > kMaxCap) throw std::invalid_argument("counter cap out of range");
  int n = v.num_counters;
  Counters start = fill(q.source_counters, n);
  for (int x : start)
    if (x < 0 || x > cap) throw std::invalid_argument("source counters outside the cap");
  Key goal_counters = pack(0, fill(q.target_counters, n)).substr(sizeof(int));
  std::vector<Node> nodes;
  std::unordered_set<Key> seen;
  nodes.push_back({pack(q.source, start), -1, -1});
  for (int x : start) max_counter = std::max(max_counter, x);
  if (!q.require_step) seen.insert(nodes[0].key);
  closed = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ++explored;
    int s = state_of(nodes[i].key);
    if ((i > 0 || !q.require_step) && q.targets.count(s) &&
        nodes[i].key.compare(sizeof(int), std::string::npos, goal_counters) == 0)
      if (!on_target(nodes, static_cast<int>(i))) return;
    for (int ti : v.out(s)) {
      const Transition& t = v.trans[ti];
      Key next;
      int r = fire(t, nodes[i].key, cap, next);
      if (r == 1) continue;
      if (r == 2) {
        cap_hit = true;
        continue;
      }
      if (seen.count(next)) continue;
      if (nodes.size() >= max_nodes) {
        closed = false;
        return;
      }
      for (int x : t.inc) max_counter = std::max(max_counter, static_cast<int>(counter_of(next, x)));
      seen.insert(next);
      nodes.push_back({std::move(next), static_cast<int>(i), ti});
    }
  }
}

}  // namespace

Result reach(const Vass& v, const Query& q, int cap, std::size_t max_nodes) {
  Result r;
  bool found = false;
  search(v, q, cap, max_nodes, r.closed, r.cap_hit, r.explored, r.max_counter,
         [&](const std::vector<Node>& nodes, int i) {
           r.witness = path(nodes, i);
           r.target = state_of(nodes[i].key);
           found = true;
           return false;
         });
  if (found) r.verdict = Verdict::Reachable;
  else if (r.closed && !r.cap_hit) r.verdict = Verdict::Unreachable;
  else r.verdict = Verdict::Unknown;
  return r;
}

AllTargets reach_all(const Vass& v, const Query& q, int cap, std::size_t max_nodes) {
  AllTargets a;
  bool closed = false;
  int max_counter = 0;
  search(v, q, cap, max_nodes, closed, a.cap_hit, a.explored, max_counter,
         [&](const std::vector<Node>& nodes, int i) {
           int s = state_of(nodes[i].key);
           if (!a.witnesses.count(s)) a.witnesses[s] = path(nodes, i);
           return true;
         });
  a.complete = closed && !a.cap_hit;
  return a;
}

bool replay(const Vass& v, const Query& q, const std::vector<int>& witness) {
  int n = v.num_counters;
  Counters c = fill(q.source_counters, n);
  int s = q.source;
  for (int ti : witness) {
    if (ti < 0 || ti >= static_cast<int>(v.trans.size())) return false;
    const Transition& t = v.trans[ti];
    if (t.src != s) return false;
    for (int x : t.dec)
      if (--c[x] < 0) return false;
    for (int x : t.inc) ++c[x];
    s = t.dst;
  }
  if (q.require_step && witness.empty()) return false;
  return q.targets.count(s) && c == fill(q.target_counters, n);
}

}  // namespace leafy::vass

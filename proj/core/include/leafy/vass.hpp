#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace leafy::vass {

struct Transition {
  int src = 0;
  int dst = 0;
  std::vector<int> dec;  // each decrement is guarded by the counter being positive
  std::vector<int> inc;
  int label = -1;
};

struct Vass {
  int num_states = 0;
  int num_counters = 0;
  std::vector<Transition> trans;
  std::vector<std::string> state_names;

  int add_state(const std::string& name = "");
  int add(const Transition& t);
  const std::vector<int>& out(int state) const;

 private:
  mutable std::vector<std::vector<int>> out_;
  mutable std::size_t indexed_ = 0;
};

struct Query {
  int source = 0;
  std::vector<int> source_counters;  // empty: all zero
  std::set<int> targets;
  std::vector<int> target_counters;  // empty: all zero
  bool require_step = false;         // the empty run does not count
};

enum class Verdict { Reachable, Unreachable, Unknown };
std::string verdict_str(Verdict v);

struct Result {
  Verdict verdict = Verdict::Unknown;
  std::vector<int> witness;  // transition indices
  int target = -1;
  bool closed = false;   // every node with counters within the cap was expanded
  bool cap_hit = false;  // some successor needed a counter above the cap
  std::size_t explored = 0;
  int max_counter = 0;   // largest counter value seen
};

constexpr int kMaxCap = 255;

// forward search over configurations whose counters stay within `cap`
Result reach(const Vass& v, const Query& q, int cap, std::size_t max_nodes = 2000000);

struct AllTargets {
  std::map<int, std::vector<int>> witnesses;  // target state -> firing sequence
  bool complete = false;  // closed and the cap was never hit
  bool cap_hit = false;
  std::size_t explored = 0;
};

AllTargets reach_all(const Vass& v, const Query& q, int cap, std::size_t max_nodes = 2000000);

// fires the sequence from the source and checks that it ends in a target
bool replay(const Vass& v, const Query& q, const std::vector<int>& witness);

}  // namespace leafy::vass

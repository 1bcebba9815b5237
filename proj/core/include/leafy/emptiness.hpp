#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "leafy/la.hpp"
#include "leafy/lla.hpp"
#include "leafy/vass.hpp"

namespace leafy::emptiness {

// state id standing for the missing levels below 0
constexpr int kBottom = -1;

using Pair = std::pair<int, int>;  // states at levels 2i-2 and 2i-1

struct Summary {
  int level = 0;
  std::vector<Pair> f;  // f[0] is f(1)

  int maxdom() const { return static_cast<int>(f.size()); }
  const Pair& at(int r) const { return f[r - 1]; }
  std::string str(const la::LeafyAutomaton& a) const;

  auto operator<=>(const Summary&) const = default;
};

// one letter of a summary witness; node 0 is the summarised node and -1 its
// parent, other ids are nodes of its subtree
struct WLetter {
  int letter = 0;
  int node = 0;
  int parent = -1;
  bool question = true;
};

// letters inside the subtree since the previous interaction, then the
// interaction with the parent that consumes f(2s+1), f(2s+2)
struct Segment {
  std::vector<WLetter> internal;
  WLetter frontier;
};

using Witness = std::vector<Segment>;

struct SummarySet {
  int level = 0;
  std::vector<Summary> items;
  std::vector<Witness> witnesses;  // parallel to items
  bool complete = true;            // false when some search was cut short
  std::string note;

  int find(const Summary& s) const;
};

// length bound l of the domain {1..2(l+1)}; -1 selects b+1
std::vector<Summary> enumerate_candidate_summaries(const lla::LocalAutomaton& a, int level,
                                                   int length_bound = -1);
std::size_t count_candidate_summaries(const lla::LocalAutomaton& a, int level,
                                      int length_bound = -1);

la::LeafyAutomaton build_cut(const lla::LocalAutomaton& a, int level, const Summary& f);
la::LeafyAutomaton build_lift(const lla::LocalAutomaton& a, int level,
                              const std::vector<Summary>& summaries);

enum class RuleKind {
  InitRoot,
  AcceptRoot,
  AddChild,
  RemoveChild,
  AddGrandchild,
  ProgressGrandchild,
  RemoveGrandchild,
};

struct Rule {
  RuleKind kind = RuleKind::InitRoot;
  int letter = -1;  // for rules on the root and its children
  int j = -1;       // child slot, 0-based
  int summary = -1; // index into the upper set
  int r = 0;
};

struct TestVass {
  vass::Vass v;
  vass::Query query;
  std::vector<Rule> rules;              // indexed by VASS transition label
  std::vector<std::vector<int>> keys;   // control state valuations
  std::vector<std::string> counters;    // children[j,f,r] names
  std::map<int, Summary> accepted;      // target state -> summary, guessing mode
  bool truncated = false;               // control state limit reached
};

// fixed candidate: TEST(fhat)
TestVass build_test_vass(const lla::LocalAutomaton& a, int level, const Summary& fhat,
                         const SummarySet* upper, std::size_t max_states = 200000);
// the summary is guessed along the run and recorded in the control state
TestVass build_test_vass_guess(const lla::LocalAutomaton& a, int level, const SummarySet* upper,
                               int length_bound, std::size_t max_states = 200000);

vass::Result vass_reach(const TestVass& t, int cap, std::size_t max_nodes = 2000000);

Witness stitch(const TestVass& t, const std::vector<int>& firing, const SummarySet* upper);
la::Trace flatten(const Witness& w);

struct Options {
  int cap = 8;
  int length_bound = -1;      // -1: 2b+1, enough for b children
  bool per_candidate = false; // otherwise one guessing search per level
  int jobs = 1;
  std::size_t max_nodes = 2000000;
  std::size_t max_states = 200000;
  std::size_t max_candidates = 200000;
  bool first_only = false;    // stop at the first summary found
};

SummarySet compute_summaries(const lla::LocalAutomaton& a, int level, const SummarySet* upper,
                             const Options& opt = {});

enum class Verdict { NonEmpty, Empty, Unknown };
std::string verdict_str(Verdict v);

struct Result {
  Verdict verdict = Verdict::Unknown;
  la::Trace witness;
  bool replayed = false;
  std::vector<SummarySet> levels;  // deepest first
  std::string reason;
};

Result decide_emptiness(const lla::LocalAutomaton& a, const Options& opt = {});

}  // namespace leafy::emptiness

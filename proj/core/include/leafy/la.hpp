#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace leafy::la {

struct Letter {
  std::string name;
  bool question = true;
};

// A question at level i rewrites the states at levels lo..i-1 and adds a leaf
// at level i; an answer at level i reads lo..i, removes the leaf and rewrites
// lo..i-1. Levels below lo are neither read nor written. Plain leafy automata
// use lo = 0 throughout; local presentations use the narrower windows.
struct Transition {
  int level = 0;
  bool question = true;
  int lo = 0;
  std::vector<int> src;
  int letter = 0;
  std::vector<int> dst;

  bool operator==(const Transition&) const = default;
  bool operator<(const Transition& o) const;
};

class LeafyAutomaton {
 public:
  int k = 0;
  std::vector<Letter> alphabet;
  std::vector<std::vector<std::string>> states;
  std::vector<Transition> trans;

  int add_letter(const std::string& name, bool question);
  int find_letter(const std::string& name) const;
  int add_state(int level, const std::string& name);
  int find_state(int level, const std::string& name) const;
  // returns false when the tuple was already present
  bool add(const Transition& t);
  bool add(int level, bool question, const std::vector<std::string>& src,
           const std::string& letter, const std::vector<std::string>& dst, int lo = 0);

  std::size_t num_states() const;
  std::size_t count(int level, bool question) const;

  // transitions with the given window and source tuple
  const std::vector<int>& matching(int level, bool question, int lo,
                                   const std::vector<int>& src) const;
  const std::vector<int>& windows(int level, bool question) const;

  void rebuild_index() const;

 private:
  std::vector<std::unordered_map<std::string, int>> state_ids_;
  std::unordered_map<std::string, int> letter_ids_;
  std::set<std::vector<int>> keys_;
  mutable bool indexed_ = false;
  mutable std::map<std::vector<int>, std::vector<int>> index_;
  mutable std::map<std::pair<int, bool>, std::vector<int>> windows_;
  void ensure_level(int level);
};

bool structurally_equal(const LeafyAutomaton& a, const LeafyAutomaton& b);

struct Node {
  int parent = -1;
  int level = 0;
  int state = 0;
  int children = 0;
};

struct Configuration {
  std::set<int> seen;
  std::map<int, Node> tree;

  bool empty() const { return tree.empty(); }
  std::vector<int> branch(int d) const;  // root first, d last
  int fresh() const { return seen.empty() ? 0 : *seen.rbegin() + 1; }
  std::string canonical() const;  // labelled tree up to renaming of values
};

struct TraceLetter {
  int letter = 0;
  int value = 0;
  int parent = -1;  // questions only, -1 for a new root

  bool operator==(const TraceLetter&) const = default;
};

using Trace = std::vector<TraceLetter>;

std::vector<Configuration> step(const LeafyAutomaton& a, const Configuration& c,
                                const TraceLetter& l);

struct Move {
  TraceLetter letter;
  Configuration next;
  int transition = -1;
};

// all moves from c, fresh values allocated canonically
std::vector<Move> successors(const LeafyAutomaton& a, const Configuration& c);

enum class RunStatus { Trace, Accepted, Rejected };

struct RunResult {
  RunStatus status = RunStatus::Trace;
  int failed_at = -1;
  std::string reason;
  Configuration final;
};

RunResult run_trace(const LeafyAutomaton& a, const Trace& w);
bool accepts(const LeafyAutomaton& a, const Trace& w);

// stops early when the callback returns false
void enumerate_traces(const LeafyAutomaton& a, int max_len, bool accepted_only,
                      const std::function<bool(const Trace&)>& cb);
std::vector<Trace> accepted_traces(const LeafyAutomaton& a, int max_len,
                                   std::size_t limit = 100000);

struct EvenReadyReport {
  bool ok = true;
  bool complete = true;
  Trace counterexample;
  int node = -1;
  std::string reason;
  std::size_t configurations = 0;
};

EvenReadyReport check_even_ready(const LeafyAutomaton& a, int max_len,
                                 std::size_t max_configs = 2000000);

Trace random_trace(const LeafyAutomaton& a, int max_len, std::mt19937_64& rng);

// keep states and transitions reachable from the empty configuration when
// every level is read independently
LeafyAutomaton trim(const LeafyAutomaton& a);

std::string trace_str(const LeafyAutomaton& a, const Trace& w);

std::string to_json(const LeafyAutomaton& a, int indent = 1);
LeafyAutomaton from_json(const std::string& text);
std::string trace_to_json(const LeafyAutomaton& a, const Trace& w);
Trace trace_from_json(const LeafyAutomaton& a, const std::string& text);

}  // namespace leafy::la

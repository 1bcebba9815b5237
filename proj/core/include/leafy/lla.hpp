#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "leafy/la.hpp"

namespace leafy::lla {

// lowest level a transition at `level` may read or write
int window_lo(int level);

class NotLocal : public std::runtime_error {
 public:
  NotLocal(int level, std::string tuple);
  int level;
  std::string tuple;
};

struct LocalAutomaton {
  la::LeafyAutomaton base;
  la::LeafyAutomaton local;  // same states and letters, transitions cut to their windows
  std::map<int, int> even_bounds;
  std::string bounds_source = "asserted";  // or "computed"
  // expanding `local` gives back exactly the transitions of `base`
  bool exact = true;
};

LocalAutomaton localize(const la::LeafyAutomaton& a, std::map<int, int> even_bounds = {});

// every windowed transition becomes one transition per choice of states
// below its window
la::LeafyAutomaton expand(const la::LeafyAutomaton& local);

enum class BoundVerdict { Verified, Refuted, Unknown };
std::string verdict_str(BoundVerdict v);

struct BoundReport {
  BoundVerdict verdict = BoundVerdict::Unknown;
  bool complete = false;  // Verified for every length, not only up to max_len
  la::Trace witness;
  std::size_t configurations = 0;
  std::string reason;
};

BoundReport verify_bound(const la::LeafyAutomaton& a, int level, int b, int max_len,
                         std::size_t max_configs = 400000);

// parent and level of every data value seen in a trace
struct Genealogy {
  std::map<int, int> parent;
  std::map<int, int> level;

  void add(const la::TraceLetter& l);
  std::set<int> domain(int value) const;
};

Genealogy genealogy(const la::Trace& w);
bool independent(const Genealogy& g, const la::TraceLetter& a, const la::TraceLetter& b);

std::string to_json(const LocalAutomaton& l, int indent = 1);
LocalAutomaton from_json(const std::string& text);

}  // namespace leafy::lla

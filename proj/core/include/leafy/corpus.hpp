#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leafy/la.hpp"

namespace leafy::corpus {

struct CorpusTerm {
  std::string name;
  std::string source;  // program text, context before |-
  int max = 1;
  bool closed = true;
};

// closed com terms first, then open ones; the worked example is last
const std::vector<CorpusTerm>& terms();
const CorpusTerm* find_term(const std::string& name);

la::LeafyAutomaton build_counter_la();

struct Step {
  enum Kind { Inc, JzDec } kind = Inc;
  int counter = 1;  // 1 or 2
  int next = 0;     // Inc target, or JzDec target when zero
  int nonzero = 0;  // JzDec target after decrementing
};

struct TwoCounterMachine {
  std::vector<std::string> states;
  int initial = 0;
  int final = 0;
  std::vector<std::optional<Step>> step;  // empty exactly at the final state

  void validate() const;
};

// inc c1; jz c1 (halt | dec c1; back to the test)
TwoCounterMachine halting_machine();
// inc c1 forever
TwoCounterMachine looping_machine();

// A1 accepts pseudo-runs with matched increments; A2 those of them with a zero
// test taken while an observed increment was pending. With `literal`, an
// observed increment leaves the machine state where it was.
std::pair<la::LeafyAutomaton, la::LeafyAutomaton> build_halting_las(const TwoCounterMachine& m,
                                                                   bool literal = false);

// the run of m from the initial state as a trace over the A1/A2 alphabet;
// empty when m does not halt with zero counters within max_steps
std::optional<la::Trace> run_trace(const TwoCounterMachine& m, const la::LeafyAutomaton& a,
                                   int max_steps);

// counters are the children of two level-1 nodes under the machine state
la::LeafyAutomaton build_two_counter_2la(const TwoCounterMachine& m);

}  // namespace leafy::corpus

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "leafy/fica.hpp"
#include "leafy/la.hpp"

namespace leafy::compiler {

struct CompiledAutomaton {
  la::LeafyAutomaton automaton;
  fica::Context ctx;
  fica::TypeP type;
  fica::TermP normal;
  int max = 1;
  // per level: state name -> printed subterm whose translation introduced it
  std::vector<std::map<std::string, std::string>> origins;
};

struct CompileOptions {
  int max = 1;
  // trim every sub-automaton to its reachable part before it is combined
  bool trim_children = true;
  const fica::OpRegistry* ops = nullptr;
};

CompiledAutomaton compile(const fica::Context& ctx, const fica::TermP& term,
                          const CompileOptions& opts);
CompiledAutomaton compile(const fica::Context& ctx, const fica::TermP& term, int max = 1);

std::string origins_to_json(const CompiledAutomaton& c, int indent = 1);

// even level -> number of children a node at that level may create in a run;
// throws fica::FicaError when the term is not local
std::map<int, int> branching_bound(const fica::Context& ctx, const fica::TermP& term,
                                   int max = 1);

struct CrossCheckReport {
  std::size_t accepted = 0;
  std::size_t invalid = 0;
  std::vector<std::string> failures;
  std::set<std::string> plays;  // complete plays, moves separated by spaces
  bool compared = false;        // closed com term: compared against the interpreter
  bool nonempty = false;
  fica::Termination termination = fica::Termination::BudgetExhausted;
  bool agree = true;
};

CrossCheckReport cross_check_semantics(const fica::Context& ctx, const fica::TermP& term,
                                       int max_len, int max = 1);

}  // namespace leafy::compiler

#pragma once

#include <string>
#include <vector>

#include "leafy/fica.hpp"
#include "leafy/games.hpp"
#include "leafy/la.hpp"

namespace leafy::la2fica {

// letters and states are coded by their indices, so every code lies in
// {0..max} with max = max(|Σ|, |Q^(i)|) - 1
struct GeneratedTerm {
  fica::TermP term;
  fica::TypeP type;  // θ_k
  int max = 0;
  la::LeafyAutomaton source;
};

int code_bound(const la::LeafyAutomaton& a);

// θ_0 = com^N -> exp, θ_{i+1} = (θ_i -> com)^N -> exp with N = max+1
fica::TypeP theta(int k, int max);

GeneratedTerm generate_term(const la::LeafyAutomaton& a);

// play(w) under the two-moves-per-letter encoding
games::Play word_play(const la::LeafyAutomaton& a, const la::Trace& w, int max);

struct WordReport {
  bool ok = true;
  std::size_t traces = 0;
  la::Trace counterexample;
  std::string reason;
};

WordReport check_word_representation(const la::LeafyAutomaton& a, int max_len);

}  // namespace leafy::la2fica

#pragma once

#include <set>
#include <string>
#include <vector>

#include "leafy/fica.hpp"
#include "leafy/la.hpp"

namespace leafy::games {

enum class Eps { None, Question, Answer };

// m^(path,rho), written run, run^f, run^f.1, write(3)^(x.1,2); eq / ea for epsilon
struct AMove {
  std::string base;
  std::vector<std::string> path;
  int rho = 0;
  Eps eps = Eps::None;

  bool operator==(const AMove&) const = default;
};

AMove parse_move(const std::string& s);
std::string move_str(const AMove& m);
std::string path_str(const std::vector<std::string>& path);

bool is_question_base(const std::string& base);
bool answers(const std::string& answer, const std::string& question);
std::vector<std::string> question_moves(fica::TypeKind base, int max);
std::vector<std::string> answer_moves(fica::TypeKind base, int max);

enum class Owner { O, P };

struct ArenaMove {
  std::string base;
  std::vector<std::string> path;
  bool question = true;
  Owner owner = Owner::O;
  bool initial = false;
};

struct Arena {
  std::vector<ArenaMove> moves;

  int find(const std::string& base, const std::vector<std::string>& path) const;
  int find(const AMove& m) const { return find(m.base, m.path); }
  bool enables(int m, int n) const;
  std::size_t size() const { return moves.size(); }
};

// argument u of theta_h -> ... -> theta_1 -> beta is numbered u
Arena arena_of_type(const fica::TypeP& t, int max);
Arena arena_of_judgment(const fica::Context& ctx, const fica::TypeP& t, int max);

struct PlayMove {
  AMove move;
  int pointer = -1;

  bool operator==(const PlayMove&) const = default;
};

using Play = std::vector<PlayMove>;

struct PlayCheck {
  bool ok = true;
  int index = -1;  // length of the first bad prefix minus one
  std::string reason;
};

PlayCheck validate_play(const Arena& a, const Play& p);

// decodes a data word over annotated moves; throws std::invalid_argument on
// a pointer that leaves the tree or an unmatched answer
Play trace_to_play(const la::LeafyAutomaton& a, const la::Trace& w);

std::set<std::string> saturation_closure(const Arena& a, const std::vector<Play>& plays,
                                         std::size_t maxlen);
std::vector<Play> saturation_closure_plays(const Arena& a, const std::vector<Play>& plays,
                                           std::size_t maxlen);

std::string play_key(const Play& p);
std::string pretty(const Arena& a, const Play& p);
std::string play_to_json(const Play& p);
Play play_from_json(const std::string& text);

}  // namespace leafy::games

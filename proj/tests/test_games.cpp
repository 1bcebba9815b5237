#include <doctest.h>

#include "leafy/compiler.hpp"
#include "leafy/games.hpp"

using namespace leafy;
using games::AMove;
using games::Eps;
using games::Play;

namespace {

Play seq(const games::Arena& a, std::vector<std::pair<std::string, int>> ms) {
  Play p;
  for (auto& [s, ptr] : ms) {
    p.push_back({games::parse_move(s), ptr});
    REQUIRE(a.find(p.back().move) >= 0);
  }
  return p;
}

games::Arena a1() { return games::arena_of_type(fica::parse_type("com -> com -> com"), 1); }

}  // namespace

TEST_CASE("arena: base types") {
  auto com = games::arena_of_type(fica::com_t(), 1);
  REQUIRE(com.size() == 2);
  int run = com.find("run", {}), done = com.find("done", {});
  REQUIRE(run >= 0);
  REQUIRE(done >= 0);
  CHECK(com.moves[run].initial);
  CHECK(com.moves[run].owner == games::Owner::O);
  CHECK(com.moves[done].owner == games::Owner::P);
  CHECK(com.enables(run, done));

  auto exp = games::arena_of_type(fica::exp_t(), 3);
  CHECK(exp.size() == 5);
  for (int i = 0; i <= 3; ++i) CHECK(exp.find(std::to_string(i), {}) >= 0);

  auto var = games::arena_of_type(fica::var_t(), 1);
  CHECK(var.size() == 1 + 2 + 2 + 1);  // read, 0, 1, write(0), write(1), ok
  auto sem = games::arena_of_type(fica::sem_t(), 1);
  CHECK(sem.find("grab", {}) >= 0);
  CHECK(sem.find("release", {}) >= 0);
}

TEST_CASE("arena: com -> com -> com") {
  auto a = a1();
  CHECK(a.size() == 6);
  int run = a.find("run", {});
  int r1 = a.find("run", {"1"}), r2 = a.find("run", {"2"});
  REQUIRE(r1 >= 0);
  REQUIRE(r2 >= 0);
  CHECK(a.enables(run, r1));
  CHECK(a.enables(run, r2));
  CHECK(a.moves[r1].owner == games::Owner::P);
  CHECK_FALSE(a.moves[r1].initial);
  // owners alternate along enabling
  for (std::size_t m = 0; m < a.size(); ++m)
    for (std::size_t n = 0; n < a.size(); ++n)
      if (a.enables(static_cast<int>(m), static_cast<int>(n))) {
        CHECK(a.moves[m].owner != a.moves[n].owner);
        CHECK(a.moves[m].question);
      }
}

TEST_CASE("arena: theta family sizes") {
  // com^N -> exp has 2N moves for the arguments and max+2 for exp
  for (int max = 0; max <= 2; ++max) {
    int n = max + 1;
    auto t0 = games::arena_of_type(fica::parse_type(
                                       max == 0 ? "com -> exp" : max == 1 ? "com -> com -> exp"
                                                                          : "com -> com -> com -> exp"),
                                   max);
    CHECK(static_cast<int>(t0.size()) == 2 * n + max + 2);
  }
}

TEST_CASE("validate_play: FORK and WAIT") {
  auto com = games::arena_of_type(fica::com_t(), 1);
  CHECK(games::validate_play(com, seq(com, {{"run", -1}, {"done", 0}})).ok);

  auto a = a1();
  auto good = seq(a, {{"run", -1}, {"run^1", 0}, {"run^2", 0}, {"done^1", 1}, {"done^2", 2}, {"done", 0}});
  CHECK(games::validate_play(a, good).ok);

  auto wait = seq(a, {{"run", -1}, {"run^1", 0}, {"done", 0}});
  auto r = games::validate_play(a, wait);
  CHECK_FALSE(r.ok);
  CHECK(r.index == 2);

  // answering an already answered question
  auto fork = seq(a, {{"run", -1}, {"run^1", 0}, {"done^1", 1}, {"done^1", 1}});
  CHECK_FALSE(games::validate_play(a, fork).ok);

  // pointer to a non-enabling move
  auto bad = seq(a, {{"run", -1}, {"run^1", 0}, {"run^2", 1}});
  CHECK_FALSE(games::validate_play(a, bad).ok);
}

TEST_CASE("trace_to_play: example play") {
  auto p = fica::parse_program("f:com->com, x:com |- f x");
  auto c = compiler::compile(p.ctx, p.term, 1);
  const auto& A = c.automaton;
  auto L = [&](const char* n) { return A.find_letter(n); };
  la::Trace w = {{L("run"), 0, -1},         {L("run^f"), 1, 0},      {L("run^f.1"), 2, 1},
                 {L("run^f.1"), 4, 1},      {L("run^(x,2)"), 3, 2},  {L("run^(x,2)"), 5, 4},
                 {L("done^x"), 3, -1}};
  CHECK(la::run_trace(A, w).status == la::RunStatus::Trace);
  auto play = games::trace_to_play(A, w);
  REQUIRE(play.size() == 7);
  std::vector<int> ptr;
  for (auto& m : play) ptr.push_back(m.pointer);
  CHECK(ptr == std::vector<int>{-1, 0, 1, 1, 0, 0, 4});
  CHECK(play[4].move.base == "run");
  CHECK(play[4].move.path == std::vector<std::string>{"x"});
  auto arena = games::arena_of_judgment(p.ctx, fica::com_t(), 1);
  CHECK(games::validate_play(arena, play).ok);
}

TEST_CASE("trace_to_play: epsilon letters vanish") {
  la::LeafyAutomaton a;
  a.add(0, true, {}, "run", {"0"});
  a.add(1, true, {"0"}, "eq", {"1", "0"});
  a.add(1, false, {"1", "0"}, "ea", {"2"});
  a.add(0, false, {"2"}, "done", {});
  la::Trace w = {{0, 0, -1}, {1, 1, 0}, {2, 1, -1}, {3, 0, -1}};
  REQUIRE(la::accepts(a, w));
  auto p = games::trace_to_play(a, w);
  REQUIRE(p.size() == 2);
  CHECK(games::move_str(p[0].move) == "run");
  CHECK(games::move_str(p[1].move) == "done");
  CHECK(p[1].pointer == 0);
}

TEST_CASE("trace_to_play: errors") {
  auto p = fica::parse_program("f:com->com, x:com |- f x");
  auto c = compiler::compile(p.ctx, p.term, 1);
  la::Trace w = {{c.automaton.find_letter("done"), 7, -1}};
  CHECK_THROWS_AS(games::trace_to_play(c.automaton, w), std::invalid_argument);
}

TEST_CASE("moves: printing and parsing") {
  for (const char* s : {"run", "run^f", "run^f.1", "run^(x,2)", "write(3)^(x.1,2)", "eq", "ea"})
    CHECK(games::move_str(games::parse_move(s)) == s);
  CHECK(games::parse_move("eq").eps == Eps::Question);
  CHECK(games::parse_move("run^(x,2)").rho == 2);
}

TEST_CASE("saturation closure") {
  auto a = a1();
  auto run = seq(a, {{"run", -1}});
  auto one = games::saturation_closure(a, {run}, 6);
  CHECK(one.size() == 1);

  auto p = seq(a, {{"run", -1}, {"run^1", 0}, {"run^2", 0}, {"done^1", 1}, {"done^2", 2}, {"done", 0}});
  auto plays = games::saturation_closure_plays(a, {p}, 6);
  bool swapped = false;
  for (auto& q : plays) {
    CHECK(games::validate_play(a, q).ok);
    if (q[1].move.path == std::vector<std::string>{"2"}) swapped = true;
  }
  CHECK(swapped);

  // an O-move may not move later past a P-move: run^1 (P) then done^1 (O)
  // never becomes done^1 before run^1
  for (auto& q : plays) {
    int r1 = -1, d1 = -1;
    for (int i = 0; i < static_cast<int>(q.size()); ++i) {
      if (games::move_str(q[i].move) == "run^1") r1 = i;
      if (games::move_str(q[i].move) == "done^1") d1 = i;
    }
    CHECK(r1 < d1);
  }
}

TEST_CASE("play JSON round trip") {
  auto a = a1();
  auto p = seq(a, {{"run", -1}, {"run^1", 0}, {"done^1", 1}, {"done", 0}});
  CHECK(games::play_from_json(games::play_to_json(p)) == p);
}

#include <doctest.h>

#include "leafy/compiler.hpp"
#include "leafy/corpus.hpp"
#include "leafy/la2fica.hpp"

using namespace leafy;

namespace {

la::LeafyAutomaton question_answer() {
  la::LeafyAutomaton a;
  a.add(0, true, {}, "q", {"0"});
  a.add(0, false, {"0"}, "i", {});
  return a;
}

}  // namespace

TEST_CASE("theta types") {
  CHECK(fica::type_str(la2fica::theta(0, 1)) == "com -> com -> exp");
  CHECK(fica::type_str(la2fica::theta(1, 0)) == "((com -> exp) -> com) -> exp");
}

TEST_CASE("k = 0 term") {
  auto g = la2fica::generate_term(question_answer());
  CHECK(g.max == 1);
  CHECK(fica::type_eq(g.type, la2fica::theta(0, 1)));
  CHECK(fica::type_eq(fica::typecheck({}, g.term, g.max), g.type));
  std::string s = fica::print(g.term);
  CHECK(s.find("newsem s") != std::string::npos);
  CHECK(s.find("newvar X0") != std::string::npos);
  // reparses to the same term
  CHECK(fica::print(fica::parse_term(s)) == s);
}

TEST_CASE("k = 0 term runs") {
  auto g = la2fica::generate_term(question_answer());
  auto applied = fica::mk_apps(g.term, {fica::mk_skip(), fica::mk_skip()});
  auto r = fica::may_terminate(fica::elaborate({}, applied, g.max), g.max);
  REQUIRE(r.verdict == fica::Termination::Terminates);
  REQUIRE(r.value);
  CHECK(*r.value == question_answer().find_letter("i"));
}

TEST_CASE("k = 1 term writes the new leaf state") {
  auto a = corpus::build_counter_la();
  auto g = la2fica::generate_term(a);
  CHECK(g.max == 3);
  CHECK(fica::type_eq(fica::typecheck({}, g.term, g.max), la2fica::theta(1, 3)));
  std::string s = fica::print(g.term);
  CHECK(s.find("X0 := 0") != std::string::npos);
  CHECK(s.find("X1 := 0") != std::string::npos);
  CHECK(s.find("while 1 do skip") != std::string::npos);
}

TEST_CASE("empty transition sets give div") {
  la::LeafyAutomaton a;
  a.add_letter("q", true);
  a.add_state(0, "0");
  auto g = la2fica::generate_term(a);
  CHECK(fica::type_eq(fica::typecheck({}, g.term, g.max), g.type));
  CHECK(fica::print(g.term).find("div") != std::string::npos);
}

TEST_CASE("word play encoding") {
  auto a = corpus::build_counter_la();
  int max = la2fica::code_bound(a);
  int start = a.find_letter("start"), end = a.find_letter("end");
  auto p = la2fica::word_play(a, {{start, 0, -1}, {end, 0, -1}}, max);
  REQUIRE(p.size() == 4);
  CHECK(games::move_str(p[0].move) == "q");
  CHECK(p[0].pointer == -1);
  CHECK(p[1].move.base == "run");
  CHECK(p[1].pointer == 0);
  CHECK(p[2].move.base == "done");
  CHECK(p[2].move.path == p[1].move.path);
  CHECK(p[2].pointer == 1);
  CHECK(p[3].move.base == std::to_string(end));
  CHECK(p[3].pointer == 0);
  auto arena = games::arena_of_type(la2fica::theta(a.k, max), max);
  CHECK(games::validate_play(arena, p).ok);
  CHECK(la2fica::word_play(a, {}, max).empty());
  CHECK(games::validate_play(arena, {}).ok);
}

TEST_CASE("word representation") {
  auto rep = la2fica::check_word_representation(corpus::build_counter_la(), 8);
  CHECK(rep.ok);
  CHECK(rep.traces > 10);
  auto fx = fica::parse_program("f:com->com, x:com |- f x");
  auto c = compiler::compile(fx.ctx, fx.term, 1);
  CHECK(la2fica::check_word_representation(c.automaton, 8).ok);
}

TEST_CASE("word plays are closed under saturation at small length") {
  la::LeafyAutomaton a;
  a.add(0, true, {}, "q", {"0"});
  a.add(0, true, {}, "q", {"1"});
  a.add(0, false, {"0"}, "i", {});
  a.add(0, false, {"1"}, "j", {});
  int max = la2fica::code_bound(a);
  auto arena = games::arena_of_type(la2fica::theta(0, max), max);
  std::vector<games::Play> plays;
  la::enumerate_traces(a, 4, false, [&](const la::Trace& w) {
    plays.push_back(la2fica::word_play(a, w, max));
    return true;
  });
  for (auto& p : games::saturation_closure_plays(arena, plays, 8))
    CHECK(games::validate_play(arena, p).ok);
}

#include <doctest.h>

#include <set>

#include "leafy/corpus.hpp"
#include "leafy/fica.hpp"

using namespace leafy;

namespace {

std::set<std::string> trace_set(const la::LeafyAutomaton& a, int len) {
  std::set<std::string> out;
  for (auto& w : la::accepted_traces(a, len, 10000)) out.insert(la::trace_str(a, w));
  return out;
}

}  // namespace

TEST_CASE("corpus terms typecheck") {
  int closed = 0;
  for (auto& t : corpus::terms()) {
    CAPTURE(t.name);
    auto p = fica::parse_program(t.source);
    CHECK_NOTHROW(fica::typecheck(p.ctx, p.term, t.max));
    CHECK(t.closed == p.ctx.empty());
    closed += t.closed;
  }
  CHECK(closed >= 20);
  CHECK(corpus::terms().back().name == "worked");
  CHECK(corpus::find_term("skip"));
  CHECK_FALSE(corpus::find_term("nope"));
}

TEST_CASE("halting run is accepted by A1 only") {
  auto m = corpus::halting_machine();
  auto [a1, a2] = corpus::build_halting_las(m);
  auto w = corpus::run_trace(m, a1, 50);
  REQUIRE(w);
  CHECK(la::trace_str(a1, *w) == "(start,0)(inc1,1)(dec1,1)(zero1,2)(zero'1,2)(end,0)");
  CHECK(la::accepts(a1, *w));
  CHECK_FALSE(la::accepts(a2, *w));
}

TEST_CASE("illegal zero test is accepted by both") {
  auto m = corpus::halting_machine();
  auto [a1, a2] = corpus::build_halting_las(m);
  auto L = [&](const char* n) { return a1.find_letter(n); };
  la::Trace bad{{L("start"), 0, -1}, {L("inc1"), 1, 0},   {L("zero1"), 2, 0},
                {L("dec1"), 1, -1},  {L("zero'1"), 2, -1}, {L("end"), 0, -1}};
  CHECK(la::accepts(a1, bad));
  CHECK(la::accepts(a2, bad));
}

TEST_CASE("A1 minus A2 is the halting run") {
  auto m = corpus::halting_machine();
  auto [a1, a2] = corpus::build_halting_las(m);
  auto s1 = trace_set(a1, 10), s2 = trace_set(a2, 10);
  std::set<std::string> diff;
  for (auto& s : s1)
    if (!s2.count(s)) diff.insert(s);
  CHECK(diff == std::set<std::string>{la::trace_str(a1, *corpus::run_trace(m, a1, 50))});
  for (auto& s : s2) CHECK(s1.count(s));
}

TEST_CASE("looping machine") {
  auto m = corpus::looping_machine();
  auto [a1, a2] = corpus::build_halting_las(m);
  CHECK_FALSE(corpus::run_trace(m, a1, 100));
  CHECK(trace_set(a1, 10) == trace_set(a2, 10));
  CHECK(la::accepted_traces(corpus::build_two_counter_2la(m), 12, 1).empty());
}

TEST_CASE("two-counter 2LA of the halting machine") {
  auto a = corpus::build_two_counter_2la(corpus::halting_machine());
  CHECK(a.k == 2);
  CHECK_FALSE(la::accepted_traces(a, 12, 1).empty());
}

TEST_CASE("machine validation") {
  auto m = corpus::halting_machine();
  m.step[m.final] = corpus::Step{};
  CHECK_THROWS(m.validate());
}

TEST_CASE("builders round trip through JSON") {
  auto m = corpus::halting_machine();
  auto [a1, a2] = corpus::build_halting_las(m);
  auto [l1, l2] = corpus::build_halting_las(m, true);
  for (auto& a : {corpus::build_counter_la(), a1, a2, l1, l2, corpus::build_two_counter_2la(m)})
    CHECK(la::structurally_equal(a, la::from_json(la::to_json(a))));
}

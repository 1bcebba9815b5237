#include <doctest.h>

#include <algorithm>
#include <set>

#include "leafy/compiler.hpp"
#include "leafy/corpus.hpp"
#include "leafy/lla.hpp"

using namespace leafy;

namespace {

compiler::CompiledAutomaton compile_src(const std::string& src, int max = 1) {
  auto p = fica::parse_program(src);
  return compiler::compile(p.ctx, p.term, max);
}

std::set<la::Transition> tuples(const la::LeafyAutomaton& a) {
  return {a.trans.begin(), a.trans.end()};
}

std::set<std::string> traces(const la::LeafyAutomaton& a, int len) {
  std::set<std::string> out;
  la::enumerate_traces(a, len, false, [&](const la::Trace& w) {
    out.insert(la::trace_str(a, w));
    return true;
  });
  return out;
}

}  // namespace

TEST_CASE("window_lo") {
  CHECK(lla::window_lo(0) == 0);
  CHECK(lla::window_lo(1) == 0);
  CHECK(lla::window_lo(2) == 0);
  CHECK(lla::window_lo(3) == 0);
  CHECK(lla::window_lo(4) == 2);
  CHECK(lla::window_lo(5) == 2);
  CHECK(lla::window_lo(6) == 4);
}

TEST_CASE("localize: compiled local terms") {
  auto* t = corpus::find_term("worked");
  auto c = compile_src(t->source, t->max);
  auto loc = lla::localize(c.automaton);
  CHECK(loc.exact);
  CHECK(tuples(lla::expand(loc.local)) == tuples(c.automaton));

  for (auto& term : corpus::terms()) {
    auto a = compile_src(term.source, term.max).automaton;
    auto l = lla::localize(a);
    auto e = lla::expand(l.local);
    if (l.exact) {
      CHECK_MESSAGE(tuples(e) == tuples(a), term.name);
      continue;
    }
    // the extra tuples read ancestors outside the window and are never enabled
    auto ta = tuples(a), te = tuples(e);
    CHECK_MESSAGE(std::includes(te.begin(), te.end(), ta.begin(), ta.end()), term.name);
    CHECK_MESSAGE(traces(e, 10) == traces(a, 10), term.name);
  }
}

TEST_CASE("localize: out-of-window tuples") {
  la::LeafyAutomaton a;
  a.add(0, true, {}, "a", {"0"});
  a.add(1, true, {"0"}, "b", {"0", "0"});
  a.add(2, true, {"0", "0"}, "c", {"0", "0", "0"});
  a.add(3, true, {"0", "0", "0"}, "d", {"0", "0", "0", "0"});
  a.add(4, true, {"0", "0", "0", "0"}, "e", {"0", "0", "0", "0", "0"});
  a.add_state(0, "1");
  // level 4 may not touch level 0 or 1
  a.add(4, true, {"0", "0", "0", "0"}, "f", {"1", "0", "0", "0", "0"});
  CHECK_THROWS_AS(lla::localize(a), lla::NotLocal);
  try {
    lla::localize(a);
  } catch (const lla::NotLocal& e) {
    CHECK(e.level == 4);
  }
}

TEST_CASE("localize: a window read that is not uniform below it") {
  la::LeafyAutomaton a;
  a.add(0, true, {}, "a", {"0"});
  a.add_state(0, "1");
  a.add(0, true, {}, "a", {"1"});
  a.add(1, true, {"0"}, "b", {"0", "0"});
  a.add(1, true, {"1"}, "b", {"1", "0"});
  a.add(2, true, {"0", "0"}, "c", {"0", "0", "0"});
  a.add(2, true, {"1", "0"}, "c", {"1", "0", "0"});
  a.add(3, true, {"0", "0", "0"}, "d", {"0", "0", "0", "0"});
  a.add(3, true, {"1", "0", "0"}, "d", {"1", "0", "0", "0"});
  a.add(4, true, {"0", "0", "0", "0"}, "e", {"0", "0", "0", "0", "0"});
  // the same move at level 4 exists only under root 0
  auto loc = lla::localize(a);
  CHECK_FALSE(loc.exact);
}

TEST_CASE("localize: two-counter 2-LA") {
  auto a = corpus::build_two_counter_2la(corpus::halting_machine());
  // the presentation exists; the root reopens a counter after each zero test,
  // so its children count grows with the run
  auto loc = lla::localize(a, {{0, 2}, {2, 0}});
  CHECK(tuples(lla::expand(loc.local)) == tuples(a));
  auto r = lla::verify_bound(a, 0, 2, 12);
  CHECK(r.verdict == lla::BoundVerdict::Refuted);
  CHECK(lla::verify_bound(a, 2, 0, 12).verdict != lla::BoundVerdict::Refuted);
}

TEST_CASE("verify_bound") {
  auto skip = compile_src("skip").automaton;
  auto v = lla::verify_bound(skip, 0, 1, 6);
  CHECK(v.verdict == lla::BoundVerdict::Verified);
  CHECK(v.complete);

  auto counter = corpus::build_counter_la();
  auto loc = lla::localize(counter, {{0, 1}});
  CHECK(loc.even_bounds.at(0) == 1);
  auto r = lla::verify_bound(counter, 0, 1, 6);
  REQUIRE(r.verdict == lla::BoundVerdict::Refuted);
  CHECK(r.witness.size() == 3);
  CHECK(la::run_trace(counter, r.witness).status == la::RunStatus::Trace);

  auto* t = corpus::find_term("worked");
  auto c = compile_src(t->source, t->max);
  auto p = fica::parse_program(t->source);
  auto b = compiler::branching_bound(p.ctx, p.term, t->max);
  CHECK(lla::verify_bound(c.automaton, 0, b.at(0), 6).verdict != lla::BoundVerdict::Refuted);
}

TEST_CASE("genealogy and independence") {
  auto a = corpus::build_counter_la();
  int start = a.find_letter("start"), inc = a.find_letter("inc");
  la::Trace w = {{start, 0, -1}, {inc, 1, 0}, {inc, 2, 0}};
  auto g = lla::genealogy(w);
  CHECK(g.level.at(0) == 0);
  CHECK(g.level.at(2) == 1);
  CHECK(g.domain(1) == std::set<int>{0, 1});
  CHECK_FALSE(lla::independent(g, w[1], w[0]));
  CHECK_FALSE(lla::independent(g, w[1], w[2]));  // siblings share the root

  // deep siblings two levels apart in distinct subtrees
  lla::Genealogy h;
  h.parent = {{0, -1}, {1, 0}, {2, 1}, {3, 2}, {4, 3}, {5, 4}, {6, 1}, {7, 6}, {8, 7}, {9, 8}};
  for (auto& [d, p] : h.parent) h.level[d] = p == -1 ? 0 : h.level[p] + 1;
  CHECK(h.domain(5) == std::set<int>{2, 3, 4, 5});
  CHECK(h.domain(9) == std::set<int>{6, 7, 8, 9});
  CHECK(lla::independent(h, {0, 5, 4}, {0, 9, 8}));
  CHECK_FALSE(lla::independent(h, {0, 5, 4}, {0, 4, 3}));
}

TEST_CASE("independent letters commute") {
  auto a = compile_src("f:(com->com)->com, g:com->com |- f (\\y:com. g y)").automaton;
  REQUIRE(a.k >= 4);
  std::size_t swaps = 0;
  la::enumerate_traces(a, 9, false, [&](const la::Trace& w) {
    auto g = lla::genealogy(w);
    auto base = la::run_trace(a, w);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (!lla::independent(g, w[i], w[i + 1])) continue;
      auto v = w;
      std::swap(v[i], v[i + 1]);
      auto r = la::run_trace(a, v);
      CHECK(r.status != la::RunStatus::Rejected);
      CHECK(r.final.canonical() == base.final.canonical());
      ++swaps;
    }
    return true;
  });
  CHECK(swaps > 0);
}

TEST_CASE("LLA JSON round trip") {
  auto* t = corpus::find_term("arg_write");
  auto p = fica::parse_program(t->source);
  auto c = compiler::compile(p.ctx, p.term, 1);
  auto loc = lla::localize(c.automaton, compiler::branching_bound(p.ctx, p.term, 1));
  loc.bounds_source = "computed";
  auto back = lla::from_json(lla::to_json(loc));
  CHECK(la::structurally_equal(back.base, loc.base));
  CHECK(la::structurally_equal(back.local, loc.local));
  CHECK(back.even_bounds == loc.even_bounds);
  CHECK(back.bounds_source == "computed");
  CHECK(back.exact == loc.exact);
}

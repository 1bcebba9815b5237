#include <doctest.h>

#include <set>

#include "leafy/compiler.hpp"
#include "leafy/corpus.hpp"
#include "leafy/games.hpp"
#include "leafy/lla.hpp"

using namespace leafy;

namespace {

compiler::CompiledAutomaton compile_src(const std::string& src, int max = 1) {
  auto p = fica::parse_program(src);
  return compiler::compile(p.ctx, p.term, max);
}

std::map<int, int> bound_of(const std::string& src, int max = 1) {
  auto p = fica::parse_program(src);
  return compiler::branching_bound(p.ctx, p.term, max);
}

// transitions as strings with letter names passed through `rename`
std::set<std::string> shape(const la::LeafyAutomaton& a,
                            const std::function<std::string(std::string)>& rename) {
  std::set<std::string> out;
  for (auto& t : a.trans) {
    std::string s = std::to_string(t.level) + (t.question ? "Q" : "A") + rename(a.alphabet[t.letter].name);
    for (int i = 0; i < static_cast<int>(t.src.size()); ++i) s += " " + a.states[t.lo + i][t.src[i]];
    s += " ->";
    for (int i = 0; i < static_cast<int>(t.dst.size()); ++i) s += " " + a.states[t.lo + i][t.dst[i]];
    out.insert(s);
  }
  return out;
}

}  // namespace

TEST_CASE("compile: skip and div") {
  auto s = compile_src("skip").automaton;
  CHECK(s.k == 0);
  CHECK(s.states[0].size() == 1);
  CHECK(s.trans.size() == 2);
  CHECK(la::trace_str(s, la::accepted_traces(s, 2).at(0)) == "(run,0)(done,0)");

  auto d = compile_src("div").automaton;
  CHECK(d.trans.size() == 1);
  CHECK(d.trans[0].question);
}

TEST_CASE("compile: application of a free function to a free command") {
  auto a = compile_src("f:com->com, x:com |- f x").automaton;
  CHECK(a.k == 3);
  CHECK(a.states[0].size() == 3);
  CHECK(a.states[1].size() == 1);
  CHECK(a.trans.size() == 8);
  std::set<std::string> letters;
  for (auto& l : a.alphabet) letters.insert(l.name);
  CHECK(letters == std::set<std::string>{"run", "done", "run^f", "done^f", "run^f.1", "done^f.1",
                                         "run^(x,2)", "done^x"});
}

TEST_CASE("compile: worked example shapes") {
  auto* t = corpus::find_term("worked");
  auto c = compile_src(t->source, t->max);
  const auto& a = c.automaton;
  REQUIRE(a.k == 3);
  std::vector<std::size_t> sizes;
  for (auto& l : a.states) sizes.push_back(l.size());
  CHECK(sizes == std::vector<std::size_t>{1344, 2, 9, 2});
  CHECK(a.trans.size() == 3683);
  // level 2 is a product of two three-element components
  std::set<std::string> left, right;
  for (auto& s : a.states[2]) {
    auto open = s.find('('), comma = s.find(',', open), close = s.rfind(')');
    left.insert(s.substr(open + 1, comma - open - 1));
    right.insert(s.substr(comma + 1, close - comma - 1));
  }
  CHECK(left.size() == 3);
  CHECK(right.size() == 3);
  CHECK(c.origins.size() == 4);
}

TEST_CASE("compile: lambda renames the bound identifier") {
  auto lam = compile_src("\\x:com. x").automaton;
  auto open = compile_src("x:com |- x").automaton;
  auto id = [](std::string s) { return s; };
  auto to_arg = [](std::string s) {
    auto p = s.find("^x");
    if (p != std::string::npos) s.replace(p, 2, "^1");
    p = s.find("(x,");
    if (p != std::string::npos) s.replace(p, 2, "(1");
    return s;
  };
  CHECK(shape(lam, id) == shape(open, to_arg));
}

TEST_CASE("compile: polarity of levels") {
  // P-moves add leaves at odd levels and remove them at even ones
  for (auto& t : corpus::terms()) {
    if (t.name == "worked") continue;
    auto a = compile_src(t.source, t.max).automaton;
    auto arena = games::arena_of_judgment(fica::parse_program(t.source).ctx,
                                          compile_src(t.source, t.max).type, t.max);
    for (auto& tr : a.trans) {
      auto m = games::parse_move(a.alphabet[tr.letter].name);
      if (m.eps != games::Eps::None) continue;
      int i = arena.find(m);
      REQUIRE_MESSAGE(i >= 0, t.name << " " << a.alphabet[tr.letter].name);
      bool p_move = arena.moves[i].owner == games::Owner::P;
      CHECK_MESSAGE(p_move == (tr.question == (tr.level % 2 == 1)), t.name);
    }
  }
}

TEST_CASE("compile: even-ready corpus automata") {
  for (auto& t : corpus::terms()) {
    if (t.name == "worked") continue;
    CHECK_MESSAGE(la::check_even_ready(compile_src(t.source, t.max).automaton, 8).ok, t.name);
  }
}

TEST_CASE("branching_bound") {
  CHECK(bound_of("skip") == std::map<int, int>{{0, 1}});
  CHECK(bound_of("skip || skip").at(0) == 2);
  auto app = bound_of("f:com->com |- f (skip || skip)");
  CHECK(app.at(0) == 1);
  CHECK(app.at(2) == 2);
  CHECK_THROWS_AS(bound_of("f:com->com |- newvar x:=0 in f(f(x:=1))"), fica::FicaError);
  CHECK_THROWS_AS(bound_of("while 1 do skip"), fica::FicaError);
}

TEST_CASE("branching bounds hold on the compiled automata") {
  for (const char* src : {"skip || skip", "f:com->com |- f (skip || skip)",
                          "f:com->com |- (f skip ; skip) || skip",
                          "f:com->com |- newvar x := 0 in (f(x := 1); if !x then skip else div)"}) {
    auto c = compile_src(src);
    for (auto [level, b] : bound_of(src)) {
      auto r = lla::verify_bound(c.automaton, level, b, 10);
      CHECK_MESSAGE(r.verdict != lla::BoundVerdict::Refuted, src << " level " << level);
    }
  }
}

TEST_CASE("cross_check_semantics") {
  auto s = fica::parse_program("skip");
  auto r = compiler::cross_check_semantics(s.ctx, s.term, 4);
  CHECK(r.plays == std::set<std::string>{"run done"});
  CHECK(r.agree);

  auto d = fica::parse_program("div");
  auto rd = compiler::cross_check_semantics(d.ctx, d.term, 6);
  CHECK(rd.plays.empty());
  CHECK(rd.agree);

  auto fx = fica::parse_program("f:com->com, x:com |- f x");
  auto rf = compiler::cross_check_semantics(fx.ctx, fx.term, 8);
  CHECK(rf.invalid == 0);
  CHECK(rf.plays.count("run run^f done^f done"));
}

TEST_CASE("origins sidecar lists every state") {
  auto c = compile_src("newvar x := 0 in (x := 1; if !x then skip else div)");
  for (std::size_t l = 0; l < c.automaton.states.size(); ++l)
    for (auto& s : c.automaton.states[l]) CHECK(c.origins.at(l).count(s));
  CHECK_FALSE(compiler::origins_to_json(c).empty());
}

// acceptance report: one PASS/FAIL line per criterion, nonzero exit on failure

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "leafy/compiler.hpp"
#include "leafy/corpus.hpp"
#include "leafy/emptiness.hpp"
#include "leafy/fica.hpp"
#include "leafy/games.hpp"
#include "leafy/la.hpp"
#include "leafy/la2fica.hpp"
#include "leafy/lla.hpp"
#include "leafy/vass.hpp"
#include "oracles.hpp"

using namespace leafy;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Compiled {
  std::string name;
  fica::Program prog;
  int max = 1;
  compiler::CompiledAutomaton c;
};

const std::vector<Compiled>& compiled_corpus() {
  static std::vector<Compiled> all = [] {
    std::vector<Compiled> v;
    for (auto& t : corpus::terms()) {
      auto p = fica::parse_program(t.source);
      auto c = compiler::compile(p.ctx, p.term, t.max);
      v.push_back({t.name, p, t.max, std::move(c)});
    }
    return v;
  }();
  return all;
}

std::set<std::string> traces_of(const la::LeafyAutomaton& a, int len, bool accepted) {
  std::set<std::string> out;
  la::enumerate_traces(a, len, accepted, [&](const la::Trace& w) {
    out.insert(la::trace_str(a, w));
    return true;
  });
  return out;
}

Outcome c1_base() {
  auto skip = compiler::compile({}, fica::parse_term("skip"), 1).automaton;
  auto div = compiler::compile({}, fica::parse_term("div"), 1).automaton;
  auto s = traces_of(skip, 2, true);
  auto d = traces_of(div, 8, true);
  Outcome o;
  o.ok = s == std::set<std::string>{"(run,0)(done,0)"} && d.empty();
  o.detail = "skip " + std::to_string(s.size()) + " accepted, div " + std::to_string(d.size());
  return o;
}

// A(w) for w = f (x:=1 || x:=13), written out state by state
la::LeafyAutomaton hand_written_w() {
  la::LeafyAutomaton a;
  const std::vector<std::string> u = {"0_1", "1_1", "2_1"}, v = {"0_13", "1_13", "2_13"};
  auto pair = [](const std::string& l, const std::string& r) { return "(" + l + "," + r + ")"; };
  a.add(0, true, {}, "run", {"0_w"});
  a.add(0, false, {"2_w"}, "done", {});
  a.add(1, true, {"0_w"}, "run^f", {"1_w", "0_w"});
  a.add(1, false, {"1_w", "0_w"}, "done^f", {"2_w"});
  a.add(2, true, {"1_w", "0_w"}, "run^f.1", {"1_w", "0_w", pair("0_1", "0_13")});
  a.add(2, false, {"1_w", "0_w", pair("2_1", "2_13")}, "done^f.1", {"1_w", "0_w"});
  for (auto& y : v) {
    a.add(3, true, {"1_w", "0_w", pair("0_1", y)}, "write(1)^(x,2)",
          {"1_w", "0_w", pair("1_1", y), "0_1"});
    a.add(3, false, {"1_w", "0_w", pair("1_1", y), "0_1"}, "ok^x", {"1_w", "0_w", pair("2_1", y)});
  }
  for (auto& x : u) {
    a.add(3, true, {"1_w", "0_w", pair(x, "0_13")}, "write(13)^(x,2)",
          {"1_w", "0_w", pair(x, "1_13"), "0_13"});
    a.add(3, false, {"1_w", "0_w", pair(x, "1_13"), "0_13"}, "ok^x",
          {"1_w", "0_w", pair(x, "2_13")});
  }
  return a;
}

std::vector<std::size_t> shape(const la::LeafyAutomaton& a) {
  std::vector<std::size_t> s;
  for (auto& l : a.states) s.push_back(l.size());
  return s;
}

Outcome c2_worked() {
  Outcome o;
  auto p = fica::parse_program("f:com->com, x:var |- f (x:=1 || x:=13)");
  auto w = compiler::compile(p.ctx, p.term, 13).automaton;
  auto h = hand_written_w();
  bool sub = shape(w) == shape(h) && w.trans.size() == h.trans.size() &&
             traces_of(w, 10, false) == traces_of(h, 10, false);
  auto* t = corpus::find_term("worked");
  auto wp = fica::parse_program(t->source);
  auto full = compiler::compile(wp.ctx, wp.term, t->max).automaton;
  std::set<std::string> left, right;
  for (auto& s : full.states.at(2)) {
    auto open = s.find('('), comma = s.find(',', open), close = s.rfind(')');
    left.insert(s.substr(open + 1, comma - open - 1));
    right.insert(s.substr(comma + 1, close - comma - 1));
  }
  bool product = full.states.at(2).size() == 9 && left.size() == 3 && right.size() == 3;
  o.ok = sub && product;
  std::ostringstream d;
  d << "w: " << w.trans.size() << " transitions, " << (sub ? "matches" : "differs from")
    << " the hand-written automaton; t: states";
  for (auto n : shape(full)) d << " " << n;
  d << ", " << full.trans.size() << " transitions";
  o.detail = d.str();
  return o;
}

Outcome c3_agreement() {
  Outcome o;
  int n = 0, agree = 0;
  std::string bad;
  for (auto& t : corpus::terms()) {
    if (!t.closed) continue;
    ++n;
    auto p = fica::parse_program(t.source);
    auto c = compiler::compile(p.ctx, p.term, t.max);
    auto l = lla::localize(c.automaton, compiler::branching_bound(p.ctx, p.term, t.max));
    emptiness::Options opt;
    opt.cap = 8;
    auto d = emptiness::decide_emptiness(l, opt);
    auto m = fica::may_terminate(fica::elaborate(p.ctx, p.term, t.max), t.max);
    bool same = d.verdict != emptiness::Verdict::Unknown &&
                (d.verdict == emptiness::Verdict::NonEmpty) ==
                    (m.verdict == fica::Termination::Terminates);
    if (same)
      ++agree;
    else
      bad += " " + t.name;
  }
  o.ok = n >= 20 && agree == n;
  o.detail = std::to_string(agree) + "/" + std::to_string(n) + " closed terms agree" +
             (bad.empty() ? "" : ", disagree:" + bad);
  return o;
}

Outcome c4_summaries() {
  Outcome o;
  int automata = 0, agree = 0, total = 0, unknown = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto a = oracle::tiny_lla(seed);
    ++automata;
    auto s2 = emptiness::compute_summaries(a, 2, nullptr);
    for (int level : {2, 0}) {
      const emptiness::SummarySet* upper = level == 2 ? nullptr : &s2;
      // the 2b+1 length bound yields a superset of the b+1 candidates
      for (auto& f : emptiness::enumerate_candidate_summaries(a, level, 3)) {
        ++total;
        auto r = emptiness::vass_reach(emptiness::build_test_vass(a, level, f, upper), 8);
        if (r.verdict == vass::Verdict::Unknown) {
          ++unknown;
          continue;
        }
        bool brute = !la::accepted_traces(emptiness::build_cut(a, level, f), 12, 1).empty();
        agree += (r.verdict == vass::Verdict::Reachable) == brute;
      }
    }
  }
  o.ok = agree == total && unknown == 0;
  o.detail = std::to_string(automata) + " automata, " + std::to_string(agree) + "/" +
             std::to_string(total) + " summaries agree, " + std::to_string(unknown) + " unknown";
  return o;
}

// checks one step c -> n on letter l, returns an empty string when fine
std::string step_violation(const la::LeafyAutomaton& a, const la::Configuration& c,
                           const la::Configuration& n, const la::TraceLetter& l) {
  bool q = a.alphabet[l.letter].question;
  int anchor = q ? l.parent : l.value;
  std::set<int> branch;
  if (anchor >= 0)
    for (int d : c.branch(anchor)) branch.insert(d);
  for (auto& [d, node] : c.tree) {
    if (branch.count(d)) continue;
    auto it = n.tree.find(d);
    if (it == n.tree.end() || it->second.state != node.state) return "off-branch node changed";
  }
  if (q) {
    if (c.seen.count(l.value) || !n.tree.count(l.value)) return "question on a used value";
    if (n.tree.size() != c.tree.size() + 1) return "question did not add one leaf";
  } else {
    if (!c.tree.count(l.value) || n.tree.count(l.value)) return "answer to no pending question";
    if (c.tree.at(l.value).children != 0) return "answer removed an inner node";
    if (n.tree.size() + 1 != c.tree.size()) return "answer did not remove one leaf";
  }
  return "";
}

Outcome c5_traces() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const auto& all = compiled_corpus();
  int traces = 0, violations = 0, swaps = 0;
  std::string first;
  auto fail = [&](const std::string& name, const std::string& why) {
    ++violations;
    if (first.empty()) first = name + ": " + why;
  };
  for (int i = 0; i < 10000; ++i) {
    const auto& e = all[i % all.size()];
    const auto& a = e.c.automaton;
    auto w = la::random_trace(a, 16, rng);
    ++traces;
    std::map<int, int> occ;
    std::set<int> asked;
    for (auto& l : w) {
      if (++occ[l.value] > 2) fail(e.name, "value used three times");
      if (a.alphabet[l.letter].question)
        asked.insert(l.value);
      else if (!asked.count(l.value))
        fail(e.name, "answer before question");
    }
    // replay along every nondeterministic branch, capped
    std::vector<la::Configuration> cur{la::Configuration{}};
    for (auto& l : w) {
      std::vector<la::Configuration> next;
      for (auto& c : cur)
        for (auto& n : la::step(a, c, l)) {
          auto v = step_violation(a, c, n, l);
          if (!v.empty()) fail(e.name, v);
          if (next.size() < 8) next.push_back(std::move(n));
        }
      if (next.empty()) {
        fail(e.name, "random trace does not replay");
        break;
      }
      cur = std::move(next);
    }
    auto base = la::run_trace(a, w);
    auto g = lla::genealogy(w);
    for (std::size_t j = 0; j + 1 < w.size(); ++j) {
      if (!lla::independent(g, w[j], w[j + 1])) continue;
      auto v = w;
      std::swap(v[j], v[j + 1]);
      auto r = la::run_trace(a, v);
      ++swaps;
      if (r.status == la::RunStatus::Rejected || r.final.canonical() != base.final.canonical())
        fail(e.name, "independent swap changed the run");
    }
  }
  o.ok = violations == 0;
  o.detail = std::to_string(traces) + " traces, " + std::to_string(swaps) + " swaps, " +
             std::to_string(violations) + " violations" + (first.empty() ? "" : " (" + first + ")");
  return o;
}

Outcome c6_even_ready() {
  Outcome o;
  int n = 0, ok = 0, partial = 0;
  std::string bad;
  for (auto& e : compiled_corpus()) {
    ++n;
    auto r = la::check_even_ready(e.c.automaton, 10);
    if (r.ok) ++ok;
    else bad += " " + e.name;
    if (!r.complete) ++partial;
  }
  o.ok = ok == n;
  o.detail = std::to_string(ok) + "/" + std::to_string(n) + " automata even-ready to length 10" +
             (partial ? ", " + std::to_string(partial) + " searches hit the configuration limit"
                      : "") +
             (bad.empty() ? "" : ", counterexamples:" + bad);
  return o;
}

Outcome c7_plays() {
  Outcome o;
  std::size_t checked = 0, failures = 0;
  std::string first;
  for (auto& e : compiled_corpus()) {
    auto arena = games::arena_of_judgment(e.prog.ctx, e.c.type, e.max);
    int len = e.c.automaton.k >= 4 ? 12 : 14;
    la::enumerate_traces(e.c.automaton, len, true, [&](const la::Trace& w) {
      ++checked;
      std::string why;
      try {
        auto r = games::validate_play(arena, games::trace_to_play(e.c.automaton, w));
        if (!r.ok) why = r.reason;
      } catch (const std::exception& ex) {
        why = ex.what();
      }
      if (!why.empty()) {
        ++failures;
        if (first.empty()) first = e.name + ": " + why;
      }
      return checked < 2000000;
    });
  }
  o.ok = failures == 0 && checked > 0;
  o.detail = std::to_string(checked) + " accepted traces decoded, " + std::to_string(failures) +
             " invalid" + (first.empty() ? "" : " (" + first + ")");
  return o;
}

Outcome c8_machines() {
  Outcome o;
  auto h = corpus::halting_machine();
  auto [a1, a2] = corpus::build_halting_las(h);
  auto run = corpus::run_trace(h, a1, 100);
  bool halting = run && la::accepts(a1, *run) && !la::accepts(a2, *run);
  auto L = [&](const char* n) { return a1.find_letter(n); };
  la::Trace illegal{{L("start"), 0, -1}, {L("inc1"), 1, 0},   {L("zero1"), 2, 0},
                    {L("dec1"), 1, -1},  {L("zero'1"), 2, -1}, {L("end"), 0, -1}};
  bool zero = la::accepts(a1, illegal) && la::accepts(a2, illegal);
  auto loop = corpus::looping_machine();
  auto [b1, b2] = corpus::build_halting_las(loop);
  bool looping = !corpus::run_trace(loop, b1, 100) &&
                 traces_of(b1, 10, true) == traces_of(b2, 10, true);
  o.ok = halting && zero && looping;
  o.detail = std::string("halting run ") + (halting ? "A1 only" : "wrong") + ", illegal zero test " +
             (zero ? "in both" : "wrong") + ", looping machine " +
             (looping ? "A1 = A2 to length 10" : "wrong");
  return o;
}

Outcome c9_la2fica() {
  Outcome o;
  std::vector<std::pair<std::string, la::LeafyAutomaton>> cases = {
      {"counter", corpus::build_counter_la()}};
  for (const char* name : {"skip", "app_var"})
    for (auto& e : compiled_corpus())
      if (e.name == name) cases.push_back({name, e.c.automaton});
  int ok = 0;
  std::string bad;
  for (auto& [name, a] : cases) {
    auto g = la2fica::generate_term(a);
    bool typed = false;
    try {
      typed = fica::type_eq(fica::typecheck({}, g.term, g.max), la2fica::theta(a.k, g.max));
    } catch (const fica::FicaError&) {
    }
    auto rep = la2fica::check_word_representation(a, 8);
    if (typed && rep.ok)
      ++ok;
    else
      bad += " " + name;
  }
  o.ok = ok == static_cast<int>(cases.size());
  o.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) +
             " automata typecheck and represent their words" + (bad.empty() ? "" : ", failed:" + bad);
  return o;
}

Outcome c10_vass() {
  Outcome o;
  std::mt19937_64 rng(7);
  int decided = 0, agree = 0, unknown = 0;
  for (int i = 0; i < 100; ++i) {
    auto v = oracle::random_vass(rng, 4, 2, 6);
    vass::Query q;
    q.source = 0;
    q.targets = {3};
    int cap = 4;
    auto r = vass::reach(v, q, cap);
    if (r.verdict == vass::Verdict::Unknown) {
      ++unknown;
      continue;
    }
    ++decided;
    if (r.verdict == vass::Verdict::Reachable)
      agree += vass::replay(v, q, r.witness) && oracle::brute_reach(v, q, cap).reachable;
    else
      agree += r.closed && !r.cap_hit && !oracle::brute_reach(v, q, 3 * cap).reachable;
  }
  o.ok = decided > 0 && agree == decided;
  o.detail = std::to_string(agree) + "/" + std::to_string(decided) + " decided instances agree, " +
             std::to_string(unknown) + " unknown";
  return o;
}

struct Criterion {
  const char* name;
  double limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> all = {
      {"base semantics", 1, c1_base},
      {"worked example fidelity", 5, c2_worked},
      {"interpreter/automaton agreement", 120, c3_agreement},
      {"summary oracle equivalence", 0, c4_summaries},
      {"trace discipline", 0, c5_traces},
      {"even-readiness", 0, c6_even_ready},
      {"play validity", 0, c7_plays},
      {"counter-machine encodings", 0, c8_machines},
      {"la2fica", 0, c9_la2fica},
      {"VASS soundness", 0, c10_vass},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    bool slow = all[i].limit > 0 && secs >= all[i].limit;
    bool pass = o.ok && !slow;
    failed += !pass;
    std::printf("%s %2zu %s: %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", i + 1, all[i].name,
                o.detail.c_str(), secs, slow ? ", over the time limit" : "");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

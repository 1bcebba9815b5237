#include "leafy/corpus.hpp"

#include <stdexcept>

namespace leafy::corpus {

using la::LeafyAutomaton;

const std::vector<CorpusTerm>& terms() {
  static const std::vector<CorpusTerm> all = {
      {"skip", "skip"},
      {"div", "div"},
      {"seq_skip", "skip; skip"},
      {"par_skip", "skip || skip"},
      {"seq_div", "skip; div"},
      {"par_div", "div || skip"},
      {"if_true", "if 1 then skip else div"},
      {"if_false", "if 0 then skip else div"},
      {"op_eq", "if op eq0 0 then skip else div"},
      {"op_neq", "if op neq0 0 then skip else div"},
      {"assign", "newvar x := 0 in x := 1"},
      {"read_after_write", "newvar x := 0 in (x := 1; if !x then skip else div)"},
      {"read_after_write_div", "newvar x := 0 in (x := 1; if !x then div else skip)"},
      {"race", "newvar x := 0 in (x := 1 || if !x then skip else div)"},
      {"race_last_write", "newvar x := 0 in ((x := 1 || x := 0); if !x then skip else div)"},
      {"init_one", "newvar x := 1 in if !x then skip else div"},
      {"init_zero", "newvar x := 0 in if !x then div else skip"},
      {"copy", "newvar x := 0 in newvar y := 0 in (x := 1; y := !x; if !y then skip else div)"},
      {"copy_div", "newvar x := 0 in newvar y := 0 in (y := !x; if !y then skip else div)"},
      {"both_set",
       "newvar x := 0 in newvar y := 0 in ((x := 1 || y := 1); if !x then (if !y then skip else div) else div)"},
      {"sem_pair", "newsem s := 0 in (grab s; release s)"},
      {"sem_twice", "newsem s := 0 in (grab s; grab s)"},
      {"sem_handoff", "newsem s := 0 in (grab s || (grab s; release s))"},
      {"sem_guard",
       "newsem s := 0 in newvar x := 0 in ((grab s; x := 1; release s) || (grab s; (if !x then skip else div); release s))"},
      {"beta_com", "(\\y:com. y; y) skip"},
      {"beta_exp_div", "(\\c:exp. if c then skip else div) 0"},
      {"max2", "newvar x := 0 in (x := 2; if op eq2 (!x) then skip else div)", 2},
      {"app_skip", "f:com->com |- f skip", 1, false},
      {"app_var", "f:com->com, x:com |- f x", 1, false},
      {"arg_write", "f:com->com |- newvar x := 0 in (f(x := 1); if !x then skip else div)", 1,
       false},
      {"exp_arg", "f:exp->com |- f 1", 1, false},
      {"nested_arg", "f:(com->com)->com, g:com->com |- f (\\y:com. g y)", 1, false},
      {"worked",
       "f:com->com |- newvar x := 0 in (f(x := 1 || x := 13) || if op eq13 (!x) then skip else div)",
       13, false},
  };
  return all;
}

const CorpusTerm* find_term(const std::string& name) {
  for (auto& t : terms())
    if (t.name == name) return &t;
  return nullptr;
}

LeafyAutomaton build_counter_la() {
  LeafyAutomaton a;
  a.add(0, true, {}, "start", {"0"});
  a.add(1, true, {"0"}, "inc", {"0", "0"});
  a.add(1, false, {"0", "0"}, "dec", {"0"});
  a.add(0, false, {"0"}, "end", {});
  return a;
}

void TwoCounterMachine::validate() const {
  int n = static_cast<int>(states.size());
  if (initial < 0 || initial >= n || final < 0 || final >= n)
    throw std::invalid_argument("machine states out of range");
  if (static_cast<int>(step.size()) != n) throw std::invalid_argument("step function size");
  for (int q = 0; q < n; ++q) {
    if ((q == final) == step[q].has_value())
      throw std::invalid_argument("step must be defined exactly off the final state");
    if (!step[q]) continue;
    const Step& s = *step[q];
    if (s.counter != 1 && s.counter != 2) throw std::invalid_argument("counter must be 1 or 2");
    if (s.next < 0 || s.next >= n || (s.kind == Step::JzDec && (s.nonzero < 0 || s.nonzero >= n)))
      throw std::invalid_argument("step target out of range");
  }
}

TwoCounterMachine halting_machine() {
  TwoCounterMachine m;
  m.states = {"q0", "q1", "q2", "q3", "qF"};
  m.initial = 0;
  m.final = 4;
  m.step = {Step{Step::Inc, 1, 1, 0}, Step{Step::JzDec, 1, 2, 3}, Step{Step::JzDec, 1, 4, 4},
            Step{Step::JzDec, 1, 4, 3}, std::nullopt};
  return m;
}

TwoCounterMachine looping_machine() {
  TwoCounterMachine m;
  m.states = {"q0", "q1", "q2", "qF"};
  m.initial = 0;
  m.final = 3;
  m.step = {Step{Step::Inc, 1, 1, 0}, Step{Step::JzDec, 1, 2, 0}, Step{Step::JzDec, 1, 3, 3},
            std::nullopt};
  return m;
}

namespace {

const char* const kMarks[] = {"o", "*", "1", "2"};

std::string root(const TwoCounterMachine& m, int q, const std::string& mark) {
  return "[" + m.states[q] + "," + mark + "]";
}

std::string ci(int i) { return std::to_string(i); }

LeafyAutomaton halting_shell(const TwoCounterMachine& m) {
  LeafyAutomaton a;
  for (auto l : {"start", "inc1", "inc2", "zero1", "zero2"}) a.add_letter(l, true);
  for (auto l : {"end", "dec1", "dec2", "zero'1", "zero'2"}) a.add_letter(l, false);
  for (std::size_t q = 0; q < m.states.size(); ++q)
    for (auto x : kMarks) a.add_state(0, root(m, static_cast<int>(q), x));
  for (int i = 1; i <= 2; ++i) {
    a.add_state(1, ci(i));
    a.add_state(1, "0_" + ci(i));
    a.add_state(1, ci(i) + "*");
  }
  return a;
}

}  // namespace

std::pair<LeafyAutomaton, LeafyAutomaton> build_halting_las(const TwoCounterMachine& m,
                                                           bool literal) {
  m.validate();
  LeafyAutomaton a1 = halting_shell(m), a2 = halting_shell(m);
  int n = static_cast<int>(m.states.size());

  a1.add(0, true, {}, "start", {root(m, m.initial, "o")});
  a1.add(0, false, {root(m, m.final, "o")}, "end", {});
  for (int q = 0; q < n; ++q) {
    for (int i = 1; i <= 2; ++i)
      a1.add(1, false, {root(m, q, "o"), "0_" + ci(i)}, "zero'" + ci(i), {root(m, q, "o")});
    if (!m.step[q]) continue;
    const Step& s = *m.step[q];
    std::string i = ci(s.counter);
    if (s.kind == Step::Inc) {
      a1.add(1, true, {root(m, q, "o")}, "inc" + i, {root(m, s.next, "o"), i});
    } else {
      a1.add(1, false, {root(m, q, "o"), i}, "dec" + i, {root(m, s.nonzero, "o")});
      a1.add(1, true, {root(m, q, "o")}, "zero" + i, {root(m, s.next, "o"), "0_" + i});
    }
  }

  a2.add(0, true, {}, "start", {root(m, m.initial, "*")});
  a2.add(0, false, {root(m, m.final, "o")}, "end", {});
  for (int q = 0; q < n; ++q) {
    for (int i = 1; i <= 2; ++i)
      for (auto x : kMarks)
        a2.add(1, false, {root(m, q, x), "0_" + ci(i)}, "zero'" + ci(i), {root(m, q, x)});
    if (!m.step[q]) continue;
    const Step& s = *m.step[q];
    std::string i = ci(s.counter);
    if (s.kind == Step::Inc) {
      for (auto x : kMarks) a2.add(1, true, {root(m, q, x)}, "inc" + i, {root(m, s.next, x), i});
      a2.add(1, true, {root(m, q, "*")}, "inc" + i,
             {root(m, literal ? q : s.next, i), i + "*"});
    } else {
      for (auto x : kMarks) {
        a2.add(1, true, {root(m, q, x)}, "zero" + i, {root(m, s.next, x), "0_" + i});
        a2.add(1, false, {root(m, q, x), i}, "dec" + i, {root(m, s.nonzero, x)});
      }
      a2.add(1, true, {root(m, q, i)}, "zero" + i, {root(m, s.next, "o"), "0_" + i});
      a2.add(1, false, {root(m, q, "o"), i + "*"}, "dec" + i, {root(m, s.nonzero, "o")});
    }
  }
  return {a1, a2};
}

std::optional<la::Trace> run_trace(const TwoCounterMachine& m, const LeafyAutomaton& a,
                                   int max_steps) {
  m.validate();
  auto letter = [&](const std::string& name) {
    int l = a.find_letter(name);
    if (l < 0) throw std::invalid_argument("automaton lacks letter " + name);
    return l;
  };
  la::Trace w{{letter("start"), 0, -1}};
  std::vector<int> pending[3];
  int next = 1, q = m.initial;
  for (int steps = 0; steps <= max_steps; ++steps) {
    if (q == m.final) {
      if (!pending[1].empty() || !pending[2].empty()) return std::nullopt;
      w.push_back({letter("end"), 0, -1});
      return w;
    }
    const Step& s = *m.step[q];
    std::string i = ci(s.counter);
    auto& stack = pending[s.counter];
    if (s.kind == Step::Inc) {
      w.push_back({letter("inc" + i), next, 0});
      stack.push_back(next++);
      q = s.next;
    } else if (stack.empty()) {
      w.push_back({letter("zero" + i), next, 0});
      w.push_back({letter("zero'" + i), next++, -1});
      q = s.next;
    } else {
      w.push_back({letter("dec" + i), stack.back(), -1});
      stack.pop_back();
      q = s.nonzero;
    }
  }
  return std::nullopt;
}

LeafyAutomaton build_two_counter_2la(const TwoCounterMachine& m) {
  m.validate();
  LeafyAutomaton a;
  const std::string c[] = {"", "c1", "c2"};
  const std::string& q0 = m.states[m.initial];
  const std::string& qf = m.states[m.final];
  a.add(0, true, {}, "start", {"init"});
  a.add(1, true, {"init"}, "open1", {"init1", c[1]});
  a.add(1, true, {"init1"}, "open2", {q0, c[2]});
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    if (!m.step[q]) continue;
    const Step& s = *m.step[q];
    const std::string& here = m.states[q];
    std::string i = ci(s.counter);
    const std::string& ctr = c[s.counter];
    if (s.kind == Step::Inc) {
      a.add(2, true, {here, ctr}, "inc" + i, {m.states[s.next], ctr, "*"});
    } else {
      a.add(2, false, {here, ctr, "*"}, "dec" + i, {m.states[s.nonzero], ctr});
      std::string z = "z" + i + ":" + m.states[s.next];
      a.add(1, false, {here, ctr}, "zero" + i, {z});
      a.add(1, true, {z}, "reopen" + i, {m.states[s.next], ctr});
    }
  }
  a.add(1, false, {qf, c[1]}, "close1", {"halt1"});
  a.add(1, false, {"halt1", c[2]}, "close2", {"halt2"});
  a.add(0, false, {"halt2"}, "end", {});
  return a;
}

}  // namespace leafy::corpus

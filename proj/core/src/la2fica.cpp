#include "leafy/la2fica.hpp"

#include <algorithm>
#include <map>

namespace leafy::la2fica {

using fica::TermP;
using fica::TypeP;

int code_bound(const la::LeafyAutomaton& a) {
  std::size_t m = a.alphabet.size();
  for (auto& q : a.states) m = std::max(m, q.size());
  return std::max<int>(0, static_cast<int>(m) - 1);
}

TypeP theta(int k, int max) {
  auto power = [&](const TypeP& arg) {
    TypeP r = fica::exp_t();
    for (int i = 0; i <= max; ++i) r = fica::arrow_t(arg, r);
    return r;
  };
  TypeP t = power(fica::com_t());
  for (int i = 1; i <= k; ++i) t = power(fica::arrow_t(t, fica::com_t()));
  return t;
}

namespace {

class Gen {
 public:
  Gen(const la::LeafyAutomaton& a, int max) : a_(a), max_(max), k_(a.k) {}

  TermP top() {
    TermP body = level(0);
    TermP inner = fica::mk_newsem("s", 0, body);
    return lambdas(0, inner);
  }

 private:
  const la::LeafyAutomaton& a_;
  int max_;
  int k_;
  int fresh_ = 0;

  static std::string f(int i, int t) { return "f" + std::to_string(i) + "_" + std::to_string(t); }
  static std::string x(int i) { return "X" + std::to_string(i); }

  static TermP omega() { return fica::mk_while(fica::mk_const(1), fica::mk_skip()); }

  static TermP seq(std::vector<TermP> parts) {
    TermP t = parts.back();
    for (int i = static_cast<int>(parts.size()) - 2; i >= 0; --i) t = fica::mk_seq(parts[i], t);
    return t;
  }

  TermP choice(const std::vector<TermP>& alts, const TypeP& ty) {
    if (alts.empty()) return fica::mk_div(ty);
    TermP acc = alts.back();
    for (int i = static_cast<int>(alts.size()) - 2; i >= 0; --i) {
      std::string c = "c" + std::to_string(fresh_++);
      auto id = fica::mk_ident(c);
      TermP coin = fica::mk_par(fica::mk_assign(id, fica::mk_const(0)),
                                fica::mk_assign(id, fica::mk_const(1)));
      acc = fica::mk_newvar(c, 0, fica::mk_seq(coin, fica::mk_if(fica::mk_deref(id), alts[i], acc)));
    }
    return acc;
  }

  // checks X(lo..) against src, then writes dst into X(lo..); diverges on a mismatch
  static TermP update(int lo, const std::vector<int>& src, const std::vector<int>& dst) {
    std::vector<TermP> writes;
    for (std::size_t j = 0; j < dst.size(); ++j)
      writes.push_back(
          fica::mk_assign(fica::mk_ident(x(lo + static_cast<int>(j))), fica::mk_const(dst[j])));
    TermP t = writes.empty() ? fica::mk_skip() : seq(writes);
    for (int j = static_cast<int>(src.size()) - 1; j >= 0; --j)
      t = fica::mk_if(fica::mk_op("eq" + std::to_string(src[j]), fica::mk_deref(fica::mk_ident(x(lo + j)))),
                      t, omega());
    return t;
  }

  static TermP locked(TermP t) {
    auto s = fica::mk_ident("s");
    return seq({fica::mk_grab(s), std::move(t), fica::mk_release(s)});
  }

  TermP lambdas(int i, TermP body) {
    TypeP ft = i < k_ ? fica::arrow_t(theta(k_ - i - 1, max_), fica::com_t()) : fica::com_t();
    for (int t = max_; t >= 0; --t) body = fica::mk_lam(f(i, t), ft, body);
    return body;
  }

  // body of M_i under its binders
  TermP level(int i) {
    TermP next = i < k_ ? lambdas(i + 1, level(i + 1)) : nullptr;
    std::vector<TermP> answers;
    for (auto& t : a_.trans)
      if (t.level == i && !t.question)
        answers.push_back(seq({locked(update(t.lo, t.src, t.dst)), fica::mk_const(t.letter)}));
    std::vector<TermP> alts;
    for (auto& t : a_.trans) {
      if (t.level != i || !t.question) continue;
      TermP call = fica::mk_ident(f(i, t.letter));
      if (next) call = fica::mk_app(call, next);
      alts.push_back(
          seq({locked(update(t.lo, t.src, t.dst)), call, choice(answers, fica::exp_t())}));
    }
    return fica::mk_newvar(x(i), 0, choice(alts, fica::exp_t()));
  }
};

}  // namespace

GeneratedTerm generate_term(const la::LeafyAutomaton& a) {
  GeneratedTerm g;
  g.max = code_bound(a);
  g.type = theta(a.k, g.max);
  g.source = a;
  g.term = Gen(a, g.max).top();
  return g;
}

games::Play word_play(const la::LeafyAutomaton& a, const la::Trace& w, int max) {
  games::Play p;
  std::map<int, std::pair<int, int>> seg;  // value -> positions of its q and run
  int n = max + 1;
  for (auto& l : w) {
    if (a.alphabet.at(l.letter).question) {
      std::vector<std::string> path;
      int ptr = -1;
      if (l.parent != -1) {
        ptr = seg.at(l.parent).second;
        path = p[ptr].move.path;
        path.push_back("1");
      }
      int q = static_cast<int>(p.size());
      p.push_back({games::AMove{"q", path, 0, games::Eps::None}, ptr});
      path.push_back(std::to_string(n - l.letter));
      p.push_back({games::AMove{"run", path, 0, games::Eps::None}, q});
      seg[l.value] = {q, q + 1};
    } else {
      auto [q, run] = seg.at(l.value);
      p.push_back({games::AMove{"done", p[run].move.path, 0, games::Eps::None}, run});
      p.push_back({games::AMove{std::to_string(l.letter), p[q].move.path, 0, games::Eps::None}, q});
    }
  }
  return p;
}

WordReport check_word_representation(const la::LeafyAutomaton& a, int max_len) {
  WordReport rep;
  int max = code_bound(a);
  games::Arena arena = games::arena_of_type(theta(a.k, max), max);
  la::enumerate_traces(a, max_len, false, [&](const la::Trace& w) {
    ++rep.traces;
    games::Play p;
    try {
      p = word_play(a, w, max);
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.reason = e.what();
    }
    if (rep.ok) {
      auto chk = games::validate_play(arena, p);
      if (!chk.ok) {
        rep.ok = false;
        rep.reason = chk.reason;
      }
    }
    if (!rep.ok) rep.counterexample = w;
    return rep.ok;
  });
  return rep;
}

}  // namespace leafy::la2fica

#include "leafy/compiler.hpp"

#include <cctype>
#include <json.hpp>
#include <sstream>
#include <unordered_map>

#include "leafy/games.hpp"

namespace leafy::compiler {

using fica::Kind;
using fica::TermP;
using fica::TypeKind;
using fica::TypeP;
using games::AMove;
using games::Eps;
using la::LeafyAutomaton;
using la::Transition;
using Names = std::vector<std::string>;

namespace {

bool is_number(const std::string& s) {
  return !s.empty() && std::isdigit(static_cast<unsigned char>(s[0]));
}

std::string pair(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }
std::string locked(const std::string& a, int n) {
  return "(" + a + ",lock," + std::to_string(n) + ")";
}

struct Part {
  LeafyAutomaton a;
  std::vector<std::map<std::string, std::string>> origins;
  std::vector<AMove> moves;

  void index() {
    moves.clear();
    for (auto& l : a.alphabet) moves.push_back(games::parse_move(l.name));
    a.rebuild_index();
  }
  int levels() const { return static_cast<int>(a.states.size()); }
  const std::string& st(int level, int id) const { return a.states[level][id]; }
  const std::string& letter(const Transition& t) const { return a.alphabet[t.letter].name; }
  std::string origin(int level, const std::string& s) const {
    if (level < static_cast<int>(origins.size())) {
      auto it = origins[level].find(s);
      if (it != origins[level].end()) return it->second;
    }
    return "";
  }
  static bool entry(const Transition& t) { return t.level == 0 && t.question; }
  static bool exit(const Transition& t) { return t.level == 0 && !t.question; }
  // transitions whose whole source is the root state q: level-1 questions and exits
  std::vector<int> from(const std::string& q) const {
    std::vector<int> out;
    int id = a.find_state(0, q);
    if (id < 0) return out;
    for (int i : a.matching(1, true, 0, {id})) out.push_back(i);
    for (int i : a.matching(0, false, 0, {id})) out.push_back(i);
    return out;
  }
  std::vector<const Transition*> entries(const std::string& letter_name) const {
    std::vector<const Transition*> out;
    for (auto& t : a.trans)
      if (entry(t) && letter(t) == letter_name) out.push_back(&t);
    return out;
  }
  bool has_exit(const std::string& q, const std::string& letter_name) const {
    for (int i : from(q))
      if (exit(a.trans[i]) && letter(a.trans[i]) == letter_name) return true;
    return false;
  }
};

class Builder {
 public:
  explicit Builder(std::string here) : here_(std::move(here)) {}

  void state(int level, const std::string& name, const std::string& origin) {
    a.add_state(level, name);
    if (static_cast<int>(origins.size()) <= level) origins.resize(level + 1);
    origins[level].emplace(name, origin.empty() ? here_ : origin);
  }
  void state(int level, const std::string& name) { state(level, name, here_); }

  void add(const Names& src, const std::string& letter, bool question, const Names& dst) {
    int level = static_cast<int>(question ? dst.size() : src.size()) - 1;
    for (std::size_t i = 0; i < src.size(); ++i) state(static_cast<int>(i), src[i]);
    for (std::size_t i = 0; i < dst.size(); ++i) state(static_cast<int>(i), dst[i]);
    a.add(level, question, src, letter, dst);
  }

  // registers the states of p at levels >= from under the given prefix, shifted
  void inherit(const Part& p, const std::string& tag, int from = 0, int shift = 0) {
    for (int l = from; l < p.levels(); ++l)
      for (auto& s : p.a.states[l]) state(l + shift, tag + s, p.origin(l, s));
  }

  // child transition with every component tagged
  void copy(const Part& p, const Transition& t, const std::string& letter, const std::string& tag) {
    Names s, d;
    for (std::size_t i = 0; i < t.src.size(); ++i) s.push_back(tag + p.st(i, t.src[i]));
    for (std::size_t i = 0; i < t.dst.size(); ++i) d.push_back(tag + p.st(i, t.dst[i]));
    add(s, letter, t.question, d);
  }

  // child transition with the root components replaced
  void copy(const Part& p, const Transition& t, const std::string& letter, const std::string& tag,
            const std::string& src0, const std::string& dst0) {
    Names s, d;
    for (std::size_t i = 0; i < t.src.size(); ++i) s.push_back(i ? tag + p.st(i, t.src[i]) : src0);
    for (std::size_t i = 0; i < t.dst.size(); ++i) d.push_back(i ? tag + p.st(i, t.dst[i]) : dst0);
    add(s, letter, t.question, d);
  }

  // continue from a root state with the step t of p, taking t's targets into this automaton
  void chain(const Names& src, const Part& p, const Transition& t, const std::string& tag) {
    Names d;
    for (std::size_t i = 0; i < t.dst.size(); ++i) d.push_back(tag + p.st(i, t.dst[i]));
    add(src, p.letter(t), t.question, d);
  }

  Part finish() {
    Part p;
    p.a = std::move(a);
    p.origins = std::move(origins);
    return p;
  }

  LeafyAutomaton a;
  std::vector<std::map<std::string, std::string>> origins;

 private:
  std::string here_;
};

std::string excerpt(const TermP& t) {
  std::string s = fica::print(t);
  if (s.size() > 80) s = s.substr(0, 77) + "...";
  return s;
}

TypeKind base_kind(const TypeP& t) { return fica::type_result(t)->kind; }

class Compiler {
 public:
  Compiler(int max, const fica::OpRegistry& ops, bool trim) : max_(max), ops_(ops), trim_(trim) {}

  Part run(const fica::Context& ctx, const TermP& t) {
    switch (t->kind) {
      case Kind::Skip: return skip(t);
      case Kind::Div: return div(t);
      case Kind::Const: return constant(t);
      case Kind::Op: return op(ctx, t);
      case Kind::Par: return par(ctx, t);
      case Kind::Seq: return seq(ctx, t);
      case Kind::If: return cond(ctx, t);
      case Kind::While: return loop(ctx, t);
      case Kind::Deref: return deref(ctx, t);
      case Kind::Assign: return assign(ctx, t);
      case Kind::Grab:
      case Kind::Release: return sem_op(ctx, t);
      case Kind::NewVar:
      case Kind::NewSem: return local(ctx, t);
      case Kind::Lam: return lambda(ctx, t);
      case Kind::Ident:
      case Kind::App: return app(ctx, t);
      case Kind::MkVar: return mkvar(ctx, t);
      case Kind::MkSem: return mksem(ctx, t);
    }
    throw fica::FicaError("unsupported term", t->line, t->col);
  }

 private:
  int max_;
  const fica::OpRegistry& ops_;
  bool trim_;
  std::unordered_map<std::string, Part> memo_;

  Part child(const fica::Context& ctx, const TermP& t) {
    Part p = run(ctx, t);
    if (trim_) {
      auto origins = std::move(p.origins);
      p.a = la::trim(p.a);
      p.origins = std::move(origins);
    }
    p.index();
    return p;
  }

  std::vector<int> values() const {
    std::vector<int> v;
    for (int i = 0; i <= max_; ++i) v.push_back(i);
    return v;
  }

  Part skip(const TermP& t) {
    Builder b(excerpt(t));
    b.add({}, "run", true, {"0"});
    b.add({"0"}, "done", false, {});
    return b.finish();
  }

  Part div(const TermP& t) {
    Builder b(excerpt(t));
    TypeP ty = t->ty ? t->ty : (t->ann ? t->ann : fica::com_t());
    b.state(0, "0");
    for (auto& m : games::question_moves(base_kind(ty), max_)) b.add({}, m, true, {"0"});
    return b.finish();
  }

  Part constant(const TermP& t) {
    Builder b(excerpt(t));
    int v = std::min(std::max(t->value, 0), max_);
    b.add({}, "q", true, {"0"});
    b.add({"0"}, std::to_string(v), false, {});
    return b.finish();
  }

  Part op(const fica::Context& ctx, const TermP& t) {
    Part p = child(ctx, t->kids[0]);
    Builder b(excerpt(t));
    b.inherit(p, "");
    for (auto& tr : p.a.trans) {
      std::string l = p.letter(tr);
      if (Part::exit(tr) && is_number(l))
        l = std::to_string(ops_.apply(t->name, std::stoi(l), max_));
      b.copy(p, tr, l, "");
    }
    return b.finish();
  }

  Part par(const fica::Context& ctx, const TermP& t) {
    Part p1 = child(ctx, t->kids[0]);
    Part p2 = child(ctx, t->kids[1]);
    Builder b(excerpt(t));
    Names q1 = p1.levels() ? p1.a.states[0] : Names{};
    Names q2 = p2.levels() ? p2.a.states[0] : Names{};
    for (auto& a : q1)
      for (auto& c : q2) b.state(0, pair(a, c));
    b.inherit(p1, "1:", 1);
    b.inherit(p2, "2:", 1);
    for (auto* e1 : p1.entries("run"))
      for (auto* e2 : p2.entries("run"))
        b.add({}, "run", true, {pair(p1.st(0, e1->dst[0]), p2.st(0, e2->dst[0]))});
    for (auto& x1 : p1.a.trans) {
      if (!Part::exit(x1) || p1.letter(x1) != "done") continue;
      for (auto& x2 : p2.a.trans)
        if (Part::exit(x2) && p2.letter(x2) == "done")
          b.add({pair(p1.st(0, x1.src[0]), p2.st(0, x2.src[0]))}, "done", false, {});
    }
    for (auto& tr : p1.a.trans) {
      if (tr.level == 0) continue;
      for (auto& c : q2)
        b.copy(p1, tr, p1.letter(tr), "1:", pair(p1.st(0, tr.src[0]), c),
               pair(p1.st(0, tr.dst[0]), c));
    }
    for (auto& tr : p2.a.trans) {
      if (tr.level == 0) continue;
      for (auto& a : q1)
        b.copy(p2, tr, p2.letter(tr), "2:", pair(a, p2.st(0, tr.src[0])),
               pair(a, p2.st(0, tr.dst[0])));
    }
    return b.finish();
  }

  Part seq(const fica::Context& ctx, const TermP& t) {
    Part p1 = child(ctx, t->kids[0]);
    Part p2 = child(ctx, t->kids[1]);
    Builder b(excerpt(t));
    TypeKind beta = base_kind(t->ty ? t->ty : fica::com_t());
    if (beta == TypeKind::Com) {
      b.inherit(p1, "1:");
      b.inherit(p2, "2:");
      for (auto& tr : p1.a.trans)
        if (!(Part::exit(tr) && p1.letter(tr) == "done")) b.copy(p1, tr, p1.letter(tr), "1:");
      for (auto& x1 : p1.a.trans) {
        if (!Part::exit(x1) || p1.letter(x1) != "done") continue;
        for (auto* e2 : p2.entries("run"))
          for (int i : p2.from(p2.st(0, e2->dst[0])))
            b.chain({"1:" + p1.st(0, x1.src[0])}, p2, p2.a.trans[i], "2:");
      }
      for (auto& tr : p2.a.trans)
        if (!Part::entry(tr)) b.copy(p2, tr, p2.letter(tr), "2:");
      return b.finish();
    }
    auto init = games::question_moves(beta, max_);
    if (p1.levels())
      for (auto& q : p1.a.states[0])
        for (auto& x : init) b.state(0, pair(q, x), p1.origin(0, q));
    b.inherit(p1, "1:", 1);
    b.inherit(p2, "2:");
    for (auto* e1 : p1.entries("run"))
      for (auto& x : init) b.add({}, x, true, {pair(p1.st(0, e1->dst[0]), x)});
    for (auto& tr : p1.a.trans) {
      if (tr.level == 0) continue;
      for (auto& x : init)
        b.copy(p1, tr, p1.letter(tr), "1:", pair(p1.st(0, tr.src[0]), x),
               pair(p1.st(0, tr.dst[0]), x));
    }
    for (auto& x1 : p1.a.trans) {
      if (!Part::exit(x1) || p1.letter(x1) != "done") continue;
      for (auto& x : init)
        for (auto* e2 : p2.entries(x))
          for (int i : p2.from(p2.st(0, e2->dst[0])))
            b.chain({pair(p1.st(0, x1.src[0]), x)}, p2, p2.a.trans[i], "2:");
    }
    for (auto& tr : p2.a.trans)
      if (!Part::entry(tr)) b.copy(p2, tr, p2.letter(tr), "2:");
    return b.finish();
  }

  Part cond(const fica::Context& ctx, const TermP& t) {
    Part p1 = child(ctx, t->kids[0]);
    Part p2 = child(ctx, t->kids[1]);
    Part p3 = child(ctx, t->kids[2]);
    Builder b(excerpt(t));
    auto init = games::question_moves(base_kind(t->ty ? t->ty : fica::com_t()), max_);
    if (p1.levels())
      for (auto& q : p1.a.states[0])
        for (auto& x : init) b.state(0, pair(q, x), p1.origin(0, q));
    b.inherit(p1, "1:", 1);
    b.inherit(p2, "2:");
    b.inherit(p3, "3:");
    for (auto* e1 : p1.entries("q"))
      for (auto& x : init) b.add({}, x, true, {pair(p1.st(0, e1->dst[0]), x)});
    for (auto& tr : p1.a.trans) {
      if (tr.level == 0) continue;
      for (auto& x : init)
        b.copy(p1, tr, p1.letter(tr), "1:", pair(p1.st(0, tr.src[0]), x),
               pair(p1.st(0, tr.dst[0]), x));
    }
    for (auto& x1 : p1.a.trans) {
      if (!Part::exit(x1) || !is_number(p1.letter(x1))) continue;
      bool yes = std::stoi(p1.letter(x1)) > 0;
      const Part& br = yes ? p2 : p3;
      std::string tag = yes ? "2:" : "3:";
      for (auto& x : init)
        for (auto* e : br.entries(x))
          for (int i : br.from(br.st(0, e->dst[0])))
            b.chain({pair(p1.st(0, x1.src[0]), x)}, br, br.a.trans[i], tag);
    }
    for (auto& tr : p2.a.trans)
      if (!Part::entry(tr)) b.copy(p2, tr, p2.letter(tr), "2:");
    for (auto& tr : p3.a.trans)
      if (!Part::entry(tr)) b.copy(p3, tr, p3.letter(tr), "3:");
    return b.finish();
  }

  Part loop(const fica::Context& ctx, const TermP& t) {
    Part p1 = child(ctx, t->kids[0]);
    Part p2 = child(ctx, t->kids[1]);
    Builder b(excerpt(t));
    b.inherit(p1, "1:");
    b.inherit(p2, "2:");
    Names e1, e2;
    for (auto* e : p1.entries("q")) e1.push_back(p1.st(0, e->dst[0]));
    for (auto* e : p2.entries("run")) e2.push_back(p2.st(0, e->dst[0]));
    auto questions = [](const Part& p, const std::string& q) {
      std::vector<int> out;
      for (int i : p.from(q))
        if (p.a.trans[i].question) out.push_back(i);
      return out;
    };
    // the guard answered true at a root state; what can follow in one step
    auto after_true = [&](const Names& src) {
      for (auto& r2 : e2) {
        for (int i : questions(p2, r2)) b.chain(src, p2, p2.a.trans[i], "2:");
        if (!p2.has_exit(r2, "done")) continue;
        for (auto& r1 : e1) {
          for (int i : questions(p1, r1)) b.chain(src, p1, p1.a.trans[i], "1:");
          if (p1.has_exit(r1, "0")) b.add(src, "done", false, {});
        }
      }
    };
    for (auto& d : e1) b.add({}, "run", true, {"1:" + d});
    for (auto& tr : p1.a.trans) {
      if (tr.level > 0) {
        b.copy(p1, tr, p1.letter(tr), "1:");
      } else if (Part::exit(tr)) {
        const std::string& l = p1.letter(tr);
        Names src{"1:" + p1.st(0, tr.src[0])};
        if (l == "0") b.add(src, "done", false, {});
        else if (is_number(l)) after_true(src);
      }
    }
    for (auto& tr : p2.a.trans) {
      if (tr.level > 0) {
        b.copy(p2, tr, p2.letter(tr), "2:");
      } else if (Part::exit(tr) && p2.letter(tr) == "done") {
        Names src{"2:" + p2.st(0, tr.src[0])};
        for (auto& r1 : e1) {
          for (int i : questions(p1, r1)) b.chain(src, p1, p1.a.trans[i], "1:");
          for (int i : p1.from(r1)) {
            const Transition& x = p1.a.trans[i];
            if (x.question) continue;
            const std::string& l = p1.letter(x);
            if (l == "0") {
              b.add(src, "done", false, {});
            } else if (is_number(l)) {
              for (auto& r2 : e2)
                for (int j : questions(p2, r2)) b.chain(src, p2, p2.a.trans[j], "2:");
            }
          }
        }
      }
    }
    return b.finish();
  }

  Part deref(const fica::Context& ctx, const TermP& t) {
    Part p = child(ctx, t->kids[0]);
    Builder b(excerpt(t));
    b.inherit(p, "");
    for (auto& tr : p.a.trans) {
      const std::string& l = p.letter(tr);
      if (Part::entry(tr)) {
        if (l == "read") b.copy(p, tr, "q", "");
      } else if (!(Part::exit(tr) && l == "ok")) {
        b.copy(p, tr, l, "");
      }
    }
    return b.finish();
  }

  Part assign(const fica::Context& ctx, const TermP& t) {
    Part p1 = child(ctx, t->kids[0]);
    Part p2 = child(ctx, t->kids[1]);
    Builder b(excerpt(t));
    b.inherit(p1, "1:");
    b.inherit(p2, "2:");
    for (auto* e : p2.entries("q")) b.add({}, "run", true, {"2:" + p2.st(0, e->dst[0])});
    for (auto& tr : p2.a.trans)
      if (tr.level > 0) b.copy(p2, tr, p2.letter(tr), "2:");
    for (auto& x2 : p2.a.trans) {
      if (!Part::exit(x2) || !is_number(p2.letter(x2))) continue;
      Names src{"2:" + p2.st(0, x2.src[0])};
      for (auto* e1 : p1.entries("write(" + p2.letter(x2) + ")"))
        for (int i : p1.from(p1.st(0, e1->dst[0]))) {
          const Transition& n = p1.a.trans[i];
          if (n.question) b.chain(src, p1, n, "1:");
          else if (p1.letter(n) == "ok") b.add(src, "done", false, {});
        }
    }
    for (auto& tr : p1.a.trans) {
      if (tr.level > 0) b.copy(p1, tr, p1.letter(tr), "1:");
      else if (Part::exit(tr) && p1.letter(tr) == "ok")
        b.add({"1:" + p1.st(0, tr.src[0])}, "done", false, {});
    }
    return b.finish();
  }

  Part sem_op(const fica::Context& ctx, const TermP& t) {
    Part p = child(ctx, t->kids[0]);
    Builder b(excerpt(t));
    std::string want = t->kind == Kind::Grab ? "grab" : "release";
    b.inherit(p, "");
    for (auto& tr : p.a.trans) {
      const std::string& l = p.letter(tr);
      if (Part::entry(tr)) {
        if (l == want) b.copy(p, tr, "run", "");
      } else if (Part::exit(tr)) {
        if (l == "ok") b.copy(p, tr, "done", "");
      } else {
        b.copy(p, tr, l, "");
      }
    }
    return b.finish();
  }

  Part local(const fica::Context& ctx, const TermP& t) {
    bool var = t->kind == Kind::NewVar;
    const std::string& x = t->name;
    fica::Context inner = ctx;
    inner.emplace_back(x, var ? fica::var_t() : fica::sem_t());
    Part p = child(inner, t->kids[0]);
    Builder b(excerpt(t));
    std::vector<int> vals = var ? values() : std::vector<int>{0, 1};
    int init = var ? std::min(std::max(t->value, 0), max_) : (t->value > 0 ? 1 : 0);
    auto tagged = [](const std::string& q, int n) { return pair(q, std::to_string(n)); };
    if (p.levels()) {
      for (auto& q : p.a.states[0])
        for (int n : vals) b.state(0, tagged(q, n), p.origin(0, q));
      for (auto& q : p.a.states[0])
        for (int n : vals) b.state(0, locked(q, n), p.origin(0, q));
    }
    b.inherit(p, "", 1);
    for (auto& tr : p.a.trans) {
      const std::string& l = p.letter(tr);
      if (Part::entry(tr)) {
        b.add({}, l, true, {tagged(p.st(0, tr.dst[0]), init)});
        continue;
      }
      if (Part::exit(tr)) {
        for (int n : vals) b.add({tagged(p.st(0, tr.src[0]), n)}, l, false, {});
        continue;
      }
      const AMove& m = p.moves[tr.letter];
      std::string s0 = p.st(0, tr.src[0]), d0 = p.st(0, tr.dst[0]);
      bool mine = m.eps == Eps::None && m.path.size() == 1 && m.path[0] == x;
      if (!mine) {
        for (int n : vals) b.copy(p, tr, l, "", tagged(s0, n), tagged(d0, n));
        continue;
      }
      if (var) {
        if (m.base == "read") {
          for (int n : vals) b.copy(p, tr, "eq", "", tagged(s0, n), locked(d0, n));
        } else if (m.base.rfind("write(", 0) == 0) {
          int z = std::stoi(m.base.substr(6));
          for (int n : vals) b.copy(p, tr, "eq", "", tagged(s0, n), locked(d0, z));
        } else if (m.base == "ok") {
          for (int n : vals) b.copy(p, tr, "ea", "", locked(s0, n), tagged(d0, n));
        } else if (is_number(m.base)) {
          int z = std::stoi(m.base);
          b.copy(p, tr, "ea", "", locked(s0, z), tagged(d0, z));
        }
      } else {
        if (m.base == "grab") {
          b.copy(p, tr, "eq", "", tagged(s0, 0), locked(d0, 1));
        } else if (m.base == "release") {
          b.copy(p, tr, "eq", "", tagged(s0, 1), locked(d0, 0));
        } else if (m.base == "ok") {
          for (int n : vals) b.copy(p, tr, "ea", "", locked(s0, n), tagged(d0, n));
        }
      }
    }
    return b.finish();
  }

  Part lambda(const fica::Context& ctx, const TermP& t) {
    fica::Context inner = ctx;
    inner.emplace_back(t->name, t->ann);
    Part p = run(inner, t->kids[0]);
    p.index();
    std::string h = std::to_string(fica::type_args(t->ty).size());
    Builder b(excerpt(t));
    b.inherit(p, "");
    for (auto& tr : p.a.trans) {
      AMove m = p.moves[tr.letter];
      if (m.eps == Eps::None && !m.path.empty() && m.path[0] == t->name) m.path[0] = h;
      b.copy(p, tr, games::move_str(m), "");
    }
    return b.finish();
  }

  Part app(const fica::Context& ctx, const TermP& t) {
    std::string f;
    std::vector<TermP> args;
    if (!fica::spine(t, f, args)) throw fica::FicaError("application head is not a variable", t->line, t->col);
    TypeP fty;
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
      if (it->first == f) {
        fty = it->second;
        break;
      }
    if (!fty) throw fica::FicaError("unbound identifier " + f, t->line, t->col);
    TypeKind beta = base_kind(fty);
    Builder b(excerpt(t));
    Names ones;
    auto call = [&](const std::string& q, const std::string& s0, const std::string& one,
                    const std::string& ans, const std::string& s2, const std::string& fin) {
      b.add({}, q, true, {s0});
      b.add({s0}, q + "^" + f, true, {one, "0"});
      b.add({one, "0"}, ans + "^" + f, false, {s2});
      b.add({s2}, fin, false, {});
    };
    switch (beta) {
      case TypeKind::Com:
        ones = {"1"};
        call("run", "0", "1", "done", "2", "done");
        break;
      case TypeKind::Exp:
        ones = {"1"};
        for (int i : values()) {
          std::string v = std::to_string(i);
          call("q", "0", "1", v, "2^" + v, v);
        }
        break;
      case TypeKind::Var:
        ones = {"1r", "1w"};
        for (int i : values()) {
          std::string v = std::to_string(i);
          call("read", "0", "1r", v, "2^" + v, v);
        }
        for (int i : values()) {
          std::string v = std::to_string(i);
          call("write(" + v + ")", "0^" + v, "1w", "ok", "2", "ok");
        }
        break;
      case TypeKind::Sem:
        ones = {"1g", "1r"};
        call("grab", "0g", "1g", "ok", "2g", "ok");
        call("release", "0r", "1r", "ok", "2r", "ok");
        break;
      case TypeKind::Arrow: break;
    }
    int h = static_cast<int>(args.size());
    for (int j = 0; j < h; ++j) {
      int u = h - j;
      Part p = child(ctx, args[j]);
      std::string tag = h > 1 ? "u" + std::to_string(u) + ":" : "";
      b.inherit(p, tag, 0, 2);
      std::vector<std::string> relabel;
      for (auto m : p.moves) {
        if (m.eps == Eps::None) {
          if (m.path.empty() || is_number(m.path[0])) {
            m.path.insert(m.path.begin(), {f, std::to_string(u)});
          } else if (m.path.size() == 1 && games::is_question_base(m.base)) {
            m.rho += 2;
          }
        }
        relabel.push_back(games::move_str(m));
      }
      for (auto& tr : p.a.trans)
        for (auto& one : ones) {
          Names s{one, "0"}, d{one, "0"};
          for (std::size_t i = 0; i < tr.src.size(); ++i) s.push_back(tag + p.st(i, tr.src[i]));
          for (std::size_t i = 0; i < tr.dst.size(); ++i) d.push_back(tag + p.st(i, tr.dst[i]));
          b.add(s, relabel[tr.letter], tr.question, d);
        }
    }
    return b.finish();
  }

  Part& instance(const fica::Context& ctx, const TermP& body, const std::string& x, int i) {
    TermP n = fica::normalize(ctx, fica::subst(body, x, fica::mk_const(i)), max_, ops_);
    std::string key = fica::print(n);
    for (auto& [y, ty] : ctx) key += "|" + y + ":" + fica::type_str(ty);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(key, child(ctx, n)).first->second;
  }

  Part mkvar(const fica::Context& ctx, const TermP& t) {
    TermP w = t->kids[0];
    if (w->kind != Kind::Lam) throw fica::FicaError("mkvar expects a normal form", t->line, t->col);
    Part p2 = child(ctx, t->kids[1]);
    Builder b(excerpt(t));
    for (int i : values()) {
      std::string v = std::to_string(i), tag = "w" + v + ":";
      const Part& p = instance(ctx, w->kids[0], w->name, i);
      b.inherit(p, tag);
      for (auto& tr : p.a.trans) {
        const std::string& l = p.letter(tr);
        if (Part::entry(tr)) b.copy(p, tr, "write(" + v + ")", tag);
        else if (Part::exit(tr)) b.copy(p, tr, "ok", tag);
        else b.copy(p, tr, l, tag);
      }
    }
    b.inherit(p2, "r:");
    for (auto& tr : p2.a.trans)
      b.copy(p2, tr, Part::entry(tr) ? "read" : p2.letter(tr), "r:");
    return b.finish();
  }

  Part mksem(const fica::Context& ctx, const TermP& t) {
    Part p1 = child(ctx, t->kids[0]);
    Part p2 = child(ctx, t->kids[1]);
    Builder b(excerpt(t));
    b.inherit(p1, "g:");
    b.inherit(p2, "r:");
    auto emit = [&](const Part& p, const std::string& q, const std::string& tag) {
      for (auto& tr : p.a.trans) {
        if (Part::entry(tr)) b.copy(p, tr, q, tag);
        else if (Part::exit(tr)) b.copy(p, tr, "ok", tag);
        else b.copy(p, tr, p.letter(tr), tag);
      }
    };
    emit(p1, "grab", "g:");
    emit(p2, "release", "r:");
    return b.finish();
  }
};

using Bounds = std::map<int, int>;

void merge_max(Bounds& into, const Bounds& b, int shift = 0) {
  for (auto& [l, n] : b) {
    auto& slot = into[l + shift];
    slot = std::max(slot, n);
  }
}

// root children add up when two components share the root; deeper levels
// belong to one component at a time
Bounds sum_root(const Bounds& a, const Bounds& b) {
  Bounds r = a;
  merge_max(r, b);
  int ra = a.count(0) ? a.at(0) : 0, rb = b.count(0) ? b.at(0) : 0;
  r[0] = ra + rb;
  return r;
}

Bounds bound(const TermP& t) {
  switch (t->kind) {
    case Kind::Skip:
    case Kind::Div:
    case Kind::Const: return {{0, 1}};
    case Kind::Op:
    case Kind::Deref:
    case Kind::Grab:
    case Kind::Release:
    case Kind::NewVar:
    case Kind::NewSem:
    case Kind::Lam: return bound(t->kids[0]);
    case Kind::Par:
    case Kind::Seq:
    case Kind::Assign: return sum_root(bound(t->kids[0]), bound(t->kids[1]));
    case Kind::If: {
      Bounds alt = bound(t->kids[1]);
      merge_max(alt, bound(t->kids[2]));
      return sum_root(bound(t->kids[0]), alt);
    }
    case Kind::MkVar:
    case Kind::MkSem: {
      Bounds r = bound(t->kids[0]);
      merge_max(r, bound(t->kids[1]));
      return r;
    }
    case Kind::Ident:
    case Kind::App: {
      std::string f;
      std::vector<TermP> args;
      fica::spine(t, f, args);
      Bounds r{{0, 1}};
      for (auto& a : args) merge_max(r, bound(a), 2);
      return r;
    }
    case Kind::While:
      throw fica::FicaError("while has no branching bound", t->line, t->col);
  }
  return {};
}

}  // namespace

CompiledAutomaton compile(const fica::Context& ctx, const TermP& term, const CompileOptions& opts) {
  const fica::OpRegistry& ops = opts.ops ? *opts.ops : fica::OpRegistry::global();
  CompiledAutomaton out;
  out.ctx = ctx;
  out.max = opts.max;
  out.normal = fica::normalize(ctx, term, opts.max, ops);
  out.type = out.normal->ty;
  Compiler c(opts.max, ops, opts.trim_children);
  Part p = c.run(ctx, out.normal);
  out.automaton = std::move(p.a);
  out.origins = std::move(p.origins);
  out.origins.resize(out.automaton.states.size());
  return out;
}

CompiledAutomaton compile(const fica::Context& ctx, const TermP& term, int max) {
  CompileOptions o;
  o.max = max;
  return compile(ctx, term, o);
}

std::string origins_to_json(const CompiledAutomaton& c, int indent) {
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t l = 0; l < c.automaton.states.size(); ++l) {
    nlohmann::json m = nlohmann::json::object();
    for (auto& s : c.automaton.states[l]) {
      auto it = l < c.origins.size() ? c.origins[l].find(s) : c.origins[0].end();
      m[s] = (l < c.origins.size() && it != c.origins[l].end()) ? it->second : "";
    }
    levels.push_back(m);
  }
  nlohmann::json j;
  j["term"] = fica::print(c.normal);
  j["type"] = fica::type_str(c.type);
  j["levels"] = levels;
  return j.dump(indent);
}

std::map<int, int> branching_bound(const fica::Context& ctx, const TermP& term, int max) {
  TermP nf = fica::normalize(ctx, term, max);
  auto rep = fica::locality(nf);
  if (!rep.local) throw fica::FicaError("term is not local: " + rep.reason, term->line, term->col);
  return bound(nf);
}

CrossCheckReport cross_check_semantics(const fica::Context& ctx, const TermP& term, int max_len,
                                       int max) {
  CrossCheckReport r;
  CompiledAutomaton c = compile(ctx, term, max);
  games::Arena arena = games::arena_of_judgment(ctx, c.type, max);
  la::enumerate_traces(c.automaton, max_len, true, [&](const la::Trace& w) {
    ++r.accepted;
    std::string why;
    try {
      games::Play p = games::trace_to_play(c.automaton, w);
      auto chk = games::validate_play(arena, p);
      if (chk.ok) {
        std::string s;
        for (auto& m : p) s += (s.empty() ? "" : " ") + games::move_str(m.move);
        r.plays.insert(s);
      } else {
        why = chk.reason;
      }
    } catch (const std::exception& e) {
      why = e.what();
    }
    if (!why.empty()) {
      ++r.invalid;
      if (r.failures.size() < 20) r.failures.push_back(la::trace_str(c.automaton, w) + ": " + why);
    }
    return true;
  });
  if (ctx.empty() && c.type->kind == TypeKind::Com) {
    r.compared = true;
    r.nonempty = r.accepted > 0;
    r.termination = fica::may_terminate(c.normal, max).verdict;
    if (r.termination != fica::Termination::BudgetExhausted)
      r.agree = r.nonempty == (r.termination == fica::Termination::Terminates);
  }
  return r;
}

}  // namespace leafy::compiler

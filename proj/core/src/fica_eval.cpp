#include "leafy/fica.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace leafy::fica {

std::string termination_str(Termination v) {
  switch (v) {
    case Termination::Terminates: return "Terminates";
    case Termination::DivergesWithinBound: return "DivergesWithinBound";
    case Termination::BudgetExhausted: return "BudgetExhausted";
  }
  return "BudgetExhausted";
}

bool is_value(const TermP& t) { return t->kind == Kind::Skip || t->kind == Kind::Const; }

namespace {

using Store = std::vector<std::pair<std::string, int>>;
using Succ = std::vector<std::pair<TermP, Store>>;

int* cell(Store& st, const std::string& x) {
  for (auto it = st.rbegin(); it != st.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}

TermP konst(int v) {
  auto c = std::make_shared<Term>();
  c->kind = Kind::Const;
  c->value = v;
  c->ty = exp_t();
  return c;
}

TermP skip_term() {
  auto c = std::make_shared<Term>();
  c->kind = Kind::Skip;
  c->ty = com_t();
  return c;
}

TermP app_term(const TermP& f, const TermP& a) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::App;
  t->kids = {f, a};
  if (f->ty && f->ty->kind == TypeKind::Arrow) t->ty = f->ty->res;
  return t;
}

class Stepper {
 public:
  Stepper(int max, const OpRegistry& ops) : max_(max), ops_(ops) {}

  Succ steps(const TermP& t, const Store& st) {
    Succ out;
    switch (t->kind) {
      case Kind::Skip:
      case Kind::Const:
      case Kind::Div:
      case Kind::Ident:
      case Kind::Lam:
      case Kind::MkVar:
      case Kind::MkSem:
        return out;
      case Kind::Op:
        if (t->kids[0]->kind == Kind::Const) {
          out.emplace_back(konst(ops_.apply(t->name, t->kids[0]->value, max_)), st);
          return out;
        }
        return inner(t, 0, st);
      case Kind::Seq:
        if (t->kids[0]->kind == Kind::Skip) {
          out.emplace_back(t->kids[1], st);
          return out;
        }
        return inner(t, 0, st);
      case Kind::Par: {
        if (t->kids[0]->kind == Kind::Skip && t->kids[1]->kind == Kind::Skip) {
          out.emplace_back(skip_term(), st);
          return out;
        }
        out = inner(t, 0, st);
        Succ r = inner(t, 1, st);
        out.insert(out.end(), r.begin(), r.end());
        return out;
      }
      case Kind::If:
        if (t->kids[0]->kind == Kind::Const) {
          out.emplace_back(t->kids[0]->value != 0 ? t->kids[1] : t->kids[2], st);
          return out;
        }
        return inner(t, 0, st);
      case Kind::While: {
        auto again = std::make_shared<Term>(*t);
        auto body = std::make_shared<Term>();
        body->kind = Kind::Seq;
        body->kids = {t->kids[1], again};
        body->ty = com_t();
        auto c = std::make_shared<Term>();
        c->kind = Kind::If;
        c->kids = {t->kids[0], body, skip_term()};
        c->ty = com_t();
        out.emplace_back(c, st);
        return out;
      }
      case Kind::Assign: {
        const TermP& rhs = t->kids[1];
        if (rhs->kind != Kind::Const) return inner(t, 1, st);
        const TermP& lhs = t->kids[0];
        if (lhs->kind == Kind::Ident) {
          Store s2 = st;
          int* c = cell(s2, lhs->name);
          if (!c) return out;
          *c = rhs->value;
          out.emplace_back(skip_term(), s2);
          return out;
        }
        if (lhs->kind == Kind::MkVar) {
          out.emplace_back(app_term(lhs->kids[0], rhs), st);
          return out;
        }
        return inner(t, 0, st);
      }
      case Kind::Deref: {
        const TermP& v = t->kids[0];
        if (v->kind == Kind::Ident) {
          Store s2 = st;
          int* c = cell(s2, v->name);
          if (c) out.emplace_back(konst(*c), st);
          return out;
        }
        if (v->kind == Kind::MkVar) {
          out.emplace_back(v->kids[1], st);
          return out;
        }
        return inner(t, 0, st);
      }
      case Kind::Grab:
      case Kind::Release: {
        bool grab = t->kind == Kind::Grab;
        const TermP& v = t->kids[0];
        if (v->kind == Kind::Ident) {
          Store s2 = st;
          int* c = cell(s2, v->name);
          if (!c) return out;
          if (grab && *c == 0) {
            *c = 1;
            out.emplace_back(skip_term(), s2);
          } else if (!grab && *c != 0) {
            *c = 0;
            out.emplace_back(skip_term(), s2);
          }
          return out;
        }
        if (v->kind == Kind::MkSem) {
          out.emplace_back(v->kids[grab ? 0 : 1], st);
          return out;
        }
        return inner(t, 0, st);
      }
      case Kind::NewVar:
      case Kind::NewSem: {
        const TermP& body = t->kids[0];
        if (is_value(body)) {
          out.emplace_back(body, st);
          return out;
        }
        Store s2 = st;
        s2.emplace_back(t->name, t->value);
        for (auto& [b, s3] : steps(body, s2)) {
          auto c = std::make_shared<Term>(*t);
          c->value = s3.back().second;
          c->kids = {b};
          Store rest(s3.begin(), s3.end() - 1);
          out.emplace_back(c, rest);
        }
        return out;
      }
      case Kind::App:
        if (t->kids[0]->kind == Kind::Lam) {
          out.emplace_back(subst(t->kids[0]->kids[0], t->kids[0]->name, t->kids[1]), st);
          return out;
        }
        return inner(t, 0, st);
    }
    return out;
  }

 private:
  int max_;
  const OpRegistry& ops_;

  Succ inner(const TermP& t, std::size_t i, const Store& st) {
    Succ out;
    for (auto& [k, s2] : steps(t->kids[i], st)) {
      auto c = std::make_shared<Term>(*t);
      c->kids[i] = k;
      out.emplace_back(c, s2);
    }
    return out;
  }
};

}  // namespace

std::vector<TermP> step(const TermP& t, int max, const OpRegistry& ops) {
  Stepper s(max, ops);
  std::vector<TermP> out;
  for (auto& [u, st] : s.steps(t, {})) out.push_back(u);
  return out;
}

EvalResult may_terminate(const TermP& closed, int max, std::size_t budget,
                         const OpRegistry& ops) {
  auto fv = free_vars(closed);
  if (!fv.empty())
    throw FicaError("may_terminate needs a closed term, free: " + *fv.begin(), closed->line,
                    closed->col);
  EvalResult res;
  Stepper s(max, ops);
  std::unordered_map<std::string, std::string> parent;
  std::deque<std::pair<TermP, std::string>> queue;
  std::string k0 = print(closed);
  parent[k0] = "";
  queue.emplace_back(closed, k0);
  while (!queue.empty()) {
    auto [t, key] = queue.front();
    queue.pop_front();
    ++res.explored;
    if (is_value(t)) {
      res.verdict = Termination::Terminates;
      if (t->kind == Kind::Const) res.value = t->value;
      for (std::string k = key; !k.empty(); k = parent[k]) res.path.push_back(k);
      std::reverse(res.path.begin(), res.path.end());
      return res;
    }
    if (res.explored >= budget) {
      res.verdict = Termination::BudgetExhausted;
      return res;
    }
    for (auto& [u, st] : s.steps(t, {})) {
      std::string k = print(u);
      if (parent.emplace(k, key).second) queue.emplace_back(u, k);
    }
  }
  res.verdict = Termination::DivergesWithinBound;
  return res;
}

}  // namespace leafy::fica

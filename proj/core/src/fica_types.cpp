#include "leafy/fica.hpp"

#include <algorithm>

namespace leafy::fica {

namespace {

using Env = std::vector<std::pair<std::string, TypeP>>;

class Elaborator {
 public:
  Elaborator(int max, const OpRegistry& ops) : max_(max), ops_(ops) {}

  TermP run(const TermP& t, Env& env, const TypeP& expected) {
    TermP r = go(t, env, expected);
    if (expected && !type_eq(r->ty, expected)) mismatch(t, expected, r->ty);
    return r;
  }

 private:
  int max_;
  const OpRegistry& ops_;

  [[noreturn]] static void fail(const TermP& t, const std::string& msg) {
    throw TypeError(msg, t->line, t->col);
  }
  [[noreturn]] static void mismatch(const TermP& t, const TypeP& want, const TypeP& got) {
    fail(t, "expected type " + type_str(want) + " but found " + type_str(got));
  }

  static TermP typed(const TermP& t, std::vector<TermP> kids, TypeP ty) {
    auto c = std::make_shared<Term>(*t);
    c->kids = std::move(kids);
    c->ty = std::move(ty);
    return c;
  }

  TermP check(const TermP& t, Env& env, const TypeP& want) { return run(t, env, want); }

  static bool bare_div(const TermP& t) { return t->kind == Kind::Div && !t->ann; }

  TermP go(const TermP& t, Env& env, const TypeP& expected) {
    switch (t->kind) {
      case Kind::Skip:
        return typed(t, {}, com_t());
      case Kind::Div: {
        auto c = std::make_shared<Term>(*t);
        c->ty = t->ann ? t->ann : (expected ? expected : com_t());
        c->ann = c->ty;
        return c;
      }
      case Kind::Const:
        if (t->value < 0 || t->value > max_)
          fail(t, "constant " + std::to_string(t->value) + " outside 0.." + std::to_string(max_));
        return typed(t, {}, exp_t());
      case Kind::Ident:
        for (auto it = env.rbegin(); it != env.rend(); ++it)
          if (it->first == t->name) return typed(t, {}, it->second);
        fail(t, "unbound identifier " + t->name);
      case Kind::Op:
        if (!ops_.has(t->name)) fail(t, "unknown operator " + t->name);
        return typed(t, {check(t->kids[0], env, exp_t())}, exp_t());
      case Kind::Seq: {
        TermP a = check(t->kids[0], env, com_t());
        TermP b = run(t->kids[1], env, expected);
        if (!is_base(b->ty)) fail(t, "sequence result must have base type");
        return typed(t, {a, b}, b->ty);
      }
      case Kind::Par:
        return typed(t, {check(t->kids[0], env, com_t()), check(t->kids[1], env, com_t())},
                     com_t());
      case Kind::If: {
        TermP c = check(t->kids[0], env, exp_t());
        TermP a, b;
        if (expected) {
          a = check(t->kids[1], env, expected);
          b = check(t->kids[2], env, expected);
        } else if (bare_div(t->kids[1]) && !bare_div(t->kids[2])) {
          b = run(t->kids[2], env, nullptr);
          a = check(t->kids[1], env, b->ty);
        } else {
          a = run(t->kids[1], env, nullptr);
          b = check(t->kids[2], env, a->ty);
        }
        if (!is_base(a->ty)) fail(t, "conditional must have base type");
        return typed(t, {c, a, b}, a->ty);
      }
      case Kind::While:
        return typed(t, {check(t->kids[0], env, exp_t()), check(t->kids[1], env, com_t())},
                     com_t());
      case Kind::Assign:
        return typed(t, {check(t->kids[0], env, var_t()), check(t->kids[1], env, exp_t())},
                     com_t());
      case Kind::Deref:
        return typed(t, {check(t->kids[0], env, var_t())}, exp_t());
      case Kind::Grab:
      case Kind::Release:
        return typed(t, {check(t->kids[0], env, sem_t())}, com_t());
      case Kind::NewVar:
      case Kind::NewSem: {
        if (t->value < 0 || t->value > max_) fail(t, "initial value outside range");
        env.emplace_back(t->name, t->kind == Kind::NewVar ? var_t() : sem_t());
        TypeP want = expected && (expected->kind == TypeKind::Com || expected->kind == TypeKind::Exp)
                         ? expected
                         : nullptr;
        TermP body = run(t->kids[0], env, want);
        env.pop_back();
        if (body->ty->kind != TypeKind::Com && body->ty->kind != TypeKind::Exp)
          fail(t, "block body must have type com or exp");
        return typed(t, {body}, body->ty);
      }
      case Kind::MkVar:
        return typed(t,
                     {check(t->kids[0], env, arrow_t(exp_t(), com_t())),
                      check(t->kids[1], env, exp_t())},
                     var_t());
      case Kind::MkSem:
        return typed(t, {check(t->kids[0], env, com_t()), check(t->kids[1], env, com_t())},
                     sem_t());
      case Kind::Lam: {
        if (!t->ann) fail(t, "binder needs a type");
        env.emplace_back(t->name, t->ann);
        TypeP want = expected && expected->kind == TypeKind::Arrow ? expected->res : nullptr;
        TermP body = run(t->kids[0], env, want);
        env.pop_back();
        return typed(t, {body}, arrow_t(t->ann, body->ty));
      }
      case Kind::App: {
        TermP f = run(t->kids[0], env, nullptr);
        if (f->ty->kind != TypeKind::Arrow)
          fail(t, "applying a term of type " + type_str(f->ty));
        TermP a = check(t->kids[1], env, f->ty->arg);
        return typed(t, {f, a}, f->ty->res);
      }
    }
    fail(t, "unknown term");
  }
};

}  // namespace

TermP elaborate(const Context& ctx, const TermP& t, int max, const OpRegistry& ops) {
  Env env(ctx.begin(), ctx.end());
  Elaborator e(max, ops);
  return e.run(t, env, nullptr);
}

TypeP typecheck(const Context& ctx, const TermP& t, int max, const OpRegistry& ops) {
  return elaborate(ctx, t, max, ops)->ty;
}

namespace {
void fv(const TermP& t, std::set<std::string>& bound, std::set<std::string>& out) {
  if (t->kind == Kind::Ident) {
    if (!bound.count(t->name)) out.insert(t->name);
    return;
  }
  bool binds = t->kind == Kind::Lam || t->kind == Kind::NewVar || t->kind == Kind::NewSem;
  bool fresh = binds && !bound.count(t->name);
  if (fresh) bound.insert(t->name);
  for (auto& k : t->kids) fv(k, bound, out);
  if (fresh) bound.erase(t->name);
}

void all_names(const TermP& t, std::set<std::string>& out) {
  if (t->kind == Kind::Ident || t->kind == Kind::Lam || t->kind == Kind::NewVar ||
      t->kind == Kind::NewSem)
    out.insert(t->name);
  for (auto& k : t->kids) all_names(k, out);
}

TermP rename_bound(const TermP& t, const std::string& to) {
  auto c = std::make_shared<Term>(*t);
  c->kids[0] = subst(t->kids[0], t->name, [&] {
    auto id = std::make_shared<Term>();
    id->kind = Kind::Ident;
    id->name = to;
    id->ty = t->kind == Kind::Lam ? t->ann : (t->kind == Kind::NewVar ? var_t() : sem_t());
    return TermP(id);
  }());
  c->name = to;
  return c;
}
}  // namespace

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base.substr(0, base.find('\''));
  for (int i = 1;; ++i) {
    std::string c = stem + "'" + std::to_string(i);
    if (!avoid.count(c)) return c;
  }
}

std::set<std::string> all_names(const TermP& t) {
  std::set<std::string> out;
  all_names(t, out);
  return out;
}

std::set<std::string> free_vars(const TermP& t) {
  std::set<std::string> bound, out;
  fv(t, bound, out);
  return out;
}

TermP subst(const TermP& body, const std::string& x, const TermP& n) {
  switch (body->kind) {
    case Kind::Ident:
      return body->name == x ? n : body;
    case Kind::Lam:
    case Kind::NewVar:
    case Kind::NewSem: {
      if (body->name == x) return body;
      if (!free_vars(body->kids[0]).count(x)) return body;
      auto nfv = free_vars(n);
      TermP b = body;
      if (nfv.count(body->name)) {
        std::set<std::string> avoid = nfv;
        all_names(body, avoid);
        avoid.insert(x);
        b = rename_bound(body, fresh_name(body->name, avoid));
      }
      auto c = std::make_shared<Term>(*b);
      c->kids[0] = subst(b->kids[0], x, n);
      return c;
    }
    default: {
      if (body->kids.empty()) return body;
      std::vector<TermP> kids;
      bool changed = false;
      for (auto& k : body->kids) {
        kids.push_back(subst(k, x, n));
        changed |= kids.back() != k;
      }
      return changed ? with_kids(body, std::move(kids)) : body;
    }
  }
}

bool spine(const TermP& t, std::string& head, std::vector<TermP>& args) {
  args.clear();
  TermP c = t;
  while (c->kind == Kind::App) {
    args.push_back(c->kids[1]);
    c = c->kids[0];
  }
  std::reverse(args.begin(), args.end());
  if (c->kind != Kind::Ident) return false;
  head = c->name;
  return true;
}

}  // namespace leafy::fica

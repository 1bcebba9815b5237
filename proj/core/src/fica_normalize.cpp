#include "leafy/fica.hpp"

#include <algorithm>

namespace leafy::fica {

namespace {

TermP retype(const TermP& t, TypeP ty) {
  auto c = std::make_shared<Term>(*t);
  c->ty = std::move(ty);
  return c;
}

TermP typed_div(const TypeP& ty) {
  auto d = std::make_shared<Term>();
  d->kind = Kind::Div;
  d->ann = ty;
  d->ty = ty;
  return d;
}

TermP typed_ident(const std::string& x, const TypeP& ty) {
  auto id = std::make_shared<Term>();
  id->kind = Kind::Ident;
  id->name = x;
  id->ty = ty;
  return id;
}

TermP typed_app(const TermP& f, const TermP& a) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::App;
  t->kids = {f, a};
  t->ty = f->ty->res;
  t->line = f->line;
  t->col = f->col;
  return t;
}

TermP typed_lam(const std::string& x, const TypeP& ty, const TermP& body) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Lam;
  t->name = x;
  t->ann = ty;
  t->kids = {body};
  t->ty = arrow_t(ty, body->ty);
  return t;
}

TermP beta(const TermP& t);

// f applied to a, pushing the argument through conditionals, sequencing and div
TermP apply_to(const TermP& f, const TermP& a) {
  switch (f->kind) {
    case Kind::Lam:
      return beta(subst(f->kids[0], f->name, a));
    case Kind::Div:
      return typed_div(f->ty->res);
    case Kind::If: {
      auto c = std::make_shared<Term>(*f);
      c->kids = {f->kids[0], apply_to(f->kids[1], a), apply_to(f->kids[2], a)};
      c->ty = f->ty->res;
      return c;
    }
    case Kind::Seq: {
      auto c = std::make_shared<Term>(*f);
      c->kids = {f->kids[0], apply_to(f->kids[1], a)};
      c->ty = f->ty->res;
      return c;
    }
    default:
      return typed_app(f, beta(a));
  }
}

TermP beta(const TermP& t) {
  if (t->kind == Kind::App) return apply_to(beta(t->kids[0]), t->kids[1]);
  if (t->kids.empty()) return t;
  std::vector<TermP> kids;
  for (auto& k : t->kids) kids.push_back(beta(k));
  auto c = with_kids(t, std::move(kids));
  if (t->kind == Kind::Lam) {
    auto m = std::make_shared<Term>(*c);
    m->ty = arrow_t(t->ann, c->kids[0]->ty);
    return m;
  }
  return c;
}

class Eta {
 public:
  explicit Eta(std::set<std::string> names) : names_(std::move(names)) {}

  TermP go(const TermP& t, bool head = false) {
    switch (t->kind) {
      case Kind::Ident:
        if (head) return t;
        if (t->ty->kind == TypeKind::Var || t->ty->kind == TypeKind::Sem) return base_eta(t);
        return expand(t);
      case Kind::Div:
        if (t->ty->kind == TypeKind::Arrow) {
          std::string x = fresh();
          return typed_lam(x, t->ty->arg, go(typed_div(t->ty->res)));
        }
        return t;
      case Kind::App: {
        auto c = with_kids(t, {go(t->kids[0], true), go(t->kids[1])});
        return head ? c : expand(c);
      }
      case Kind::Lam: {
        auto c = with_kids(t, {go(t->kids[0])});
        return retype(c, arrow_t(t->ann, c->kids[0]->ty));
      }
      default: {
        if (t->kids.empty()) return t;
        bool elim = t->kind == Kind::Assign || t->kind == Kind::Deref ||
                    t->kind == Kind::Grab || t->kind == Kind::Release;
        std::vector<TermP> kids;
        for (std::size_t i = 0; i < t->kids.size(); ++i) {
          const TermP& k = t->kids[i];
          kids.push_back(elim && i == 0 && k->kind == Kind::Ident ? k : go(k));
        }
        return with_kids(t, std::move(kids));
      }
    }
  }

 private:
  std::set<std::string> names_;

  std::string fresh() {
    std::string x = fresh_name("y", names_);
    names_.insert(x);
    return x;
  }

  static TermP node(Kind k, std::vector<TermP> kids, TypeP ty) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->kids = std::move(kids);
    t->ty = std::move(ty);
    return t;
  }

  // v : var  ~>  mkvar (\y:exp. v := y) !v,   s : sem  ~>  mksem grab(s) release(s)
  TermP base_eta(const TermP& x) {
    if (x->ty->kind == TypeKind::Var) {
      std::string y = fresh();
      TermP w = typed_lam(y, exp_t(),
                          node(Kind::Assign, {x, typed_ident(y, exp_t())}, com_t()));
      return node(Kind::MkVar, {w, node(Kind::Deref, {x}, exp_t())}, var_t());
    }
    return node(Kind::MkSem,
                {node(Kind::Grab, {x}, com_t()), node(Kind::Release, {x}, com_t())}, sem_t());
  }

  TermP expand(const TermP& n) {
    if (n->ty->kind != TypeKind::Arrow) return n;
    std::string x = fresh();
    TermP arg = go(typed_ident(x, n->ty->arg));
    return typed_lam(x, n->ty->arg, expand(typed_app(n, arg)));
  }
};

// rename binders that shadow a name already in scope
TermP uniquify(const TermP& t, std::vector<std::string>& scope, std::set<std::string>& used) {
  bool binds = t->kind == Kind::Lam || t->kind == Kind::NewVar || t->kind == Kind::NewSem;
  if (binds) {
    TermP b = t;
    if (std::find(scope.begin(), scope.end(), t->name) != scope.end()) {
      std::string to = fresh_name(t->name, used);
      used.insert(to);
      TypeP ty = t->kind == Kind::Lam ? t->ann : (t->kind == Kind::NewVar ? var_t() : sem_t());
      auto c = std::make_shared<Term>(*t);
      c->kids[0] = subst(t->kids[0], t->name, typed_ident(to, ty));
      c->name = to;
      b = c;
    }
    scope.push_back(b->name);
    auto c = with_kids(b, {uniquify(b->kids[0], scope, used)});
    scope.pop_back();
    return c;
  }
  if (t->kids.empty()) return t;
  std::vector<TermP> kids;
  for (auto& k : t->kids) kids.push_back(uniquify(k, scope, used));
  return with_kids(t, std::move(kids));
}

}  // namespace

TermP normalize(const Context& ctx, const TermP& t, int max, const OpRegistry& ops) {
  TermP e = elaborate(ctx, t, max, ops);
  std::set<std::string> names = all_names(e);
  for (auto& [x, ty] : ctx) names.insert(x);
  TermP b = beta(e);
  TermP l = Eta(names).go(b);
  std::vector<std::string> scope;
  for (auto& [x, ty] : ctx) scope.push_back(x);
  std::set<std::string> used = all_names(l);
  used.insert(names.begin(), names.end());
  return uniquify(l, scope, used);
}

int ade(const std::string& x, const TermP& t) {
  switch (t->kind) {
    case Kind::Ident:
      return t->name == x ? 1 : 0;
    case Kind::Skip:
    case Kind::Div:
    case Kind::Const:
      return 0;
    case Kind::Lam:
    case Kind::NewVar:
    case Kind::NewSem:
      return t->name == x ? 0 : ade(x, t->kids[0]);
    case Kind::App: {
      std::string head;
      std::vector<TermP> args;
      if (spine(t, head, args)) {
        int m = 0;
        for (auto& a : args) m = std::max(m, ade(x, a));
        return 1 + m;
      }
      break;
    }
    default:
      break;
  }
  int m = 0;
  for (auto& k : t->kids) m = std::max(m, ade(x, k));
  return m;
}

namespace {
void scan(const TermP& t, LocalityReport& r) {
  if (t->kind == Kind::While) {
    r.has_while = true;
    if (r.local) r.reason = "contains while";
    r.local = false;
  }
  if (t->kind == Kind::NewVar || t->kind == Kind::NewSem) {
    int a = ade(t->name, t->kids[0]);
    r.binders.emplace_back(t->name, a);
    if (a > 2) {
      if (r.local) r.reason = "applicative depth of " + t->name + " is " + std::to_string(a);
      r.local = false;
    }
  }
  for (auto& k : t->kids) scan(k, r);
}
}  // namespace

LocalityReport locality(const TermP& nf) {
  LocalityReport r;
  scan(nf, r);
  return r;
}

bool is_local(const Context& ctx, const TermP& t, int max) {
  return locality(normalize(ctx, t, max)).local;
}

}  // namespace leafy::fica

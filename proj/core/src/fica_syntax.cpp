#include "leafy/fica.hpp"

#include <cctype>
#include <sstream>

namespace leafy::fica {

FicaError::FicaError(const std::string& msg, int l, int c)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
      line(l), col(c) {}

namespace {
TypeP base(TypeKind k) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  return t;
}
}  // namespace

TypeP com_t() { static TypeP t = base(TypeKind::Com); return t; }
TypeP exp_t() { static TypeP t = base(TypeKind::Exp); return t; }
TypeP var_t() { static TypeP t = base(TypeKind::Var); return t; }
TypeP sem_t() { static TypeP t = base(TypeKind::Sem); return t; }

TypeP arrow_t(TypeP a, TypeP b) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Arrow;
  t->arg = std::move(a);
  t->res = std::move(b);
  return t;
}

bool type_eq(const TypeP& a, const TypeP& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  if (a->kind != TypeKind::Arrow) return true;
  return type_eq(a->arg, b->arg) && type_eq(a->res, b->res);
}

bool is_base(const TypeP& t) { return t && t->kind != TypeKind::Arrow; }

std::string type_str(const TypeP& t) {
  if (!t) return "?";
  switch (t->kind) {
    case TypeKind::Com: return "com";
    case TypeKind::Exp: return "exp";
    case TypeKind::Var: return "var";
    case TypeKind::Sem: return "sem";
    case TypeKind::Arrow: {
      std::string a = type_str(t->arg);
      if (t->arg->kind == TypeKind::Arrow) a = "(" + a + ")";
      return a + " -> " + type_str(t->res);
    }
  }
  return "?";
}

std::vector<TypeP> type_args(const TypeP& t) {
  std::vector<TypeP> out;
  for (TypeP c = t; c && c->kind == TypeKind::Arrow; c = c->res) out.push_back(c->arg);
  return out;
}

TypeP type_result(const TypeP& t) {
  TypeP c = t;
  while (c && c->kind == TypeKind::Arrow) c = c->res;
  return c;
}

int type_order(const TypeP& t) {
  if (is_base(t)) return 0;
  int o = 0;
  for (auto& a : type_args(t)) o = std::max(o, type_order(a) + 1);
  return o;
}

OpRegistry::OpRegistry() {
  fns_["succ"] = [](int v, int max) { return v < max ? v + 1 : max; };
  fns_["pred"] = [](int v, int) { return v > 0 ? v - 1 : 0; };
  fns_["iszero"] = [](int v, int) { return v == 0 ? 1 : 0; };
  fns_["not"] = [](int v, int) { return v == 0 ? 1 : 0; };
}

OpRegistry& OpRegistry::global() {
  static OpRegistry r;
  return r;
}

void OpRegistry::add(const std::string& name, Fn fn) { fns_[name] = std::move(fn); }

namespace {
// eqK and neqK for any numeral K
bool indexed_op(const std::string& name, const std::string& prefix, int& k) {
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return false;
  k = 0;
  for (std::size_t i = prefix.size(); i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    k = k * 10 + (name[i] - '0');
    if (k > 1000000) return false;
  }
  return true;
}
}  // namespace

bool OpRegistry::has(const std::string& name) const {
  int k;
  return fns_.count(name) || indexed_op(name, "eq", k) || indexed_op(name, "neq", k);
}

int OpRegistry::apply(const std::string& name, int value, int max) const {
  auto it = fns_.find(name);
  int r;
  int k;
  if (it != fns_.end()) {
    r = it->second(value, max);
  } else if (indexed_op(name, "eq", k)) {
    r = value == k ? 1 : 0;
  } else if (indexed_op(name, "neq", k)) {
    r = value != k ? 1 : 0;
  } else {
    throw std::out_of_range("unknown op " + name);
  }
  if (r < 0) r = 0;
  if (r > max) r = max;
  return r;
}

std::vector<std::string> OpRegistry::names() const {
  std::vector<std::string> out;
  for (auto& [k, v] : fns_) out.push_back(k);
  out.push_back("eq<K>");
  out.push_back("neq<K>");
  return out;
}

namespace {
TermP node(Kind k, std::vector<TermP> kids = {}) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->kids = std::move(kids);
  return t;
}
}  // namespace

TermP mk_skip() { return node(Kind::Skip); }
TermP mk_div(TypeP ty) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Div;
  t->ann = std::move(ty);
  return t;
}
TermP mk_const(int v) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Const;
  t->value = v;
  return t;
}
TermP mk_ident(const std::string& x) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Ident;
  t->name = x;
  return t;
}
TermP mk_op(const std::string& op, TermP m) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Op;
  t->name = op;
  t->kids = {std::move(m)};
  return t;
}
TermP mk_seq(TermP a, TermP b) { return node(Kind::Seq, {std::move(a), std::move(b)}); }
TermP mk_par(TermP a, TermP b) { return node(Kind::Par, {std::move(a), std::move(b)}); }
TermP mk_if(TermP c, TermP a, TermP b) {
  return node(Kind::If, {std::move(c), std::move(a), std::move(b)});
}
TermP mk_while(TermP c, TermP b) { return node(Kind::While, {std::move(c), std::move(b)}); }
TermP mk_assign(TermP l, TermP r) { return node(Kind::Assign, {std::move(l), std::move(r)}); }
TermP mk_deref(TermP m) { return node(Kind::Deref, {std::move(m)}); }
TermP mk_grab(TermP m) { return node(Kind::Grab, {std::move(m)}); }
TermP mk_release(TermP m) { return node(Kind::Release, {std::move(m)}); }
TermP mk_newvar(const std::string& x, int init, TermP body) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::NewVar;
  t->name = x;
  t->value = init;
  t->kids = {std::move(body)};
  return t;
}
TermP mk_newsem(const std::string& x, int init, TermP body) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::NewSem;
  t->name = x;
  t->value = init;
  t->kids = {std::move(body)};
  return t;
}
TermP mk_mkvar(TermP w, TermP r) { return node(Kind::MkVar, {std::move(w), std::move(r)}); }
TermP mk_mksem(TermP g, TermP r) { return node(Kind::MkSem, {std::move(g), std::move(r)}); }
TermP mk_lam(const std::string& x, TypeP ty, TermP body) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Lam;
  t->name = x;
  t->ann = std::move(ty);
  t->kids = {std::move(body)};
  return t;
}
TermP mk_app(TermP f, TermP a) { return node(Kind::App, {std::move(f), std::move(a)}); }
TermP mk_apps(TermP f, const std::vector<TermP>& args) {
  for (auto& a : args) f = mk_app(f, a);
  return f;
}

TermP with_kids(const TermP& t, std::vector<TermP> kids) {
  auto c = std::make_shared<Term>(*t);
  c->kids = std::move(kids);
  return c;
}

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int value = 0;
  int line = 1;
  int col = 1;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < s.size(); ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      t.kind = Tok::Ident;
      t.text = s.substr(i, j - i);
      adv(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Tok::Int;
      t.text = s.substr(i, j - i);
      if (t.text.size() > 7) throw FicaError("numeral too large", line, col);
      t.value = std::stoi(t.text);
      adv(j - i);
    } else {
      static const char* two[] = {"||", ":=", "|-", "->"};
      t.kind = Tok::Sym;
      bool done = false;
      for (auto* sym : two) {
        if (s.compare(i, 2, sym) == 0) {
          t.text = sym;
          adv(2);
          done = true;
          break;
        }
      }
      if (!done) {
        if (std::string(";!():,.\\").find(c) == std::string::npos)
          throw FicaError(std::string("unexpected character '") + c + "'", line, col);
        t.text = std::string(1, c);
        adv(1);
      }
    }
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const std::set<std::string> kKeywords = {
    "skip", "div", "if", "then", "else", "while", "do", "op", "grab", "release",
    "newvar", "newsem", "in", "mkvar", "mksem", "fun", "com", "exp", "var", "sem"};

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  bool has_turnstile() const {
    for (auto& t : toks_)
      if (t.kind == Tok::Sym && t.text == "|-") return true;
    return false;
  }

  Context decls() {
    Context ctx;
    if (is_sym("|-")) {
      next();
      return ctx;
    }
    while (true) {
      std::string x = ident();
      expect(":");
      ctx.emplace_back(x, type());
      if (is_sym(",")) {
        next();
        continue;
      }
      expect("|-");
      return ctx;
    }
  }

  TypeP type() {
    TypeP a = atype();
    if (is_sym("->")) {
      next();
      return arrow_t(a, type());
    }
    return a;
  }

  TermP term() { return seq(); }

  void finish() {
    if (cur().kind != Tok::End) fail("unexpected '" + cur().text + "'");
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  void next() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  bool is_sym(const char* s) const { return cur().kind == Tok::Sym && cur().text == s; }
  bool is_kw(const char* s) const { return cur().kind == Tok::Ident && cur().text == s; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw FicaError(msg, cur().line, cur().col);
  }
  void expect(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    next();
  }
  void expect_kw(const char* s) {
    if (!is_kw(s)) fail(std::string("expected '") + s + "'");
    next();
  }
  std::string ident() {
    if (cur().kind != Tok::Ident || kKeywords.count(cur().text)) fail("expected identifier");
    std::string x = cur().text;
    next();
    return x;
  }

  bool type_follows(std::size_t i) const {
    while (i < toks_.size() && toks_[i].kind == Tok::Sym && toks_[i].text == "(") ++i;
    if (i >= toks_.size() || toks_[i].kind != Tok::Ident) return false;
    const std::string& w = toks_[i].text;
    return w == "com" || w == "exp" || w == "var" || w == "sem";
  }

  // in `fun x:T -> M` the last arrow not followed by a type starts the body
  TypeP binder_type() {
    TypeP a = atype();
    if (is_sym("->") && type_follows(pos_ + 1)) {
      next();
      return arrow_t(a, binder_type());
    }
    return a;
  }

  TypeP atype() {
    if (is_sym("(")) {
      next();
      TypeP t = type();
      expect(")");
      return t;
    }
    if (is_kw("com")) { next(); return com_t(); }
    if (is_kw("exp")) { next(); return exp_t(); }
    if (is_kw("var")) { next(); return var_t(); }
    if (is_kw("sem")) { next(); return sem_t(); }
    fail("expected a type");
  }

  static TermP at(TermP t, const Token& tok) {
    auto c = std::make_shared<Term>(*t);
    c->line = tok.line;
    c->col = tok.col;
    return c;
  }

  TermP seq() {
    Token start = cur();
    TermP a = par();
    if (is_sym(";")) {
      next();
      return at(mk_seq(a, seq()), start);
    }
    return a;
  }

  TermP par() {
    Token start = cur();
    TermP a = assign();
    while (is_sym("||")) {
      next();
      a = at(mk_par(a, assign()), start);
    }
    return a;
  }

  TermP assign() {
    Token start = cur();
    TermP a = unary();
    if (is_sym(":=")) {
      next();
      return at(mk_assign(a, unary()), start);
    }
    return a;
  }

  TermP unary() {
    Token start = cur();
    if (is_sym("!")) {
      next();
      return at(mk_deref(unary()), start);
    }
    if (is_kw("grab")) {
      next();
      return at(mk_grab(unary()), start);
    }
    if (is_kw("release")) {
      next();
      return at(mk_release(unary()), start);
    }
    if (is_kw("op")) {
      next();
      if (cur().kind != Tok::Ident) fail("expected operator name");
      std::string name = cur().text;
      next();
      return at(mk_op(name, unary()), start);
    }
    return app();
  }

  bool starts_atom() const {
    const Token& t = cur();
    if (t.kind == Tok::Int) return true;
    if (t.kind == Tok::Sym) return t.text == "(" || t.text == "\\";
    if (t.kind != Tok::Ident) return false;
    static const std::set<std::string> openers = {"skip", "div", "if", "while", "fun",
                                                  "newvar", "newsem", "mkvar", "mksem"};
    return !kKeywords.count(t.text) || openers.count(t.text);
  }

  TermP app() {
    Token start = cur();
    TermP f = atom();
    while (starts_atom()) f = at(mk_app(f, atom()), start);
    return f;
  }

  TermP atom() {
    Token start = cur();
    if (cur().kind == Tok::Int) {
      int v = cur().value;
      next();
      return at(mk_const(v), start);
    }
    if (is_sym("(")) {
      next();
      TermP t = term();
      expect(")");
      return t;
    }
    if (is_kw("skip")) {
      next();
      return at(mk_skip(), start);
    }
    if (is_kw("div")) {
      next();
      TypeP ty;
      if (is_sym(":")) {
        next();
        ty = atype();
      }
      return at(mk_div(ty), start);
    }
    if (is_kw("if")) {
      next();
      TermP c = term();
      expect_kw("then");
      TermP a = term();
      expect_kw("else");
      TermP b = term();
      return at(mk_if(c, a, b), start);
    }
    if (is_kw("while")) {
      next();
      TermP c = term();
      expect_kw("do");
      return at(mk_while(c, term()), start);
    }
    if (is_kw("fun") || is_sym("\\")) {
      next();
      std::string x = ident();
      expect(":");
      TypeP ty = binder_type();
      if (is_sym(".") || is_sym("->")) {
        next();
      } else {
        fail("expected '.' or '->' after binder type");
      }
      return at(mk_lam(x, ty, term()), start);
    }
    if (is_kw("newvar") || is_kw("newsem")) {
      bool sem = is_kw("newsem");
      next();
      std::string x = ident();
      int init = 0;
      if (is_sym(":=")) {
        next();
        if (cur().kind != Tok::Int) fail("expected initial value");
        init = cur().value;
        next();
      }
      expect_kw("in");
      TermP body = term();
      return at(sem ? mk_newsem(x, init, body) : mk_newvar(x, init, body), start);
    }
    if (is_kw("mkvar") || is_kw("mksem")) {
      bool sem = is_kw("mksem");
      next();
      TermP a = atom();
      TermP b = atom();
      return at(sem ? mk_mksem(a, b) : mk_mkvar(a, b), start);
    }
    return at(mk_ident(ident()), start);
  }
};

}  // namespace

TypeP parse_type(const std::string& src) {
  Parser p(src);
  TypeP t = p.type();
  p.finish();
  return t;
}

TermP parse_term(const std::string& src) {
  Parser p(src);
  TermP t = p.term();
  p.finish();
  return t;
}

Program parse_program(const std::string& src) {
  Parser p(src);
  Program prog;
  bool declared = p.has_turnstile();
  if (declared) prog.ctx = p.decls();
  prog.term = p.term();
  p.finish();
  if (declared) {
    for (auto& x : free_vars(prog.term)) {
      bool found = false;
      for (auto& [y, ty] : prog.ctx) found |= x == y;
      if (!found) throw FicaError("unbound identifier " + x, prog.term->line, prog.term->col);
    }
  }
  return prog;
}

// ---------------------------------------------------------------- printer

namespace {

std::string atype_str(const TypeP& t) {
  if (t->kind == TypeKind::Arrow) return "(" + type_str(t) + ")";
  return type_str(t);
}

void pr(std::ostringstream& os, const TermP& t, int lvl) {
  auto open = [&](int need) {
    if (lvl > need) os << '(';
  };
  auto close = [&](int need) {
    if (lvl > need) os << ')';
  };
  switch (t->kind) {
    case Kind::Skip: os << "skip"; return;
    case Kind::Div:
      os << "div";
      if (t->ann) os << ":" << atype_str(t->ann);
      return;
    case Kind::Const: os << t->value; return;
    case Kind::Ident: os << t->name; return;
    case Kind::Seq:
      open(0);
      pr(os, t->kids[0], 1);
      os << "; ";
      pr(os, t->kids[1], 0);
      close(0);
      return;
    case Kind::Par:
      open(1);
      pr(os, t->kids[0], 1);
      os << " || ";
      pr(os, t->kids[1], 2);
      close(1);
      return;
    case Kind::Assign:
      open(2);
      pr(os, t->kids[0], 3);
      os << " := ";
      pr(os, t->kids[1], 3);
      close(2);
      return;
    case Kind::Deref:
    case Kind::Grab:
    case Kind::Release:
    case Kind::Op:
      open(3);
      if (t->kind == Kind::Deref) os << "!";
      else if (t->kind == Kind::Grab) os << "grab ";
      else if (t->kind == Kind::Release) os << "release ";
      else os << "op " << t->name << " ";
      pr(os, t->kids[0], 3);
      close(3);
      return;
    case Kind::App:
      open(4);
      pr(os, t->kids[0], 4);
      os << " ";
      pr(os, t->kids[1], 5);
      close(4);
      return;
    case Kind::MkVar:
    case Kind::MkSem:
      open(4);
      os << (t->kind == Kind::MkVar ? "mkvar " : "mksem ");
      pr(os, t->kids[0], 5);
      os << " ";
      pr(os, t->kids[1], 5);
      close(4);
      return;
    case Kind::If:
      open(0);
      os << "if ";
      pr(os, t->kids[0], 0);
      os << " then ";
      pr(os, t->kids[1], 0);
      os << " else ";
      pr(os, t->kids[2], 0);
      close(0);
      return;
    case Kind::While:
      open(0);
      os << "while ";
      pr(os, t->kids[0], 0);
      os << " do ";
      pr(os, t->kids[1], 0);
      close(0);
      return;
    case Kind::Lam:
      open(0);
      os << "\\" << t->name << ":" << type_str(t->ann) << ". ";
      pr(os, t->kids[0], 0);
      close(0);
      return;
    case Kind::NewVar:
    case Kind::NewSem:
      open(0);
      os << (t->kind == Kind::NewVar ? "newvar " : "newsem ") << t->name << " := " << t->value
         << " in ";
      pr(os, t->kids[0], 0);
      close(0);
      return;
  }
}

}  // namespace

std::string print(const TermP& t) {
  std::ostringstream os;
  pr(os, t, 0);
  return os.str();
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.ctx.size(); ++i) {
    if (i) os << ", ";
    os << p.ctx[i].first << " : " << type_str(p.ctx[i].second);
  }
  if (!p.ctx.empty()) os << " |- ";
  os << print(p.term);
  return os.str();
}

}  // namespace leafy::fica

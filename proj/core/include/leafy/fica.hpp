#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace leafy::fica {

enum class TypeKind { Com, Exp, Var, Sem, Arrow };

struct Type;
using TypeP = std::shared_ptr<const Type>;

struct Type {
  TypeKind kind = TypeKind::Com;
  TypeP arg;
  TypeP res;
};

TypeP com_t();
TypeP exp_t();
TypeP var_t();
TypeP sem_t();
TypeP arrow_t(TypeP a, TypeP b);

bool type_eq(const TypeP& a, const TypeP& b);
bool is_base(const TypeP& t);
std::string type_str(const TypeP& t);

// theta_h -> ... -> theta_1 -> beta; args() returns them in that order.
std::vector<TypeP> type_args(const TypeP& t);
TypeP type_result(const TypeP& t);
int type_order(const TypeP& t);

enum class Kind {
  Skip, Div, Const, Ident, Op,
  Seq, Par, If, While, Assign, Deref, Grab, Release,
  NewVar, NewSem, MkVar, MkSem, Lam, App
};

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Term {
  Kind kind = Kind::Skip;
  std::string name;  // identifier, op name, binder
  int value = 0;     // constant, newvar/newsem initial value
  TypeP ann;         // binder type for Lam, type of div
  TypeP ty;          // filled in by elaboration
  std::vector<TermP> kids;
  int line = 0;
  int col = 0;
};

using Context = std::vector<std::pair<std::string, TypeP>>;

struct Program {
  Context ctx;
  TermP term;
};

class FicaError : public std::runtime_error {
 public:
  FicaError(const std::string& msg, int line, int col);
  int line;
  int col;
};

class TypeError : public FicaError {
 public:
  using FicaError::FicaError;
};

class OpRegistry {
 public:
  using Fn = std::function<int(int value, int max)>;
  OpRegistry();
  static OpRegistry& global();
  void add(const std::string& name, Fn fn);
  bool has(const std::string& name) const;
  int apply(const std::string& name, int value, int max) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Fn> fns_;
};

// constructors
TermP mk_skip();
TermP mk_div(TypeP t = nullptr);
TermP mk_const(int v);
TermP mk_ident(const std::string& x);
TermP mk_op(const std::string& op, TermP m);
TermP mk_seq(TermP a, TermP b);
TermP mk_par(TermP a, TermP b);
TermP mk_if(TermP c, TermP a, TermP b);
TermP mk_while(TermP c, TermP b);
TermP mk_assign(TermP lhs, TermP rhs);
TermP mk_deref(TermP m);
TermP mk_grab(TermP m);
TermP mk_release(TermP m);
TermP mk_newvar(const std::string& x, int init, TermP body);
TermP mk_newsem(const std::string& x, int init, TermP body);
TermP mk_mkvar(TermP w, TermP r);
TermP mk_mksem(TermP g, TermP r);
TermP mk_lam(const std::string& x, TypeP t, TermP body);
TermP mk_app(TermP f, TermP a);
TermP mk_apps(TermP f, const std::vector<TermP>& args);
TermP with_kids(const TermP& t, std::vector<TermP> kids);

TypeP parse_type(const std::string& src);
TermP parse_term(const std::string& src);
Program parse_program(const std::string& src);

std::string print(const TermP& t);
std::string print_program(const Program& p);

// Checks the term and returns a copy where every node carries its type and
// every div is annotated. Untyped div takes the type expected by its
// position (com when nothing is expected).
TermP elaborate(const Context& ctx, const TermP& t, int max = 1,
                const OpRegistry& ops = OpRegistry::global());
TypeP typecheck(const Context& ctx, const TermP& t, int max = 1,
                const OpRegistry& ops = OpRegistry::global());

// beta-normal eta-long form, elaborated
TermP normalize(const Context& ctx, const TermP& t, int max = 1,
                const OpRegistry& ops = OpRegistry::global());

std::set<std::string> free_vars(const TermP& t);
std::set<std::string> all_names(const TermP& t);
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);
TermP subst(const TermP& body, const std::string& x, const TermP& n);

// head identifier and arguments of f M1 .. Mk (in application order)
bool spine(const TermP& t, std::string& head, std::vector<TermP>& args);

int ade(const std::string& x, const TermP& t);

struct LocalityReport {
  bool local = true;
  bool has_while = false;
  std::vector<std::pair<std::string, int>> binders;  // newvar/newsem name, ade
  std::string reason;
};

LocalityReport locality(const TermP& normal_form);
bool is_local(const Context& ctx, const TermP& t, int max = 1);

enum class Termination { Terminates, DivergesWithinBound, BudgetExhausted };
std::string termination_str(Termination v);

struct EvalResult {
  Termination verdict = Termination::BudgetExhausted;
  std::size_t explored = 0;
  std::vector<std::string> path;  // printed states to a value when found
  std::optional<int> value;       // result of a closed exp
};

// One-step successors of a closed term. Memory is carried by the newvar and
// newsem binders themselves, so the state is just the term.
std::vector<TermP> step(const TermP& t, int max,
                        const OpRegistry& ops = OpRegistry::global());
bool is_value(const TermP& t);

EvalResult may_terminate(const TermP& closed, int max = 1,
                         std::size_t budget = 200000,
                         const OpRegistry& ops = OpRegistry::global());

}  // namespace leafy::fica

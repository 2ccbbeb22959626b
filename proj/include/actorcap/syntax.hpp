#pragma once

// Abstract syntax of `.acap` programs, with parser and pretty-printer.
//
//   msg Name : Type            -- declares a message type and its payload
//   <expr>                     -- the root behaviour
//
// Types:  Bool  Nat  Unit  T * T  T -[L]-> T  ActorRef[L]  Beh[L]

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "actorcap/lang.hpp"
#include "actorcap/source.hpp"

namespace actorcap {

// ---- types -----------------------------------------------------------------

// `Moved` never comes out of the parser. The checker uses it to mark a
// product component whose capability has been handed elsewhere.
enum class TypeKind : std::uint8_t { Bool, Nat, Unit, Prod, Fun, ActorRef, Beh, Moved };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  TypeKind kind;
  LangExpr lang;  // Fun: latent effect; ActorRef, Beh: capability language
  TypePtr left;   // Prod: first; Fun: parameter
  TypePtr right;  // Prod: second; Fun: result

  static TypePtr boolean();
  static TypePtr nat();
  static TypePtr unit();
  static TypePtr moved();
  static TypePtr prod(TypePtr a, TypePtr b);
  static TypePtr fun(TypePtr param, LangExpr latent, TypePtr result);
  static TypePtr actor_ref(LangExpr l);
  static TypePtr beh(LangExpr l);
};

/// Exact structural equality, languages compared by shape.
bool same_type(const Type& a, const Type& b);

std::string to_string(const Type& t, const Alphabet& alphabet);

// ---- expressions -----------------------------------------------------------

using NodeId = std::uint32_t;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Path {
  std::string base;
  std::vector<int> selectors;  // each 1 or 2
  SourceLoc loc;
};

enum class BinOpKind : std::uint8_t { Add, Sub, Mul, Div, Or, And, Eq, Lt };

const char* to_string(BinOpKind op);

struct NatLit {
  std::uint64_t value;
};
struct BoolLit {
  bool value;
};
struct UnitLit {};
struct Pair {
  ExprPtr first, second;
};
struct BinOp {
  BinOpKind op;
  ExprPtr lhs, rhs;
};
struct Not {
  ExprPtr operand;
};
struct If {
  ExprPtr cond, then_branch, else_branch;
};
struct Fun {
  std::string name;  // bound to the function itself inside the body
  std::string param;
  TypePtr param_type;
  TypePtr ret_type;
  LangExpr latent;
  ExprPtr body;
};
struct App {
  ExprPtr fn, arg;
};
struct SelfCap {
  LangExpr lang;
};
struct Case {
  MsgType msg;
  std::string binder;
  ExprPtr body;
  SourceLoc loc;
};
struct Beh {
  LangExpr annotation;
  std::vector<Case> cases;
};
struct Spawn {
  std::optional<LangExpr> cap;  // defaults to the behaviour's own language
  ExprPtr behaviour;
};
struct Send {
  MsgType msg;
  Path target;
  ExprPtr payload;
};
struct SplitBinding {
  std::string name;
  TypePtr type;
};
struct Split {
  Path source;
  SplitBinding first, second;
  ExprPtr body;
};
struct Let {
  std::string name;
  ExprPtr bound, body;
};
struct Var {
  Path path;
};

using ExprNode = std::variant<NatLit, BoolLit, UnitLit, Pair, BinOp, Not, If, Fun, App, SelfCap,
                              Beh, Spawn, Send, Split, Let, Var>;

struct Expr {
  NodeId id;
  SourceLoc loc;
  ExprNode node;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
};

// ---- programs --------------------------------------------------------------

struct MsgDecl {
  std::string name;
  MsgType msg;
  TypePtr payload;
  SourceLoc loc;
};

struct Program {
  Alphabet alphabet;           // `Unit` is always symbol 0
  std::vector<MsgDecl> decls;  // user declarations, in source order
  std::vector<TypePtr> payloads;  // indexed by MsgType id
  ExprPtr root;
  NodeId node_count = 0;

  const TypePtr& payload(MsgType m) const { return payloads.at(m.id); }
};

Program parse_program(std::string_view text);
std::string pretty_print(const Program& p);
std::string pretty_print(const Expr& e, const Alphabet& alphabet);

/// Variables occurring free in `e` (path bases only).
std::set<std::string> free_variables(const Expr& e);

/// Structural equality ignoring node ids and source positions.
bool same_program(const Program& a, const Program& b);
bool same_expr(const Expr& a, const Expr& b);

}  // namespace actorcap

#include "actorcap/lang_text.hpp"
#include "actorcap/syntax.hpp"

namespace actorcap {

// ---- types -----------------------------------------------------------------

namespace {

TypePtr make_type(TypeKind k, LangExpr l = {}, TypePtr a = nullptr, TypePtr b = nullptr) {
  return std::make_shared<const Type>(Type{k, std::move(l), std::move(a), std::move(b)});
}

}  // namespace

TypePtr Type::boolean() {
  static const TypePtr t = make_type(TypeKind::Bool);
  return t;
}
TypePtr Type::nat() {
  static const TypePtr t = make_type(TypeKind::Nat);
  return t;
}
TypePtr Type::unit() {
  static const TypePtr t = make_type(TypeKind::Unit);
  return t;
}
TypePtr Type::moved() {
  static const TypePtr t = make_type(TypeKind::Moved);
  return t;
}
TypePtr Type::prod(TypePtr a, TypePtr b) {
  return make_type(TypeKind::Prod, {}, std::move(a), std::move(b));
}
TypePtr Type::fun(TypePtr param, LangExpr latent, TypePtr result) {
  return make_type(TypeKind::Fun, std::move(latent), std::move(param), std::move(result));
}
TypePtr Type::actor_ref(LangExpr l) {
  return make_type(TypeKind::ActorRef, std::move(l));
}
TypePtr Type::beh(LangExpr l) {
  return make_type(TypeKind::Beh, std::move(l));
}

bool same_type(const Type& a, const Type& b) {
  if (a.kind != b.kind)
    return false;
  switch (a.kind) {
    case TypeKind::Prod:
      return same_type(*a.left, *b.left) && same_type(*a.right, *b.right);
    case TypeKind::Fun:
      return a.lang == b.lang && same_type(*a.left, *b.left) && same_type(*a.right, *b.right);
    case TypeKind::ActorRef:
    case TypeKind::Beh:
      return a.lang == b.lang;
    default:
      return true;
  }
}

namespace {

void print_type(const Type& t, const Alphabet& ab, int context, std::string& out) {
  int prec = t.kind == TypeKind::Fun ? 0 : t.kind == TypeKind::Prod ? 1 : 2;
  bool parens = prec < context;
  if (parens)
    out += '(';
  switch (t.kind) {
    case TypeKind::Bool: out += "Bool"; break;
    case TypeKind::Nat: out += "Nat"; break;
    case TypeKind::Unit: out += "Unit"; break;
    case TypeKind::Moved: out += "<moved>"; break;
    case TypeKind::ActorRef: out += "ActorRef[" + to_string(t.lang, ab) + "]"; break;
    case TypeKind::Beh: out += "Beh[" + to_string(t.lang, ab) + "]"; break;
    case TypeKind::Prod:
      print_type(*t.left, ab, 2, out);
      out += " * ";
      print_type(*t.right, ab, 1, out);
      break;
    case TypeKind::Fun:
      print_type(*t.left, ab, 1, out);
      out += " -[" + to_string(t.lang, ab) + "]-> ";
      print_type(*t.right, ab, 0, out);
      break;
  }
  if (parens)
    out += ')';
}

}  // namespace

std::string to_string(const Type& t, const Alphabet& alphabet) {
  std::string out;
  print_type(t, alphabet, 0, out);
  return out;
}

const char* to_string(BinOpKind op) {
  switch (op) {
    case BinOpKind::Add: return "+";
    case BinOpKind::Sub: return "-";
    case BinOpKind::Mul: return "*";
    case BinOpKind::Div: return "/";
    case BinOpKind::Or: return "||";
    case BinOpKind::And: return "&&";
    case BinOpKind::Eq: return "==";
    case BinOpKind::Lt: return "<";
  }
  return "?";
}

// ---- printing --------------------------------------------------------------

namespace {

// Expression precedence levels, loosest first.
enum Prec : int { kBinder = 0, kOr, kAnd, kCmp, kAdd, kMul, kUnary, kPostfix, kAtom };

int binop_prec(BinOpKind op) {
  switch (op) {
    case BinOpKind::Or: return kOr;
    case BinOpKind::And: return kAnd;
    case BinOpKind::Eq:
    case BinOpKind::Lt: return kCmp;
    case BinOpKind::Add:
    case BinOpKind::Sub: return kAdd;
    case BinOpKind::Mul:
    case BinOpKind::Div: return kMul;
  }
  return kAtom;
}

std::string path_text(const Path& p) {
  std::string out = p.base;
  for (int s : p.selectors)
    out += s == 1 ? ".1" : ".2";
  return out;
}

class Printer {
 public:
  explicit Printer(const Alphabet& ab) : ab_(ab) {}

  void print(const Expr& e, int context) {
    int prec = precedence(e);
    bool parens = prec < context;
    if (parens)
      out_ += '(';
    std::visit([&](const auto& n) { emit(n); }, e.node);
    if (parens)
      out_ += ')';
  }

  std::string take() { return std::move(out_); }

 private:
  static int precedence(const Expr& e) {
    if (auto b = e.as<BinOp>())
      return binop_prec(b->op);
    if (e.as<Let>() || e.as<If>() || e.as<Split>() || e.as<Fun>())
      return kBinder;
    if (e.as<Not>())
      return kUnary;
    if (e.as<App>())
      return kPostfix;
    return kAtom;
  }

  void newline() {
    out_ += '\n';
    out_.append(2 * indent_, ' ');
  }

  std::string lang(const LangExpr& l) { return to_string(l, ab_); }
  std::string type(const TypePtr& t) { return to_string(*t, ab_); }

  void emit(const NatLit& n) { out_ += std::to_string(n.value); }
  void emit(const BoolLit& b) { out_ += b.value ? "true" : "false"; }
  void emit(const UnitLit&) { out_ += "()"; }
  void emit(const Pair& p) {
    out_ += '(';
    print(*p.first, kBinder);
    out_ += ", ";
    print(*p.second, kBinder);
    out_ += ')';
  }
  void emit(const BinOp& b) {
    int prec = binop_prec(b.op);
    bool cmp = prec == kCmp;
    print(*b.lhs, cmp ? prec + 1 : prec);
    out_ += ' ';
    out_ += to_string(b.op);
    out_ += ' ';
    print(*b.rhs, prec + 1);
  }
  void emit(const Not& n) {
    out_ += "not ";
    print(*n.operand, kUnary);
  }
  void emit(const If& i) {
    out_ += "if ";
    print(*i.cond, kBinder);
    out_ += " then ";
    print(*i.then_branch, kBinder);
    out_ += " else ";
    print(*i.else_branch, kBinder);
  }
  void emit(const Fun& f) {
    out_ += "fun " + f.name + "(" + f.param + ": " + type(f.param_type) + "): " + type(f.ret_type);
    out_ += " ! " + lang(f.latent) + " =>";
    ++indent_;
    newline();
    print(*f.body, kBinder);
    --indent_;
  }
  void emit(const App& a) {
    print(*a.fn, kPostfix);
    out_ += '(';
    print(*a.arg, kBinder);
    out_ += ')';
  }
  void emit(const SelfCap& s) { out_ += "self[" + lang(s.lang) + "]"; }
  void emit(const Beh& b) {
    out_ += "beh[" + lang(b.annotation) + "] {";
    ++indent_;
    for (std::size_t i = 0; i < b.cases.size(); ++i) {
      const Case& c = b.cases[i];
      newline();
      out_ += ab_.name(c.msg) + "(" + c.binder + ") =>";
      ++indent_;
      newline();
      print(*c.body, kBinder);
      --indent_;
      if (i + 1 < b.cases.size())
        out_ += ';';
    }
    --indent_;
    if (!b.cases.empty())
      newline();
    out_ += '}';
  }
  void emit(const Spawn& s) {
    out_ += "spawn";
    if (s.cap)
      out_ += "[" + lang(*s.cap) + "]";
    out_ += '(';
    print(*s.behaviour, kBinder);
    out_ += ')';
  }
  void emit(const Send& s) {
    out_ += "send[" + ab_.name(s.msg) + "](" + path_text(s.target) + ", ";
    print(*s.payload, kBinder);
    out_ += ')';
  }
  void emit(const Split& s) {
    out_ += "split " + path_text(s.source) + " as " + s.first.name + ": " + type(s.first.type) +
            ", " + s.second.name + ": " + type(s.second.type) + " in";
    newline();
    print(*s.body, kBinder);
  }
  void emit(const Let& l) {
    out_ += "let " + l.name + " = ";
    ++indent_;
    print(*l.bound, kBinder);
    --indent_;
    out_ += " in";
    newline();
    print(*l.body, kBinder);
  }
  void emit(const Var& v) { out_ += path_text(v.path); }

  const Alphabet& ab_;
  std::string out_;
  int indent_ = 0;
};

}  // namespace

std::string pretty_print(const Expr& e, const Alphabet& alphabet) {
  Printer p(alphabet);
  p.print(e, kBinder);
  return p.take();
}

std::string pretty_print(const Program& p) {
  std::string out;
  for (const auto& d : p.decls)
    out += "msg " + d.name + " : " + to_string(*d.payload, p.alphabet) + "\n";
  if (!p.decls.empty())
    out += '\n';
  out += pretty_print(*p.root, p.alphabet);
  out += '\n';
  return out;
}

// ---- structural equality ---------------------------------------------------

namespace {

bool same_path(const Path& a, const Path& b) {
  return a.base == b.base && a.selectors == b.selectors;
}

bool same(const ExprPtr& a, const ExprPtr& b) {
  return same_expr(*a, *b);
}

bool same_node(const NatLit& a, const NatLit& b) { return a.value == b.value; }
bool same_node(const BoolLit& a, const BoolLit& b) { return a.value == b.value; }
bool same_node(const UnitLit&, const UnitLit&) { return true; }
bool same_node(const Pair& a, const Pair& b) {
  return same(a.first, b.first) && same(a.second, b.second);
}
bool same_node(const BinOp& a, const BinOp& b) {
  return a.op == b.op && same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}
bool same_node(const Not& a, const Not& b) { return same(a.operand, b.operand); }
bool same_node(const If& a, const If& b) {
  return same(a.cond, b.cond) && same(a.then_branch, b.then_branch) &&
         same(a.else_branch, b.else_branch);
}
bool same_node(const Fun& a, const Fun& b) {
  return a.name == b.name && a.param == b.param && same_type(*a.param_type, *b.param_type) &&
         same_type(*a.ret_type, *b.ret_type) && a.latent == b.latent && same(a.body, b.body);
}
bool same_node(const App& a, const App& b) { return same(a.fn, b.fn) && same(a.arg, b.arg); }
bool same_node(const SelfCap& a, const SelfCap& b) { return a.lang == b.lang; }
bool same_node(const Beh& a, const Beh& b) {
  if (!(a.annotation == b.annotation) || a.cases.size() != b.cases.size())
    return false;
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    const Case& x = a.cases[i];
    const Case& y = b.cases[i];
    if (x.msg != y.msg || x.binder != y.binder || !same(x.body, y.body))
      return false;
  }
  return true;
}
bool same_node(const Spawn& a, const Spawn& b) {
  return a.cap == b.cap && same(a.behaviour, b.behaviour);
}
bool same_node(const Send& a, const Send& b) {
  return a.msg == b.msg && same_path(a.target, b.target) && same(a.payload, b.payload);
}
bool same_node(const Split& a, const Split& b) {
  return same_path(a.source, b.source) && a.first.name == b.first.name &&
         same_type(*a.first.type, *b.first.type) && a.second.name == b.second.name &&
         same_type(*a.second.type, *b.second.type) && same(a.body, b.body);
}
bool same_node(const Let& a, const Let& b) {
  return a.name == b.name && same(a.bound, b.bound) && same(a.body, b.body);
}
bool same_node(const Var& a, const Var& b) { return same_path(a.path, b.path); }

}  // namespace

bool same_expr(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index())
    return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return same_node(x, std::get<T>(b.node));
      },
      a.node);
}

bool same_program(const Program& a, const Program& b) {
  if (a.decls.size() != b.decls.size())
    return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i) {
    const auto& x = a.decls[i];
    const auto& y = b.decls[i];
    if (x.name != y.name || x.msg != y.msg || !same_type(*x.payload, *y.payload))
      return false;
  }
  return same_expr(*a.root, *b.root);
}

}  // namespace actorcap

namespace actorcap {

namespace {

struct FreeVars {
  std::set<std::string> out;
  std::multiset<std::string> bound;

  void use(const std::string& name) {
    if (!bound.count(name))
      out.insert(name);
  }
  void visit(const ExprPtr& e) { visit(*e); }
  void under(std::initializer_list<std::string> names, const ExprPtr& body) {
    for (const auto& n : names)
      bound.insert(n);
    visit(body);
    for (const auto& n : names)
      bound.erase(bound.find(n));
  }

  void visit(const Expr& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Pair>) {
            visit(n.first);
            visit(n.second);
          } else if constexpr (std::is_same_v<T, BinOp>) {
            visit(n.lhs);
            visit(n.rhs);
          } else if constexpr (std::is_same_v<T, Not>) {
            visit(n.operand);
          } else if constexpr (std::is_same_v<T, If>) {
            visit(n.cond);
            visit(n.then_branch);
            visit(n.else_branch);
          } else if constexpr (std::is_same_v<T, Fun>) {
            under({n.name, n.param}, n.body);
          } else if constexpr (std::is_same_v<T, App>) {
            visit(n.fn);
            visit(n.arg);
          } else if constexpr (std::is_same_v<T, Beh>) {
            for (const auto& c : n.cases)
              under({c.binder}, c.body);
          } else if constexpr (std::is_same_v<T, Spawn>) {
            visit(n.behaviour);
          } else if constexpr (std::is_same_v<T, Send>) {
            visit(n.payload);
            use(n.target.base);
          } else if constexpr (std::is_same_v<T, Split>) {
            use(n.source.base);
            under({n.first.name, n.second.name}, n.body);
          } else if constexpr (std::is_same_v<T, Let>) {
            visit(n.bound);
            under({n.name}, n.body);
          } else if constexpr (std::is_same_v<T, Var>) {
            use(n.path.base);
          }
        },
        e.node);
  }
};

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  FreeVars fv;
  fv.visit(e);
  return std::move(fv.out);
}

}  // namespace actorcap

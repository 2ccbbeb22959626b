#include "actorcap/typecheck.hpp"

#include <algorithm>

#include "actorcap/lang_text.hpp"

namespace actorcap {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::SplitNotJustified: return "SplitNotJustified";
    case ErrorCode::EmptyResidual: return "EmptyResidual";
    case ErrorCode::NonSplittableCapture: return "NonSplittableCapture";
    case ErrorCode::BehaviourConformance: return "BehaviourConformance";
    case ErrorCode::DuplicateCaseLabel: return "DuplicateCaseLabel";
    case ErrorCode::SpawnCapabilityTooLarge: return "SpawnCapabilityTooLarge";
    case ErrorCode::RootMissingUnitCase: return "RootMissingUnitCase";
    case ErrorCode::JoinFailure: return "JoinFailure";
  }
  return "?";
}

TypeError::TypeError(ErrorCode code, SourceLoc loc, std::string detail,
                     std::optional<std::string> required, std::optional<std::string> declared)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      loc_(loc),
      detail_(std::move(detail)),
      required_(std::move(required)),
      declared_(std::move(declared)) {}

std::string render(const TypeError& e) {
  return std::string(to_string(e.code())) + " @ " + to_string(e.loc()) + " — " + e.detail();
}

bool self_splittable(const Type& t) {
  switch (t.kind) {
    case TypeKind::Bool:
    case TypeKind::Nat:
    case TypeKind::Unit:
    case TypeKind::Fun:
      return true;
    case TypeKind::Prod:
      return self_splittable(*t.left) && self_splittable(*t.right);
    case TypeKind::ActorRef:
      return includes(shuffle(t.lang, t.lang), t.lang);
    case TypeKind::Beh:
    case TypeKind::Moved:
      return false;
  }
  return false;
}

bool type_equiv(const Type& a, const Type& b) {
  if (a.kind != b.kind)
    return false;
  switch (a.kind) {
    case TypeKind::Prod:
      return type_equiv(*a.left, *b.left) && type_equiv(*a.right, *b.right);
    case TypeKind::Fun:
      return equiv(a.lang, b.lang) && type_equiv(*a.left, *b.left) &&
             type_equiv(*a.right, *b.right);
    case TypeKind::ActorRef:
    case TypeKind::Beh:
      return equiv(a.lang, b.lang);
    default:
      return true;
  }
}

namespace {

bool contains_moved(const Type& t) {
  if (t.kind == TypeKind::Moved)
    return true;
  return t.kind == TypeKind::Prod && (contains_moved(*t.left) || contains_moved(*t.right));
}

std::string path_text(const Path& p) {
  std::string out = p.base;
  for (int s : p.selectors)
    out += s == 1 ? ".1" : ".2";
  return out;
}

// Type at `p`, with every failure mode reported.
const TypePtr& lookup_path(const TypeEnv& env, const Path& p, const Alphabet& ab) {
  auto it = env.find(p.base);
  if (it == env.end())
    throw TypeError(ErrorCode::UnboundVariable, p.loc, "'" + p.base + "' is not bound here");
  const TypePtr* t = &it->second;
  for (int s : p.selectors) {
    if ((*t)->kind != TypeKind::Prod)
      throw TypeError(ErrorCode::TypeMismatch, p.loc,
                      "'" + path_text(p) + "' selects from " + to_string(**t, ab) +
                          ", which is not a pair");
    t = s == 1 ? &(*t)->left : &(*t)->right;
  }
  if (contains_moved(**t))
    throw TypeError(ErrorCode::UnboundVariable, p.loc,
                    "'" + path_text(p) + "' was moved by an earlier use");
  return *t;
}

TypePtr replace_at(const TypePtr& t, std::span<const int> sel, TypePtr repl) {
  if (sel.empty())
    return repl;
  if (sel.front() == 1)
    return Type::prod(replace_at(t->left, sel.subspan(1), std::move(repl)), t->right);
  return Type::prod(t->left, replace_at(t->right, sel.subspan(1), std::move(repl)));
}

// Removes the value at `p` from the environment.
void consume_path(TypeEnv& env, const Path& p) {
  if (p.selectors.empty()) {
    env.erase(p.base);
    return;
  }
  TypePtr& slot = env.at(p.base);
  slot = replace_at(slot, p.selectors, Type::moved());
}

bool droppable(const Type& t) {
  switch (t.kind) {
    case TypeKind::ActorRef: return nullable(t.lang);
    case TypeKind::Prod: return droppable(*t.left) && droppable(*t.right);
    default: return true;
  }
}

void split_rec(const Type& src, const Type& a, const Type& b, const Alphabet& ab, SourceLoc loc) {
  auto shape_error = [&] {
    throw TypeError(ErrorCode::TypeMismatch, loc,
                    "cannot split " + to_string(src, ab) + " into " + to_string(a, ab) + " and " +
                        to_string(b, ab));
  };
  if (src.kind != a.kind || src.kind != b.kind)
    shape_error();
  switch (src.kind) {
    case TypeKind::ActorRef: {
      LangExpr both = shuffle(a.lang, b.lang);
      if (!includes(both, src.lang))
        throw TypeError(ErrorCode::SplitNotJustified, loc,
                        "the two halves allow more than " + to_string(src, ab),
                        to_string(both, ab), to_string(src.lang, ab));
      return;
    }
    case TypeKind::Prod:
      split_rec(*src.left, *a.left, *b.left, ab, loc);
      split_rec(*src.right, *a.right, *b.right, ab, loc);
      return;
    case TypeKind::Beh:
      throw TypeError(ErrorCode::SplitNotJustified, loc, "behaviours cannot be split");
    case TypeKind::Moved:
      shape_error();
      return;
    default:
      if (!type_equiv(src, a) || !type_equiv(src, b))
        shape_error();
      return;
  }
}

TypePtr join_type(const TypePtr& t, const TypePtr& f, const std::string& name,
                  const Alphabet& ab, SourceLoc loc) {
  if (t->kind == TypeKind::Moved || f->kind == TypeKind::Moved)
    return Type::moved();
  auto fail = [&]() -> TypePtr {
    throw TypeError(ErrorCode::JoinFailure, loc,
                    "'" + name + "' is " + to_string(*t, ab) + " after one branch and " +
                        to_string(*f, ab) + " after the other");
  };
  if (t->kind != f->kind)
    return fail();
  switch (t->kind) {
    case TypeKind::ActorRef:
      return Type::actor_ref(intersect(t->lang, f->lang));
    case TypeKind::Prod:
      return Type::prod(join_type(t->left, f->left, name, ab, loc),
                        join_type(t->right, f->right, name, ab, loc));
    default:
      return type_equiv(*t, *f) ? t : fail();
  }
}

class Checker {
 public:
  Checker(const Program& p, TypedProgram* out, const CheckOptions& opts)
      : prog_(p), ab_(p.alphabet), out_(out), opts_(opts) {}

  Judgment check(TypeEnv env, const Expr& e) {
    Judgment j = std::visit([&](const auto& n) { return rule(std::move(env), e, n); }, e.node);
    if (out_) {
      if (out_->nodes.size() <= e.id)
        out_->nodes.resize(e.id + 1);
      auto& slot = out_->nodes[e.id];
      bool consumes = slot && slot->consumes;
      slot = NodeInfo{j.type, j.env, j.effect, consumes};
    }
    return j;
  }

 private:
  [[noreturn]] void mismatch(const Expr& e, const std::string& what, const Type& got) {
    throw TypeError(ErrorCode::TypeMismatch, e.loc,
                    "expected " + what + ", found " + to_string(got, ab_));
  }

  void expect(const Expr& e, const Type& got, const Type& want) {
    if (!type_equiv(got, want))
      mismatch(e, to_string(want, ab_), got);
  }

  std::string lang(const LangExpr& l) { return to_string(l, ab_); }

  void warn_dropped(const std::string& name, const TypePtr& t, SourceLoc loc) {
    if (opts_.warn_dropped && out_ && !droppable(*t))
      out_->warnings.push_back(
          {loc, "'" + name + "' goes out of scope holding " + to_string(*t, ab_)});
  }

  // Rebinds `name` as it was before a scope that shadowed it.
  void restore(TypeEnv& env, const std::string& name, const std::optional<TypePtr>& saved,
               SourceLoc loc) {
    auto it = env.find(name);
    if (it != env.end())
      warn_dropped(name, it->second, loc);
    if (saved)
      env[name] = *saved;
    else
      env.erase(name);
  }

  static std::optional<TypePtr> saved_binding(const TypeEnv& env, const std::string& name) {
    auto it = env.find(name);
    return it == env.end() ? std::nullopt : std::optional<TypePtr>(it->second);
  }

  Judgment rule(TypeEnv env, const Expr&, const NatLit&) { return {Type::nat(), env, eps()}; }
  Judgment rule(TypeEnv env, const Expr&, const BoolLit&) {
    return {Type::boolean(), env, eps()};
  }
  Judgment rule(TypeEnv env, const Expr&, const UnitLit&) { return {Type::unit(), env, eps()}; }

  Judgment rule(TypeEnv env, const Expr&, const Pair& p) {
    Judgment a = check(std::move(env), *p.first);
    Judgment b = check(std::move(a.env), *p.second);
    return {Type::prod(a.type, b.type), std::move(b.env), shuffle(a.effect, b.effect)};
  }

  Judgment rule(TypeEnv env, const Expr&, const BinOp& b) {
    bool logical = b.op == BinOpKind::Or || b.op == BinOpKind::And;
    TypePtr operand = logical ? Type::boolean() : Type::nat();
    Judgment l = check(std::move(env), *b.lhs);
    expect(*b.lhs, *l.type, *operand);
    Judgment r = check(std::move(l.env), *b.rhs);
    expect(*b.rhs, *r.type, *operand);
    bool cmp = b.op == BinOpKind::Eq || b.op == BinOpKind::Lt;
    return {logical || cmp ? Type::boolean() : Type::nat(), std::move(r.env),
            shuffle(l.effect, r.effect)};
  }

  Judgment rule(TypeEnv env, const Expr&, const Not& n) {
    Judgment j = check(std::move(env), *n.operand);
    expect(*n.operand, *j.type, *Type::boolean());
    return j;
  }

  Judgment rule(TypeEnv env, const Expr& e, const If& i) {
    Judgment c = check(std::move(env), *i.cond);
    expect(*i.cond, *c.type, *Type::boolean());
    Judgment t = check(c.env, *i.then_branch);
    Judgment f = check(std::move(c.env), *i.else_branch);
    if (!type_equiv(*t.type, *f.type))
      throw TypeError(ErrorCode::TypeMismatch, e.loc,
                      "branches have types " + to_string(*t.type, ab_) + " and " +
                          to_string(*f.type, ab_));
    TypeEnv joined = env_join(t.env, f.env, ab_, e.loc);
    return {t.type, std::move(joined), shuffle(c.effect, alt(t.effect, f.effect))};
  }

  Judgment rule(TypeEnv env, const Expr& e, const Fun& f) {
    TypePtr fn_type = Type::fun(f.param_type, f.latent, f.ret_type);
    TypeEnv inner;
    for (const auto& x : free_variables(*f.body)) {
      if (x == f.name || x == f.param)
        continue;
      auto it = env.find(x);
      if (it == env.end())
        throw TypeError(ErrorCode::UnboundVariable, e.loc, "'" + x + "' is not bound here");
      if (!self_splittable(*it->second))
        throw TypeError(ErrorCode::NonSplittableCapture, e.loc,
                        "function '" + f.name + "' captures '" + x + "' of type " +
                            to_string(*it->second, ab_) + ", which cannot be duplicated");
      inner[x] = it->second;
    }
    inner[f.name] = fn_type;
    inner[f.param] = f.param_type;
    Judgment body = check(std::move(inner), *f.body);
    if (!type_equiv(*body.type, *f.ret_type))
      throw TypeError(ErrorCode::TypeMismatch, f.body->loc,
                      "function '" + f.name + "' returns " + to_string(*body.type, ab_) +
                          " but is declared to return " + to_string(*f.ret_type, ab_));
    if (!includes(body.effect, f.latent))
      throw TypeError(ErrorCode::TypeMismatch, f.body->loc,
                      "body of '" + f.name + "' creates capabilities beyond its latent effect",
                      lang(body.effect), lang(f.latent));
    return {fn_type, std::move(env), eps()};
  }

  Judgment rule(TypeEnv env, const Expr&, const App& a) {
    Judgment fn = check(std::move(env), *a.fn);
    if (fn.type->kind != TypeKind::Fun)
      mismatch(*a.fn, "a function", *fn.type);
    Judgment arg = check(std::move(fn.env), *a.arg);
    expect(*a.arg, *arg.type, *fn.type->left);
    return {fn.type->right, std::move(arg.env), shuffle({fn.effect, arg.effect, fn.type->lang})};
  }

  Judgment rule(TypeEnv env, const Expr&, const SelfCap& s) {
    return {Type::actor_ref(s.lang), std::move(env), s.lang};
  }

  Judgment rule(TypeEnv env, const Expr& e, const Beh& b) {
    for (std::size_t i = 0; i < b.cases.size(); ++i)
      for (std::size_t k = 0; k < i; ++k)
        if (b.cases[k].msg == b.cases[i].msg)
          throw TypeError(ErrorCode::DuplicateCaseLabel, b.cases[i].loc,
                          "message '" + ab_.name(b.cases[i].msg) + "' has two cases");
    for (const Case& c : b.cases) {
      TypeEnv inner = env;
      inner[c.binder] = prog_.payload(c.msg);
      Judgment j = check(std::move(inner), *c.body);
      if (j.type->kind != TypeKind::Beh)
        mismatch(*c.body, "a behaviour", *j.type);
      LangExpr required = shuffle(derivative(c.msg, b.annotation), j.effect);
      if (!includes(required, j.type->lang))
        throw TypeError(ErrorCode::BehaviourConformance, c.loc,
                        "case '" + ab_.name(c.msg) + "' returns a behaviour too small for the "
                            "capabilities outstanding after it",
                        lang(required), lang(j.type->lang));
      if (out_)
        out_->case_effects[c.body->id] = j.effect;
    }
    for (MsgType m : ab_.symbols()) {
      bool handled = std::any_of(b.cases.begin(), b.cases.end(),
                                 [&](const Case& c) { return c.msg == m; });
      if (!handled && !is_empty(derivative(m, b.annotation)))
        throw TypeError(ErrorCode::BehaviourConformance, e.loc,
                        "behaviour permits message '" + ab_.name(m) + "' but has no case for it",
                        lang(cat(sym(m), derivative(m, b.annotation))), lang(b.annotation));
    }
    for (const auto& [name, t] : env)
      warn_dropped(name, t, e.loc);
    return {Type::beh(b.annotation), TypeEnv{}, eps()};
  }

  Judgment rule(TypeEnv env, const Expr& e, const Spawn& s) {
    Judgment b = check(std::move(env), *s.behaviour);
    if (b.type->kind != TypeKind::Beh)
      mismatch(*s.behaviour, "a behaviour", *b.type);
    LangExpr cap = s.cap.value_or(b.type->lang);
    if (!includes(cap, b.type->lang))
      throw TypeError(ErrorCode::SpawnCapabilityTooLarge, e.loc,
                      "initial capability exceeds what the behaviour accepts", lang(cap),
                      lang(b.type->lang));
    return {Type::actor_ref(cap), std::move(b.env), b.effect};
  }

  Judgment rule(TypeEnv env, const Expr&, const Send& s) {
    Judgment payload = check(std::move(env), *s.payload);
    expect(*s.payload, *payload.type, *prog_.payload(s.msg));
    SendResult r = apply_send_path(payload.env, s.target, s.msg, ab_);
    return {Type::unit(), std::move(r.env), payload.effect};
  }

  Judgment rule(TypeEnv env, const Expr& e, const Split& s) {
    TypePtr src = lookup_path(env, s.source, ab_);
    check_split(*src, *s.first.type, *s.second.type, ab_, e.loc);
    consume_path(env, s.source);
    auto saved_a = saved_binding(env, s.first.name);
    auto saved_b = saved_binding(env, s.second.name);
    env[s.first.name] = s.first.type;
    env[s.second.name] = s.second.type;
    Judgment body = check(std::move(env), *s.body);
    restore(body.env, s.first.name, saved_a, e.loc);
    restore(body.env, s.second.name, saved_b, e.loc);
    return body;
  }

  Judgment rule(TypeEnv env, const Expr& e, const Let& l) {
    Judgment bound = check(std::move(env), *l.bound);
    auto saved = saved_binding(bound.env, l.name);
    bound.env[l.name] = bound.type;
    Judgment body = check(std::move(bound.env), *l.body);
    restore(body.env, l.name, saved, e.loc);
    return {body.type, std::move(body.env), shuffle(bound.effect, body.effect)};
  }

  Judgment rule(TypeEnv env, const Expr& e, const Var& v) {
    TypePtr t = lookup_path(env, v.path, ab_);
    if (!self_splittable(*t)) {
      consume_path(env, v.path);
      if (out_) {
        if (out_->nodes.size() <= e.id)
          out_->nodes.resize(e.id + 1);
        out_->nodes[e.id] = NodeInfo{t, {}, eps(), true};
      }
    }
    return {t, std::move(env), eps()};
  }

  const Program& prog_;
  const Alphabet& ab_;
  TypedProgram* out_;
  CheckOptions opts_;
};

}  // namespace

void check_split(const Type& source, const Type& first, const Type& second,
                 const Alphabet& alphabet, SourceLoc loc) {
  split_rec(source, first, second, alphabet, loc);
}

SendResult apply_send_path(const TypeEnv& env, const Path& p, MsgType msg,
                           const Alphabet& alphabet) {
  const TypePtr& t = lookup_path(env, p, alphabet);
  if (t->kind != TypeKind::ActorRef)
    throw TypeError(ErrorCode::TypeMismatch, p.loc,
                    "'" + path_text(p) + "' has type " + to_string(*t, alphabet) +
                        ", not an actor reference");
  LangExpr residual = derivative(msg, t->lang);
  if (is_empty(residual))
    throw TypeError(ErrorCode::EmptyResidual, p.loc,
                    "'" + path_text(p) + "' of type " + to_string(*t, alphabet) +
                        " does not permit sending '" + alphabet.name(msg) + "'",
                    alphabet.name(msg), to_string(t->lang, alphabet));
  TypeEnv out = env;
  TypePtr& slot = out.at(p.base);
  slot = replace_at(slot, p.selectors, Type::actor_ref(residual));
  return {residual, std::move(out)};
}

TypeEnv env_join(const TypeEnv& t, const TypeEnv& f, const Alphabet& alphabet, SourceLoc loc) {
  TypeEnv out;
  for (const auto& [name, tt] : t) {
    auto it = f.find(name);
    if (it == f.end())
      continue;
    out[name] = join_type(tt, it->second, name, alphabet, loc);
  }
  return out;
}

Judgment check_expr(const Program& p, const TypeEnv& env, const Expr& e) {
  return Checker(p, nullptr, {}).check(env, e);
}

TypedProgram check_program(const Program& p, const CheckOptions& opts) {
  TypedProgram out;
  out.program = &p;
  out.nodes.resize(p.node_count);
  Checker checker(p, &out, opts);
  Judgment j = checker.check({}, *p.root);
  const Alphabet& ab = p.alphabet;
  if (j.type->kind != TypeKind::Beh)
    throw TypeError(ErrorCode::TypeMismatch, p.root->loc,
                    "program must be a behaviour, found " + to_string(*j.type, ab));
  const LangExpr& l = j.type->lang;
  Word unit_word{Alphabet::unit};
  if (!member(unit_word, l))
    throw TypeError(ErrorCode::RootMissingUnitCase, p.root->loc,
                    "the initial behaviour must accept the start-up Unit message",
                    "<Unit>", to_string(l, ab));
  LangExpr required = shuffle(sym(Alphabet::unit), j.effect);
  if (!includes(required, l))
    throw TypeError(ErrorCode::BehaviourConformance, p.root->loc,
                    "capabilities created while building the initial behaviour exceed it",
                    to_string(required, ab), to_string(l, ab));
  out.root_lang = l;
  out.root_effect = j.effect;
  return out;
}

}  // namespace actorcap

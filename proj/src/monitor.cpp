#include "actorcap/monitor.hpp"

#include <functional>

#include "actorcap/lang_text.hpp"

namespace actorcap {

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::SendNotPermitted: return "SendNotPermitted";
    case ViolationKind::GlobalInvariantBroken: return "GlobalInvariantBroken";
    case ViolationKind::EffectExceeded: return "EffectExceeded";
  }
  return "?";
}

std::optional<LangExpr> check_send_tag(const LangExpr& tag, MsgType msg) {
  LangExpr residual = derivative(msg, tag);
  if (is_empty(residual))
    return std::nullopt;
  return residual;
}

bool split_tag(const LangExpr& tag, const LangExpr& l1, const LangExpr& l2) {
  return includes(shuffle(l1, l2), tag);
}

bool effect_conformance(const LangExpr& static_effect, const LangExpr& observed) {
  return includes(observed, static_effect);
}

CapSummary summarize(const Config& c) {
  CapSummary s;
  auto add = [&](const RefV& r) { s.emplace(r.target, r.tag); };
  for (const auto& [id, beh] : c.store)
    for_each_ref(beh, add);
  for (const auto& [ep, q] : c.queues)
    for (const Envelope& e : q)
      for_each_ref(e.payload, add);
  return s;
}

LangExpr combined(const CapSummary& s, ActorId target) {
  LangExpr out = eps();
  auto [lo, hi] = s.equal_range(target);
  for (auto it = lo; it != hi; ++it)
    out = shuffle(out, it->second);
  return out;
}

bool InclusionCache::includes(const LangExpr& sub, const LangExpr& sup) {
  Key k{sub, sup};
  if (auto it = memo_.find(k); it != memo_.end())
    return it->second;
  bool r = actorcap::includes(sub, sup);
  memo_.emplace(std::move(k), r);
  return r;
}

namespace {

std::string words_text(const Word& w, const Alphabet& a) {
  return w.empty() ? "eps" : word_to_string(w, a);
}

LangExpr word_lang(const Word& w) {
  LangExpr out = eps();
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out = cat(sym(*it), out);
  return out;
}

}  // namespace

std::vector<Violation> global_invariant(const Config& c, InclusionCache* cache) {
  InclusionCache local;
  InclusionCache& inc = cache ? *cache : local;
  const Alphabet& alphabet = c.program->alphabet;
  std::vector<Violation> out;
  CapSummary summary = summarize(c);

  for (const auto& [id, value] : c.store) {
    const auto& b = *value.as<BehaviourV>();
    const auto& cases = b.beh->as<Beh>()->cases;
    for (MsgType m : alphabet.symbols()) {
      bool handled = std::any_of(cases.begin(), cases.end(), [&](const Case& k) { return k.msg == m; });
      if (!handled && !is_empty(derivative(m, b.annotation)))
        out.push_back({ViolationKind::GlobalInvariantBroken, id,
                       "behaviour " + to_string(b.annotation, alphabet) + " admits " +
                           alphabet.name(m) + " but has no case for it"});
    }

    std::vector<const std::deque<Envelope>*> inbound;
    for (const auto& [ep, q] : c.queues)
      if (ep.second == id && !q.empty())
        inbound.push_back(&q);
    LangExpr held = combined(summary, id);

    // Every FIFO-consistent interleaving of the inbound queues.
    std::set<std::pair<std::vector<std::size_t>, LangExpr>> seen;
    std::vector<std::size_t> pos(inbound.size(), 0);
    Word w;
    std::optional<Violation> failure;
    std::function<void(const LangExpr&)> walk = [&](const LangExpr& d) {
      if (failure || !seen.emplace(pos, d).second)
        return;
      bool leaf = true;
      for (std::size_t i = 0; i < inbound.size(); ++i) {
        if (pos[i] == inbound[i]->size())
          continue;
        leaf = false;
        MsgType m = (*inbound[i])[pos[i]].msg;
        ++pos[i];
        w.push_back(m);
        walk(derivative(m, d));
        w.pop_back();
        --pos[i];
      }
      if (leaf && !inc.includes(held, d))
        failure = Violation{ViolationKind::GlobalInvariantBroken, id,
                            to_string(held, alphabet) + " not included in (" + words_text(w, alphabet) +
                                ")^-1 " + to_string(b.annotation, alphabet)};
    };
    walk(b.annotation);
    if (failure)
      out.push_back(std::move(*failure));
  }
  return out;
}

// ---- conservation ledger ---------------------------------------------------

void TurnLedger::begin(const Value* old_behaviour, const Value* payload) {
  nodes_.clear();
  roots_.clear();
  held_.clear();
  transferred_.clear();
  sent_.clear();
  auto t = [this](const RefV& r) { track(r); };
  if (old_behaviour)
    for_each_ref(*old_behaviour, t);
  if (payload)
    for_each_ref(*payload, t);
}

void TurnLedger::track(const RefV& r) {
  if (nodes_.count(r.cap))
    return;
  nodes_[r.cap] = Node{r.target, r.tag, {}, {}};
  roots_.push_back(r.cap);
  held_[r.cap] = Held{r.target, r.tag};
}

void TurnLedger::created(const RefV& r) {
  track(r);
}

void TurnLedger::sent(const RefV& via, MsgType msg, const LangExpr& residual, const Value& payload) {
  sent_[via.target].push_back(msg);
  track(via);
  nodes_[via.cap].used.push_back(msg);
  held_[via.cap] = Held{via.target, residual};
  transferred(payload);
}

void TurnLedger::transferred(const Value& v) {
  for_each_ref(v, [this](const RefV& r) { transfer_ref(r); });
}

void TurnLedger::transfer_ref(const RefV& r) {
  track(r);
  transferred_.push_back(Held{r.target, r.tag});
  // A duplicable capability stays with the sender as well.
  if (!includes(shuffle(r.tag, r.tag), r.tag))
    held_.erase(r.cap);
}

void TurnLedger::split(const RefV& source, const RefV& first, const RefV& second) {
  track(source);
  nodes_[source.cap].halves = std::pair(first.cap, second.cap);
  held_.erase(source.cap);
  for (const RefV* h : {&first, &second}) {
    nodes_[h->cap] = Node{h->target, h->tag, {}, {}};
    held_[h->cap] = Held{h->target, h->tag};
  }
}

LangExpr TurnLedger::baseline(CapId id) const {
  const Node& n = nodes_.at(id);
  if (!n.halves)
    return n.birth;
  return cat(word_lang(n.used), shuffle(baseline(n.halves->first), baseline(n.halves->second)));
}

std::vector<ConservationFailure> TurnLedger::verify(std::uint64_t step, ActorId actor,
                                                    const Alphabet& alphabet) const {
  std::map<ActorId, std::pair<LangExpr, LangExpr>> sides;  // target -> (held, baseline)
  auto side = [&](ActorId t) -> auto& {
    return sides.try_emplace(t, eps(), eps()).first->second;
  };
  for (const auto& [cap, h] : held_)
    side(h.target).first = shuffle(side(h.target).first, h.tag);
  for (const Held& h : transferred_)
    side(h.target).first = shuffle(side(h.target).first, h.tag);
  for (CapId root : roots_) {
    ActorId t = nodes_.at(root).target;
    side(t).second = shuffle(side(t).second, baseline(root));
  }
  for (const auto& [t, w] : sent_)
    side(t);

  std::vector<ConservationFailure> out;
  for (const auto& [t, s] : sides) {
    auto it = sent_.find(t);
    LangExpr expected = it == sent_.end() ? s.second : word_derivative(it->second, s.second);
    if (!equiv(s.first, expected))
      out.push_back({step, actor, t, to_string(s.first, alphabet), to_string(expected, alphabet),
                     includes(s.first, expected)});
  }
  return out;
}

// ---- monitor ---------------------------------------------------------------

Monitor::Monitor(const Program& p, const TypedProgram* typed, MonitorOptions opts)
    : program_(&p), typed_(typed), opts_(opts), cache_(std::make_shared<InclusionCache>()) {}

void Monitor::report(Violation v) {
  std::string key = v.detail;
  if (v.kind != ViolationKind::GlobalInvariantBroken)
    key += "@" + std::to_string(step_);
  if (!reported_.emplace(static_cast<int>(v.kind), v.actor, key).second)
    return;
  if (trace_) {
    Event ev{EventKind::Violation, step_, v.actor, std::nullopt, std::nullopt, std::nullopt,
             to_string(v.kind), v.detail};
    trace_->events.push_back(std::move(ev));
  }
  violations_.push_back(std::move(v));
  if (opts_.strict)
    halt_ = true;
}

void Monitor::turn_begin(const Config& c, ActorId, const Value* old_behaviour, const Value* payload) {
  step_ = c.step_count;
  ledger_.begin(old_behaviour, payload);
}

void Monitor::self_cap(ActorId, const RefV& r) {
  ledger_.created(r);
}

void Monitor::spawned(ActorId, const RefV& r, const Value& behaviour) {
  ledger_.created(r);
  ledger_.transferred(behaviour);
}

void Monitor::sent(ActorId actor, const RefV& via, MsgType msg, const LangExpr& residual,
                   const Value& payload) {
  if (is_empty(residual))
    report({ViolationKind::SendNotPermitted, actor,
            "send " + program_->alphabet.name(msg) + " to actor " + std::to_string(via.target) +
                " not permitted by " + to_string(via.tag, program_->alphabet)});
  ledger_.sent(via, msg, residual, payload);
}

void Monitor::split(ActorId actor, const RefV& source, const RefV& first, const RefV& second) {
  if (!split_tag(source.tag, first.tag, second.tag)) {
    const Alphabet& a = program_->alphabet;
    report({ViolationKind::GlobalInvariantBroken, actor,
            to_string(shuffle(first.tag, second.tag), a) + " not included in " + to_string(source.tag, a)});
  }
  ledger_.split(source, first, second);
}

void Monitor::turn_end(const Config& c, ActorId actor, std::optional<NodeId> case_body,
                       const LangExpr& observed) {
  step_ = c.step_count;
  const Alphabet& a = program_->alphabet;
  if (typed_) {
    std::optional<LangExpr> declared;
    if (!case_body)
      declared = typed_->root_effect;
    else if (auto it = typed_->case_effects.find(*case_body); it != typed_->case_effects.end())
      declared = it->second;
    if (declared && !effect_conformance(*declared, observed))
      report({ViolationKind::EffectExceeded, actor,
              to_string(observed, a) + " not included in " + to_string(*declared, a)});
  }
  for (Violation& v : global_invariant(c, cache_.get()))
    report(std::move(v));
  if (!typed_ || !opts_.conservation)
    return;
  ++turns_audited_;
  for (ConservationFailure& f : ledger_.verify(step_, actor, a))
    conservation_.push_back(std::move(f));
}

}  // namespace actorcap

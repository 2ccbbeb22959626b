#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "actorcap/lang_text.hpp"
#include "actorcap/scheduler.hpp"

namespace actorcap::cli {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string file;
  bool json = false;
  bool warn_dropped = false;
  bool unchecked = false;
  bool no_monitor = false;
  bool strict = false;
  std::uint64_t seed = 0;
  std::size_t max_deliveries = 1000;
  std::size_t depth = 8;
  std::string out_path;
  std::string op;
  std::vector<std::string> operands;
  std::string alphabet;
};

// Failures that end a command with a given exit status after printing.
struct Bail {
  int status;
};

class Command {
 public:
  Command(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  int check() {
    Program p = load();
    TypedProgram t = typecheck(p);
    const Alphabet& a = p.alphabet;
    if (o_.json) {
      ordered_json j{{"status", "ok"},
                     {"behaviour", to_string(t.root_lang, a)},
                     {"effect", to_string(t.root_effect, a)}};
      out_ << j.dump() << '\n';
      for (const Warning& w : t.warnings)
        out_ << ordered_json{{"warning", w.message}, {"line", w.loc.line}, {"column", w.loc.column}}.dump()
             << '\n';
    } else {
      for (const Warning& w : t.warnings)
        err_ << "warning @ " << to_string(w.loc) << ": " << w.message << '\n';
      out_ << "ok: Beh[" << to_string(t.root_lang, a) << "] ! " << to_string(t.root_effect, a) << '\n';
    }
    return kOk;
  }

  int run() {
    Program p = load();
    std::optional<TypedProgram> t;
    if (!o_.unchecked)
      t = typecheck(p, true);
    RunOptions ro;
    ro.seed = o_.seed;
    ro.max_deliveries = o_.max_deliveries;
    ro.monitor = !o_.no_monitor;
    ro.strict = o_.strict;
    RunResult r = actorcap::run(p, t ? &*t : nullptr, ro);

    std::string text = o_.json ? trace_to_jsonl(r.trace, r.outcome, p.alphabet) : trace_text(r, p.alphabet);
    emit(text);
    if (r.outcome.kind == Outcome::Kind::Stuck)
      return kStuck;
    return r.violations.empty() ? kOk : kViolation;
  }

  int explore() {
    Program p = load();
    std::optional<TypedProgram> t;
    if (!o_.unchecked)
      t = typecheck(p, true);
    ExploreOptions eo;
    eo.max_depth = o_.depth;
    eo.monitor = !o_.no_monitor;
    ExplorationReport r = actorcap::explore(p, t ? &*t : nullptr, eo);

    std::ostringstream s;
    auto schedule = [](const Trace& tr) {
      ordered_json d = ordered_json::array();
      for (auto [src, dst] : tr.deliveries())
        d.push_back({src, dst});
      return d;
    };
    if (o_.json) {
      for (const auto& [label, cls] : r.outcomes)
        s << ordered_json{{"outcome", label}, {"schedules", cls.count}, {"witness", schedule(cls.witness)}}.dump()
          << '\n';
      for (const auto& [kind, cls] : r.violations)
        s << ordered_json{{"violation", kind}, {"schedules", cls.count}, {"witness", schedule(cls.witness)}}.dump()
          << '\n';
      s << ordered_json{{"schedules", r.schedules},
                        {"depth", o_.depth},
                        {"conservation_turns", r.conservation_turns},
                        {"conservation_mismatches", r.conservation_failures}}
               .dump()
        << '\n';
    } else {
      s << r.schedules << " schedule(s) to depth " << o_.depth << '\n';
      for (const auto& [label, cls] : r.outcomes)
        s << "  " << label << ": " << cls.count << " witness " << schedule(cls.witness).dump() << '\n';
      for (const auto& [kind, cls] : r.violations)
        s << "  violation " << kind << ": " << cls.count << " witness " << schedule(cls.witness).dump() << '\n';
      if (r.conservation_failures) {
        s << "  conservation mismatches on " << r.conservation_failures << " schedule(s)";
        s << (r.conservation_inclusion_failures ? "" : " (held capabilities still included)") << '\n';
        for (const auto& f : r.conservation_examples)
          s << "    step " << f.step << " actor " << f.actor << " -> " << f.target << ": " << f.held << " vs "
            << f.expected << '\n';
      }
    }
    emit(s.str());
    if (r.stuck_schedules())
      return kStuck;
    return r.violations.empty() ? kOk : kViolation;
  }

  int alg() {
    Alphabet a;
    SymbolPolicy policy = SymbolPolicy::Intern;
    if (!o_.alphabet.empty()) {
      policy = SymbolPolicy::Declared;
      std::stringstream ss(o_.alphabet);
      for (std::string name; std::getline(ss, name, ',');)
        if (!name.empty() && name != "Unit")
          a.intern(name);
    }
    const auto& args = o_.operands;
    auto need = [&](std::size_t n) {
      if (args.size() != n) {
        err_ << "alg " << o_.op << " takes " << n << " argument(s)\n";
        throw Bail{kParseError};
      }
    };
    auto lang = [&](const std::string& text) { return parse_lang(text, a, policy); };
    auto print = [&](const std::string& key, const ordered_json& value, const std::string& text) {
      if (o_.json)
        out_ << ordered_json{{"op", o_.op}, {key, value}}.dump() << '\n';
      else
        out_ << text << '\n';
    };

    if (o_.op == "derivative") {
      need(2);
      std::optional<MsgType> m = a.find(args[0]);
      if (!m && policy == SymbolPolicy::Intern)
        m = a.intern(args[0]);
      if (!m) {
        err_ << "undeclared message type '" << args[0] << "'\n";
        return kParseError;
      }
      std::string r = to_string(derivative(*m, lang(args[1])), a);
      print("result", r, r);
      return kOk;
    }
    if (o_.op == "shuffle") {
      need(2);
      LangExpr l = lang(args[0]);
      std::string r = to_string(shuffle(l, lang(args[1])), a);
      print("result", r, r);
      return kOk;
    }
    if (o_.op == "includes" || o_.op == "equiv") {
      need(2);
      LangExpr l = lang(args[0]);
      LangExpr r = lang(args[1]);
      bool v = o_.op == "includes" ? includes(l, r) : equiv(l, r);
      print("result", v, v ? "true" : "false");
      return v ? kOk : 1;
    }
    if (o_.op == "enumerate") {
      need(2);
      LangExpr l = lang(args[0]);
      std::size_t n = 0;
      try {
        n = std::stoul(args[1]);
      } catch (const std::exception&) {
        err_ << "enumerate: length must be a number\n";
        return kParseError;
      }
      std::set<Word> found = enumerate(l, n);
      std::vector<Word> words(found.begin(), found.end());
      std::stable_sort(words.begin(), words.end(), [&](const Word& x, const Word& y) {
        if (x.size() != y.size())
          return x.size() < y.size();
        return word_to_string(x, a) < word_to_string(y, a);
      });
      ordered_json list = ordered_json::array();
      std::string text;
      for (const Word& w : words) {
        list.push_back(word_to_string(w, a));
        text += (text.empty() ? "" : " ") + word_to_string(w, a);
      }
      print("words", list, text);
      return kOk;
    }
    err_ << "unknown algebra operation '" << o_.op << "'\n";
    return kParseError;
  }

 private:
  Program load() {
    std::ifstream in(o_.file);
    if (!in) {
      err_ << "cannot read " << o_.file << '\n';
      throw Bail{kParseError};
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_program(ss.str());
  }

  TypedProgram typecheck(const Program& p, bool before_running = false) {
    CheckOptions co;
    co.warn_dropped = o_.warn_dropped;
    try {
      return check_program(p, co);
    } catch (const TypeError& e) {
      if (o_.json) {
        ordered_json j{{"status", "type-error"},
                       {"code", to_string(e.code())},
                       {"line", e.loc().line},
                       {"column", e.loc().column},
                       {"detail", e.detail()}};
        if (e.required_language())
          j["required"] = *e.required_language();
        if (e.declared_language())
          j["declared"] = *e.declared_language();
        out_ << j.dump() << '\n';
      } else {
        err_ << render(e) << '\n';
        if (before_running)
          err_ << "refusing to execute an ill-typed program; pass --unchecked to run it anyway\n";
      }
      throw Bail{kTypeError};
    }
  }

  static std::string trace_text(const RunResult& r, const Alphabet& a) {
    std::ostringstream s;
    auto id = [](const std::optional<ActorId>& x) { return x ? std::to_string(*x) : std::string("-"); };
    for (const Event& e : r.trace.events) {
      s << "[" << e.step << "] " << to_string(e.kind) << ' ' << id(e.src) << " -> " << id(e.dst);
      if (e.msg)
        s << ' ' << a.name(*e.msg);
      if (e.lang)
        s << " : " << to_string(*e.lang, a);
      if (e.kind == EventKind::Violation)
        s << ' ' << e.violation;
      if (!e.detail.empty())
        s << " (" << e.detail << ')';
      s << '\n';
    }
    s << "outcome: " << r.outcome.label() << '\n';
    return s.str();
  }

  void emit(const std::string& text) {
    if (o_.out_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(o_.out_path, std::ios::binary);
    if (!f) {
      err_ << "cannot write " << o_.out_path << '\n';
      throw Bail{kParseError};
    }
    f << text;
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Actor capability checker and simulator", "actorcap"};
  app.require_subcommand(1);

  auto format = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
           "--format", [&](const std::string& f) { o.json = f == "json"; }, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  auto* check = app.add_subcommand("check", "Type-check a program");
  check->add_option("file", o.file)->required();
  check->add_flag("--warn-dropped", o.warn_dropped, "Warn about capabilities discarded unused");
  format(check);

  auto* run = app.add_subcommand("run", "Run a program under a seeded scheduler");
  run->add_option("file", o.file)->required();
  run->add_option("--seed", o.seed, "Scheduler seed");
  run->add_option("--max-deliveries", o.max_deliveries, "Delivery budget");
  run->add_flag("--no-monitor", o.no_monitor, "Disable the capability monitor");
  run->add_flag("--monitor-strict", o.strict, "Halt at the first monitor violation");
  run->add_flag("--unchecked", o.unchecked, "Skip type checking");
  run->add_flag("--warn-dropped", o.warn_dropped);
  run->add_option("--out", o.out_path, "Write the trace here instead of standard output");
  format(run);

  auto* explore = app.add_subcommand("explore", "Explore every delivery order up to a depth");
  explore->add_option("file", o.file)->required();
  explore->add_option("--depth", o.depth, "Maximum deliveries per schedule");
  explore->add_flag("--no-monitor", o.no_monitor, "Disable the capability monitor");
  explore->add_flag("--unchecked", o.unchecked, "Skip type checking");
  explore->add_option("--out", o.out_path, "Write the report here instead of standard output");
  format(explore);

  auto* alg = app.add_subcommand("alg", "Language algebra: derivative, shuffle, includes, equiv, enumerate");
  alg->add_option("op", o.op)->required()->check(
      CLI::IsMember({"derivative", "shuffle", "includes", "equiv", "enumerate"}));
  alg->add_option("args", o.operands);
  alg->add_option("--alphabet", o.alphabet, "Comma-separated message names");
  format(alg);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kParseError;
  }

  Command cmd(o, out, err);
  try {
    if (check->parsed())
      return cmd.check();
    if (run->parsed())
      return cmd.run();
    if (explore->parsed())
      return cmd.explore();
    return cmd.alg();
  } catch (const Bail& b) {
    return b.status;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const StateBudgetExceeded& e) {
    err << e.what() << '\n';
    return kParseError;
  } catch (const ScheduleBudgetExceeded& e) {
    err << e.what() << '\n';
    return kParseError;
  }
}

}  // namespace actorcap::cli

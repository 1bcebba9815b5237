#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "leafy/compiler.hpp"
#include "leafy/corpus.hpp"
#include "leafy/emptiness.hpp"
#include "leafy/fica.hpp"
#include "leafy/games.hpp"
#include "leafy/la.hpp"
#include "leafy/la2fica.hpp"
#include "leafy/lla.hpp"

namespace leafy::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  bool json = false;
  int max = 1;
  int cap = 8;
  int jobs = 1;
  int max_len = 8;
  std::size_t budget = 200000;
  std::size_t max_nodes = 2000000;
  std::size_t max_states = 200000;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BadInput("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    return;
  }
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw BadInput("cannot write " + path);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

// `# max N` lines set the datatype bound; other `#` lines are dropped
struct FicaFile {
  fica::Program prog;
  int max = 1;
  bool has_max = false;
};

FicaFile parse_fica_text(const std::string& text) {
  FicaFile f;
  std::istringstream in(text);
  std::string line, body;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') {
      std::istringstream d(line.substr(first + 1));
      std::string key;
      int v = 0;
      if (d >> key && key == "max" && d >> v) {
        f.max = v;
        f.has_max = true;
      }
      body += '\n';
      continue;
    }
    body += line + '\n';
  }
  f.prog = fica::parse_program(body);
  return f;
}

std::string sidecar_path(const std::string& out) {
  std::string base = out;
  for (const char* ext : {".la.json", ".json"})
    if (base.size() > std::strlen(ext) && base.ends_with(ext)) {
      base.resize(base.size() - std::strlen(ext));
      break;
    }
  return base + ".origins.json";
}

json trace_json(const la::LeafyAutomaton& a, const la::Trace& w) {
  return json::parse(la::trace_to_json(a, w));
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int main(int argc, const char* const* argv) {
    CLI::App app{"leafy: FICA terms, leafy automata and emptiness"};
    app.name("leafy");
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "leafy.toml", "key = value settings file", false);
    app.add_flag("--json", s_.json, "machine-readable output");
    max_opt_ = app.add_option("--max", s_.max, "largest value of the base datatype")
                   ->check(CLI::NonNegativeNumber);
    app.add_option("--cap", s_.cap, "VASS counter cap")->check(CLI::Range(1, 255));
    app.add_option("--jobs", s_.jobs, "emptiness worker threads")->check(CLI::PositiveNumber);
    app.add_option("--max-len", s_.max_len, "trace length bound")->check(CLI::NonNegativeNumber);
    app.add_option("--budget", s_.budget, "interpreter state budget");
    app.add_option("--max-nodes", s_.max_nodes, "VASS search node limit");
    app.add_option("--max-states", s_.max_states, "TEST control state limit");

    add_fica(app);
    add_la(app);
    add_lla(app);
    add_corpus(app);

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out_ << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp& e) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err_ << "leafy: " << e.what() << "\n";
      return kUsage;
    }
    try {
      return action_();
    } catch (const fica::FicaError& e) {
      err_ << "leafy: " << input_ << ":" << e.what() << "\n";
    } catch (const lla::NotLocal& e) {
      err_ << "leafy: not local at level " << e.level << ": " << e.tuple << "\n";
      return kNegative;
    } catch (const CLI::Error& e) {
      err_ << "leafy: " << e.what() << "\n";
      return kUsage;
    } catch (const json::exception& e) {
      err_ << "leafy: " << input_ << ": " << e.what() << "\n";
    } catch (const std::exception& e) {
      err_ << "leafy: " << e.what() << "\n";
    }
    return kBadInput;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  Settings s_;
  CLI::Option* max_opt_ = nullptr;
  std::function<int()> action_;
  std::string input_, input2_, output_, lla_out_, witness_out_, type_;
  std::vector<std::string> bounds_;
  bool accepted_ = false, per_candidate_ = false;
  int verify_ = -1, length_bound_ = -1;
  std::size_t limit_ = 1000;

  CLI::App* leaf(CLI::App& parent, const std::string& name, const std::string& help,
                 std::function<int()> fn) {
    auto* c = parent.add_subcommand(name, help);
    c->callback([this, fn] { action_ = fn; });
    return c;
  }

  void emit(const json& j) { out_ << j.dump(2) << "\n"; }

  FicaFile load_fica() {
    FicaFile f = parse_fica_text(read_file(input_));
    if (max_opt_->count() > 0 || !f.has_max) f.max = s_.max;
    return f;
  }

  // fica -------------------------------------------------------------------

  void add_fica(CLI::App& app) {
    auto* g = app.add_subcommand("fica", "FICA terms");
    g->require_subcommand(1);

    auto* c = leaf(*g, "check", "parse and typecheck", [this] { return fica_check(); });
    c->add_option("file", input_, ".fica file")->required();

    c = leaf(*g, "normalize", "beta-normal eta-long form", [this] { return fica_normalize(); });
    c->add_option("file", input_, ".fica file")->required();

    c = leaf(*g, "run", "may-termination by the interpreter", [this] { return fica_run(); });
    c->add_option("file", input_, ".fica file")->required();

    c = leaf(*g, "compile", "translate to a leafy automaton", [this] { return fica_compile(); });
    c->add_option("file", input_, ".fica file")->required();
    c->add_option("-o,--output", output_, "automaton JSON (stdout when absent)");
    c->add_option("--lla", lla_out_, "also write the local presentation with computed bounds");

    c = leaf(*g, "locality", "local FICA check", [this] { return fica_locality(); });
    c->add_option("file", input_, ".fica file")->required();

    c = leaf(*g, "bound", "branching bounds of a local term", [this] { return fica_bound(); });
    c->add_option("file", input_, ".fica file")->required();
  }

  int fica_check() {
    auto f = load_fica();
    auto ty = fica::typecheck(f.prog.ctx, f.prog.term, f.max);
    if (s_.json)
      emit({{"ok", true}, {"type", fica::type_str(ty)}, {"max", f.max}});
    else
      out_ << fica::type_str(ty) << "\n";
    return kOk;
  }

  int fica_normalize() {
    auto f = load_fica();
    auto nf = fica::normalize(f.prog.ctx, f.prog.term, f.max);
    std::string text = fica::print_program({f.prog.ctx, nf});
    if (s_.json)
      emit({{"normal", text}, {"max", f.max}});
    else
      out_ << text << "\n";
    return kOk;
  }

  int fica_run() {
    auto f = load_fica();
    if (!f.prog.ctx.empty()) throw BadInput("run needs a closed term");
    auto r = fica::may_terminate(f.prog.term, f.max, s_.budget);
    if (s_.json) {
      json j{{"verdict", fica::termination_str(r.verdict)}, {"explored", r.explored}};
      j["value"] = r.value ? json(*r.value) : json(nullptr);
      emit(j);
    } else {
      out_ << fica::termination_str(r.verdict);
      if (r.value) out_ << " value " << *r.value;
      out_ << " (" << r.explored << " states)\n";
    }
    switch (r.verdict) {
      case fica::Termination::Terminates: return kOk;
      case fica::Termination::DivergesWithinBound: return kNegative;
      default: return kUnknown;
    }
  }

  int fica_compile() {
    auto f = load_fica();
    auto c = compiler::compile(f.prog.ctx, f.prog.term, f.max);
    std::string text = la::to_json(c.automaton);
    write_file(output_, text, out_);
    if (!output_.empty() && output_ != "-")
      write_file(sidecar_path(output_), compiler::origins_to_json(c), out_);
    if (!lla_out_.empty()) {
      auto bounds = compiler::branching_bound(f.prog.ctx, f.prog.term, f.max);
      auto loc = lla::localize(c.automaton, bounds);
      loc.bounds_source = "computed";
      write_file(lla_out_, lla::to_json(loc), out_);
    }
    if (!output_.empty() && output_ != "-") {
      json j{{"k", c.automaton.k}, {"transitions", c.automaton.trans.size()}};
      json st = json::array();
      for (auto& l : c.automaton.states) st.push_back(l.size());
      j["states"] = st;
      if (s_.json) {
        emit(j);
      } else {
        out_ << "k=" << c.automaton.k << " states=" << st.dump()
             << " transitions=" << c.automaton.trans.size() << "\n";
      }
    }
    return kOk;
  }

  int fica_locality() {
    auto f = load_fica();
    auto nf = fica::normalize(f.prog.ctx, f.prog.term, f.max);
    auto rep = fica::locality(nf);
    if (s_.json) {
      json b = json::object();
      for (auto& [x, d] : rep.binders) b[x] = d;
      emit({{"local", rep.local}, {"while", rep.has_while}, {"binders", b}, {"reason", rep.reason}});
    } else {
      out_ << (rep.local ? "local" : "not local");
      if (!rep.reason.empty()) out_ << ": " << rep.reason;
      out_ << "\n";
      for (auto& [x, d] : rep.binders) out_ << "  " << x << " ade " << d << "\n";
    }
    return rep.local ? kOk : kNegative;
  }

  int fica_bound() {
    auto f = load_fica();
    std::map<int, int> b;
    try {
      b = compiler::branching_bound(f.prog.ctx, f.prog.term, f.max);
    } catch (const fica::FicaError& e) {
      if (s_.json)
        emit({{"local", false}, {"reason", e.what()}});
      else
        out_ << "not local: " << e.what() << "\n";
      return kNegative;
    }
    if (s_.json) {
      json j = json::object();
      for (auto [l, n] : b) j[std::to_string(l)] = n;
      emit({{"local", true}, {"evenBounds", j}});
    } else {
      for (auto [l, n] : b) out_ << "level " << l << ": " << n << "\n";
    }
    return kOk;
  }

  // la ---------------------------------------------------------------------

  void add_la(CLI::App& app) {
    auto* g = app.add_subcommand("la", "leafy automata");
    g->require_subcommand(1);

    auto* c = leaf(*g, "simulate", "enumerate traces", [this] { return la_simulate(); });
    c->add_option("file", input_, "automaton JSON")->required();
    c->add_flag("--accepted", accepted_, "accepted traces only");
    c->add_option("--limit", limit_, "stop after this many traces");

    c = leaf(*g, "member", "replay a trace", [this] { return la_member(); });
    c->add_option("file", input_, "automaton JSON")->required();
    c->add_option("trace", input2_, "trace JSON")->required();

    c = leaf(*g, "tofica", "generate a FICA term", [this] { return la_tofica(); });
    c->add_option("file", input_, "automaton JSON")->required();
    c->add_option("-o,--output", output_, ".fica output (stdout when absent)");

    c = leaf(*g, "play", "decode a trace to a play", [this] { return la_play(); });
    c->add_option("file", input_, "automaton JSON")->required();
    c->add_option("trace", input2_, "trace JSON")->required();
    c->add_option("--type", type_, "validate in the arena of this type");
  }

  la::LeafyAutomaton load_la() { return la::from_json(read_file(input_)); }

  int la_simulate() {
    auto a = load_la();
    json arr = json::array();
    std::size_t n = 0;
    la::enumerate_traces(a, s_.max_len, accepted_, [&](const la::Trace& w) {
      if (w.empty()) return true;
      if (s_.json)
        arr.push_back(trace_json(a, w));
      else
        out_ << la::trace_str(a, w) << "\n";
      return ++n < limit_;
    });
    if (s_.json) emit(arr);
    return kOk;
  }

  int la_member() {
    auto a = load_la();
    auto w = la::trace_from_json(a, read_file(input2_));
    auto r = la::run_trace(a, w);
    const char* status = r.status == la::RunStatus::Accepted ? "accepted"
                         : r.status == la::RunStatus::Trace  ? "trace"
                                                             : "rejected";
    if (s_.json) {
      json j{{"status", status}};
      if (r.status == la::RunStatus::Rejected) j["failedAt"] = r.failed_at, j["reason"] = r.reason;
      emit(j);
    } else {
      out_ << status;
      if (r.status == la::RunStatus::Rejected)
        out_ << " at " << r.failed_at << ": " << r.reason;
      out_ << "\n";
    }
    return r.status == la::RunStatus::Accepted ? kOk : kNegative;
  }

  int la_tofica() {
    auto a = load_la();
    auto g = la2fica::generate_term(a);
    std::string text = "# max " + std::to_string(g.max) + "\n" + fica::print(g.term) + "\n";
    write_file(output_, text, out_);
    if (!output_.empty() && output_ != "-") {
      if (s_.json)
        emit({{"max", g.max}, {"type", fica::type_str(g.type)}});
      else
        out_ << fica::type_str(g.type) << " (max " << g.max << ")\n";
    }
    return kOk;
  }

  int la_play() {
    auto a = load_la();
    auto w = la::trace_from_json(a, read_file(input2_));
    auto p = games::trace_to_play(a, w);
    std::optional<games::Arena> arena;
    games::PlayCheck chk;
    if (!type_.empty()) {
      arena = games::arena_of_type(fica::parse_type(type_), s_.max);
      chk = games::validate_play(*arena, p);
    }
    if (s_.json) {
      json j{{"play", json::parse(games::play_to_json(p))}};
      if (arena) j["valid"] = chk.ok, j["reason"] = chk.reason;
      emit(j);
    } else {
      if (arena) {
        out_ << games::pretty(*arena, p) << "\n";
        out_ << (chk.ok ? "valid" : "invalid at " + std::to_string(chk.index) + ": " + chk.reason)
             << "\n";
      } else {
        for (std::size_t i = 0; i < p.size(); ++i)
          out_ << i << " " << games::move_str(p[i].move) << " -> " << p[i].pointer << "\n";
      }
    }
    return chk.ok ? kOk : kNegative;
  }

  // lla --------------------------------------------------------------------

  void add_lla(CLI::App& app) {
    auto* g = app.add_subcommand("lla", "local leafy automata");
    g->require_subcommand(1);

    auto* c = leaf(*g, "localize", "local presentation", [this] { return lla_localize(); });
    c->add_option("file", input_, "automaton JSON")->required();
    c->add_option("-o,--output", output_, "LLA JSON (stdout when absent)");
    c->add_option("--bound", bounds_, "LEVEL=B branching bound of an even level");
    c->add_option("--verify", verify_, "check the bounds on traces up to this length");

    c = leaf(*g, "emptiness", "decide emptiness", [this] { return lla_emptiness(); });
    c->add_option("file", input_, "LLA JSON")->required();
    c->add_option("--witness", witness_out_, "write the witness trace here");
    c->add_flag("--per-candidate", per_candidate_, "one TEST search per candidate summary");
    c->add_option("--length-bound", length_bound_, "summary length bound (default 2b+1)");
  }

  int lla_localize() {
    auto a = load_la();
    std::map<int, int> b;
    for (auto& s : bounds_) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--bound", "expected LEVEL=B");
      b[std::stoi(s.substr(0, eq))] = std::stoi(s.substr(eq + 1));
    }
    auto loc = lla::localize(a, b);
    int status = kOk;
    json checks = json::array();
    if (verify_ >= 0) {
      for (auto [l, n] : b) {
        auto r = lla::verify_bound(a, l, n, verify_);
        checks.push_back({{"level", l}, {"bound", n}, {"verdict", lla::verdict_str(r.verdict)},
                          {"complete", r.complete}, {"reason", r.reason}});
        if (r.verdict == lla::BoundVerdict::Refuted) status = kNegative;
        else if (r.verdict == lla::BoundVerdict::Unknown && status == kOk) status = kUnknown;
        if (!s_.json)
          err_ << "level " << l << " bound " << n << ": " << lla::verdict_str(r.verdict)
               << (r.reason.empty() ? "" : " (" + r.reason + ")") << "\n";
      }
    }
    write_file(output_, lla::to_json(loc), out_);
    if (s_.json && !output_.empty() && output_ != "-")
      emit({{"exact", loc.exact}, {"checks", checks}});
    return status;
  }

  int lla_emptiness() {
    auto a = lla::from_json(read_file(input_));
    emptiness::Options o;
    o.cap = s_.cap;
    o.jobs = s_.jobs;
    o.per_candidate = per_candidate_;
    o.length_bound = length_bound_;
    o.max_nodes = s_.max_nodes;
    o.max_states = s_.max_states;
    auto r = emptiness::decide_emptiness(a, o);
    if (!witness_out_.empty() && !r.witness.empty())
      write_file(witness_out_, la::trace_to_json(a.local, r.witness), out_);
    if (s_.json) {
      json lv = json::array();
      for (auto& s : r.levels)
        lv.push_back({{"level", s.level}, {"summaries", s.items.size()}, {"complete", s.complete},
                      {"note", s.note}});
      json j{{"verdict", emptiness::verdict_str(r.verdict)}, {"levels", lv},
             {"reason", r.reason}, {"boundsSource", a.bounds_source}};
      j["witness"] = r.witness.empty() ? json(nullptr) : trace_json(a.local, r.witness);
      emit(j);
    } else {
      out_ << emptiness::verdict_str(r.verdict);
      if (!r.reason.empty()) out_ << ": " << r.reason;
      out_ << "\n";
      if (!r.witness.empty()) out_ << la::trace_str(a.local, r.witness) << "\n";
    }
    switch (r.verdict) {
      case emptiness::Verdict::NonEmpty: return kOk;
      case emptiness::Verdict::Empty: return kNegative;
      default: return kUnknown;
    }
  }

  // corpus -----------------------------------------------------------------

  void add_corpus(CLI::App& app) {
    auto* g = app.add_subcommand("corpus", "bundled examples");
    g->require_subcommand(1);
    leaf(*g, "list", "list corpus terms", [this] { return corpus_list(); });
    auto* c = leaf(*g, "build", "write terms and automata", [this] { return corpus_build(); });
    c->add_option("dir", output_, "target directory")->required();
  }

  int corpus_list() {
    json arr = json::array();
    for (auto& t : corpus::terms()) {
      if (s_.json)
        arr.push_back({{"name", t.name}, {"source", t.source}, {"max", t.max}, {"closed", t.closed}});
      else
        out_ << t.name << "\t" << t.source << "\n";
    }
    if (s_.json) emit(arr);
    return kOk;
  }

  int corpus_build() {
    fs::path dir(output_);
    fs::create_directories(dir / "compiled");
    std::size_t files = 0;
    auto put = [&](const fs::path& p, const std::string& text) {
      write_file(p.string(), text, out_);
      ++files;
    };
    for (auto& t : corpus::terms()) {
      std::string head = t.max != 1 ? "# max " + std::to_string(t.max) + "\n" : "";
      put(dir / (t.name + ".fica"), head + t.source + "\n");
      auto prog = fica::parse_program(t.source);
      auto c = compiler::compile(prog.ctx, prog.term, t.max);
      put(dir / "compiled" / (t.name + ".la.json"), la::to_json(c.automaton));
      put(dir / "compiled" / (t.name + ".origins.json"), compiler::origins_to_json(c));
      auto loc = lla::localize(c.automaton, compiler::branching_bound(prog.ctx, prog.term, t.max));
      loc.bounds_source = "computed";
      put(dir / "compiled" / (t.name + ".lla.json"), lla::to_json(loc));
    }
    put(dir / "counter.la.json", la::to_json(corpus::build_counter_la()));
    auto [h1, h2] = corpus::build_halting_las(corpus::halting_machine());
    put(dir / "halting_A1.la.json", la::to_json(h1));
    put(dir / "halting_A2.la.json", la::to_json(h2));
    auto [l1, l2] = corpus::build_halting_las(corpus::looping_machine());
    put(dir / "looping_A1.la.json", la::to_json(l1));
    put(dir / "looping_A2.la.json", la::to_json(l2));
    put(dir / "halting_2cm.la.json", la::to_json(corpus::build_two_counter_2la(corpus::halting_machine())));
    put(dir / "looping_2cm.la.json", la::to_json(corpus::build_two_counter_2la(corpus::looping_machine())));
    if (s_.json)
      emit({{"dir", dir.string()}, {"files", files}});
    else
      out_ << files << " files written to " << dir.string() << "\n";
    return kOk;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return Cli(out, err).main(argc, argv);
}

}  // namespace leafy::cli

#include "leafy/la.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace leafy::la {

bool Transition::operator<(const Transition& o) const {
  return std::tie(level, question, lo, src, letter, dst) <
         std::tie(o.level, o.question, o.lo, o.src, o.letter, o.dst);
}

void LeafyAutomaton::ensure_level(int level) {
  if (level < 0) throw std::invalid_argument("negative level");
  if (static_cast<int>(states.size()) <= level) states.resize(level + 1);
  if (static_cast<int>(state_ids_.size()) < static_cast<int>(states.size()))
    state_ids_.resize(states.size());
  if (level > k) k = level;
}

int LeafyAutomaton::add_letter(const std::string& name, bool question) {
  if (letter_ids_.size() != alphabet.size()) {
    letter_ids_.clear();
    for (std::size_t i = 0; i < alphabet.size(); ++i) letter_ids_[alphabet[i].name] = static_cast<int>(i);
  }
  auto it = letter_ids_.find(name);
  if (it != letter_ids_.end()) {
    if (alphabet[it->second].question != question)
      throw std::invalid_argument("letter " + name + " used as question and answer");
    return it->second;
  }
  alphabet.push_back({name, question});
  int id = static_cast<int>(alphabet.size()) - 1;
  letter_ids_[name] = id;
  return id;
}

int LeafyAutomaton::find_letter(const std::string& name) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i].name == name) return static_cast<int>(i);
  return -1;
}

int LeafyAutomaton::add_state(int level, const std::string& name) {
  ensure_level(level);
  auto& ids = state_ids_[level];
  if (ids.size() != states[level].size()) {
    ids.clear();
    for (std::size_t i = 0; i < states[level].size(); ++i) ids[states[level][i]] = static_cast<int>(i);
  }
  auto it = ids.find(name);
  if (it != ids.end()) return it->second;
  states[level].push_back(name);
  int id = static_cast<int>(states[level].size()) - 1;
  ids[name] = id;
  return id;
}

int LeafyAutomaton::find_state(int level, const std::string& name) const {
  if (level < 0 || level >= static_cast<int>(states.size())) return -1;
  const auto& v = states[level];
  auto it = std::find(v.begin(), v.end(), name);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

bool LeafyAutomaton::add(const Transition& t) {
  int reads = t.level - t.lo + (t.question ? 0 : 1);
  int writes = t.level - t.lo + (t.question ? 1 : 0);
  if (t.lo < 0 || t.lo > t.level || static_cast<int>(t.src.size()) != reads ||
      static_cast<int>(t.dst.size()) != writes)
    throw std::invalid_argument("transition tuple has wrong arity at level " +
                                std::to_string(t.level));
  if (t.letter < 0 || t.letter >= static_cast<int>(alphabet.size()) ||
      alphabet[t.letter].question != t.question)
    throw std::invalid_argument("transition letter does not match its polarity");
  ensure_level(t.level);
  std::vector<int> key{t.level, t.question ? 1 : 0, t.lo, t.letter};
  key.insert(key.end(), t.src.begin(), t.src.end());
  key.push_back(-1);
  key.insert(key.end(), t.dst.begin(), t.dst.end());
  if (!keys_.insert(key).second) return false;
  trans.push_back(t);
  indexed_ = false;
  return true;
}

bool LeafyAutomaton::add(int level, bool question, const std::vector<std::string>& src,
                         const std::string& letter, const std::vector<std::string>& dst,
                         int lo) {
  Transition t;
  t.level = level;
  t.question = question;
  t.lo = lo;
  t.letter = add_letter(letter, question);
  for (std::size_t i = 0; i < src.size(); ++i)
    t.src.push_back(add_state(lo + static_cast<int>(i), src[i]));
  for (std::size_t i = 0; i < dst.size(); ++i)
    t.dst.push_back(add_state(lo + static_cast<int>(i), dst[i]));
  return add(t);
}

std::size_t LeafyAutomaton::num_states() const {
  std::size_t n = 0;
  for (auto& l : states) n += l.size();
  return n;
}

std::size_t LeafyAutomaton::count(int level, bool question) const {
  std::size_t n = 0;
  for (auto& t : trans) n += t.level == level && t.question == question;
  return n;
}

void LeafyAutomaton::rebuild_index() const {
  index_.clear();
  windows_.clear();
  for (std::size_t i = 0; i < trans.size(); ++i) {
    const auto& t = trans[i];
    std::vector<int> key{t.level, t.question ? 1 : 0, t.lo};
    key.insert(key.end(), t.src.begin(), t.src.end());
    index_[key].push_back(static_cast<int>(i));
    auto& w = windows_[{t.level, t.question}];
    if (std::find(w.begin(), w.end(), t.lo) == w.end()) w.push_back(t.lo);
  }
  indexed_ = true;
}

const std::vector<int>& LeafyAutomaton::matching(int level, bool question, int lo,
                                                 const std::vector<int>& src) const {
  static const std::vector<int> none;
  if (!indexed_) rebuild_index();
  std::vector<int> key{level, question ? 1 : 0, lo};
  key.insert(key.end(), src.begin(), src.end());
  auto it = index_.find(key);
  return it == index_.end() ? none : it->second;
}

const std::vector<int>& LeafyAutomaton::windows(int level, bool question) const {
  static const std::vector<int> none;
  if (!indexed_) rebuild_index();
  auto it = windows_.find({level, question});
  return it == windows_.end() ? none : it->second;
}

namespace {
using NamedTuple = std::tuple<int, bool, int, std::vector<std::string>, std::string,
                              std::vector<std::string>>;

std::set<NamedTuple> named(const LeafyAutomaton& a) {
  std::set<NamedTuple> out;
  for (auto& t : a.trans) {
    std::vector<std::string> s, d;
    for (std::size_t i = 0; i < t.src.size(); ++i) s.push_back(a.states[t.lo + i][t.src[i]]);
    for (std::size_t i = 0; i < t.dst.size(); ++i) d.push_back(a.states[t.lo + i][t.dst[i]]);
    out.emplace(t.level, t.question, t.lo, s, a.alphabet[t.letter].name, d);
  }
  return out;
}
}  // namespace

bool structurally_equal(const LeafyAutomaton& a, const LeafyAutomaton& b) {
  if (a.k != b.k) return false;
  std::set<std::pair<std::string, bool>> la, lb;
  for (auto& l : a.alphabet) la.emplace(l.name, l.question);
  for (auto& l : b.alphabet) lb.emplace(l.name, l.question);
  if (la != lb) return false;
  for (int i = 0; i <= a.k; ++i) {
    std::set<std::string> sa, sb;
    if (i < static_cast<int>(a.states.size())) sa.insert(a.states[i].begin(), a.states[i].end());
    if (i < static_cast<int>(b.states.size())) sb.insert(b.states[i].begin(), b.states[i].end());
    if (sa != sb) return false;
  }
  return named(a) == named(b);
}

std::vector<int> Configuration::branch(int d) const {
  std::vector<int> out;
  for (int c = d; c != -1; c = tree.at(c).parent) out.push_back(c);
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {
void canon(const Configuration& c, int d, const std::map<int, std::vector<int>>& kids,
           std::string& out) {
  const Node& n = c.tree.at(d);
  std::vector<std::string> parts;
  auto it = kids.find(d);
  if (it != kids.end()) {
    for (int ch : it->second) {
      std::string s;
      canon(c, ch, kids, s);
      parts.push_back(std::move(s));
    }
  }
  std::sort(parts.begin(), parts.end());
  out += '(';
  out += std::to_string(n.state);
  for (auto& p : parts) out += p;
  out += ')';
}
}  // namespace

std::string Configuration::canonical() const {
  std::map<int, std::vector<int>> kids;
  int root = -1;
  for (auto& [d, n] : tree) {
    if (n.parent == -1) root = d;
    else kids[n.parent].push_back(d);
  }
  std::string out;
  if (root != -1) canon(*this, root, kids, out);
  else if (!seen.empty()) out = "$";  // emptied, no further root
  return out;
}

namespace {

std::vector<int> branch_states(const Configuration& c, const std::vector<int>& br, int lo,
                               int upto) {
  std::vector<int> s;
  for (int i = lo; i <= upto; ++i) s.push_back(c.tree.at(br[i]).state);
  return s;
}

Configuration apply_question(const Configuration& c, const std::vector<int>& br,
                             const Transition& t, int value, int parent) {
  Configuration n = c;
  n.seen.insert(value);
  for (int i = t.lo; i < t.level; ++i) n.tree[br[i]].state = t.dst[i - t.lo];
  Node leaf;
  leaf.parent = parent;
  leaf.level = t.level;
  leaf.state = t.dst.back();
  n.tree[value] = leaf;
  if (parent != -1) n.tree[parent].children++;
  return n;
}

Configuration apply_answer(const Configuration& c, const std::vector<int>& br,
                           const Transition& t, int value) {
  Configuration n = c;
  for (int i = t.lo; i < t.level; ++i) n.tree[br[i]].state = t.dst[i - t.lo];
  int parent = n.tree[value].parent;
  n.tree.erase(value);
  if (parent != -1) n.tree[parent].children--;
  return n;
}

// question transitions available under `parent` (-1: new root)
template <class F>
void each_question(const LeafyAutomaton& a, const Configuration& c, int parent, F&& f) {
  int level = parent == -1 ? 0 : c.tree.at(parent).level + 1;
  if (level > a.k) return;
  std::vector<int> br = parent == -1 ? std::vector<int>{} : c.branch(parent);
  for (int lo : a.windows(level, true)) {
    auto src = branch_states(c, br, lo, level - 1);
    for (int ti : a.matching(level, true, lo, src)) f(ti, br);
  }
}

template <class F>
void each_answer(const LeafyAutomaton& a, const Configuration& c, int d, F&& f) {
  const Node& n = c.tree.at(d);
  if (n.children != 0) return;
  std::vector<int> br = c.branch(d);
  for (int lo : a.windows(n.level, false)) {
    auto src = branch_states(c, br, lo, n.level);
    for (int ti : a.matching(n.level, false, lo, src)) f(ti, br);
  }
}

}  // namespace

std::vector<Configuration> step(const LeafyAutomaton& a, const Configuration& c,
                                const TraceLetter& l) {
  std::vector<Configuration> out;
  if (l.letter < 0 || l.letter >= static_cast<int>(a.alphabet.size())) return out;
  if (a.alphabet[l.letter].question) {
    if (c.seen.count(l.value)) return out;
    if (l.parent == -1) {
      if (!c.seen.empty()) return out;
    } else if (!c.tree.count(l.parent)) {
      return out;
    }
    each_question(a, c, l.parent, [&](int ti, const std::vector<int>& br) {
      if (a.trans[ti].letter == l.letter)
        out.push_back(apply_question(c, br, a.trans[ti], l.value, l.parent));
    });
  } else {
    if (!c.tree.count(l.value)) return out;
    each_answer(a, c, l.value, [&](int ti, const std::vector<int>& br) {
      if (a.trans[ti].letter == l.letter) out.push_back(apply_answer(c, br, a.trans[ti], l.value));
    });
  }
  return out;
}

std::vector<Move> successors(const LeafyAutomaton& a, const Configuration& c) {
  std::vector<Move> out;
  int fresh = c.fresh();
  auto questions = [&](int parent) {
    each_question(a, c, parent, [&](int ti, const std::vector<int>& br) {
      Move m;
      m.letter = {a.trans[ti].letter, fresh, parent};
      m.next = apply_question(c, br, a.trans[ti], fresh, parent);
      m.transition = ti;
      out.push_back(std::move(m));
    });
  };
  if (c.seen.empty()) questions(-1);
  for (auto& [d, n] : c.tree) {
    questions(d);
    each_answer(a, c, d, [&](int ti, const std::vector<int>& br) {
      Move m;
      m.letter = {a.trans[ti].letter, d, -1};
      m.next = apply_answer(c, br, a.trans[ti], d);
      m.transition = ti;
      out.push_back(std::move(m));
    });
  }
  return out;
}

RunResult run_trace(const LeafyAutomaton& a, const Trace& w) {
  RunResult r;
  std::vector<Configuration> cur{Configuration{}};
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::vector<Configuration> next;
    std::set<std::string> keys;
    for (auto& c : cur) {
      for (auto& n : step(a, c, w[i])) {
        std::ostringstream ids;
        for (auto& [d, node] : n.tree) ids << d << ':' << node.state << ',';
        if (keys.insert(ids.str()).second) next.push_back(std::move(n));
      }
    }
    if (next.empty()) {
      r.status = RunStatus::Rejected;
      r.failed_at = static_cast<int>(i);
      const auto& l = w[i];
      std::string name = l.letter >= 0 && l.letter < static_cast<int>(a.alphabet.size())
                             ? a.alphabet[l.letter].name
                             : "?";
      r.reason = "no transition for (" + name + "," + std::to_string(l.value) + ")";
      r.final = cur.front();
      return r;
    }
    cur = std::move(next);
  }
  for (auto& c : cur) {
    if (!w.empty() && c.empty()) {
      r.status = RunStatus::Accepted;
      r.final = c;
      return r;
    }
  }
  r.status = RunStatus::Trace;
  r.final = cur.front();
  return r;
}

bool accepts(const LeafyAutomaton& a, const Trace& w) {
  return run_trace(a, w).status == RunStatus::Accepted;
}

namespace {
bool dfs(const LeafyAutomaton& a, const Configuration& c, Trace& w, int max_len,
         bool accepted_only, const std::function<bool(const Trace&)>& cb) {
  if (!w.empty() && (!accepted_only || c.empty()))
    if (!cb(w)) return false;
  if (static_cast<int>(w.size()) >= max_len) return true;
  for (auto& m : successors(a, c)) {
    w.push_back(m.letter);
    bool go = dfs(a, m.next, w, max_len, accepted_only, cb);
    w.pop_back();
    if (!go) return false;
  }
  return true;
}
}  // namespace

void enumerate_traces(const LeafyAutomaton& a, int max_len, bool accepted_only,
                      const std::function<bool(const Trace&)>& cb) {
  Trace w;
  dfs(a, Configuration{}, w, max_len, accepted_only, cb);
}

std::vector<Trace> accepted_traces(const LeafyAutomaton& a, int max_len, std::size_t limit) {
  std::vector<Trace> out;
  enumerate_traces(a, max_len, true, [&](const Trace& w) {
    out.push_back(w);
    return out.size() < limit;
  });
  return out;
}

namespace {
// even-level node that has children although an answer is enabled on its branch
int even_ready_violation(const LeafyAutomaton& a, const Configuration& c) {
  for (auto& [d, n] : c.tree) {
    if (n.level % 2 != 0 || n.children == 0) continue;
    std::vector<int> br = c.branch(d);
    for (int lo : a.windows(n.level, false)) {
      auto src = branch_states(c, br, lo, n.level);
      if (!a.matching(n.level, false, lo, src).empty()) return d;
    }
  }
  return -1;
}
}  // namespace

EvenReadyReport check_even_ready(const LeafyAutomaton& a, int max_len, std::size_t max_configs) {
  EvenReadyReport rep;
  struct Item {
    Configuration c;
    int parent;
    TraceLetter letter;
    int depth;
  };
  std::vector<Item> items;
  std::set<std::string> seen;
  items.push_back({Configuration{}, -1, {}, 0});
  seen.insert("");
  for (std::size_t i = 0; i < items.size(); ++i) {
    ++rep.configurations;
    int bad = even_ready_violation(a, items[i].c);
    if (bad != -1) {
      rep.ok = false;
      rep.node = bad;
      rep.reason = "node " + std::to_string(bad) + " at level " +
                   std::to_string(items[i].c.tree.at(bad).level) +
                   " can answer while it still has children";
      for (int j = static_cast<int>(i); items[j].parent != -1; j = items[j].parent)
        rep.counterexample.push_back(items[j].letter);
      std::reverse(rep.counterexample.begin(), rep.counterexample.end());
      return rep;
    }
    if (items[i].depth >= max_len) continue;
    for (auto& m : successors(a, items[i].c)) {
      if (m.next.empty()) continue;
      std::string key = m.next.canonical();
      if (!seen.insert(key).second) continue;
      if (items.size() >= max_configs) {
        rep.complete = false;
        return rep;
      }
      items.push_back({std::move(m.next), static_cast<int>(i), m.letter, items[i].depth + 1});
    }
  }
  return rep;
}

Trace random_trace(const LeafyAutomaton& a, int max_len, std::mt19937_64& rng) {
  Trace w;
  Configuration c;
  while (static_cast<int>(w.size()) < max_len) {
    auto moves = successors(a, c);
    if (moves.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    auto& m = moves[pick(rng)];
    w.push_back(m.letter);
    c = std::move(m.next);
  }
  return w;
}

LeafyAutomaton trim(const LeafyAutomaton& a) {
  std::vector<std::vector<char>> live(a.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) live[i].assign(a.states[i].size(), 0);
  std::vector<char> used(a.trans.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t ti = 0; ti < a.trans.size(); ++ti) {
      if (used[ti]) continue;
      const auto& t = a.trans[ti];
      bool ok = true;
      for (std::size_t j = 0; j < t.src.size() && ok; ++j) ok = live[t.lo + j][t.src[j]];
      if (!ok) continue;
      used[ti] = 1;
      changed = true;
      for (std::size_t j = 0; j < t.dst.size(); ++j) live[t.lo + j][t.dst[j]] = 1;
    }
  }
  LeafyAutomaton out;
  for (auto& l : a.alphabet) out.add_letter(l.name, l.question);
  for (std::size_t i = 0; i < a.states.size(); ++i)
    for (std::size_t s = 0; s < a.states[i].size(); ++s)
      if (live[i][s]) out.add_state(static_cast<int>(i), a.states[i][s]);
  out.k = a.k;
  if (static_cast<int>(out.states.size()) <= a.k) out.states.resize(a.k + 1);
  for (std::size_t ti = 0; ti < a.trans.size(); ++ti) {
    if (!used[ti]) continue;
    Transition t = a.trans[ti];
    for (std::size_t j = 0; j < t.src.size(); ++j)
      t.src[j] = out.add_state(t.lo + j, a.states[t.lo + j][t.src[j]]);
    for (std::size_t j = 0; j < t.dst.size(); ++j)
      t.dst[j] = out.add_state(t.lo + j, a.states[t.lo + j][t.dst[j]]);
    out.add(t);
  }
  return out;
}

std::string trace_str(const LeafyAutomaton& a, const Trace& w) {
  std::ostringstream os;
  for (auto& l : w) os << '(' << a.alphabet[l.letter].name << ',' << l.value << ')';
  return os.str();
}

}  // namespace leafy::la

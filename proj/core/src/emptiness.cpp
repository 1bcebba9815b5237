#include "leafy/emptiness.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <unordered_map>

namespace leafy::emptiness {

using la::LeafyAutomaton;
using la::Transition;
using lla::LocalAutomaton;

namespace {

constexpr int kTop = -2;

std::string state_name(const LeafyAutomaton& a, int level, int q) {
  if (q == kBottom) return "⊥";
  return a.states[level][q];
}

// a transition spelled over its full window, with ⊥ below level 0 and the
// levels under a narrower window filled in
struct View {
  int letter;
  std::vector<int> src, dst;

  Pair outer_src() const { return {src[0], src[1]}; }
  Pair outer_dst() const { return {dst[0], dst[1]}; }
};

std::vector<View> views(const LeafyAutomaton& a, int level, bool question) {
  std::vector<View> out;
  if (level > a.k) return out;
  int w = level % 2 ? level - 3 : level - 2;
  int base = std::max(0, w);
  for (auto& t : a.trans) {
    if (t.level != level || t.question != question) continue;
    if (t.lo < base)
      throw std::invalid_argument("transition at level " + std::to_string(level) +
                                  " reads below its window");
    bool empty = false;
    for (int l = base; l < t.lo; ++l) empty |= a.states[l].empty();
    if (empty) continue;
    std::vector<int> choice(t.lo - base, 0);
    while (true) {
      View v{t.letter, {}, {}};
      for (int l = w; l < 0; ++l) {
        v.src.push_back(kBottom);
        v.dst.push_back(kBottom);
      }
      v.src.insert(v.src.end(), choice.begin(), choice.end());
      v.dst.insert(v.dst.end(), choice.begin(), choice.end());
      v.src.insert(v.src.end(), t.src.begin(), t.src.end());
      v.dst.insert(v.dst.end(), t.dst.begin(), t.dst.end());
      out.push_back(std::move(v));
      int i = static_cast<int>(choice.size()) - 1;
      while (i >= 0 && ++choice[i] == static_cast<int>(a.states[base + i].size())) choice[i--] = 0;
      if (i < 0) break;
    }
  }
  return out;
}

struct Views {
  std::vector<View> eq, ea, oq, oa;
  // indices into ea, oq, oa by the state at the summarised level
  std::vector<std::vector<int>> ea_at, oq_at, oa_at;

  Views(const LeafyAutomaton& a, int level)
      : eq(views(a, level, true)),
        ea(views(a, level, false)),
        oq(views(a, level + 1, true)),
        oa(views(a, level + 1, false)) {
    std::size_t n = level <= a.k ? a.states[level].size() : 0;
    auto index = [&](const std::vector<View>& vs, std::vector<std::vector<int>>& at) {
      at.assign(n, {});
      for (std::size_t i = 0; i < vs.size(); ++i) at[vs[i].src[2]].push_back(static_cast<int>(i));
    };
    index(ea, ea_at);
    index(oq, oq_at);
    index(oa, oa_at);
  }
};

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x + 7);
    return h;
  }
};

int bound(const LocalAutomaton& a, int level) {
  auto it = a.even_bounds.find(level);
  if (it == a.even_bounds.end())
    throw std::invalid_argument("no bound for level " + std::to_string(level));
  return it->second;
}

std::vector<Pair> codomain(const LocalAutomaton& a, int level) {
  std::vector<Pair> out;
  if (level == 0) return {{kBottom, kBottom}};
  const auto& s = a.local.states;
  int n0 = static_cast<int>(s[level - 2].size());
  int n1 = static_cast<int>(s[level - 1].size());
  for (int x = 0; x < n0; ++x)
    for (int y = 0; y < n1; ++y) out.push_back({x, y});
  return out;
}

std::vector<int> outer(const Pair& p, int level) {
  if (level == 0) return {};
  return {p.first, p.second};
}

}  // namespace

std::string Summary::str(const LeafyAutomaton& a) const {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s += " ";
    if (level == 0) s += "(⊥,⊥)";
    else
      s += "(" + state_name(a, level - 2, f[i].first) + "," + state_name(a, level - 1, f[i].second) +
           ")";
  }
  return s + "]";
}

int SummarySet::find(const Summary& s) const {
  auto it = std::find(items.begin(), items.end(), s);
  return it == items.end() ? -1 : static_cast<int>(it - items.begin());
}

std::size_t count_candidate_summaries(const LocalAutomaton& a, int level, int length_bound) {
  int l = length_bound >= 0 ? length_bound : bound(a, level) + 1;
  std::size_t p = codomain(a, level).size(), total = 0;
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
  for (int len = 1; len <= l; ++len) {
    std::size_t n = 1;
    for (int i = 0; i < 2 * (len + 1); ++i) {
      if (p && n > inf / p) return inf;
      n *= p;
    }
    if (total > inf - n) return inf;
    total += n;
  }
  return total;
}

std::vector<Summary> enumerate_candidate_summaries(const LocalAutomaton& a, int level,
                                                   int length_bound) {
  int l = length_bound >= 0 ? length_bound : bound(a, level) + 1;
  auto pairs = codomain(a, level);
  std::vector<Summary> out;
  if (pairs.empty()) return out;
  for (int len = 1; len <= l; ++len) {
    int m = 2 * (len + 1);
    std::vector<int> idx(m, 0);
    while (true) {
      Summary s{level, {}};
      for (int i : idx) s.f.push_back(pairs[i]);
      out.push_back(std::move(s));
      int i = m - 1;
      while (i >= 0 && ++idx[i] == static_cast<int>(pairs.size())) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  return out;
}

LeafyAutomaton build_cut(const LocalAutomaton& la_, int level, const Summary& f) {
  const LeafyAutomaton& a = la_.local;
  LeafyAutomaton c;
  for (auto& l : a.alphabet) c.add_letter(l.name, l.question);
  int m = f.maxdom();
  int nq = level <= a.k ? static_cast<int>(a.states[level].size()) : 0;
  auto cut_state = [&](int q, int r) { return q * m + (r - 1); };
  for (int q = 0; q < nq; ++q)
    for (int r = 1; r <= m; ++r) c.add_state(0, a.states[level][q] + "@" + std::to_string(r));
  for (int l = level + 1; l <= a.k; ++l)
    for (auto& s : a.states[l]) c.add_state(l - level, s);
  if (c.states.empty()) c.states.resize(1);

  Views vw(a, level);
  for (auto& v : vw.eq)
    if (m >= 4 && v.outer_src() == f.at(1) && v.outer_dst() == f.at(2))
      c.add(Transition{0, true, 0, {}, v.letter, {cut_state(v.dst[2], 3)}});
  for (auto& v : vw.ea)
    if (m >= 4 && v.outer_src() == f.at(m - 1) && v.outer_dst() == f.at(m))
      c.add(Transition{0, false, 0, {cut_state(v.src[2], m - 1)}, v.letter, {}});
  for (int r = 3; r + 2 < m; r += 2) {
    for (auto& v : vw.oq)
      if (v.outer_src() == f.at(r) && v.outer_dst() == f.at(r + 1))
        c.add(Transition{1, true, 0, {cut_state(v.src[2], r)}, v.letter,
                         {cut_state(v.dst[2], r + 2), v.dst[3]}});
    for (auto& v : vw.oa)
      if (v.outer_src() == f.at(r) && v.outer_dst() == f.at(r + 1))
        c.add(Transition{1, false, 0, {cut_state(v.src[2], r), v.src[3]}, v.letter,
                         {cut_state(v.dst[2], r + 2)}});
  }
  // deeper levels keep their transitions; those reading the cut root carry
  // its use counter along unchanged
  for (auto& t : a.trans) {
    if (t.level < level + 2) continue;
    Transition n = t;
    n.level = t.level - level;
    if (t.lo > level) {
      n.lo = t.lo - level;
      c.add(n);
      continue;
    }
    n.lo = 0;
    for (int r = 1; r <= m; ++r) {
      n.src[0] = cut_state(t.src[0], r);
      n.dst[0] = cut_state(t.dst[0], r);
      c.add(n);
    }
  }
  return c;
}

LeafyAutomaton build_lift(const LocalAutomaton& la_, int level,
                          const std::vector<Summary>& summaries) {
  const LeafyAutomaton& a = la_.local;
  LeafyAutomaton u;
  for (auto& l : a.alphabet) u.add_letter(l.name, l.question);
  int open = u.add_letter("open", true), close = u.add_letter("close", false);
  int tick = u.add_letter("tick", true), tock = u.add_letter("tock", false);
  for (int l = 0; l < level && l <= a.k; ++l)
    for (auto& s : a.states[l]) u.add_state(l, s);
  for (auto& t : a.trans)
    if (t.level < level) u.add(t);
  int dot = u.add_state(level + 1, "•");
  int lo = std::max(0, level - 2);
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const Summary& f = summaries[i];
    int m = f.maxdom();
    if (m < 4) continue;
    auto st = [&](int r) {
      return u.add_state(level, "f" + std::to_string(i) + "#" + std::to_string(r));
    };
    auto with = [&](std::vector<int> v, std::initializer_list<int> more) {
      v.insert(v.end(), more);
      return v;
    };
    u.add(Transition{level, true, lo, outer(f.at(1), level), open,
                     with(outer(f.at(2), level), {st(3)})});
    u.add(Transition{level, false, lo, with(outer(f.at(m - 1), level), {st(m - 1)}), close,
                     outer(f.at(m), level)});
    for (int r = 3; r + 2 < m; r += 2)
      u.add(Transition{level + 1, true, lo, with(outer(f.at(r), level), {st(r)}), tick,
                       with(outer(f.at(r + 1), level), {st(r + 2), dot})});
    u.add(Transition{level + 1, false, lo, with(outer(f.at(m - 1), level), {st(m - 1), dot}), tock,
                     with(outer(f.at(m - 1), level), {st(m - 1)})});
  }
  return u;
}

namespace {

class TestBuilder {
 public:
  TestBuilder(const LocalAutomaton& a, int level, const Summary* fixed, const SummarySet* upper,
              int length_bound, std::size_t max_states)
      : a_(a.local),
        level_(level),
        fixed_(fixed),
        upper_(upper),
        vw_(a.local, level),
        b_(bound(a, level)),
        max_states_(max_states) {
    limit_ = fixed ? fixed->maxdom() : 2 * (length_bound + 1);
    if (upper_)
      for (std::size_t i = 0; i < upper_->items.size(); ++i) {
        const Summary& g = upper_->items[i];
        for (int r = 1; r < g.maxdom(); r += 2) at_[g.at(r)].push_back({static_cast<int>(i), r});
      }
  }

  TestVass run() {
    std::vector<int> src{0, 1, kBottom};
    src.resize(3 + b_, kBottom);
    out_.query.source = id(src);
    while (!todo_.empty() && !out_.truncated) {
      int s = todo_.front();
      todo_.pop_front();
      expand(s);
    }
    out_.v.num_counters = static_cast<int>(out_.counters.size());
    return std::move(out_);
  }

 private:
  const LeafyAutomaton& a_;
  int level_;
  const Summary* fixed_;
  const SummarySet* upper_;
  Views vw_;
  int b_;
  std::size_t max_states_;
  int limit_;
  std::map<Pair, std::vector<std::pair<int, int>>> at_;
  std::unordered_map<std::vector<int>, int, VecHash> ids_;
  std::map<std::tuple<int, int, int>, int> counter_ids_;
  std::deque<int> todo_;
  TestVass out_;

  int id(const std::vector<int>& key) {
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (ids_.size() >= max_states_) {
      out_.truncated = true;
      return -1;
    }
    int s = out_.v.add_state();
    ids_.emplace(key, s);
    out_.keys.push_back(key);
    if (key[0] == 1) {
      out_.query.targets.insert(s);
      if (!fixed_) {
        Summary f{level_, {}};
        for (std::size_t i = 1; i + 1 < key.size(); i += 2) f.f.push_back({key[i], key[i + 1]});
        out_.accepted.emplace(s, std::move(f));
      }
    } else {
      todo_.push_back(s);
    }
    return s;
  }

  int counter(int j, int f, int r) {
    auto key = std::make_tuple(j, f, r);
    auto it = counter_ids_.find(key);
    if (it != counter_ids_.end()) return it->second;
    int c = static_cast<int>(out_.counters.size());
    out_.counters.push_back("children[" + std::to_string(j + 1) + "," + std::to_string(f) + "," +
                            std::to_string(r) + "]");
    counter_ids_.emplace(key, c);
    return c;
  }

  void edge(int from, const std::vector<int>& key, const Rule& rule, std::vector<int> dec = {},
            std::vector<int> inc = {}) {
    int to = id(key);
    if (to < 0) return;
    int label = static_cast<int>(out_.rules.size());
    out_.rules.push_back(rule);
    out_.v.add({from, to, std::move(dec), std::move(inc), label});
  }

  // f(r), f(r+1) agree with the interaction, or are recorded when guessing
  bool frontier(int r, const View& v) const {
    if (!fixed_) return true;
    if (r + 1 > fixed_->maxdom()) return false;
    return fixed_->at(r) == v.outer_src() && fixed_->at(r + 1) == v.outer_dst();
  }

  void record(std::vector<int>& key, const View& v) const {
    if (fixed_) return;
    key.push_back(v.src[0]);
    key.push_back(v.src[1]);
    key.push_back(v.dst[0]);
    key.push_back(v.dst[1]);
  }

  void expand(int s) {
    const std::vector<int> key = out_.keys[s];
    int rhat = key[1], state = key[2];
    auto slot = [&](int j) { return key[3 + j]; };
    if (state == kBottom) {
      if (rhat != 1 || limit_ < 4) return;
      for (auto& v : vw_.eq) {
        if (!frontier(1, v)) continue;
        std::vector<int> n = key;
        n[1] = 3;
        n[2] = v.dst[2];
        record(n, v);
        edge(s, n, {RuleKind::InitRoot, v.letter});
      }
      return;
    }
    if (rhat + 2 < limit_) {
      for (int vi : vw_.oq_at[state]) {
        const View& v = vw_.oq[vi];
        if (!frontier(rhat, v)) continue;
        for (int j = 0; j < b_; ++j) {
          if (slot(j) != kBottom) continue;
          std::vector<int> n = key;
          n[1] = rhat + 2;
          n[2] = v.dst[2];
          n[3 + j] = v.dst[3];
          record(n, v);
          edge(s, n, {RuleKind::AddChild, v.letter, j});
        }
      }
      for (int vi : vw_.oa_at[state]) {
        const View& v = vw_.oa[vi];
        if (!frontier(rhat, v)) continue;
        for (int j = 0; j < b_; ++j) {
          if (slot(j) != v.src[3]) continue;
          std::vector<int> n = key;
          n[1] = rhat + 2;
          n[2] = v.dst[2];
          n[3 + j] = kTop;
          record(n, v);
          edge(s, n, {RuleKind::RemoveChild, v.letter, j});
        }
      }
    }
    if (upper_) {
      for (int j = 0; j < b_; ++j) {
        if (slot(j) < 0) continue;
        auto it = at_.find({state, slot(j)});
        if (it == at_.end()) continue;
        for (auto [fi, r] : it->second) {
          const Summary& g = upper_->items[fi];
          int m = g.maxdom();
          std::vector<int> n = key;
          const Pair& next = g.at(r + 1);
          n[2] = next.first;
          n[3 + j] = next.second;
          if (r == 1) {
            edge(s, n, {RuleKind::AddGrandchild, -1, j, fi, 1}, {}, {counter(j, fi, 3)});
          } else if (r + 2 < m) {
            edge(s, n, {RuleKind::ProgressGrandchild, -1, j, fi, r}, {counter(j, fi, r)},
                 {counter(j, fi, r + 2)});
          } else if (r + 1 == m) {
            edge(s, n, {RuleKind::RemoveGrandchild, -1, j, fi, r}, {counter(j, fi, r)});
          }
        }
      }
    }
    for (int j = 0; j < b_; ++j)
      if (slot(j) != kBottom && slot(j) != kTop) return;
    for (int vi : vw_.ea_at[state]) {
      const View& v = vw_.ea[vi];
      if (fixed_ && rhat != fixed_->maxdom() - 1) continue;
      if (!frontier(rhat, v)) continue;
      std::vector<int> n{1};
      if (!fixed_) {
        n.insert(n.end(), key.begin() + 3 + b_, key.end());
        record(n, v);
      }
      edge(s, n, {RuleKind::AcceptRoot, v.letter});
    }
  }
};

}  // namespace

TestVass build_test_vass(const LocalAutomaton& a, int level, const Summary& fhat,
                         const SummarySet* upper, std::size_t max_states) {
  return TestBuilder(a, level, &fhat, upper, 0, max_states).run();
}

TestVass build_test_vass_guess(const LocalAutomaton& a, int level, const SummarySet* upper,
                               int length_bound, std::size_t max_states) {
  return TestBuilder(a, level, nullptr, upper, length_bound, max_states).run();
}

vass::Result vass_reach(const TestVass& t, int cap, std::size_t max_nodes) {
  auto r = vass::reach(t.v, t.query, cap, max_nodes);
  if (t.truncated && r.verdict == vass::Verdict::Unreachable) {
    r.verdict = vass::Verdict::Unknown;
    r.closed = false;
  }
  return r;
}

Witness stitch(const TestVass& t, const std::vector<int>& firing, const SummarySet* upper) {
  struct Instance {
    int fi;
    std::map<int, int> ids;
  };
  Witness w;
  std::vector<WLetter> buf;
  int next = 1;
  std::map<int, int> child;
  std::map<std::tuple<int, int, int>, std::deque<Instance>> pending;
  auto frontier = [&](WLetter l) {
    w.push_back({std::move(buf), l});
    buf.clear();
  };
  auto emit = [&](Instance& in, int seg, int j) {
    const Segment& s = upper->witnesses.at(in.fi).at(seg);
    auto map = [&](int x) {
      if (x == -1) return child.at(j);
      auto it = in.ids.find(x);
      if (it != in.ids.end()) return it->second;
      return in.ids[x] = next++;
    };
    auto put = [&](const WLetter& l) {
      buf.push_back({l.letter, map(l.node), l.question ? map(l.parent) : -1, l.question});
    };
    for (auto& l : s.internal) put(l);
    put(s.frontier);
  };
  auto take = [&](int j, int fi, int r) {
    auto& q = pending.at({j, fi, r});
    Instance in = std::move(q.front());
    q.pop_front();
    return in;
  };
  for (int ti : firing) {
    const Rule& r = t.rules.at(t.v.trans.at(ti).label);
    switch (r.kind) {
      case RuleKind::InitRoot: frontier({r.letter, 0, -1, true}); break;
      case RuleKind::AcceptRoot: frontier({r.letter, 0, -1, false}); break;
      case RuleKind::AddChild:
        child[r.j] = next++;
        frontier({r.letter, child[r.j], 0, true});
        break;
      case RuleKind::RemoveChild: frontier({r.letter, child.at(r.j), -1, false}); break;
      case RuleKind::AddGrandchild: {
        Instance in{r.summary, {{0, next++}}};
        emit(in, 0, r.j);
        pending[{r.j, r.summary, 3}].push_back(std::move(in));
        break;
      }
      case RuleKind::ProgressGrandchild: {
        Instance in = take(r.j, r.summary, r.r);
        emit(in, (r.r - 1) / 2, r.j);
        pending[{r.j, r.summary, r.r + 2}].push_back(std::move(in));
        break;
      }
      case RuleKind::RemoveGrandchild: {
        Instance in = take(r.j, r.summary, r.r);
        emit(in, (r.r - 1) / 2, r.j);
        break;
      }
    }
  }
  return w;
}

la::Trace flatten(const Witness& w) {
  la::Trace out;
  auto put = [&](const WLetter& l) {
    out.push_back({l.letter, l.node, l.question ? l.parent : -1});
  };
  for (auto& s : w) {
    for (auto& l : s.internal) put(l);
    put(s.frontier);
  }
  return out;
}

namespace {

void sort_set(SummarySet& s) {
  std::vector<std::size_t> order(s.items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) {
              if (s.items[x].f.size() != s.items[y].f.size())
                return s.items[x].f.size() < s.items[y].f.size();
              return s.items[x] < s.items[y];
            });
  SummarySet out{s.level, {}, {}, s.complete, s.note};
  for (auto i : order) {
    out.items.push_back(std::move(s.items[i]));
    out.witnesses.push_back(std::move(s.witnesses[i]));
  }
  s = std::move(out);
}

}  // namespace

SummarySet compute_summaries(const LocalAutomaton& a, int level, const SummarySet* upper,
                             const Options& opt) {
  SummarySet s;
  s.level = level;
  int b = bound(a, level);
  int l = opt.length_bound >= 0 ? opt.length_bound : 2 * b + 1;
  if (upper && !upper->complete) {
    s.complete = false;
    s.note = "summaries at level " + std::to_string(upper->level) + " are partial";
  }
  if (opt.per_candidate) {
    std::size_t n = count_candidate_summaries(a, level, l);
    if (n > opt.max_candidates) {
      s.complete = false;
      s.note = std::to_string(n) + " candidates exceed the limit";
      return s;
    }
    auto cands = enumerate_candidate_summaries(a, level, l);
    std::vector<std::optional<Witness>> found(cands.size());
    std::vector<char> unknown(cands.size(), 0);
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
      for (std::size_t i; (i = cursor++) < cands.size();) {
        auto t = build_test_vass(a, level, cands[i], upper, opt.max_states);
        auto r = vass_reach(t, opt.cap, opt.max_nodes);
        if (r.verdict == vass::Verdict::Reachable) found[i] = stitch(t, r.witness, upper);
        else if (r.verdict == vass::Verdict::Unknown) unknown[i] = 1;
      }
    };
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < jobs; ++i) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (unknown[i]) s.complete = false;
      if (found[i]) {
        s.items.push_back(cands[i]);
        s.witnesses.push_back(std::move(*found[i]));
      }
    }
  } else {
    auto t = build_test_vass_guess(a, level, upper, l, opt.max_states);
    vass::AllTargets all;
    if (opt.first_only) {
      auto r = vass_reach(t, opt.cap, opt.max_nodes);
      if (r.verdict == vass::Verdict::Reachable) all.witnesses[r.target] = r.witness;
      all.complete = r.verdict == vass::Verdict::Unreachable;
      all.cap_hit = r.cap_hit;
    } else {
      all = vass::reach_all(t.v, t.query, opt.cap, opt.max_nodes);
    }
    for (auto& [st, firing] : all.witnesses) {
      s.items.push_back(t.accepted.at(st));
      s.witnesses.push_back(stitch(t, firing, upper));
    }
    if (t.truncated || !all.complete) {
      s.complete = false;
      if (s.note.empty())
        s.note = t.truncated               ? "control state limit reached"
                 : !all.witnesses.empty() && opt.first_only ? "stopped at the first summary"
                 : all.cap_hit ? "counter cap reached"
                               : "configuration limit reached";
    }
  }
  sort_set(s);
  return s;
}

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::NonEmpty: return "NonEmpty";
    case Verdict::Empty: return "Empty";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

Result decide_emptiness(const LocalAutomaton& a, const Options& opt) {
  Result res;
  int k = a.local.k;
  int top = k % 2 ? k - 1 : k;
  for (int l = 0; l <= top; l += 2)
    if (!a.even_bounds.count(l)) {
      res.reason = "no bound for level " + std::to_string(l);
      return res;
    }
  res.levels.reserve(top / 2 + 1);
  for (int l = top; l >= 0; l -= 2) {
    Options o = opt;
    o.first_only = l == 0;
    res.levels.push_back(
        compute_summaries(a, l, res.levels.empty() ? nullptr : &res.levels.back(), o));
  }
  const SummarySet& root = res.levels.back();
  if (!root.items.empty()) {
    res.witness = flatten(root.witnesses.front());
    auto run = la::run_trace(a.local, res.witness);
    res.replayed = run.status == la::RunStatus::Accepted;
    if (res.replayed) {
      res.verdict = Verdict::NonEmpty;
    } else {
      res.reason = "witness does not replay: " + run.reason;
    }
    return res;
  }
  bool exact = std::all_of(res.levels.begin(), res.levels.end(),
                           [](const SummarySet& s) { return s.complete; });
  if (exact) {
    res.verdict = Verdict::Empty;
    return res;
  }
  for (auto& s : res.levels)
    if (!s.complete) {
      res.reason = "level " + std::to_string(s.level) + ": " + s.note;
      break;
    }
  return res;
}

}  // namespace leafy::emptiness

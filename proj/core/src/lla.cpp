#include "leafy/lla.hpp"

#include <algorithm>
#include <json.hpp>

namespace leafy::lla {

using la::LeafyAutomaton;
using la::Transition;

int window_lo(int level) { return std::max(0, level % 2 ? level - 3 : level - 2); }

NotLocal::NotLocal(int level, std::string tuple)
    : std::runtime_error("transition at level " + std::to_string(level) +
                         " changes states outside its window: " + tuple),
      level(level),
      tuple(std::move(tuple)) {}

namespace {

std::string tuple_str(const LeafyAutomaton& a, const Transition& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.src.size(); ++i) s += (i ? "," : "") + a.states[t.lo + i][t.src[i]];
  s += ") -" + a.alphabet[t.letter].name + "-> (";
  for (std::size_t i = 0; i < t.dst.size(); ++i) s += (i ? "," : "") + a.states[t.lo + i][t.dst[i]];
  return s + ")";
}

LeafyAutomaton shell(const LeafyAutomaton& a) {
  LeafyAutomaton out;
  for (auto& l : a.alphabet) out.add_letter(l.name, l.question);
  for (std::size_t i = 0; i < a.states.size(); ++i)
    for (auto& s : a.states[i]) out.add_state(static_cast<int>(i), s);
  out.k = a.k;
  if (static_cast<int>(out.states.size()) <= a.k) out.states.resize(a.k + 1);
  return out;
}

}  // namespace

LocalAutomaton localize(const LeafyAutomaton& a, std::map<int, int> even_bounds) {
  LocalAutomaton r;
  r.base = a;
  r.local = shell(a);
  r.even_bounds = std::move(even_bounds);
  std::map<Transition, std::size_t> covers;
  for (auto& t : a.trans) {
    int w = window_lo(t.level);
    if (t.lo >= w) {
      r.local.add(t);
      continue;
    }
    int cut = w - t.lo;
    for (int i = 0; i < cut; ++i)
      if (t.src[i] != t.dst[i]) throw NotLocal(t.level, tuple_str(a, t));
    Transition n = t;
    n.lo = w;
    n.src.assign(t.src.begin() + cut, t.src.end());
    n.dst.assign(t.dst.begin() + cut, t.dst.end());
    r.local.add(n);
    ++covers[n];
  }
  for (auto& [n, count] : covers) {
    std::size_t full = 1;
    for (int l = 0; l < n.lo; ++l) full *= a.states[l].size();
    // a windowed tuple that came from a lo=0 automaton stands for every prefix
    if (count != full) {
      r.exact = false;
      break;
    }
  }
  return r;
}

LeafyAutomaton expand(const LeafyAutomaton& local) {
  LeafyAutomaton out = shell(local);
  for (auto& t : local.trans) {
    if (t.lo == 0) {
      out.add(t);
      continue;
    }
    std::vector<int> prefix(t.lo, 0);
    bool empty = false;
    for (int l = 0; l < t.lo; ++l) empty |= local.states[l].empty();
    if (empty) continue;
    while (true) {
      Transition n = t;
      n.lo = 0;
      n.src.insert(n.src.begin(), prefix.begin(), prefix.end());
      n.dst.insert(n.dst.begin(), prefix.begin(), prefix.end());
      out.add(n);
      int i = t.lo - 1;
      while (i >= 0 && ++prefix[i] == static_cast<int>(local.states[i].size())) prefix[i--] = 0;
      if (i < 0) break;
    }
  }
  return out;
}

std::string verdict_str(BoundVerdict v) {
  switch (v) {
    case BoundVerdict::Verified: return "Verified";
    case BoundVerdict::Refuted: return "Refuted";
    case BoundVerdict::Unknown: return "Unknown";
  }
  return "?";
}

BoundReport verify_bound(const LeafyAutomaton& a, int level, int b, int max_len,
                         std::size_t max_configs) {
  BoundReport rep;
  struct Item {
    la::Configuration c;
    std::map<int, int> made;  // children created so far by nodes at `level`
    int parent;
    la::TraceLetter letter;
    int depth;
  };
  auto key = [&](const la::Configuration& c, const std::map<int, int>& made) {
    la::Configuration tmp = c;
    for (auto& [d, n] : tmp.tree) {
      auto it = made.find(d);
      n.state = n.state * (b + 2) + (it == made.end() ? 0 : it->second);
    }
    return tmp.canonical();
  };
  auto witness = [&](const std::vector<Item>& items, int i, const la::TraceLetter& last) {
    la::Trace w{last};
    for (int j = i; items[j].parent != -1; j = items[j].parent) w.push_back(items[j].letter);
    std::reverse(w.begin(), w.end());
    return w;
  };
  std::vector<Item> items;
  std::set<std::string> seen;
  items.push_back({la::Configuration{}, {}, -1, {}, 0});
  seen.insert("");
  bool closed = true;
  for (std::size_t i = 0; i < items.size(); ++i) {
    ++rep.configurations;
    auto moves = la::successors(a, items[i].c);
    if (items[i].depth >= max_len) {
      if (!moves.empty()) closed = false;
      continue;
    }
    for (auto& m : moves) {
      std::map<int, int> made = items[i].made;
      const la::TraceLetter& l = m.letter;
      if (a.alphabet[l.letter].question) {
        if (l.parent != -1 && items[i].c.tree.at(l.parent).level == level) {
          if (++made[l.parent] > b) {
            rep.verdict = BoundVerdict::Refuted;
            rep.witness = witness(items, static_cast<int>(i), l);
            rep.reason = "node " + std::to_string(l.parent) + " at level " + std::to_string(level) +
                         " creates " + std::to_string(b + 1) + " children";
            return rep;
          }
        }
      } else {
        made.erase(l.value);
      }
      if (m.next.empty()) continue;
      std::string k = key(m.next, made);
      if (!seen.insert(k).second) continue;
      if (items.size() >= max_configs) {
        rep.verdict = BoundVerdict::Unknown;
        rep.reason = "configuration limit reached";
        return rep;
      }
      items.push_back({std::move(m.next), std::move(made), static_cast<int>(i), l,
                       items[i].depth + 1});
    }
  }
  rep.verdict = BoundVerdict::Verified;
  rep.complete = closed;
  rep.reason = closed ? "reachable graph closed" : "no violation up to length " + std::to_string(max_len);
  return rep;
}

void Genealogy::add(const la::TraceLetter& l) {
  if (parent.count(l.value)) return;
  parent[l.value] = l.parent;
  level[l.value] = l.parent == -1 ? 0 : level.at(l.parent) + 1;
}

std::set<int> Genealogy::domain(int value) const {
  std::set<int> d;
  int up = level.at(value) % 2 ? 3 : 2;
  for (int v = value, i = 0; v != -1 && i <= up; v = parent.at(v), ++i) d.insert(v);
  return d;
}

Genealogy genealogy(const la::Trace& w) {
  Genealogy g;
  for (auto& l : w) g.add(l);
  return g;
}

bool independent(const Genealogy& g, const la::TraceLetter& a, const la::TraceLetter& b) {
  auto da = g.domain(a.value), db = g.domain(b.value);
  for (int v : da)
    if (db.count(v)) return false;
  return true;
}

std::string to_json(const LocalAutomaton& l, int indent) {
  auto j = nlohmann::json::parse(la::to_json(l.base, -1));
  nlohmann::json bounds = nlohmann::json::object();
  for (auto& [lvl, b] : l.even_bounds) bounds[std::to_string(lvl)] = b;
  j["evenBounds"] = bounds;
  j["boundsSource"] = l.bounds_source;
  auto local = nlohmann::json::parse(la::to_json(l.local, -1));
  j["localPresentation"] = {{"deltaQ", local["deltaQ"]}, {"deltaA", local["deltaA"]},
                            {"exact", l.exact}};
  return j.dump(indent);
}

LocalAutomaton from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  std::map<int, int> bounds;
  if (j.contains("evenBounds"))
    for (auto& [k, v] : j["evenBounds"].items()) bounds[std::stoi(k)] = v.get<int>();
  LeafyAutomaton base = la::from_json(text);
  LocalAutomaton r;
  if (j.contains("localPresentation")) {
    nlohmann::json lj = j;
    lj["deltaQ"] = j["localPresentation"].at("deltaQ");
    lj["deltaA"] = j["localPresentation"].at("deltaA");
    r.base = base;
    r.local = la::from_json(lj.dump());
    r.even_bounds = bounds;
    r.exact = j["localPresentation"].value("exact", true);
  } else {
    r = localize(base, bounds);
  }
  r.bounds_source = j.value("boundsSource", "asserted");
  return r;
}

}  // namespace leafy::lla

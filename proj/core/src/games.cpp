#include "leafy/games.hpp"

#include <cctype>
#include <deque>
#include <json.hpp>
#include <map>
#include <sstream>
#include <stdexcept>

namespace leafy::games {

using fica::TypeKind;
using fica::TypeP;

namespace {
std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace

std::string path_str(const std::vector<std::string>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += path[i];
  }
  return s;
}

AMove parse_move(const std::string& s) {
  AMove m;
  if (s == "eq") {
    m.eps = Eps::Question;
    return m;
  }
  if (s == "ea") {
    m.eps = Eps::Answer;
    return m;
  }
  auto caret = s.find('^');
  m.base = s.substr(0, caret);
  if (m.base.empty()) throw std::invalid_argument("bad move " + s);
  if (caret == std::string::npos) return m;
  std::string tag = s.substr(caret + 1);
  if (!tag.empty() && tag.front() == '(') {
    auto comma = tag.rfind(',');
    if (tag.back() != ')' || comma == std::string::npos) throw std::invalid_argument("bad tag " + s);
    m.rho = std::stoi(tag.substr(comma + 1, tag.size() - comma - 2));
    tag = tag.substr(1, comma - 1);
  }
  if (tag.empty()) throw std::invalid_argument("empty tag in " + s);
  m.path = split(tag, '.');
  return m;
}

std::string move_str(const AMove& m) {
  if (m.eps == Eps::Question) return "eq";
  if (m.eps == Eps::Answer) return "ea";
  if (m.path.empty()) return m.base;
  if (m.rho == 0) return m.base + "^" + path_str(m.path);
  return m.base + "^(" + path_str(m.path) + "," + std::to_string(m.rho) + ")";
}

bool is_question_base(const std::string& b) {
  return b == "run" || b == "q" || b == "read" || b == "grab" || b == "release" ||
         b.rfind("write(", 0) == 0;
}

bool answers(const std::string& ans, const std::string& q) {
  if (ans == "done") return q == "run";
  if (ans == "ok") return q == "grab" || q == "release" || q.rfind("write(", 0) == 0;
  if (!ans.empty() && std::isdigit(static_cast<unsigned char>(ans[0]))) return q == "q" || q == "read";
  return false;
}

std::vector<std::string> question_moves(TypeKind base, int max) {
  switch (base) {
    case TypeKind::Com: return {"run"};
    case TypeKind::Exp: return {"q"};
    case TypeKind::Var: {
      std::vector<std::string> v{"read"};
      for (int i = 0; i <= max; ++i) v.push_back("write(" + std::to_string(i) + ")");
      return v;
    }
    case TypeKind::Sem: return {"grab", "release"};
    default: return {};
  }
}

std::vector<std::string> answer_moves(TypeKind base, int max) {
  switch (base) {
    case TypeKind::Com: return {"done"};
    case TypeKind::Exp: {
      std::vector<std::string> v;
      for (int i = 0; i <= max; ++i) v.push_back(std::to_string(i));
      return v;
    }
    case TypeKind::Var: {
      std::vector<std::string> v;
      for (int i = 0; i <= max; ++i) v.push_back(std::to_string(i));
      v.push_back("ok");
      return v;
    }
    case TypeKind::Sem: return {"ok"};
    default: return {};
  }
}

int Arena::find(const std::string& base, const std::vector<std::string>& path) const {
  for (std::size_t i = 0; i < moves.size(); ++i)
    if (moves[i].base == base && moves[i].path == path) return static_cast<int>(i);
  return -1;
}

bool Arena::enables(int m, int n) const {
  const auto& a = moves[m];
  const auto& b = moves[n];
  if (!a.question) return false;
  if (b.question) {
    if (b.path.empty()) return false;
    std::vector<std::string> up(b.path.begin(), b.path.end() - 1);
    return a.path == up;
  }
  return a.path == b.path && answers(b.base, a.base);
}

namespace {
void add_type(Arena& a, const TypeP& t, std::vector<std::string>& path, int max) {
  TypeP beta = fica::type_result(t);
  Owner qo = path.size() % 2 == 0 ? Owner::O : Owner::P;
  Owner ao = qo == Owner::O ? Owner::P : Owner::O;
  for (auto& m : question_moves(beta->kind, max))
    a.moves.push_back({m, path, true, qo, path.empty()});
  for (auto& m : answer_moves(beta->kind, max)) a.moves.push_back({m, path, false, ao, false});
  auto args = fica::type_args(t);
  int h = static_cast<int>(args.size());
  for (int j = 0; j < h; ++j) {
    path.push_back(std::to_string(h - j));
    add_type(a, args[j], path, max);
    path.pop_back();
  }
}
}  // namespace

Arena arena_of_type(const TypeP& t, int max) {
  Arena a;
  std::vector<std::string> path;
  add_type(a, t, path, max);
  return a;
}

Arena arena_of_judgment(const fica::Context& ctx, const TypeP& t, int max) {
  Arena a = arena_of_type(t, max);
  for (auto& [x, ty] : ctx) {
    std::vector<std::string> path{x};
    add_type(a, ty, path, max);
  }
  return a;
}

PlayCheck validate_play(const Arena& a, const Play& p) {
  PlayCheck r;
  std::vector<char> answered(p.size(), 0);
  std::vector<int> ids(p.size(), -1);
  auto fail = [&](std::size_t i, const std::string& why) {
    r.ok = false;
    r.index = static_cast<int>(i);
    r.reason = "move " + std::to_string(i) + " (" + move_str(p[i].move) + "): " + why;
    return r;
  };
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& m = p[i];
    if (m.move.eps != Eps::None) return fail(i, "epsilon move in a play");
    int id = a.find(m.move);
    if (id < 0) return fail(i, "not a move of the arena");
    ids[i] = id;
    const auto& am = a.moves[id];
    if (i == 0 && !am.initial) return fail(i, "play must start with an initial move");
    if (am.initial) {
      if (m.pointer != -1) return fail(i, "initial move with a pointer");
      continue;
    }
    if (m.pointer < 0 || m.pointer >= static_cast<int>(i)) return fail(i, "missing justifier");
    int j = m.pointer;
    if (!a.enables(ids[j], id)) return fail(i, "justifier does not enable the move");
    if (answered[j]) return fail(i, "justifier is not pending (FORK)");
    if (!am.question) {
      for (std::size_t k = j + 1; k < i; ++k)
        if (p[k].pointer == j && a.moves[ids[k]].question && !answered[k])
          return fail(i, "question " + std::to_string(k) + " still pending (WAIT)");
      answered[j] = 1;
    }
  }
  return r;
}

Play trace_to_play(const la::LeafyAutomaton& a, const la::Trace& w) {
  struct Info {
    int parent = -1;
    int pos = -1;  // position in the play, -1 for epsilon
    bool eps = false;
  };
  std::map<int, Info> info;
  Play out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& l = w[i];
    const auto& letter = a.alphabet.at(l.letter);
    AMove m = parse_move(letter.name);
    if (letter.question) {
      if (info.count(l.value)) throw std::invalid_argument("data value reused at " + std::to_string(i));
      Info in;
      in.parent = l.parent;
      in.eps = m.eps != Eps::None;
      int ptr = -1;
      if (l.parent != -1 && !in.eps) {
        int anc = l.parent;
        for (int s = 0; s < m.rho && anc != -1; ++s) {
          auto it = info.find(anc);
          anc = it == info.end() ? -1 : it->second.parent;
        }
        if (anc == -1 || !info.count(anc))
          throw std::invalid_argument("pointer leaves the tree at " + std::to_string(i));
        const Info& target = info.at(anc);
        if (target.eps) throw std::invalid_argument("pointer to an epsilon move at " + std::to_string(i));
        ptr = target.pos;
      }
      if (!in.eps) {
        in.pos = static_cast<int>(out.size());
        out.push_back({m, ptr});
      }
      info[l.value] = in;
    } else {
      auto it = info.find(l.value);
      if (it == info.end()) throw std::invalid_argument("answer to unseen value at " + std::to_string(i));
      if (m.eps != Eps::None) continue;
      if (it->second.eps) throw std::invalid_argument("answer to an epsilon question at " + std::to_string(i));
      out.push_back({m, it->second.pos});
    }
  }
  return out;
}

std::string play_key(const Play& p) {
  std::string s;
  for (auto& m : p) {
    s += move_str(m.move);
    s += '@';
    s += std::to_string(m.pointer);
    s += ' ';
  }
  return s;
}

std::vector<Play> saturation_closure_plays(const Arena& a, const std::vector<Play>& plays,
                                           std::size_t maxlen) {
  std::vector<Play> out;
  std::set<std::string> seen;
  std::deque<Play> queue;
  for (auto& p : plays) {
    if (p.size() > maxlen || !validate_play(a, p).ok) continue;
    if (seen.insert(play_key(p)).second) {
      queue.push_back(p);
      out.push_back(p);
    }
  }
  while (!queue.empty()) {
    Play p = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      int x = a.find(p[i].move), y = a.find(p[i + 1].move);
      bool ok = a.moves[y].owner == Owner::O || a.moves[x].owner == Owner::P;
      if (!ok) continue;
      Play q = p;
      std::swap(q[i], q[i + 1]);
      for (auto& m : q) {
        if (m.pointer == static_cast<int>(i)) m.pointer = static_cast<int>(i + 1);
        else if (m.pointer == static_cast<int>(i + 1)) m.pointer = static_cast<int>(i);
      }
      if (!validate_play(a, q).ok) continue;
      if (seen.insert(play_key(q)).second) {
        queue.push_back(q);
        out.push_back(q);
      }
    }
  }
  return out;
}

std::set<std::string> saturation_closure(const Arena& a, const std::vector<Play>& plays,
                                         std::size_t maxlen) {
  std::set<std::string> out;
  for (auto& p : saturation_closure_plays(a, plays, maxlen)) out.insert(play_key(p));
  return out;
}

std::string pretty(const Arena& a, const Play& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << "  ";
    int id = a.find(p[i].move);
    os << i << ':' << move_str(p[i].move);
    if (id >= 0) os << (a.moves[id].owner == Owner::O ? "[O]" : "[P]");
    if (p[i].pointer >= 0) os << "<-" << p[i].pointer;
  }
  return os.str();
}

std::string play_to_json(const Play& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& m : p) {
    nlohmann::json e;
    e["move"] = move_str(m.move);
    if (m.pointer >= 0) e["pointer"] = m.pointer;
    else e["pointer"] = nullptr;
    arr.push_back(e);
  }
  return arr.dump();
}

Play play_from_json(const std::string& text) {
  Play p;
  for (auto& e : nlohmann::json::parse(text)) {
    PlayMove m;
    m.move = parse_move(e.at("move").get<std::string>());
    m.pointer = e.at("pointer").is_null() ? -1 : e.at("pointer").get<int>();
    p.push_back(m);
  }
  return p;
}

}  // namespace leafy::games

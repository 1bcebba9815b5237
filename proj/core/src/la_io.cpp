#include <json.hpp>

#include "leafy/la.hpp"

namespace leafy::la {

using nlohmann::json;

std::string to_json(const LeafyAutomaton& a, int indent) {
  json j;
  json qs = json::array(), as = json::array();
  for (auto& l : a.alphabet) (l.question ? qs : as).push_back(l.name);
  j["alphabet"] = {{"questions", qs}, {"answers", as}};
  j["k"] = a.k;
  json st = json::array();
  for (int i = 0; i <= a.k; ++i)
    st.push_back(i < static_cast<int>(a.states.size()) ? json(a.states[i]) : json::array());
  j["states"] = st;
  json dq = json::array(), da = json::array();
  for (auto& t : a.trans) {
    json e;
    e["level"] = t.level;
    json src = json::array(), dst = json::array();
    for (std::size_t i = 0; i < t.src.size(); ++i) src.push_back(a.states[t.lo + i][t.src[i]]);
    for (std::size_t i = 0; i < t.dst.size(); ++i) dst.push_back(a.states[t.lo + i][t.dst[i]]);
    e["src"] = src;
    e["tag"] = a.alphabet[t.letter].name;
    e["dst"] = dst;
    if (t.lo != 0) e["from"] = t.lo;
    (t.question ? dq : da).push_back(e);
  }
  j["deltaQ"] = dq;
  j["deltaA"] = da;
  return j.dump(indent);
}

namespace {
void read_delta(LeafyAutomaton& a, const json& arr, bool question) {
  for (auto& e : arr) {
    int level = e.at("level").get<int>();
    int lo = e.value("from", 0);
    a.add(level, question, e.at("src").get<std::vector<std::string>>(),
          e.at("tag").get<std::string>(), e.at("dst").get<std::vector<std::string>>(), lo);
  }
}
}  // namespace

LeafyAutomaton from_json(const std::string& text) {
  json j = json::parse(text);
  LeafyAutomaton a;
  for (auto& q : j.at("alphabet").at("questions")) a.add_letter(q.get<std::string>(), true);
  for (auto& q : j.at("alphabet").at("answers")) a.add_letter(q.get<std::string>(), false);
  int k = j.at("k").get<int>();
  auto& st = j.at("states");
  for (std::size_t i = 0; i < st.size(); ++i)
    for (auto& s : st[i]) a.add_state(static_cast<int>(i), s.get<std::string>());
  if (static_cast<int>(a.states.size()) <= k) a.states.resize(k + 1);
  a.k = k;
  auto letters = a.alphabet.size();
  auto states = a.num_states();
  read_delta(a, j.at("deltaQ"), true);
  read_delta(a, j.at("deltaA"), false);
  if (a.k != k) throw std::invalid_argument("transition above declared level k");
  if (a.alphabet.size() != letters) throw std::invalid_argument("undeclared tag in delta");
  if (a.num_states() != states) throw std::invalid_argument("undeclared state in delta");
  for (auto& t : a.trans)
    if (a.alphabet[t.letter].question != t.question)
      throw std::invalid_argument("tag " + a.alphabet[t.letter].name + " used with both polarities");
  return a;
}

std::string trace_to_json(const LeafyAutomaton& a, const Trace& w) {
  json arr = json::array();
  for (auto& l : w) {
    json e;
    e["tag"] = a.alphabet[l.letter].name;
    e["value"] = l.value;
    if (a.alphabet[l.letter].question && l.parent != -1) e["parent"] = l.parent;
    else e["parent"] = nullptr;
    arr.push_back(e);
  }
  return arr.dump();
}

Trace trace_from_json(const LeafyAutomaton& a, const std::string& text) {
  json arr = json::parse(text);
  Trace w;
  for (auto& e : arr) {
    TraceLetter l;
    std::string tag = e.at("tag").get<std::string>();
    l.letter = a.find_letter(tag);
    if (l.letter < 0) throw std::invalid_argument("unknown tag " + tag);
    l.value = e.at("value").get<int>();
    l.parent = e.contains("parent") && !e["parent"].is_null() ? e["parent"].get<int>() : -1;
    w.push_back(l);
  }
  return w;
}

}  // namespace leafy::la

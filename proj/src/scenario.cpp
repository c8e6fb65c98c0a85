#include "predictor/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>
#include <vector>

namespace predictor {

namespace {

// A value in the supported TOML subset: scalar or (nested) array.
struct Value;
using ValueList = std::vector<Value>;
struct Value {
  std::variant<std::string, double, bool, ValueList> v;
  int line = 0;
};

using Table = std::map<std::string, Value>;

struct Document {
  Table controller;
  Table simulation;
  std::vector<Table> nodes;
  std::vector<Table> links;
  std::vector<Table> circuits;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ScenarioError("line " + std::to_string(line) + ": " + msg);
}

struct Cursor {
  const std::string& s;
  size_t i = 0;
  int line;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size() || s[i] == '#';
  }
  char peek() { return i < s.size() ? s[i] : '\0'; }
};

Value parse_value(Cursor& c);

Value parse_array(Cursor& c) {
  Value out;
  out.line = c.line;
  ValueList items;
  ++c.i;  // consume '['
  c.skip_ws();
  if (c.peek() == ']') {
    ++c.i;
    out.v = items;
    return out;
  }
  while (true) {
    items.push_back(parse_value(c));
    c.skip_ws();
    if (c.peek() == ',') {
      ++c.i;
      c.skip_ws();
      if (c.peek() == ']') {  // trailing comma
        ++c.i;
        break;
      }
      continue;
    }
    if (c.peek() == ']') {
      ++c.i;
      break;
    }
    fail(c.line, "expected ',' or ']' in array");
  }
  out.v = items;
  return out;
}

Value parse_value(Cursor& c) {
  c.skip_ws();
  Value out;
  out.line = c.line;
  const char ch = c.peek();
  if (ch == '[') {
    return parse_array(c);
  }
  if (ch == '"') {
    ++c.i;
    std::string str;
    while (c.i < c.s.size() && c.s[c.i] != '"') {
      str += c.s[c.i++];
    }
    if (c.i >= c.s.size()) fail(c.line, "unterminated string");
    ++c.i;
    out.v = str;
    return out;
  }
  // bare token: number or boolean
  std::string tok;
  while (c.i < c.s.size() && c.s[c.i] != ',' && c.s[c.i] != ']' &&
         c.s[c.i] != '#' && c.s[c.i] != ' ' && c.s[c.i] != '\t') {
    tok += c.s[c.i++];
  }
  if (tok == "true") {
    out.v = true;
  } else if (tok == "false") {
    out.v = false;
  } else {
    try {
      size_t used = 0;
      const double d = std::stod(tok, &used);
      if (used != tok.size()) fail(c.line, "bad number '" + tok + "'");
      out.v = d;
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::exception&) {
      fail(c.line, "bad value '" + tok + "'");
    }
  }
  return out;
}

Document parse_document(const std::string& text) {
  Document doc;
  Table* current = nullptr;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    Cursor c{raw, 0, line};
    if (c.done()) continue;
    if (c.peek() == '[') {
      const bool array = c.i + 1 < raw.size() && raw[c.i + 1] == '[';
      size_t start = c.i + (array ? 2 : 1);
      size_t end = raw.find(array ? "]]" : "]", start);
      if (end == std::string::npos) fail(line, "unterminated section header");
      section = raw.substr(start, end - start);
      c.i = end + (array ? 2 : 1);
      if (!c.done()) fail(line, "trailing text after section header");
      if (array) {
        if (section == "node") {
          doc.nodes.emplace_back();
          current = &doc.nodes.back();
        } else if (section == "link") {
          doc.links.emplace_back();
          current = &doc.links.back();
        } else if (section == "circuit") {
          doc.circuits.emplace_back();
          current = &doc.circuits.back();
        } else {
          fail(line, "unknown array section [[" + section + "]]");
        }
      } else {
        if (section == "controller") {
          current = &doc.controller;
        } else if (section == "simulation") {
          current = &doc.simulation;
        } else {
          fail(line, "unknown section [" + section + "]");
        }
      }
      continue;
    }
    // key = value
    std::string key;
    while (c.i < raw.size() &&
           (std::isalnum(static_cast<unsigned char>(raw[c.i])) ||
            raw[c.i] == '_')) {
      key += raw[c.i++];
    }
    if (key.empty()) fail(line, "expected key");
    c.skip_ws();
    if (c.peek() != '=') fail(line, "expected '=' after key '" + key + "'");
    ++c.i;
    if (current == nullptr) fail(line, "key outside of any section");
    Value v = parse_value(c);
    if (!c.done()) fail(line, "trailing text after value");
    if (current->count(key)) fail(line, "duplicate key '" + key + "'");
    (*current)[key] = std::move(v);
  }
  return doc;
}

// --- typed extraction -------------------------------------------------

double as_number(const Value& v, const std::string& key) {
  if (!std::holds_alternative<double>(v.v)) {
    fail(v.line, "key '" + key + "' must be a number");
  }
  return std::get<double>(v.v);
}

std::string as_string(const Value& v, const std::string& key) {
  if (!std::holds_alternative<std::string>(v.v)) {
    fail(v.line, "key '" + key + "' must be a string");
  }
  return std::get<std::string>(v.v);
}

struct TableReader {
  const Table& t;
  std::string where;
  mutable std::map<std::string, bool> used;

  const Value* find(const std::string& key) const {
    auto it = t.find(key);
    if (it == t.end()) return nullptr;
    used[key] = true;
    return &it->second;
  }
  const Value& require(const std::string& key) const {
    const Value* v = find(key);
    if (v == nullptr) {
      throw ScenarioError(where + ": missing key '" + key + "'");
    }
    return *v;
  }
  double number(const std::string& key) const {
    return as_number(require(key), key);
  }
  double number_or(const std::string& key, double def) const {
    const Value* v = find(key);
    return v ? as_number(*v, key) : def;
  }
  std::string string_or(const std::string& key, const std::string& def) const {
    const Value* v = find(key);
    return v ? as_string(*v, key) : def;
  }
  void finish() const {
    for (const auto& [key, value] : t) {
      if (!used.count(key)) {
        fail(value.line, where + ": unknown key '" + key + "'");
      }
    }
  }
};

Policy parse_policy(const std::string& s, int line) {
  if (s == "predictor") return Policy::Predictor;
  if (s == "baseline") return Policy::Baseline;
  fail(line, "policy must be \"predictor\" or \"baseline\", got \"" + s + "\"");
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  const Document doc = parse_document(text);
  Scenario s;

  {
    TableReader r{doc.controller, "[controller]", {}};
    s.controller.dt = r.number("dt");
    s.controller.horizon = static_cast<int>(r.number("horizon"));
    s.controller.d0 = r.number_or("d0", 1.0 / 3.0);
    s.controller.r_max = r.number("r_max");
    s.controller.queue_limit = r.number_or("s_max", 50.0);
    r.finish();
  }
  {
    TableReader r{doc.simulation, "[simulation]", {}};
    s.duration = r.number("duration");
    const Value* pol = r.find("policy");
    if (pol) s.policy = parse_policy(as_string(*pol, "policy"), pol->line);
    s.seed = static_cast<uint64_t>(r.number_or("seed", 0));
    s.packet_bytes = static_cast<int>(r.number_or("packet_bytes", 512));
    s.baseline_queue_cap =
        static_cast<int>(r.number_or("queue_limit_baseline", 1000));
    s.name = r.string_or("name", "scenario");
    r.finish();
  }
  for (const auto& nt : doc.nodes) {
    TableReader r{nt, "[[node]]", {}};
    NodeSpec n;
    n.id = as_string(r.require("id"), "id");
    n.capacity_in = r.number("capacity_in");
    n.capacity_out = r.number("capacity_out");
    n.queue_limit = r.number_or("queue_limit", s.controller.queue_limit);
    r.finish();
    s.topology.nodes.push_back(std::move(n));
  }
  for (const auto& lt : doc.links) {
    TableReader r{lt, "[[link]]", {}};
    LinkSpec l;
    l.from = as_string(r.require("from"), "from");
    l.to = as_string(r.require("to"), "to");
    l.delay = r.number("delay");
    r.finish();
    s.topology.links.push_back(std::move(l));
  }
  for (const auto& ct : doc.circuits) {
    TableReader r{ct, "[[circuit]]", {}};
    Circuit c;
    c.id = static_cast<int>(r.number("id"));
    {
      const Value& pv = r.require("path");
      if (!std::holds_alternative<ValueList>(pv.v)) {
        fail(pv.line, "key 'path' must be an array of node ids");
      }
      for (const Value& e : std::get<ValueList>(pv.v)) {
        c.path.push_back(as_string(e, "path"));
      }
    }
    const std::string kind = r.string_or("source", "infinite");
    if (kind == "infinite") {
      c.source.kind = SourceModel::Kind::Infinite;
    } else if (kind == "onoff") {
      c.source.kind = SourceModel::Kind::OnOff;
    } else {
      throw ScenarioError("[[circuit]]: source must be \"infinite\" or \"onoff\"");
    }
    c.source.rate = r.number("rate");
    const Value* wv = r.find("windows");
    if (wv) {
      if (!std::holds_alternative<ValueList>(wv->v)) {
        fail(wv->line, "key 'windows' must be an array of [start, stop] pairs");
      }
      for (const Value& pair : std::get<ValueList>(wv->v)) {
        if (!std::holds_alternative<ValueList>(pair.v) ||
            std::get<ValueList>(pair.v).size() != 2) {
          fail(pair.line, "each window must be a [start, stop] pair");
        }
        const auto& p = std::get<ValueList>(pair.v);
        c.source.windows.emplace_back(as_number(p[0], "windows"),
                                      as_number(p[1], "windows"));
      }
    }
    if (c.source.kind == SourceModel::Kind::OnOff && c.source.windows.empty()) {
      throw ScenarioError("[[circuit]]: onoff source needs windows");
    }
    r.finish();
    s.topology.circuits.push_back(std::move(c));
  }

  validate_topology(s.topology);
  if (s.duration <= 0.0) {
    throw ScenarioError("[simulation]: duration must be positive");
  }
  if (s.controller.dt <= 0.0) {
    throw ScenarioError("[controller]: dt must be positive");
  }
  if (s.controller.horizon < 2) {
    throw ScenarioError("[controller]: horizon must be at least 2");
  }
  if (s.controller.d0 <= 0.0 || s.controller.d0 > 1.0 / 3.0 + 1e-12) {
    throw ScenarioError("[controller]: d0 must lie in (0, 1/3]");
  }
  if (s.controller.r_max <= 0.0) {
    throw ScenarioError("[controller]: r_max must be positive");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw ScenarioError("cannot open scenario file: " + path);
  }
  std::ostringstream buf;
  buf << f.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path + ": " + e.what());
  }
}

namespace {

std::string num(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
  }
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream o;
  o << "[controller]\n";
  o << "dt = " << num(s.controller.dt) << "\n";
  o << "horizon = " << s.controller.horizon << "\n";
  o << "d0 = " << num(s.controller.d0) << "\n";
  o << "r_max = " << num(s.controller.r_max) << "\n";
  o << "s_max = " << num(s.controller.queue_limit) << "\n\n";
  o << "[simulation]\n";
  o << "name = \"" << s.name << "\"\n";
  o << "duration = " << num(s.duration) << "\n";
  o << "policy = \""
    << (s.policy == Policy::Predictor ? "predictor" : "baseline") << "\"\n";
  o << "seed = " << s.seed << "\n";
  o << "packet_bytes = " << s.packet_bytes << "\n";
  o << "queue_limit_baseline = " << s.baseline_queue_cap << "\n";
  for (const auto& n : s.topology.nodes) {
    o << "\n[[node]]\n";
    o << "id = \"" << n.id << "\"\n";
    o << "capacity_in = " << num(n.capacity_in) << "\n";
    o << "capacity_out = " << num(n.capacity_out) << "\n";
    o << "queue_limit = " << num(n.queue_limit) << "\n";
  }
  for (const auto& l : s.topology.links) {
    o << "\n[[link]]\n";
    o << "from = \"" << l.from << "\"\n";
    o << "to = \"" << l.to << "\"\n";
    o << "delay = " << num(l.delay) << "\n";
  }
  for (const auto& c : s.topology.circuits) {
    o << "\n[[circuit]]\n";
    o << "id = " << c.id << "\n";
    o << "path = [";
    for (size_t i = 0; i < c.path.size(); ++i) {
      o << (i ? ", " : "") << '"' << c.path[i] << '"';
    }
    o << "]\n";
    o << "source = \""
      << (c.source.kind == SourceModel::Kind::Infinite ? "infinite" : "onoff")
      << "\"\n";
    o << "rate = " << num(c.source.rate) << "\n";
    if (!c.source.windows.empty()) {
      o << "windows = [";
      for (size_t i = 0; i < c.source.windows.size(); ++i) {
        o << (i ? ", " : "") << '[' << num(c.source.windows[i].first) << ", "
          << num(c.source.windows[i].second) << ']';
      }
      o << "]\n";
    }
  }
  return o.str();
}

}  // namespace predictor

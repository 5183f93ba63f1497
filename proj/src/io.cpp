#include "metachain/io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "metachain/errors.hpp"

namespace metachain {
namespace {

using nlohmann::json;

std::string state_id(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  throw ParseError(where + ": state identifier must be a string or an integer, got " + v.dump());
}

Rational weight_from_json(const json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return Rational(static_cast<std::int64_t>(v.get<std::uint64_t>()));
    if (v.is_number_float()) return Rational::parse(v.dump());
    if (v.is_string()) return Rational::parse(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": U must be a number or a rational string, got " + v.dump());
}

double kappa_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      double d = std::stod(v.get<std::string>(), &used);
      if (used == v.get<std::string>().size()) return d;
    } catch (const std::exception&) {
    }
  }
  throw ParseError(where + ": kappa must be a number, got " + v.dump());
}

double parse_kappa_token(const std::string& token, const std::string& where) {
  try {
    std::size_t used = 0;
    double d = std::stod(token, &used);
    if (used == token.size()) return d;
  } catch (const std::exception&) {
  }
  throw ParseError(where + ": malformed kappa '" + token + "'");
}

class StateOrder {
 public:
  void add(const std::string& s) {
    if (seen_.insert(s).second) order_.push_back(s);
  }
  bool empty() const { return order_.empty(); }
  std::vector<std::string> take() { return std::move(order_); }

 private:
  std::unordered_set<std::string> seen_;
  std::vector<std::string> order_;
};

}  // namespace

ChainGraph parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("graph JSON must be an object");
  if (!doc.contains("arcs") || !doc["arcs"].is_array()) throw ParseError("graph JSON needs an \"arcs\" array");

  StateOrder states;
  bool explicit_states = doc.contains("states");
  if (explicit_states) {
    if (!doc["states"].is_array()) throw ParseError("\"states\" must be an array");
    for (std::size_t i = 0; i < doc["states"].size(); ++i) {
      states.add(state_id(doc["states"][i], "states[" + std::to_string(i) + "]"));
    }
  }
  std::vector<ArcSpec> arcs;
  for (std::size_t i = 0; i < doc["arcs"].size(); ++i) {
    const json& a = doc["arcs"][i];
    std::string where = "arcs[" + std::to_string(i) + "]";
    if (!a.is_object()) throw ParseError(where + ": arc must be an object");
    for (const char* key : {"from", "to", "U"}) {
      if (!a.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
    }
    ArcSpec spec;
    spec.tail = state_id(a["from"], where + ".from");
    spec.head = state_id(a["to"], where + ".to");
    spec.U = weight_from_json(a["U"], where + ".U");
    if (a.contains("kappa") && !a["kappa"].is_null()) spec.kappa = kappa_from_json(a["kappa"], where + ".kappa");
    if (!explicit_states) {
      states.add(spec.tail);
      states.add(spec.head);
    }
    arcs.push_back(std::move(spec));
  }
  return ChainGraph::create(states.take(), arcs);
}

ChainGraph parse_tsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  StateOrder declared;
  StateOrder seen;
  std::vector<ArcSpec> arcs;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = "line " + std::to_string(lineno);
    if (line.rfind("#!states", 0) == 0) {
      std::istringstream names(line.substr(8));
      std::string s;
      while (names >> s) declared.add(s);
      continue;
    }
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    std::string t;
    while (fields >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 3 || tok.size() > 4) {
      throw ParseError(where + ": expected 'tail head U [kappa]', got " + std::to_string(tok.size()) + " fields");
    }
    ArcSpec spec;
    spec.tail = tok[0];
    spec.head = tok[1];
    try {
      spec.U = Rational::parse(tok[2]);
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (tok.size() == 4) spec.kappa = parse_kappa_token(tok[3], where);
    seen.add(spec.tail);
    seen.add(spec.head);
    arcs.push_back(std::move(spec));
  }
  if (!declared.empty()) {
    auto names = declared.take();
    std::unordered_set<std::string> known(names.begin(), names.end());
    for (const auto& s : seen.take()) {
      if (!known.count(s)) throw ValidationError("state '" + s + "' is not listed in #!states");
    }
    return ChainGraph::create(std::move(names), arcs);
  }
  return ChainGraph::create(seen.take(), arcs);
}

ChainGraph parse_graph(std::string_view text, InputFormat format) {
  return format == InputFormat::Json ? parse_json(text) : parse_tsv(text);
}

std::optional<InputFormat> parse_format_name(std::string_view name) {
  if (name == "json") return InputFormat::Json;
  if (name == "tsv") return InputFormat::Tsv;
  return std::nullopt;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << text;
}

ChainGraph load_graph(const std::filesystem::path& path, std::optional<InputFormat> format) {
  std::string text = read_text_file(path);
  if (!format) {
    auto ext = path.extension().string();
    if (ext == ".json") {
      format = InputFormat::Json;
    } else if (ext == ".tsv" || ext == ".txt") {
      format = InputFormat::Tsv;
    } else {
      auto first = text.find_first_not_of(" \t\r\n");
      format = (first != std::string::npos && text[first] == '{') ? InputFormat::Json : InputFormat::Tsv;
    }
  }
  return parse_graph(text, *format);
}

std::string to_json_text(const ChainGraph& g) {
  json doc;
  doc["schema"] = 1;
  doc["states"] = g.states();
  json arcs = json::array();
  for (const Arc& a : g.arcs()) {
    json j;
    j["from"] = g.state_name(a.tail);
    j["to"] = g.state_name(a.head);
    j["U"] = a.U.decimal_str();
    if (a.kappa) j["kappa"] = *a.kappa;
    arcs.push_back(std::move(j));
  }
  doc["arcs"] = std::move(arcs);
  return doc.dump(2) + "\n";
}

std::string to_tsv_text(const ChainGraph& g) {
  std::ostringstream out;
  out << "#!states";
  for (const auto& s : g.states()) out << ' ' << s;
  out << '\n';
  for (const Arc& a : g.arcs()) {
    out << g.state_name(a.tail) << '\t' << g.state_name(a.head) << '\t' << a.U.decimal_str();
    if (a.kappa) {
      json k = *a.kappa;
      out << '\t' << k.dump();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace metachain

#include "geoverify/spec_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace geoverify {

namespace {

const Json& field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("spec: missing field '") + key + "'");
  return doc.at(key);
}

std::string expr_text(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
    return buf;
  }
  throw ParseError("spec: " + where + " must be an expression string or number");
}

int index_of(const Json& j, const char* key, int dim, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw ParseError("spec: " + where + " needs an integer '" + key + "'");
  }
  const int v = j.at(key).get<int>();
  if (v < 0 || v >= dim) throw ParseError("spec: " + where + " index out of range");
  return v;
}

std::vector<Expr> expr_vector(const MetricSpec& s, const Json& j, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != s.dim) {
    throw ParseError("spec: " + where + " must be an array of " + std::to_string(s.dim) + " expressions");
  }
  std::vector<Expr> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(s.parse(expr_text(j[i], where)));
  return out;
}

Json expr_array(const std::vector<Expr>& v) {
  Json a = Json::array();
  for (const auto& e : v) a.push_back(e.to_string());
  return a;
}

std::string signature_name(SignatureKind k) {
  switch (k) {
    case SignatureKind::Lorentzian:
      return "lorentzian";
    case SignatureKind::Riemannian:
      return "riemannian";
    case SignatureKind::Any:
      break;
  }
  return "any";
}

void dump_value(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_value(it.value(), out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_value(j[i], out, indent + 2);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_value(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

MetricSpec spec_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("spec: top level must be an object");
  const std::string name = doc.contains("name") ? doc.at("name").get<std::string>() : "unnamed";
  const Json& coords_j = field(doc, "coords");
  if (!coords_j.is_array()) throw ParseError("spec: coords must be an array");
  std::vector<std::string> coords = coords_j.get<std::vector<std::string>>();
  ParamMap params;
  if (doc.contains("params") && !doc.at("params").is_null()) {
    for (auto it = doc.at("params").begin(); it != doc.at("params").end(); ++it) {
      if (!it.value().is_number()) throw ParseError("spec: parameter '" + it.key() + "' must be a number");
      params[it.key()] = it.value().get<double>();
    }
  }
  MetricSpec s(name, coords, params);
  if (doc.contains("dim") && field(doc, "dim").get<int>() != s.dim) {
    throw ParseError("spec: dim does not match the number of coordinates");
  }
  if (s.dim <= 0 || s.dim > kMaxDim) throw ParseError("spec: dim out of range");

  std::set<std::pair<int, int>> seen;
  for (const auto& e : field(doc, "metric")) {
    int i = index_of(e, "i", s.dim, "metric entry");
    int j = index_of(e, "j", s.dim, "metric entry");
    if (i > j) std::swap(i, j);
    if (!seen.insert({i, j}).second) throw ParseError("spec: duplicate metric entry");
    s.set_g(i, j, s.parse(expr_text(field(e, "expr"), "metric entry")));
  }
  if (doc.contains("xi") && !doc.at("xi").is_null()) s.xi = expr_vector(s, doc.at("xi"), "xi");
  if (doc.contains("S") && !doc.at("S").is_null()) {
    std::vector<ThreeFormEntry> S;
    for (const auto& e : doc.at("S")) {
      S.push_back({{index_of(e, "i", s.dim, "S entry"), index_of(e, "j", s.dim, "S entry"),
                    index_of(e, "k", s.dim, "S entry")},
                   s.parse(expr_text(field(e, "expr"), "S entry"))});
    }
    s.S = S;
  }
  if (doc.contains("domain") && !doc.at("domain").is_null()) {
    for (auto it = doc.at("domain").begin(); it != doc.at("domain").end(); ++it) {
      const auto pos = std::find(s.coords.begin(), s.coords.end(), it.key());
      if (pos == s.coords.end()) throw ParseError("spec: domain names unknown coordinate '" + it.key() + "'");
      const auto lohi = it.value().get<std::vector<double>>();
      if (lohi.size() != 2) throw ParseError("spec: domain intervals are [lo, hi]");
      s.domain[static_cast<std::size_t>(pos - s.coords.begin())] = {lohi[0], lohi[1]};
    }
  }
  if (doc.contains("manifest") && !doc.at("manifest").is_null()) {
    s.manifest = doc.at("manifest").get<std::vector<std::string>>();
  }
  if (doc.contains("signature")) {
    const auto sig = doc.at("signature").get<std::string>();
    if (sig == "lorentzian") {
      s.signature = SignatureKind::Lorentzian;
    } else if (sig == "riemannian") {
      s.signature = SignatureKind::Riemannian;
    } else if (sig == "any") {
      s.signature = SignatureKind::Any;
    } else {
      throw ParseError("spec: unknown signature '" + sig + "'");
    }
  }
  if (doc.contains("aux") && !doc.at("aux").is_null()) {
    const Json& aux = doc.at("aux");
    if (aux.contains("p0") && !aux.at("p0").is_null()) s.p0 = expr_vector(s, aux.at("p0"), "aux.p0");
    if (aux.contains("phi") && !aux.at("phi").is_null()) s.phi = s.parse(expr_text(aux.at("phi"), "aux.phi"));
  }
  if (doc.contains("catalog") && !doc.at("catalog").is_null()) {
    CatalogRef ref;
    ref.entry = field(doc.at("catalog"), "entry").get<std::string>();
    if (doc.at("catalog").contains("params")) {
      ref.params = doc.at("catalog").at("params").get<std::map<std::string, std::string>>();
    }
    s.catalog = ref;
  }
  if (doc.contains("notes")) s.notes = doc.at("notes").get<std::vector<std::string>>();
  s.validate();
  return s;
}

Json spec_to_json(const MetricSpec& s) {
  Json doc;
  doc["name"] = s.name;
  doc["dim"] = s.dim;
  doc["coords"] = s.coords;
  doc["params"] = Json::object();
  for (const auto& [k, v] : s.params) doc["params"][k] = v;
  Json metric = Json::array();
  for (int i = 0; i < s.dim; ++i)
    for (int j = i; j < s.dim; ++j)
      if (!s.g(i, j).is_zero()) metric.push_back(Json{{"i", i}, {"j", j}, {"expr", s.g(i, j).to_string()}});
  doc["metric"] = metric;
  doc["xi"] = s.xi ? expr_array(*s.xi) : Json(nullptr);
  if (s.S) {
    Json S = Json::array();
    for (const auto& e : *s.S) {
      S.push_back(Json{{"i", e.index[0]}, {"j", e.index[1]}, {"k", e.index[2]}, {"expr", e.expr.to_string()}});
    }
    doc["S"] = S;
  } else {
    doc["S"] = nullptr;
  }
  Json domain = Json::object();
  for (int i = 0; i < s.dim; ++i) domain[s.coords[i]] = {s.domain[i].first, s.domain[i].second};
  doc["domain"] = domain;
  doc["manifest"] = s.manifest ? Json(*s.manifest) : Json(nullptr);
  doc["signature"] = signature_name(s.signature);
  if (s.p0 || s.phi) {
    Json aux = Json::object();
    aux["p0"] = s.p0 ? expr_array(*s.p0) : Json(nullptr);
    aux["phi"] = s.phi ? Json(s.phi->to_string()) : Json(nullptr);
    doc["aux"] = aux;
  }
  if (s.catalog) {
    Json params = Json::object();
    for (const auto& [k, v] : s.catalog->params) params[k] = v;
    doc["catalog"] = Json{{"entry", s.catalog->entry}, {"params", params}};
  }
  if (!s.notes.empty()) doc["notes"] = s.notes;
  return doc;
}

MetricSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return spec_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

std::string dump_json(const Json& doc) {
  std::string out;
  dump_value(doc, out, 0);
  out += "\n";
  return out;
}

}  // namespace geoverify

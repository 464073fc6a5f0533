#pragma once

// Versioned JSON documents for arrangements, restrictions, certificates and chains.

#include <string>
#include <vector>

#include <json.hpp>

#include "freeness.hpp"

namespace multiarr::io {

using json = nlohmann::json;

inline constexpr int kVersion = 1;

/// Malformed input; the message names the offending location.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : "at " + where + ": " + what) {}
};

inline Rational parse_rational_text(const std::string& s, const std::string& where) {
  if (s.empty()) throw DocumentError(where, "empty rational");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  const auto slash = s.find('/');
  auto digits = [&](std::size_t b, std::size_t e) {
    if (b >= e) return false;
    for (std::size_t i = b; i < e; ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (slash == std::string::npos ? !digits(start, s.size()) : !digits(start, slash) || !digits(slash + 1, s.size()))
    throw DocumentError(where, "not a rational number: \"" + s + "\"");
  Rational q;
  q.get_num() = mpz_class(s.substr(0, slash));
  q.get_den() = slash == std::string::npos ? mpz_class(1) : mpz_class(s.substr(slash + 1));
  if (q.get_den() == 0) throw DocumentError(where, "zero denominator");
  q.canonicalize();
  return q;
}

inline Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return parse_rational_text(j.get<std::string>(), where);
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw DocumentError(where, "expected a rational as a \"p/q\" string");
}

inline json scalar_to_json(const FieldElement& x) {
  if (x.context().is_rational()) return x.coefficients()[0].get_str();
  json arr = json::array();
  for (const auto& q : x.coefficients()) arr.push_back(q.get_str());
  return arr;
}

inline FieldElement scalar_from_json(const json& j, const FieldContext& ctx, const std::string& where) {
  if (ctx.is_rational()) return FieldElement(ctx, rational_from_json(j, where));
  if (!j.is_array()) return FieldElement(ctx, rational_from_json(j, where));
  if (j.size() > ctx.degree())
    throw DocumentError(where, "cyclotomic scalar has " + std::to_string(j.size()) + " coefficients, at most " +
                                   std::to_string(ctx.degree()) + " allowed");
  std::vector<Rational> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(rational_from_json(j[i], where + "/" + std::to_string(i)));
  return FieldElement(ctx, std::move(c));
}

inline json field_to_json(const FieldContext& ctx) {
  if (ctx.is_rational()) return {{"kind", "rational"}};
  return {{"kind", "cyclotomic"}, {"order", ctx.order()}};
}

inline FieldContext field_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw DocumentError(where, "field must be an object with a \"kind\"");
  const std::string kind = j["kind"];
  if (kind == "rational") return FieldContext::rational();
  if (kind == "cyclotomic") {
    if (!j.contains("order") || !j["order"].is_number_integer() || j["order"].get<long>() < 1)
      throw DocumentError(where + "/order", "cyclotomic field needs a positive integer order");
    return FieldContext::cyclotomic(j["order"].get<unsigned>());
  }
  throw DocumentError(where + "/kind", "unknown field kind \"" + kind + "\"");
}

inline json form_to_json(const LinearForm& f) {
  json n = json::array();
  for (const auto& c : f.coefficients()) n.push_back(scalar_to_json(c));
  return n;
}

inline Vector vector_from_json(const json& j, const FieldContext& ctx, std::size_t dim, const std::string& where) {
  if (!j.is_array()) throw DocumentError(where, "expected a list of scalars");
  if (j.size() != dim)
    throw DocumentError(where, "expected " + std::to_string(dim) + " entries, found " + std::to_string(j.size()));
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(scalar_from_json(j[i], ctx, where + "/" + std::to_string(i)));
  return v;
}

inline json arrangement_to_json(const Multiarrangement& a) {
  json hs = json::array();
  for (const auto& h : a.hyperplanes()) {
    json e = {{"normal", form_to_json(h.form)}, {"multiplicity", h.multiplicity}};
    if (!h.label.empty()) e["label"] = h.label;
    hs.push_back(std::move(e));
  }
  return {{"version", kVersion}, {"field", field_to_json(a.context())}, {"dimension", a.dimension()}, {"hyperplanes", hs}};
}

inline Multiarrangement arrangement_from_json(const json& j, const std::string& where = "") {
  if (!j.is_object()) throw DocumentError(where, "arrangement document must be an object");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kVersion)
    throw DocumentError(where + "/version", "unsupported or missing version (expected " + std::to_string(kVersion) + ")");
  if (!j.contains("field")) throw DocumentError(where, "missing \"field\"");
  const FieldContext ctx = field_from_json(j["field"], where + "/field");
  if (!j.contains("dimension") || !j["dimension"].is_number_integer() || j["dimension"].get<long>() < 0)
    throw DocumentError(where + "/dimension", "dimension must be a non-negative integer");
  const std::size_t dim = j["dimension"].get<std::size_t>();
  if (!j.contains("hyperplanes") || !j["hyperplanes"].is_array())
    throw DocumentError(where + "/hyperplanes", "hyperplanes must be a list");
  std::vector<Multiarrangement::Input> in;
  const json& hs = j["hyperplanes"];
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::string w = where + "/hyperplanes/" + std::to_string(i);
    const json& h = hs[i];
    if (!h.is_object() || !h.contains("normal")) throw DocumentError(w, "hyperplane needs a \"normal\"");
    Multiarrangement::Input x;
    x.normal = vector_from_json(h["normal"], ctx, dim, w + "/normal");
    if (std::all_of(x.normal.begin(), x.normal.end(), [](const FieldElement& c) { return c.is_zero(); }))
      throw DocumentError(w + "/normal", "zero normal does not define a hyperplane");
    if (h.contains("multiplicity")) {
      if (!h["multiplicity"].is_number_integer() || h["multiplicity"].get<long>() < 0)
        throw DocumentError(w + "/multiplicity", "multiplicity must be a non-negative integer");
      x.multiplicity = h["multiplicity"].get<unsigned>();
    }
    if (h.contains("label")) {
      if (!h["label"].is_string()) throw DocumentError(w + "/label", "label must be a string");
      x.label = h["label"];
    }
    in.push_back(std::move(x));
  }
  return Multiarrangement::build(dim, ctx, in);
}

/// Parses text, reporting the byte offset of syntax errors.
inline json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError("byte " + std::to_string(e.byte), "malformed JSON");
  }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json exponents_to_json(const Exponents& e) { return json(e); }

inline Exponents exponents_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw DocumentError(where, "exponents must be a list of integers");
  Exponents e;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long>() < 0)
      throw DocumentError(where + "/" + std::to_string(i), "exponent must be a non-negative integer");
    e.push_back(j[i].get<unsigned>());
  }
  return e;
}

/// Restriction output: the arrangement plus its Euler multiplicities keyed by label.
inline json restriction_to_json(const Multiarrangement& restricted) {
  json doc = arrangement_to_json(restricted);
  json em = json::object();
  for (std::size_t i = 0; i < restricted.size(); ++i) em[restricted.label(i)] = restricted[i].multiplicity;
  doc["euler_multiplicities"] = em;
  return doc;
}

inline json polynomial_to_json(const Polynomial& p) { return p.to_string(); }

inline json certificate_to_json(const FreenessCertificate& c) {
  json basis = json::array();
  for (const auto& d : c.basis) {
    json comps = json::array();
    for (const auto& f : d.components()) comps.push_back(polynomial_to_json(f));
    basis.push_back({{"pdeg", d.pdeg()}, {"components", comps}});
  }
  json out = {{"verdict", to_string(c.verdict)}, {"basis", basis}};
  if (c.is_free()) out["exponents"] = exponents_to_json(c.exponents);
  if (c.saito_scalar) out["saito_scalar"] = scalar_to_json(*c.saito_scalar);
  if (!c.witness.empty()) out["witness"] = c.witness;
  return out;
}

inline json stats_to_json(const SearchStats& s) {
  return {{"nodes", s.nodes}, {"memo_hits", s.memo_hits}, {"budget", s.budget}};
}

inline json chain_to_json(const Chain& c, std::optional<bool> verified = {}, const SearchStats* stats = nullptr) {
  json steps = json::array();
  for (const auto& s : c.steps) {
    json st = {{"op", to_string(s.op)},
               {"normal", form_to_json(s.hyperplane)},
               {"exponents_before", exponents_to_json(s.exponents_before)},
               {"exponents_after", exponents_to_json(s.exponents_after)},
               {"restriction_exponents", exponents_to_json(s.restriction_exponents)}};
    if (!s.label.empty()) st["label"] = s.label;
    steps.push_back(std::move(st));
  }
  json out = {{"version", kVersion}, {"kind", to_string(c.kind)}, {"target", arrangement_to_json(c.target)}, {"steps", steps}};
  if (verified) out["verified"] = *verified;
  if (stats) out["search_stats"] = stats_to_json(*stats);
  return out;
}

inline Chain chain_from_json(const json& j) {
  if (!j.is_object()) throw DocumentError("", "chain document must be an object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw DocumentError("/kind", "missing chain kind");
  Chain c;
  const std::string kind = j["kind"];
  if (kind == "inductive") {
    c.kind = ChainKind::inductive;
  } else if (kind == "recursive") {
    c.kind = ChainKind::recursive;
  } else {
    throw DocumentError("/kind", "unknown chain kind \"" + kind + "\"");
  }
  if (!j.contains("target")) throw DocumentError("", "missing \"target\"");
  c.target = arrangement_from_json(j["target"], "/target");
  if (!j.contains("steps") || !j["steps"].is_array()) throw DocumentError("/steps", "steps must be a list");
  for (std::size_t i = 0; i < j["steps"].size(); ++i) {
    const std::string w = "/steps/" + std::to_string(i);
    const json& s = j["steps"][i];
    if (!s.is_object()) throw DocumentError(w, "step must be an object");
    ChainStep st;
    const std::string op = s.value("op", "");
    if (op == "add") {
      st.op = StepOp::add;
    } else if (op == "delete") {
      st.op = StepOp::remove;
    } else {
      throw DocumentError(w + "/op", "op must be \"add\" or \"delete\"");
    }
    if (!s.contains("normal")) throw DocumentError(w, "step needs a normal");
    st.hyperplane = LinearForm::normalized(
        vector_from_json(s["normal"], c.target.context(), c.target.dimension(), w + "/normal"));
    if (s.contains("label") && s["label"].is_string()) st.label = s["label"];
    for (const char* f : {"exponents_before", "exponents_after", "restriction_exponents"})
      if (!s.contains(f)) throw DocumentError(w, std::string("missing ") + f);
    st.exponents_before = exponents_from_json(s["exponents_before"], w + "/exponents_before");
    st.exponents_after = exponents_from_json(s["exponents_after"], w + "/exponents_after");
    st.restriction_exponents = exponents_from_json(s["restriction_exponents"], w + "/restriction_exponents");
    c.steps.push_back(std::move(st));
  }
  return c;
}

inline json span_to_json(const NormalSpan& s) {
  json rows = json::array();
  for (const auto& r : s.rows()) {
    json row = json::array();
    for (const auto& x : r) row.push_back(scalar_to_json(x));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json lattice_to_json(const Multiarrangement& a, const Lattice& l) {
  json flats = json::array();
  for (const auto& f : l.flats) {
    json labels = json::array();
    for (auto i : f.containing) labels.push_back(a.label(i));
    flats.push_back({{"rank", f.rank}, {"containing", f.containing}, {"labels", labels}, {"normal_span", span_to_json(f.span)}});
  }
  return {{"version", kVersion}, {"flats", flats}};
}

}  // namespace multiarr::io

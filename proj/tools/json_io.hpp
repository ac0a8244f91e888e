#ifndef LATTICEOPS_TOOLS_JSON_IO_HPP
#define LATTICEOPS_TOOLS_JSON_IO_HPP

// JSON <-> library objects for the command-line tool.
//
//   scalar:  "3/4", "-1.5e-3", 2, or [re, im] with either element in those forms
//   lattice: {"q": "4", "c": ["1/2", "1/2", "0"]}   (q = 1: c = [c4, c5, c6])
//   pair:    {"phi": [c, b, a], "psi": [e, d]}      (increasing degree)

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "latticeops/latticeops.hpp"

namespace latticeops::io {

using json = nlohmann::json;

inline std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) {
    // go through the shortest round-trip text so 0.1 means one tenth
    return j.dump();
  }
  throw InvalidInput("expected a number or a numeric string, got " + j.dump());
}

template <Scalar S>
S scalar_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw InvalidInput("complex scalars are written [re, im]");
    return parse_real<S>(scalar_text(j[0])) + imag_unit<S>() * parse_real<S>(scalar_text(j[1]));
  }
  return parse_real<S>(scalar_text(j));
}

/// True when every number in `j` is a plain rational (so the exact backend can take it).
inline bool all_rational(const json& j) {
  if (j.is_object() || j.is_array()) {
    for (const auto& v : j)
      if (!all_rational(v)) return false;
    return true;
  }
  if (j.is_string()) {
    try {
      (void)parse_rational(j.get<std::string>());
      return true;
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

template <Scalar S>
json scalar_to_json(const S& v) {
  if (v.is_real()) return real_to_string(v.real());
  return json::array({real_to_string(v.real()), real_to_string(v.imag())});
}

template <Scalar S>
json scalars_to_json(const std::vector<S>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(scalar_to_json(x));
  return a;
}

template <Scalar S>
json poly_to_json(const Polynomial<S>& p) {
  return scalars_to_json(p.coeffs());
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

template <Scalar S>
Lattice<S> lattice_from_json(const json& j) {
  if (!j.is_object() || !j.contains("q") || !j.contains("c")) throw InvalidInput("lattice JSON needs \"q\" and \"c\"");
  const json& c = j.at("c");
  if (!c.is_array() || c.size() != 3) throw InvalidInput("lattice \"c\" must hold three constants");
  return Lattice<S>(scalar_from_json<S>(j.at("q")),
                    {scalar_from_json<S>(c[0]), scalar_from_json<S>(c[1]), scalar_from_json<S>(c[2])});
}

template <Scalar S>
json lattice_to_json(const Lattice<S>& lat) {
  return {{"q", scalar_to_json(lat.q())},
          {"c", json::array({scalar_to_json(lat.c()[0]), scalar_to_json(lat.c()[1]), scalar_to_json(lat.c()[2])})},
          {"kind", kind_name(lat.kind())}};
}

template <Scalar S>
Polynomial<S> poly_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("polynomials are coefficient lists in increasing degree");
  std::vector<S> c;
  for (const auto& v : j) c.push_back(scalar_from_json<S>(v));
  return Polynomial<S>(c);
}

template <Scalar S>
PearsonPair<S> pair_from_json(const json& j) {
  if (!j.is_object() || !j.contains("phi") || !j.contains("psi"))
    throw InvalidInput("pair JSON needs \"phi\" and \"psi\"");
  return PearsonPair<S>(poly_from_json<S>(j.at("phi")), poly_from_json<S>(j.at("psi")));
}

template <Scalar S>
json pair_to_json(const PearsonPair<S>& p) {
  return {{"phi", poly_to_json(p.phi())}, {"psi", poly_to_json(p.psi())}};
}

template <Scalar S>
json ttrr_to_json(const Ttrr<S>& t) {
  json B = scalars_to_json(t.B);
  json C = json::array();
  for (std::size_t i = 1; i < t.C.size(); ++i) C.push_back(scalar_to_json(t.C[i]));
  return {{"B", B}, {"C", C}, {"C_starts_at", 1}};
}

inline json residual_to_json(const Residual& r) {
  return {{"name", r.name}, {"statement", r.statement}, {"residual", r.value}, {"pass", r.pass}};
}

inline json structure_to_json(const StructureReport& r) {
  json j = {{"relation", r.relation},
            {"statement", r.statement},
            {"residuals", r.residuals},
            {"pass", r.pass()},
            {"first_failure", r.first_failure < 0 ? json(nullptr) : json(r.first_failure)}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline json system_to_json(const SystemReport& r) {
  json eqs = json::object();
  for (const auto& e : r.residuals) {
    json& slot = eqs[e.equation];
    if (slot.is_null()) slot = {{"statement", system_equation_statement(e.equation)}, {"residuals", json::array()}};
    slot["residuals"].push_back({{"n", e.n}, {"value", e.value}, {"pass", e.pass}});
  }
  return {{"equations", eqs}, {"k1", r.k1}, {"k2", r.k2}, {"pass", r.pass()}};
}

inline json asymptotics_to_json(const AsymptoticsReport& a) {
  json lim = json::array();
  for (const auto& l : a.limits)
    lim.push_back({{"name", l.name},
                   {"n", l.n},
                   {"estimate", l.estimate},
                   {"limit", l.limit},
                   {"error", l.error},
                   {"error_at_half_n", l.error_half},
                   {"pass", l.pass}});
  json j = {{"limits", lim}, {"pass", a.pass()}};
  if (a.sn_applicable)
    j["partial_sum_identity"] = {{"checked_through", a.sn_checked}, {"max_residual", a.sn_max_residual}, {"pass", a.sn_pass}};
  return j;
}

}  // namespace latticeops::io

#endif  // LATTICEOPS_TOOLS_JSON_IO_HPP

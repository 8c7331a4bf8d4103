#pragma once

// JSON encodings of elements, matrices and linear maps.
//
//   element  {"spec": "sym:3", "coords": [...]}
//   matrix   {"rows": r, "cols": c, "data": [...row-major...]}
//   map      {"spec": ..., "tag": {"kind": ..., ...}, "coeffs": [...row-major...]}
//
// Non-finite doubles are written as the strings "inf", "-inf" and "nan".

#include "eja/algebra.hpp"
#include "eja/operators.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace eja {

using json = nlohmann::json;

inline json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw parse_error("expected a number or \"inf\", got " + j.dump());
}

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(number_to_json(v[i]));
  return out;
}

inline Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw parse_error("expected an array of numbers");
  Vector v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = number_from_json(j[i]);
  return v;
}

inline json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k) data.push_back(number_to_json(m(i, k)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline Matrix matrix_from_json(const json& j) {
  const int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  const Vector data = vector_from_json(j.at("data"));
  if (data.size() != static_cast<long>(rows) * cols) throw parse_error("matrix data length does not match its shape");
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = data[i * cols + k];
  return m;
}

inline json element_to_json(const Element& x) { return {{"spec", x.algebra().spec()}, {"coords", vector_to_json(x.coords())}}; }

inline Element element_from_json(const json& j, const AlgebraPtr& algebra) {
  if (j.contains("spec") && j.at("spec").get<std::string>() != algebra->spec())
    throw mismatch_error("element spec " + j.at("spec").get<std::string>() + " does not match " + algebra->spec());
  const json& coords = j.is_array() ? j : j.at("coords");
  return Element(algebra, vector_from_json(coords));
}

inline Element element_from_json(const json& j) { return element_from_json(j, parse_algebra(j.at("spec").get<std::string>())); }

inline MapKind map_kind_from_string(const std::string& s) {
  for (MapKind k : {MapKind::Lyapunov, MapKind::QuadRep, MapKind::QuadRepPair, MapKind::Schur, MapKind::Congruence,
                    MapKind::MatrixLyapunov, MapKind::Positive, MapKind::Generic})
    if (s == to_string(k)) return k;
  throw parse_error("unknown map kind: " + s);
}

inline json map_to_json(const LinearMap& T) {
  const MapTag& tag = T.tag();
  json jt = {{"kind", to_string(tag.kind)}};
  if (tag.a) jt["a"] = vector_to_json(tag.a->coords());
  if (tag.b) jt["b"] = vector_to_json(tag.b->coords());
  if (tag.matrix.size() > 0) jt["matrix"] = matrix_to_json(tag.matrix);
  if (!tag.frame.empty()) {
    jt["frame"] = json::array();
    for (const Element& c : tag.frame) jt["frame"].push_back(vector_to_json(c.coords()));
  }
  json coeffs = matrix_to_json(T.coeffs()).at("data");
  return {{"spec", T.algebra().spec()}, {"tag", jt}, {"coeffs", coeffs}};
}

inline LinearMap map_from_json(const json& j) {
  const AlgebraPtr alg = parse_algebra(j.at("spec").get<std::string>());
  const int d = alg->dim();
  const Matrix coeffs = matrix_from_json({{"rows", d}, {"cols", d}, {"data", j.at("coeffs")}});
  MapTag tag;
  if (j.contains("tag")) {
    const json& jt = j.at("tag");
    tag.kind = map_kind_from_string(jt.at("kind").get<std::string>());
    if (jt.contains("a")) tag.a = Element(alg, vector_from_json(jt.at("a")));
    if (jt.contains("b")) tag.b = Element(alg, vector_from_json(jt.at("b")));
    if (jt.contains("matrix")) tag.matrix = matrix_from_json(jt.at("matrix"));
    if (jt.contains("frame"))
      for (const json& c : jt.at("frame")) tag.frame.emplace_back(alg, vector_from_json(c));
  }
  return LinearMap(alg, coeffs, std::move(tag));
}

}  // namespace eja

#pragma once

// JSON body files and report serialization.

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "body.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "santalo.hpp"

namespace lpsantalo {

namespace detail {

inline Vec json_to_vec(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a nonempty array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " entries must be numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

}  // namespace detail

/// {"kind":"vpolytope","vertices":[[..],..]} | {"kind":"ball","center":[..],"radius":r}
/// | {"kind":"affine","base":{..},"matrix":[[row],..],"shift":[..]}
inline ConvexBody body_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw Error(ErrorCode::ParseError, "body needs a string field 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "vpolytope") {
    if (!j.contains("vertices") || !j.at("vertices").is_array() || j.at("vertices").empty())
      throw Error(ErrorCode::ParseError, "vpolytope needs a nonempty 'vertices' array");
    std::vector<Vec> pts;
    for (const auto& v : j.at("vertices")) pts.push_back(detail::json_to_vec(v, "vertex"));
    for (const auto& p : pts)
      if (p.size() != pts.front().size()) throw Error(ErrorCode::ParseError, "vertices have inconsistent dimensions");
    return ConvexBody::polytope(std::move(pts));
  }
  if (kind == "ball") {
    if (!j.contains("center") || !j.contains("radius") || !j.at("radius").is_number())
      throw Error(ErrorCode::ParseError, "ball needs 'center' and numeric 'radius'");
    return ConvexBody::ball(detail::json_to_vec(j.at("center"), "center"), j.at("radius").get<double>());
  }
  if (kind == "affine") {
    if (!j.contains("base") || !j.contains("matrix") || !j.contains("shift"))
      throw Error(ErrorCode::ParseError, "affine body needs 'base', 'matrix' and 'shift'");
    ConvexBody base = body_from_json(j.at("base"));
    const auto& rows = j.at("matrix");
    const int n = base.dim();
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw Error(ErrorCode::ParseError, "matrix must be n x n");
    Mat a(n, n);
    for (int i = 0; i < n; ++i) {
      const Vec r = detail::json_to_vec(rows[static_cast<std::size_t>(i)], "matrix row");
      if (r.size() != n) throw Error(ErrorCode::ParseError, "matrix must be n x n");
      a.row(i) = r.transpose();
    }
    const Vec shift = detail::json_to_vec(j.at("shift"), "shift");
    if (shift.size() != n) throw Error(ErrorCode::ParseError, "shift dimension mismatch");
    return ConvexBody::affine_image(std::move(base), a, shift);
  }
  throw Error(ErrorCode::ParseError, "unknown body kind '" + kind + "'");
}

inline nlohmann::json body_to_json(const ConvexBody& k) {
  switch (k.kind()) {
    case BodyKind::Ball: return {{"kind", "ball"}, {"center", json_vector(k.as_ball().center)}, {"radius", k.as_ball().radius}};
    case BodyKind::AffineImage: {
      const auto& a = k.as_affine();
      nlohmann::json rows = nlohmann::json::array();
      for (Eigen::Index i = 0; i < a.matrix.rows(); ++i) rows.push_back(json_vector(a.matrix.row(i).transpose()));
      return {{"kind", "affine"}, {"base", body_to_json(*a.base)}, {"matrix", rows}, {"shift", json_vector(a.shift)}};
    }
    case BodyKind::VPolytope: break;
  }
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : k.as_polytope().vertices) verts.push_back(json_vector(v));
  return {{"kind", "vpolytope"}, {"vertices", verts}};
}

inline ConvexBody parse_body(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  try {
    return body_from_json(j);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, std::string("invalid body: ") + e.what());
  }
}

inline ConvexBody load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open body file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_body(ss.str());
}

/// Comma-separated p values; "inf" allowed. Empty lists are rejected.
inline std::vector<PExponent> parse_p_list(const std::string& s) {
  std::vector<PExponent> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(PExponent::parse(item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty p grid");
  return out;
}

inline Vec parse_vector(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "cannot parse vector component '" + item + "'");
    }
  }
  if (vals.empty()) throw Error(ErrorCode::ParseError, "empty vector");
  return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

/// Round-trip formatting of a double for CSV cells.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Projects flat JSON records onto CSV with a fixed column list. Arrays
/// become space-separated cells.
inline std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number() || v.is_boolean()) return v.dump();
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + csv_cell(v[i]);
    return out;
  }
  std::string s = v.dump();
  for (auto& c : s)
    if (c == ',') c = ';';
  return s;
}

inline std::string to_csv(const std::vector<nlohmann::json>& rows, const std::vector<std::string>& columns) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      out += (i ? "," : "") + (r.contains(columns[i]) ? csv_cell(r.at(columns[i])) : std::string());
    out += "\n";
  }
  return out;
}

inline std::string to_json_lines(const std::vector<nlohmann::json>& rows) {
  std::string out;
  for (const auto& r : rows) out += r.dump() + "\n";
  return out;
}

}  // namespace lpsantalo

#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "aglercert/poly.hpp"

// Polynomial file format:
//   {"nvars": k, "degree": [d1,...], "coeffs": [{"idx": [...], "re": x, "im": y}, ...]}
// Indices are sorted lexicographically and floats are emitted with the
// shortest representation that round-trips, so write(parse(write(p))) is
// byte-identical.

namespace aglercert {

using json = nlohmann::ordered_json;

inline json poly_to_json(const AnalyticPoly& p) {
  json j;
  j["nvars"] = p.nvars();
  json deg = json::array();
  for (int v = 0; v < p.nvars(); ++v) deg.push_back(p.degree()[v]);
  j["degree"] = deg;
  json cs = json::array();
  for (const auto& [idx, c] : p.coeffs()) {  // std::map iterates in lex order
    json e;
    json ix = json::array();
    for (int v = 0; v < p.nvars(); ++v) ix.push_back(idx[v]);
    e["idx"] = ix;
    e["re"] = c.real() + 0.0;  // normalize -0.0
    e["im"] = c.imag() + 0.0;
    cs.push_back(e);
  }
  j["coeffs"] = cs;
  return j;
}

inline AnalyticPoly poly_from_json(const json& j) {
  try {
    int nvars = j.at("nvars").get<int>();
    if (nvars < 1 || nvars > 3) throw ParseError("nvars out of range");
    const auto& deg = j.at("degree");
    if (!deg.is_array() || static_cast<int>(deg.size()) != nvars)
      throw ParseError("degree length mismatch");
    MultiIndex box = MultiIndex::zeros(nvars);
    for (int v = 0; v < nvars; ++v) box[v] = deg.at(v).get<int>();
    AnalyticPoly p(nvars, box);
    for (const auto& e : j.at("coeffs")) {
      const auto& ix = e.at("idx");
      if (!ix.is_array() || static_cast<int>(ix.size()) != nvars)
        throw ParseError("coefficient index length mismatch");
      MultiIndex idx = MultiIndex::zeros(nvars);
      for (int v = 0; v < nvars; ++v) idx[v] = ix.at(v).get<int>();
      double re = e.at("re").get<double>();
      double im = e.at("im").get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError("non-finite coefficient");
      if (!(p.coeff(idx) == cd(0.0))) throw ParseError("duplicate coefficient index " + idx.str());
      p.set_coeff(idx, cd(re, im));
    }
    return p;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad polynomial JSON: ") + e.what());
  } catch (const DegreeError& e) {
    throw ParseError(std::string("bad polynomial JSON: ") + e.what());
  }
}

inline json vector_poly_to_json(const VectorPoly& E) {
  json j = json::array();
  for (const auto& e : E.entries()) j.push_back(poly_to_json(e));
  return j;
}

// Entries must agree on nvars; the vector box is the max of the entry boxes.
inline VectorPoly vector_poly_from_json(const json& j, int expect_nvars) {
  if (!j.is_array()) throw ParseError("vector polynomial must be an array");
  std::vector<AnalyticPoly> entries;
  MultiIndex box = MultiIndex::zeros(expect_nvars);
  for (const auto& e : j) {
    AnalyticPoly p = poly_from_json(e);
    if (p.nvars() != expect_nvars) throw ParseError("vector entry nvars mismatch");
    for (int v = 0; v < expect_nvars; ++v) box[v] = std::max(box[v], p.degree()[v]);
    entries.push_back(std::move(p));
  }
  VectorPoly E(expect_nvars, box);
  for (const auto& p : entries) E.push_back(p);
  return E;
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << dump_json(j);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

}  // namespace aglercert

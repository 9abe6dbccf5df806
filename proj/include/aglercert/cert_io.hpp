#pragma once

#include <string>

#include "aglercert/agler.hpp"
#include "aglercert/poly_io.hpp"

// Certificate file:
//   {"p": polyfile, "r": int, "s": int, "E": [polyfile...],
//    "H1": [...], "H2": [...], "metadata": {...}}
// Report file: one entry per check with value, threshold and PASS/FAIL.
// Both formats round-trip byte-identically.

namespace aglercert {

inline json metadata_to_json(const CertMetadata& m) {
  json j;
  j["path"] = m.path;
  j["e_residual"] = m.e_residual;
  j["eps_shift"] = m.eps_shift;
  j["find_h_residual"] = m.find_h_residual;
  j["find_h_solver_residual"] = m.find_h_solver_residual;
  j["find_h_iterations"] = m.find_h_iterations;
  j["grid_min"] = m.grid_min;
  j["conditioning_warning"] = m.conditioning_warning;
  j["v_unitarity"] = m.v_unitarity;
  j["v_mapping"] = m.v_mapping;
  j["v_eigenvector"] = m.v_eigenvector;
  json trace = json::array();
  for (const auto& a : m.search_trace) {
    json t;
    t["r"] = a.r;
    t["s"] = a.s;
    t["path"] = a.path;
    t["success"] = a.success;
    t["residual"] = a.residual;
    t["solver_residual"] = a.best_solver_residual;
    t["iterations"] = a.iterations;
    t["message"] = a.message;
    trace.push_back(t);
  }
  j["search_trace"] = trace;
  j["stability"] = m.stability;
  j["stability_min_modulus"] = m.stability_min_modulus;
  if (!m.created_at.empty()) j["created_at"] = m.created_at;
  return j;
}

inline CertMetadata metadata_from_json(const json& j) {
  CertMetadata m;
  m.path = j.value("path", "");
  m.e_residual = j.value("e_residual", 0.0);
  m.eps_shift = j.value("eps_shift", 0.0);
  m.find_h_residual = j.value("find_h_residual", 0.0);
  m.find_h_solver_residual = j.value("find_h_solver_residual", 0.0);
  m.find_h_iterations = j.value("find_h_iterations", 0);
  m.grid_min = j.value("grid_min", 0.0);
  m.conditioning_warning = j.value("conditioning_warning", false);
  m.v_unitarity = j.value("v_unitarity", 0.0);
  m.v_mapping = j.value("v_mapping", 0.0);
  m.v_eigenvector = j.value("v_eigenvector", 0.0);
  if (j.contains("search_trace"))
    for (const auto& t : j.at("search_trace")) {
      MultiplierAttempt a;
      a.r = t.value("r", 0);
      a.s = t.value("s", 0);
      a.path = t.value("path", "");
      a.success = t.value("success", false);
      a.residual = t.value("residual", 0.0);
      a.best_solver_residual = t.value("solver_residual", 0.0);
      a.iterations = t.value("iterations", 0);
      a.message = t.value("message", "");
      m.search_trace.push_back(a);
    }
  m.stability = j.value("stability", "");
  m.stability_min_modulus = j.value("stability_min_modulus", 0.0);
  m.created_at = j.value("created_at", "");
  return m;
}

inline json certificate_to_json(const AglerCertificate& cert) {
  json j;
  j["p"] = poly_to_json(cert.p);
  j["r"] = cert.r;
  j["s"] = cert.s;
  j["E"] = vector_poly_to_json(cert.E);
  j["H1"] = vector_poly_to_json(cert.H1);
  j["H2"] = vector_poly_to_json(cert.H2);
  j["metadata"] = metadata_to_json(cert.metadata);
  return j;
}

inline AglerCertificate certificate_from_json(const json& j) {
  try {
    AglerCertificate cert;
    cert.p = poly_from_json(j.at("p"));
    cert.r = j.at("r").get<int>();
    cert.s = j.at("s").get<int>();
    cert.E = vector_poly_from_json(j.at("E"), 2);
    cert.H1 = vector_poly_from_json(j.at("H1"), 3);
    cert.H2 = vector_poly_from_json(j.at("H2"), 3);
    if (j.contains("metadata")) cert.metadata = metadata_from_json(j.at("metadata"));
    return cert;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad certificate JSON: ") + e.what());
  }
}

inline json report_to_json(const Report& rep) {
  json j;
  j["pass"] = rep.pass;
  j["identity_residual"] = rep.identity_residual;
  j["tolerance"] = rep.tolerance;
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json e;
    e["name"] = c.name;
    e["hard"] = c.hard;
    e["pass"] = c.pass;
    e["value"] = c.value;
    e["threshold"] = c.threshold;
    e["detail"] = c.detail;
    checks.push_back(e);
  }
  j["checks"] = checks;
  json st;
  switch (rep.stability.kind) {
    case StabilityKind::Stable: st["kind"] = "stable"; break;
    case StabilityKind::Unstable: st["kind"] = "unstable"; break;
    case StabilityKind::Inconclusive: st["kind"] = "inconclusive"; break;
  }
  st["min_modulus"] = rep.stability.min_modulus;
  st["certified_lower"] = rep.stability.certified_lower;
  if (!rep.stability.witness.empty()) {
    json w = json::array();
    for (const cd& z : rep.stability.witness) {
      json zz;
      zz["re"] = z.real() + 0.0;
      zz["im"] = z.imag() + 0.0;
      w.push_back(zz);
    }
    st["witness"] = w;
  }
  j["stability"] = st;
  json counts;
  counts["e"] = rep.count_e;
  counts["h1"] = rep.count_h1;
  counts["h2"] = rep.count_h2;
  j["square_counts"] = counts;
  return j;
}

}  // namespace aglercert

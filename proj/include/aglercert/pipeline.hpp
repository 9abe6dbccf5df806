#pragma once

#include <chrono>
#include <future>
#include <string>

#include "aglercert/agler.hpp"
#include "aglercert/cert_io.hpp"
#include "aglercert/generator.hpp"

// End-to-end flows behind the command-line front end.  Exit codes:
//   0  certificate constructed and verified PASS / verification PASS
//   1  constructed but FAIL, or the search came back empty
//   2  input error: unstable or unverifiable p, parse failure, bad degrees

namespace aglercert {

struct CertifyOptions {
  double tol = 1e-8;
  int grid = 64;
  int max_multiplier = 6;
  std::uint64_t seed = 0;
  bool override_stability = false;
  bool compare_mode = false;
};

struct CertifyOutcome {
  int exit_code = 2;
  std::optional<AglerCertificate> certificate;
  std::optional<Report> report;
  json diagnostics = json::array();  // one object per warning/error
};

namespace detail {

inline std::string timestamp_now() {
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

inline json diag(const std::string& level, const std::string& code, const std::string& message) {
  json d;
  d["level"] = level;
  d["code"] = code;
  d["message"] = message;
  return d;
}

}  // namespace detail

inline CertifyOutcome run_certify(const AnalyticPoly& p, const CertifyOptions& opt = {}) {
  CertifyOutcome out;
  if (p.nvars() != 3 || p.degree()[2] != 1) {
    out.diagnostics.push_back(
        detail::diag("error", "bad-degree", "input must declare degree (n,m,1)"));
    return out;
  }

  CertMetadata meta;
  auto st = stability_check(p, opt.grid);
  meta.stability_min_modulus = st.min_modulus;
  switch (st.kind) {
    case StabilityKind::Stable:
      meta.stability = "stable";
      break;
    case StabilityKind::Unstable: {
      meta.stability = "unstable";
      json d = detail::diag("error", "unstable", "zero witness in the closed tridisk");
      json w = json::array();
      for (const cd& z : st.witness) {
        json zz;
        zz["re"] = z.real();
        zz["im"] = z.imag();
        w.push_back(zz);
      }
      d["witness"] = w;
      out.diagnostics.push_back(d);
      return out;
    }
    case StabilityKind::Inconclusive:
      meta.stability = "inconclusive";
      if (!opt.override_stability) {
        out.diagnostics.push_back(detail::diag(
            "error", "stability-inconclusive",
            "stability not certified; rerun with --override-stability to proceed"));
        return out;
      }
      out.diagnostics.push_back(detail::diag("warning", "stability-inconclusive",
                                             "proceeding under --override-stability"));
      break;
  }

  auto [a, b] = split_z3(p);
  TrigPoly t = mod_squared_diff(a, b);

  const int n = p.degree()[0], m = p.degree()[1];
  MultiplierResult search;
  try {
    search = multiplier_search(t, {n, m}, opt.max_multiplier);
  } catch (const NegativeInputError& e) {
    out.diagnostics.push_back(detail::diag("error", "not-positive", e.what()));
    return out;
  }
  meta.search_trace = search.attempts;
  meta.grid_min = detail::torus_grid_min(t, 256);
  meta.conditioning_warning = search.conditioning_warning;
  if (search.conditioning_warning)
    out.diagnostics.push_back(detail::diag("warning", "conditioning",
                                           "positivity margin of |a|^2-|b|^2 is below 1e-6"));
  if (!search.found) {
    out.exit_code = 1;
    out.diagnostics.push_back(detail::diag(
        "error", "exhausted", "no square decomposition found up to the multiplier cap"));
    return out;
  }
  meta.path = search.path;
  meta.e_residual = search.residual;
  meta.eps_shift = search.eps_shift;
  const int r = search.r, s = search.s;

  FindHResult hres = find_H(p, search.E, r, s);
  meta.find_h_residual = hres.residual;
  meta.find_h_solver_residual = hres.evidence.best_residual;
  meta.find_h_iterations = hres.evidence.iterations;
  if (!hres.success) {
    // existence is guaranteed for a verified E, so this is a solver failure
    out.exit_code = 1;
    json d = detail::diag("error", "h-search-failed",
                          "Gram search for H1, H2 did not converge; solver failure");
    d["best_residual"] = hres.evidence.best_residual;
    out.diagnostics.push_back(d);
    return out;
  }

  try {
    RationalMatrixFn V = build_V(a, b, search.E, r, s, {.stability_grid = 32,
                                                        .assume_a_stable = true});
    VCheckReport vrep = check_V(V, a, b, search.E, r, s, opt.grid, 256, opt.seed ^ 0xabcdu);
    meta.v_unitarity = vrep.unitarity_max;
    meta.v_mapping = vrep.mapping_max;
    meta.v_eigenvector = vrep.eigenvector_max;
  } catch (const Error& e) {
    out.diagnostics.push_back(detail::diag("warning", "v-check", e.what()));
  }

  if (!opt.compare_mode) meta.created_at = detail::timestamp_now();

  AglerCertificate cert;
  cert.p = p;
  cert.r = r;
  cert.s = s;
  cert.E = search.E;
  cert.H1 = hres.H1;
  cert.H2 = hres.H2;
  cert.metadata = meta;

  VerifyOptions vopt;
  vopt.tol = opt.tol;
  vopt.stability_grid = opt.grid;
  Report rep = verify_certificate(cert, vopt);
  out.certificate = cert;
  out.report = rep;
  out.exit_code = rep.pass ? 0 : 1;
  if (!rep.pass)
    out.diagnostics.push_back(
        detail::diag("error", "verify-fail", "constructed certificate failed verification"));
  return out;
}

struct VerifyOutcome {
  int exit_code = 2;
  std::optional<Report> report;
  json diagnostics = json::array();
};

inline VerifyOutcome run_verify(const AglerCertificate& cert, double tol = 1e-8, int grid = 64) {
  VerifyOutcome out;
  VerifyOptions vopt;
  vopt.tol = tol;
  vopt.stability_grid = grid;
  Report rep = verify_certificate(cert, vopt);
  out.report = rep;
  out.exit_code = rep.pass ? 0 : 1;
  return out;
}

// ---------------------------------------------------------------------------
// Counterexample lab: sample near-tight (a, b) pairs and look for inputs
// whose square decomposition needs a nontrivial monomial multiplier.  The
// output is evidence only; an Infeasible attempt never proves anything.

struct LabOptions {
  int n = 2, m = 2;
  int trials = 8;
  std::uint64_t seed = 1;
  int max_multiplier = 4;
  double tightness_lo = 0.02;  // delta: max|b/a| drawn in [1-0.1, 1-delta]
  double tightness_hi = 0.10;
  double tol = 1e-8;
};

struct LabTrial {
  int index = 0;
  AnalyticPoly a{2, MultiIndex{0, 0}};
  AnalyticPoly b{2, MultiIndex{0, 0}};
  double tightness = 0.0;
  double grid_min = 0.0;
  bool base_feasible = false;
  double base_residual = 0.0;
  SolveEvidence base_evidence;
  bool interesting = false;  // infeasible at (n,m) but feasible above
  int found_r = -1, found_s = -1;
  bool certificate_pass = false;
};

struct LabReport {
  LabOptions options;
  std::vector<LabTrial> trials;
  int interesting_count = 0;
};

inline LabTrial run_lab_trial(const LabOptions& opt, int index) {
  LabTrial trial;
  trial.index = index;
  Rng rng(opt.seed + 0x51ed2700ull * (index + 1));

  GenOptions gopt;
  AnalyticPoly a =
      detail::one_var_factor_product(rng, opt.n, 0, gopt) *
      detail::one_var_factor_product(rng, opt.m, 1, gopt);
  a = a.viewed_at(MultiIndex{opt.n, opt.m});
  AnalyticPoly c(2, MultiIndex{opt.n, opt.m});
  for (int i = 0; i <= opt.n; ++i)
    for (int j = 0; j <= opt.m; ++j) c.set_coeff(MultiIndex{i, j}, rng.cgaussian());

  // scale b so that max over the torus of |b/a| lands at 1 - delta
  double delta = rng.uniform(opt.tightness_lo, opt.tightness_hi);
  const int grid = 128;
  double ratio_max = 0.0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      std::vector<cd> z{std::polar(1.0, 2.0 * std::numbers::pi * i / grid),
                        std::polar(1.0, 2.0 * std::numbers::pi * j / grid)};
      ratio_max = std::max(ratio_max, std::abs(c.eval(z)) / std::abs(a.eval(z)));
    }
  AnalyticPoly b = c.scaled((1.0 - delta) / ratio_max);
  trial.a = a;
  trial.b = b;
  trial.tightness = 1.0 - delta;

  TrigPoly t = mod_squared_diff(a, b);
  trial.grid_min = detail::torus_grid_min(t, 256);
  if (trial.grid_min <= 0.0) return trial;  // near-tight sampling overshot; recorded as-is

  SosOptions sopt;
  TrigSosResult base = trig_sos(t, {opt.n, opt.m}, sopt);
  trial.base_feasible = base.feasible;
  trial.base_residual = base.residual;
  trial.base_evidence = base.evidence;
  if (base.feasible) return trial;

  MultiplierResult esc = multiplier_search(t, {opt.n, opt.m}, opt.max_multiplier, sopt);
  if (esc.found && (esc.r > 0 || esc.s > 0)) {
    trial.interesting = true;
    trial.found_r = esc.r;
    trial.found_s = esc.s;
    // a candidate of interest must come with a verified certificate
    AnalyticPoly p(3, MultiIndex{opt.n, opt.m, 1});
    for (const auto& [idx, v] : a.coeffs()) p.set_coeff(MultiIndex{idx[0], idx[1], 0}, v);
    for (const auto& [idx, v] : b.coeffs()) p.set_coeff(MultiIndex{idx[0], idx[1], 1}, v);
    CertifyOptions copt;
    copt.tol = opt.tol;
    copt.max_multiplier = opt.max_multiplier;
    copt.override_stability = true;
    auto cert = run_certify(p, copt);
    trial.certificate_pass = cert.exit_code == 0;
  }
  return trial;
}

inline LabReport run_lab(const LabOptions& opt) {
  LabReport rep;
  rep.options = opt;
  std::vector<std::future<LabTrial>> futs;
  for (int i = 0; i < opt.trials; ++i)
    futs.push_back(std::async(std::launch::async, run_lab_trial, opt, i));
  for (auto& f : futs) rep.trials.push_back(f.get());  // ordered by trial index
  for (const auto& t : rep.trials)
    if (t.interesting) ++rep.interesting_count;
  return rep;
}

inline json lab_report_to_json(const LabReport& rep) {
  json j;
  json o;
  o["n"] = rep.options.n;
  o["m"] = rep.options.m;
  o["trials"] = rep.options.trials;
  o["seed"] = rep.options.seed;
  o["max_multiplier"] = rep.options.max_multiplier;
  j["options"] = o;
  json trials = json::array();
  for (const auto& t : rep.trials) {
    json e;
    e["index"] = t.index;
    e["a"] = poly_to_json(t.a);
    e["b"] = poly_to_json(t.b);
    e["tightness"] = t.tightness;
    e["grid_min"] = t.grid_min;
    e["base_feasible"] = t.base_feasible;
    e["base_residual"] = t.base_residual;
    e["base_solver_residual"] = t.base_evidence.best_residual;
    e["base_iterations"] = t.base_evidence.iterations;
    e["interesting"] = t.interesting;
    if (t.interesting) {
      e["found_r"] = t.found_r;
      e["found_s"] = t.found_s;
      e["certificate_pass"] = t.certificate_pass;
    }
    trials.push_back(e);
  }
  j["trials"] = trials;
  j["interesting_count"] = rep.interesting_count;
  j["note"] = "evidence only: an infeasible attempt is not a proof of infeasibility";
  return j;
}

}  // namespace aglercert

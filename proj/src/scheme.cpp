#include "qhmix/scheme.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace qhmix {

std::string to_string(Regularization reg) {
  return reg == Regularization::QGD ? "qgd" : "qhd";
}

std::string to_string(BoundaryMode mode) {
  return mode == BoundaryMode::Copy ? "copy" : "periodic";
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

Regularization parse_regularization(const std::string& text) {
  const std::string t = lower(text);
  if (t == "qgd") return Regularization::QGD;
  if (t == "qhd") return Regularization::QHD;
  throw Error(ErrorCode::ConfigError, "unknown regularization '" + text + "'");
}

BoundaryMode parse_boundary(const std::string& text) {
  const std::string t = lower(text);
  if (t == "copy") return BoundaryMode::Copy;
  if (t == "periodic") return BoundaryMode::Periodic;
  throw Error(ErrorCode::ConfigError, "unknown boundary mode '" + text + "'");
}

std::string to_string(PartialDensities mode) {
  return mode == PartialDensities::NonNegative ? "nonnegative" : "signed";
}

PartialDensities parse_partials(const std::string& text) {
  const std::string t = lower(text);
  if (t == "nonnegative") return PartialDensities::NonNegative;
  if (t == "signed") return PartialDensities::Signed;
  throw Error(ErrorCode::ConfigError, "unknown partial-density mode '" + text + "'");
}

void SchemeConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); };
  if (!(a > 0.0) || !std::isfinite(a)) bad("a must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) bad("beta must be positive");
  if (!(a_s >= 0.0) || !std::isfinite(a_s)) bad("Schmidt number must be non-negative");
  if (!(prandtl_inv_reported > 0.0) || !std::isfinite(prandtl_inv_reported)) {
    bad("inverse Prandtl value must be positive");
  }
  if (i_tau != 0 && i_tau != 1) bad("i_tau must be 0 or 1");
  for (double q : q_source) {
    if (!std::isfinite(q)) bad("heat source must be finite");
  }
}

MeshState::MeshState(const Mesh& m, const GasPair& g)
    : mesh(m),
      gases(g),
      rho1(m.n_nodes()),
      rho2(m.n_nodes()),
      mom(m.n_nodes()),
      etot(m.n_nodes()),
      rho(m.n_nodes()),
      u(m.n_nodes()),
      rho_eps(m.n_nodes()),
      p(m.n_nodes()),
      theta(m.n_nodes()),
      cs2(m.n_nodes()),
      cs(m.n_nodes()),
      alpha1(m.n_nodes()),
      alpha2(m.n_nodes()),
      cp(m.n_nodes()) {}

void MeshState::refresh_closure(PartialDensities partials) {
  const std::size_t n = size();
  for (NodeField* f : {&rho, &u, &rho_eps, &p, &theta, &cs2, &cs, &alpha1, &alpha2, &cp}) {
    if (f->size() != n) *f = NodeField(n);
  }
  // 0 marks success, otherwise 1 + ErrorCode.
  std::vector<int> status(n, 0);
  const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long li = 0; li < nn; ++li) {
    const auto i = static_cast<std::size_t>(li);
    Closure cl;
    ErrorCode why{};
    if (!try_closure(conserved(i), gases, cl, why, partials)) {
      status[i] = 1 + static_cast<int>(why);
      continue;
    }
    rho[i] = cl.coeffs.rho;
    u[i] = cl.u;
    rho_eps[i] = cl.rho_eps;
    p[i] = cl.p;
    theta[i] = cl.theta;
    cs2[i] = cl.cs2;
    cs[i] = std::sqrt(cl.cs2);
    alpha1[i] = cl.alpha1;
    alpha2[i] = cl.alpha2;
    cp[i] = cl.coeffs.cp_mix;
  }
  const auto bad = std::find_if(status.begin(), status.end(), [](int s) { return s != 0; });
  if (bad == status.end()) return;

  const auto i = static_cast<std::size_t>(bad - status.begin());
  const auto cause = static_cast<ErrorCode>(*bad - 1);
  const ErrorCode code =
      cause == ErrorCode::StateBlowup ? ErrorCode::StateBlowup : ErrorCode::AdmissibilityLost;
  std::ostringstream os;
  os.precision(17);
  os << "node " << i << " (x = " << mesh.node(i) << ") at t = " << time << ": "
     << to_string(cause) << "; rho1 = " << rho1[i] << ", rho2 = " << rho2[i]
     << ", mom = " << mom[i] << ", E = " << etot[i];
  throw SolverError(code, os.str(), static_cast<int>(i), time, cause);
}

Coefficients coefficients(const MeshState& s, const SchemeConfig& cfg) {
  const Mesh& m = s.mesh;
  Coefficients c;
  c.tau = NodeField(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    c.tau[i] = cfg.a * m.h() / (s.cs[i] + cfg.i_tau * std::abs(s.u[i]));
  }
  const HalfField tau_h = avg(m, c.tau);
  const HalfField p_h = avg(m, s.p);
  c.nu = cfg.a_s * tau_h * p_h;
  c.kappa = cfg.a_pr() * tau_h * avg(m, s.cp) * p_h;
  return c;
}

namespace {

HalfField heat_source(const MeshState& s, const SchemeConfig& cfg) {
  if (cfg.q_source.empty()) return HalfField(s.mesh.n_half());
  if (cfg.q_source.size() != s.mesh.n_half()) {
    throw Error(ErrorCode::LengthMismatch, "heat source must have one value per cell");
  }
  return HalfField(cfg.q_source);
}

// Everything the fluxes and identities need, on the auxiliary mesh.
struct HalfTerms {
  HalfField j1, j2, j, w_hat, pi, minus_q;
};

HalfTerms half_terms(const MeshState& s, const SchemeConfig& cfg) {
  const Mesh& m = s.mesh;
  const Coefficients c = coefficients(s, cfg);
  const HalfField q = heat_source(s, cfg);

  const HalfField tau = avg(m, c.tau);
  const HalfField rho = avg(m, s.rho);
  const HalfField rho1 = avg(m, s.rho1);
  const HalfField rho2 = avg(m, s.rho2);
  const HalfField u = avg(m, s.u);
  const HalfField du = delta(m, s.u);
  const HalfField dp = delta(m, s.p);
  const HalfField dtheta = delta(m, s.theta);

  HalfTerms t;
  t.w_hat = tau / rho * (rho * u * du + dp);
  if (cfg.reg == Regularization::QGD) {
    t.j1 = rho1 * u - tau * u * delta(m, s.rho1 * s.u) - rho1 * t.w_hat;
    t.j2 = rho2 * u - tau * u * delta(m, s.rho2 * s.u) - rho2 * t.w_hat;
    t.pi = c.nu * du + u * rho * t.w_hat +
           tau * (u * dp + avg(m, s.rho * s.cs2) * du -
                  avg(m, s.cs2) / (avg(m, s.cp) * avg(m, s.theta)) * q);
    const HalfField enthalpy_ratio = (avg(m, s.rho_eps) + avg(m, s.p)) / rho;
    t.minus_q = c.kappa * dtheta +
                tau * ((delta(m, s.rho_eps) - enthalpy_ratio * delta(m, s.rho)) * u * u - q * u);
  } else {
    const HalfField v = u - t.w_hat;
    t.j1 = rho1 * v;
    t.j2 = rho2 * v;
    t.pi = u * rho * t.w_hat;
    if (cfg.qhd_viscosity) t.pi += c.nu * du;
    t.minus_q = c.kappa * dtheta;
  }
  t.j = t.j1 + t.j2;
  return t;
}

}  // namespace

Regularizers regularizers(const MeshState& s, const SchemeConfig& cfg) {
  const Mesh& m = s.mesh;
  const HalfTerms t = half_terms(s, cfg);
  const HalfField rho1 = avg(m, s.rho1);
  const HalfField rho2 = avg(m, s.rho2);
  const HalfField u = avg(m, s.u);
  Regularizers r;
  r.w_hat = t.w_hat;
  r.pi = t.pi;
  r.minus_q = t.minus_q;
  if (cfg.reg == Regularization::QHD) {
    r.w1 = r.w2 = r.w = t.w_hat;
    return r;
  }
  for (std::size_t i = 0; i < rho1.size(); ++i) {
    if (rho1[i] == 0.0 || rho2[i] == 0.0) {
      std::ostringstream os;
      os << "component " << (rho1[i] == 0.0 ? 1 : 2) << " vanishes around half node " << i;
      throw Error(ErrorCode::ZeroAveragedDensity, os.str());
    }
  }
  const HalfField tau_u = avg(m, coefficients(s, cfg).tau) * u;
  r.w1 = tau_u * delta(m, s.rho1 * s.u) / rho1 + t.w_hat;
  r.w2 = tau_u * delta(m, s.rho2 * s.u) / rho2 + t.w_hat;
  r.w = u - t.j / avg(m, s.rho);
  return r;
}

HalfFluxes half_fluxes(const MeshState& s, const SchemeConfig& cfg) {
  const Mesh& m = s.mesh;
  const HalfTerms t = half_terms(s, cfg);
  const HalfField rho = avg(m, s.rho);
  const HalfField u = avg(m, s.u);
  const HalfField p = avg(m, s.p);
  const HalfField v = t.j / rho;
  const HalfField uu = left_value(m, s.u) * right_value(m, s.u);
  const double h2 = m.h() * m.h();

  HalfFluxes f;
  f.mass1 = t.j1;
  f.mass2 = t.j2;
  f.mass = t.j;
  f.pi = t.pi;
  f.minus_q = t.minus_q;
  f.momentum = t.j * u + p - t.pi;
  f.energy = (0.5 * rho * uu + avg(m, s.rho_eps) + p) * v -
             0.25 * h2 * delta(m, s.p) * delta(m, s.u) - t.minus_q - t.pi * u;
  return f;
}

double time_step(const MeshState& s, const SchemeConfig& cfg) {
  double fastest = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    fastest = std::max(fastest, s.cs[i] + std::abs(s.u[i]));
  }
  return cfg.beta * s.mesh.h() / fastest;
}

double time_step(const MeshState& s, const SchemeConfig& cfg, double remaining) {
  return std::min(time_step(s, cfg), remaining);
}

ConservedTotals totals(const MeshState& s, BoundaryMode mode) {
  const std::size_t n = s.size();
  const double h = s.mesh.h();
  ConservedTotals t;
  for (std::size_t i = 0; i < n; ++i) {
    double w = h;
    if (mode == BoundaryMode::Periodic) {
      if (i == n - 1) continue;
    } else if (i == 0 || i == n - 1) {
      w = 0.5 * h;
    }
    t.mass1 += w * s.rho1[i];
    t.mass2 += w * s.rho2[i];
    t.momentum += w * s.mom[i];
    t.energy += w * s.etot[i];
  }
  return t;
}

namespace {

double max_ratio(const NodeField& r, const NodeField& scale) {
  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (scale[i] > 0.0) worst = std::max(worst, std::abs(r[i]) / scale[i]);
    else if (r[i] != 0.0) return std::numeric_limits<double>::infinity();
  }
  return worst;
}

}  // namespace

double IdentityResiduals::max_relative_mass() const { return max_ratio(mass, mass_scale); }
double IdentityResiduals::max_relative_kinetic() const {
  return max_ratio(kinetic, kinetic_scale);
}
double IdentityResiduals::max_relative_internal() const {
  return max_ratio(internal, internal_scale);
}

IdentityResiduals energy_identity_residuals(const MeshState& before, const MeshState& after,
                                            const SchemeConfig& cfg, double dt) {
  const Mesh& m = before.mesh;
  const double h = m.h();
  const std::size_t n = before.size();
  const std::size_t halves = m.n_half();
  const bool periodic = cfg.boundary == BoundaryMode::Periodic;

  const HalfTerms t = half_terms(before, cfg);
  const HalfField q = heat_source(before, cfg);
  const HalfField rho_h = avg(m, before.rho);
  const HalfField v = t.j / rho_h;
  const HalfField w = avg(m, before.u) - v;
  const HalfField kin_flux = 0.5 * t.j * left_value(m, before.u) * right_value(m, before.u);
  const HalfField int_flux = t.j * avg(m, before.rho_eps) / rho_h;
  const HalfField p_h = avg(m, before.p);
  const HalfField pi_du = t.pi * delta(m, before.u);
  const HalfField w_dp = w * delta(m, before.p);

  IdentityResiduals r;
  for (NodeField* f : {&r.mass, &r.kinetic, &r.internal, &r.mass_scale, &r.kinetic_scale,
                       &r.internal_scale}) {
    *f = NodeField(n);
  }

  // Node i sits between half nodes l = i - 1 and i (wrapped when periodic).
  const std::size_t first = periodic ? 0 : 1;
  for (std::size_t i = first; i + 1 < n; ++i) {
    const std::size_t l = i == 0 ? halves - 1 : i - 1;
    const std::size_t rr = i;
    auto ds = [&](const HalfField& f) { return (f[rr] - f[l]) / h; };
    auto ds_mag = [&](const HalfField& f) { return (std::abs(f[rr]) + std::abs(f[l])) / h; };
    auto as = [&](const HalfField& f) { return 0.5 * (f[rr] + f[l]); };
    auto as_mag = [&](const HalfField& f) { return 0.5 * (std::abs(f[rr]) + std::abs(f[l])); };

    const double rho = before.rho[i];
    const double rho_new = after.rho[i];
    const double u = before.u[i];
    const double u_new = after.u[i];
    const double p = before.p[i];
    const double dtu = (u_new - u) / dt;
    const double split = 0.5 * dt * rho_new * dtu * dtu;

    const double mass_dt = (rho_new - rho) / dt;
    r.mass[i] = mass_dt + ds(t.j);
    r.mass_scale[i] = (std::abs(rho_new) + std::abs(rho)) / dt + ds_mag(t.j);

    const double kin_new = rho_new * u_new * u_new;
    const double kin_old = rho * u * u;
    r.kinetic[i] = 0.5 * (kin_new - kin_old) / dt - split + ds(kin_flux) + u * ds(p_h) -
                   u * ds(t.pi);
    r.kinetic_scale[i] = 0.5 * (kin_new + kin_old) / dt + split + ds_mag(kin_flux) +
                         std::abs(u) * (ds_mag(p_h) + ds_mag(t.pi));

    const double re = before.rho_eps[i];
    const double re_new = after.rho_eps[i];
    r.internal[i] = (re_new - re) / dt + split + ds(int_flux) - ds(t.minus_q) - as(pi_du) +
                    p * ds(v) - as(w_dp) - as(q);
    r.internal_scale[i] = (std::abs(re_new) + std::abs(re)) / dt + split + ds_mag(int_flux) +
                          ds_mag(t.minus_q) + as_mag(pi_du) + std::abs(p) * ds_mag(v) +
                          as_mag(w_dp) + as_mag(q);
  }
  return r;
}

MeshState step(const MeshState& state, const SchemeConfig& cfg, double dt) {
  MeshState out = state;
  detail::KernelWorkspace ws;
  detail::step_into(state, cfg, dt, out, ws);
  return out;
}

namespace detail {

void apply_boundary(MeshState& s, BoundaryMode mode) {
  const std::size_t last = s.size() - 1;
  if (mode == BoundaryMode::Periodic) {
    s.set_conserved(last, s.conserved(0));
    return;
  }
  // Copy rho_k, u and rho*eps from the neighbouring interior node, then
  // rebuild the momentum and total energy from them.
  auto copy = [&s](std::size_t dst, std::size_t src) {
    const double rho1 = s.rho1[src];
    const double rho2 = s.rho2[src];
    const double rho = rho1 + rho2;
    const double u = s.mom[src] / rho;
    const double rho_eps = s.etot[src] - 0.5 * s.mom[src] * u;
    s.rho1[dst] = rho1;
    s.rho2[dst] = rho2;
    s.mom[dst] = rho * u;
    s.etot[dst] = 0.5 * rho * u * u + rho_eps;
  };
  copy(0, 1);
  copy(last, last - 1);
}

}  // namespace detail

namespace {

StepDiagnostics diagnose(const MeshState& s, BoundaryMode mode, long step, double dt) {
  StepDiagnostics d;
  d.step = step;
  d.t = s.time;
  d.dt = dt;
  d.totals = totals(s, mode);
  const auto [pmin, pmax] = std::minmax_element(s.p.begin(), s.p.end());
  const auto [tmin, tmax] = std::minmax_element(s.theta.begin(), s.theta.end());
  const auto [amin, amax] = std::minmax_element(s.alpha1.begin(), s.alpha1.end());
  d.p_min = *pmin;
  d.p_max = *pmax;
  d.theta_min = *tmin;
  d.theta_max = *tmax;
  d.alpha1_min = *amin;
  d.alpha1_max = *amax;
  d.rho1_min = *std::min_element(s.rho1.begin(), s.rho1.end());
  d.rho2_min = *std::min_element(s.rho2.begin(), s.rho2.end());
  return d;
}

// Running extrema between two recorded steps.
void merge_extrema(StepDiagnostics& into, const StepDiagnostics& d) {
  into.p_min = std::min(into.p_min, d.p_min);
  into.p_max = std::max(into.p_max, d.p_max);
  into.theta_min = std::min(into.theta_min, d.theta_min);
  into.theta_max = std::max(into.theta_max, d.theta_max);
  into.alpha1_min = std::min(into.alpha1_min, d.alpha1_min);
  into.alpha1_max = std::max(into.alpha1_max, d.alpha1_max);
  into.rho1_min = std::min(into.rho1_min, d.rho1_min);
  into.rho2_min = std::min(into.rho2_min, d.rho2_min);
}

}  // namespace

RunResult run(const MeshState& initial, const SchemeConfig& cfg, double t_fin,
              const RunOptions& options) {
  cfg.validate();
  if (!(t_fin >= initial.time) || !std::isfinite(t_fin)) {
    throw Error(ErrorCode::InvalidParameter, "final time precedes the initial time");
  }
  const int stride = std::max(1, options.stride);

  RunResult result;
  result.final = initial;
  result.final.refresh_closure(cfg.partials);
  {
    StepDiagnostics d0 = diagnose(result.final, cfg.boundary, 0, 0.0);
    result.history.push_back(d0);
    if (options.observer) options.observer(result.final, d0);
  }

  MeshState next = result.final;
  detail::KernelWorkspace ws;
  StepDiagnostics pending;
  bool have_pending = false;
  long steps = 0;
  while (result.final.time < t_fin) {
    const double remaining = t_fin - result.final.time;
    const double dt = time_step(result.final, cfg, remaining);
    const bool last = dt == remaining;
    try {
      detail::step_into(result.final, cfg, dt, next, ws);
    } catch (const SolverError& e) {
      throw RunError(e, result.final, result.history);
    }
    if (last) next.time = t_fin;
    ++steps;

    StepDiagnostics d = diagnose(next, cfg.boundary, steps, dt);
    if (options.identities) {
      const IdentityResiduals r = energy_identity_residuals(result.final, next, cfg, dt);
      d.mass_identity = r.max_relative_mass();
      d.kinetic_identity = r.max_relative_kinetic();
      d.internal_identity = r.max_relative_internal();
    }
    if (have_pending) {
      merge_extrema(d, pending);
      d.mass_identity = std::max(d.mass_identity, pending.mass_identity);
      d.kinetic_identity = std::max(d.kinetic_identity, pending.kinetic_identity);
      d.internal_identity = std::max(d.internal_identity, pending.internal_identity);
    }
    std::swap(result.final, next);

    if (steps % stride == 0 || result.final.time >= t_fin) {
      have_pending = false;
      result.history.push_back(d);
      if (options.observer) options.observer(result.final, d);
    } else {
      pending = d;
      have_pending = true;
    }
  }
  result.steps = steps;
  return result;
}

}  // namespace qhmix

#include <cmath>

#include "qhmix/scheme.hpp"

namespace qhmix::detail {

namespace {

struct NodeView {
  const double* rho1;
  const double* rho2;
  const double* rho;
  const double* u;
  const double* rho_eps;
  const double* p;
  const double* theta;
  const double* cs2;
  const double* cs;
  const double* cp;
};

struct Flux {
  double m1, m2, mom, energy;
};

// All four fluxes across the half node between nodes l and l + 1.
inline Flux half_flux(const NodeView& s, std::size_t l, const SchemeConfig& cfg, double h,
                      double q) {
  const std::size_t r = l + 1;
  const double tau_l = cfg.a * h / (s.cs[l] + cfg.i_tau * std::abs(s.u[l]));
  const double tau_r = cfg.a * h / (s.cs[r] + cfg.i_tau * std::abs(s.u[r]));
  const double tau = 0.5 * (tau_l + tau_r);
  const double rho = 0.5 * (s.rho[l] + s.rho[r]);
  const double rho1 = 0.5 * (s.rho1[l] + s.rho1[r]);
  const double rho2 = 0.5 * (s.rho2[l] + s.rho2[r]);
  const double u = 0.5 * (s.u[l] + s.u[r]);
  const double p = 0.5 * (s.p[l] + s.p[r]);
  const double rho_eps = 0.5 * (s.rho_eps[l] + s.rho_eps[r]);
  const double cp = 0.5 * (s.cp[l] + s.cp[r]);
  const double du = (s.u[r] - s.u[l]) / h;
  const double dp = (s.p[r] - s.p[l]) / h;
  const double dtheta = (s.theta[r] - s.theta[l]) / h;

  const double nu = cfg.a_s * tau * p;
  const double kappa = cfg.a_pr() * tau * cp * p;
  const double w_hat = tau / rho * (rho * u * du + dp);

  double j1, j2, pi, minus_q;
  if (cfg.reg == Regularization::QGD) {
    const double d_m1 = (s.rho1[r] * s.u[r] - s.rho1[l] * s.u[l]) / h;
    const double d_m2 = (s.rho2[r] * s.u[r] - s.rho2[l] * s.u[l]) / h;
    j1 = rho1 * u - tau * u * d_m1 - rho1 * w_hat;
    j2 = rho2 * u - tau * u * d_m2 - rho2 * w_hat;
    const double rho_cs2 = 0.5 * (s.rho[l] * s.cs2[l] + s.rho[r] * s.cs2[r]);
    const double cs2 = 0.5 * (s.cs2[l] + s.cs2[r]);
    const double theta = 0.5 * (s.theta[l] + s.theta[r]);
    pi = nu * du + u * rho * w_hat + tau * (u * dp + rho_cs2 * du - cs2 / (cp * theta) * q);
    const double d_re = (s.rho_eps[r] - s.rho_eps[l]) / h;
    const double d_rho = (s.rho[r] - s.rho[l]) / h;
    minus_q = kappa * dtheta + tau * ((d_re - (rho_eps + p) / rho * d_rho) * u * u - q * u);
  } else {
    const double v = u - w_hat;
    j1 = rho1 * v;
    j2 = rho2 * v;
    pi = u * rho * w_hat;
    if (cfg.qhd_viscosity) pi += nu * du;
    minus_q = kappa * dtheta;
  }
  const double j = j1 + j2;
  const double v = j / rho;
  Flux f;
  f.m1 = j1;
  f.m2 = j2;
  f.mom = j * u + p - pi;
  f.energy = (0.5 * rho * s.u[l] * s.u[r] + rho_eps + p) * v - 0.25 * h * h * dp * du -
             minus_q - pi * u;
  return f;
}

}  // namespace

void step_into(const MeshState& in, const SchemeConfig& cfg, double dt, MeshState& out,
               KernelWorkspace& ws) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidParameter, "time step must be positive");
  }
  const Mesh& mesh = in.mesh;
  const std::size_t halves = mesh.n_half();
  const std::size_t nodes = mesh.n_nodes();
  if (in.size() != nodes || in.p.size() != nodes) {
    throw Error(ErrorCode::LengthMismatch, "state does not match its mesh");
  }
  if (!cfg.q_source.empty() && cfg.q_source.size() != halves) {
    throw Error(ErrorCode::LengthMismatch, "heat source must have one value per cell");
  }
  if (out.size() != nodes || &out == &in) {
    throw Error(ErrorCode::LengthMismatch, "output state must be a distinct state of equal size");
  }
  out.mesh = in.mesh;
  out.gases = in.gases;

  ws.f1.resize(halves);
  ws.f2.resize(halves);
  ws.fm.resize(halves);
  ws.fe.resize(halves);

  const NodeView view{in.rho1.data(), in.rho2.data(),    in.rho.data(), in.u.data(),
                      in.rho_eps.data(), in.p.data(),    in.theta.data(), in.cs2.data(),
                      in.cs.data(),   in.cp.data()};
  const double h = mesh.h();
  const double* q = cfg.q_source.empty() ? nullptr : cfg.q_source.data();
  const long nh = static_cast<long>(halves);

#pragma omp parallel for schedule(static)
  for (long li = 0; li < nh; ++li) {
    const auto l = static_cast<std::size_t>(li);
    const Flux f = half_flux(view, l, cfg, h, q ? q[l] : 0.0);
    ws.f1[l] = f.m1;
    ws.f2[l] = f.m2;
    ws.fm[l] = f.mom;
    ws.fe[l] = f.energy;
  }

  const bool periodic = cfg.boundary == BoundaryMode::Periodic;
  const long first = periodic ? 0 : 1;
  const long last = static_cast<long>(nodes) - 2;
  const double k = dt / h;

#pragma omp parallel for schedule(static)
  for (long li = first; li <= last; ++li) {
    const auto i = static_cast<std::size_t>(li);
    const std::size_t l = i == 0 ? halves - 1 : i - 1;
    out.rho1[i] = in.rho1[i] - k * (ws.f1[i] - ws.f1[l]);
    out.rho2[i] = in.rho2[i] - k * (ws.f2[i] - ws.f2[l]);
    out.mom[i] = in.mom[i] - k * (ws.fm[i] - ws.fm[l]);
    double e = in.etot[i] - k * (ws.fe[i] - ws.fe[l]);
    if (q) e += dt * 0.5 * (q[l] + q[i]);
    out.etot[i] = e;
  }

  apply_boundary(out, cfg.boundary);
  out.time = in.time + dt;
  out.refresh_closure(cfg.partials);
}

}  // namespace qhmix::detail

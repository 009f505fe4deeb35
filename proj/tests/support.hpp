#pragma once
// Shared generators and independent oracles for the test and acceptance
// programs. Nothing here calls the closure code it is meant to check, except
// primitive_to_conserved for assembling inputs.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qhmix/cases.hpp"
#include "qhmix/eos.hpp"
#include "qhmix/scheme.hpp"

namespace qhmix::testing {

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Gas pairs of all published cases.
inline std::vector<GasPair> benchmark_pairs() {
  std::vector<GasPair> out;
  for (const std::string& id : case_ids()) out.push_back(make_case(id).gases);
  return out;
}

struct RandomPrimitive {
  GasPair gases;
  double p, u, theta, alpha1;
  ConservedState state;
};

/// alpha1 log-uniform towards either end of [1e-6, 1 - 1e-6], p log-uniform in
/// [1e4, 1e10] Pa, theta uniform in [250, 1500] K, u uniform in [-500, 500].
class StateGenerator {
 public:
  explicit StateGenerator(unsigned long long seed) : rng_(seed), pairs_(benchmark_pairs()) {}

  RandomPrimitive next() {
    RandomPrimitive s;
    s.gases = pairs_[pick_(rng_) % pairs_.size()];
    const double e = std::uniform_real_distribution<double>(-6.0, std::log10(0.5))(rng_);
    const double small = std::pow(10.0, e);
    s.alpha1 = coin_(rng_) ? small : 1.0 - small;
    s.p = std::pow(10.0, std::uniform_real_distribution<double>(4.0, 10.0)(rng_));
    s.theta = std::uniform_real_distribution<double>(250.0, 1500.0)(rng_);
    s.u = std::uniform_real_distribution<double>(-500.0, 500.0)(rng_);
    s.state = primitive_to_conserved(s.p, s.u, s.theta, s.alpha1, s.gases);
    return s;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::vector<GasPair> pairs_;
  std::uniform_int_distribution<std::size_t> pick_{0, 1000};
  std::bernoulli_distribution coin_{0.5};
};

/// f(p) = sum_k sigma_k (rho(eps - eps0) - p*_k) / (p + p*_k) - 1, coded from
/// the component constants only.
inline double rational_equation(double p, const ConservedState& s, const GasPair& g) {
  const double rho = s.rho1 + s.rho2;
  const double u = s.mom / rho;
  const double rho_eps = s.etot - 0.5 * rho * u * u;
  const double cv = (g.g1.cv() * s.rho1 + g.g2.cv() * s.rho2) / rho;
  const double thermal = rho_eps - (s.rho1 * g.g1.eps0() + s.rho2 * g.g2.eps0());
  const double sig1 = (g.g1.gamma() - 1.0) * g.g1.cv() * s.rho1 / (cv * rho);
  const double sig2 = (g.g2.gamma() - 1.0) * g.g2.cv() * s.rho2 / (cv * rho);
  return sig1 * (thermal - g.g1.p_star()) / (p + g.g1.p_star()) +
         sig2 * (thermal - g.g2.p_star()) / (p + g.g2.p_star()) - 1.0;
}

/// Root of rational_equation above zero. For admissible states f > 0 between
/// the parasitic root (<= 0) and the physical one, and f < 0 beyond it.
inline double bisect_pressure(const ConservedState& s, const GasPair& g) {
  double lo = 1e-300;
  double hi = 1e3;
  while (rational_equation(hi, s, g) > 0.0) hi *= 2.0;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rational_equation(mid, s, g) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Smooth random fields over a small periodic-compatible mesh.
inline MeshState random_smooth_state(const Mesh& mesh, const GasPair& gases,
                                     std::mt19937_64& rng, double p_base, double theta_base) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 6.283185307179586;
  const double len = mesh.x_max() - mesh.x_min();
  const double ph[4] = {unit(rng) * two_pi, unit(rng) * two_pi, unit(rng) * two_pi,
                        unit(rng) * two_pi};
  const double amp_p = 0.1 + 0.2 * unit(rng);
  const double amp_t = 0.05 + 0.1 * unit(rng);
  const double amp_u = 20.0 + 80.0 * unit(rng);
  const double a_mid = 0.2 + 0.6 * unit(rng);
  MeshState s(mesh, gases);
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    const double k = two_pi * (mesh.node(i) - mesh.x_min()) / len;
    const double p = p_base * (1.0 + amp_p * std::sin(k + ph[0]));
    const double th = theta_base * (1.0 + amp_t * std::sin(k + ph[1]));
    const double u = amp_u * std::sin(k + ph[2]);
    const double a1 = a_mid + 0.15 * std::sin(k + ph[3]);
    s.set_conserved(i, primitive_to_conserved(p, u, th, a1, gases));
  }
  s.refresh_closure();
  return s;
}

/// Conserved unknowns of one node.
struct PerfectNode {
  double rho1, rho2, mom, etot;
};

/// One QGD step for two perfect polytropic gases (p*_k = eps0_k = 0) written
/// for a homogeneous mixture: p = (gamma - 1) rho eps with mass-averaged
/// R and cv, cs^2 = gamma p / rho. Mass fluxes use the divided form
/// [rho_k]([u] - w_k). Copy boundary, no heat source.
inline std::vector<PerfectNode> perfect_gas_step(const std::vector<PerfectNode>& in,
                                                 const GasPair& g, double h,
                                                 const SchemeConfig& cfg, double dt) {
  const std::size_t n = in.size();
  struct Prim {
    double rho1, rho2, rho, u, rho_eps, p, theta, cs2, cp;
  };
  std::vector<Prim> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    Prim& q = v[i];
    q.rho1 = in[i].rho1;
    q.rho2 = in[i].rho2;
    q.rho = q.rho1 + q.rho2;
    q.u = in[i].mom / q.rho;
    q.rho_eps = in[i].etot - 0.5 * in[i].mom * q.u;
    const double r_gas = ((g.g1.gamma() - 1.0) * g.g1.cv() * q.rho1 +
                          (g.g2.gamma() - 1.0) * g.g2.cv() * q.rho2) / q.rho;
    const double cv = (g.g1.cv() * q.rho1 + g.g2.cv() * q.rho2) / q.rho;
    const double gamma = 1.0 + r_gas / cv;
    q.p = (gamma - 1.0) * q.rho_eps;
    q.theta = q.rho_eps / (q.rho * cv);
    q.cs2 = gamma * q.p / q.rho;
    q.cp = gamma * cv;
  }
  auto mean = [](double a, double b) { return 0.5 * (a + b); };
  std::vector<double> f1(n - 1), f2(n - 1), fm(n - 1), fe(n - 1);
  for (std::size_t l = 0; l + 1 < n; ++l) {
    const Prim& a = v[l];
    const Prim& b = v[l + 1];
    const double tau = mean(cfg.a * h / std::sqrt(a.cs2), cfg.a * h / std::sqrt(b.cs2));
    const double rho = mean(a.rho, b.rho), u = mean(a.u, b.u), p = mean(a.p, b.p);
    const double du = (b.u - a.u) / h, dp = (b.p - a.p) / h;
    const double w_hat = tau / rho * (rho * u * du + dp);
    const double r1 = mean(a.rho1, b.rho1), r2 = mean(a.rho2, b.rho2);
    const double w1 = tau / r1 * u * (b.rho1 * b.u - a.rho1 * a.u) / h + w_hat;
    const double w2 = tau / r2 * u * (b.rho2 * b.u - a.rho2 * a.u) / h + w_hat;
    const double j1 = r1 * (u - w1), j2 = r2 * (u - w2), j = j1 + j2;
    const double gamma_p = mean(a.rho * a.cs2, b.rho * b.cs2);
    const double pi = cfg.a_s * tau * p * du + u * rho * w_hat + tau * (u * dp + gamma_p * du);
    const double re = mean(a.rho_eps, b.rho_eps);
    const double heat = cfg.a_pr() * tau * mean(a.cp, b.cp) * p * (b.theta - a.theta) / h +
                        tau * u * u * ((b.rho_eps - a.rho_eps) / h -
                                       (re + p) / rho * (b.rho - a.rho) / h);
    f1[l] = j1;
    f2[l] = j2;
    fm[l] = j * u + p - pi;
    fe[l] = (0.5 * rho * a.u * b.u + re + p) * j / rho - 0.25 * h * h * dp * du - heat - pi * u;
  }
  std::vector<PerfectNode> out(in);
  const double k = dt / h;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i].rho1 = in[i].rho1 - k * (f1[i] - f1[i - 1]);
    out[i].rho2 = in[i].rho2 - k * (f2[i] - f2[i - 1]);
    out[i].mom = in[i].mom - k * (fm[i] - fm[i - 1]);
    out[i].etot = in[i].etot - k * (fe[i] - fe[i - 1]);
  }
  // Copy boundary on (rho_k, u, rho eps).
  for (const auto [dst, src] : {std::pair<std::size_t, std::size_t>{0, 1}, {n - 1, n - 2}}) {
    const PerfectNode& s = out[src];
    const double rho_s = s.rho1 + s.rho2;
    const double u = s.mom / rho_s;
    const double rho_eps = s.etot - 0.5 * s.mom * u;
    PerfectNode& d = out[dst];
    d.rho1 = s.rho1;
    d.rho2 = s.rho2;
    d.mom = (d.rho1 + d.rho2) * u;
    d.etot = 0.5 * (d.rho1 + d.rho2) * u * u + rho_eps;
  }
  return out;
}

/// A random pair of perfect polytropic gases.
inline GasPair random_perfect_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> gamma(1.05, 1.7), cv(300.0, 5000.0);
  return {GasParams(gamma(rng), cv(rng), 0.0, 0.0), GasParams(gamma(rng), cv(rng), 0.0, 0.0)};
}

}  // namespace qhmix::testing

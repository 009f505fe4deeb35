#include <omp.h>

#include <cmath>
#include <random>

#include "doctest.h"
#include "qhmix/cases.hpp"
#include "qhmix/scheme.hpp"
#include "support.hpp"

using namespace qhmix;
using qhmix::testing::rel_diff;

namespace {

const GasPair kAirWater{GasParams(1.4, 717.5, 0.0, 0.0), GasParams(2.8, 1495.0, 8.5e8, 0.0)};

MeshState uniform_state(const Mesh& m, const GasPair& g, double p, double u, double theta,
                        double alpha1) {
  MeshState s(m, g);
  const ConservedState c = primitive_to_conserved(p, u, theta, alpha1, g);
  for (std::size_t i = 0; i < m.n_nodes(); ++i) s.set_conserved(i, c);
  s.refresh_closure();
  return s;
}

double field_scale(const NodeField& f) {
  double s = 0.0;
  for (double v : f) s = std::max(s, std::abs(v));
  return s;
}

void check_same(const MeshState& a, const MeshState& b, double tol) {
  const NodeField* fa[] = {&a.rho1, &a.rho2, &a.mom, &a.etot};
  const NodeField* fb[] = {&b.rho1, &b.rho2, &b.mom, &b.etot};
  for (int k = 0; k < 4; ++k) {
    const double scale = std::max(field_scale(*fa[k]), field_scale(*fb[k]));
    for (std::size_t i = 0; i < a.size(); ++i) {
      INFO("field " << k << " node " << i);
      CHECK(std::abs((*fa[k])[i] - (*fb[k])[i]) <= tol * scale);
    }
  }
}

}  // namespace

TEST_CASE("relaxation time and coefficients") {
  const Mesh m(-5.0, 5.0, 300);
  SchemeConfig cfg;
  cfg.a = 0.3;
  const MeshState s = uniform_state(m, kAirWater, 1e5, 40.0, 308.15, 1.0);
  const Coefficients c = coefficients(s, cfg);
  CHECK(c.tau[0] == doctest::Approx(0.3 * (1.0 / 30.0) / std::sqrt(1.4 * 287.0 * 308.15)));
  CHECK(c.tau[0] == doctest::Approx(2.84e-5).epsilon(2e-3));
  CHECK(c.nu[3] == doctest::Approx(c.tau[0] * 1e5));

  cfg.i_tau = 1;
  const Coefficients ci = coefficients(s, cfg);
  CHECK(ci.tau[0] == doctest::Approx(0.3 * (1.0 / 30.0) / (std::sqrt(s.cs2[0]) + 40.0)));

  cfg.a_s = 0.0;
  for (double v : coefficients(s, cfg).nu) CHECK(v == 0.0);
}

TEST_CASE("regularizers vanish on a uniform state") {
  const Mesh m(0.0, 1.0, 8);
  const MeshState s = uniform_state(m, kAirWater, 2e6, 15.0, 320.0, 0.4);
  for (Regularization reg : {Regularization::QGD, Regularization::QHD}) {
    SchemeConfig cfg;
    cfg.reg = reg;
    const Regularizers r = regularizers(s, cfg);
    for (std::size_t l = 0; l < m.n_half(); ++l) {
      CHECK(r.w_hat[l] == 0.0);
      CHECK(r.w1[l] == 0.0);
      CHECK(r.w2[l] == 0.0);
      CHECK(r.pi[l] == 0.0);
      CHECK(r.minus_q[l] == 0.0);
    }
  }
}

TEST_CASE("regularizers at rest with a linear pressure") {
  const Mesh m(0.0, 2.0, 2);
  MeshState s(m, kAirWater);
  for (std::size_t i = 0; i < 3; ++i) {
    s.set_conserved(i, primitive_to_conserved(1e6 + 2e5 * static_cast<double>(i), 0.0, 300.0,
                                              0.5, kAirWater));
  }
  s.refresh_closure();
  SchemeConfig cfg;
  cfg.a = 0.4;
  const Regularizers r = regularizers(s, cfg);
  const double tau0 = 0.4 * m.h() / std::sqrt(s.cs2[0]);
  const double tau1 = 0.4 * m.h() / std::sqrt(s.cs2[1]);
  const double w_hat = 0.5 * (tau0 + tau1) * (2e5 / m.h()) / (0.5 * (s.rho[0] + s.rho[1]));
  CHECK(r.w_hat[0] == doctest::Approx(w_hat).epsilon(1e-12));
  CHECK(r.w1[0] == doctest::Approx(w_hat).epsilon(1e-12));
  CHECK(r.w2[0] == doctest::Approx(w_hat).epsilon(1e-12));
  CHECK(r.pi[0] == 0.0);
  CHECK(r.minus_q[0] == doctest::Approx(0.0).scale(1.0));

  cfg.reg = Regularization::QHD;
  const Regularizers q = regularizers(s, cfg);
  CHECK(q.pi[0] == 0.0);
  CHECK(q.pi[1] == 0.0);
}

TEST_CASE("QGD velocities need both components") {
  const Mesh m(0.0, 1.0, 4);
  const MeshState s = uniform_state(m, kAirWater, 1e5, 0.0, 300.0, 1.0);
  SchemeConfig cfg;
  CHECK_THROWS_AS(regularizers(s, cfg), Error);
  cfg.reg = Regularization::QHD;
  CHECK_NOTHROW(regularizers(s, cfg));
  cfg.reg = Regularization::QGD;
  CHECK_NOTHROW(step(s, cfg, 1e-6));
}

TEST_CASE("uniform state is a fixed point") {
  const Mesh m(-1.0, 1.0, 20);
  const MeshState s = uniform_state(m, kAirWater, 3e6, 25.0, 330.0, 0.3);
  for (BoundaryMode mode : {BoundaryMode::Copy, BoundaryMode::Periodic}) {
    SchemeConfig cfg;
    cfg.boundary = mode;
    const double dt = time_step(s, cfg);
    for (const MeshState& out : {step(s, cfg, dt), reference::step(s, cfg, dt)}) {
      CHECK(out.rho1 == s.rho1);
      CHECK(out.rho2 == s.rho2);
      CHECK(out.mom == s.mom);
      CHECK(out.etot == s.etot);
      CHECK(out.time == dt);
    }
    const IdentityResiduals res = energy_identity_residuals(s, step(s, cfg, dt), cfg, dt);
    for (std::size_t i = 0; i < m.n_nodes(); ++i) {
      CHECK(res.mass[i] == 0.0);
      CHECK(res.kinetic[i] == 0.0);
      CHECK(res.internal[i] == 0.0);
    }
  }
}

TEST_CASE("time step rule") {
  const Mesh m(0.0, 0.4, 100);
  MeshState s = uniform_state(m, kAirWater, 1e5, 0.0, 300.0, 1.0);
  SchemeConfig cfg;
  CHECK(time_step(s, cfg) == doctest::Approx(0.1 * m.h() / s.cs[0]).epsilon(1e-15));
  // Pin the wave speed to 1600 m/s at one node.
  s.cs[17] = 1600.0 - 100.0;
  s.u[17] = -100.0;
  CHECK(time_step(s, cfg) == doctest::Approx(2.5e-7).epsilon(1e-14));
  CHECK(time_step(s, cfg, 1e-9) == 1e-9);
  CHECK(time_step(s, cfg, 1.0) == time_step(s, cfg));
}

TEST_CASE("run clips the last step to the final time") {
  const CaseSpec spec = make_case("B");
  const MeshState init = build_initial(spec, case_mesh(spec, 100));
  const SchemeConfig cfg = spec.scheme_config();
  const double dt = time_step(init, cfg);
  const RunResult one = run(init, cfg, 0.5 * dt);
  CHECK(one.steps == 1);
  CHECK(one.final.time == 0.5 * dt);
  const RunResult zero = run(init, cfg, 0.0);
  CHECK(zero.steps == 0);
  CHECK(zero.final.etot == init.etot);
  const RunResult several = run(init, cfg, 10.5 * dt);
  CHECK(several.steps == 11);
  CHECK(several.final.time == 10.5 * dt);
  CHECK(several.history.back().step == 11);
}

TEST_CASE("test D completes") {
  const CaseSpec spec = make_case("D");
  const MeshState init = build_initial(spec, case_mesh(spec));
  RunOptions opts;
  opts.stride = 50;
  const RunResult r = run(init, spec.scheme_config(), spec.t_fin, opts);
  CHECK(r.final.time == spec.t_fin);
  for (std::size_t i = 0; i < r.final.size(); ++i) {
    CHECK(std::isfinite(r.final.p[i]));
    CHECK(r.final.theta[i] > 0.0);
  }
  for (const StepDiagnostics& d : r.history) {
    CHECK(d.rho1_min > 0.0);
    CHECK(d.rho2_min > 0.0);
    CHECK(d.mass_identity < 1e-10);
    CHECK(d.kinetic_identity < 1e-10);
    CHECK(d.internal_identity < 1e-10);
  }
}

TEST_CASE("failures name the node and keep the last valid state") {
  const Mesh m(0.0, 1.0, 10);
  MeshState s = uniform_state(m, kAirWater, 1e5, 0.0, 300.0, 0.5);
  s.rho1[3] = -1.0;
  try {
    s.refresh_closure();
    FAIL("expected a SolverError");
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::AdmissibilityLost);
    CHECK(e.cause() == ErrorCode::NegativeDensity);
    CHECK(e.node() == 3);
  }
  s.rho1[3] = std::nan("");
  try {
    s.refresh_closure();
    FAIL("expected a SolverError");
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::StateBlowup);
  }

  // Test A: the minority water density goes negative on the first step.
  const CaseSpec spec = make_case("A");
  const MeshState init = build_initial(spec, case_mesh(spec));
  try {
    run(init, spec.scheme_config(), spec.t_fin);
    FAIL("expected a RunError");
  } catch (const RunError& e) {
    CHECK(e.code() == ErrorCode::AdmissibilityLost);
    CHECK(e.last_valid().time == 0.0);
    CHECK(e.node() > 0);
  }
}

TEST_CASE("periodic totals are conserved") {
  const CaseSpec spec = make_case("B");
  const MeshState init = build_initial(spec, case_mesh(spec, 500));
  SchemeConfig cfg = spec.scheme_config();
  cfg.boundary = BoundaryMode::Periodic;
  const double dt = time_step(init, cfg);
  const MeshState out = step(init, cfg, dt);
  const ConservedTotals a = totals(init, cfg.boundary);
  const ConservedTotals b = totals(out, cfg.boundary);
  const HalfFluxes f = half_fluxes(init, cfg);
  auto flux_scale = [&](const HalfField& h) {
    double s = 0.0;
    for (double v : h) s += std::abs(v);
    return dt * s;
  };
  auto abs_total = [&](const NodeField& q) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) s += std::abs(q[i]) * init.mesh.h();
    return s;
  };
  CHECK(std::abs(b.mass1 - a.mass1) <= 1e-13 * (abs_total(init.rho1) + flux_scale(f.mass1)));
  CHECK(std::abs(b.mass2 - a.mass2) <= 1e-13 * (abs_total(init.rho2) + flux_scale(f.mass2)));
  CHECK(std::abs(b.momentum - a.momentum) <=
        1e-13 * (abs_total(init.mom) + flux_scale(f.momentum)));
  CHECK(std::abs(b.energy - a.energy) <= 1e-13 * (abs_total(init.etot) + flux_scale(f.energy)));
}

TEST_CASE("energy identities on random states") {
  std::mt19937_64 rng(99);
  const auto pairs = qhmix::testing::benchmark_pairs();
  for (int trial = 0; trial < 12; ++trial) {
    const GasPair& g = pairs[static_cast<std::size_t>(trial) % pairs.size()];
    const Mesh m(0.0, 1.0, 40);
    const MeshState s = qhmix::testing::random_smooth_state(m, g, rng, 5e6, 400.0);
    SchemeConfig cfg;
    cfg.reg = trial % 2 ? Regularization::QHD : Regularization::QGD;
    cfg.boundary = trial % 3 ? BoundaryMode::Copy : BoundaryMode::Periodic;
    cfg.i_tau = trial % 4 == 1;
    const double dt = time_step(s, cfg);
    const IdentityResiduals r = energy_identity_residuals(s, step(s, cfg, dt), cfg, dt);
    INFO("trial " << trial);
    CHECK(r.max_relative_mass() <= 1e-11);
    CHECK(r.max_relative_kinetic() <= 1e-10);
    CHECK(r.max_relative_internal() <= 1e-10);
  }
}

TEST_CASE("fused kernels agree with the reference step") {
  std::mt19937_64 rng(5);
  const auto pairs = qhmix::testing::benchmark_pairs();
  for (int trial = 0; trial < 8; ++trial) {
    const Mesh m(-1.0, 1.0, 64);
    const MeshState s =
        qhmix::testing::random_smooth_state(m, pairs[static_cast<std::size_t>(trial) % pairs.size()],
                                            rng, 1e6, 350.0);
    SchemeConfig cfg;
    cfg.reg = trial % 2 ? Regularization::QHD : Regularization::QGD;
    cfg.boundary = trial % 3 ? BoundaryMode::Copy : BoundaryMode::Periodic;
    cfg.qhd_viscosity = trial == 3;
    cfg.q_source.assign(m.n_half(), trial == 4 ? 1e9 : 0.0);
    const double dt = time_step(s, cfg);
    check_same(step(s, cfg, dt), reference::step(s, cfg, dt), 1e-13);
  }
}

TEST_CASE("kernel results do not depend on the thread count") {
  const CaseSpec spec = make_case("B");
  const MeshState init = build_initial(spec, case_mesh(spec, 1000));
  const SchemeConfig cfg = spec.scheme_config();
  const int saved = omp_get_max_threads();
  MeshState a = init, b = init;
  omp_set_num_threads(1);
  for (int k = 0; k < 5; ++k) a = step(a, cfg, time_step(a, cfg));
  omp_set_num_threads(4);
  for (int k = 0; k < 5; ++k) b = step(b, cfg, time_step(b, cfg));
  omp_set_num_threads(saved);
  CHECK(a.rho1 == b.rho1);
  CHECK(a.rho2 == b.rho2);
  CHECK(a.mom == b.mom);
  CHECK(a.etot == b.etot);
}

TEST_CASE("mirror symmetry") {
  std::mt19937_64 rng(11);
  const Mesh m(-1.0, 1.0, 50);
  const MeshState s = qhmix::testing::random_smooth_state(m, kAirWater, rng, 2e6, 320.0);
  MeshState mir(m, kAirWater);
  const std::size_t n = m.n_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    ConservedState c = s.conserved(n - 1 - i);
    c.mom = -c.mom;
    mir.set_conserved(i, c);
  }
  mir.refresh_closure();
  for (Regularization reg : {Regularization::QGD, Regularization::QHD}) {
    SchemeConfig cfg;
    cfg.reg = reg;
    const double dt = time_step(s, cfg);
    const MeshState a = step(s, cfg, dt);
    MeshState b = step(mir, cfg, dt);
    for (std::size_t i = 0; i < n / 2; ++i) {
      std::swap(b.rho1[i], b.rho1[n - 1 - i]);
      std::swap(b.rho2[i], b.rho2[n - 1 - i]);
      std::swap(b.mom[i], b.mom[n - 1 - i]);
      std::swap(b.etot[i], b.etot[n - 1 - i]);
    }
    b.mom *= -1.0;
    check_same(a, b, 1e-12);
  }
}

TEST_CASE("perfect gases match the homogeneous update") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const GasPair g = qhmix::testing::random_perfect_pair(rng);
    const Mesh m(0.0, 1.0, 30);
    const MeshState s = qhmix::testing::random_smooth_state(m, g, rng, 1e5, 300.0);
    SchemeConfig cfg;
    cfg.a = 0.5;
    const double dt = time_step(s, cfg);
    const MeshState out = step(s, cfg, dt);
    std::vector<qhmix::testing::PerfectNode> in(m.n_nodes());
    for (std::size_t i = 0; i < in.size(); ++i) in[i] = {s.rho1[i], s.rho2[i], s.mom[i], s.etot[i]};
    const auto ref = qhmix::testing::perfect_gas_step(in, g, m.h(), cfg, dt);
    MeshState expect = out;
    for (std::size_t i = 0; i < in.size(); ++i) {
      expect.set_conserved(i, {ref[i].rho1, ref[i].rho2, ref[i].mom, ref[i].etot});
    }
    INFO("trial " << trial);
    check_same(out, expect, 1e-12);
  }
}

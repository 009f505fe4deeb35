#include "qhmix/scheme.hpp"

namespace qhmix::reference {

MeshState step(const MeshState& state, const SchemeConfig& cfg, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParameter, "time step must be positive");
  const Mesh& m = state.mesh;
  const Wrap wrap = cfg.boundary == BoundaryMode::Periodic ? Wrap::Periodic : Wrap::None;
  const HalfFluxes f = half_fluxes(state, cfg);

  MeshState out = state;
  const NodeField d1 = delta_star(m, f.mass1, wrap);
  const NodeField d2 = delta_star(m, f.mass2, wrap);
  const NodeField dm = delta_star(m, f.momentum, wrap);
  NodeField de = delta_star(m, f.energy, wrap);
  if (!cfg.q_source.empty()) de -= avg_star(m, HalfField(cfg.q_source), wrap);

  // Boundary slots of the star operators are overwritten below.
  out.rho1 = state.rho1 - dt * d1;
  out.rho2 = state.rho2 - dt * d2;
  out.mom = state.mom - dt * dm;
  out.etot = state.etot - dt * de;

  detail::apply_boundary(out, cfg.boundary);
  out.time = state.time + dt;
  out.refresh_closure(cfg.partials);
  return out;
}

}  // namespace qhmix::reference

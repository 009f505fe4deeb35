#pragma once

// Explicit two-level, symmetric three-point schemes for the 1D regularized
// balance equations of the mixture: QGD and its simplified QHD variant.
//
// The production step is a set of fused OpenMP loops (scheme_kernels.cpp).
// A serial implementation assembled from the grid operators lives in
// namespace `reference` and is kept for testing and benchmarking.

#include <functional>
#include <string>
#include <vector>

#include "qhmix/eos.hpp"
#include "qhmix/grid.hpp"

namespace qhmix {

enum class Regularization { QGD, QHD };
enum class BoundaryMode { Copy, Periodic };

std::string to_string(Regularization reg);
std::string to_string(BoundaryMode mode);
Regularization parse_regularization(const std::string& text);
BoundaryMode parse_boundary(const std::string& text);
std::string to_string(PartialDensities mode);
PartialDensities parse_partials(const std::string& text);

struct SchemeConfig {
  Regularization reg = Regularization::QGD;
  double a = 0.5;      ///< tau = a h / (cs + i_tau |u|)
  double beta = 0.1;   ///< Courant parameter
  double a_s = 1.0;    ///< Schmidt number, nu = a_s [tau][p]
  /// The value quoted as the inverse Prandtl number in published runs.
  /// kappa = (1 / prandtl_inv_reported) [tau][cp][p].
  double prandtl_inv_reported = 1.0;
  int i_tau = 0;
  BoundaryMode boundary = BoundaryMode::Copy;
  /// Adds nu du to the QHD viscous stress. Off reproduces the plain QHD scheme.
  bool qhd_viscosity = false;
  /// NonNegative treats a negative partial density as lost admissibility.
  /// Signed lets a minority component undershoot zero as long as the
  /// closure stays defined; the undershoot is reported in the diagnostics.
  PartialDensities partials = PartialDensities::NonNegative;
  /// Heat source on the auxiliary mesh, W/m^3; empty means zero.
  std::vector<double> q_source;

  double a_pr() const noexcept { return 1.0 / prandtl_inv_reported; }
  /// Throws InvalidParameter when an invariant is violated.
  void validate() const;
};

/// Conserved unknowns plus the closure fields derived from them.
struct MeshState {
  Mesh mesh;
  GasPair gases;
  double time = 0.0;

  NodeField rho1, rho2, mom, etot;

  // Refreshed by refresh_closure().
  NodeField rho, u, rho_eps, p, theta, cs2, cs, alpha1, alpha2, cp;

  MeshState() = default;
  MeshState(const Mesh& mesh, const GasPair& gases);

  std::size_t size() const noexcept { return rho1.size(); }
  ConservedState conserved(std::size_t i) const noexcept {
    return {rho1[i], rho2[i], mom[i], etot[i]};
  }
  void set_conserved(std::size_t i, const ConservedState& s) noexcept {
    rho1[i] = s.rho1;
    rho2[i] = s.rho2;
    mom[i] = s.mom;
    etot[i] = s.etot;
  }
  /// Recomputes the derived fields at every node. Throws SolverError
  /// (AdmissibilityLost or StateBlowup) naming the first failing node.
  void refresh_closure(PartialDensities partials = PartialDensities::NonNegative);
};

struct Coefficients {
  NodeField tau;
  HalfField nu;
  HalfField kappa;
};

Coefficients coefficients(const MeshState& state, const SchemeConfig& cfg);

/// Regularizing velocities, viscous stress and heat flux on the auxiliary
/// mesh. `minus_q` is -q. For QHD all velocities equal w_hat, Pi is the
/// reduced stress and minus_q keeps only kappa d(theta).
struct Regularizers {
  HalfField w1, w2, w, w_hat, pi, minus_q;
};

/// Throws ZeroAveragedDensity under QGD when some [rho_k] vanishes, since w_k
/// is undefined there. The step itself never divides by [rho_k].
Regularizers regularizers(const MeshState& state, const SchemeConfig& cfg);

/// Fluxes across each auxiliary node; every interior update is
/// q_i <- q_i - dt (F_{i+1/2} - F_{i-1/2}) / h (+ dt [Q]*_i for energy).
struct HalfFluxes {
  HalfField mass1, mass2, momentum, energy;
  /// Pieces reused by the discrete energy identities.
  HalfField mass, pi, minus_q;
};

HalfFluxes half_fluxes(const MeshState& state, const SchemeConfig& cfg);

/// Advances by dt with the fused parallel kernels. The result has refreshed
/// closure fields and time = state.time + dt.
MeshState step(const MeshState& state, const SchemeConfig& cfg, double dt);

/// beta h / max_i (cs_i + |u_i|)
double time_step(const MeshState& state, const SchemeConfig& cfg);
/// As above, clipped to the remaining time.
double time_step(const MeshState& state, const SchemeConfig& cfg, double remaining);

struct ConservedTotals {
  double mass1 = 0.0;
  double mass2 = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
};

/// Sum of q h over the control volumes: nodes 0..N-1 for periodic meshes,
/// trapezoidal weights otherwise.
ConservedTotals totals(const MeshState& state, BoundaryMode mode);

/// Residuals of the discrete balance equations for the mixture mass, kinetic
/// and internal energies at nodes updated by the step. `*_scale` holds the
/// sum of absolute values of the terms entering each residual.
struct IdentityResiduals {
  NodeField mass, kinetic, internal;
  NodeField mass_scale, kinetic_scale, internal_scale;

  double max_relative_mass() const;
  double max_relative_kinetic() const;
  double max_relative_internal() const;
};

IdentityResiduals energy_identity_residuals(const MeshState& before,
                                            const MeshState& after,
                                            const SchemeConfig& cfg, double dt);

struct StepDiagnostics {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  ConservedTotals totals;
  double mass_identity = 0.0;
  double kinetic_identity = 0.0;
  double internal_identity = 0.0;
  double p_min = 0.0, p_max = 0.0;
  double theta_min = 0.0, theta_max = 0.0;
  double alpha1_min = 0.0, alpha1_max = 0.0;
  double rho1_min = 0.0, rho2_min = 0.0;
};

struct RunOptions {
  /// Diagnostics are recorded every `stride` steps and after the last step;
  /// extrema and identity residuals cover all steps since the previous record.
  int stride = 1;
  bool identities = true;
  /// Called with each recorded state.
  std::function<void(const MeshState&, const StepDiagnostics&)> observer;
};

struct RunResult {
  MeshState final;
  std::vector<StepDiagnostics> history;
  long steps = 0;
};

/// Thrown by run(): the step failure plus everything computed before it.
class RunError : public SolverError {
 public:
  RunError(const SolverError& cause, MeshState last_valid,
           std::vector<StepDiagnostics> history)
      : SolverError(cause),
        last_valid_(std::move(last_valid)),
        history_(std::move(history)) {}

  const MeshState& last_valid() const noexcept { return last_valid_; }
  const std::vector<StepDiagnostics>& history() const noexcept { return history_; }

 private:
  MeshState last_valid_;
  std::vector<StepDiagnostics> history_;
};

RunResult run(const MeshState& initial, const SchemeConfig& cfg, double t_fin,
              const RunOptions& options = {});

namespace reference {

/// Serial step built from avg/delta/avg_star/delta_star on whole fields.
MeshState step(const MeshState& state, const SchemeConfig& cfg, double dt);

}  // namespace reference

namespace detail {

/// Reusable buffers for the fused kernels.
struct KernelWorkspace {
  std::vector<double> f1, f2, fm, fe;
};

void step_into(const MeshState& in, const SchemeConfig& cfg, double dt,
               MeshState& out, KernelWorkspace& ws);

/// Applies the boundary rule to nodes 0 and N of the conserved fields.
void apply_boundary(MeshState& s, BoundaryMode mode);

}  // namespace detail

}  // namespace qhmix

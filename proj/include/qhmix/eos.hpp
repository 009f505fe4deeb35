#pragma once

// Stiffened-gas closure of a binary one-velocity, one-temperature mixture in
// quasi-homogeneous form: the volume fractions are eliminated and the common
// pressure is the physical root of a quadratic in (rho1, rho2, rho*eps).
//
// Every function here is pure. Quantities are SI throughout.

#include "qhmix/error.hpp"

namespace qhmix {

/// Constants of one stiffened-gas component:
///   p = R r theta - p_star,  eps = cv theta + p_star / r + eps0.
class GasParams {
 public:
  GasParams() = default;
  GasParams(double gamma, double cv, double p_star, double eps0);

  double gamma() const noexcept { return gamma_; }
  double cv() const noexcept { return cv_; }
  double p_star() const noexcept { return p_star_; }
  double eps0() const noexcept { return eps0_; }
  /// R = (gamma - 1) cv
  double r_gas() const noexcept { return r_gas_; }
  /// cp = gamma cv
  double cp() const noexcept { return cp_; }

  friend bool operator==(const GasParams&, const GasParams&) = default;

 private:
  double gamma_ = 1.4;
  double cv_ = 717.5;
  double p_star_ = 0.0;
  double eps0_ = 0.0;
  double r_gas_ = 0.4 * 717.5;
  double cp_ = 1.4 * 717.5;
};

struct GasPair {
  GasParams g1;
  GasParams g2;

  friend bool operator==(const GasPair&, const GasPair&) = default;
};

/// Per-node unknowns of the scheme.
struct ConservedState {
  double rho1 = 0.0;  ///< partial density alpha1 r1
  double rho2 = 0.0;  ///< partial density alpha2 r2
  double mom = 0.0;   ///< rho u
  double etot = 0.0;  ///< rho u^2 / 2 + rho eps
};

struct MixtureCoeffs {
  double rho = 0.0;
  double r_mix = 0.0;
  double cv_mix = 0.0;
  double cp_mix = 0.0;
  double gamma_mix = 0.0;
  double eps0_mix = 0.0;
  double sigma1 = 0.0;  ///< R1 rho1 / (cv rho)
  double sigma2 = 0.0;
};

/// Roots of p^2 - b p - c = 0.
struct PressureSolution {
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;  ///< discriminant, evaluated as (b1 - b2)^2 + 4 a1 a2
  double p_plus = 0.0;
  double p_minus = 0.0;
  double thermal_energy = 0.0;  ///< rho (eps - eps0)
};

struct Closure {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double p = 0.0;
  double theta = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double cs2 = 0.0;
  double u = 0.0;
  double rho_eps = 0.0;
  double sqrt_d = 0.0;
  MixtureCoeffs coeffs;
  /// Residual of the rational pressure equation at p; diagnostic only.
  double residual = 0.0;
  bool residual_warning = false;
};

inline constexpr double kResidualWarningLevel = 1e-8;

MixtureCoeffs mixture_coefficients(double rho1, double rho2, const GasPair& gases);

PressureSolution pressure_quadratic(double rho1, double rho2, double rho_eps,
                                    const GasPair& gases);

/// <sigma_k (rho(eps - eps0) - p_star_k) / (p + p_star_k)> - 1.
double rational_residual(double p, double rho1, double rho2, double rho_eps,
                         const GasPair& gases);

Closure closure(const ConservedState& state, const GasPair& gases);

/// Whether a negative partial density is rejected (NegativeDensity) or passed
/// through the formulas, which stay defined while rho > 0, d > 0 and theta > 0.
enum class PartialDensities { NonNegative, Signed };

/// Non-throwing closure used inside parallel loops. Returns false and sets
/// `why` when the state cannot be closed.
bool try_closure(const ConservedState& state, const GasPair& gases, Closure& out,
                 ErrorCode& why,
                 PartialDensities partials = PartialDensities::NonNegative) noexcept;

/// gamma (p+ + p*1)(p+ + p*2) / (rho sqrt(d))
double speed_of_sound(double rho1, double rho2, double rho_eps, const GasPair& gases);

/// Radical-free form: (gamma / rho) <a_k / (p+ + p*_k)^2>^{-1}.
double speed_of_sound_alt(double p_plus, double rho1, double rho2, double rho_eps,
                          const GasPair& gases);

struct WoodRelation {
  double cs_wood2 = 0.0;
  double correction = 0.0;
  /// 1/(rho cs^2) - 1/(rho cs_wood^2) - correction
  double relation_residual = 0.0;
  /// Set when alpha1 alpha2 == 0; then cs_wood2 == cs2 and correction == 0.
  bool degenerate = false;
};

WoodRelation wood_relation(const Closure& cl, const GasPair& gases);

/// cs^2 <= gamma (gamma - 1) cv theta <= <(rho_k / rho) cs_k^2>
struct SpeedBounds {
  double cs2 = 0.0;
  double mixture_bound = 0.0;
  double mass_weighted = 0.0;
};

SpeedBounds speed_bounds(const Closure& cl, const GasPair& gases);

/// dp+ = P1 drho1 + P2 drho2 + P d(rho eps).
struct PressureDifferential {
  double p1 = 0.0;
  double p2 = 0.0;
  double p = 0.0;
  /// <(rho_k/rho) P_k> + ((rho eps + p+)/rho) P
  double cs2_abgrall = 0.0;
};

PressureDifferential pressure_differential(double rho1, double rho2, double rho_eps,
                                           const GasPair& gases);

/// alpha1 from the mass fraction y1 at pressure p.
double volume_fraction_from_mass(double y1, double p, const GasPair& gases);

ConservedState primitive_to_conserved(double p, double u, double theta, double alpha1,
                                      const GasPair& gases);

/// Closed forms of both roots in terms of (theta, alpha_k):
///   p+ = R rho theta - <alpha_k p*_k>
///   p- = -(alpha1 p*2 + alpha2 p*1 + alpha1 alpha2 (p*2 - p*1)^2 / (cv rho theta))
struct ExplicitRoots {
  double p_plus = 0.0;
  double p_minus = 0.0;
};

ExplicitRoots explicit_roots(const Closure& cl, const GasPair& gases);

/// The same discriminant evaluated three ways. The polynomial in p*2 - p*1
/// cancels terms of order (p*2 - p*1)^2 down to d, which for a trace of a
/// soft gas in a stiff liquid at low pressure costs ten digits in double
/// arithmetic. All three are therefore evaluated in quadruple precision from
/// the given state (the scheme itself uses the split form in double).
struct DiscriminantForms {
  double quadratic = 0.0;        ///< b^2 + 4c
  double split = 0.0;            ///< (b1 - b2)^2 + 4 a1 a2
  double star_polynomial = 0.0;  ///< quadratic polynomial in p*2 - p*1
};

DiscriminantForms discriminant_forms(const ConservedState& state, const GasPair& gases);

}  // namespace qhmix

#include "qhmix/eos.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace qhmix {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroDensity: return "ZeroDensity";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::NonpositivePressure: return "NonpositivePressure";
    case ErrorCode::NonpositiveTemperature: return "NonpositiveTemperature";
    case ErrorCode::PoleAtP: return "PoleAtP";
    case ErrorCode::InvalidPrimitive: return "InvalidPrimitive";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroAveragedDensity: return "ZeroAveragedDensity";
    case ErrorCode::StateBlowup: return "StateBlowup";
    case ErrorCode::AdmissibilityLost: return "AdmissibilityLost";
    case ErrorCode::UnknownCase: return "UnknownCase";
    case ErrorCode::NonNestedMesh: return "NonNestedMesh";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

GasParams::GasParams(double gamma, double cv, double p_star, double eps0)
    : gamma_(gamma),
      cv_(cv),
      p_star_(p_star),
      eps0_(eps0),
      r_gas_((gamma - 1.0) * cv),
      cp_(gamma * cv) {
  if (!(gamma > 1.0) || !(cv > 0.0) || !(p_star >= 0.0) || !std::isfinite(eps0) ||
      !std::isfinite(gamma) || !std::isfinite(cv) || !std::isfinite(p_star)) {
    std::ostringstream os;
    os << "gas parameters need gamma > 1, cv > 0, p_star >= 0 (got gamma=" << gamma
       << ", cv=" << cv << ", p_star=" << p_star << ", eps0=" << eps0 << ")";
    throw Error(ErrorCode::InvalidParameter, os.str());
  }
}

namespace {

// Everything the closure needs, computed once without throwing.
struct QuadraticParts {
  MixtureCoeffs coeffs;
  PressureSolution sol;
  double a1 = 0.0;
  double a2 = 0.0;
};

using Failure = std::optional<ErrorCode>;

Failure check_densities(double rho1, double rho2, bool signed_ok = false) noexcept {
  if (!std::isfinite(rho1) || !std::isfinite(rho2)) return ErrorCode::StateBlowup;
  if (!signed_ok && (rho1 < 0.0 || rho2 < 0.0)) return ErrorCode::NegativeDensity;
  if (!(rho1 + rho2 > 0.0)) return ErrorCode::ZeroDensity;
  return std::nullopt;
}

MixtureCoeffs coefficients_unchecked(double rho1, double rho2, const GasPair& g) noexcept {
  MixtureCoeffs m;
  m.rho = rho1 + rho2;
  const double rho_r = g.g1.r_gas() * rho1 + g.g2.r_gas() * rho2;
  const double rho_cv = g.g1.cv() * rho1 + g.g2.cv() * rho2;
  m.r_mix = rho_r / m.rho;
  m.cv_mix = rho_cv / m.rho;
  m.gamma_mix = m.r_mix / m.cv_mix + 1.0;
  m.cp_mix = (g.g1.cp() * rho1 + g.g2.cp() * rho2) / m.rho;
  m.eps0_mix = (g.g1.eps0() * rho1 + g.g2.eps0() * rho2) / m.rho;
  m.sigma1 = g.g1.r_gas() * rho1 / rho_cv;
  m.sigma2 = g.g2.r_gas() * rho2 / rho_cv;
  return m;
}

Failure solve_quadratic(double rho1, double rho2, double rho_eps, const GasPair& g,
                        QuadraticParts& q, bool signed_ok = false) noexcept {
  if (const auto e = check_densities(rho1, rho2, signed_ok)) return e;
  if (!std::isfinite(rho_eps)) return ErrorCode::StateBlowup;
  q.coeffs = coefficients_unchecked(rho1, rho2, g);
  const double ps1 = g.g1.p_star();
  const double ps2 = g.g2.p_star();
  PressureSolution& s = q.sol;
  s.thermal_energy = rho_eps - (g.g1.eps0() * rho1 + g.g2.eps0() * rho2);
  q.a1 = q.coeffs.sigma1 * (s.thermal_energy - ps1);
  q.a2 = q.coeffs.sigma2 * (s.thermal_energy - ps2);
  const double b1 = q.a1 - ps1;
  const double b2 = q.a2 - ps2;
  s.b = b1 + b2;
  s.c = q.a1 * ps2 + q.a2 * ps1 - ps1 * ps2;
  s.d = (b1 - b2) * (b1 - b2) + 4.0 * q.a1 * q.a2;
  if (!std::isfinite(s.d)) return ErrorCode::StateBlowup;
  if (s.d < 0.0 || (s.d == 0.0 && rho1 > 0.0 && rho2 > 0.0)) {
    return ErrorCode::NegativeDiscriminant;
  }
  const double sd = std::sqrt(s.d);
  // Product form for b < 0 avoids cancellation in (b + sqrt(d)) / 2.
  s.p_plus = s.b >= 0.0 ? 0.5 * (s.b + sd) : 2.0 * s.c / (sd - s.b);
  if (!(s.p_plus > 0.0)) return ErrorCode::NonpositivePressure;
  s.p_minus = -s.c / s.p_plus;
  return std::nullopt;
}

double residual_unchecked(double p, double a1, double a2, const GasPair& g) noexcept {
  return a1 / (p + g.g1.p_star()) + a2 / (p + g.g2.p_star()) - 1.0;
}

[[noreturn]] void raise(ErrorCode code, const char* where) {
  throw Error(code, where);
}

}  // namespace

MixtureCoeffs mixture_coefficients(double rho1, double rho2, const GasPair& gases) {
  if (const auto e = check_densities(rho1, rho2)) {
    raise(*e, "mixture_coefficients: need rho1, rho2 >= 0 and rho1 + rho2 > 0");
  }
  return coefficients_unchecked(rho1, rho2, gases);
}

PressureSolution pressure_quadratic(double rho1, double rho2, double rho_eps,
                                    const GasPair& gases) {
  QuadraticParts q;
  if (const auto e = solve_quadratic(rho1, rho2, rho_eps, gases, q)) {
    raise(*e, "pressure_quadratic");
  }
  return q.sol;
}

double rational_residual(double p, double rho1, double rho2, double rho_eps,
                         const GasPair& gases) {
  if (p + gases.g1.p_star() == 0.0 || p + gases.g2.p_star() == 0.0) {
    raise(ErrorCode::PoleAtP, "rational_residual: p equals -p_star_k");
  }
  const MixtureCoeffs m = mixture_coefficients(rho1, rho2, gases);
  const double e = rho_eps - (gases.g1.eps0() * rho1 + gases.g2.eps0() * rho2);
  return residual_unchecked(p, m.sigma1 * (e - gases.g1.p_star()),
                            m.sigma2 * (e - gases.g2.p_star()), gases);
}

bool try_closure(const ConservedState& s, const GasPair& g, Closure& out, ErrorCode& why,
                 PartialDensities partials) noexcept {
  if (!std::isfinite(s.mom) || !std::isfinite(s.etot)) {
    why = ErrorCode::StateBlowup;
    return false;
  }
  const double rho = s.rho1 + s.rho2;
  const double u = rho > 0.0 ? s.mom / rho : 0.0;
  const double rho_eps = s.etot - 0.5 * s.mom * u;
  QuadraticParts q;
  if (const auto e = solve_quadratic(s.rho1, s.rho2, rho_eps, g, q, partials == PartialDensities::Signed)) {
    why = *e;
    return false;
  }
  const double p = q.sol.p_plus;
  const double pp1 = p + g.g1.p_star();
  const double pp2 = p + g.g2.p_star();
  const double w1 = g.g1.r_gas() * s.rho1 / pp1;
  const double w2 = g.g2.r_gas() * s.rho2 / pp2;
  const double theta = 1.0 / (w1 + w2);
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    why = ErrorCode::NonpositiveTemperature;
    return false;
  }
  out.p = p;
  out.theta = theta;
  out.alpha1 = w1 * theta;
  out.alpha2 = w2 * theta;
  out.r1 = pp1 / (g.g1.r_gas() * theta);
  out.r2 = pp2 / (g.g2.r_gas() * theta);
  out.sqrt_d = std::sqrt(q.sol.d);
  out.cs2 = q.coeffs.gamma_mix * pp1 * pp2 / (rho * out.sqrt_d);
  out.rho1 = s.rho1;
  out.rho2 = s.rho2;
  out.u = u;
  out.rho_eps = rho_eps;
  out.coeffs = q.coeffs;
  out.residual = residual_unchecked(p, q.a1, q.a2, g);
  out.residual_warning = !(std::abs(out.residual) <= kResidualWarningLevel);
  return true;
}

Closure closure(const ConservedState& state, const GasPair& gases) {
  Closure cl;
  ErrorCode why{};
  if (!try_closure(state, gases, cl, why)) raise(why, "closure");
  return cl;
}

double speed_of_sound(double rho1, double rho2, double rho_eps, const GasPair& gases) {
  const PressureSolution s = pressure_quadratic(rho1, rho2, rho_eps, gases);
  const MixtureCoeffs m = coefficients_unchecked(rho1, rho2, gases);
  return m.gamma_mix * (s.p_plus + gases.g1.p_star()) * (s.p_plus + gases.g2.p_star()) /
         (m.rho * std::sqrt(s.d));
}

double speed_of_sound_alt(double p_plus, double rho1, double rho2, double rho_eps,
                          const GasPair& gases) {
  const double pp1 = p_plus + gases.g1.p_star();
  const double pp2 = p_plus + gases.g2.p_star();
  if (pp1 == 0.0 || pp2 == 0.0) raise(ErrorCode::PoleAtP, "speed_of_sound_alt");
  const MixtureCoeffs m = mixture_coefficients(rho1, rho2, gases);
  const double e = rho_eps - (gases.g1.eps0() * rho1 + gases.g2.eps0() * rho2);
  const double a1 = m.sigma1 * (e - gases.g1.p_star());
  const double a2 = m.sigma2 * (e - gases.g2.p_star());
  return m.gamma_mix / (m.rho * (a1 / (pp1 * pp1) + a2 / (pp2 * pp2)));
}

WoodRelation wood_relation(const Closure& cl, const GasPair& g) {
  WoodRelation w;
  const double rho = cl.coeffs.rho;
  const double theta = cl.theta;
  const double c1 = g.g1.gamma() * g.g1.r_gas() * theta;
  const double c2 = g.g2.gamma() * g.g2.r_gas() * theta;
  if (cl.alpha1 * cl.alpha2 == 0.0) {
    w.cs_wood2 = cl.cs2;
    w.degenerate = true;
    return w;
  }
  const double inv_wood = cl.alpha1 / (cl.r1 * c1) + cl.alpha2 / (cl.r2 * c2);
  w.cs_wood2 = 1.0 / (rho * inv_wood);
  const double m1 = g.g1.cp() * cl.alpha1 * cl.r1;
  const double m2 = g.g2.cp() * cl.alpha2 * cl.r2;
  const double zeta1 = 1.0 / (g.g1.cp() * cl.r1);
  const double zeta2 = 1.0 / (g.g2.cp() * cl.r2);
  w.correction = m1 * m2 * (zeta1 - zeta2) * (zeta1 - zeta2) / (theta * (m1 + m2));
  w.relation_residual = 1.0 / (rho * cl.cs2) - inv_wood - w.correction;
  return w;
}

SpeedBounds speed_bounds(const Closure& cl, const GasPair& g) {
  const MixtureCoeffs& m = cl.coeffs;
  const double c1 = g.g1.gamma() * g.g1.r_gas() * cl.theta;
  const double c2 = g.g2.gamma() * g.g2.r_gas() * cl.theta;
  return {cl.cs2, m.gamma_mix * (m.gamma_mix - 1.0) * m.cv_mix * cl.theta,
          (cl.rho1 * c1 + cl.rho2 * c2) / m.rho};
}

PressureDifferential pressure_differential(double rho1, double rho2, double rho_eps,
                                           const GasPair& g) {
  QuadraticParts q;
  if (const auto e = solve_quadratic(rho1, rho2, rho_eps, g, q)) {
    raise(*e, "pressure_differential");
  }
  const MixtureCoeffs& m = q.coeffs;
  const double ps1 = g.g1.p_star();
  const double ps2 = g.g2.p_star();
  const double pp = q.sol.p_plus;
  const double e = q.sol.thermal_energy;
  const double sd = std::sqrt(q.sol.d);
  const double rho_cv = m.cv_mix * m.rho;
  const double h1 = (e - ps1) * (pp + ps2);
  const double h2 = (e - ps2) * (pp + ps1);
  const double rr = (g.g1.r_gas() * g.g2.cv() * h1 - g.g2.r_gas() * g.g1.cv() * h2) /
                    (rho_cv * rho_cv);
  const double sd_p = (m.gamma_mix - 1.0) * pp + m.sigma1 * ps2 + m.sigma2 * ps1;
  PressureDifferential out;
  out.p = sd_p / sd;
  // d sigma_1 and d sigma_2 are both proportional to rho2 drho1 - rho1 drho2.
  out.p1 = (rr * rho2 - sd_p * g.g1.eps0()) / sd;
  out.p2 = (-rr * rho1 - sd_p * g.g2.eps0()) / sd;
  out.cs2_abgrall =
      (rho1 * out.p1 + rho2 * out.p2) / m.rho + (rho_eps + pp) / m.rho * out.p;
  return out;
}

double volume_fraction_from_mass(double y1, double p, const GasPair& g) {
  if (!(y1 >= 0.0 && y1 <= 1.0)) {
    raise(ErrorCode::InvalidPrimitive, "volume_fraction_from_mass: y1 outside [0, 1]");
  }
  const double pp1 = p + g.g1.p_star();
  const double pp2 = p + g.g2.p_star();
  if (!(pp1 > 0.0) || !(pp2 > 0.0)) {
    raise(ErrorCode::PoleAtP, "volume_fraction_from_mass: need p + p_star_k > 0");
  }
  const double ratio = pp2 / pp1 * (g.g1.r_gas() / g.g2.r_gas());
  return ratio * y1 / (ratio * y1 + 1.0 - y1);
}

ConservedState primitive_to_conserved(double p, double u, double theta, double alpha1,
                                      const GasPair& g) {
  const double pp1 = p + g.g1.p_star();
  const double pp2 = p + g.g2.p_star();
  if (!(pp1 > 0.0) || !(pp2 > 0.0) || !(theta > 0.0) || !(alpha1 >= 0.0) ||
      !(alpha1 <= 1.0) || !std::isfinite(u) || !std::isfinite(p) ||
      !std::isfinite(theta)) {
    std::ostringstream os;
    os << "primitive_to_conserved: p=" << p << " u=" << u << " theta=" << theta
       << " alpha1=" << alpha1;
    raise(ErrorCode::InvalidPrimitive, os.str().c_str());
  }
  const double alpha2 = 1.0 - alpha1;
  ConservedState s;
  s.rho1 = alpha1 * pp1 / (g.g1.r_gas() * theta);
  s.rho2 = alpha2 * pp2 / (g.g2.r_gas() * theta);
  const double rho = s.rho1 + s.rho2;
  const double rho_eps = (g.g1.cv() * s.rho1 + g.g2.cv() * s.rho2) * theta +
                         (alpha1 * g.g1.p_star() + alpha2 * g.g2.p_star()) +
                         (g.g1.eps0() * s.rho1 + g.g2.eps0() * s.rho2);
  s.mom = rho * u;
  s.etot = 0.5 * rho * u * u + rho_eps;
  return s;
}

ExplicitRoots explicit_roots(const Closure& cl, const GasPair& g) {
  const MixtureCoeffs& m = cl.coeffs;
  const double ps1 = g.g1.p_star();
  const double ps2 = g.g2.p_star();
  const double delta = ps2 - ps1;
  const double rho_theta = m.rho * cl.theta;
  ExplicitRoots r;
  r.p_plus = m.r_mix * rho_theta - (cl.alpha1 * ps1 + cl.alpha2 * ps2);
  r.p_minus = -(cl.alpha1 * ps2 + cl.alpha2 * ps1 +
                cl.alpha1 * cl.alpha2 * delta * delta / (m.cv_mix * rho_theta));
  return r;
}

namespace {

__extension__ typedef __float128 quad;

quad quad_sqrt(quad x) {
  if (x <= 0) return 0;
  quad r = std::sqrt(static_cast<double>(x));
  for (int k = 0; k < 3; ++k) r = 0.5 * (r + x / r);
  return r;
}

}  // namespace

DiscriminantForms discriminant_forms(const ConservedState& state, const GasPair& g) {
  closure(state, g);  // admissibility and error reporting
  const quad rho1 = state.rho1, rho2 = state.rho2;
  const quad rho = rho1 + rho2;
  const quad mom = state.mom;
  const quad rho_eps = quad(state.etot) - mom * mom / (2 * rho);
  const quad r1 = g.g1.r_gas(), r2 = g.g2.r_gas();
  const quad ps1 = g.g1.p_star(), ps2 = g.g2.p_star();
  const quad cv = (quad(g.g1.cv()) * rho1 + quad(g.g2.cv()) * rho2) / rho;
  const quad sig1 = r1 * rho1 / (cv * rho);
  const quad sig2 = r2 * rho2 / (cv * rho);
  const quad e = rho_eps - quad(g.g1.eps0()) * rho1 - quad(g.g2.eps0()) * rho2;
  const quad a1 = sig1 * (e - ps1), a2 = sig2 * (e - ps2);
  const quad b1 = a1 - ps1, b2 = a2 - ps2;
  const quad b = b1 + b2;
  const quad c = a1 * ps2 + a2 * ps1 - ps1 * ps2;
  const quad split = (b1 - b2) * (b1 - b2) + 4 * a1 * a2;
  const quad sd = quad_sqrt(split);
  const quad p = b >= 0 ? (b + sd) / 2 : 2 * c / (sd - b);
  const quad theta = 1 / (r1 * rho1 / (p + ps1) + r2 * rho2 / (p + ps2));
  const quad alpha1 = r1 * rho1 * theta / (p + ps1);
  const quad alpha2 = r2 * rho2 * theta / (p + ps2);

  const quad delta = ps2 - ps1;
  const quad a = cv * rho * theta;
  const quad skew = alpha2 * sig1 - alpha1 * sig2;
  const quad cross = alpha1 * sig2 + alpha2 * sig1;
  const quad gm1 = sig1 + sig2;
  DiscriminantForms f;
  f.quadratic = static_cast<double>(b * b + 4 * c);
  f.split = static_cast<double>(split);
  f.star_polynomial = static_cast<double>((skew * skew + 2 * cross + 1) * delta * delta +
                                          2 * a * (skew * gm1 + sig1 - sig2) * delta +
                                          (gm1 * a) * (gm1 * a));
  return f;
}

}  // namespace qhmix

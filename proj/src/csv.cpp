#include "qhmix/csv.hpp"

#include <charconv>
#include <fstream>

#include "qhmix/error.hpp"

namespace qhmix {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_state_csv(std::ostream& os, const MeshState& s) {
  os << "x,rho1,rho2,rho,y1,alpha1,alpha2,p,u,theta,cs\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double rho = s.rho1[i] + s.rho2[i];
    const double values[] = {s.mesh.node(i), s.rho1[i],  s.rho2[i], rho,
                             s.rho1[i] / rho, s.alpha1[i], s.alpha2[i], s.p[i],
                             s.u[i],          s.theta[i],  s.cs[i]};
    bool first = true;
    for (double v : values) {
      if (!first) os << ',';
      os << format_double(v);
      first = false;
    }
    os << '\n';
  }
}

void write_diagnostics_csv(std::ostream& os, const std::vector<StepDiagnostics>& history) {
  os << "step,t,dt,mass1,mass2,momentum,energy,mass_identity,kinetic_identity,"
        "internal_identity,p_min,p_max,theta_min,theta_max,alpha1_min,alpha1_max,rho1_min,"
        "rho2_min\n";
  for (const StepDiagnostics& d : history) {
    os << d.step;
    const double values[] = {d.t,
                             d.dt,
                             d.totals.mass1,
                             d.totals.mass2,
                             d.totals.momentum,
                             d.totals.energy,
                             d.mass_identity,
                             d.kinetic_identity,
                             d.internal_identity,
                             d.p_min,
                             d.p_max,
                             d.theta_min,
                             d.theta_max,
                             d.alpha1_min,
                             d.alpha1_max,
                             d.rho1_min,
                             d.rho2_min};
    for (double v : values) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace qhmix

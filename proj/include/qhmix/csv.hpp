#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qhmix/scheme.hpp"

namespace qhmix {

/// 17 significant digits, '.' decimal point regardless of locale.
std::string format_double(double v);

/// x, rho1, rho2, rho, y1, alpha1, alpha2, p, u, theta, cs
void write_state_csv(std::ostream& os, const MeshState& s);

/// step, t, dt, totals, identity residuals and extrema.
void write_diagnostics_csv(std::ostream& os, const std::vector<StepDiagnostics>& history);

/// Writes `text` to `path`, throwing IoError.
void write_file(const std::string& path, const std::string& text);

}  // namespace qhmix

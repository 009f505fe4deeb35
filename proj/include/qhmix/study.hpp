#pragma once

// Mesh convergence against a fine-mesh pseudo-exact solution: scaled L1
// errors on coincident nodes and practical orders log2(e_{N/2} / e_N).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qhmix/cases.hpp"
#include "qhmix/scheme.hpp"

namespace qhmix {

enum class Quantity { Rho, Y1, Alpha1, P, U, Theta };

inline constexpr std::array<Quantity, 6> kQuantities = {
    Quantity::Rho, Quantity::Y1, Quantity::Alpha1, Quantity::P, Quantity::U, Quantity::Theta};

std::string to_string(Quantity q);
/// Divisor used in the printed tables: rho 1e2, p 1e7, u 1e1, theta 1e2.
double table_scale(Quantity q);
/// Node values of a quantity.
NodeField quantity(const MeshState& s, Quantity q);

using QuantityErrors = std::array<double, 6>;

/// (1 / (x_max - x_min)) sum_i |v_i - v_ref(x_i)| h over all coarse nodes.
/// Throws NonNestedMesh unless both meshes span the same interval and the
/// reference cell count is a multiple of the coarse one.
double l1_error(const Mesh& coarse, const NodeField& v, const Mesh& fine, const NodeField& ref);
QuantityErrors l1_errors(const MeshState& coarse, const MeshState& reference);

struct ErrorReport {
  std::string case_id;
  int n_ref = 0;
  std::vector<int> n_list;
  std::vector<QuantityErrors> errors;
  /// orders[k][q] exists when n_list holds n_list[k] / 2 and both errors are
  /// positive.
  std::vector<std::array<std::optional<double>, 6>> orders;
};

/// Fills report.orders from report.errors.
void compute_orders(ErrorReport& report);

/// Runs the case at n_ref and at each N of n_list with the given numerics.
/// Throws NonNestedMesh before running anything when some N does not divide n_ref.
ErrorReport error_study(const CaseSpec& spec, const SchemeConfig& cfg,
                        const std::vector<int>& n_list, int n_ref);

/// Aligned table with the scaled error columns followed by the orders.
std::string format_report_table(const ErrorReport& report);
/// Unscaled errors and orders, one row per N.
std::string format_report_csv(const ErrorReport& report);

}  // namespace qhmix

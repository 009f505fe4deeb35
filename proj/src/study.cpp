#include "qhmix/study.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qhmix/csv.hpp"

namespace qhmix {

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::Rho: return "rho";
    case Quantity::Y1: return "y1";
    case Quantity::Alpha1: return "alpha1";
    case Quantity::P: return "p";
    case Quantity::U: return "u";
    case Quantity::Theta: return "theta";
  }
  return "?";
}

double table_scale(Quantity q) {
  switch (q) {
    case Quantity::Rho: return 1e2;
    case Quantity::P: return 1e7;
    case Quantity::U: return 1e1;
    case Quantity::Theta: return 1e2;
    default: return 1.0;
  }
}

NodeField quantity(const MeshState& s, Quantity q) {
  switch (q) {
    case Quantity::Rho: return s.rho1 + s.rho2;
    case Quantity::Y1: return s.rho1 / (s.rho1 + s.rho2);
    case Quantity::Alpha1: return s.alpha1;
    case Quantity::P: return s.p;
    case Quantity::U: return s.u;
    case Quantity::Theta: return s.theta;
  }
  return {};
}

double l1_error(const Mesh& coarse, const NodeField& v, const Mesh& fine, const NodeField& ref) {
  if (coarse.x_min() != fine.x_min() || coarse.x_max() != fine.x_max() ||
      fine.n_cells() % coarse.n_cells() != 0) {
    std::ostringstream os;
    os << "mesh of " << coarse.n_cells() << " cells is not nested in one of "
       << fine.n_cells() << " cells";
    throw Error(ErrorCode::NonNestedMesh, os.str());
  }
  if (v.size() != coarse.n_nodes() || ref.size() != fine.n_nodes()) {
    throw Error(ErrorCode::LengthMismatch, "l1_error: field does not match its mesh");
  }
  const std::size_t k = static_cast<std::size_t>(fine.n_cells() / coarse.n_cells());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += std::abs(v[i] - ref[i * k]);
  return sum * coarse.h() / (coarse.x_max() - coarse.x_min());
}

QuantityErrors l1_errors(const MeshState& coarse, const MeshState& reference) {
  QuantityErrors e{};
  for (std::size_t q = 0; q < kQuantities.size(); ++q) {
    e[q] = l1_error(coarse.mesh, quantity(coarse, kQuantities[q]), reference.mesh,
                    quantity(reference, kQuantities[q]));
  }
  return e;
}

void compute_orders(ErrorReport& r) {
  r.orders.assign(r.n_list.size(), {});
  for (std::size_t k = 0; k < r.n_list.size(); ++k) {
    if (r.n_list[k] % 2 != 0) continue;
    for (std::size_t h = 0; h < r.n_list.size(); ++h) {
      if (r.n_list[h] * 2 != r.n_list[k]) continue;
      for (std::size_t q = 0; q < kQuantities.size(); ++q) {
        const double coarse = r.errors[h][q];
        const double fine = r.errors[k][q];
        if (coarse > 0.0 && fine > 0.0) r.orders[k][q] = std::log2(coarse / fine);
      }
    }
  }
}

ErrorReport error_study(const CaseSpec& spec, const SchemeConfig& cfg,
                        const std::vector<int>& n_list, int n_ref) {
  const Mesh fine = case_mesh(spec, n_ref);
  for (int n : n_list) {
    if (n < 2 || n_ref % n != 0) {
      throw Error(ErrorCode::NonNestedMesh,
                  std::to_string(n) + " does not divide " + std::to_string(n_ref));
    }
  }
  RunOptions quiet;
  quiet.identities = false;
  quiet.stride = 1 << 30;
  const MeshState ref = run(build_initial(spec, fine), cfg, spec.t_fin, quiet).final;

  ErrorReport report;
  report.case_id = spec.id;
  report.n_ref = n_ref;
  report.n_list = n_list;
  for (int n : n_list) {
    const MeshState s = run(build_initial(spec, case_mesh(spec, n)), cfg, spec.t_fin, quiet).final;
    report.errors.push_back(l1_errors(s, ref));
  }
  compute_orders(report);
  return report;
}

std::string format_report_table(const ErrorReport& r) {
  std::ostringstream os;
  char buf[64];
  os << "case " << r.case_id << ", reference N = " << r.n_ref << '\n';
  std::snprintf(buf, sizeof buf, "%6s", "N");
  os << buf;
  for (Quantity q : kQuantities) {
    std::string head = "e(" + to_string(q) + ")";
    const double s = table_scale(q);
    if (s != 1.0) {
      std::snprintf(buf, sizeof buf, "/1e%d", static_cast<int>(std::lround(std::log10(s))));
      head += buf;
    }
    std::snprintf(buf, sizeof buf, " %14s %7s", head.c_str(), ("o(" + to_string(q) + ")").c_str());
    os << buf;
  }
  os << '\n';
  for (std::size_t k = 0; k < r.n_list.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%6d", r.n_list[k]);
    os << buf;
    for (std::size_t q = 0; q < kQuantities.size(); ++q) {
      std::snprintf(buf, sizeof buf, " %14.4E", r.errors[k][q] / table_scale(kQuantities[q]));
      os << buf;
      if (k < r.orders.size() && r.orders[k][q]) {
        std::snprintf(buf, sizeof buf, " %7.3f", *r.orders[k][q]);
      } else {
        std::snprintf(buf, sizeof buf, " %7s", "--");
      }
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::string format_report_csv(const ErrorReport& r) {
  std::ostringstream os;
  os << "n";
  for (Quantity q : kQuantities) os << ",e_" << to_string(q);
  for (Quantity q : kQuantities) os << ",o_" << to_string(q);
  os << '\n';
  for (std::size_t k = 0; k < r.n_list.size(); ++k) {
    os << r.n_list[k];
    for (double e : r.errors[k]) os << ',' << format_double(e);
    for (std::size_t q = 0; q < kQuantities.size(); ++q) {
      os << ',';
      if (k < r.orders.size() && r.orders[k][q]) os << format_double(*r.orders[k][q]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace qhmix

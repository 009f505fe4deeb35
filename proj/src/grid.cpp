#include "qhmix/grid.hpp"

#include <cmath>
#include <sstream>

namespace qhmix {

Mesh::Mesh(double x_min, double x_max, int n_cells)
    : x_min_(x_min), x_max_(x_max), n_cells_(n_cells) {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorCode::InvalidParameter, "mesh needs x_min < x_max");
  }
  if (n_cells < 2) {
    throw Error(ErrorCode::InvalidParameter, "mesh needs at least two cells");
  }
  h_ = (x_max - x_min) / n_cells;
}

namespace {

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << ": field has " << got << " values, mesh expects " << want;
    throw Error(ErrorCode::LengthMismatch, os.str());
  }
}

}  // namespace

HalfField avg(const Mesh& mesh, const NodeField& v) {
  require_length(v.size(), mesh.n_nodes(), "avg");
  HalfField out(mesh.n_half());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (v[i] + v[i + 1]);
  return out;
}

HalfField delta(const Mesh& mesh, const NodeField& v) {
  require_length(v.size(), mesh.n_nodes(), "delta");
  HalfField out(mesh.n_half());
  const double h = mesh.h();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (v[i + 1] - v[i]) / h;
  return out;
}

HalfField left_value(const Mesh& mesh, const NodeField& v) {
  require_length(v.size(), mesh.n_nodes(), "left_value");
  return HalfField(std::vector<double>(v.begin(), v.end() - 1));
}

HalfField right_value(const Mesh& mesh, const NodeField& v) {
  require_length(v.size(), mesh.n_nodes(), "right_value");
  return HalfField(std::vector<double>(v.begin() + 1, v.end()));
}

namespace {

template <class Combine>
NodeField star(const Mesh& mesh, const HalfField& w, Wrap wrap, Combine combine) {
  require_length(w.size(), mesh.n_half(), "star operator");
  const std::size_t n = mesh.n_half();
  NodeField out(mesh.n_nodes());
  for (std::size_t i = 1; i < n; ++i) out[i] = combine(w[i - 1], w[i]);
  if (wrap == Wrap::Periodic) {
    out[0] = combine(w[n - 1], w[0]);
    out[n] = out[0];
  }
  return out;
}

}  // namespace

NodeField avg_star(const Mesh& mesh, const HalfField& w, Wrap wrap) {
  return star(mesh, w, wrap, [](double l, double r) { return 0.5 * (l + r); });
}

NodeField delta_star(const Mesh& mesh, const HalfField& w, Wrap wrap) {
  const double h = mesh.h();
  return star(mesh, w, wrap, [h](double l, double r) { return (r - l) / h; });
}

NodeField fill_copy_boundary(NodeField v) {
  const std::size_t n = v.size();
  if (n >= 3) {
    v[0] = v[1];
    v[n - 1] = v[n - 2];
  }
  return v;
}

}  // namespace qhmix

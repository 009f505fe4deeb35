#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qhmix/error.hpp"

namespace qhmix {

/// Uniform main mesh x_i = x_min + i h (i = 0..N) and auxiliary mesh
/// x_{i+1/2} = x_min + (i + 0.5) h (i = 0..N-1).
class Mesh {
 public:
  Mesh() = default;
  Mesh(double x_min, double x_max, int n_cells);

  int n_cells() const noexcept { return n_cells_; }
  std::size_t n_nodes() const noexcept { return static_cast<std::size_t>(n_cells_) + 1; }
  std::size_t n_half() const noexcept { return static_cast<std::size_t>(n_cells_); }
  double h() const noexcept { return h_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double half_extent() const noexcept { return 0.5 * (x_max_ - x_min_); }
  double node(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * h_; }
  double half_node(std::size_t i) const noexcept {
    return x_min_ + (static_cast<double>(i) + 0.5) * h_;
  }

 private:
  double x_min_ = -1.0;
  double x_max_ = 1.0;
  int n_cells_ = 2;
  double h_ = 1.0;
};

struct NodeTag {};
struct HalfTag {};

/// Values on one of the two meshes. The tag makes passing a main-mesh field
/// where an auxiliary-mesh field is expected a compile error.
template <class Tag>
class Field {
 public:
  Field() = default;
  explicit Field(std::size_t n, double value = 0.0) : values_(n, value) {}
  explicit Field(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }
  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }
  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  Field& operator+=(const Field& o) { return apply(o, [](double a, double b) { return a + b; }); }
  Field& operator-=(const Field& o) { return apply(o, [](double a, double b) { return a - b; }); }
  Field& operator*=(const Field& o) { return apply(o, [](double a, double b) { return a * b; }); }
  Field& operator/=(const Field& o) { return apply(o, [](double a, double b) { return a / b; }); }
  Field& operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, const Field& b) { return a *= b; }
  friend Field operator/(Field a, const Field& b) { return a /= b; }
  friend Field operator*(Field a, double s) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator-(Field a) { return a *= -1.0; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  template <class Op>
  Field& apply(const Field& o, Op op) {
    if (o.size() != size()) {
      throw Error(ErrorCode::LengthMismatch, "field arithmetic on different lengths");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = op(values_[i], o.values_[i]);
    return *this;
  }

  std::vector<double> values_;
};

using NodeField = Field<NodeTag>;
using HalfField = Field<HalfTag>;

/// Whether the node stencils close around the ends (node N identified with 0).
enum class Wrap { None, Periodic };

/// [v]_{i+1/2} = (v_i + v_{i+1}) / 2
HalfField avg(const Mesh& mesh, const NodeField& v);
/// (v_{i+1} - v_i) / h
HalfField delta(const Mesh& mesh, const NodeField& v);
/// v_- and v_+ at each half node: v_i and v_{i+1}.
HalfField left_value(const Mesh& mesh, const NodeField& v);
HalfField right_value(const Mesh& mesh, const NodeField& v);

/// [w]*_i = (w_{i-1/2} + w_{i+1/2}) / 2 on interior nodes. Boundary slots are
/// zero for Wrap::None and wrapped for Wrap::Periodic.
NodeField avg_star(const Mesh& mesh, const HalfField& w, Wrap wrap = Wrap::None);
/// (w_{i+1/2} - w_{i-1/2}) / h on interior nodes, boundary slots as avg_star.
NodeField delta_star(const Mesh& mesh, const HalfField& w, Wrap wrap = Wrap::None);

/// v_0 := v_1, v_N := v_{N-1}.
NodeField fill_copy_boundary(NodeField v);

template <class F>
NodeField sample(const Mesh& mesh, F&& f) {
  NodeField out(mesh.n_nodes());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(mesh.node(i));
  return out;
}

}  // namespace qhmix

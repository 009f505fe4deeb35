#pragma once

// The seven shock-tube benchmarks (A-G) and a key=value text format for
// deriving custom cases from them.

#include <map>
#include <string>
#include <vector>

#include "qhmix/eos.hpp"
#include "qhmix/grid.hpp"
#include "qhmix/scheme.hpp"

namespace qhmix {

struct PrimitiveState {
  double p = 1e5;
  double u = 0.0;
  double theta = 300.0;

  friend bool operator==(const PrimitiveState&, const PrimitiveState&) = default;
};

/// Either volume fractions on each side of the jump, or a uniform mass
/// fraction converted to a volume fraction at the local pressure.
struct FractionSpec {
  enum class Kind { Volume, Mass };
  Kind kind = Kind::Volume;
  double alpha1_left = 0.5;
  double alpha1_right = 0.5;
  double y1 = 0.5;

  /// Compares only the fields the kind uses.
  friend bool operator==(const FractionSpec& a, const FractionSpec& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::Mass) return a.y1 == b.y1;
    return a.alpha1_left == b.alpha1_left && a.alpha1_right == b.alpha1_right;
  }
};

struct CaseDefaults {
  Regularization reg = Regularization::QGD;
  int n_coarse = 200;
  int n_fine = 1000;
  double a = 0.5;
  double beta = 0.1;
  double a_s = 1.0;
  double prandtl_inv_reported = 1.0;
  BoundaryMode boundary = BoundaryMode::Copy;
  PartialDensities partials = PartialDensities::NonNegative;

  friend bool operator==(const CaseDefaults&, const CaseDefaults&) = default;
};

struct CaseSpec {
  std::string id = "custom";
  GasPair gases;
  double x_min = -0.5;
  double x_max = 0.5;
  double x_disc = 0.0;
  PrimitiveState left;
  PrimitiveState right;
  FractionSpec fractions;
  double t_fin = 1e-3;
  CaseDefaults defaults;

  /// Throws InvalidParameter unless x_min < x_disc < x_max, t_fin >= 0 and
  /// both sides convert to admissible conserved states.
  void validate() const;
  /// Scheme configuration from the defaults.
  SchemeConfig scheme_config() const;

  friend bool operator==(const CaseSpec&, const CaseSpec&) = default;
};

/// Ids of the published benchmarks, "A" .. "G".
std::vector<std::string> case_ids();

/// Throws UnknownCase.
CaseSpec make_case(const std::string& id);

/// Left state for x < x_disc, right state for x >= x_disc. The returned
/// state has its closure fields refreshed.
MeshState build_initial(const CaseSpec& spec, const Mesh& mesh);

/// Mesh of spec.defaults.n_coarse cells (or n_cells when positive).
Mesh case_mesh(const CaseSpec& spec, int n_cells = 0);

/// Keys understood by the config format but not part of CaseSpec, e.g. out,
/// stride, n-list. The front end interprets them.
struct CaseConfig {
  CaseSpec spec;
  std::map<std::string, std::string> run_keys;
};

/// Parses key=value lines; '#' starts a comment. A `case` key selects the
/// published case the other keys override; without it, all case keys start
/// from CaseSpec defaults. Throws ConfigError on unknown keys or bad values.
CaseConfig parse_case_config(const std::string& text);
CaseConfig read_case_config(const std::string& path);

/// Full key=value dump that parse_case_config reads back to an equal spec.
std::string format_case_config(const CaseSpec& spec);

/// Sets a single key. Throws ConfigError. Returns false for keys that are not
/// case keys (left for the caller).
bool set_case_key(CaseSpec& spec, const std::string& key, const std::string& value);

double parse_number(const std::string& key, const std::string& value);
int parse_int(const std::string& key, const std::string& value);

}  // namespace qhmix

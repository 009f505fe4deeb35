#include "qhmix/cases.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace qhmix {

namespace {

GasPair air_water(double air_cv) {
  return {GasParams(1.4, air_cv, 0.0, 0.0), GasParams(2.8, 1495.0, 8.5e8, 0.0)};
}

GasPair vapor_water() {
  return {GasParams(1.43, 1040.0, 0.0, 2.03e6), GasParams(2.35, 1816.0, 1e9, -1.167e6)};
}

FractionSpec volume(double left, double right) {
  FractionSpec f;
  f.kind = FractionSpec::Kind::Volume;
  f.alpha1_left = left;
  f.alpha1_right = right;
  return f;
}

FractionSpec mass(double y1) {
  FractionSpec f;
  f.kind = FractionSpec::Kind::Mass;
  f.y1 = y1;
  return f;
}

CaseDefaults numerics(Regularization reg, int n, int n_fine, double a, double beta,
                      double prandtl_inv = 1.0) {
  CaseDefaults d;
  d.reg = reg;
  d.n_coarse = n;
  d.n_fine = n_fine;
  d.a = a;
  d.beta = beta;
  d.a_s = 1.0;
  d.prandtl_inv_reported = prandtl_inv;
  return d;
}

double alpha1_at(const CaseSpec& spec, double x, double p) {
  if (spec.fractions.kind == FractionSpec::Kind::Mass) {
    return volume_fraction_from_mass(spec.fractions.y1, p, spec.gases);
  }
  return x < spec.x_disc ? spec.fractions.alpha1_left : spec.fractions.alpha1_right;
}

}  // namespace

std::vector<std::string> case_ids() { return {"A", "B", "C", "D", "E", "F", "G"}; }

CaseSpec make_case(const std::string& id) {
  using R = Regularization;
  CaseSpec c;
  c.id = id;
  if (id == "A") {
    c.gases = air_water(717.5);
    c.x_min = -5.0, c.x_max = 5.0, c.x_disc = 0.0;
    c.left = {1e9, 0.0, 308.15};
    c.right = {1e5, 0.0, 308.15};
    c.fractions = volume(1.0 - 1e-5, 1e-5);
    c.t_fin = 2e-3;
    c.defaults = numerics(R::QGD, 300, 2000, 0.3, 0.2);
  } else if (id == "B") {
    c.gases = air_water(720.0);
    c.x_min = -5.0, c.x_max = 5.0, c.x_disc = 0.0;
    c.left = {2e7, 0.0, 308.15};
    c.right = {1e7, 0.0, 308.15};
    c.fractions = volume(0.25, 0.75);
    c.t_fin = 6e-3;
    c.defaults = numerics(R::QGD, 500, 2500, 2.0, 0.1);
  } else if (id == "C") {
    c.gases = vapor_water();
    c.left = {2e5, 0.0, 394.2489};
    c.right = {1e5, 0.0, 372.8827};
    c.fractions = mass(0.8);
    c.t_fin = 0.8e-3;
    c.defaults = numerics(R::QHD, 200, 500, 0.8, 0.2);
  } else if (id == "D") {
    c.gases = vapor_water();
    c.left = {2e5, 0.0, 395.0};
    c.right = {1e5, 0.0, 375.0};
    c.fractions = mass(0.99);
    c.t_fin = 0.5e-3;
    c.defaults = numerics(R::QGD, 100, 500, 0.2, 0.2);
  } else if (id == "E") {
    c.gases = vapor_water();
    c.left = {2e5, 0.0, 395.0};
    c.right = {1e5, 0.0, 375.0};
    c.fractions = mass(0.2);
    c.t_fin = 1.5e-3;
    c.defaults = numerics(R::QHD, 500, 1500, 0.8, 0.3);
  } else if (id == "F") {
    c.gases = {GasParams(1.025, 1956.0, 0.0, -2.37e5), GasParams(2.35, 1077.0, 4e8, -7.55e5)};
    c.x_min = -5.0, c.x_max = 5.0, c.x_disc = -2.0;
    c.left = {1e10, 0.0, 308.15};
    c.right = {1e5, 0.0, 308.15};
    c.fractions = volume(1.0, 0.0);
    c.t_fin = 5e-3;
    c.defaults = numerics(R::QGD, 500, 2000, 0.9, 0.1, 0.2);
  } else if (id == "G") {
    c.gases = {GasParams(1.06, 2410.0, 8.86e5, -3.01e5), GasParams(1.23, 2440.0, 1.32e8, -6.23e5)};
    c.x_min = -40.0, c.x_max = 40.0, c.x_disc = 10.0;
    c.left = {6e6, 0.0, 283.13};
    c.right = {1e6, 0.0, 283.13};
    c.fractions = volume(1e-6, 1.0 - 1e-6);
    c.t_fin = 0.08;
    c.defaults = numerics(R::QGD, 1200, 4000, 0.8, 0.1, 0.1);
  } else {
    throw Error(ErrorCode::UnknownCase, "no benchmark named '" + id + "'");
  }
  return c;
}

void CaseSpec::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); };
  if (!(x_min < x_disc && x_disc < x_max)) bad("need x_min < x_disc < x_max");
  if (!(t_fin >= 0.0) || !std::isfinite(t_fin)) bad("t_fin must be non-negative");
  if (defaults.n_coarse < 2 || defaults.n_fine < 2) bad("mesh sizes must be at least 2");
  scheme_config().validate();
  primitive_to_conserved(left.p, left.u, left.theta, alpha1_at(*this, x_min, left.p), gases);
  primitive_to_conserved(right.p, right.u, right.theta, alpha1_at(*this, x_max, right.p),
                         gases);
}

SchemeConfig CaseSpec::scheme_config() const {
  SchemeConfig cfg;
  cfg.reg = defaults.reg;
  cfg.a = defaults.a;
  cfg.beta = defaults.beta;
  cfg.a_s = defaults.a_s;
  cfg.prandtl_inv_reported = defaults.prandtl_inv_reported;
  cfg.boundary = defaults.boundary;
  cfg.partials = defaults.partials;
  return cfg;
}

Mesh case_mesh(const CaseSpec& spec, int n_cells) {
  return Mesh(spec.x_min, spec.x_max, n_cells > 0 ? n_cells : spec.defaults.n_coarse);
}

MeshState build_initial(const CaseSpec& spec, const Mesh& mesh) {
  MeshState s(mesh, spec.gases);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = mesh.node(i);
    const PrimitiveState& side = x < spec.x_disc ? spec.left : spec.right;
    const double alpha1 = alpha1_at(spec, x, side.p);
    s.set_conserved(i, primitive_to_conserved(side.p, side.u, side.theta, alpha1, spec.gases));
  }
  s.time = 0.0;
  s.refresh_closure();
  return s;
}

double parse_number(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorCode::ConfigError, key + ": '" + value + "' is not a number");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE || v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::ConfigError, key + ": '" + value + "' is not an integer");
  }
  return static_cast<int>(v);
}

namespace {

void set_gas_key(GasParams& g, const std::string& field, const std::string& key,
                 const std::string& value) {
  double gamma = g.gamma(), cv = g.cv(), p_star = g.p_star(), eps0 = g.eps0();
  const double v = parse_number(key, value);
  if (field == "gamma") gamma = v;
  else if (field == "cv") cv = v;
  else if (field == "p-star") p_star = v;
  else if (field == "eps0") eps0 = v;
  else throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
  try {
    g = GasParams(gamma, cv, p_star, eps0);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, key + ": " + e.what());
  }
}

void set_side_key(PrimitiveState& s, const std::string& field, const std::string& key,
                  const std::string& value) {
  const double v = parse_number(key, value);
  if (field == "p") s.p = v;
  else if (field == "u") s.u = v;
  else if (field == "theta") s.theta = v;
  else throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const char* const kRunKeys[] = {"out", "stride", "n-list", "n-ref", "threads"};

}  // namespace

bool set_case_key(CaseSpec& spec, const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    const std::string head = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    if (head == "gas1") set_gas_key(spec.gases.g1, field, key, value);
    else if (head == "gas2") set_gas_key(spec.gases.g2, field, key, value);
    else if (head == "left") set_side_key(spec.left, field, key, value);
    else if (head == "right") set_side_key(spec.right, field, key, value);
    else throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
    return true;
  }
  CaseDefaults& d = spec.defaults;
  try {
    if (key == "id") spec.id = value;
    else if (key == "x-min") spec.x_min = parse_number(key, value);
    else if (key == "x-max") spec.x_max = parse_number(key, value);
    else if (key == "x-disc") spec.x_disc = parse_number(key, value);
    else if (key == "alpha1-left") {
      spec.fractions.kind = FractionSpec::Kind::Volume;
      spec.fractions.alpha1_left = parse_number(key, value);
    } else if (key == "alpha1-right") {
      spec.fractions.kind = FractionSpec::Kind::Volume;
      spec.fractions.alpha1_right = parse_number(key, value);
    } else if (key == "y1") {
      spec.fractions.kind = FractionSpec::Kind::Mass;
      spec.fractions.y1 = parse_number(key, value);
    } else if (key == "t-fin") spec.t_fin = parse_number(key, value);
    else if (key == "reg") d.reg = parse_regularization(value);
    else if (key == "n") d.n_coarse = parse_int(key, value);
    else if (key == "n-fine") d.n_fine = parse_int(key, value);
    else if (key == "a") d.a = parse_number(key, value);
    else if (key == "beta") d.beta = parse_number(key, value);
    else if (key == "schmidt") d.a_s = parse_number(key, value);
    else if (key == "prandtl-inv") d.prandtl_inv_reported = parse_number(key, value);
    else if (key == "boundary") d.boundary = parse_boundary(value);
    else if (key == "partials") d.partials = parse_partials(value);
    else return false;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, key + ": " + e.what());
  }
  return true;
}

CaseConfig parse_case_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError,
                  "line " + std::to_string(line_no) + ": expected key=value");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  CaseConfig cfg;
  for (const auto& [key, value] : entries) {
    if (key == "case") cfg.spec = make_case(value);
  }
  for (const auto& [key, value] : entries) {
    if (key == "case") continue;
    if (set_case_key(cfg.spec, key, value)) continue;
    bool known = false;
    for (const char* k : kRunKeys) known = known || key == k;
    if (!known) throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
    cfg.run_keys[key] = value;
  }
  return cfg;
}

CaseConfig read_case_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_case_config(buf.str());
}

std::string format_case_config(const CaseSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "id = " << spec.id << '\n';
  auto gas = [&os](const char* name, const GasParams& g) {
    os << name << ".gamma = " << g.gamma() << '\n'
       << name << ".cv = " << g.cv() << '\n'
       << name << ".p-star = " << g.p_star() << '\n'
       << name << ".eps0 = " << g.eps0() << '\n';
  };
  gas("gas1", spec.gases.g1);
  gas("gas2", spec.gases.g2);
  os << "x-min = " << spec.x_min << '\n'
     << "x-max = " << spec.x_max << '\n'
     << "x-disc = " << spec.x_disc << '\n';
  auto side = [&os](const char* name, const PrimitiveState& s) {
    os << name << ".p = " << s.p << '\n'
       << name << ".u = " << s.u << '\n'
       << name << ".theta = " << s.theta << '\n';
  };
  side("left", spec.left);
  side("right", spec.right);
  if (spec.fractions.kind == FractionSpec::Kind::Mass) {
    os << "y1 = " << spec.fractions.y1 << '\n';
  } else {
    os << "alpha1-left = " << spec.fractions.alpha1_left << '\n'
       << "alpha1-right = " << spec.fractions.alpha1_right << '\n';
  }
  const CaseDefaults& d = spec.defaults;
  os << "t-fin = " << spec.t_fin << '\n'
     << "reg = " << to_string(d.reg) << '\n'
     << "n = " << d.n_coarse << '\n'
     << "n-fine = " << d.n_fine << '\n'
     << "a = " << d.a << '\n'
     << "beta = " << d.beta << '\n'
     << "schmidt = " << d.a_s << '\n'
     << "prandtl-inv = " << d.prandtl_inv_reported << '\n'
     << "boundary = " << to_string(d.boundary) << '\n'
     << "partials = " << to_string(d.partials) << '\n';
  return os.str();
}

}  // namespace qhmix

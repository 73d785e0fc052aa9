#include "wavenorm/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wavenorm/error.hpp"

namespace wavenorm {
namespace {

namespace pt = boost::property_tree;

const std::string kDefault = R"(# wavenorm experiment configuration
[run]
dimension = 1

[u0]
kind = zero

[u1]
kind = indicator_interval
radius = 1
amplitude = 2

[constants]
delta0 = 0.99
M = 1.4142135623730951

[quadrature]
abs_tol = 1e-14
rel_tol = 1e-11
max_panels = 1048576

[samples]
start = 100
stop = 100000
count = 40

[grid]
half_length = 256
points = 2048

[local_energy]
R = 5
times = 10, 20, 40, 60, 80, 100, 120, 150, 180, 200

[output]
dir = out
)";

class Reader {
public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  bool has(const std::string& key) const { return tree_.get_child_optional(pt::ptree::path_type(key, '.')).has_value(); }

  std::string text(const std::string& key) const {
    used_.insert(key);
    return boost::trim_copy(tree_.get<std::string>(pt::ptree::path_type(key, '.')));
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_number(key, text(key));
  }

  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const std::string v = text(key);
    std::size_t pos = 0;
    long out = 0;
    try {
      out = std::stol(v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != v.size()) throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, v));
    return out;
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    std::vector<std::string> parts;
    const std::string v = text(key);
    boost::split(parts, v, boost::is_any_of(","));
    for (auto& p : parts) {
      boost::trim(p);
      if (!p.empty()) out.push_back(parse_number(key, p));
    }
    return out;
  }

  void reject_unused() const {
    for (const auto& [section, body] : tree_) {
      if (body.empty()) throw ConfigError(fmt::format("{}: key outside any section", section));
      for (const auto& [key, value] : body) {
        const std::string full = section + "." + key;
        if (!used_.count(full)) throw ConfigError(fmt::format("{}: unknown key", full));
      }
    }
  }

private:
  static double parse_number(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
      out = std::stod(v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != v.size() || !std::isfinite(out)) {
      throw ConfigError(fmt::format("{}: expected a finite number, got '{}'", key, v));
    }
    return out;
  }

  const pt::ptree& tree_;
  mutable std::set<std::string> used_;
};

std::vector<Monomial> parse_terms(const std::string& key, const std::string& v) {
  std::vector<Monomial> out;
  std::vector<std::string> items;
  boost::split(items, v, boost::is_any_of(","));
  for (auto& item : items) {
    boost::trim(item);
    if (item.empty()) continue;
    std::vector<std::string> f;
    boost::split(f, item, boost::is_any_of(":"));
    if (f.size() != 3) throw ConfigError(fmt::format("{}: term '{}' is not coef:px:py", key, item));
    try {
      out.push_back({std::stod(f[0]), std::stoi(f[1]), std::stoi(f[2])});
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("{}: term '{}' is not coef:px:py", key, item));
    }
  }
  if (out.empty()) throw ConfigError(fmt::format("{}: no terms", key));
  return out;
}

Profile parse_profile(const Reader& r, const std::string& section, int dimension) {
  const std::string kind_key = section + ".kind";
  if (!r.has(kind_key)) throw ConfigError(fmt::format("{}: missing", kind_key));
  const std::string kind = r.text(kind_key);
  auto key = [&](const char* name) { return section + "." + name; };
  try {
    if (kind == "zero") return Profile::zero(dimension);
    if (kind == "gaussian") {
      Gaussian g;
      g.sigma = r.number(key("sigma"), g.sigma);
      g.amplitude = r.number(key("amplitude"), g.amplitude);
      g.center = {r.number(key("center_x"), 0.0), r.number(key("center_y"), 0.0)};
      return {dimension, g};
    }
    if (kind == "indicator_interval") {
      IndicatorInterval p;
      p.radius = r.number(key("radius"), p.radius);
      p.amplitude = r.number(key("amplitude"), p.amplitude);
      return {dimension, p};
    }
    if (kind == "indicator_disk") {
      IndicatorDisk p;
      p.radius = r.number(key("radius"), p.radius);
      p.amplitude = r.number(key("amplitude"), p.amplitude);
      return {dimension, p};
    }
    if (kind == "polynomial_gaussian") {
      PolynomialGaussian p;
      p.sigma = r.number(key("sigma"), p.sigma);
      if (!r.has(key("terms"))) throw ConfigError(fmt::format("{}: missing", key("terms")));
      p.terms = parse_terms(key("terms"), r.text(key("terms")));
      return {dimension, p};
    }
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("{}: {}", section, e.what()));
  }
  throw ConfigError(fmt::format("{}: unknown profile kind '{}'", kind_key, kind));
}

ExperimentConfig from_tree(const pt::ptree& tree) {
  Reader r(tree);
  ExperimentConfig c;
  c.dimension = static_cast<int>(r.integer("run.dimension", 1));
  if (c.dimension != 1 && c.dimension != 2) {
    throw ConfigError(fmt::format("run.dimension: must be 1 or 2, got {}", c.dimension));
  }
  c.profiles = ProfilePair(parse_profile(r, "u0", c.dimension), parse_profile(r, "u1", c.dimension));
  if (!c.profiles.u0.is_differentiable()) throw ConfigError("u0.kind: u0 must be differentiable");

  c.constants.delta0 = r.number("constants.delta0", c.constants.delta0);
  c.constants.M = r.number("constants.M", c.constants.M);
  if (!(c.constants.delta0 > 0.0 && c.constants.delta0 < 1.0)) {
    throw ConfigError(fmt::format("constants.delta0: must lie in (0, 1), got {}", c.constants.delta0));
  }
  if (!(c.constants.M > 0.0)) throw ConfigError(fmt::format("constants.M: must be positive, got {}", c.constants.M));
  try {
    c.constants.validate();
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("constants: {}", e.what()));
  }

  c.quad.abs_tol = r.number("quadrature.abs_tol", c.quad.abs_tol);
  c.quad.rel_tol = r.number("quadrature.rel_tol", c.quad.rel_tol);
  const long panels = r.integer("quadrature.max_panels", static_cast<long>(c.quad.max_panels));
  if (!(c.quad.abs_tol > 0.0)) throw ConfigError("quadrature.abs_tol: must be positive");
  if (!(c.quad.rel_tol > 0.0)) throw ConfigError("quadrature.rel_tol: must be positive");
  if (panels < 1024) throw ConfigError(fmt::format("quadrature.max_panels: must be at least 1024, got {}", panels));
  c.quad.max_panels = static_cast<std::size_t>(panels);

  c.samples.start = r.number("samples.start", c.dimension == 1 ? 1e2 : 1e3);
  c.samples.stop = r.number("samples.stop", c.dimension == 1 ? 1e5 : 1e6);
  c.samples.count = static_cast<int>(r.integer("samples.count", c.samples.count));
  if (!(c.samples.start > 0.0)) throw ConfigError("samples.start: must be positive");
  if (!(c.samples.stop > c.samples.start)) throw ConfigError("samples.stop: must exceed samples.start");
  if (c.samples.count < 2) throw ConfigError("samples.count: must be at least 2");

  c.grid.half_length = r.number("grid.half_length", c.grid.half_length);
  const long points = r.integer("grid.points", static_cast<long>(c.grid.points));
  if (!(c.grid.half_length > 0.0)) throw ConfigError("grid.half_length: must be positive");
  if (points < 4 || (points & (points - 1)) != 0) {
    throw ConfigError(fmt::format("grid.points: must be a power of two >= 4, got {}", points));
  }
  c.grid.points = static_cast<std::size_t>(points);

  c.local_energy.R = r.number("local_energy.R", c.local_energy.R);
  if (!(c.local_energy.R > 0.0)) throw ConfigError("local_energy.R: must be positive");
  c.local_energy.times = r.list("local_energy.times");
  for (std::size_t i = 0; i < c.local_energy.times.size(); ++i) {
    const double t = c.local_energy.times[i];
    if (!(t > c.local_energy.R)) {
      throw ConfigError(fmt::format("local_energy.times: t = {} does not exceed R = {}", t, c.local_energy.R));
    }
    if (i > 0 && !(t > c.local_energy.times[i - 1])) {
      throw ConfigError("local_energy.times: must be strictly increasing");
    }
  }

  if (r.has("output.dir")) c.out_dir = r.text("output.dir");
  if (c.out_dir.empty()) throw ConfigError("output.dir: must not be empty");
  r.reject_unused();
  return c;
}

}  // namespace

std::vector<double> ExperimentConfig::times() const { return log_space(samples.start, samples.stop, samples.count); }

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("line {}: {}", e.line(), e.message()));
  }
  return from_tree(tree);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  return parse_config(in);
}

const std::string& default_config_text() { return kDefault; }

ExperimentConfig default_config() {
  std::istringstream in(kDefault);
  return parse_config(in);
}

}  // namespace wavenorm

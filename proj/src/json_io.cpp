#include "mpersuade/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "mpersuade/errors.hpp"

namespace mpersuade::json_io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigInvalid(path + ": " + message);
}

const Json& field(const Json& j, const std::string& path, const char* name) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) fail(path + "." + name, "missing required field");
  return *it;
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

std::vector<double> as_numbers(const Json& j, const std::string& path, std::size_t min_size = 0) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  if (j.size() < min_size) fail(path, "expected at least " + std::to_string(min_size) + " entries");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> as_rows(const Json& j, const std::string& path, std::size_t width) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    auto row = as_numbers(j[i], p);
    if (row.size() != width) fail(p, "expected " + std::to_string(width) + " numbers");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string kind_of(const Json& j, const std::string& path) {
  const Json& k = field(j, path, "kind");
  if (!k.is_string()) fail(path + ".kind", "expected a string");
  return k.get<std::string>();
}

// Library validation errors become configuration errors on the given field.
template <class F>
auto validated(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const InvalidArgument& e) {
    fail(path, e.what());
  }
}

ContinuousPrior build_continuous(const Json& j, const std::string& path, const std::string& kind) {
  if (kind == "uniform") return ContinuousPrior::uniform();
  if (kind == "piecewise_uniform") {
    std::vector<ContinuousPrior::UniformPiece> pieces;
    for (const auto& r : as_rows(field(j, path, "pieces"), path + ".pieces", 3)) pieces.push_back({r[0], r[1], r[2]});
    return validated(path + ".pieces", [&] { return ContinuousPrior::piecewise_uniform(pieces); });
  }
  if (kind == "piecewise_linear") {
    auto knots = as_numbers(field(j, path, "knots"), path + ".knots", 2);
    auto density = as_numbers(field(j, path, "density"), path + ".density", 2);
    return validated(path + ".density", [&] { return ContinuousPrior::piecewise_linear(knots, density); });
  }
  if (kind == "beta_mixture") {
    std::vector<ContinuousPrior::BetaComponent> comps;
    for (const auto& r : as_rows(field(j, path, "components"), path + ".components", 3))
      comps.push_back({r[0], r[1], r[2]});
    return validated(path + ".components", [&] { return ContinuousPrior::beta_mixture(comps); });
  }
  fail(path + ".kind", "unknown prior kind '" + kind + "'");
}

}  // namespace

ObjectiveFn parse_objective(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  ObjectiveFn v = [&] {
    if (kind == "polynomial") {
      auto coeffs = as_numbers(field(j, path, "coeffs"), path + ".coeffs", 1);
      return validated(path + ".coeffs", [&] { return ObjectiveFn::polynomial(coeffs); });
    }
    if (kind == "s_family") {
      const double w = as_number(field(j, path, "omega_M"), path + ".omega_M");
      return validated(path + ".omega_M", [&] { return ObjectiveFn::s_family(w); });
    }
    if (kind == "m_family") {
      const double l = as_number(field(j, path, "omega_L"), path + ".omega_L");
      const double r = as_number(field(j, path, "omega_R"), path + ".omega_R");
      return validated(path + ".omega_L", [&] { return ObjectiveFn::m_family(l, r); });
    }
    fail(path + ".kind", "unknown objective kind '" + kind + "'");
  }();
  if (auto it = j.find("affine"); it != j.end()) {
    const auto ab = as_numbers(*it, path + ".affine");
    if (ab.size() != 2) fail(path + ".affine", "expected [a, b]");
    v = v.with_affine(ab[0], ab[1]);
  }
  return v;
}

ContinuousPrior parse_continuous_prior(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "discrete") fail(path + ".kind", "a continuous prior is required here");
  return build_continuous(j, path, kind);
}

Prior parse_prior(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "discrete") {
    auto support = as_numbers(field(j, path, "support"), path + ".support", 1);
    auto probs = as_numbers(field(j, path, "probs"), path + ".probs", 1);
    const std::string where = support.size() != probs.size() ? path + ".support"
                              : [&] {
                                  double total = 0.0;
                                  for (double p : probs) total += p;
                                  return std::abs(total - 1.0) > 1e-12 ? path + ".probs" : path;
                                }();
    return validated(where, [&] { return Prior(DiscretePrior::create(support, probs)); });
  }
  return build_continuous(j, path, kind);
}

MediaEnvironment parse_environment(const Json& j, const std::string& path) {
  ContinuousPrior quality = parse_continuous_prior(field(j, path, "quality"), path + ".quality");
  ObjectiveFn citizens = parse_objective(field(j, path, "citizens"), path + ".citizens");
  const Json& outlets = field(j, path, "outlets");
  if (outlets.is_string()) {
    if (outlets.get<std::string>() != "continuum") fail(path + ".outlets", "expected an array or \"continuum\"");
    return validated(path + ".citizens", [&] { return MediaEnvironment::continuum(quality, citizens); });
  }
  auto cs = as_numbers(outlets, path + ".outlets");
  return validated(path + ".outlets", [&] { return MediaEnvironment::finite(quality, citizens, cs); });
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "nan";
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  double rounded = std::strtod(format_number(x).c_str(), nullptr);
  if (rounded == 0.0) rounded = 0.0;
  return rounded;
}

}  // namespace mpersuade::json_io

#pragma once

#include "errors.hpp"
#include "iia.hpp"
#include "io.hpp"
#include "kernels.hpp"
#include "parametric.hpp"
#include "profile.hpp"
#include "simulate.hpp"

#include <json.hpp>

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spmnl {

using json = nlohmann::ordered_json;

namespace detail {

template<typename T>
T
json_get(const json& j, const char* key, const T& fallback)
{
  if (!j.contains(key) || j.at(key).is_null())
    return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error(std::string("config key '") + key + "' has the wrong type");
  }
}

template<typename T>
T
json_require(const json& j, const char* key)
{
  if (!j.contains(key))
    throw config_error(std::string("config key '") + key + "' is required");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error(std::string("config key '") + key + "' has the wrong type");
  }
}

inline void
reject_unknown_keys(const json& j, const std::vector<std::string>& known, const std::string& where)
{
  if (!j.is_object())
    throw config_error(where + " must be an object");
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw config_error("unknown key '" + item.key() + "' in " + where);
}

inline Eigen::MatrixXd
matrix_from_json(const json& j, const char* what)
{
  if (!j.is_array())
    throw config_error(std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = 0;
  if (rows > 0) {
    if (!j[0].is_array())
      throw config_error(std::string(what) + " must be an array of rows");
    cols = static_cast<Eigen::Index>(j[0].size());
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw config_error(std::string(what) + " rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[static_cast<size_t>(c)].is_number())
        throw config_error(std::string(what) + " entries must be numbers");
      m(r, c) = row[static_cast<size_t>(c)].get<double>();
    }
  }
  return m;
}

inline json
matrix_to_json(const Eigen::MatrixXd& m)
{
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json
vector_to_json(const Eigen::VectorXd& v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(v[i]);
  return out;
}

inline Eigen::VectorXd
vector_from_json(const json& j, const char* what)
{
  if (!j.is_array())
    throw config_error(std::string(what) + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw config_error(std::string(what) + " entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

} // namespace detail

inline json
to_json(const CovariateLaw& law)
{
  switch (law.kind) {
    case CovariateLaw::Kind::uniform:
      return json{ { "law", "uniform" }, { "lo", law.a }, { "hi", law.b } };
    case CovariateLaw::Kind::normal:
      return json{ { "law", "normal" }, { "mean", law.a }, { "sd", law.b } };
    case CovariateLaw::Kind::bernoulli:
      return json{ { "law", "bernoulli" }, { "p", law.a } };
    case CovariateLaw::Kind::lognormal:
      return json{ { "law", "lognormal" }, { "mu", law.a }, { "sigma", law.b } };
  }
  return {};
}

inline CovariateLaw
covariate_law_from_json(const json& j)
{
  const auto law = detail::json_require<std::string>(j, "law");
  if (law == "uniform") {
    detail::reject_unknown_keys(j, { "law", "lo", "hi" }, "uniform law");
    return CovariateLaw::uniform(detail::json_require<double>(j, "lo"), detail::json_require<double>(j, "hi"));
  }
  if (law == "normal") {
    detail::reject_unknown_keys(j, { "law", "mean", "sd" }, "normal law");
    return CovariateLaw::normal(detail::json_get(j, "mean", 0.0), detail::json_get(j, "sd", 1.0));
  }
  if (law == "bernoulli") {
    detail::reject_unknown_keys(j, { "law", "p" }, "bernoulli law");
    return CovariateLaw::bernoulli(detail::json_require<double>(j, "p"));
  }
  if (law == "lognormal") {
    detail::reject_unknown_keys(j, { "law", "mu", "sigma" }, "lognormal law");
    return CovariateLaw::lognormal(detail::json_get(j, "mu", 0.0), detail::json_get(j, "sigma", 1.0));
  }
  throw config_error("unknown covariate law '" + law + "'");
}

inline json
to_json(const SmoothFunction& f)
{
  switch (f.kind) {
    case SmoothFunction::Kind::zero:
      return json{ { "function", "zero" } };
    case SmoothFunction::Kind::linear:
      return json{ { "function", "linear" }, { "intercept", f.a }, { "slope", f.b } };
    case SmoothFunction::Kind::sine:
      return json{ { "function", "sine" }, { "amplitude", f.a }, { "frequency", f.b } };
    case SmoothFunction::Kind::ridge:
      return json{ { "function", "ridge" }, { "coefficient", f.a } };
  }
  return {};
}

inline SmoothFunction
smooth_function_from_json(const json& j)
{
  const auto kind = detail::json_require<std::string>(j, "function");
  if (kind == "zero") {
    detail::reject_unknown_keys(j, { "function" }, "zero function");
    return SmoothFunction::zero();
  }
  if (kind == "linear") {
    detail::reject_unknown_keys(j, { "function", "intercept", "slope" }, "linear function");
    return SmoothFunction::linear(detail::json_get(j, "intercept", 0.0), detail::json_get(j, "slope", 0.0));
  }
  if (kind == "sine") {
    detail::reject_unknown_keys(j, { "function", "amplitude", "frequency" }, "sine function");
    return SmoothFunction::sine(detail::json_get(j, "amplitude", 1.0), detail::json_get(j, "frequency", 1.0));
  }
  if (kind == "ridge") {
    detail::reject_unknown_keys(j, { "function", "coefficient" }, "ridge function");
    return SmoothFunction::ridge(detail::json_get(j, "coefficient", 1.0));
  }
  throw config_error("unknown smooth function '" + kind + "'");
}

//! A DGP plus the names used when it is written as a table.
struct SimulationSpec
{
  DGPSpec dgp;
  std::string response = "y";
  std::vector<std::string> x_names;
  std::vector<std::string> t_names;
  std::vector<std::string> labels;

  void fill_defaults()
  {
    if (x_names.empty())
      for (size_t d = 0; d < dgp.x_laws.size(); ++d)
        x_names.push_back("x" + std::to_string(d + 1));
    if (t_names.empty())
      for (size_t d = 0; d < dgp.t_laws.size(); ++d)
        t_names.push_back("t" + std::to_string(d + 1));
    if (labels.empty())
      for (int c = 0; c < dgp.categories; ++c)
        labels.push_back(std::to_string(c));
    if (x_names.size() != dgp.x_laws.size() || t_names.size() != dgp.t_laws.size())
      throw config_error("simulation column names do not match the covariate laws");
    if (labels.size() != static_cast<size_t>(dgp.categories))
      throw config_error("simulation needs one label per category");
  }
};

//! The seed is not part of the object; it comes from the run.
inline json
to_json(const SimulationSpec& s)
{
  json j;
  j["categories"] = s.dgp.categories;
  j["reference"] = s.dgp.reference;
  j["n"] = s.dgp.n;
  j["beta"] = detail::matrix_to_json(s.dgp.beta);
  json smooth = json::array();
  for (const auto& f : s.dgp.smooth)
    smooth.push_back(to_json(f));
  j["smooth"] = smooth;
  json xl = json::array(), tl = json::array();
  for (const auto& law : s.dgp.x_laws)
    xl.push_back(to_json(law));
  for (const auto& law : s.dgp.t_laws)
    tl.push_back(to_json(law));
  j["x_laws"] = xl;
  j["t_laws"] = tl;
  j["response"] = s.response;
  j["x_names"] = s.x_names;
  j["t_names"] = s.t_names;
  j["labels"] = s.labels;
  return j;
}

inline SimulationSpec
simulation_from_json(const json& j, std::uint64_t seed)
{
  detail::reject_unknown_keys(
    j,
    { "categories", "reference", "n", "beta", "smooth", "x_laws", "t_laws", "response", "x_names", "t_names", "labels" },
    "simulate");
  SimulationSpec s;
  s.dgp.categories = detail::json_require<int>(j, "categories");
  s.dgp.reference = detail::json_get(j, "reference", s.dgp.categories - 1);
  s.dgp.n = detail::json_require<Eigen::Index>(j, "n");
  s.dgp.seed = seed;
  s.dgp.beta = detail::matrix_from_json(j.contains("beta") ? j.at("beta") : json::array(), "beta");
  for (const auto& f : detail::json_require<json>(j, "smooth"))
    s.dgp.smooth.push_back(smooth_function_from_json(f));
  for (const auto& l : detail::json_get(j, "x_laws", json::array()))
    s.dgp.x_laws.push_back(covariate_law_from_json(l));
  for (const auto& l : detail::json_get(j, "t_laws", json::array()))
    s.dgp.t_laws.push_back(covariate_law_from_json(l));
  if (s.dgp.beta.size() == 0)
    s.dgp.beta.resize(s.dgp.categories - 1, static_cast<Eigen::Index>(s.dgp.x_laws.size()));
  s.response = detail::json_get<std::string>(j, "response", "y");
  s.x_names = detail::json_get(j, "x_names", std::vector<std::string>{});
  s.t_names = detail::json_get(j, "t_names", std::vector<std::string>{});
  s.labels = detail::json_get(j, "labels", std::vector<std::string>{});
  s.dgp.validate();
  s.fill_defaults();
  return s;
}

struct SurfaceAxis
{
  std::string column;
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;

  double value(int i) const
  {
    return i == steps - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
};

//! Probability grid over one or two smooth covariates. Fixed values are
//! given in raw column units and pass through the column transforms.
struct SurfaceRequest
{
  std::vector<SurfaceAxis> axes;
  std::map<std::string, double> fixed;
  std::vector<std::string> categories; //!< labels; empty = all
};

enum class ModelKind
{
  parametric,
  semiparametric
};

struct IIARequest
{
  std::vector<IIAMethod> methods{ IIAMethod::hausman_mcfadden, IIAMethod::small_hsiao };
  std::vector<std::string> dropped; //!< labels; empty = every non-reference category
};

struct GridRequest
{
  double lo = 0.4;
  double hi = 1.0;
  int steps = 7;
  bool fit = true;
};

//! Everything one invocation needs; `echo` is the effective configuration.
struct RunConfig
{
  json echo;
  std::optional<std::filesystem::path> input;
  std::optional<json> simulate_json;
  IngestConfig ingest;
  ModelKind model = ModelKind::semiparametric;
  std::optional<double> scale;
  std::optional<Eigen::VectorXd> bandwidths;
  ParametricOptions parametric_options;
  SemiparametricOptions semi_options;
  std::filesystem::path out = ".";
  std::uint64_t seed = 0;
  std::optional<SurfaceRequest> surface;
  IIARequest iia;
  GridRequest grid;

  SimulationSpec simulation() const
  {
    if (!simulate_json)
      throw config_error("the config has no 'simulate' section");
    return simulation_from_json(*simulate_json, seed);
  }
};

struct Overrides
{
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<double> scale;
  std::optional<std::filesystem::path> input;
};

namespace detail {

inline std::vector<ColumnTransform>
transforms_from_json(const json& j)
{
  std::vector<ColumnTransform> steps;
  if (j.is_string()) {
    steps.push_back(ColumnTransform::parse(j.get<std::string>()));
  } else if (j.is_array()) {
    for (const auto& s : j) {
      if (!s.is_string())
        throw config_error("transforms must be strings");
      steps.push_back(ColumnTransform::parse(s.get<std::string>()));
    }
  } else {
    throw config_error("transforms must be a string or an array of strings");
  }
  return steps;
}

inline IIAMethod
iia_method_from_string(const std::string& s)
{
  if (s == "hausman-mcfadden")
    return IIAMethod::hausman_mcfadden;
  if (s == "small-hsiao")
    return IIAMethod::small_hsiao;
  throw config_error("unknown IIA method '" + s + "'");
}

} // namespace detail

//! Parses a JSON configuration. Relative input paths are resolved against
//! `base_dir`; overrides replace the corresponding keys.
inline RunConfig
parse_run_config(json j, const std::filesystem::path& base_dir, const Overrides& overrides = {})
{
  using namespace detail;
  reject_unknown_keys(j,
                      { "input", "simulate", "response", "parametric", "smooth", "transforms", "impute", "categories",
                        "reference", "model", "kernel", "fit", "out", "seed", "surface", "iia", "bandwidth_grid" },
                      "config");
  if (overrides.seed)
    j["seed"] = *overrides.seed;
  if (overrides.scale)
    j["kernel"] = json{ { "scale", *overrides.scale } };
  if (overrides.input)
    j["input"] = overrides.input->string();

  RunConfig rc;
  rc.seed = json_get<std::uint64_t>(j, "seed", 0);
  if (overrides.out)
    rc.out = *overrides.out;
  else if (j.contains("out"))
    rc.out = base_dir / json_get<std::string>(j, "out", ".");
  j.erase("out");

  if (j.contains("input")) {
    const std::filesystem::path p = json_get<std::string>(j, "input", "");
    rc.input = overrides.input ? p : base_dir / p;
    j["input"] = p.filename().string();
  }
  if (j.contains("simulate"))
    rc.simulate_json = j.at("simulate");

  SimulationSpec sim;
  const bool simulated = rc.simulate_json.has_value();
  if (simulated)
    sim = rc.simulation();
  IngestConfig& in = rc.ingest;
  in.response = json_get<std::string>(j, "response", simulated ? sim.response : "");
  in.parametric = json_get(j, "parametric", simulated ? sim.x_names : std::vector<std::string>{});
  in.smooth = json_get(j, "smooth", simulated ? sim.t_names : std::vector<std::string>{});
  in.categories = json_get(j, "categories", simulated ? sim.labels : std::vector<std::string>{});
  if (j.contains("reference"))
    in.reference = json_get<std::string>(j, "reference", "");
  else if (simulated)
    in.reference = sim.labels[static_cast<size_t>(sim.dgp.reference)];
  if (j.contains("transforms")) {
    const json& t = j.at("transforms");
    if (!t.is_object())
      throw config_error("transforms must map column names to transforms");
    for (const auto& item : t.items())
      in.transforms[item.key()] = transforms_from_json(item.value());
  }
  if (j.contains("impute")) {
    const json& t = j.at("impute");
    if (!t.is_object())
      throw config_error("impute must map column names to values");
    for (const auto& item : t.items()) {
      if (!item.value().is_number())
        throw config_error("impute value for '" + item.key() + "' must be a number");
      in.impute[item.key()] = item.value().get<double>();
    }
  }

  const auto model = json_get<std::string>(j, "model", "semiparametric");
  if (model == "parametric")
    rc.model = ModelKind::parametric;
  else if (model == "semiparametric")
    rc.model = ModelKind::semiparametric;
  else
    throw config_error("model must be 'parametric' or 'semiparametric'");

  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    reject_unknown_keys(k, { "family", "scale", "bandwidths" }, "kernel");
    if (json_get<std::string>(k, "family", "gaussian") != "gaussian")
      throw config_error("only the gaussian kernel family is available");
    if (k.contains("scale") && k.contains("bandwidths"))
      throw config_error("give either a kernel scale or explicit bandwidths");
    if (k.contains("bandwidths"))
      rc.bandwidths = vector_from_json(k.at("bandwidths"), "bandwidths");
    else
      rc.scale = json_get(k, "scale", 0.5);
  } else {
    rc.scale = 0.5;
  }

  if (j.contains("fit")) {
    const json& f = j.at("fit");
    reject_unknown_keys(f, { "tol", "max_iter", "inner_tol", "inner_max_iter", "max_sweeps", "step_cap",
                             "max_halvings", "parametric_tol", "parametric_max_iter" },
                        "fit");
    auto& s = rc.semi_options;
    s.tol = json_get(f, "tol", s.tol);
    s.max_iter = json_get(f, "max_iter", s.max_iter);
    s.inner_tol = json_get(f, "inner_tol", s.inner_tol);
    s.inner_max_iter = json_get(f, "inner_max_iter", s.inner_max_iter);
    s.max_sweeps = json_get(f, "max_sweeps", s.max_sweeps);
    s.step_cap = json_get(f, "step_cap", s.step_cap);
    s.max_halvings = json_get(f, "max_halvings", s.max_halvings);
    auto& p = rc.parametric_options;
    p.max_halvings = s.max_halvings;
    p.tol = json_get(f, "parametric_tol", p.tol);
    p.max_iter = json_get(f, "parametric_max_iter", p.max_iter);
    if (rc.model == ModelKind::parametric) {
      // for a parametric run the plain keys address the parametric fit
      p.tol = json_get(f, "tol", p.tol);
      p.max_iter = json_get(f, "max_iter", p.max_iter);
    }
    if (!(s.tol > 0.0) || !(p.tol > 0.0) || !(s.inner_tol > 0.0) || s.max_iter < 0 || p.max_iter < 0 ||
        s.inner_max_iter < 1 || s.max_sweeps < 1 || !(s.step_cap > 0.0) || s.max_halvings < 0)
      throw config_error("invalid fitting options");
  }

  if (j.contains("surface")) {
    const json& s = j.at("surface");
    reject_unknown_keys(s, { "axes", "fixed", "categories" }, "surface");
    SurfaceRequest req;
    for (const auto& a : json_require<json>(s, "axes")) {
      reject_unknown_keys(a, { "column", "lo", "hi", "steps" }, "surface axis");
      SurfaceAxis axis{ json_require<std::string>(a, "column"), json_require<double>(a, "lo"),
                        json_require<double>(a, "hi"), json_require<int>(a, "steps") };
      if (axis.steps < 2 || !(axis.lo < axis.hi) || !std::isfinite(axis.lo) || !std::isfinite(axis.hi))
        throw config_error("surface axis '" + axis.column + "' needs lo < hi and steps >= 2");
      req.axes.push_back(axis);
    }
    if (req.axes.empty() || req.axes.size() > 2)
      throw config_error("a surface needs one or two axes");
    if (s.contains("fixed")) {
      if (!s.at("fixed").is_object())
        throw config_error("surface fixed values must map column names to numbers");
      for (const auto& item : s.at("fixed").items()) {
        if (!item.value().is_number())
          throw config_error("fixed value for '" + item.key() + "' must be a number");
        req.fixed[item.key()] = item.value().get<double>();
      }
    }
    req.categories = json_get(s, "categories", std::vector<std::string>{});
    rc.surface = req;
  }

  if (j.contains("iia")) {
    const json& s = j.at("iia");
    reject_unknown_keys(s, { "method", "dropped" }, "iia");
    const auto method = json_get<std::string>(s, "method", "both");
    if (method != "both")
      rc.iia.methods = { iia_method_from_string(method) };
    rc.iia.dropped = json_get(s, "dropped", std::vector<std::string>{});
  }

  if (j.contains("bandwidth_grid")) {
    const json& s = j.at("bandwidth_grid");
    reject_unknown_keys(s, { "lo", "hi", "steps", "fit" }, "bandwidth_grid");
    rc.grid.lo = json_get(s, "lo", rc.grid.lo);
    rc.grid.hi = json_get(s, "hi", rc.grid.hi);
    rc.grid.steps = json_get(s, "steps", rc.grid.steps);
    rc.grid.fit = json_get(s, "fit", rc.grid.fit);
  }

  if (!rc.input && !rc.simulate_json)
    throw config_error("the config needs an 'input' file or a 'simulate' section");
  rc.echo = std::move(j);
  return rc;
}

inline RunConfig
load_run_config(const std::filesystem::path& path, const Overrides& overrides = {})
{
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw config_error("cannot parse '" + path.string() + "': " + e.what());
  }
  return parse_run_config(std::move(j), path.parent_path(), overrides);
}

} // namespace spmnl

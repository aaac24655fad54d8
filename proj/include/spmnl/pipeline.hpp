#pragma once

#include "chi_square.hpp"
#include "config.hpp"
#include "iia.hpp"
#include "io.hpp"
#include "kernels.hpp"
#include "parametric.hpp"
#include "profile.hpp"
#include "simulate.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace spmnl {

inline constexpr const char* tool_version = "1.0.0";

//! Process exit codes.
enum ExitCode : int
{
  exit_ok = 0,
  exit_other = 1,
  exit_not_converged = 2,
  exit_config = 3,
  exit_data = 4,
  exit_estimation = 5
};

inline int
exit_code_for(const std::exception& e)
{
  if (dynamic_cast<const config_error*>(&e) || dynamic_cast<const shape_error*>(&e))
    return exit_config;
  if (dynamic_cast<const empty_dataset*>(&e) || dynamic_cast<const insufficient_data*>(&e) ||
      dynamic_cast<const degenerate_covariate*>(&e) || dynamic_cast<const io_error*>(&e))
    return exit_data;
  if (dynamic_cast<const error*>(&e))
    return exit_estimation;
  return exit_other;
}

//! Significance marks: ** at 1%, * at 5%, a bullet at 10%.
inline std::string
significance_stars(double p)
{
  if (!(p >= 0.0))
    return "";
  if (p < 0.01)
    return "**";
  if (p < 0.05)
    return "*";
  if (p < 0.10)
    return "•";
  return "";
}

struct AcquiredData
{
  LoadedData loaded;
  json input; //!< provenance for the manifest
};

//! Reads the configured input file, or simulates it when the config has
//! only a simulation section; both paths go through the same CSV ingestion.
inline AcquiredData
acquire_data(const RunConfig& rc)
{
  AcquiredData out;
  std::string text;
  if (rc.input) {
    text = read_file(*rc.input);
    out.input = json{ { "source", "file" }, { "name", rc.input->filename().string() } };
  } else {
    const SimulationSpec sim = rc.simulation();
    text = dataset_csv(simulate(sim.dgp), sim.labels, sim.response, sim.x_names, sim.t_names);
    out.input = json{ { "source", "simulate" }, { "seed", rc.seed } };
  }
  out.input["bytes"] = text.size();
  out.input["fnv1a"] = hex64(fnv1a(text));
  out.loaded = load_csv_text(text, rc.ingest);
  return out;
}

inline json
build_info()
{
  return json{ { "tool", "spmnl" },
               { "version", tool_version },
               { "eigen",
                 std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                   std::to_string(EIGEN_MINOR_VERSION) },
#if defined(__VERSION__)
               { "compiler", __VERSION__ },
#endif
               { "cxx_standard", static_cast<long>(__cplusplus) } };
}

inline json
dataset_info(const LoadedData& d)
{
  const auto counts = d.data.category_counts();
  json categories = json::array();
  for (size_t c = 0; c < d.labels.size(); ++c)
    categories.push_back(json{ { "index", c }, { "label", d.labels[c] }, { "count", counts[c] } });
  json drops = json::object();
  for (const auto& [reason, count] : d.drop_reasons)
    drops[reason] = count;
  json imputed = json::object();
  for (const auto& [column, count] : d.imputed)
    imputed[column] = count;
  return json{ { "fingerprint", dataset_fingerprint(d.data) },
               { "n", d.data.size() },
               { "categories", categories },
               { "reference", d.labels[static_cast<size_t>(d.reference)] },
               { "parametric_columns", d.x_names },
               { "smooth_columns", d.t_names },
               { "ingestion",
                 { { "rows_in", d.rows_in },
                   { "rows_used", d.rows_used },
                   { "rows_dropped", d.rows_dropped() },
                   { "drop_reasons", drops },
                   { "imputed", imputed } } } };
}

inline json
manifest_head(const char* command, const RunConfig& rc)
{
  return json{ { "build", build_info() }, { "command", command }, { "seed", rc.seed }, { "config", rc.echo } };
}

inline json
to_json(const SemiparametricOptions& o)
{
  return json{ { "tol", o.tol },
               { "max_iter", o.max_iter },
               { "inner_tol", o.inner_tol },
               { "inner_max_iter", o.inner_max_iter },
               { "max_sweeps", o.max_sweeps },
               { "step_cap", o.step_cap },
               { "max_halvings", o.max_halvings } };
}

inline json
to_json(const ParametricOptions& o)
{
  return json{ { "tol", o.tol }, { "max_iter", o.max_iter }, { "max_halvings", o.max_halvings },
               { "intercept", o.intercept } };
}

inline KernelConfig
kernel_for(const RunConfig& rc, const LoadedData& d)
{
  if (rc.bandwidths) {
    if (rc.bandwidths->size() != d.data.q())
      throw config_error("need one bandwidth per smooth covariate");
    KernelConfig k;
    k.bandwidths = *rc.bandwidths;
    k.validate();
    return k;
  }
  return bandwidth_from_scale(d.data.t, rc.scale.value_or(0.5), d.t_names);
}

inline void
write_json(const std::filesystem::path& path, const json& j)
{
  write_file(path, j.dump(2) + "\n");
}

namespace detail {

inline void
coefficient_row(CsvWriter& w, const std::string& category, const std::string& term, double est, double se)
{
  const double z = se > 0.0 ? est / se : std::nan("");
  const double p = std::isfinite(z) ? normal_two_sided_p(z) : std::nan("");
  w.cell(category).cell(term).cell(est).cell(se).cell(z).cell(p).cell(significance_stars(p));
  w.end();
}

inline std::string
trace_csv(const std::vector<double>& trace)
{
  CsvWriter w({ "iteration", "loglik" });
  for (size_t i = 0; i < trace.size(); ++i) {
    w.cell(static_cast<long long>(i)).cell(trace[i]);
    w.end();
  }
  return w.str();
}

inline void
prepare_out(const std::filesystem::path& out)
{
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec)
    throw io_error("cannot create output directory '" + out.string() + "': " + ec.message());
}

} // namespace detail

//! Writes data.csv and simulate_manifest.json for the configured DGP.
inline int
run_simulate(const RunConfig& rc)
{
  const SimulationSpec sim = rc.simulation();
  const std::string text = dataset_csv(simulate(sim.dgp), sim.labels, sim.response, sim.x_names, sim.t_names);
  detail::prepare_out(rc.out);
  write_file(rc.out / "data.csv", text);
  json m = manifest_head("simulate", rc);
  m["simulation"] = to_json(sim);
  m["output"] = json{ { "name", "data.csv" }, { "rows", sim.dgp.n }, { "bytes", text.size() },
                      { "fnv1a", hex64(fnv1a(text)) } };
  write_json(rc.out / "simulate_manifest.json", m);
  return exit_ok;
}

//! Fits the configured model and writes coefficients.csv, trace.csv,
//! fit_state.json, fit_manifest.json and, for the semiparametric model,
//! smooth_values.csv. Returns 0 iff the fit converged.
inline int
run_fit(const RunConfig& rc)
{
  const AcquiredData acquired = acquire_data(rc);
  const LoadedData& d = acquired.loaded;
  const ModelSpec spec = d.spec();
  detail::prepare_out(rc.out);

  json m = manifest_head("fit", rc);
  m["input"] = acquired.input;
  m["dataset"] = dataset_info(d);
  json state{ { "fingerprint", dataset_fingerprint(d.data) },
              { "labels", d.labels },
              { "reference", spec.reference },
              { "parametric_columns", d.x_names },
              { "smooth_columns", d.t_names } };
  CsvWriter coef({ "category", "term", "estimate", "std_error", "z", "p_value", "stars" });
  std::vector<std::string> artifacts{ "coefficients.csv", "trace.csv" };
  bool converged = false;

  if (rc.model == ModelKind::parametric) {
    const ParametricFitResult fit = fit_parametric(all_parametric(d.data), spec, rc.parametric_options);
    std::vector<std::string> terms{ "(intercept)" };
    terms.insert(terms.end(), d.x_names.begin(), d.x_names.end());
    terms.insert(terms.end(), d.t_names.begin(), d.t_names.end());
    for (int r = 0; r < spec.free_count(); ++r)
      for (size_t c = 0; c < terms.size(); ++c)
        detail::coefficient_row(coef,
                                d.labels[static_cast<size_t>(spec.category_of_row(r))],
                                terms[c],
                                fit.coefficients(r, static_cast<Eigen::Index>(c)),
                                fit.standard_errors(r, static_cast<Eigen::Index>(c)));
    write_file(rc.out / "trace.csv", detail::trace_csv(fit.loglik_trace));
    converged = fit.converged;
    m["model"] = "parametric";
    m["options"] = to_json(rc.parametric_options);
    m["result"] = json{ { "converged", fit.converged },
                        { "iterations", fit.iterations },
                        { "loglik", fit.loglik },
                        { "score_norm", fit.score_norm },
                        { "standard_errors", "inverse observed information" } };
    state["model"] = "parametric";
    state["converged"] = fit.converged;
    state["coefficients"] = detail::matrix_to_json(fit.coefficients);
    state["vcov"] = detail::matrix_to_json(fit.vcov);
  } else {
    const KernelConfig kernel = kernel_for(rc, d);
    const SemiparametricFitResult fit = fit_semiparametric(d.data, spec, kernel, rc.semi_options);
    for (int r = 0; r < spec.free_count(); ++r)
      for (Eigen::Index c = 0; c < d.data.p(); ++c)
        detail::coefficient_row(coef,
                                d.labels[static_cast<size_t>(spec.category_of_row(r))],
                                d.x_names[static_cast<size_t>(c)],
                                fit.beta(r, c),
                                fit.beta_se(r, c));
    write_file(rc.out / "trace.csv", detail::trace_csv(fit.loglik_trace));

    std::vector<std::string> header{ "obs" };
    header.insert(header.end(), d.t_names.begin(), d.t_names.end());
    for (int r = 0; r < spec.free_count(); ++r)
      header.push_back("m:" + d.labels[static_cast<size_t>(spec.category_of_row(r))]);
    CsvWriter sv(header);
    for (Eigen::Index i = 0; i < d.data.size(); ++i) {
      sv.cell(i);
      for (Eigen::Index c = 0; c < d.data.q(); ++c)
        sv.cell(d.data.t(i, c));
      for (int r = 0; r < spec.free_count(); ++r)
        sv.cell(fit.smooth.m(r, i));
      sv.end();
    }
    write_file(rc.out / "smooth_values.csv", sv.str());
    artifacts.push_back("smooth_values.csv");

    converged = fit.converged;
    const json kernel_json{ { "family", to_string(kernel.family) },
                            { "scale", rc.bandwidths ? json() : json(rc.scale.value_or(0.5)) },
                            { "bandwidths", detail::vector_to_json(kernel.bandwidths) } };
    m["model"] = "semiparametric";
    m["kernel"] = kernel_json;
    m["options"] = to_json(rc.semi_options);
    m["result"] = json{ { "converged", fit.converged },
                        { "iterations", fit.iterations },
                        { "loglik", fit.loglik_trace.back() },
                        { "profile_score_norm", fit.profile_score_norm },
                        { "warnings", fit.warnings },
                        { "standard_errors", "profile information" },
                        { "parametric_start_loglik", fit.start.loglik } };
    state["model"] = "semiparametric";
    state["converged"] = fit.converged;
    state["kernel"] = kernel_json;
    state["options"] = to_json(rc.semi_options);
    state["beta"] = detail::matrix_to_json(fit.beta);
    state["beta_se"] = detail::matrix_to_json(fit.beta_se);
    state["m"] = detail::matrix_to_json(fit.smooth.m);
  }
  write_file(rc.out / "coefficients.csv", coef.str());
  write_json(rc.out / "fit_state.json", state);
  artifacts.push_back("fit_state.json");
  m["artifacts"] = artifacts;
  write_json(rc.out / "fit_manifest.json", m);
  return converged ? exit_ok : exit_not_converged;
}

//! Rebuilds a semiparametric fit from fit_state.json and the data it was
//! estimated on.
inline SemiparametricFitResult
restore_semiparametric_fit(const json& state, const LoadedData& d)
{
  if (detail::json_get<std::string>(state, "model", "") != "semiparametric")
    throw config_error("a probability surface needs a semiparametric fit");
  if (detail::json_get<std::string>(state, "fingerprint", "") != dataset_fingerprint(d.data))
    throw config_error("the data differ from the data the fit was estimated on");
  if (!detail::json_get(state, "converged", false))
    throw config_error("the stored fit did not converge");
  SemiparametricFitResult fit;
  fit.spec = d.spec();
  fit.converged = true;
  fit.beta = detail::matrix_from_json(state.at("beta"), "beta");
  fit.smooth.m = detail::matrix_from_json(state.at("m"), "m");
  fit.kernel.bandwidths = detail::vector_from_json(state.at("kernel").at("bandwidths"), "bandwidths");
  const json& o = state.at("options");
  fit.options.tol = o.at("tol").get<double>();
  fit.options.max_iter = o.at("max_iter").get<int>();
  fit.options.inner_tol = o.at("inner_tol").get<double>();
  fit.options.inner_max_iter = o.at("inner_max_iter").get<int>();
  fit.options.max_sweeps = o.at("max_sweeps").get<int>();
  fit.options.step_cap = o.at("step_cap").get<double>();
  fit.options.max_halvings = o.at("max_halvings").get<int>();
  if (fit.beta.rows() != fit.spec.free_count() || fit.beta.cols() != d.data.p() ||
      fit.smooth.m.rows() != fit.spec.free_count() || fit.smooth.m.cols() != d.data.size())
    throw config_error("fit_state.json does not match the data");
  return fit;
}

struct SurfaceGrid
{
  std::vector<std::string> axis_columns;
  std::vector<int> categories;
  //! one row per grid point and category: axis values, category, probability
  std::vector<std::vector<double>> points;
  std::vector<Eigen::VectorXd> probabilities; //!< all K categories per grid point
};

//! Probabilities over the request grid, t1-major, then t2.
inline SurfaceGrid
compute_surface(const SemiparametricFitResult& fit,
                const LoadedData& d,
                const IngestConfig& ingest,
                const SurfaceRequest& req)
{
  SurfaceGrid g;
  std::vector<int> axis_of_t(static_cast<size_t>(d.data.q()), -1);
  for (size_t a = 0; a < req.axes.size(); ++a) {
    const auto it = std::find(d.t_names.begin(), d.t_names.end(), req.axes[a].column);
    if (it == d.t_names.end())
      throw config_error("surface axis '" + req.axes[a].column + "' is not a smooth covariate");
    const auto col = static_cast<size_t>(it - d.t_names.begin());
    if (axis_of_t[col] >= 0)
      throw config_error("surface axis '" + req.axes[a].column + "' appears twice");
    axis_of_t[col] = static_cast<int>(a);
    g.axis_columns.push_back(req.axes[a].column);
  }

  auto fixed_value = [&](const std::string& column) {
    const auto it = req.fixed.find(column);
    if (it == req.fixed.end())
      throw config_error("surface needs a fixed value for '" + column + "'");
    return transform_value(ingest, column, it->second);
  };
  for (const auto& [column, value] : req.fixed) {
    (void)value;
    const bool known = std::find(ingest.parametric.begin(), ingest.parametric.end(), column) !=
                         ingest.parametric.end() ||
                       std::find(ingest.smooth.begin(), ingest.smooth.end(), column) != ingest.smooth.end();
    if (!known)
      throw config_error("fixed value for unknown column '" + column + "'");
  }
  Eigen::VectorXd x(d.data.p());
  Eigen::Index k = 0;
  for (const auto& column : ingest.parametric)
    for (double v : fixed_value(column))
      x[k++] = v;
  if (k != d.data.p())
    throw shape_error("fixed values do not match the parametric covariates");
  Eigen::RowVectorXd t(d.data.q());
  for (Eigen::Index c = 0; c < d.data.q(); ++c)
    if (axis_of_t[static_cast<size_t>(c)] < 0)
      t[c] = fixed_value(d.t_names[static_cast<size_t>(c)]).front();

  if (req.categories.empty()) {
    for (int c = 0; c < d.data.categories; ++c)
      g.categories.push_back(c);
  } else {
    for (const auto& label : req.categories) {
      const auto it = std::find(d.labels.begin(), d.labels.end(), label);
      if (it == d.labels.end())
        throw config_error("surface category '" + label + "' does not occur");
      g.categories.push_back(static_cast<int>(it - d.labels.begin()));
    }
  }

  const SurfaceAxis& a1 = req.axes[0];
  const SurfaceAxis single{ "", 0.0, 1.0, 1 };
  const SurfaceAxis& a2 = req.axes.size() > 1 ? req.axes[1] : single;
  for (int i = 0; i < a1.steps; ++i) {
    for (int j = 0; j < a2.steps; ++j) {
      std::vector<double> coords{ a1.value(i) };
      if (req.axes.size() > 1)
        coords.push_back(a2.value(j));
      for (Eigen::Index c = 0; c < d.data.q(); ++c) {
        const int a = axis_of_t[static_cast<size_t>(c)];
        if (a >= 0)
          t[c] = coords[static_cast<size_t>(a)];
      }
      const Eigen::VectorXd prob = predict_probabilities(fit, d.data, x, t);
      g.probabilities.push_back(prob);
      for (int c : g.categories) {
        std::vector<double> row = coords;
        row.push_back(static_cast<double>(c));
        row.push_back(prob[c]);
        g.points.push_back(std::move(row));
      }
    }
  }
  return g;
}

//! Writes surface.csv (long format) and surface_manifest.json from the fit
//! stored in `fit_dir`.
inline int
run_surface(const RunConfig& rc, const std::filesystem::path& fit_dir)
{
  if (!rc.surface)
    throw config_error("the config has no 'surface' section");
  const AcquiredData acquired = acquire_data(rc);
  const LoadedData& d = acquired.loaded;
  json state;
  try {
    state = json::parse(read_file(fit_dir / "fit_state.json"));
  } catch (const json::exception& e) {
    throw config_error(std::string("cannot parse fit_state.json: ") + e.what());
  }
  const SemiparametricFitResult fit = restore_semiparametric_fit(state, d);
  const SurfaceGrid g = compute_surface(fit, d, rc.ingest, *rc.surface);

  const bool two = g.axis_columns.size() > 1;
  std::vector<std::string> header{ "t1" };
  if (two)
    header.push_back("t2");
  header.push_back("category");
  header.push_back("probability");
  CsvWriter w(header);
  for (const auto& row : g.points) {
    w.cell(row[0]);
    if (two)
      w.cell(row[1]);
    w.cell(d.labels[static_cast<size_t>(row[row.size() - 2])]);
    w.cell(row.back());
    w.end();
  }
  detail::prepare_out(rc.out);
  write_file(rc.out / "surface.csv", w.str());

  json axes = json::array();
  for (size_t a = 0; a < rc.surface->axes.size(); ++a) {
    const auto& ax = rc.surface->axes[a];
    axes.push_back(json{ { "name", a == 0 ? "t1" : "t2" },
                         { "column", ax.column },
                         { "lo", ax.lo },
                         { "hi", ax.hi },
                         { "steps", ax.steps } });
  }
  json fixed = json::object();
  for (const auto& [column, value] : rc.surface->fixed)
    fixed[column] = value;
  json m = manifest_head("surface", rc);
  m["input"] = acquired.input;
  m["dataset"] = dataset_info(d);
  m["fit_state_fnv1a"] = hex64(fnv1a(state.dump()));
  m["axes"] = axes;
  m["fixed"] = fixed;
  m["grid_points"] = g.probabilities.size();
  m["artifacts"] = { "surface.csv" };
  write_json(rc.out / "surface_manifest.json", m);
  return exit_ok;
}

//! Writes iia.csv: one row per method and dropped category; a failed test
//! records its error and leaves the numbers empty.
inline int
run_iia(const RunConfig& rc)
{
  const AcquiredData acquired = acquire_data(rc);
  const LoadedData& d = acquired.loaded;
  const ModelSpec spec = d.spec();
  if (spec.categories < 3)
    throw config_error("IIA tests need at least three categories");
  const Dataset data = all_parametric(d.data);

  std::vector<int> dropped;
  if (rc.iia.dropped.empty()) {
    for (int c = 0; c < spec.categories; ++c)
      if (c != spec.reference)
        dropped.push_back(c);
  } else {
    for (const auto& label : rc.iia.dropped) {
      const auto it = std::find(d.labels.begin(), d.labels.end(), label);
      if (it == d.labels.end())
        throw config_error("IIA category '" + label + "' does not occur");
      const int c = static_cast<int>(it - d.labels.begin());
      if (c == spec.reference)
        throw config_error("the reference category cannot be dropped");
      dropped.push_back(c);
    }
  }

  CsvWriter w({ "method", "dropped", "statistic", "df", "p_value", "note", "error" });
  json methods = json::array();
  for (IIAMethod method : rc.iia.methods) {
    methods.push_back(to_string(method));
    for (int c : dropped) {
      w.cell(to_string(method)).cell(d.labels[static_cast<size_t>(c)]);
      try {
        const IIATestResult r = method == IIAMethod::hausman_mcfadden
                                  ? hausman_mcfadden(data, spec, c, rc.parametric_options)
                                  : small_hsiao(data, spec, c, rc.seed, rc.parametric_options);
        w.cell(r.statistic).cell(r.df).cell(r.p_value).cell(r.note).cell("");
      } catch (const error& e) {
        w.cell("").cell("").cell("").cell("").cell(e.what());
      }
      w.end();
    }
  }
  detail::prepare_out(rc.out);
  write_file(rc.out / "iia.csv", w.str());
  json m = manifest_head("iia-test", rc);
  m["input"] = acquired.input;
  m["dataset"] = dataset_info(d);
  m["methods"] = methods;
  m["options"] = to_json(rc.parametric_options);
  m["artifacts"] = { "iia.csv" };
  write_json(rc.out / "iia_manifest.json", m);
  return exit_ok;
}

//! Bandwidths for a grid of scales and, when requested, one fit per scale.
inline int
run_bandwidth_grid(const RunConfig& rc)
{
  const AcquiredData acquired = acquire_data(rc);
  const LoadedData& d = acquired.loaded;
  const ModelSpec spec = d.spec();
  const auto grid = bandwidth_grid(d.data.t, rc.grid.lo, rc.grid.hi, rc.grid.steps, d.t_names);

  std::vector<std::string> header{ "scale" };
  for (const auto& name : d.t_names)
    header.push_back("h:" + name);
  if (rc.grid.fit)
    for (const char* h : { "converged", "iterations", "loglik", "profile_score_norm", "warnings" })
      header.push_back(h);
  CsvWriter w(header);
  CsvWriter coef({ "scale", "category", "term", "estimate", "std_error", "z", "p_value", "stars" });
  bool all_converged = true;
  for (const auto& candidate : grid) {
    w.cell(candidate.scale);
    for (Eigen::Index c = 0; c < candidate.kernel.bandwidths.size(); ++c)
      w.cell(candidate.kernel.bandwidths[c]);
    if (rc.grid.fit) {
      const SemiparametricFitResult fit = fit_semiparametric(d.data, spec, candidate.kernel, rc.semi_options);
      all_converged = all_converged && fit.converged;
      std::string warnings;
      for (const auto& s : fit.warnings)
        warnings += (warnings.empty() ? "" : "; ") + s;
      w.cell(fit.converged).cell(fit.iterations).cell(fit.loglik_trace.back()).cell(fit.profile_score_norm)
        .cell(warnings);
      for (int r = 0; r < spec.free_count(); ++r) {
        for (Eigen::Index c = 0; c < d.data.p(); ++c) {
          coef.cell(candidate.scale);
          detail::coefficient_row(coef,
                                  d.labels[static_cast<size_t>(spec.category_of_row(r))],
                                  d.x_names[static_cast<size_t>(c)],
                                  fit.beta(r, c),
                                  fit.beta_se(r, c));
        }
      }
    }
    w.end();
  }
  detail::prepare_out(rc.out);
  write_file(rc.out / "bandwidth_grid.csv", w.str());
  std::vector<std::string> artifacts{ "bandwidth_grid.csv" };
  if (rc.grid.fit) {
    write_file(rc.out / "bandwidth_grid_coefficients.csv", coef.str());
    artifacts.push_back("bandwidth_grid_coefficients.csv");
  }
  json m = manifest_head("bandwidth-grid", rc);
  m["input"] = acquired.input;
  m["dataset"] = dataset_info(d);
  m["grid"] = json{ { "lo", rc.grid.lo }, { "hi", rc.grid.hi }, { "steps", rc.grid.steps }, { "fit", rc.grid.fit } };
  m["options"] = to_json(rc.semi_options);
  m["artifacts"] = artifacts;
  write_json(rc.out / "bandwidth_grid_manifest.json", m);
  return all_converged ? exit_ok : exit_not_converged;
}

} // namespace spmnl

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <spmnl/chi_square.hpp>
#include <spmnl/iia.hpp>
#include <spmnl/model_core.hpp>
#include <spmnl/oracle.hpp>
#include <spmnl/parametric.hpp>
#include <spmnl/pipeline.hpp>
#include <spmnl/profile.hpp>
#include <spmnl/simulate.hpp>

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace spmnl;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
  bool pass = true;
  std::string detail;
};

class Check
{
public:
  void require(bool ok, const std::string& what)
  {
    if (!ok) {
      pass_ = false;
      if (failures_++ < 5)
        detail_ << (detail_.tellp() > 0 ? "; " : "") << what;
    }
  }
  void note(const std::string& what) { notes_ << (notes_.tellp() > 0 ? "; " : "") << what; }
  Outcome done() const
  {
    std::string d = notes_.str();
    if (!pass_)
      d = "failures: " + detail_.str() + (failures_ > 5 ? " (+" + std::to_string(failures_ - 5) + " more)" : "") +
          (d.empty() ? "" : " | " + d);
    return { pass_, d };
  }

private:
  bool pass_ = true;
  int failures_ = 0;
  std::ostringstream detail_, notes_;
};

std::string
num(double v)
{
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

//! Slack of 1e-8 per outer iteration (1e-12 for the parametric trace).
double
worst_descent(const std::vector<double>& trace)
{
  double worst = 0.0;
  for (size_t i = 1; i < trace.size(); ++i)
    worst = std::max(worst, trace[i - 1] - trace[i]);
  return worst;
}

// traces collected along the way for the ascent criterion
std::vector<std::pair<std::string, std::vector<double>>> semi_traces;
std::vector<std::pair<std::string, std::vector<double>>> par_traces;

DGPSpec
mnl_dgp(int K, int p, Eigen::Index n, std::uint64_t seed)
{
  DGPSpec s;
  s.categories = K;
  s.reference = K - 1;
  s.n = n;
  s.seed = seed;
  for (int j = 0; j < p; ++j)
    s.x_laws.push_back(j % 2 == 0 ? CovariateLaw::normal(0.0, 1.0) : CovariateLaw::bernoulli(0.5));
  s.beta.resize(K - 1, p);
  for (int r = 0; r < K - 1; ++r) {
    for (int j = 0; j < p; ++j)
      s.beta(r, j) = 0.5 * std::cos(1.0 + r + 2.0 * j);
    s.smooth.push_back(SmoothFunction::linear(0.2 - 0.15 * r, 0.0));
  }
  return s;
}

DGPSpec
sine_dgp(Eigen::Index n, std::uint64_t seed)
{
  DGPSpec s;
  s.categories = 2;
  s.reference = 1;
  s.n = n;
  s.seed = seed;
  s.x_laws = { CovariateLaw::normal(0.0, 1.0) };
  s.t_laws = { CovariateLaw::uniform(-2.0, 2.0) };
  s.beta = Eigen::MatrixXd::Constant(1, 1, 1.0);
  s.smooth = { SmoothFunction::sine(1.0, 1.0) };
  return s;
}

// 1 -------------------------------------------------------------------------
Outcome
derivative_suite()
{
  Check c;
  std::mt19937_64 gen(1001);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  double worst1 = 0.0, worst2 = 0.0, worst_norm = 0.0, worst_shift = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int K = 2 + static_cast<int>(gen() % 5);
    Eigen::VectorXd eta(K);
    for (int k = 0; k < K; ++k)
      eta[k] = u(gen);
    const int y = static_cast<int>(gen() % static_cast<unsigned>(K));
    const int k = static_cast<int>(gen() % static_cast<unsigned>(K));
    const auto d = score_and_curvature(eta, y, k);
    auto l = [&](double h) {
      Eigen::VectorXd e = eta;
      e[k] += h;
      return log_likelihood_contribution(e, y);
    };
    const double h1 = 1e-6, h2 = 1e-4;
    const double fd1 = (l(h1) - l(-h1)) / (2 * h1);
    const double fd2 = (l(h2) - 2 * l(0.0) + l(-h2)) / (h2 * h2);
    worst1 = std::max(worst1, std::abs(d.score - fd1));
    worst2 = std::max(worst2, std::abs(d.curvature - fd2));

    const Eigen::VectorXd p = softmax_probabilities(eta);
    worst_norm = std::max(worst_norm, std::abs(p.sum() - 1.0));
    const Eigen::VectorXd shifted = softmax_probabilities((eta.array() + u(gen) * 10.0).matrix());
    worst_shift = std::max(worst_shift, (p - shifted).lpNorm<Eigen::Infinity>());
  }
  c.require(worst1 < 1e-6, "score error " + num(worst1));
  c.require(worst2 < 1e-4, "curvature error " + num(worst2));
  c.require(worst_norm < 1e-12, "normalisation error " + num(worst_norm));
  c.require(worst_shift < 1e-12, "shift error " + num(worst_shift));
  c.note("max |l'-fd| " + num(worst1) + ", max |l''-fd| " + num(worst2) + ", shift " + num(worst_shift));
  return c.done();
}

// 2 -------------------------------------------------------------------------
Outcome
parametric_oracle()
{
  Check c;
  double worst = 0.0;
  int idx = 0;
  for (int K : { 2, 3, 5 }) {
    const int reps = K == 5 ? 6 : 7;
    for (int rep = 0; rep < reps; ++rep, ++idx) {
      const Dataset d = simulate(mnl_dgp(K, 2, 200, 2000 + static_cast<std::uint64_t>(idx)));
      const ModelSpec spec{ K, K - 1 };
      const auto fit = fit_parametric(d, spec);
      par_traces.emplace_back("oracle K=" + std::to_string(K) + " #" + std::to_string(rep), fit.loglik_trace);
      c.require(fit.converged, "dataset " + std::to_string(idx) + " not converged");
      const Eigen::MatrixXd ref = oracle::oracle_mle(d, spec);
      const double err = (fit.coefficients - ref).lpNorm<Eigen::Infinity>();
      worst = std::max(worst, err);
      c.require(err < 1e-5, "dataset " + std::to_string(idx) + " differs by " + num(err));
    }
  }
  c.require(idx == 20, "expected 20 datasets");
  c.note("20 datasets, max coefficient difference " + num(worst));
  return c.done();
}

// 3 -------------------------------------------------------------------------
Outcome
intercept_only()
{
  Check c;
  Dataset d;
  d.categories = 3;
  d.x.resize(100, 0);
  d.t.resize(100, 0);
  for (int i = 0; i < 100; ++i)
    d.y.push_back(i < 50 ? 0 : (i < 80 ? 1 : 2));
  const auto fit = fit_parametric(d, ModelSpec{ 3, 2 });
  par_traces.emplace_back("intercept-only", fit.loglik_trace);
  const double e0 = std::abs(fit.coefficients(0, 0) - std::log(2.5));
  const double e1 = std::abs(fit.coefficients(1, 0) - std::log(1.5));
  c.require(fit.converged, "not converged");
  c.require(e0 < 1e-8 && e1 < 1e-8, "errors " + num(e0) + ", " + num(e1));
  c.note("intercepts " + format_double(fit.coefficients(0, 0)) + ", " + format_double(fit.coefficients(1, 0)));
  return c.done();
}

// 4 -------------------------------------------------------------------------
Outcome
uniform_collapse()
{
  Check c;
  DGPSpec dgp = mnl_dgp(3, 2, 500, 404);
  dgp.t_laws = { CovariateLaw::uniform(-2.0, 2.0) };
  dgp.smooth = { SmoothFunction::sine(0.8, 1.0), SmoothFunction::sine(0.8, 2.0) };
  const Dataset d = simulate(dgp);
  const ModelSpec spec = dgp.model();
  const auto fit = fit_semiparametric(d, spec, bandwidth_from_scale(d.t, 1e6));
  semi_traces.emplace_back("collapse K=3 n=500", fit.loglik_trace);
  const Dataset x_only{ d.y, d.x, Eigen::MatrixXd(d.size(), 0), d.categories };
  const auto par = fit_parametric(x_only, spec);
  par_traces.emplace_back("collapse parametric", par.loglik_trace);
  const double slope = (fit.beta - par.coefficients.rightCols(2)).lpNorm<Eigen::Infinity>();
  double range = 0.0;
  for (int r = 0; r < spec.free_count(); ++r)
    range = std::max(range, fit.smooth.m.row(r).maxCoeff() - fit.smooth.m.row(r).minCoeff());
  c.require(fit.converged, "semiparametric fit not converged");
  c.require(slope < 1e-4, "slope difference " + num(slope));
  c.require(range < 1e-4, "m range " + num(range));
  c.note("slope difference " + num(slope) + ", m range " + num(range));
  return c.done();
}

// 5 -------------------------------------------------------------------------
Outcome
least_favourable_gradient()
{
  Check c;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int K = 2 + static_cast<int>(seed % 3);
    DGPSpec dgp = mnl_dgp(K, 2, 40, 500 + seed);
    dgp.t_laws = { CovariateLaw::uniform(-2.0, 2.0) };
    const Dataset d = simulate(dgp);
    const ModelSpec spec{ K, K - 1 };
    RandomStream rng(seed, 77);
    ProfileState st{ Eigen::MatrixXd(K - 1, 2), Eigen::MatrixXd(K - 1, d.size()) };
    for (Eigen::Index i = 0; i < st.beta.size(); ++i)
      st.beta.data()[i] = rng.uniform(-1.0, 1.0);
    for (Eigen::Index i = 0; i < st.m.size(); ++i)
      st.m.data()[i] = rng.uniform(-1.0, 1.0);
    const KernelConfig k = bandwidth_from_scale(d.t, 0.5 + 0.01 * static_cast<double>(seed));
    const int row = static_cast<int>(seed % static_cast<std::uint64_t>(K - 1));
    const Eigen::RowVectorXd t = d.t.row(static_cast<Eigen::Index>(seed % 40));
    try {
      const double m0 = oracle::oracle_local_solve(d, spec, row, t, st.beta, st.m, k);
      const Eigen::VectorXd g = m_gradient(d, spec, row, t, st, k, m0);
      const double h = 1e-5;
      for (Eigen::Index j = 0; j < 2; ++j) {
        Eigen::MatrixXd up = st.beta, down = st.beta;
        up(row, j) += h;
        down(row, j) -= h;
        const double fd = (oracle::oracle_local_solve(d, spec, row, t, up, st.m, k) -
                           oracle::oracle_local_solve(d, spec, row, t, down, st.m, k)) /
                          (2 * h);
        worst = std::max(worst, std::abs(g[j] - fd));
        c.require(std::abs(g[j] - fd) < 1e-4, "instance " + std::to_string(seed));
      }
    } catch (const error& e) {
      c.require(false, "instance " + std::to_string(seed) + ": " + e.what());
    }
  }
  c.note("50 instances, max |gradient - fd| " + num(worst));
  return c.done();
}

// 6 -------------------------------------------------------------------------
int
run_cli(const std::string& args)
{
  const std::string cmd = std::string(SPMNL_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json
ridge_config(Eigen::Index n, int steps)
{
  return json{ { "simulate",
                 { { "categories", 3 },
                   { "reference", 2 },
                   { "n", n },
                   { "beta", { { 0.8, -0.5 }, { -0.4, 0.6 } } },
                   { "smooth", { { { "function", "ridge" }, { "coefficient", 1.0 } }, { { "function", "zero" } } } },
                   { "x_laws",
                     { { { "law", "normal" }, { "mean", 0.0 }, { "sd", 1.0 } },
                       { { "law", "bernoulli" }, { "p", 0.5 } } } },
                   { "t_laws",
                     { { { "law", "uniform" }, { "lo", -1.5 }, { "hi", 1.5 } },
                       { { "law", "uniform" }, { "lo", -1.5 }, { "hi", 1.5 } } } },
                   { "labels", { "A", "B", "C" } } } },
               { "kernel", { { "scale", 0.5 } } },
               { "surface",
                 { { "axes",
                     { { { "column", "t1" }, { "lo", -1.2 }, { "hi", 1.2 }, { "steps", steps } },
                       { { "column", "t2" }, { "lo", -1.2 }, { "hi", 1.2 }, { "steps", steps } } } },
                   { "fixed", { { "x1", 0.0 }, { "x2", 0.0 } } } } } };
}

std::vector<double>
trace_from_csv(const fs::path& path)
{
  std::vector<double> out;
  for (const auto& row : parse_csv(read_file(path)).rows)
    out.push_back(*parse_double(row[1]));
  return out;
}

Outcome
smooth_recovery(const fs::path& work)
{
  Check c;
  // sine DGP
  const DGPSpec dgp = sine_dgp(5000, 6006);
  const Dataset d = simulate(dgp);
  const auto fit = fit_semiparametric(d, dgp.model(), bandwidth_from_scale(d.t, 0.5));
  semi_traces.emplace_back("sine n=5000", fit.loglik_trace);
  c.require(fit.converged, "sine fit not converged");
  const double beta = fit.beta(0, 0);
  c.require(beta >= 0.9 && beta <= 1.1, "beta " + num(beta));

  std::vector<double> ts(d.t.col(0).data(), d.t.col(0).data() + d.size());
  std::sort(ts.begin(), ts.end());
  const double lo = ts[static_cast<size_t>(0.05 * static_cast<double>(ts.size()))];
  const double hi = ts[static_cast<size_t>(0.95 * static_cast<double>(ts.size()))];
  std::vector<double> est, truth;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d.t(i, 0) >= lo && d.t(i, 0) <= hi) {
      est.push_back(fit.smooth.m(0, i));
      truth.push_back(std::sin(d.t(i, 0)));
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v)
      s += x;
    return s / static_cast<double>(v.size());
  };
  const double me = mean(est), mt = mean(truth);
  double sse = 0.0;
  for (size_t i = 0; i < est.size(); ++i)
    sse += std::pow((est[i] - me) - (truth[i] - mt), 2);
  const double rmse = std::sqrt(sse / static_cast<double>(est.size()));
  c.require(rmse < 0.15, "centered m RMSE " + num(rmse));

  // ridge DGP through the command-line tool
  const fs::path dir = work / "ridge";
  fs::create_directories(dir);
  const json cfg = ridge_config(2000, 15);
  write_file(dir / "cfg.json", cfg.dump(2));
  const std::string args = (dir / "cfg.json").string() + " --seed 66 --out " + dir.string();
  const int fit_status = run_cli("fit " + args);
  c.require(fit_status == 0, "ridge fit exit status " + std::to_string(fit_status));
  double corr = 0.0;
  if (fit_status == 0) {
    semi_traces.emplace_back("ridge K=3 n=2000", trace_from_csv(dir / "trace.csv"));
    const int s = run_cli("surface " + args);
    c.require(s == 0, "surface exit status " + std::to_string(s));
    const RunConfig rc = parse_run_config(cfg, dir, Overrides{ 66, {}, {}, {} });
    const SimulationSpec sim = rc.simulation();
    std::vector<double> a, b;
    for (const auto& row : parse_csv(read_file(dir / "surface.csv")).rows) {
      if (row[2] != "A")
        continue;
      Eigen::RowVectorXd t(2);
      t << *parse_double(row[0]), *parse_double(row[1]);
      a.push_back(*parse_double(row[3]));
      b.push_back(sim.dgp.probabilities(Eigen::RowVectorXd::Zero(2), t)[0]);
    }
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    corr = sab / std::sqrt(saa * sbb);
    c.require(a.size() == 225, "surface has " + std::to_string(a.size()) + " category-A points");
    c.require(corr > 0.9, "ridge surface correlation " + num(corr));
  }
  c.note("beta " + num(beta) + ", centered m RMSE " + num(rmse) + " on [" + num(lo) + ", " + num(hi) +
         "], ridge surface correlation " + num(corr));
  return c.done();
}

// 7 -------------------------------------------------------------------------
Outcome
local_solver_cross_check()
{
  Check c;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int K = 2 + static_cast<int>(seed % 3);
    DGPSpec dgp = mnl_dgp(K, 1, 60, 700 + seed);
    dgp.t_laws = { CovariateLaw::normal(0.0, 1.0), CovariateLaw::uniform(0.0, 3.0) };
    const Dataset d = simulate(dgp);
    const ModelSpec spec{ K, K - 1 };
    RandomStream rng(seed, 3);
    ProfileState st{ Eigen::MatrixXd(K - 1, 1), Eigen::MatrixXd(K - 1, d.size()) };
    for (Eigen::Index i = 0; i < st.beta.size(); ++i)
      st.beta.data()[i] = rng.uniform(-1.5, 1.5);
    for (Eigen::Index i = 0; i < st.m.size(); ++i)
      st.m.data()[i] = rng.uniform(-1.5, 1.5);
    const KernelConfig k = bandwidth_from_scale(d.t, 0.4 + 0.02 * static_cast<double>(seed));
    const int row = static_cast<int>(seed % static_cast<std::uint64_t>(K - 1));
    Eigen::RowVectorXd t(2);
    t << rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.5);
    try {
      const double root = oracle::oracle_local_solve(d, spec, row, t, st.beta, st.m, k);
      double m = 0.0;
      for (int it = 0; it < 100; ++it)
        m = local_m_update(d, spec, row, t, st, k, m);
      worst = std::max(worst, std::abs(m - root));
      c.require(std::abs(m - root) < 1e-8, "problem " + std::to_string(seed) + " differs by " + num(m - root));
    } catch (const error& e) {
      c.require(false, "problem " + std::to_string(seed) + ": " + e.what());
    }
  }
  c.note("50 problems, max |newton - bisection| " + num(worst));
  return c.done();
}

// 8 -------------------------------------------------------------------------
Outcome
iia_size()
{
  Check c;
  double worst_tail = 0.0;
  for (int df = 1; df <= 40; ++df)
    for (double x = 0.01; x < 150.0; x *= 1.3)
      worst_tail = std::max(worst_tail, std::abs(chi_square_upper_tail(x, df) - boost::math::gamma_q(0.5 * df, 0.5 * x)));
  c.require(worst_tail < 1e-10, "chi-square tail error " + num(worst_tail));

  const int reps = 200;
  int reject_hm = 0, reject_sh = 0, failed = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const std::uint64_t seed = 80000 + static_cast<std::uint64_t>(rep);
    const Dataset d = simulate(mnl_dgp(4, 2, 2000, seed));
    const ModelSpec spec{ 4, 3 };
    const int dropped = rep % 3;
    try {
      reject_hm += hausman_mcfadden(d, spec, dropped).p_value < 0.05 ? 1 : 0;
      reject_sh += small_hsiao(d, spec, dropped, seed).p_value < 0.05 ? 1 : 0;
    } catch (const error&) {
      ++failed;
    }
  }
  const double rate_hm = reject_hm / static_cast<double>(reps);
  const double rate_sh = reject_sh / static_cast<double>(reps);
  c.require(failed == 0, std::to_string(failed) + " replications failed");
  c.require(rate_hm >= 0.01 && rate_hm <= 0.10, "Hausman-McFadden rejection rate " + num(rate_hm));
  c.require(rate_sh >= 0.01 && rate_sh <= 0.10, "Small-Hsiao rejection rate " + num(rate_sh));
  c.note("rejection rates HM " + num(rate_hm) + ", SH " + num(rate_sh) + "; tail error " + num(worst_tail));
  return c.done();
}

// 9 -------------------------------------------------------------------------
Outcome
pipeline_determinism(const fs::path& work)
{
  Check c;
  const fs::path dir = work / "pipeline";
  fs::create_directories(dir);
  write_file(dir / "cfg.json", ridge_config(600, 9).dump(2));
  const std::string cfg = (dir / "cfg.json").string();
  for (const char* run : { "a", "b" }) {
    const std::string out = (dir / run).string();
    const std::string common = cfg + " --seed 909 --out " + out;
    c.require(run_cli("simulate " + common) == 0, std::string("simulate failed in run ") + run);
    c.require(run_cli("fit " + common + " --input " + out + "/data.csv") == 0, std::string("fit failed in run ") + run);
    c.require(run_cli("surface " + common + " --input " + out + "/data.csv") == 0,
              std::string("surface failed in run ") + run);
  }
  int files = 0;
  for (const char* f : { "data.csv", "simulate_manifest.json", "coefficients.csv", "trace.csv", "smooth_values.csv",
                         "fit_state.json", "fit_manifest.json", "surface.csv", "surface_manifest.json" }) {
    try {
      c.require(read_file(dir / "a" / f) == read_file(dir / "b" / f), std::string(f) + " differs");
      ++files;
    } catch (const error& e) {
      c.require(false, e.what());
    }
  }
  double worst = 0.0;
  try {
    semi_traces.emplace_back("pipeline ridge K=3 n=600", trace_from_csv(dir / "a" / "trace.csv"));
    const auto rows = parse_csv(read_file(dir / "a" / "surface.csv")).rows;
    c.require(rows.size() == 9u * 9u * 3u, "surface row count " + std::to_string(rows.size()));
    for (size_t i = 0; i + 2 < rows.size(); i += 3) {
      double s = 0.0;
      for (size_t k = 0; k < 3; ++k)
        s += *parse_double(rows[i + k][3]);
      worst = std::max(worst, std::abs(s - 1.0));
    }
    c.require(worst < 1e-8, "probabilities sum to 1 within " + num(worst));
  } catch (const error& e) {
    c.require(false, e.what());
  }
  c.note(std::to_string(files) + " artifacts byte-identical, max |sum - 1| " + num(worst));
  return c.done();
}

// 10 ------------------------------------------------------------------------
Outcome
likelihood_ascent()
{
  Check c;
  // parametric traces from the suite plus larger K
  for (int K : { 4, 6 }) {
    const Dataset d = simulate(mnl_dgp(K, 3, 1500, 1000 + static_cast<std::uint64_t>(K)));
    par_traces.emplace_back("parametric K=" + std::to_string(K), fit_parametric(d, ModelSpec{ K, K - 1 }).loglik_trace);
  }
  double worst_par = 0.0, worst_semi = 0.0;
  for (const auto& [name, trace] : par_traces) {
    const double w = worst_descent(trace);
    worst_par = std::max(worst_par, w);
    c.require(w <= 1e-12, name + " parametric descent " + num(w));
  }
  for (const auto& [name, trace] : semi_traces) {
    const double w = worst_descent(trace);
    worst_semi = std::max(worst_semi, w);
    c.require(w <= 1e-8, name + " profile descent " + num(w));
  }
  c.require(!semi_traces.empty(), "no semiparametric traces collected");
  c.note(std::to_string(par_traces.size()) + " parametric traces (max descent " + num(worst_par) + "), " +
         std::to_string(semi_traces.size()) + " profile traces (max descent " + num(worst_semi) + ")");
  return c.done();
}

} // namespace

int
main()
{
  const fs::path work = fs::temp_directory_path() / "spmnl_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  struct Criterion
  {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
    { 1, "derivative suite", 5, derivative_suite },
    { 2, "parametric oracle equivalence", 60, parametric_oracle },
    { 3, "intercept-only closed form", 60, intercept_only },
    { 4, "uniform-bandwidth collapse", 30, uniform_collapse },
    { 5, "least-favourable-curve gradient", 60, least_favourable_gradient },
    { 6, "smooth-function recovery", 600, [&] { return smooth_recovery(work); } },
    { 7, "local-solver cross-check", 60, local_solver_cross_check },
    { 8, "IIA test size", 600, iia_size },
    { 9, "pipeline determinism", 600, [&] { return pipeline_determinism(work); } },
    { 10, "likelihood ascent", 600, likelihood_ascent },
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = { false, std::string("exception: ") + e.what() };
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.budget_seconds) {
      o.pass = false;
      o.detail += " | runtime " + num(secs) + " s exceeds " + num(cr.budget_seconds) + " s";
    }
    failed += o.pass ? 0 : 1;
    std::cout << "CRITERION " << cr.id << " (" << cr.name << "): " << (o.pass ? "PASS" : "FAIL") << " [" << num(secs)
              << " s] " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAIL") << std::endl;
  return failed == 0 ? 0 : 1;
}

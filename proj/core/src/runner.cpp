#include "gfdeconv/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>

#include "gfdeconv/bounds.hpp"
#include "gfdeconv/estimators.hpp"
#include "gfdeconv/fourier.hpp"
#include "gfdeconv/io.hpp"
#include "gfdeconv/random_gf.hpp"
#include "gfdeconv/weak_metric.hpp"
#include "json.hpp"

namespace gfd {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// enum <-> string maps

const char* family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::laplace: return "laplace";
    case Family::uniform: return "uniform";
    case Family::triangular: return "triangular";
    case Family::mixture_with_atom: return "mixture_with_atom";
  }
  throw std::invalid_argument("unknown family");
}

Family family_from(const std::string& name) {
  for (Family f : {Family::gaussian, Family::laplace, Family::uniform,
                   Family::triangular, Family::mixture_with_atom})
    if (name == family_name(f)) return f;
  throw std::invalid_argument("unknown distribution family: " + name);
}

const char* kind_name(RegressionKind k) {
  switch (k) {
    case RegressionKind::gaussian_bump: return "gaussian_bump";
    case RegressionKind::bump_plus_constant: return "bump_plus_constant";
    case RegressionKind::sum_of_peaks: return "sum_of_peaks";
    case RegressionKind::polynomial: return "polynomial";
  }
  throw std::invalid_argument("unknown regression kind");
}

RegressionKind kind_from(const std::string& name) {
  for (RegressionKind k :
       {RegressionKind::gaussian_bump, RegressionKind::bump_plus_constant,
        RegressionKind::sum_of_peaks, RegressionKind::polynomial})
    if (name == kind_name(k)) return k;
  throw std::invalid_argument("unknown regression kind: " + name);
}

// ---------------------------------------------------------------------------
// JSON helpers (strict: unknown keys reject)

void check_keys(const ordered_json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end())
      throw std::invalid_argument(std::string("config: unknown key '") + key +
                                  "' in " + where);
  }
}

DistributionSpec dist_from_json(const ordered_json& j, const char* where) {
  if (!j.is_object())
    throw std::invalid_argument(std::string("config: ") + where +
                                " must be an object");
  check_keys(j, {"family", "scale", "atom_weight", "atom_location", "base",
                 "base_scale"},
             where);
  DistributionSpec d;
  if (j.contains("family")) d.family = family_from(j["family"].get<std::string>());
  if (j.contains("scale")) d.scale = j["scale"].get<double>();
  if (j.contains("atom_weight")) d.atom_weight = j["atom_weight"].get<double>();
  if (j.contains("atom_location")) d.atom_location = j["atom_location"].get<double>();
  if (j.contains("base")) d.base = family_from(j["base"].get<std::string>());
  if (j.contains("base_scale")) d.base_scale = j["base_scale"].get<double>();
  return d;
}

ordered_json dist_to_json(const DistributionSpec& d) {
  ordered_json j;
  j["family"] = family_name(d.family);
  j["scale"] = d.scale;
  if (d.family == Family::mixture_with_atom) {
    j["atom_weight"] = d.atom_weight;
    j["atom_location"] = d.atom_location;
    j["base"] = family_name(d.base);
    j["base_scale"] = d.base_scale;
  }
  return j;
}

std::string fmt_short(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// small numeric utilities

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  if (v.size() % 2 == 1) return v[m];
  return 0.5 * (v[m - 1] + v[m]);
}

/// Runs fn(i) for i in [0, jobs) on worker_count(jobs) threads; each job
/// writes only its own output slot, so results are thread-count independent.
void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = worker_count(jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < jobs; i += workers) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
}

void write_metrics(const RunConfig& cfg, const ordered_json& metrics) {
  write_file(std::filesystem::path(cfg.out_dir) / "metrics.json",
             metrics.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// shared pipeline pieces

double effective_zeta(const RunConfig& cfg, std::size_t n) {
  if (cfg.zeta.has_value()) return *cfg.zeta;
  return default_zeta(n);
}

/// Contaminated draws x = x* + u for the deconvolution pipeline, wrapped as
/// samples so the dataset writer can be reused (y, z and the other error
/// channels stay zero).
std::vector<ModelSample> deconvolution_draws(const RunConfig& cfg, std::size_t n,
                                             std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ModelSample> out(n);
  for (auto& s : out) {
    s.xstar = draw(cfg.signal, rng);
    s.u = draw(cfg.model.u, rng);
    s.x = s.xstar + s.u;
  }
  return out;
}

/// ECF-based plug-in density deconvolution with the known error CF.
GeneralizedFunction deconvolve_samples(std::span<const ModelSample> data,
                                       const RunConfig& cfg, const Grid& freq) {
  std::vector<double> xs(data.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = data[i].x;
  const GriddedFunction eps_hat = ecf(xs, freq);
  const GriddedFunction phi = error_cf(cfg.model.u, freq);
  return deconvolve_known_cf(eps_hat, phi, cfg.solver);
}

struct WindowBounds {
  double lo = 0.0;
  double hi = 0.0;
};

WindowBounds window_bounds(const SupportWindow& w) {
  return {w.grid.node(w.lo), w.grid.node(w.hi)};
}

// ---------------------------------------------------------------------------
// commands

int cmd_simulate(const RunConfig& cfg) {
  const auto data = sample_model(cfg.model, cfg.n, cfg.seed);
  write_samples_csv(
      (std::filesystem::path(cfg.out_dir) / "dataset.csv").string(), data);
  double mx = 0.0, my = 0.0, mz = 0.0;
  for (const auto& s : data) {
    mx += s.x;
    my += s.y;
    mz += s.z;
  }
  const double n = std::max<double>(1.0, double(data.size()));
  ordered_json metrics;
  metrics["schema"] = kSchemaVersion;
  metrics["command"] = "simulate";
  metrics["n"] = cfg.n;
  metrics["seed"] = cfg.seed;
  metrics["mean_x"] = mx / n;
  metrics["mean_y"] = my / n;
  metrics["mean_z"] = mz / n;
  write_metrics(cfg, metrics);
  return 0;
}

int cmd_deconvolve(const RunConfig& cfg) {
  const Grid space = space_grid(cfg);
  const Grid freq = space.dual();
  const auto data = deconvolution_draws(cfg, cfg.n, cfg.seed);
  write_samples_csv(
      (std::filesystem::path(cfg.out_dir) / "dataset.csv").string(), data);

  const GeneralizedFunction g_hat = deconvolve_samples(data, cfg, freq);
  write_gf_json((std::filesystem::path(cfg.out_dir) / "ghat.json").string(),
                g_hat);

  const GeneralizedFunction truth = as_generalized(cfg.signal, space);
  const auto set = default_test_set();
  const double wd = weak_distance(g_hat, truth, set);

  ordered_json metrics;
  metrics["schema"] = kSchemaVersion;
  metrics["command"] = "deconvolve";
  metrics["n"] = cfg.n;
  metrics["seed"] = cfg.seed;
  metrics["weak_distance"] = wd;
  if (cfg.solver.cutoff.has_value()) metrics["cutoff"] = *cfg.solver.cutoff;
  write_metrics(cfg, metrics);
  return 0;
}

int cmd_solve_system(const RunConfig& cfg) {
  const Grid space = space_grid(cfg);
  const auto data = sample_model(cfg.model, cfg.n, cfg.seed);
  write_samples_csv(
      (std::filesystem::path(cfg.out_dir) / "dataset.csv").string(), data);

  SolverConfig sc = cfg.solver;
  sc.zeta = effective_zeta(cfg, cfg.n);
  const SystemSolution sol =
      solve_system(data, default_bandwidth(data, cfg.dim), space, sc);
  write_gf_json((std::filesystem::path(cfg.out_dir) / "ghat.json").string(),
                sol.g_hat);

  const GeneralizedFunction truth = regression_as_gf(cfg.model.g, space);
  const auto set = default_test_set();
  const double wd = weak_distance(sol.g_hat, truth, set);
  const auto wb = window_bounds(sol.window);

  ordered_json metrics;
  metrics["schema"] = kSchemaVersion;
  metrics["command"] = "solve-system";
  metrics["n"] = cfg.n;
  metrics["seed"] = cfg.seed;
  metrics["zeta"] = sc.zeta;
  metrics["weak_distance"] = wd;
  metrics["window"] = {wb.lo, wb.hi};
  metrics["clipped_fraction"] = sol.clipped_fraction;
  metrics["masked_fraction"] = sol.masked_fraction;
  write_metrics(cfg, metrics);
  return 0;
}

int cmd_wellposed_demo(const RunConfig& cfg) {
  const Grid space = space_grid(cfg);
  if (space.dim() != 1)
    throw std::invalid_argument("wellposed-demo: grid must be 1-d");
  const Grid freq = space.dual();
  const auto set = default_test_set();

  // Stable regime: data perturbations that halve inside a bounded class
  // produce solution errors that shrink at every step.
  const GeneralizedFunction g_truth = regression_as_gf(cfg.model.g, space);
  const GriddedFunction gamma = forward_ft(*g_truth.regular);
  const GriddedFunction phi = error_cf(cfg.model.u, freq);
  GriddedFunction eps(freq);
  for (std::size_t k = 0; k < freq.size(); ++k)
    eps.values[k] = gamma.values[k] * phi.values[k];
  // Tail values below ~1e-195 are truncated to exact zero so that halving the
  // perturbation rescales every partial sum of the pairing integrals exactly
  // (power-of-two scaling is bitwise-exact only away from the denormal range).
  const GriddedFunction bump = tabulate(
      freq, [](double s) { return std::abs(s) > 30.0 ? 0.0 : std::exp(-0.5 * s * s); });
  const GriddedFunction zero_freq(freq);

  const PolyBound cls{{0}, 3.0};
  std::vector<double> wp_data, wp_sol;
  bool bounded_class = check_uniform_bound(eps, cls).holds;
  GriddedFunction delta = bump;
  for (int k = 1; k <= 5; ++k) {
    GriddedFunction eps_k = eps;
    for (std::size_t j = 0; j < freq.size(); ++j) {
      delta.values[j] *= 0.5;  // exact halving per step
      eps_k.values[j] += delta.values[j];
    }
    bounded_class = bounded_class && check_uniform_bound(eps_k, cls).holds;
    wp_data.push_back(weak_distance(delta, zero_freq, set));
    const GeneralizedFunction g_k = deconvolve_known_cf(eps_k, phi, cfg.solver);
    wp_sol.push_back(weak_distance(g_k, g_truth, set));
  }
  bool wp_halves = true, wp_decreases = true;
  for (std::size_t i = 1; i < wp_data.size(); ++i) {
    wp_halves = wp_halves && wp_data[i] == 0.5 * wp_data[i - 1];
    wp_decreases = wp_decreases && wp_sol[i] < wp_sol[i - 1];
  }

  // Divergent regime: data perturbations that vanish weakly while the
  // solution perturbations blow up against a fixed positive functional.
  const auto honorary = TestFunction::custom(
      [](double x) { return cplx(std::exp(-std::abs(x))); });
  const GeneralizedFunction zero =
      GeneralizedFunction::from_regular(GriddedFunction(space));
  std::vector<double> ip_data, ip_sol, ip_floor;
  for (int n = 2; n <= 5; ++n) {
    const auto pair = illposed_pair(n, space);
    ip_data.push_back(weak_distance(
        GeneralizedFunction::from_regular(pair.eps_diff), zero, set));
    ip_sol.push_back(std::abs(apply_functional(
        GeneralizedFunction::from_regular(pair.gamma_diff), honorary)));
    const double nn = n;
    ip_floor.push_back(std::exp(-(nn + 1.0 / nn) + (nn - 1.0 / nn) * (nn - 1.0 / nn)) /
                       (2.0 * nn));
  }
  bool ip_increases = true, ip_data_decreases = true, ip_exceeds = true;
  for (std::size_t i = 0; i < ip_sol.size(); ++i) {
    if (i > 0) {
      ip_increases = ip_increases && ip_sol[i] > ip_sol[i - 1];
      ip_data_decreases = ip_data_decreases && ip_data[i] < ip_data[i - 1];
    }
    ip_exceeds = ip_exceeds && ip_sol[i] > ip_floor[i] * (1.0 - 1e-6);
  }

  std::string csv = "regime,step,data_dist,solution_dist,divergence_floor\n";
  for (std::size_t i = 0; i < wp_data.size(); ++i)
    csv += "wellposed," + std::to_string(i + 1) + "," + fmt_short(wp_data[i]) +
           "," + fmt_short(wp_sol[i]) + ",\n";
  for (std::size_t i = 0; i < ip_data.size(); ++i)
    csv += "illposed," + std::to_string(i + 2) + "," + fmt_short(ip_data[i]) +
           "," + fmt_short(ip_sol[i]) + "," + fmt_short(ip_floor[i]) + "\n";
  write_file(std::filesystem::path(cfg.out_dir) / "study.csv", csv);

  ordered_json metrics;
  metrics["schema"] = kSchemaVersion;
  metrics["command"] = "wellposed-demo";
  metrics["wellposed"] = {{"data_halves", wp_halves},
                          {"solution_decreases", wp_decreases},
                          {"bounded_class", bounded_class},
                          {"data_dist", wp_data},
                          {"solution_dist", wp_sol}};
  metrics["illposed"] = {{"solution_increases", ip_increases},
                         {"data_decreases", ip_data_decreases},
                         {"exceeds_floor", ip_exceeds},
                         {"data_dist", ip_data},
                         {"solution_dist", ip_sol},
                         {"floor", ip_floor}};
  write_metrics(cfg, metrics);
  return 0;
}

int cmd_convergence_study(const RunConfig& cfg) {
  const Grid space = space_grid(cfg);
  const Grid freq = space.dual();
  const auto set = default_test_set();
  const bool system_pipeline = cfg.pipeline == "solve-system";
  const GeneralizedFunction truth = system_pipeline
                                        ? regression_as_gf(cfg.model.g, space)
                                        : as_generalized(cfg.signal, space);

  ordered_json levels = ordered_json::array();
  std::string csv = "n,reps,rejects,median_wd\n";
  for (std::size_t level = 0; level < cfg.ladder.size(); ++level) {
    const std::size_t n = cfg.ladder[level];
    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    std::vector<double> wds(reps, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::uint8_t> rejected(reps, 0);

    parallel_for(reps, [&](std::size_t r) {
      const std::uint64_t seed = replication_seed(cfg.seed, level, r);
      try {
        if (system_pipeline) {
          const auto data = sample_model(cfg.model, n, seed);
          SolverConfig sc = cfg.solver;
          sc.zeta = effective_zeta(cfg, n);
          const auto sol =
              solve_system(data, default_bandwidth(data, cfg.dim), space, sc);
          wds[r] = weak_distance(sol.g_hat, truth, set);
        } else {
          const auto data = deconvolution_draws(cfg, n, seed);
          const auto g_hat = deconvolve_samples(data, cfg, freq);
          wds[r] = weak_distance(g_hat, truth, set);
        }
      } catch (const SolverRejection&) {
        rejected[r] = 1;
      }
    });

    std::vector<double> kept;
    std::size_t rejects = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      if (rejected[r])
        ++rejects;
      else
        kept.push_back(wds[r]);
    }
    const double med = median_of(kept);

    ordered_json row;
    row["n"] = n;
    row["reps"] = reps;
    row["rejects"] = rejects;
    if (std::isnan(med))
      row["median_weak_distance"] = nullptr;
    else
      row["median_weak_distance"] = med;
    levels.push_back(std::move(row));
    csv += std::to_string(n) + "," + std::to_string(reps) + "," +
           std::to_string(rejects) + "," +
           (std::isnan(med) ? std::string("") : fmt_short(med)) + "\n";
  }
  write_file(std::filesystem::path(cfg.out_dir) / "study.csv", csv);

  ordered_json metrics;
  metrics["schema"] = kSchemaVersion;
  metrics["command"] = "convergence-study";
  metrics["pipeline"] = cfg.pipeline;
  metrics["seed"] = cfg.seed;
  metrics["levels"] = std::move(levels);
  write_metrics(cfg, metrics);
  return 0;
}

// ---------------------------------------------------------------------------
// selftest: a condensed re-verification of each module's core invariant

struct SelfCheck {
  std::string name;
  bool ok;
  std::string detail;
};

SelfCheck check_transform_roundtrip() {
  const Grid space(16.0, 512);
  const auto f = tabulate(space, [](double x) { return std::exp(-x * x) * (1.0 + x); });
  const auto back = inverse_ft(forward_ft(f));
  double err = 0.0;
  for (std::size_t j = 0; j < space.size(); ++j)
    err = std::max(err, std::abs(back.values[j] - f.values[j]));
  return {"transform-roundtrip", err < 1e-12, "max err " + fmt_short(err)};
}

SelfCheck check_exchange_formula() {
  const Grid space(20.0, 1024);
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const auto f = tabulate(space, [&](double x) { return c * std::exp(-0.5 * x * x); });
  const auto conv = convolve(f, f);
  const auto lhs = forward_ft(conv);
  const Grid freq = space.dual();
  double err = 0.0;
  for (std::size_t k = 0; k < freq.size(); ++k) {
    const double s = freq.node(k);
    if (std::abs(s) > 10.0) continue;
    err = std::max(err, std::abs(lhs.values[k] - std::exp(-s * s)));
  }
  return {"exchange-formula", err < 1e-8, "max err " + fmt_short(err)};
}

SelfCheck check_generator_consistency() {
  const Grid freq(16.0, 256);
  const DistributionSpec spec{.family = Family::gaussian, .scale = 1.0};
  Rng rng(42);
  const std::size_t n = 20000;
  std::vector<double> xs(n);
  for (auto& v : xs) v = draw(spec, rng);
  const double wd = weak_distance(ecf(xs, freq), error_cf(spec, freq),
                                  default_test_set());
  return {"generator-consistency", wd < 0.05, "wd " + fmt_short(wd)};
}

SelfCheck check_system_oracle() {
  const Grid space(80.0, 4096);
  const Grid freq = space.dual();
  const double rt_pi = std::sqrt(std::numbers::pi);
  SpectralEstimates est;
  est.eps1 = GriddedFunction(freq);
  est.eps1_deriv.assign(1, GriddedFunction(freq));
  est.eps2.assign(1, GriddedFunction(freq));
  for (std::size_t k = 0; k < freq.size(); ++k) {
    const double s = freq.node(k);
    const cplx gamma = rt_pi * std::exp(-0.25 * s * s);
    const cplx phi = 1.0 / (1.0 + s * s);
    const cplx e1 = gamma * phi;
    est.eps1.values[k] = e1;
    est.eps1_deriv[0].values[k] = e1 * (-0.5 * s - 2.0 * s / (1.0 + s * s));
    // gamma'(s) = -(s/2) gamma(s) for this density, so the second moment
    // channel carries i * (s/2) * eps1.
    est.eps2[0].values[k] = cplx(0.0, 0.5 * s) * e1;
  }
  SolverConfig sc;
  sc.zeta = 1e-6;
  sc.bound = PolyBound{{1}, 1.2};
  const auto sol = solve_system(est, sc);
  const auto truth = GeneralizedFunction::from_regular(
      tabulate(space, [](double x) { return std::exp(-x * x); }));
  const double wd = weak_distance(sol.g_hat, truth, default_test_set());
  double phi_err = 0.0;
  for (std::size_t k = 0; k < freq.size(); ++k)
    if (sol.window.inside[k])
      phi_err = std::max(phi_err, std::abs(sol.phi_hat.values[k] -
                                           1.0 / (1.0 + std::pow(freq.node(k), 2))));
  return {"system-oracle", wd < 1e-3 && phi_err < 1e-2,
          "wd " + fmt_short(wd) + ", phi err " + fmt_short(phi_err)};
}

SelfCheck check_illposed_monotone() {
  const Grid space(8.0, 1024);
  const auto honorary = TestFunction::custom(
      [](double x) { return cplx(std::exp(-std::abs(x))); });
  const auto set = default_test_set();
  const auto zero = GeneralizedFunction::from_regular(GriddedFunction(space));
  double prev_val = 0.0, prev_wd = 1e300;
  bool ok = true;
  for (int n = 2; n <= 4; ++n) {
    const auto pair = illposed_pair(n, space);
    const double val = std::abs(apply_functional(
        GeneralizedFunction::from_regular(pair.gamma_diff), honorary));
    const double wd = weak_distance(
        GeneralizedFunction::from_regular(pair.eps_diff), zero, set);
    ok = ok && val > prev_val && wd < prev_wd;
    prev_val = val;
    prev_wd = wd;
  }
  return {"illposed-monotone", ok, "divergence vs weak vanishing"};
}

SelfCheck check_sampler_determinism() {
  ModelConfig mc;
  mc.u = {.family = Family::laplace, .scale = 0.5};
  const auto a = sample_model(mc, 128, 7);
  const auto b = sample_model(mc, 128, 7);
  bool ok = a.size() == b.size();
  for (std::size_t i = 0; ok && i < a.size(); ++i)
    ok = a[i].x == b[i].x && a[i].y == b[i].y && a[i].z == b[i].z;
  return {"sampler-determinism", ok, "identical reruns"};
}

SelfCheck check_mixture_floor() {
  const Grid freq(40.0, 1024);
  const DistributionSpec mix{.family = Family::mixture_with_atom,
                             .scale = 0.0,
                             .atom_weight = 0.75,
                             .atom_location = 0.0,
                             .base = Family::gaussian,
                             .base_scale = 1.0};
  const auto cf = error_cf(mix, freq);
  double lo = 1e300;
  for (const auto& v : cf.values) lo = std::min(lo, std::abs(v));
  return {"mixture-floor", lo >= 0.5, "min modulus " + fmt_short(lo)};
}

SelfCheck check_covariance_psd() {
  const auto set = hermite_test_set(8, 1.0);
  const auto gram = covariance_gram(CovarianceKind::wiener_derivative, set);
  // complex Cholesky; PSD iff every pivot is non-negative (tiny slack)
  const std::size_t m = set.size();
  std::vector<cplx> a = gram;
  bool ok = true;
  for (std::size_t i = 0; i < m && ok; ++i) {
    cplx diag = a[i * m + i];
    for (std::size_t k = 0; k < i; ++k) diag -= a[i * m + k] * std::conj(a[i * m + k]);
    if (diag.real() < -1e-10) {
      ok = false;
      break;
    }
    const double d = std::sqrt(std::max(0.0, diag.real()));
    a[i * m + i] = d;
    for (std::size_t j = i + 1; j < m; ++j) {
      cplx v = a[j * m + i];
      for (std::size_t k = 0; k < i; ++k) v -= a[j * m + k] * std::conj(a[i * m + k]);
      a[j * m + i] = d > 0.0 ? v / d : cplx(0.0);
    }
  }
  return {"covariance-psd", ok, "Gram Cholesky pivots non-negative"};
}

SelfCheck check_windowed_mean_oracle() {
  std::vector<ModelSample> data;
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    ModelSample s;
    s.z = -2.0 + 0.45 * i;
    s.y = std::sin(s.z) + 0.1 * rng.normal();
    data.push_back(s);
  }
  const Grid space(2.0, 16);
  const KernelSpec kspec{0.5};
  const auto nw = nadaraya_watson(data, Moment::y, space, kspec);
  double err = 0.0;
  for (std::size_t j = 0; j < space.points(); ++j) {
    double acc = 0.0;
    std::size_t cnt = 0;
    for (const auto& s : data)
      if (std::abs(s.z - space.node(j)) <= kspec.bandwidth) {
        acc += s.y;
        ++cnt;
      }
    const double expect = cnt ? acc / double(cnt) : 0.0;
    err = std::max(err, std::abs(nw.values.values[j].real() - expect));
  }
  return {"windowed-mean-oracle", err < 1e-12, "max err " + fmt_short(err)};
}

SelfCheck check_clip_envelope() {
  const Grid freq(10.0, 256);
  const auto wild = tabulate(freq, [](double s) { return std::exp(0.5 * s * s); });
  const PolyBound bound{{0}, 10.0};
  const auto clipped = clip_to_bound(wild, bound);
  const bool ok = check_uniform_bound(clipped, bound).holds;
  return {"clip-envelope", ok, "clipped field inside the envelope"};
}

int cmd_selftest(const RunConfig& cfg) {
  const std::vector<SelfCheck> checks = {
      check_transform_roundtrip(), check_exchange_formula(),
      check_generator_consistency(), check_system_oracle(),
      check_illposed_monotone(),    check_sampler_determinism(),
      check_mixture_floor(),        check_covariance_psd(),
      check_windowed_mean_oracle(), check_clip_envelope(),
  };
  ordered_json jchecks = ordered_json::array();
  bool all_ok = true;
  for (const auto& c : checks) {
    std::printf("%s %s (%s)\n", c.ok ? "ok  " : "FAIL", c.name.c_str(),
                c.detail.c_str());
    jchecks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    all_ok = all_ok && c.ok;
  }
  ordered_json metrics;
  metrics["schema"] = kSchemaVersion;
  metrics["command"] = "selftest";
  metrics["passed"] = all_ok;
  metrics["checks"] = std::move(jchecks);
  write_metrics(cfg, metrics);
  if (!all_ok) throw std::runtime_error("selftest: at least one check failed");
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------

void validate(const RunConfig& cfg) {
  (void)space_grid(cfg);  // grid invariants (power of two, positive L)
  if (cfg.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (cfg.reps < 1) throw std::invalid_argument("config: reps must be >= 1");
  if (cfg.ladder.empty())
    throw std::invalid_argument("config: ladder must not be empty");
  for (std::size_t n : cfg.ladder)
    if (n < 1) throw std::invalid_argument("config: ladder entries must be >= 1");
  if (cfg.pipeline != "deconvolve" && cfg.pipeline != "solve-system")
    throw std::invalid_argument(
        "config: pipeline must be 'deconvolve' or 'solve-system'");
  if (cfg.out_dir.empty())
    throw std::invalid_argument("config: output directory must not be empty");
  if (cfg.zeta.has_value() &&
      !(std::isfinite(*cfg.zeta) && *cfg.zeta > 0.0))
    throw std::invalid_argument("config: zeta must be positive and finite");
  validate(cfg.model);
  validate(cfg.signal);
  validate(cfg.solver, cfg.dim);
}

Grid space_grid(const RunConfig& cfg) {
  return Grid(cfg.grid_L, cfg.grid_N, cfg.dim);
}

RunConfig config_from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: bad JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: not a JSON object");
  if (!j.contains("schema") || !j["schema"].is_number_integer() ||
      j["schema"].get<int>() != kSchemaVersion)
    throw std::invalid_argument(
        "config: missing or unsupported schema version (expected 1)");
  check_keys(j,
             {"schema", "grid", "n", "seed", "reps", "out", "regression",
              "signal", "error", "error_x", "error_y", "z_sd", "hetero_x",
              "bound", "solver", "ladder", "pipeline"},
             "top level");

  RunConfig cfg;
  if (j.contains("grid")) {
    const auto& jg = j["grid"];
    check_keys(jg, {"L", "N", "dim"}, "grid");
    if (jg.contains("L")) cfg.grid_L = jg["L"].get<double>();
    if (jg.contains("N")) cfg.grid_N = jg["N"].get<std::size_t>();
    if (jg.contains("dim")) cfg.dim = jg["dim"].get<int>();
  }
  if (j.contains("n")) cfg.n = j["n"].get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("reps")) cfg.reps = j["reps"].get<int>();
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("regression")) {
    const auto& jr = j["regression"];
    check_keys(jr, {"kind", "params"}, "regression");
    if (jr.contains("kind"))
      cfg.model.g.kind = kind_from(jr["kind"].get<std::string>());
    if (jr.contains("params"))
      cfg.model.g.params = jr["params"].get<std::vector<double>>();
  }
  if (j.contains("signal")) cfg.signal = dist_from_json(j["signal"], "signal");
  if (j.contains("error")) cfg.model.u = dist_from_json(j["error"], "error");
  if (j.contains("error_x"))
    cfg.model.ux = dist_from_json(j["error_x"], "error_x");
  if (j.contains("error_y"))
    cfg.model.uy = dist_from_json(j["error_y"], "error_y");
  if (j.contains("z_sd")) cfg.model.z_sd = j["z_sd"].get<double>();
  if (j.contains("hetero_x")) cfg.model.hetero_x = j["hetero_x"].get<double>();
  if (j.contains("bound")) {
    const auto& jb = j["bound"];
    check_keys(jb, {"m", "V"}, "bound");
    if (jb.contains("m")) cfg.solver.bound.m = jb["m"].get<std::vector<int>>();
    if (jb.contains("V")) cfg.solver.bound.V = jb["V"].get<double>();
  }
  if (j.contains("solver")) {
    const auto& js = j["solver"];
    check_keys(js, {"zeta", "tau", "cutoff", "c_re", "c_im"}, "solver");
    if (js.contains("zeta")) cfg.zeta = js["zeta"].get<double>();
    if (js.contains("tau")) cfg.solver.tau = js["tau"].get<double>();
    if (js.contains("cutoff")) cfg.solver.cutoff = js["cutoff"].get<double>();
    if (js.contains("c_re") || js.contains("c_im"))
      cfg.solver.c = cplx(js.value("c_re", 1.0), js.value("c_im", 0.0));
  }
  if (j.contains("ladder"))
    cfg.ladder = j["ladder"].get<std::vector<std::size_t>>();
  if (j.contains("pipeline")) cfg.pipeline = j["pipeline"].get<std::string>();
  validate(cfg);
  return cfg;
}

std::string config_to_json_text(const RunConfig& cfg) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["grid"] = {{"L", cfg.grid_L}, {"N", cfg.grid_N}, {"dim", cfg.dim}};
  j["n"] = cfg.n;
  j["seed"] = cfg.seed;
  j["reps"] = cfg.reps;
  j["out"] = cfg.out_dir;
  j["regression"] = {{"kind", kind_name(cfg.model.g.kind)},
                     {"params", cfg.model.g.params}};
  j["signal"] = dist_to_json(cfg.signal);
  j["error"] = dist_to_json(cfg.model.u);
  j["error_x"] = dist_to_json(cfg.model.ux);
  j["error_y"] = dist_to_json(cfg.model.uy);
  j["z_sd"] = cfg.model.z_sd;
  j["hetero_x"] = cfg.model.hetero_x;
  j["bound"] = {{"m", cfg.solver.bound.m}, {"V", cfg.solver.bound.V}};
  ordered_json js;
  if (cfg.zeta.has_value()) js["zeta"] = *cfg.zeta;
  js["tau"] = cfg.solver.tau;
  if (cfg.solver.cutoff.has_value()) js["cutoff"] = *cfg.solver.cutoff;
  js["c_re"] = cfg.solver.c.real();
  js["c_im"] = cfg.solver.c.imag();
  j["solver"] = std::move(js);
  j["ladder"] = cfg.ladder;
  j["pipeline"] = cfg.pipeline;
  return j.dump(2) + "\n";
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::uint64_t replication_seed(std::uint64_t base, std::size_t level,
                               std::size_t rep) {
  return base * 1000003ULL + static_cast<std::uint64_t>(level) * 10007ULL +
         static_cast<std::uint64_t>(rep);
}

unsigned worker_count(std::size_t jobs) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GFDECONV_THREADS")) {
    unsigned v = 0;
    const std::string_view sv(env);
    const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size() || v == 0)
      throw std::invalid_argument(
          "GFDECONV_THREADS must be a positive integer");
    cap = v;
  }
  return static_cast<unsigned>(
      std::min<std::size_t>(cap, std::max<std::size_t>(1, jobs)));
}

int run(const std::string& command, const RunConfig& cfg) {
  validate(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  if (command == "simulate") return cmd_simulate(cfg);
  if (command == "deconvolve") return cmd_deconvolve(cfg);
  if (command == "solve-system") return cmd_solve_system(cfg);
  if (command == "wellposed-demo") return cmd_wellposed_demo(cfg);
  if (command == "convergence-study") return cmd_convergence_study(cfg);
  if (command == "selftest") return cmd_selftest(cfg);
  throw std::invalid_argument("unknown command: " + command);
}

}  // namespace gfd

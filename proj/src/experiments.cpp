#include "quadfr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "quadfr/errors.hpp"

namespace quadfr {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint32_t fold_seed(std::uint64_t seed) {
  return static_cast<std::uint32_t>(seed >> 32) ^ static_cast<std::uint32_t>(seed);
}

/// Signed offset wrapped into [-length/2, length/2).
double wrap(double d, double length) { return d - length * std::floor(d / length + 0.5); }

/// Maps a coordinate into [0, length).
double periodic(double x, double length) { return x - length * std::floor(x / length); }

}  // namespace

SeededRng::SeededRng(std::uint64_t seed) : engine_(fold_seed(seed)) {}

double SeededRng::uniform() {
  const std::uint32_t a = engine_() >> 5;
  const std::uint32_t b = engine_() >> 6;
  return (a * 67108864.0 + b) / 9007199254740992.0;
}

SeededRng seeded_rng(std::uint64_t seed) { return SeededRng(seed); }

void MorletConfig::validate() const {
  if (n < 1) throw std::invalid_argument("morlet: need at least one wavelet");
  if (!(sigma > 0.0)) throw std::invalid_argument("morlet: sigma must be positive");
  if (centers.size() != static_cast<std::size_t>(n) || kappas.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("morlet: centres and kappas must have n entries");
  for (double k : kappas)
    if (k < 0.0 || k > 1.0) throw std::invalid_argument("morlet: kappa outside [0, 1]");
  for (const auto& c : centers)
    if (c.x < 0.0 || c.x > length || c.y < 0.0 || c.y > length)
      throw std::invalid_argument("morlet: centre outside the domain");
}

MorletConfig random_morlet(int n, double sigma, std::uint64_t seed, double length) {
  MorletConfig cfg;
  cfg.n = n;
  cfg.sigma = sigma;
  cfg.rng_seed = seed;
  cfg.length = length;
  SeededRng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double x = length * rng.uniform();
    const double y = length * rng.uniform();
    cfg.centers.push_back({x, y});
    cfg.kappas.push_back(rng.uniform());
  }
  cfg.validate();
  return cfg;
}

double morlet_c_sigma(double sigma) {
  return 1.0 / std::sqrt(1.0 + std::exp(-sigma * sigma) - 2.0 * std::exp(-0.75 * sigma * sigma));
}

double morlet_profile(double r, double sigma, double kappa) {
  return std::exp(-0.5 * r * r) * (std::cos(sigma * r) - kappa);
}

double morlet_ic(const MorletConfig& cfg, double x, double y) {
  const double scale = morlet_c_sigma(cfg.sigma) * std::pow(kPi, -0.25);
  const double l = cfg.length;
  double u = 0.0;
  for (int i = 0; i < cfg.n; ++i) {
    const double dx = wrap(x - cfg.centers[i].x, l);
    const double dy = wrap(y - cfg.centers[i].y, l);
    for (int sx = -1; sx <= 1; ++sx) {
      for (int sy = -1; sy <= 1; ++sy) {
        const double r = std::hypot(dx + sx * l, dy + sy * l);
        u += morlet_profile(r, cfg.sigma, cfg.kappas[i]);
      }
    }
  }
  return scale * u;
}

double exact_solution(const MorletConfig& cfg, double theta, double t, double x, double y) {
  return morlet_ic(cfg, periodic(x - t * std::cos(theta), cfg.length),
                   periodic(y - t * std::sin(theta), cfg.length));
}

InitialConditionKind parse_initial_condition(std::string_view text) {
  if (text == "morlet") return InitialConditionKind::morlet;
  if (text == "sine") return InitialConditionKind::sine;
  if (text == "gauss") return InitialConditionKind::gauss;
  throw std::invalid_argument("unknown initial condition: " + std::string(text));
}

std::string to_string(InitialConditionKind kind) {
  switch (kind) {
    case InitialConditionKind::morlet: return "morlet";
    case InitialConditionKind::sine: return "sine";
    case InitialConditionKind::gauss: return "gauss";
  }
  return "?";
}

ExactField make_exact_field(InitialConditionKind kind, const MorletConfig& morlet, double theta,
                            double length) {
  const double ax = std::cos(theta);
  const double ay = std::sin(theta);
  switch (kind) {
    case InitialConditionKind::morlet:
      return [morlet, theta](double t, double x, double y) {
        return exact_solution(morlet, theta, t, x, y);
      };
    case InitialConditionKind::sine:
      return [ax, ay](double t, double x, double y) {
        return std::sin(x - t * ax) * std::sin(y - t * ay);
      };
    case InitialConditionKind::gauss:
      return [ax, ay, length](double t, double x, double y) {
        const double dx = wrap(x - t * ax - 0.5 * length, length);
        const double dy = wrap(y - t * ay - 0.5 * length, length);
        double u = 0.0;
        for (int sx = -1; sx <= 1; ++sx)
          for (int sy = -1; sy <= 1; ++sy) {
            const double rx = dx + sx * length;
            const double ry = dy + sy * length;
            u += std::exp(-(rx * rx + ry * ry) / (2.0 * 0.25));
          }
        return u;
      };
  }
  throw std::invalid_argument("unknown initial condition");
}

double error_norm(const AdvectionSolver& solver, const SolverState& state,
                  const std::function<double(double, double)>& exact, int quad_strength) {
  const OperatorSet& ops = solver.ops();
  if (quad_strength < ops.basis.k_max + 2)
    throw std::invalid_argument("error_norm: quad_strength must be at least k_max + 2");
  const GaussRule rule = gauss_legendre_1d(quad_strength);
  std::vector<Point2> qp;
  std::vector<double> qw;
  for (int j = 0; j < quad_strength; ++j)
    for (int i = 0; i < quad_strength; ++i) {
      qp.push_back({rule.nodes[i], rule.nodes[j]});
      qw.push_back(rule.weights[i] * rule.weights[j]);
    }
  const Eigen::MatrixXd interp = evaluate_modes(ops.basis, qp) * ops.V_inv;
  const Eigen::MatrixXd uq = interp * state.u;
  const double jac = solver.mesh().hx() * solver.mesh().hy() / 4.0;
  double sum = 0.0;
  for (Eigen::Index e = 0; e < uq.cols(); ++e) {
    for (std::size_t i = 0; i < qp.size(); ++i) {
      const Point2 x = solver.physical(e, qp[i]);
      const double d = uq(i, e) - exact(x.x, x.y);
      sum += qw[i] * d * d;
    }
  }
  return std::sqrt(jac * sum);
}

double order_of_accuracy(const std::vector<std::pair<double, double>>& h_error) {
  if (h_error.size() < 2) throw DegenerateFit("order_of_accuracy: need at least two levels");
  for (const auto& [h, e] : h_error) {
    if (!(e > 0.0)) throw DegenerateFit("order_of_accuracy: non-positive error");
    if (!(h > 0.0)) throw DegenerateFit("order_of_accuracy: non-positive h");
  }
  if (h_error.size() == 2) {
    const auto [h1, e1] = h_error[0];
    const auto [h2, e2] = h_error[1];
    if (h1 == h2) throw DegenerateFit("order_of_accuracy: identical h");
    return std::log(e1 / e2) / std::log(h1 / h2);
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [h, e] : h_error) {
    mx += std::log(h);
    my += std::log(e);
  }
  mx /= h_error.size();
  my /= h_error.size();
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [h, e] : h_error) {
    const double dx = std::log(h) - mx;
    sxy += dx * (std::log(e) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw DegenerateFit("order_of_accuracy: identical h");
  return sxy / sxx;
}

RunResult run_advection(const RunSpec& spec) {
  const OperatorSetPtr ops = make_operators(spec.basis, spec.k);
  SchemeInstance scheme;
  if (spec.q.empty()) {
    scheme = dg_scheme(ops);
  } else {
    const QFamily family = derive_q_family(*ops);
    scheme = correction_matrix(ops, family, spec.q);
  }
  MeshConfig mesh;
  mesh.nx = mesh.ny = spec.n;
  const AdvectionSolver solver(std::move(scheme), mesh, spec.solver);

  const ExactField exact = make_exact_field(spec.ic, spec.morlet, spec.solver.theta, mesh.length);
  const int quad = spec.quad_strength > 0 ? spec.quad_strength : spec.k + 3;

  SolverState state = solver.project([&](double x, double y) { return exact(0.0, x, y); });
  const long steps = std::lround(spec.solver.t_end / spec.solver.dt);

  RunResult result;
  result.h = mesh.hx();
  auto sample = [&]() {
    result.t.push_back(state.t);
    result.energy.push_back(solver.energy(state));
    result.integral.push_back(solver.integral(state));
    const double t = state.t;
    result.error.push_back(
        error_norm(solver, state, [&](double x, double y) { return exact(t, x, y); }, quad));
  };
  sample();
  for (long s = 1; s <= steps; ++s) {
    solver.step_ssprk3(state);
    if ((spec.sample_every > 0 && s % spec.sample_every == 0) || s == steps) sample();
  }
  return result;
}

std::vector<RunResult> run_batch(const std::vector<RunSpec>& specs, unsigned workers) {
  std::vector<RunResult> results(specs.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, std::max<std::size_t>(specs.size(), 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      try {
        results[i] = run_advection(specs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<double> default_angles(int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(0.5 * kPi * i / (count - 1));
  return out;
}

namespace {

RunSpec base_spec(BasisKind basis, int k, double theta, int n, double t_end, int sample_every,
                  const SweepOptions& options) {
  RunSpec spec;
  spec.basis = basis;
  spec.k = k;
  spec.q = options.q;
  spec.n = n;
  spec.solver.theta = theta;
  spec.solver.kappa = options.kappa;
  spec.solver.dt = options.dt;
  spec.solver.t_end = t_end;
  spec.ic = options.ic;
  spec.morlet = options.morlet;
  spec.sample_every = sample_every;
  return spec;
}

}  // namespace

double integral_drift(const RunResult& result, double length) {
  if (result.integral.empty()) return 0.0;
  const double i0 = result.integral.front();
  const double scale = std::max(std::abs(i0), length * std::sqrt(result.energy.front()));
  double drift = 0.0;
  for (double v : result.integral) drift = std::max(drift, std::abs(v - i0));
  return scale > 0.0 ? drift / scale : drift;
}

std::vector<SweepResult> angle_sweep(const std::vector<BasisKind>& bases, int k,
                                     const std::vector<double>& thetas,
                                     const std::vector<int>& grids, double t_end,
                                     const SweepOptions& options) {
  if (grids.size() < 2) throw std::invalid_argument("angle_sweep: need at least two grids");
  std::vector<RunSpec> specs;
  for (BasisKind b : bases)
    for (double theta : thetas)
      for (int n : grids) specs.push_back(base_spec(b, k, theta, n, t_end, 0, options));
  const auto runs = run_batch(specs, options.workers);

  const int finest = *std::max_element(grids.begin(), grids.end());
  std::vector<SweepResult> out;
  std::size_t i = 0;
  for (BasisKind b : bases) {
    SweepResult res{b, {}};
    for (double theta : thetas) {
      std::vector<std::pair<double, double>> he;
      double err = 0.0, drift = 0.0;
      for (int n : grids) {
        const RunResult& r = runs[i++];
        he.emplace_back(r.h, r.error.back());
        drift = std::max(drift, integral_drift(r, options.morlet.length));
        if (n == finest) err = r.error.back();
      }
      res.rows.push_back({theta, order_of_accuracy(he), err, drift});
    }
    out.push_back(std::move(res));
  }
  return out;
}

OrderSeries order_series(BasisKind basis, const RunResult& coarse, const RunResult& fine) {
  if (coarse.t.size() != fine.t.size()) throw std::invalid_argument("sample times differ");
  OrderSeries s{basis, {}, {}};
  for (std::size_t i = 0; i < coarse.t.size(); ++i) {
    s.t.push_back(coarse.t[i]);
    s.order.push_back(order_of_accuracy({{coarse.h, coarse.error[i]}, {fine.h, fine.error[i]}}));
  }
  s.integral_drift = std::max(integral_drift(coarse), integral_drift(fine));
  return s;
}

std::vector<OrderSeries> order_vs_time(const std::vector<BasisKind>& bases, int k, double theta,
                                       std::pair<int, int> grids, double t_end, int sample_every,
                                       const SweepOptions& options) {
  std::vector<RunSpec> specs;
  for (BasisKind b : bases) {
    specs.push_back(base_spec(b, k, theta, grids.first, t_end, sample_every, options));
    specs.push_back(base_spec(b, k, theta, grids.second, t_end, sample_every, options));
  }
  const auto runs = run_batch(specs, options.workers);
  std::vector<OrderSeries> out;
  for (std::size_t i = 0; i < bases.size(); ++i)
    out.push_back(order_series(bases[i], runs[2 * i], runs[2 * i + 1]));
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << std::setprecision(17) << "theta,order,error\n";
  for (const auto& r : result.rows) os << r.theta << ',' << r.order << ',' << r.error << '\n';
  return os.str();
}

std::string order_csv(const OrderSeries& series) {
  std::ostringstream os;
  os << std::setprecision(17) << "t,order\n";
  for (std::size_t i = 0; i < series.t.size(); ++i) os << series.t[i] << ',' << series.order[i] << '\n';
  return os.str();
}

std::string run_csv(const RunResult& result) {
  std::ostringstream os;
  os << std::setprecision(17) << "t,energy,error\n";
  for (std::size_t i = 0; i < result.t.size(); ++i)
    os << result.t[i] << ',' << result.energy[i] << ',' << result.error[i] << '\n';
  return os.str();
}

}  // namespace quadfr

// Command line front end: operators, filter families, stability checks and
// advection experiments. Every invocation writes a JSON run manifest.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "quadfr/errors.hpp"
#include "quadfr/experiments.hpp"
#include "quadfr/io.hpp"
#include "quadfr/solver.hpp"
#include "quadfr/stability.hpp"

using namespace quadfr;
using nlohmann::json;

namespace {

struct Common {
  std::string basis = "max";
  int k = 3;
  std::vector<double> q;
  std::string out;
  std::string manifest;
};

void add_basis_options(CLI::App* app, Common& c) {
  app->add_option("--basis", c.basis, "Basis family: max, total or euclid")->capture_default_str();
  app->add_option("--k", c.k, "Maximum order k_max")->capture_default_str();
}

void add_output_options(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output file (stdout when omitted)");
  app->add_option("--manifest", c.manifest,
                  "Run manifest path (default <out>.manifest.json or quadfr-<command>.manifest.json)");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text(c.out, text);
  }
}

void write_manifest(const Common& c, const std::string& command, json config, json hashes) {
  json m = make_manifest(command, std::move(config));
  m["operator_hashes"] = std::move(hashes);
  m["output"] = c.out.empty() ? json("stdout") : json(c.out);
  const std::string path = !c.manifest.empty() ? c.manifest
                           : !c.out.empty()    ? c.out + ".manifest.json"
                                               : "quadfr-" + command + ".manifest.json";
  write_text(path, m.dump(2) + "\n");
}

json hash_entry(const OperatorSet& ops, const SchemeInstance* scheme = nullptr) {
  return {{"basis", ops.basis.name()}, {"hash", operator_hash(ops, scheme)}};
}

std::vector<BasisKind> parse_bases(const std::vector<std::string>& names) {
  std::vector<BasisKind> out;
  for (const auto& n : names) out.push_back(parse_basis_kind(n));
  return out;
}

SchemeInstance build_scheme(const OperatorSetPtr& ops, const std::vector<double>& q) {
  if (q.empty()) return dg_scheme(ops);
  return correction_matrix(ops, derive_q_family(*ops), q);
}

json join_names(const std::vector<BasisKind>& bases) {
  json out = json::array();
  for (auto b : bases) out.push_back(to_string(b));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flux reconstruction operators and stable filter families on quadrilaterals"};
  app.require_subcommand(1);

  // points
  Common pts;
  auto* points_cmd = app.add_subcommand("points", "Export the solution points as CSV (x,y)");
  add_basis_options(points_cmd, pts);
  add_output_options(points_cmd, pts);
  points_cmd->callback([&]() {
    const BasisSpec basis = make_basis(parse_basis_kind(pts.basis), pts.k);
    const PointSet set = default_point_set(basis);
    emit(pts, to_csv(set));
    const OperatorSet ops = build_operators(basis, set);
    write_manifest(pts, "points", {{"basis", basis.name()}, {"point_set", set.label}},
                   json::array({hash_entry(ops)}));
  });

  // operators
  Common opc;
  std::string format = "json";
  auto* ops_cmd = app.add_subcommand("operators", "Export reference operators");
  add_basis_options(ops_cmd, opc);
  add_output_options(ops_cmd, opc);
  ops_cmd->add_option("--q", opc.q, "Filter parameters (comma separated); adds Q and C")->delimiter(',');
  ops_cmd->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  ops_cmd->callback([&]() {
    const auto ops = make_operators(parse_basis_kind(opc.basis), opc.k);
    std::optional<SchemeInstance> scheme;
    if (!opc.q.empty()) scheme = build_scheme(ops, opc.q);
    const SchemeInstance* sp = scheme ? &*scheme : nullptr;
    emit(opc, format == "csv" ? operators_csv(*ops, sp) : operators_json(*ops, sp).dump(2) + "\n");
    write_manifest(opc, "operators",
                   {{"basis", ops->basis.name()}, {"format", format}, {"q", opc.q}},
                   json::array({hash_entry(*ops, sp)}));
  });

  // derive-q
  Common dq;
  std::string method = "exact";
  auto* dq_cmd = app.add_subcommand("derive-q", "Derive the stable filter family");
  add_basis_options(dq_cmd, dq);
  add_output_options(dq_cmd, dq);
  dq_cmd->add_option("--method", method, "exact or numeric nullspace")
      ->check(CLI::IsMember({"exact", "numeric"}))
      ->capture_default_str();
  dq_cmd->callback([&]() {
    const auto ops = make_operators(parse_basis_kind(dq.basis), dq.k);
    QDerivationOptions opt;
    opt.method = method == "exact" ? NullspaceMethod::exact : NullspaceMethod::numeric;
    const QFamily family = derive_q_family(*ops, opt);
    emit(dq, family_json(family, *ops).dump(2) + "\n");
    write_manifest(dq, "derive-q", {{"basis", ops->basis.name()}, {"method", method}},
                   json::array({hash_entry(*ops)}));
  });

  // check-stability
  Common cs;
  int exit_code = 0;
  auto* cs_cmd = app.add_subcommand("check-stability", "Cholesky test of M~ + Q~(q)");
  add_basis_options(cs_cmd, cs);
  add_output_options(cs_cmd, cs);
  cs_cmd->add_option("--q", cs.q, "Filter parameters (comma separated)")->delimiter(',')->required();
  cs_cmd->callback([&]() {
    const auto ops = make_operators(parse_basis_kind(cs.basis), cs.k);
    const QFamily family = derive_q_family(*ops);
    const auto report = check_stability(*ops, family, cs.q);
    std::ostringstream os;
    if (report.stable) {
      os << "stable\n";
    } else {
      os << "unstable (failing pivot " << *report.failing_pivot << ")\n";
      exit_code = 3;
    }
    if (family.reference) {
      for (const auto& ineq : inequality_suite(*family.reference))
        os << (ineq.holds(cs.q) ? "  holds    " : "  violated ") << ineq.label << "\n";
    }
    emit(cs, os.str());
    write_manifest(cs, "check-stability",
                   {{"basis", ops->basis.name()}, {"q", cs.q}, {"result", to_json(report)}},
                   json::array({hash_entry(*ops)}));
  });

  // solve
  Common sv;
  RunSpec run;
  std::string ic = "morlet";
  std::uint64_t seed = 0;
  int wavelets = 4;
  int nx = 8, ny = 0;
  auto* solve_cmd = app.add_subcommand("solve", "Advect an initial condition; CSV t,energy,error");
  add_basis_options(solve_cmd, sv);
  add_output_options(solve_cmd, sv);
  solve_cmd->add_option("--q", sv.q, "Filter parameters (comma separated)")->delimiter(',');
  solve_cmd->add_option("--theta", run.solver.theta, "Advection angle in radians")->capture_default_str();
  solve_cmd->add_option("--nx", nx, "Elements in x")->capture_default_str();
  solve_cmd->add_option("--ny", ny, "Elements in y (default nx)");
  solve_cmd->add_option("--dt", run.solver.dt, "Time step")->capture_default_str();
  run.solver.t_end = 1.0;
  solve_cmd->add_option("--t-end", run.solver.t_end, "Final time")->capture_default_str();
  solve_cmd->add_option("--kappa", run.solver.kappa, "Upwinding in [0, 1]")->capture_default_str();
  solve_cmd->add_option("--ic", ic, "morlet, sine or gauss")
      ->check(CLI::IsMember({"morlet", "sine", "gauss"}))
      ->capture_default_str();
  solve_cmd->add_option("--seed", seed, "Seed for the Morlet centres")->capture_default_str();
  solve_cmd->add_option("--wavelets", wavelets, "Number of Morlet wavelets")->capture_default_str();
  solve_cmd->add_option("--sample-every", run.sample_every, "Steps between samples")->capture_default_str();
  solve_cmd->callback([&]() {
    const BasisKind kind = parse_basis_kind(sv.basis);
    const auto ops = make_operators(kind, sv.k);
    const SchemeInstance scheme = build_scheme(ops, sv.q);
    MeshConfig mesh;
    mesh.nx = nx;
    mesh.ny = ny > 0 ? ny : nx;
    const AdvectionSolver solver(scheme, mesh, run.solver);
    if (auto w = solver.cfl_warning()) std::cerr << "warning: " << *w << "\n";

    const MorletConfig morlet = random_morlet(wavelets, 3.0, seed);
    const ExactField exact =
        make_exact_field(parse_initial_condition(ic), morlet, run.solver.theta, mesh.length);
    SolverState state = solver.project([&](double x, double y) { return exact(0.0, x, y); });
    const long steps = std::lround(run.solver.t_end / run.solver.dt);
    const int quad = sv.k + 3;
    RunResult result;
    result.h = mesh.hx();
    auto sample = [&]() {
      const double t = state.t;
      result.t.push_back(t);
      result.energy.push_back(solver.energy(state));
      result.integral.push_back(solver.integral(state));
      result.error.push_back(
          error_norm(solver, state, [&](double x, double y) { return exact(t, x, y); }, quad));
    };
    sample();
    for (long s = 1; s <= steps; ++s) {
      solver.step_ssprk3(state);
      if ((run.sample_every > 0 && s % run.sample_every == 0) || s == steps) sample();
    }
    emit(sv, run_csv(result));
    json cfg = {{"basis", ops->basis.name()},
                {"q", sv.q},
                {"theta", run.solver.theta},
                {"nx", mesh.nx},
                {"ny", mesh.ny},
                {"dt", run.solver.dt},
                {"t_end", run.solver.t_end},
                {"kappa", run.solver.kappa},
                {"ic", ic},
                {"seed", seed},
                {"error_norm", kErrorNormDefinition},
                {"quad_strength", quad},
                {"steps", steps},
                {"integral_drift", result.integral.back() - result.integral.front()}};
    if (ic == "morlet") cfg["morlet"] = to_json(morlet);
    write_manifest(sv, "solve", cfg, json::array({hash_entry(*ops, &scheme)}));
  });

  // sweep and order-vs-time
  Common sw;
  std::vector<std::string> bases = {"max", "total", "euclid"};
  std::vector<int> grids = {8, 12, 16, 24};
  int angles = 13;
  double t_end = 5.0;
  SweepOptions sopt;
  std::uint64_t sweep_seed = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Angle sweep; CSV theta,order,error per basis");
  sweep_cmd->add_option("--k", sw.k, "Maximum order k_max")->capture_default_str();
  sweep_cmd->add_option("--bases", bases, "Bases to run")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--grids", grids, "Elements per direction")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--angles", angles, "Uniform angles on [0, pi/2]")->capture_default_str();
  sweep_cmd->add_option("--t-end", t_end, "Final time")->capture_default_str();
  sweep_cmd->add_option("--dt", sopt.dt, "Time step")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_seed, "Seed for the Morlet centres")->capture_default_str();
  sweep_cmd->add_option("--workers", sopt.workers, "Worker threads (0: all cores)")->capture_default_str();
  sweep_cmd->add_option("--out", sw.out,
                        "Output prefix; writes <out>_<basis>.csv (stdout when omitted)");
  sweep_cmd->add_option("--manifest", sw.manifest, "Run manifest path");
  sweep_cmd->callback([&]() {
    const auto kinds = parse_bases(bases);
    sopt.morlet = random_morlet(4, 3.0, sweep_seed);
    const auto results = angle_sweep(kinds, sw.k, default_angles(angles), grids, t_end, sopt);
    json hashes = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const std::string csv = sweep_csv(results[i]);
      if (sw.out.empty()) {
        std::cout << "# basis: " << to_string(kinds[i]) << "\n" << csv;
      } else {
        write_text(sw.out + "_" + to_string(kinds[i]) + ".csv", csv);
      }
      hashes.push_back(hash_entry(*make_operators(kinds[i], sw.k)));
    }
    write_manifest(sw, "sweep",
                   {{"bases", join_names(kinds)},
                    {"k", sw.k},
                    {"grids", grids},
                    {"angles", angles},
                    {"t_end", t_end},
                    {"dt", sopt.dt},
                    {"seed", sweep_seed},
                    {"morlet", to_json(sopt.morlet)},
                    {"error_norm", kErrorNormDefinition},
                    {"order_fit", "least-squares slope of log E against log h"}},
                   hashes);
  });

  Common ov;
  std::vector<std::string> ov_bases = {"max", "total", "euclid"};
  std::vector<int> pair = {8, 12};
  double ov_theta = 0.0;
  double ov_t_end = 5.0;
  int sample_every = 50;
  SweepOptions oopt;
  std::uint64_t ov_seed = 0;
  auto* ov_cmd = app.add_subcommand("order-vs-time", "Two-grid order over time; CSV t,order per basis");
  ov_cmd->add_option("--k", ov.k, "Maximum order k_max")->capture_default_str();
  ov_cmd->add_option("--bases", ov_bases, "Bases to run")->delimiter(',')->capture_default_str();
  ov_cmd->add_option("--grids", pair, "Two grid sizes")->delimiter(',')->expected(2)->capture_default_str();
  ov_cmd->add_option("--theta", ov_theta, "Advection angle")->capture_default_str();
  ov_cmd->add_option("--t-end", ov_t_end, "Final time")->capture_default_str();
  ov_cmd->add_option("--dt", oopt.dt, "Time step")->capture_default_str();
  ov_cmd->add_option("--sample-every", sample_every, "Steps between samples")->capture_default_str();
  ov_cmd->add_option("--seed", ov_seed, "Seed for the Morlet centres")->capture_default_str();
  ov_cmd->add_option("--workers", oopt.workers, "Worker threads (0: all cores)")->capture_default_str();
  ov_cmd->add_option("--out", ov.out, "Output prefix; writes <out>_<basis>.csv");
  ov_cmd->add_option("--manifest", ov.manifest, "Run manifest path");
  ov_cmd->callback([&]() {
    const auto kinds = parse_bases(ov_bases);
    oopt.morlet = random_morlet(4, 3.0, ov_seed);
    const auto series =
        order_vs_time(kinds, ov.k, ov_theta, {pair[0], pair[1]}, ov_t_end, sample_every, oopt);
    json hashes = json::array();
    for (std::size_t i = 0; i < series.size(); ++i) {
      const std::string csv = order_csv(series[i]);
      if (ov.out.empty()) {
        std::cout << "# basis: " << to_string(kinds[i]) << "\n" << csv;
      } else {
        write_text(ov.out + "_" + to_string(kinds[i]) + ".csv", csv);
      }
      hashes.push_back(hash_entry(*make_operators(kinds[i], ov.k)));
    }
    write_manifest(ov, "order-vs-time",
                   {{"bases", join_names(kinds)},
                    {"k", ov.k},
                    {"grids", pair},
                    {"theta", ov_theta},
                    {"t_end", ov_t_end},
                    {"dt", oopt.dt},
                    {"sample_every", sample_every},
                    {"seed", ov_seed},
                    {"morlet", to_json(oopt.morlet)},
                    {"error_norm", kErrorNormDefinition}},
                   hashes);
  });

  // tensor-analysis
  Common ta;
  ta.k = 2;
  std::vector<double> c_grid = {-0.2, -0.05, 0.0, 0.01, 0.05, 0.2};
  std::vector<double> ext_axis = {-0.1, -0.05, 0.0, 0.05, 0.1};
  auto* ta_cmd = app.add_subcommand("tensor-analysis",
                                    "Residual of the tensor-product correction system (maximal basis)");
  ta_cmd->add_option("--k", ta.k, "Maximum order (extended family needs 2)")->capture_default_str();
  ta_cmd->add_option("--c", c_grid, "VCJH parameters")->delimiter(',')->capture_default_str();
  ta_cmd->add_option("--extended-axis", ext_axis, "Axis values of the (c0, c1) grid")
      ->delimiter(',')
      ->capture_default_str();
  add_output_options(ta_cmd, ta);
  ta_cmd->callback([&]() {
    const auto ops = make_operators(BasisKind::maximal, ta.k);
    const QFamily family = derive_q_family(*ops);
    std::vector<std::pair<double, double>> ext;
    if (ta.k == 2)
      for (double a : ext_axis)
        for (double b : ext_axis) ext.emplace_back(a, b);
    const auto report = tensor_product_analysis(*ops, family, c_grid, ext);
    std::ostringstream os;
    os << std::setprecision(17) << "family,c0,c1,residual\n";
    for (const auto& r : report.vcjh) os << "vcjh," << r.params[0] << ",," << r.residual << "\n";
    for (const auto& r : report.extended)
      os << "extended," << r.params[0] << "," << r.params[1] << "," << r.residual << "\n";
    emit(ta, os.str());
    write_manifest(ta, "tensor-analysis", {{"k", ta.k}, {"c", c_grid}, {"extended_axis", ext_axis}},
                   json::array({hash_entry(*ops)}));
  });

  // optimise-points
  Common op;
  int iterations = 2000;
  auto* op_cmd = app.add_subcommand("optimise-points",
                                    "Re-optimise the orbit layout of an approximate Euclidean basis");
  op_cmd->add_option("--k", op.k, "Maximum order (2, 3 or 4)")->capture_default_str();
  op_cmd->add_option("--iterations", iterations, "Nelder-Mead iterations")->capture_default_str();
  add_output_options(op_cmd, op);
  op_cmd->callback([&]() {
    const BasisSpec basis = make_basis(BasisKind::euclidean, op.k);
    const auto seed_layout = euclidean_layout(op.k);
    const double seed_obj = interpolation_objective(basis, orbit_points(seed_layout));
    const OrbitLayout layout = optimise_orbit_layout(basis, seed_layout, iterations);
    PointSet set = orbit_points(layout.orbits);
    set.label = "optimised_euclidean_k" + std::to_string(op.k);
    emit(op, to_csv(set));
    json orbits = json::array();
    for (const auto& o : layout.orbits)
      orbits.push_back({{"type", static_cast<int>(o.type)}, {"r", o.r}, {"angle", o.angle}});
    const OperatorSet ops = build_operators(basis, set);
    write_manifest(op, "optimise-points",
                   {{"basis", basis.name()},
                    {"seed_objective", seed_obj},
                    {"objective", layout.objective},
                    {"evaluations", layout.evaluations},
                    {"orbits", orbits}},
                   json::array({hash_entry(ops)}));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const quadfr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

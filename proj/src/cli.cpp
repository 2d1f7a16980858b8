#include "holo/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "holo/acceptance.hpp"
#include "holo/bargmann.hpp"
#include "holo/cylinder.hpp"
#include "holo/errors.hpp"
#include "holo/operators.hpp"
#include "holo/propagator.hpp"
#include "holo/serialization.hpp"

namespace holo {

namespace {

using nlohmann::json;

struct Common {
  std::string format = "csv";
  std::string output;
  std::string config;
};

struct Options {
  Common common;
  int truncation = kDefaultTruncation;
  int quad_order = kDefaultQuadOrder;
  bool normalized = false;
  bool raw = false;
  std::string source = "closed";
  int grid = 5;
  double imag = 0.0;
  HeatKernelParams heat;
  bool calibrate = false;
  int buffer = 2;
  double theta0 = 0.0;
  double T_real = 1.0;
  double T_imag = 0.0;
  double epsilon = 0.05;
  int modes = 40;
  int windings = 40;
  int theta_points = 64;
  double t = 0.5;
  int steps = 16;
  std::string initial;
  std::string step_kernel = "ambient";
  bool serial = false;
};

std::vector<std::string> labels_of(const Eigen::VectorXcd& pts) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < pts.size(); ++i) out.push_back(csv_cell(pts[i]));
  return out;
}

std::vector<std::string> mode_header(int N, const std::string& corner) {
  std::vector<std::string> h{corner};
  for (int k = -N; k <= N; ++k) h.push_back("k=" + std::to_string(k));
  return h;
}

std::vector<std::string> mode_rows(int N) {
  std::vector<std::string> r;
  for (int k = -N; k <= N; ++k) r.push_back("k=" + std::to_string(k));
  return r;
}

json json_vector(const Eigen::VectorXcd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v[i]));
  return a;
}

Exec exec_of(const Options& o) { return o.serial ? Exec::serial : Exec::parallel; }

std::string emit(const Options& o, const std::string& csv, const json& j) {
  return o.common.format == "json" ? j.dump(2) + "\n" : csv;
}

std::string cmd_gram(const Options& o) {
  const bool normalized = !o.raw;
  const BasisSpec basis = cylinder_basis(o.truncation, normalized);
  const GramSource src = o.source == "quadrature" ? GramSource::quadrature : GramSource::closed_form;
  const GramData g = gram_matrix(basis, cylinder_chart(), QuadratureRule(o.quad_order, 2), src, Precision::extended,
                                 exec_of(o));
  const json j{{"N", o.truncation}, {"normalized", normalized}, {"source", o.source}, {"matrix", matrix_to_json(g.matrix)}};
  return emit(o, matrix_to_csv(g.matrix, mode_header(o.truncation, "p\\q"), mode_rows(o.truncation)), j);
}

std::string cmd_orthonormalize(const Options& o) {
  const BasisSpec basis = cylinder_basis(o.truncation, true);
  const GramData g = gram_matrix(basis, cylinder_chart(), QuadratureRule(1, 2), GramSource::closed_form);
  const Eigen::MatrixXcd C = orthonormalize(g);
  const auto m = C.cols();
  const double resid = (C.adjoint() * g.matrix * C - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
  std::vector<std::string> header{"k\\beta"};
  json order = json::array();
  for (auto idx : g.ordering) {
    header.push_back("beta(k=" + std::to_string(basis.labels[idx]) + ")");
    order.push_back(basis.labels[idx]);
  }
  const json j{{"N", o.truncation}, {"ordering", order}, {"coefficients", matrix_to_json(C)}, {"residual", resid}};
  return emit(o, matrix_to_csv(C, header, mode_rows(o.truncation)) + "residual," + format_double(resid) + "\n", j);
}

Eigen::VectorXcd grid_points(const Options& o) {
  const Eigen::VectorXd g = periodic_grid(o.grid);
  Eigen::VectorXcd pts(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) pts[i] = cplx(g[i], o.imag);
  return pts;
}

std::string cmd_kernel(const Options& o) {
  const BasisSpec basis = cylinder_basis(o.truncation, true);
  const GramData g = gram_matrix(basis, cylinder_chart(), QuadratureRule(1, 2), GramSource::closed_form);
  const KernelRep K = reproducing_kernel(g, basis);
  const Eigen::VectorXcd pts = grid_points(o);
  const Eigen::MatrixXcd vals = K.grid(pts.transpose(), pts.transpose(), exec_of(o));
  std::vector<std::string> header{"z\\w"};
  for (const auto& s : labels_of(pts)) header.push_back(s);
  const json j{{"N", o.truncation}, {"points", json_vector(pts)}, {"kernel", matrix_to_json(vals)}};
  return emit(o, matrix_to_csv(vals, header, labels_of(pts)), j);
}

std::string cmd_heatkernel(const Options& o) {
  validate(o.heat);
  const Eigen::VectorXcd pts = grid_points(o);
  Eigen::MatrixXcd vals = heat_kernel_grid(o.heat, pts, pts, exec_of(o));
  cplx c = 1.0;
  if (o.calibrate) {
    const BasisSpec basis = cylinder_basis(o.truncation, true);
    const GramData g = gram_matrix(basis, cylinder_chart(), QuadratureRule(1, 2), GramSource::closed_form);
    c = heat_kernel_calibration(o.heat, reproducing_kernel(g, basis));
    vals *= c;
  }
  std::vector<std::string> header{"z\\w"};
  for (const auto& s : labels_of(pts)) header.push_back(s);
  const json j{{"t", o.heat.t},       {"modes", o.heat.M},        {"x_nodes", o.heat.x_quad},
               {"x0", o.heat.x0},     {"calibration", complex_to_json(c)}, {"points", json_vector(pts)},
               {"kernel", matrix_to_json(vals)}};
  return emit(o, matrix_to_csv(vals, header, labels_of(pts)), j);
}

std::string cmd_ladder(const Options& o) {
  const BasisSpec basis = cylinder_basis(o.truncation, true);
  const GramData g = gram_matrix(basis, cylinder_chart(), QuadratureRule(1, 2), GramSource::closed_form);
  const OperatorMatrix a = ladder_lower(o.truncation);
  const OperatorMatrix ap = ladder_raise(g, o.truncation);
  const Eigen::MatrixXcd C = orthonormalize(g);
  const double resid =
      adjointness_residual(in_orthonormal_basis(ap.entries, g, C), in_orthonormal_basis(a.entries, g, C), o.buffer);
  const json j{{"N", o.truncation},
               {"lower", matrix_to_json(a.entries)},
               {"raise", matrix_to_json(ap.entries)},
               {"buffer", o.buffer},
               {"adjointness_residual", resid}};
  std::string csv = "# lower\n" + matrix_to_csv(a.entries, mode_header(o.truncation, "row\\col"), mode_rows(o.truncation));
  csv += "# raise\n" + matrix_to_csv(ap.entries, mode_header(o.truncation, "row\\col"), mode_rows(o.truncation));
  csv += "adjointness_residual," + format_double(resid) + "\n";
  return emit(o, csv, j);
}

std::string cmd_greens(const Options& o) {
  if (o.theta_points < 1) throw ValidationError("--theta-points must be positive");
  const cplx T = regularized_time(o.T_real, o.T_imag, o.epsilon);
  const Eigen::VectorXd thetas = periodic_grid(o.theta_points);
  std::ostringstream csv;
  csv << "theta,spectral,winding,abs_difference\n";
  json rows = json::array();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < thetas.size(); ++i) {
    const cplx s = greens_spectral(thetas[i], o.theta0, T, o.modes);
    const cplx w = greens_winding(thetas[i], o.theta0, T, o.windings);
    const double d = std::abs(s - w);
    worst = std::max(worst, d);
    csv << format_double(thetas[i]) << "," << csv_cell(s) << "," << csv_cell(w) << "," << format_double(d) << "\n";
    rows.push_back({{"theta", thetas[i]}, {"spectral", complex_to_json(s)}, {"winding", complex_to_json(w)},
                    {"abs_difference", d}});
  }
  const json j{{"T", complex_to_json(T)}, {"modes", o.modes}, {"windings", o.windings}, {"rows", rows},
               {"max_abs_difference", worst}};
  return emit(o, csv.str(), j);
}

std::string cmd_evolve(const Options& o) {
  HoloState init;
  if (!o.initial.empty()) {
    std::ifstream in(o.initial);
    if (!in) throw ValidationError("cannot read initial state " + o.initial);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ValidationError("initial state is not valid JSON: " + std::string(e.what()));
    }
    init = state_from_json(j);
  } else {
    init.N = o.truncation;
    init.coeffs = Eigen::VectorXcd::Zero(2 * o.truncation + 1);
    init.coeffs[index_of_mode(init.N, 0)] = 1.0;
    if (init.N >= 1) init.coeffs[index_of_mode(init.N, 1)] = 1.0;
  }
  const BasisSpec basis = cylinder_basis(init.N, true);
  const GramData g = gram_matrix(basis, cylinder_chart(), QuadratureRule(1, 2), GramSource::closed_form);
  const KernelRep K = reproducing_kernel(g, basis);

  PropagatorConfig cfg;
  cfg.H = hamiltonian_free(init.N);
  cfg.t = o.t;
  cfg.n_steps = o.steps;
  cfg.inner_order = o.quad_order;
  if (o.step_kernel == "gram") cfg.kernel = StepKernel::gram;

  std::ostringstream csv;
  csv << "step,time,norm,exact_error";
  for (int k = -init.N; k <= init.N; ++k) csv << ",c" << k;
  csv << "\n";
  json rows = json::array();
  const double dt = o.t / o.steps;
  evolve(
      init, cfg, K,
      [&](int s, const Eigen::VectorXcd& c) {
        const double time = dt * s;
        const HoloState ex = evolve_exact(init, cfg.H, time);
        const Eigen::VectorXcd d = c - ex.coeffs;
        const double norm = std::sqrt(std::max(0.0, inner_product(g, c, c).real()));
        const double err = std::sqrt(std::max(0.0, inner_product(g, d, d).real()));
        csv << s << "," << format_double(time) << "," << format_double(norm) << "," << format_double(err);
        for (Eigen::Index i = 0; i < c.size(); ++i) csv << "," << csv_cell(c[i]);
        csv << "\n";
        rows.push_back({{"step", s}, {"time", time}, {"norm", norm}, {"exact_error", err}, {"coeffs", json_vector(c)}});
      },
      exec_of(o));
  const json j{{"N", init.N}, {"t", o.t}, {"steps", o.steps}, {"series", rows}};
  return emit(o, csv.str(), j);
}

// Flattens a JSON config object into "--key value" arguments.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_number_integer()) {
      out.push_back(flag);
      out.push_back(std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      out.push_back(flag);
      out.push_back(format_double(value.get<double>()));
    } else if (value.is_string()) {
      out.push_back(flag);
      out.push_back(value.get<std::string>());
    } else {
      throw ValidationError("config key " + key + " must be a scalar");
    }
  }
  return out;
}

// Inserts config-file arguments right after the subcommand so that explicit
// flags, which come later, win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  std::size_t sub = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    if (sub == 0 && !args[i].empty() && args[i][0] != '-') sub = i;
  }
  if (path.empty() || sub == 0) return args;
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<long>(sub) + 1);
  for (auto& a : config_args(path)) out.push_back(a);
  out.insert(out.end(), args.begin() + static_cast<long>(sub) + 1, args.end());
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"holoq: holomorphic quantization on flat manifolds"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto add_common = [&](CLI::App* sub) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--format", o.common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", o.common.output, "Output path (default stdout)");
    sub->add_option("--config", o.common.config, "JSON file with default flag values");
    sub->add_flag("--serial", o.serial, "Use the serial reference kernels");
  };
  auto add_truncation = [&](CLI::App* sub) {
    sub->add_option("--truncation", o.truncation, "Truncation N (basis k = -N..N)")->check(CLI::Range(0, 64));
  };

  auto* gram = app.add_subcommand("gram", "Gram matrix of the cylinder basis");
  add_common(gram);
  add_truncation(gram);
  gram->add_flag("--normalized", o.normalized, "Normalized basis (default)");
  gram->add_flag("--raw", o.raw, "Raw basis e^{ikz} (N <= 6)");
  gram->add_option("--source", o.source, "closed or quadrature")->check(CLI::IsMember({"closed", "quadrature"}));
  gram->add_option("--quad-order", o.quad_order, "Gauss-Hermite nodes per real dimension")->check(CLI::Range(1, 512));

  auto* ortho = app.add_subcommand("orthonormalize", "Gram-Schmidt coefficients of the beta system");
  add_common(ortho);
  add_truncation(ortho);

  auto* kernel = app.add_subcommand("kernel", "Gram-inverse reproducing kernel on a grid");
  add_common(kernel);
  add_truncation(kernel);
  kernel->add_option("--grid", o.grid, "Grid points on [-pi, pi)")->check(CLI::Range(1, 4096));
  kernel->add_option("--imag", o.imag, "Imaginary part shared by all grid points");

  auto* heat = app.add_subcommand("heatkernel", "Heat-kernel integral formula on a grid");
  add_common(heat);
  add_truncation(heat);
  heat->add_option("--t", o.heat.t, "Heat time");
  heat->add_option("--modes", o.heat.M, "Mode cutoff M");
  heat->add_option("--x-nodes", o.heat.x_quad, "Trapezoid nodes on [-pi, pi)");
  heat->add_option("--x0", o.heat.x0, "Base point x0");
  heat->add_option("--grid", o.grid, "Grid points on [-pi, pi)")->check(CLI::Range(1, 4096));
  heat->add_option("--imag", o.imag, "Imaginary part shared by all grid points");
  heat->add_flag("--calibrate", o.calibrate, "Scale by c = K(0,0)/formula(0,0)");

  auto* ladder = app.add_subcommand("ladder", "Ladder operator matrices and adjointness residual");
  add_common(ladder);
  add_truncation(ladder);
  ladder->add_option("--buffer", o.buffer, "Boundary rows/columns discarded")->check(CLI::Range(0, 64));

  auto* greens = app.add_subcommand("greens", "Winding vs spectral Green function on S^1");
  add_common(greens);
  greens->add_option("--theta0", o.theta0, "Source angle");
  greens->add_option("--T-real", o.T_real, "Real part of T before regularization");
  greens->add_option("--T-imag", o.T_imag, "Imaginary part of T before regularization");
  greens->add_option("--epsilon", o.epsilon, "T -> T (1 - i epsilon)")->check(CLI::NonNegativeNumber);
  greens->add_option("--modes", o.modes, "Mode cutoff")->check(CLI::Range(0, 100000));
  greens->add_option("--windings", o.windings, "Winding cutoff")->check(CLI::Range(0, 100000));
  greens->add_option("--theta-points", o.theta_points, "Grid points on [-pi, pi)");

  auto* evolve_cmd = app.add_subcommand("evolve", "Iterated infinitesimal propagator for the free particle");
  add_common(evolve_cmd);
  add_truncation(evolve_cmd);
  evolve_cmd->add_option("--t", o.t, "Total time");
  evolve_cmd->add_option("--steps", o.steps, "Number of steps")->check(CLI::Range(1, 1000000));
  evolve_cmd->add_option("--quad-order", o.quad_order, "Inner step quadrature order")->check(CLI::Range(1, 512));
  evolve_cmd->add_option("--initial", o.initial, "Initial state JSON {N, coeffs}");
  evolve_cmd->add_option("--step-kernel", o.step_kernel, "ambient or gram")->check(CLI::IsMember({"ambient", "gram"}));

  auto* validate_cmd = app.add_subcommand("validate", "Run the acceptance suite");
  add_common(validate_cmd);

  std::vector<std::string> args;
  try {
    args = expand_config(args_in);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    std::string body;
    int code = kExitOk;
    if (*gram) body = cmd_gram(o);
    else if (*ortho) body = cmd_orthonormalize(o);
    else if (*kernel) body = cmd_kernel(o);
    else if (*heat) body = cmd_heatkernel(o);
    else if (*ladder) body = cmd_ladder(o);
    else if (*greens) body = cmd_greens(o);
    else if (*evolve_cmd) body = cmd_evolve(o);
    else if (*validate_cmd) {
      const auto results = run_acceptance(exec_of(o));
      json j = json::array();
      for (const auto& r : results) {
        j.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
        if (!r.pass) code = kExitValidation;
      }
      body = emit(o, format_results(results), j);
    }
    if (o.common.output.empty() || o.common.output == "-") out << body;
    else write_atomic(o.common.output, body);
    return code;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace holo

// Command-line driver: kernel evaluation, the verification suites, and the
// Fujita dichotomy sweep. All outputs are CSV/JSON with the resolved
// configuration (and its hash) in the header; identical config + seed
// reproduces byte-identical files.
//
// Exit codes: 0 pass, 1 assertion failure, 2 inconclusive, 64 usage.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynheat/bounds.hpp"
#include "dynheat/kernel.hpp"
#include "dynheat/parallel.hpp"
#include "dynheat/report.hpp"
#include "dynheat/residuals.hpp"
#include "dynheat/semigroup.hpp"
#include "dynheat/semilinear.hpp"

namespace dh = dynheat;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return kInf;
  return std::stod(s);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
  } else {
    std::ofstream f(out_path);
    f << text;
    if (text.empty() || text.back() != '\n') f << "\n";
  }
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, i / (n - 1.0));
  return v;
}

// --- eval ---

struct EvalArgs {
  int dim = 1;
  double rho = 0.0, a = 0.0, b = 0.0, t = 1.0;
  std::string csv_in;
  std::string out;
  bool cross_check = false;
};

int run_eval(const EvalArgs& args) {
  std::vector<dh::ReducedKernelQuery> queries;
  if (!args.csv_in.empty()) {
    std::ifstream f(args.csv_in);
    if (!f) {
      std::cerr << "eval: cannot open " << args.csv_in << "\n";
      return kExitUsage;
    }
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      if (line.find("dim") != std::string::npos) continue;  // header row
      dh::ReducedKernelQuery q;
      char comma;
      std::istringstream is(line);
      is >> q.dim >> comma >> q.rho >> comma >> q.a >> comma >> q.b >> comma >> q.t;
      if (!is) {
        std::cerr << "eval: malformed row: " << line << "\n";
        return kExitUsage;
      }
      queries.push_back(q);
    }
  } else {
    queries.push_back({args.dim, args.rho, args.a, args.b, args.t});
  }

  std::ostringstream cfg;
  cfg << "command=eval cross_check=" << args.cross_check << " queries=" << queries.size();
  std::vector<std::string> cols = {"dim", "rho", "a", "b", "t", "G", "gamma_diff", "H",
                                   "H_error", "region", "envelope_upper", "envelope_lower"};
  if (args.cross_check) {
    cols.push_back("H_direct");
    cols.push_back("H_zform");
    cols.push_back("cross_defect");
  }
  dh::CsvWriter csv({cfg.str()}, cols);

  for (const auto& q : queries) {
    try {
      q.validate();
    } catch (const std::exception& e) {
      std::cerr << "eval: invalid query: " << e.what() << "\n";
      return kExitUsage;
    }
    const dh::KernelValue h = dh::h_correction_auto(q);
    const double dipole = dh::gauss_dipole(q);
    std::vector<std::string> row = {
        std::to_string(q.dim),
        dh::format_double(q.rho),
        dh::format_double(q.a),
        dh::format_double(q.b),
        dh::format_double(q.t),
        dh::format_double(dipole + h.value),
        dh::format_double(dipole),
        dh::format_double(h.value),
        dh::format_double(h.quadrature_error),
        dh::region_name(dh::classify(q)),
        dh::format_double(dh::envelope_upper(q)),
        dh::format_double(dh::envelope_lower(q))};
    if (args.cross_check) {
      const dh::KernelValue hd = dh::h_correction(q);
      const dh::KernelValue hz = dh::h_correction_zform(q);
      row.push_back(dh::format_double(hd.value));
      row.push_back(dh::format_double(hz.value));
      row.push_back(dh::format_double(std::abs(hd.value - hz.value)));
    }
    csv.add_row_mixed(row);
  }
  emit(csv.str(), args.out);
  return kExitPass;
}

// --- verify ---

struct VerifyArgs {
  std::string suite;
  int dim = 1;
  long samples = 1000;
  std::uint64_t seed = 1;
  std::string out;
  bool emit_baseline = false;
  std::string q_str = "1";
  std::string r_str = "inf";
};

struct Assertion {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool leq = true;  // pass means value <= bound (>= when false)
  bool pass() const { return leq ? value <= bound : value >= bound; }
};

int finish(const std::string& suite, const VerifyArgs& args, std::vector<Assertion>& asserts,
           dh::JsonReport& report, const std::string& extra_json = "") {
  bool all = true;
  std::string worst;
  std::string items = "[";
  for (size_t i = 0; i < asserts.size(); ++i) {
    const Assertion& a = asserts[i];
    if (!a.pass() && all) {
      all = false;
      worst = a.name;
    }
    items += "{\"name\":\"" + a.name + "\",\"value\":" + dh::format_double(a.value) +
             ",\"bound\":" + dh::format_double(a.bound) + ",\"cmp\":\"" +
             (a.leq ? "<=" : ">=") + "\",\"pass\":" + (a.pass() ? "true" : "false") + "}";
    if (i + 1 < asserts.size()) items += ",";
  }
  items += "]";
  report.add("suite", suite);
  report.add_bool("pass", all);
  if (!all) report.add("worst_offender", worst);
  report.add_raw("assertions", items);
  if (!extra_json.empty()) report.add_raw("detail", extra_json);
  emit(report.str(), args.out);
  return all ? kExitPass : kExitFail;
}

int verify_mass(const VerifyArgs& args, dh::JsonReport& report) {
  dh::QuadratureSpec tight;
  tight.abs_tol = 1e-12;
  tight.rel_tol = 1e-12;
  std::vector<Assertion> asserts;
  for (double b : {0.0, 0.5, 2.0}) {
    for (double t : {0.1, 1.0, 10.0}) {
      const auto interior = dh::integrate_semi_infinite(
          [&](double a) {
            return dh::fundamental_solution({args.dim, 0.0, a, b, t}, tight).value;
          },
          0.0, tight);
      const double boundary = dh::fundamental_solution({args.dim, 0.0, 0.0, b, t}, tight).value;
      std::ostringstream name;
      name << "total_mass_defect(b=" << b << ",t=" << t << ")";
      asserts.push_back({name.str(), std::abs(interior.value + boundary - 1.0), 1e-8, true});

      const auto dip = dh::integrate_semi_infinite(
          [&](double a) { return dh::gauss_dipole({args.dim, 0.0, a, b, t}); }, 0.0, tight);
      std::ostringstream n2;
      n2 << "dipole_vs_erf(b=" << b << ",t=" << t << ")";
      asserts.push_back(
          {n2.str(), std::abs(dip.value - dh::interior_dipole_mass(b, t)), 1e-8, true});

      const auto hmass = dh::integrate_semi_infinite(
          [&](double a) {
            return dh::h_correction_auto({args.dim, 0.0, a, b, t}, tight).value;
          },
          0.0, tight);
      const double hbnd = dh::h_correction_auto({args.dim, 0.0, 0.0, b, t}, tight).value;
      std::ostringstream n3;
      n3 << "H_vs_erfc(b=" << b << ",t=" << t << ")";
      asserts.push_back(
          {n3.str(), std::abs(hmass.value + hbnd - dh::erfc(b / (2.0 * std::sqrt(t)))), 1e-8,
           true});
    }
  }
  return finish("mass", args, asserts, report);
}

int verify_symmetry(const VerifyArgs& args, dh::JsonReport& report) {
  std::mt19937_64 rng(args.seed);
  double worst = 0.0;
  for (long i = 0; i < args.samples; ++i) {
    dh::HalfSpacePoint x, y;
    x.tangential.resize(args.dim - 1);
    y.tangential.resize(args.dim - 1);
    for (int d = 0; d < args.dim - 1; ++d) {
      x.tangential[d] = 10.0 * (dh::uniform01(rng) - 0.5);
      y.tangential[d] = 10.0 * (dh::uniform01(rng) - 0.5);
    }
    x.height = 5.0 * dh::uniform01(rng);
    y.height = 5.0 * dh::uniform01(rng);
    const double t = 0.01 + 5.0 * dh::uniform01(rng);
    const double gxy = dh::fundamental_solution(x, y, t).value;
    const double gyx = dh::fundamental_solution(y, x, t).value;
    worst = std::max(worst, std::abs(gxy - gyx));
  }
  std::vector<Assertion> asserts = {{"swap_defect", worst, 0.0, true}};
  return finish("symmetry", args, asserts, report);
}

int verify_residuals(const VerifyArgs& args, dh::JsonReport& report, bool boundary) {
  std::vector<Assertion> asserts;
  const double step = 1e-3;
  for (double b : {0.0, 0.5}) {
    for (double t : {0.5, 1.0, 2.0}) {
      if (boundary) {
        std::ostringstream name;
        name << "boundary_residual(b=" << b << ",t=" << t << ")";
        asserts.push_back(
            {name.str(), dh::boundary_residual({1, 0.0, 0.0, b, t}, step), 1e-3, true});
      } else {
        std::ostringstream name;
        name << "pde_residual(a=1,b=" << b << ",t=" << t << ")";
        asserts.push_back(
            {name.str(), dh::interior_pde_residual({1, 0.0, 1.0, b, t}, step), 1e-3, true});
      }
    }
  }
  return finish(boundary ? "boundary-residual" : "pde-residual", args, asserts, report);
}

int verify_sandwich(const VerifyArgs& args, dh::JsonReport& report) {
  if (args.emit_baseline) {
    dh::QuerySampler s(args.dim, 20240901);
    const dh::SandwichReport rep = dh::sandwich_scan(s, 10000);
    report.add_raw("baseline_scan", rep.to_json());
    emit(report.str(), args.out);
    return kExitPass;
  }
  dh::QuerySampler s(args.dim, args.seed);
  const dh::SandwichReport rep = dh::sandwich_scan(s, args.samples);
  const dh::SandwichBaseline base = dh::sandwich_baseline(args.dim);
  std::vector<Assertion> asserts = {
      {"max_upper_ratio", rep.max_upper_ratio, 1.1 * base.max_upper_ratio, true},
      {"min_lower_ratio", rep.min_lower_ratio, base.min_lower_ratio / 1.1, false},
  };
  return finish("sandwich", args, asserts, report, rep.to_json());
}

int verify_compose(const VerifyArgs& args, dh::JsonReport& report) {
  dh::GridSpec g;
  g.truncation = 40.0;
  g.spacing = 0.01;
  dh::HalfSpacePoint x{{}, 1.0}, y{{}, 0.0};
  const double d1 = dh::compose_check(0.5, 0.5, y, x, g);
  dh::GridSpec g2 = g;
  g2.spacing = 0.005;
  const double d2 = dh::compose_check(0.5, 0.5, y, x, g2);
  std::vector<Assertion> asserts = {
      {"defect(h=0.01)", d1, 1e-4, true},
      {"refinement_gain(h->h/2)", d1 / d2, 3.0, false},
  };
  return finish("compose", args, asserts, report);
}

int verify_decay(const VerifyArgs& args, dh::JsonReport& report) {
  const double q = parse_exponent(args.q_str);
  const double r = parse_exponent(args.r_str);
  std::vector<Assertion> asserts;
  const double c1 = dh::decay_constant_baseline(args.dim);
  if (args.dim == 1) {
    dh::GridSpec g;
    g.truncation = 40.0;
    g.spacing = 0.025;
    dh::PairedField phi = dh::sample_bump(g, 1.5, 2.0, 1.0);
    phi.boundary = 0.5;
    const auto rows = dh::decay_suite(phi, q, r, logspace(0.1, 100.0, 7), g);
    for (const auto& row : rows) {
      std::ostringstream name;
      name << "ratio(t=" << row.t << ")";
      asserts.push_back({name.str(), row.ratio, c1, true});
    }
  } else {
    const auto rows = dh::decay_suite_boundary_delta(args.dim, q, r, logspace(1e-3, 1e3, 9));
    for (const auto& row : rows) {
      std::ostringstream name;
      name << "ratio(t=" << row.t << ")";
      asserts.push_back({name.str(), row.ratio, c1, true});
    }
  }
  return finish("decay", args, asserts, report);
}

int verify_contractivity(const VerifyArgs& args, dh::JsonReport& report) {
  dh::GridSpec g;
  g.truncation = 40.0;
  g.spacing = 0.025;
  std::mt19937_64 rng(args.seed);
  std::vector<Assertion> asserts;
  double worst[3] = {0.0, 0.0, 0.0};
  for (int k = 0; k < 20; ++k) {
    dh::PairedField f = dh::PairedField::zeros(g);
    for (int b = 0; b < 5; ++b) {
      const double c = 0.2 + 5.0 * dh::uniform01(rng);
      const double w = 0.3 + 1.7 * dh::uniform01(rng);
      const double amp = 2.0 * dh::uniform01(rng) - 1.0;
      for (int i = 0; i <= g.intervals(); ++i) {
        f.interior[i] += amp * dh::bump_mass1(g.node(i), c, w);
      }
    }
    f.boundary = 2.0 * dh::uniform01(rng) - 1.0;
    for (double t : {0.1, 1.0, 10.0}) {
      const dh::PairedField u = dh::apply(t, f, g);
      worst[0] = std::max(worst[0], dh::norm_l1(u, g) / dh::norm_l1(f, g));
      worst[1] = std::max(worst[1], dh::norm_l2(u, g) / dh::norm_l2(f, g));
      worst[2] = std::max(worst[2], dh::norm_linf(u, g) / dh::norm_linf(f, g));
    }
  }
  asserts.push_back({"L1_growth", worst[0], 1.0 + 1e-6, true});
  asserts.push_back({"L2_growth", worst[1], 1.0 + 1e-6, true});
  asserts.push_back({"Linf_growth", worst[2], 1.0 + 1e-6, true});
  return finish("contractivity", args, asserts, report);
}

int verify_lower_gaussian(const VerifyArgs& args, dh::JsonReport& report) {
  dh::GridSpec g;
  g.truncation = 40.0;
  g.spacing = 0.025;
  dh::PairedField phi = dh::sample_bump(g, 1.0, 1.5, 1.0);
  phi.boundary = 1.0;
  std::vector<Assertion> asserts;
  for (double t : {1.0, 10.0}) {
    const auto rep = dh::lower_gaussian_check(phi, t, {0.0, 0.5, 1.0, 2.0, 5.0}, g);
    std::ostringstream name;
    name << "min_ratio(t=" << t << ")";
    asserts.push_back({name.str(), rep.min_ratio, rep.c2, false});
  }
  return finish("lower-gaussian", args, asserts, report);
}

int verify_operator_norm(const VerifyArgs& args, dh::JsonReport& report) {
  const double q = parse_exponent(args.q_str);
  const double r = parse_exponent(args.r_str);
  auto times = logspace(1e-3, 1e-1, 7);
  for (double t : logspace(10.0, 1e3, 7)) times.push_back(t);
  const dh::OperatorNormFit fit = dh::operator_norm_fit(args.dim, q, r, times);
  const double d = (std::isinf(q) ? 0.0 : 1.0 / q) - (std::isinf(r) ? 0.0 : 1.0 / r);
  const double want_small = -(args.dim - 1.0) * d;
  const double want_large = -0.5 * args.dim * d;
  std::vector<Assertion> asserts = {
      {"small_t_slope_error", std::abs(fit.small_t_slope - want_small), 0.1, true},
      {"large_t_slope_error", std::abs(fit.large_t_slope - want_large), 0.1, true},
  };
  std::ostringstream detail;
  detail.precision(17);
  detail << "{\"small_t_slope\":" << fit.small_t_slope
         << ",\"large_t_slope\":" << fit.large_t_slope
         << ",\"fit_residual\":" << fit.fit_residual << "}";
  return finish("operator-norm", args, asserts, report, detail.str());
}

int run_verify(const VerifyArgs& args) {
  std::ostringstream cfg;
  cfg << "command=verify suite=" << args.suite << " dim=" << args.dim
      << " samples=" << args.samples << " seed=" << args.seed << " q=" << args.q_str
      << " r=" << args.r_str;
  dh::JsonReport report(cfg.str());
  if (args.suite == "mass") return verify_mass(args, report);
  if (args.suite == "symmetry") return verify_symmetry(args, report);
  if (args.suite == "pde-residual") return verify_residuals(args, report, false);
  if (args.suite == "boundary-residual") return verify_residuals(args, report, true);
  if (args.suite == "sandwich") return verify_sandwich(args, report);
  if (args.suite == "compose") return verify_compose(args, report);
  if (args.suite == "decay") return verify_decay(args, report);
  if (args.suite == "contractivity") return verify_contractivity(args, report);
  if (args.suite == "lower-gaussian") return verify_lower_gaussian(args, report);
  if (args.suite == "operator-norm") return verify_operator_norm(args, report);
  std::cerr << "verify: unknown suite '" << args.suite << "'\n";
  return kExitUsage;
}

// --- fujita ---

struct FujitaArgs {
  int dim = 1;
  std::vector<double> ps;
  std::vector<double> deltas;
  double t_max = 1e3;
  double threshold = 1e6;
  double grid_h = 0.05;
  double grid_l = 40.0;
  std::string out;
  std::string trace_dir;
};

int run_fujita(const FujitaArgs& args) {
  if (args.ps.empty() || args.deltas.empty()) {
    std::cerr << "fujita: --p and --delta lists must be nonempty\n";
    return kExitUsage;
  }
  if (args.dim != 1) {
    std::cerr << "fujita: the grid experiment is built for --dim 1\n";
    return kExitUsage;
  }
  dh::SemilinearConfig tmpl;
  tmpl.grid.dim = args.dim;
  tmpl.grid.truncation = args.grid_l;
  tmpl.grid.spacing = args.grid_h;
  tmpl.t_max = args.t_max;
  tmpl.blowup_threshold = args.threshold;

  std::vector<dh::EvolutionTrace> traces;
  const dh::FujitaTable table =
      dh::fujita_sweep(args.ps, args.deltas, tmpl, args.trace_dir.empty() ? nullptr : &traces);

  std::ostringstream cfg;
  cfg << "command=fujita dim=" << args.dim << " t_max=" << args.t_max
      << " threshold=" << args.threshold << " grid_h=" << args.grid_h
      << " grid_L=" << args.grid_l << " p_F=" << dh::fujita_exponent(args.dim);
  dh::CsvWriter csv({cfg.str()}, {"p", "delta", "outcome", "t_event", "certificate_n",
                                  "data_amplitude", "x_norm", "x_ball"});
  std::vector<std::string> inconclusive;
  for (const auto& c : table.cells) {
    csv.add_row_mixed({dh::format_double(c.p), dh::format_double(c.delta), c.outcome,
                       dh::format_double(c.t_event), std::to_string(c.certificate_n),
                       dh::format_double(c.data_amplitude), dh::format_double(c.x_norm),
                       dh::format_double(c.x_ball)});
    if (c.outcome == "inconclusive") {
      inconclusive.push_back("(p=" + dh::format_double(c.p) +
                             ",delta=" + dh::format_double(c.delta) + ")");
    }
  }
  emit(csv.str(), args.out);

  if (!args.trace_dir.empty()) {
    for (size_t i = 0; i < table.cells.size(); ++i) {
      const auto& c = table.cells[i];
      std::ostringstream path;
      path << args.trace_dir << "/trace_p" << c.p << "_d" << c.delta << ".csv";
      std::ostringstream tcfg;
      tcfg << "command=fujita-trace p=" << c.p << " delta=" << c.delta
           << " outcome=" << c.outcome;
      dh::CsvWriter tcsv({tcfg.str()}, {"t", "sup_norm", "l1_norm", "x_norm"});
      const auto& tr = traces[i];
      for (size_t k = 0; k < tr.times.size(); ++k) {
        tcsv.add_row({tr.times[k], tr.sup_norms[k], tr.l1_norms[k], tr.x_norm_series[k]});
      }
      tcsv.write_file(path.str());
    }
  }

  if (!inconclusive.empty()) {
    std::cerr << "fujita: inconclusive cells:";
    for (const auto& s : inconclusive) std::cerr << " " << s;
    std::cerr << "\n";
    return kExitInconclusive;
  }
  return table.dichotomy_ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"half-space heat kernel with a dynamical boundary condition"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate G, H, regions, envelopes");
  eval->add_option("--dim", eval_args.dim, "space dimension N");
  eval->add_option("--rho", eval_args.rho, "|x'-y'|");
  eval->add_option("--a", eval_args.a, "x_N");
  eval->add_option("--b", eval_args.b, "y_N");
  eval->add_option("--t", eval_args.t, "time");
  eval->add_option("--csv", eval_args.csv_in, "batch input: rows dim,rho,a,b,t");
  eval->add_option("--out", eval_args.out, "output path (default stdout)");
  eval->add_flag("--cross-check", eval_args.cross_check, "add the H direct-vs-zform columns");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify
      ->add_option("suite", verify_args.suite,
                   "mass|symmetry|pde-residual|boundary-residual|sandwich|compose|decay|"
                   "contractivity|lower-gaussian|operator-norm")
      ->required();
  verify->add_option("--dim", verify_args.dim, "space dimension N");
  verify->add_option("--samples", verify_args.samples, "sample count");
  verify->add_option("--seed", verify_args.seed, "RNG seed");
  verify->add_option("--q", verify_args.q_str, "source exponent (number or inf)");
  verify->add_option("--r", verify_args.r_str, "target exponent (number or inf)");
  verify->add_option("--out", verify_args.out, "output path (default stdout)");
  verify->add_flag("--emit-baseline", verify_args.emit_baseline,
                   "print the committed-baseline scan instead of checking");

  FujitaArgs fujita_args;
  CLI::App* fujita = app.add_subcommand("fujita", "dichotomy sweep around p_F");
  fujita->add_option("--dim", fujita_args.dim, "space dimension N");
  fujita->add_option("--p", fujita_args.ps, "nonlinearity exponents")->delimiter(',');
  fujita->add_option("--delta", fujita_args.deltas, "data sizes")->delimiter(',');
  fujita->add_option("--t-max", fujita_args.t_max, "time budget");
  fujita->add_option("--threshold", fujita_args.threshold, "sup-norm blow-up threshold");
  fujita->add_option("--grid-h", fujita_args.grid_h, "grid spacing");
  fujita->add_option("--grid-L", fujita_args.grid_l, "grid truncation");
  fujita->add_option("--out", fujita_args.out, "table path (default stdout)");
  fujita->add_option("--trace-out", fujita_args.trace_dir, "directory for per-cell traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (eval->parsed()) return run_eval(eval_args);
    if (verify->parsed()) return run_verify(verify_args);
    if (fujita->parsed()) return run_fujita(fujita_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}

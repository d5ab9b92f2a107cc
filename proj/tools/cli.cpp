#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qht/qht.hpp"

namespace qht::cli {

namespace {

using io::json;

struct Grid {
  double a = 0.0;
  double b = 1.0;
  int points = 101;

  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = i + 1 == points ? b : a + (b - a) * i / (points - 1);
    return v;
  }
  json to_json() const { return {a, b, points}; }
};

Grid parse_grid(const std::string& text, const char* flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
  Grid g;
  try {
    if (parts.size() != 3) throw std::invalid_argument("");
    std::size_t used = 0;
    g.a = std::stod(parts[0]);
    g.b = std::stod(parts[1]);
    g.points = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ValidationError(std::string(flag) + " expects a,b,N, got \"" + text + "\"");
  }
  if (g.points < 2 || !(g.b > g.a)) throw ValidationError(std::string(flag) + " needs a < b and N >= 2");
  return g;
}

struct Common {
  bool json = false;
  std::uint64_t seed = 1;
  std::string out = ".";
};

struct Context {
  Common common;
  std::ostream& out;

  std::string path(const std::string& name) const {
    std::filesystem::create_directories(common.out);
    return (std::filesystem::path(common.out) / name).string();
  }

  void emit(const json& summary) const {
    if (common.json) {
      out << summary.dump(2) << "\n";
      return;
    }
    for (const auto& [key, value] : summary.items()) {
      out << key << ": ";
      if (value.is_number_float())
        out << io::format_double(value.get<double>());
      else if (value.is_string())
        out << value.get<std::string>();
      else
        out << value.dump();
      out << "\n";
    }
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.json, "Print a machine-readable JSON summary");
  sub->add_option("--seed", c.seed, "Seed for randomly generated instances")->capture_default_str();
  sub->add_option("--out", c.out, "Directory for CSV/JSON artifacts")->capture_default_str();
}

json base_config(const char* command, const Common& c) { return {{"command", command}, {"seed", c.seed}}; }

std::vector<double> evaluate_on(const std::vector<double>& grid, const std::function<double(double)>& f) {
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = f(grid[i]); });
  return out;
}

/// Chernoff, Stein and Hoeffding summary of e sampled on a grid covering [0, 1].
json exponent_summary(const Grid& g, const std::vector<double>& e, const std::vector<double>& r_list) {
  json j;
  if (g.a > 0.0 || g.b < 1.0 || g.points < 33) return j;
  const EntropicFunction ef(g.a, g.b, e);
  const ChernoffResult c = chernoff_exponent(ef);
  j["chernoff"] = {{"exponent", c.exponent}, {"argmin", c.argmin}};
  j["stein"] = stein_exponent(ef);
  json h = json::array();
  for (double r : r_list) h.push_back({{"r", r}, {"exponent", hoeffding_exponent(ef, r)}});
  if (!r_list.empty()) j["hoeffding"] = h;
  return j;
}

// ---------------------------------------------------------------------------

struct SystemSource {
  std::string system;
  std::string open;
  int random_dim = 0;
  bool tri = false;

  void add(CLI::App* sub) {
    sub->add_option("--system", system, "System JSON {H, omega, tri_basis?}")->check(CLI::ExistingFile);
    sub->add_option("--open", open, "Open-system spec JSON")->check(CLI::ExistingFile);
    sub->add_option("--random-dim", random_dim, "Use a random system of this dimension");
    sub->add_flag("--tri", tri, "Make the random system time-reversal invariant");
  }

  json to_json() const { return {{"system", system}, {"open", open}, {"random_dim", random_dim}, {"tri", tri}}; }

  FiniteSystem load(std::uint64_t seed) const {
    const int given = !system.empty() + !open.empty() + (random_dim > 0);
    if (given != 1) throw ValidationError("give exactly one of --system, --open, --random-dim");
    if (!system.empty()) return io::system_from_json(io::read_json_file(system));
    if (!open.empty()) return build_open_system(io::open_spec_from_json(io::read_json_file(open))).system;
    Rng rng(seed);
    if (tri) {
      const HermitianOperator h = random_real_symmetric(rng, random_dim);
      return FiniteSystem(h, PositiveFunctional(random_real_density(rng, random_dim)), Matrix::Identity(random_dim, random_dim));
    }
    const HermitianOperator h = random_hermitian(rng, random_dim);
    return FiniteSystem(h, PositiveFunctional(random_density(rng, random_dim)));
  }
};

// ---------------------------------------------------------------------------

struct HtOptions {
  std::string nu, omega, test, s_grid = "0,1,11";
  int random_dim = 0;
};

void run_ht(const Context& ctx, const HtOptions& o) {
  const Grid g = parse_grid(o.s_grid, "--s-grid");
  std::optional<PositiveFunctional> nu, omega;
  if (o.random_dim > 0) {
    if (!o.nu.empty() || !o.omega.empty()) throw ValidationError("--random-dim excludes --nu/--omega");
    Rng rng(ctx.common.seed);
    nu.emplace(random_density(rng, o.random_dim));
    omega.emplace(random_density(rng, o.random_dim));
  } else {
    if (o.nu.empty() || o.omega.empty()) throw ValidationError("ht needs --nu and --omega (or --random-dim)");
    nu.emplace(io::functional_from_json(io::read_json_file(o.nu)));
    omega.emplace(io::functional_from_json(io::read_json_file(o.omega)));
  }
  std::optional<TestProjection> test;
  if (!o.test.empty()) test.emplace(io::hermitian_from_json(io::read_json_file(o.test)));
  const TestReport report = make_report(*nu, *omega, g.values(), test);

  json config = base_config("ht", ctx.common);
  config.update({{"nu", o.nu}, {"omega", o.omega}, {"test", o.test}, {"random_dim", o.random_dim}, {"s_grid", g.to_json()}});
  io::CsvWriter csv(ctx.path("ht_bounds.csv"), {"s", "chernoff_upper"}, config);
  for (const auto& [s, v] : report.upper_bounds) csv.row({s, v});
  json summary = io::report_to_json(report);
  summary["config_hash"] = io::config_hash(config);
  std::ofstream(ctx.path("ht_report.json")) << summary.dump(2) << "\n";
  ctx.emit(summary);
}

// ---------------------------------------------------------------------------

struct ExponentOptions {
  std::string e_csv, theta_grid;
  std::vector<double> r_list;
};

void run_exponents(const Context& ctx, const ExponentOptions& o) {
  const EntropicFunction ef = io::read_entropic_csv(o.e_csv);
  Grid theta;
  if (!o.theta_grid.empty()) {
    theta = parse_grid(o.theta_grid, "--theta-grid");
  } else {
    const double left = (ef.value(1) - ef.value(0)) / ef.h();
    const double right = (ef.value(ef.n()) - ef.value(ef.n() - 1)) / ef.h();
    const double pad = 0.1 * std::max(1.0, right - left);
    theta = {left - pad, right + pad, 401};
  }
  const RateFunction rate = legendre(ef, theta.values());

  json config = base_config("exponents", ctx.common);
  config.update({{"e", o.e_csv}, {"theta_grid", theta.to_json()}, {"r_list", o.r_list}});
  io::CsvWriter csv(ctx.path("rate.csv"), {"theta", "phi"}, config);
  for (std::size_t i = 0; i < rate.theta().size(); ++i) csv.row({rate.theta()[i], rate.phi()[i]});

  const ChernoffResult c = chernoff_exponent(ef);
  json hoeffding = json::array();
  for (double r : o.r_list) hoeffding.push_back({{"r", r}, {"exponent", hoeffding_exponent(ef, r)}});
  const json summary{{"chernoff", {{"exponent", c.exponent}, {"argmin", c.argmin}}},
                     {"stein", stein_exponent(ef)},
                     {"hoeffding", hoeffding},
                     {"rate_csv", csv.path()},
                     {"config_hash", io::config_hash(config)}};
  std::ofstream(ctx.path("exponents.json")) << summary.dump(2) << "\n";
  ctx.emit(summary);
}

// ---------------------------------------------------------------------------

struct FcsOptions {
  SystemSource source;
  std::vector<double> t_list{1.0};
  std::string s_grid = "0,1,101";
};

void run_fcs(const Context& ctx, const FcsOptions& o) {
  const Grid g = parse_grid(o.s_grid, "--s-grid");
  const FiniteSystem sys = o.source.load(ctx.common.seed);
  json config = base_config("fcs", ctx.common);
  config.update({{"source", o.source.to_json()}, {"t_list", o.t_list}, {"s_grid", g.to_json()}});

  io::CsvWriter atoms(ctx.path("fcs_atoms.csv"), {"t", "phi", "weight"}, config);
  json rows = json::array();
  const std::vector<double> s = g.values();
  for (std::size_t i = 0; i < o.t_list.size(); ++i) {
    const double t = o.t_list[i];
    if (!(t > 0)) throw ValidationError("--t-list entries must be positive");
    const FcsDistribution d = fcs_distribution(sys, t);
    for (const Atom& a : d.measure.atoms()) atoms.row({t, a.location, a.weight});
    const std::vector<double> e = evaluate_on(s, [&](double x) { return renyi_functional(sys, t, x) / t; });
    const std::string e_path = ctx.path("fcs_e_" + std::to_string(i) + ".csv");
    io::write_entropic_csv(e_path, s, e, config);
    rows.push_back({{"t", t},
                    {"atoms", d.measure.size()},
                    {"mass_deviation", d.mass_deviation},
                    {"mean", d.measure.mean()},
                    {"variance", d.measure.variance()},
                    {"mean_entropy_production", mean_entropy_production(sys, t)},
                    {"e_csv", e_path}});
  }
  ctx.emit({{"times", rows}, {"atoms_csv", atoms.path()}, {"config_hash", io::config_hash(config)}});
}

// ---------------------------------------------------------------------------

struct OpenOptions {
  std::string spec;
  std::vector<double> t_list{0.5, 1.0, 2.0};
};

void run_open(const Context& ctx, const OpenOptions& o) {
  const OpenSystemSpec spec = io::open_spec_from_json(io::read_json_file(o.spec));
  const OpenSystem os = build_open_system(spec);
  const HermitianOperator sigma = entropy_flux(spec, os);
  const PositiveFunctional& omega = os.system.state();
  json config = base_config("open", ctx.common);
  config.update({{"spec", o.spec}, {"t_list", o.t_list}});

  std::vector<std::string> header{"t", "entropy_change", "flux_integral"};
  for (std::size_t j = 0; j < spec.reservoirs.size(); ++j) {
    const std::string k = std::to_string(j);
    for (const char* name : {"energy_change_", "heat_integral_", "charge_change_", "charge_integral_"}) header.push_back(name + k);
  }
  io::CsvWriter csv(ctx.path("open_balance.csv"), header, config);
  double residual = 0.0;
  for (double t : o.t_list) {
    if (!(t > 0)) throw ValidationError("--t-list entries must be positive");
    const double change = t * mean_entropy_production(os.system, t);
    const double integral = expectation_integral(os.system, sigma, t);
    residual = std::max(residual, std::abs(change - integral));
    std::vector<double> row{t, change, integral};
    for (std::size_t j = 0; j < spec.reservoirs.size(); ++j) {
      const double de = omega(heisenberg(os.system, os.h_res[j], t)) - omega(os.h_res[j]);
      const double he = -expectation_integral(os.system, os.heat_flux[j], t);
      const double dn = omega(heisenberg(os.system, os.n_res[j], t)) - omega(os.n_res[j]);
      const double hn = -expectation_integral(os.system, os.charge_flux[j], t);
      residual = std::max({residual, std::abs(de - he), std::abs(dn - hn)});
      row.insert(row.end(), {de, he, dn, hn});
    }
    csv.row(row);
  }
  ctx.emit({{"balance_csv", csv.path()}, {"max_balance_residual", residual}, {"config_hash", io::config_hash(config)}});
}

// ---------------------------------------------------------------------------

struct IidOptions {
  std::string nu, omega, s_grid = "0,1,201";
  std::vector<int> n_list{1, 2, 3, 4, 5, 6};
  int random_dim = 0;
};

void run_iid(const Context& ctx, const IidOptions& o) {
  const Grid g = parse_grid(o.s_grid, "--s-grid");
  std::optional<PositiveFunctional> nu, omega;
  if (o.random_dim > 0) {
    Rng rng(ctx.common.seed);
    nu.emplace(random_density(rng, o.random_dim));
    omega.emplace(random_density(rng, o.random_dim));
  } else {
    if (o.nu.empty() || o.omega.empty()) throw ValidationError("iid needs --nu and --omega (or --random-dim)");
    nu.emplace(io::functional_from_json(io::read_json_file(o.nu)));
    omega.emplace(io::functional_from_json(io::read_json_file(o.omega)));
  }
  json config = base_config("iid", ctx.common);
  config.update({{"nu", o.nu}, {"omega", o.omega}, {"random_dim", o.random_dim}, {"n_list", o.n_list}, {"s_grid", g.to_json()}});

  const std::vector<double> s = g.values();
  const std::vector<double> e = evaluate_on(s, [&](double x) { return renyi_relative_entropy(*nu, *omega, x); });
  io::write_entropic_csv(ctx.path("iid_e.csv"), s, e, config);
  io::CsvWriter csv(ctx.path("iid.csv"), {"n", "min_error", "rate"}, config);
  for (int n : o.n_list) {
    const auto [nu_n, omega_n] = iid_pair(*nu, *omega, n);
    const double d = optimal_test(nu_n, omega_n).min_error;
    csv.row({static_cast<double>(n), d, std::log(d) / n});
  }
  json summary = exponent_summary(g, e, {});
  summary["table_csv"] = csv.path();
  summary["config_hash"] = io::config_hash(config);
  ctx.emit(summary);
}

// ---------------------------------------------------------------------------

struct SpinOptions {
  std::string phi, psi, s_grid = "0,1,101";
  std::vector<int> n_list{1, 2, 3};
  std::vector<double> fermion_norms, fermion_betas;
};

void run_spin(const Context& ctx, const SpinOptions& o) {
  const Grid g = parse_grid(o.s_grid, "--s-grid");
  json config = base_config("spin", ctx.common);
  config.update({{"phi", o.phi}, {"psi", o.psi}, {"n_list", o.n_list}, {"s_grid", g.to_json()},
                 {"fermion_norms", o.fermion_norms}, {"fermion_betas", o.fermion_betas}});
  json summary;
  if (!o.fermion_betas.empty()) summary["spin_fermion_sigma2"] = spin_fermion_sigma2(o.fermion_norms, o.fermion_betas);
  if (!o.phi.empty() || !o.psi.empty()) {
    if (o.phi.empty() || o.psi.empty()) throw ValidationError("spin needs both --phi and --psi");
    const Interaction phi = io::interaction_from_json(io::read_json_file(o.phi));
    const Interaction psi = io::interaction_from_json(io::read_json_file(o.psi));
    const std::vector<double> s = g.values();
    json rows = json::array();
    for (int n : o.n_list) {
      const PositiveFunctional nu = gibbs_state(phi, n);
      const PositiveFunctional omega = gibbs_state(psi, n);
      const double volume = 2 * n + 1;
      const std::vector<double> e = evaluate_on(s, [&](double x) { return renyi_relative_entropy(nu, omega, x) / volume; });
      const std::string path = ctx.path("spin_e_n" + std::to_string(n) + ".csv");
      io::write_entropic_csv(path, s, e, config);
      json row{{"n", n},
               {"pressure_phi", pressure(phi, n)},
               {"pressure_psi", pressure(psi, n)},
               {"triple_norm_difference", triple_norm(difference(phi, psi), n)},
               {"e_csv", path}};
      row.update(exponent_summary(g, e, {}));
      rows.push_back(row);
    }
    summary["boxes"] = rows;
  }
  if (summary.is_null()) throw ValidationError("spin needs --phi/--psi or --fermion-betas");
  summary["config_hash"] = io::config_hash(config);
  ctx.emit(summary);
}

// ---------------------------------------------------------------------------

struct CarShiftOptions {
  std::string a, b, s_grid = "0,1,101";
  double beta_a = 1.0, mu_a = 0.0, beta_b = 2.0, mu_b = 0.0;
  std::vector<int> n_list{64, 128, 256};
  std::vector<double> r_list;
};

void run_carshift(const Context& ctx, const CarShiftOptions& o) {
  const Grid g = parse_grid(o.s_grid, "--s-grid");
  json config = base_config("carshift", ctx.common);
  config.update({{"a", o.a}, {"b", o.b}, {"s_grid", g.to_json()}, {"r_list", o.r_list}});
  const std::vector<double> s = g.values();
  std::vector<double> e;
  json summary;
  if (!o.a.empty() || !o.b.empty()) {
    if (o.a.empty() || o.b.empty()) throw ValidationError("carshift needs both --a and --b");
    const QuasiFreePair pair(io::hermitian_from_json(io::read_json_file(o.a)),
                             io::hermitian_from_json(io::read_json_file(o.b)));
    e = evaluate_on(s, [&](double x) { return pair.renyi(x); });
  } else {
    config.update({{"beta_a", o.beta_a}, {"mu_a", o.mu_a}, {"beta_b", o.beta_b}, {"mu_b", o.mu_b}, {"n_list", o.n_list}});
    const auto sym_a = [&](double k) { return fermi_dirac(-std::cos(k), o.beta_a, o.mu_a); };
    const auto sym_b = [&](double k) { return fermi_dirac(-std::cos(k), o.beta_b, o.mu_b); };
    e = evaluate_on(s, [&](double x) { return szego_limit(sym_a, sym_b, x); });
    io::CsvWriter csv(ctx.path("carshift_sections.csv"), {"n", "s", "e_n"}, config);
    for (int n : o.n_list) {
      const QuasiFreePair pair(toeplitz_section(sym_a, n), toeplitz_section(sym_b, n));
      const std::vector<double> en = evaluate_on(s, [&](double x) { return pair.renyi(x) / n; });
      for (std::size_t i = 0; i < s.size(); ++i) csv.row({static_cast<double>(n), s[i], en[i]});
    }
    summary["sections_csv"] = csv.path();
  }
  io::write_entropic_csv(ctx.path("carshift_e.csv"), s, e, config);
  summary.update(exponent_summary(g, e, o.r_list));
  summary["e_csv"] = ctx.path("carshift_e.csv");
  summary["config_hash"] = io::config_hash(config);
  ctx.emit(summary);
}

// ---------------------------------------------------------------------------

struct EbbOptions {
  std::string spec, scattering, s_grid = "0,1,101";
  double quad_tol = 1e-8;
  int write_scattering = 0;
};

void run_ebb(const Context& ctx, const EbbOptions& o) {
  const Grid g = parse_grid(o.s_grid, "--s-grid");
  if (!(o.quad_tol > 0)) throw ValidationError("--quad-tol must be positive");
  const EbbSpec spec = io::ebb_spec_from_json(io::read_json_file(o.spec));
  json config = base_config("ebb", ctx.common);
  config.update({{"spec", io::ebb_spec_to_json(spec)}, {"scattering", o.scattering}, {"s_grid", g.to_json()},
                 {"quad_tol", o.quad_tol}});

  ScatteringFn scattering = [&spec](double k) { return ebb_scattering(spec, k); };
  if (!o.scattering.empty()) {
    io::ScatteringTable table = io::read_scattering_csv(o.scattering);
    scattering = interpolate_scattering(std::move(table.k), std::move(table.s));
  }
  json summary;
  if (o.write_scattering > 0) {
    io::ScatteringTable table;
    for (int i = 1; i <= o.write_scattering; ++i) {
      const double k = std::numbers::pi * i / (o.write_scattering + 1);
      table.k.push_back(k);
      table.s.push_back(ebb_scattering(spec, k));
    }
    io::write_scattering_csv(ctx.path("ebb_scattering.csv"), table, config);
    summary["scattering_csv"] = ctx.path("ebb_scattering.csv");
  }
  const std::vector<double> s = g.values();
  const std::vector<double> e = evaluate_on(s, [&](double x) { return ebb_e(spec, x, scattering, o.quad_tol); });
  io::write_entropic_csv(ctx.path("ebb_e.csv"), s, e, config);

  const LandauerResult lb = landauer(spec, scattering, o.quad_tol);
  const double h = 1e-4;
  const double tight = o.quad_tol * 1e-3;
  const double derivative = (ebb_e(spec, 1 + h, scattering, tight) - ebb_e(spec, 1 - h, scattering, tight)) / (2 * h);
  summary.update({{"e_csv", ctx.path("ebb_e.csv")},
                  {"sigma_plus", lb.sigma_plus},
                  {"e_prime_1", derivative},
                  {"heat_flux", lb.heat_flux},
                  {"charge_flux", lb.charge_flux},
                  {"consistency", lb.consistency}});
  summary.update(exponent_summary(g, e, {}));
  summary["config_hash"] = io::config_hash(config);
  ctx.emit(summary);
}

// ---------------------------------------------------------------------------

struct XyOptions {
  std::string spec_file, s_grid = "0,1,101";
  XySpec spec;
  std::vector<int> m_list{128, 256, 512};
  double finite_s = 0.5;
  double t_ratio = 0.25;
  double quad_tol = 1e-10;
};

void run_xy(const Context& ctx, XyOptions o, const CLI::App& sub) {
  const Grid g = parse_grid(o.s_grid, "--s-grid");
  XySpec spec = o.spec;
  if (!o.spec_file.empty()) {
    // flags given explicitly on the command line override the file
    const XySpec file = io::xy_spec_from_json(io::read_json_file(o.spec_file));
    const auto keep = [&](const char* flag, auto& field, const auto& from_file) {
      if (sub.count(flag) == 0) field = from_file;
    };
    keep("--J", spec.J, file.J);
    keep("--lambda", spec.lambda, file.lambda);
    keep("--betaL", spec.beta_left, file.beta_left);
    keep("--betaR", spec.beta_right, file.beta_right);
    keep("--beta", spec.beta, file.beta);
    keep("--n", spec.n, file.n);
  }
  if (!(o.t_ratio > 0)) throw ValidationError("--t-ratio must be positive");
  if (o.m_list.empty()) throw ValidationError("--m-list must not be empty");
  spec.m = *std::max_element(o.m_list.begin(), o.m_list.end());
  spec.validate();
  json config = base_config("xy", ctx.common);
  config.update({{"spec", io::xy_spec_to_json(spec)}, {"m_list", o.m_list}, {"s_grid", g.to_json()},
                 {"finite_s", o.finite_s}, {"t_ratio", o.t_ratio}, {"quad_tol", o.quad_tol}});

  const std::vector<double> s = g.values();
  const std::vector<double> e = evaluate_on(s, [&](double x) { return xy_e(spec, x, o.quad_tol); });
  io::write_entropic_csv(ctx.path("xy_closed.csv"), s, e, config);

  const double closed = xy_e(spec, o.finite_s, o.quad_tol);
  std::vector<double> finite(o.m_list.size());
  parallel_for(o.m_list.size(), [&](std::size_t i) {
    XySpec sm = spec;
    sm.m = o.m_list[i];
    const double t = o.t_ratio * sm.m;
    finite[i] = xy_finite_renyi(sm, t, o.finite_s) / t;
  });
  io::CsvWriter csv(ctx.path("xy_finite.csv"), {"m", "t", "e_finite", "e_closed", "deviation"}, config);
  json rows = json::array();
  bool improving = true;
  for (std::size_t i = 0; i < o.m_list.size(); ++i) {
    const double dev = std::abs(finite[i] - closed);
    if (i > 0 && dev >= std::abs(finite[i - 1] - closed)) improving = false;
    csv.row({static_cast<double>(o.m_list[i]), o.t_ratio * o.m_list[i], finite[i], closed, dev});
    rows.push_back({{"m", o.m_list[i]}, {"e_finite", finite[i]}, {"deviation", dev}});
  }
  json summary{{"closed_csv", ctx.path("xy_closed.csv")},
               {"finite_csv", csv.path()},
               {"e_closed", closed},
               {"sigma_plus", xy_sigma(spec, o.quad_tol)},
               {"finite", rows},
               {"deviation_decreasing", improving}};
  summary.update(exponent_summary(g, e, {}));
  summary["config_hash"] = io::config_hash(config);
  ctx.emit(summary);
}

// ---------------------------------------------------------------------------

struct ArrowOptions {
  SystemSource source;
  std::vector<double> t_list{0.5, 1.0, 2.0, 4.0};
};

void run_arrow(const Context& ctx, const ArrowOptions& o) {
  const FiniteSystem sys = o.source.load(ctx.common.seed);
  for (double t : o.t_list)
    if (!(t > 0)) throw ValidationError("--t-list entries must be positive");
  json config = base_config("arrow", ctx.common);
  config.update({{"source", o.source.to_json()}, {"t_list", o.t_list}});
  const std::vector<ArrowPoint> points = arrow_exponent_estimate(sys, o.t_list);
  io::CsvWriter csv(ctx.path("arrow.csv"),
                    {"t", "min_error", "min_error_shifted", "exponent", "lower_rate", "renyi_rate", "lower_bound",
                     "upper_bound", "argmin_s"},
                    config);
  bool sandwiched = true;
  for (const ArrowPoint& p : points) {
    csv.row({p.t, p.min_error, p.min_error_shifted, p.exponent, p.lower_rate, p.renyi_rate, p.lower_bound, p.upper_bound,
             p.argmin_s});
    if (!(p.lower_bound <= p.min_error + 1e-12 && p.min_error <= p.upper_bound + 1e-12)) sandwiched = false;
  }
  ctx.emit({{"table_csv", csv.path()}, {"bounds_hold", sandwiched}, {"config_hash", io::config_hash(config)}});
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum hypothesis testing and entropic fluctuations", "qht"};
  app.set_version_flag("--version", io::version());
  app.require_subcommand(1);

  Common common;
  HtOptions ht;
  ExponentOptions ex;
  FcsOptions fcs;
  OpenOptions open;
  IidOptions iid;
  SpinOptions spin;
  CarShiftOptions car;
  EbbOptions ebb;
  XyOptions xy;
  ArrowOptions arrow;

  CLI::App* c_ht = app.add_subcommand("ht", "Optimal test, error probabilities and Chernoff bounds for two states");
  c_ht->add_option("--nu", ht.nu, "Matrix JSON of the first state")->check(CLI::ExistingFile);
  c_ht->add_option("--omega", ht.omega, "Matrix JSON of the second state")->check(CLI::ExistingFile);
  c_ht->add_option("--test", ht.test, "Matrix JSON of a projection to evaluate instead of the optimal test")
      ->check(CLI::ExistingFile);
  c_ht->add_option("--random-dim", ht.random_dim, "Use a random pair of this dimension");
  c_ht->add_option("--s-grid", ht.s_grid, "a,b,N grid for Chernoff bounds")->capture_default_str();

  CLI::App* c_ex = app.add_subcommand("exponents", "Chernoff, Stein and Hoeffding exponents of an entropic function");
  c_ex->add_option("--e", ex.e_csv, "CSV with columns s,e on a uniform grid")->required()->check(CLI::ExistingFile);
  c_ex->add_option("--r-list", ex.r_list, "Hoeffding rates")->delimiter(',');
  c_ex->add_option("--theta-grid", ex.theta_grid, "a,b,N grid for the rate function");

  CLI::App* c_fcs = app.add_subcommand("fcs", "Full counting statistics and Renyi functionals of a finite system");
  fcs.source.add(c_fcs);
  c_fcs->add_option("--t-list", fcs.t_list, "Times")->delimiter(',');
  c_fcs->add_option("--s-grid", fcs.s_grid, "a,b,N grid for e_t(s)/t")->capture_default_str();

  CLI::App* c_open = app.add_subcommand("open", "Entropy and energy balance of an open system");
  c_open->add_option("--spec", open.spec, "Open-system spec JSON")->required()->check(CLI::ExistingFile);
  c_open->add_option("--t-list", open.t_list, "Times")->delimiter(',');

  CLI::App* c_iid = app.add_subcommand("iid", "Minimal error of n i.i.d. copies against the Chernoff exponent");
  c_iid->add_option("--nu", iid.nu, "Matrix JSON of the first state")->check(CLI::ExistingFile);
  c_iid->add_option("--omega", iid.omega, "Matrix JSON of the second state")->check(CLI::ExistingFile);
  c_iid->add_option("--random-dim", iid.random_dim, "Use a random pair of this dimension");
  c_iid->add_option("--n-list", iid.n_list, "Numbers of copies")->delimiter(',');
  c_iid->add_option("--s-grid", iid.s_grid, "a,b,N grid for e(s)")->capture_default_str();

  CLI::App* c_spin = app.add_subcommand("spin", "Renyi densities of spin-chain Gibbs states; spin-fermion entropy production");
  c_spin->add_option("--phi", spin.phi, "Interaction JSON of the first Gibbs state")->check(CLI::ExistingFile);
  c_spin->add_option("--psi", spin.psi, "Interaction JSON of the second Gibbs state")->check(CLI::ExistingFile);
  c_spin->add_option("--n-list", spin.n_list, "Box half-widths")->delimiter(',');
  c_spin->add_option("--s-grid", spin.s_grid, "a,b,N grid")->capture_default_str();
  c_spin->add_option("--fermion-norms", spin.fermion_norms, "Squared coupling norms of the fermionic reservoirs")
      ->delimiter(',');
  c_spin->add_option("--fermion-betas", spin.fermion_betas, "Inverse temperatures of the fermionic reservoirs")
      ->delimiter(',');

  CLI::App* c_car = app.add_subcommand("carshift", "Renyi entropies of quasi-free CAR state pairs");
  c_car->add_option("--a", car.a, "Matrix JSON of the first one-particle density")->check(CLI::ExistingFile);
  c_car->add_option("--b", car.b, "Matrix JSON of the second one-particle density")->check(CLI::ExistingFile);
  c_car->add_option("--beta-a", car.beta_a, "Inverse temperature of the first translation-invariant state")
      ->capture_default_str();
  c_car->add_option("--mu-a", car.mu_a, "Chemical potential of the first state")->capture_default_str();
  c_car->add_option("--beta-b", car.beta_b, "Inverse temperature of the second state")->capture_default_str();
  c_car->add_option("--mu-b", car.mu_b, "Chemical potential of the second state")->capture_default_str();
  c_car->add_option("--n-list", car.n_list, "Toeplitz section sizes")->delimiter(',');
  c_car->add_option("--r-list", car.r_list, "Hoeffding rates")->delimiter(',');
  c_car->add_option("--s-grid", car.s_grid, "a,b,N grid")->capture_default_str();

  CLI::App* c_ebb = app.add_subcommand("ebb", "Electronic black box: entropic functional and Landauer-Buttiker fluxes");
  c_ebb->add_option("--spec", ebb.spec, "EBB spec JSON")->required()->check(CLI::ExistingFile);
  c_ebb->add_option("--scattering", ebb.scattering, "Scattering table CSV k,re_ij,im_ij,...")->check(CLI::ExistingFile);
  c_ebb->add_option("--write-scattering", ebb.write_scattering, "Write the computed scattering matrix at N momenta");
  c_ebb->add_option("--quad-tol", ebb.quad_tol, "Absolute quadrature tolerance")->capture_default_str();
  c_ebb->add_option("--s-grid", ebb.s_grid, "a,b,N grid")->capture_default_str();

  CLI::App* c_xy = app.add_subcommand("xy", "XY chain: closed-form e(s) and finite-chain convergence");
  c_xy->add_option("--spec", xy.spec_file, "XY spec JSON")->check(CLI::ExistingFile);
  c_xy->add_option("--J", xy.spec.J, "Coupling")->capture_default_str();
  c_xy->add_option("--lambda", xy.spec.lambda, "Magnetic field")->capture_default_str();
  c_xy->add_option("--betaL", xy.spec.beta_left, "Left reservoir inverse temperature")->capture_default_str();
  c_xy->add_option("--betaR", xy.spec.beta_right, "Right reservoir inverse temperature")->capture_default_str();
  c_xy->add_option("--beta", xy.spec.beta, "Sample inverse temperature")->capture_default_str();
  c_xy->add_option("--n", xy.spec.n, "Sample half-width")->capture_default_str();
  c_xy->add_option("--m-list", xy.m_list, "Chain half-widths")->delimiter(',');
  c_xy->add_option("--finite-s", xy.finite_s, "s at which finite chains are evaluated")->capture_default_str();
  c_xy->add_option("--t-ratio", xy.t_ratio, "t = ratio * m for each finite chain")->capture_default_str();
  c_xy->add_option("--quad-tol", xy.quad_tol, "Absolute quadrature tolerance")->capture_default_str();
  c_xy->add_option("--s-grid", xy.s_grid, "a,b,N grid")->capture_default_str();

  CLI::App* c_arrow = app.add_subcommand("arrow", "Arrow-of-time hypothesis test table");
  arrow.source.add(c_arrow);
  c_arrow->add_option("--t-list", arrow.t_list, "Times")->delimiter(',');

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) add_common(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const Context ctx{common, out};
  std::string command;
  try {
    for (CLI::App* sub : app.get_subcommands()) command = sub->get_name();
    if (command == "ht") run_ht(ctx, ht);
    else if (command == "exponents") run_exponents(ctx, ex);
    else if (command == "fcs") run_fcs(ctx, fcs);
    else if (command == "open") run_open(ctx, open);
    else if (command == "iid") run_iid(ctx, iid);
    else if (command == "spin") run_spin(ctx, spin);
    else if (command == "carshift") run_carshift(ctx, car);
    else if (command == "ebb") run_ebb(ctx, ebb);
    else if (command == "xy") run_xy(ctx, xy, *c_xy);
    else if (command == "arrow") run_arrow(ctx, arrow);
  } catch (const ValidationError& e) {
    err << "qht " << command << ": " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << json{{"status", "numerical_failure"}, {"command", command}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "qht " << command << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << json{{"status", "internal_failure"}, {"command", command}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace qht::cli

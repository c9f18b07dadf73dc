#include "twist/cli/commands.hpp"

#include "twist/analytic.hpp"
#include "twist/cli/csv.hpp"
#include "twist/exact_engine.hpp"
#include "twist/gaussian_engine.hpp"
#include "twist/spin_algebra.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

namespace twist::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kEvolveColumns{"tau", "jx",  "jy",  "jz", "vxx",   "vyy", "vzz",
                                              "vxy", "vxz", "vyz", "xi2", "alpha", "Q"};

struct Row {
  double tau = 0.0;
  Vec3 j = Vec3::Zero();  // mean spin / (N/2)
  Mat3 v = Mat3::Zero();  // covariance / (N/4)
  double xi2 = 1.0;
  double alpha = 0.0;
  double q = 0.0;
};

Row from_record(const SqueezingRecord& r, int n) {
  return {r.tau, r.moments.mean / (0.5 * n), r.moments.variance / (0.25 * n), r.xi2, r.alpha, r.rate};
}

Row from_scaled(const ScaledRecord& r) {
  Row row;
  row.tau = r.tau;
  row.j = Vec3(0, 0, r.state.j);
  row.v(0, 0) = r.state.v_xx;
  row.v(1, 1) = r.state.v_yy;
  row.v(0, 1) = row.v(1, 0) = r.state.v_xy;
  row.xi2 = r.xi2;
  row.alpha = r.alpha;
  row.q = r.rate;
  return row;
}

// Infinite-N pole-frame solution from a coherent pole state, j0 = +-1.
// Free twisting needs chi_z between chi_x and chi_y; the pole lock does not.
Row analytic_row(const DiagonalChi& chi, int j0, bool lock, double tau) {
  double vxx, vyy, vxy, xi2;
  if (lock) {
    const double d = chi.x - chi.y;
    vxx = vyy = std::cosh(d * tau);
    vxy = -j0 * std::sinh(d * tau);
    xi2 = std::exp(-std::abs(d) * tau);
  } else {
    // The closed form is written for chi_x >= chi_z >= chi_y and a south-pole
    // state. Exchanging x and y reverses the handedness, which is the same
    // as flipping the pole.
    const bool swapped = chi.x < chi.y;
    const double hi = swapped ? chi.y : chi.x;
    const double lo = swapped ? chi.x : chi.y;
    const int j = swapped ? -j0 : j0;
    const ChiGaps gaps{hi - chi.z, chi.z - lo};
    const ScaledVariances v = variance_closed_form(gaps, tau);
    const double c = j < 0 ? v.v_xy : -v.v_xy;
    vxx = swapped ? v.v_yy : v.v_xx;
    vyy = swapped ? v.v_xx : v.v_yy;
    vxy = c;
    xi2 = xi2_closed_form(gaps, tau);
  }
  Row row;
  row.tau = tau;
  row.j = Vec3(0, 0, j0);
  row.v(0, 0) = vxx;
  row.v(1, 1) = vyy;
  row.v(0, 1) = row.v(1, 0) = vxy;
  row.xi2 = xi2;
  row.alpha = minor_axis_angle(vxx, vyy, j0 < 0 ? -vxy : vxy);
  const BlochDirection pole{j0 < 0 ? std::numbers::pi : 0.0, 0.0};
  row.q = squeezing_rate(chi.x, chi.y, chi.z, pole, 0.5).rate;
  return row;
}

std::string numeric_context(const std::exception& e, std::size_t row) {
  return std::string(e.what()) + " (row " + std::to_string(row) + ")";
}

// Exact evolution sampled on the integrator grid.
void exact_samples(const RunConfig& cfg, int n, const std::function<void(double, const SpinState&)>& visit) {
  const std::vector<double> taus = sample_taus(cfg.integration);
  ExactOptions opts;
  opts.control_dtau = cfg.integration.dtau;
  std::size_t row = 0;
  try {
    evolve_exact_samples(coherent_state(n, cfg.initial), cfg.tensor, taus, cfg.control_law(), opts,
                         [&](double tau, const SpinState& s) {
                           visit(tau, s);
                           ++row;
                         });
  } catch (const NumericError& e) {
    throw NumericError(numeric_context(e, row));
  }
}

std::vector<Row> evolve_rows(const RunConfig& cfg) {
  std::vector<Row> rows;
  switch (cfg.engine) {
    case Engine::Exact: {
      const int n = *cfg.n_particles;
      const auto ops = angular_momentum_matrices(n);
      exact_samples(cfg, n, [&](double tau, const SpinState& s) {
        rows.push_back(from_record(make_record(tau, moments(s, ops), n, cfg.tensor), n));
      });
      break;
    }
    case Engine::GaussianFull: {
      const int n = *cfg.n_particles;
      for (const auto& r :
           integrate_full(coherent_moments(n, cfg.initial), cfg.tensor, n, cfg.control_law(), cfg.integration))
        rows.push_back(from_record(r, n));
      break;
    }
    case Engine::GaussianScaled: {
      const ScaledMomentState s0{1.0, 1.0, 0.0, static_cast<double>(cfg.pole())};
      for (const auto& r :
           integrate_scaled(s0, cfg.diagonal_chi(), cfg.scaled_control(), cfg.n_particles, cfg.integration))
        rows.push_back(from_scaled(r));
      break;
    }
    case Engine::Analytic: {
      const bool lock = cfg.control == ControlMode::PoleLock;
      for (double tau : sample_taus(cfg.integration))
        rows.push_back(analytic_row(cfg.diagonal_chi(), cfg.pole(), lock, tau));
      break;
    }
  }
  return rows;
}

std::string grid_csv(const BlochGrid& g, const char* name) {
  CsvWriter w;
  w.header({"theta", "phi", name});
  for (int i = 0; i < g.spec.n_theta; ++i)
    for (int k = 0; k < g.spec.n_phi; ++k) w.row({g.spec.theta(i), g.spec.phi(k), g.at(i, k)});
  return w.str();
}

}  // namespace

std::string evolve_csv(const RunConfig& cfg) {
  std::vector<std::string> cols = kEvolveColumns;
  if (cfg.physical_time) cols[0] = "t";
  CsvWriter w;
  w.header(cols);
  for (const Row& r : evolve_rows(cfg)) {
    const double time = cfg.physical_time ? r.tau / *cfg.n_particles : r.tau;
    w.row({time, r.j.x(), r.j.y(), r.j.z(), r.v(0, 0), r.v(1, 1), r.v(2, 2), r.v(0, 1), r.v(0, 2), r.v(1, 2),
           r.xi2, r.alpha, r.q});
  }
  return w.str();
}

std::string compare_csv(const RunConfig& cfg) {
  const std::vector<double> taus = sample_taus(cfg.integration);
  std::vector<std::vector<double>> cols;
  for (int n : cfg.n_list) {
    const auto ops = angular_momentum_matrices(n);
    std::vector<double> col;
    exact_samples(cfg, n, [&](double, const SpinState& s) {
      col.push_back(squeezing_parameter(moments(s, ops), n).xi2);
    });
    cols.push_back(std::move(col));
  }
  const bool lock = cfg.control == ControlMode::PoleLock;
  CsvWriter w;
  std::vector<std::string> header{"tau"};
  for (int n : cfg.n_list) header.push_back("N" + std::to_string(n));
  header.push_back("inf");
  w.header(header);
  std::vector<double> row;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    row.assign(1, taus[i]);
    for (const auto& c : cols) row.push_back(c[i]);
    row.push_back(analytic_row(cfg.diagonal_chi(), cfg.pole(), lock, taus[i]).xi2);
    w.row(row);
  }
  return w.str();
}

std::pair<std::string, std::string> landscape_csv(const RunConfig& cfg) {
  const Landscape l = landscape(cfg.tensor, *cfg.n_particles, cfg.grid);
  return {grid_csv(l.energy, "energy"), grid_csv(l.rate, "rate")};
}

std::string husimi_csv(const RunConfig& cfg) {
  const int n = *cfg.n_particles;
  SpinState final_state;
  const double tau = cfg.integration.tau_max;
  ExactOptions opts;
  opts.control_dtau = cfg.integration.dtau;
  const std::vector<double> taus{tau};
  evolve_exact_samples(coherent_state(n, cfg.initial), cfg.tensor, taus, cfg.control_law(), opts,
                       [&](double, const SpinState& s) { final_state = s; });
  return grid_csv(husimi(final_state, cfg.grid), "q");
}

namespace {

double clean(double v) { return v == 0.0 ? 0.0 : v; }

json triple(double a, double b, double c) { return {clean(a), clean(b), clean(c)}; }

}  // namespace

std::string device_json(const RunConfig& cfg) {
  const TwistingTensor& t = cfg.tensor;
  const CanonicalTensor c = canonicalize_tensor(t);
  json j;
  j["source"] = cfg.tensor_source;
  json chi = json::array();
  for (int k = 0; k < 3; ++k) chi.push_back(triple(t.chi(k, 0), t.chi(k, 1), t.chi(k, 2)));
  j["chi"] = chi;
  j["omega"] = triple(t.omega().x(), t.omega().y(), t.omega().z());
  const auto asc = c.ascending();
  j["eigenvalues"] = triple(asc[0], asc[1], asc[2]);
  json axes = json::object();
  const char* names[3] = {"x", "y", "z"};
  for (int k = 0; k < 3; ++k) axes[names[k]] = triple(c.frame(k, 0), c.frame(k, 1), c.frame(k, 2));
  j["eigen_axes"] = axes;
  j["class"] = to_string(c.kind);
  const ChiGaps gaps{c.chi_x - c.chi_z, c.chi_z - c.chi_y};
  j["gaps"] = {{"d_chi_x", clean(gaps.d_chi_x)}, {"d_chi_y", clean(gaps.d_chi_y)}, {"d_chi", clean(gaps.d_chi())}};
  return j.dump(2) + "\n";
}

std::pair<std::string, std::string> landscape_paths(const std::string& out) {
  std::string stem = out;
  if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
  return {stem + "_energy.csv", stem + "_rate.csv"};
}

namespace {

void add_common(CLI::App* sub, std::map<std::string, std::string>& flags, bool& physical_time,
                std::string& config_path) {
  sub->add_option("--config", config_path, "JSON config file; flags override its values");
  auto opt = [&](const char* name, const char* key, const char* help) {
    sub->add_option(name, flags[key], help);
  };
  opt("--engine", "engine", "exact | gaussian-full | gaussian-scaled | analytic");
  opt("--n", "n", "particle number, 'inf', or a comma list for compare");
  opt("--chi", "chi", "diagonal tensor x,y,z");
  opt("--chi-full", "chi_full", "full tensor xx,yy,zz,xy,xz,yz");
  opt("--preset", "preset", "oat | tact | general");
  opt("--omega", "omega", "rotation vector x,y,z (physical units)");
  opt("--omega-tilde", "omega_tilde", "scaled rotation about z (gaussian-scaled only)");
  opt("--control", "control", "none | fixed | pole-lock");
  opt("--theta0", "theta0", "initial polar angle");
  opt("--phi0", "phi0", "initial azimuth");
  opt("--tau-max", "tau_max", "final scaled time");
  opt("--dtau", "dtau", "integration step in scaled time");
  opt("--stride", "stride", "record every stride-th step");
  opt("--grid", "grid", "THETAxPHI grid resolution");
  opt("--out", "out", "output path (default: standard output)");
  opt("--kerr", "kerr", "Kerr strengths a,b,c,d for a single interferometer stage");
  opt("--dt", "dt", "round-trip time of the Kerr stage");
  opt("--lmg", "lmg", "LMG parameters Omega,V,W");
  sub->add_flag("--physical-time", physical_time, "report physical time t = tau/N");
}

json flags_to_json(const std::map<std::string, std::string>& flags, bool physical_time) {
  json j = json::object();
  for (const auto& [k, v] : flags) {
    if (v.empty() || k == "kerr" || k == "dt") continue;
    j[k] = v;
  }
  if (physical_time) j["physical_time"] = true;
  const auto kerr = flags.find("kerr");
  const auto dt = flags.find("dt");
  const bool has_kerr = kerr != flags.end() && !kerr->second.empty();
  if (has_kerr) {
    json stage = {{"gamma", kerr->second}};
    if (dt != flags.end() && !dt->second.empty()) stage["dt"] = dt->second;
    j["device"] = {{"stages", json::array({stage})}};
  } else if (dt != flags.end() && !dt->second.empty()) {
    throw ConfigError("dt: only meaningful together with --kerr");
  }
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Collective-spin squeezing simulator"};
  app.require_subcommand(1);
  const std::pair<Command, const char*> commands[] = {
      {Command::Evolve, "time series of moments and squeezing"},
      {Command::Compare, "exact squeezing for several N against the infinite-N curve"},
      {Command::Landscape, "coherent-state energy and squeezing rate over the sphere"},
      {Command::Husimi, "Husimi function of the evolved state"},
      {Command::Device, "twisting tensor report for an interferometer or LMG model"}};
  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, bool> physical;
  std::map<std::string, std::string> configs;
  for (const auto& [cmd, help] : commands) {
    const std::string name = to_string(cmd);
    add_common(app.add_subcommand(name, help), flags[name], physical[name], configs[name]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    Command cmd = Command::Evolve;
    for (const auto& [c, _] : commands)
      if (app.got_subcommand(to_string(c))) cmd = c;
    const std::string name = to_string(cmd);
    json file = configs[name].empty() ? json::object() : read_config_file(configs[name]);
    const RunConfig cfg = resolve_config(cmd, merge_layers(file, flags_to_json(flags[name], physical[name])));

    if (cmd == Command::Landscape) {
      const auto [energy_path, rate_path] = landscape_paths(cfg.out);
      OutputFile energy_file(energy_path), rate_file(rate_path);
      const auto [energy, rate] = landscape_csv(cfg);
      energy_file.commit(energy);
      rate_file.commit(rate);
      return kExitOk;
    }

    std::optional<OutputFile> file_out;
    if (!cfg.out.empty()) file_out.emplace(cfg.out);
    std::string text;
    switch (cmd) {
      case Command::Evolve: text = evolve_csv(cfg); break;
      case Command::Compare: text = compare_csv(cfg); break;
      case Command::Husimi: text = husimi_csv(cfg); break;
      case Command::Device: text = device_json(cfg); break;
      case Command::Landscape: break;
    }
    if (file_out) file_out->commit(text);
    else out << text;
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace twist::cli

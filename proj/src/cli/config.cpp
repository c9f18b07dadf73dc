#include "twist/cli/config.hpp"

#include "twist/spin_algebra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace twist::cli {

using nlohmann::json;

namespace {

constexpr int kMaxExactN = 10000;

const std::vector<std::string> kTensorKeys{"chi", "chi_full", "preset", "device", "lmg"};

const std::set<std::string> kKnownKeys{
    "engine", "n",     "chi",     "chi_full", "preset", "device", "lmg",      "omega",
    "omega_tilde",     "control", "theta0",   "phi0",   "tau_max", "dtau",    "stride",
    "grid",   "out",   "physical_time"};

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  return s;
}

double number(const json& v, const std::string& key) {
  if (v.is_number()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key + ": must be finite");
    return d;
  }
  if (v.is_string()) return parse_number(v.get<std::string>(), key);
  fail(key + ": expected a number");
}

std::vector<double> numbers(const json& v, const std::string& key, std::size_t count) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(number(x, key));
  } else if (v.is_string()) {
    out = parse_list(v.get<std::string>(), key);
  } else {
    fail(key + ": expected a list of " + std::to_string(count) + " numbers");
  }
  if (out.size() != count)
    fail(key + ": expected " + std::to_string(count) + " numbers, got " + std::to_string(out.size()));
  return out;
}

int integer(const json& v, const std::string& key) {
  const double d = number(v, key);
  if (d != std::floor(d) || std::abs(d) > 1e9) fail(key + ": expected an integer");
  return static_cast<int>(d);
}

bool is_infinite_token(const json& v) {
  if (!v.is_string()) return false;
  const std::string s = lower(v.get<std::string>());
  return s == "inf" || s == "infinite" || s == "infinity";
}

int particle_count(const json& v, const std::string& key) {
  const int n = integer(v, key);
  if (n < 1) fail(key + ": particle number must be >= 1");
  return n;
}

Mat3 parse_rotation(const json& v, const std::string& key) {
  Mat3 r = Mat3::Identity();
  if (v.is_object()) {
    if (!v.contains("axis") || !v.contains("angle")) fail(key + ": rotation needs \"axis\" and \"angle\"");
    const auto a = numbers(v.at("axis"), key + ".axis", 3);
    const Vec3 axis(a[0], a[1], a[2]);
    if (axis.norm() == 0.0) fail(key + ".axis: must be nonzero");
    r = rotation_about_axis(axis, number(v.at("angle"), key + ".angle"));
  } else if (v.is_array() && v.size() == 3) {
    for (int i = 0; i < 3; ++i) {
      const auto row = numbers(v[i], key, 3);
      for (int k = 0; k < 3; ++k) r(i, k) = row[k];
    }
    if (!is_proper_rotation(r)) fail(key + ": matrix is not a proper rotation");
  } else {
    fail(key + ": expected {\"axis\": [x,y,z], \"angle\": a} or a 3x3 matrix");
  }
  return r;
}

KerrStage parse_stage(const json& v, const std::string& key, std::optional<int> default_n) {
  if (!v.is_object()) fail(key + ": expected an object");
  KerrStage s;
  if (v.contains("gamma")) {
    const auto g = numbers(v.at("gamma"), key + ".gamma", 4);
    s.gamma_a = g[0];
    s.gamma_b = g[1];
    s.gamma_c = g[2];
    s.gamma_d = g[3];
  } else {
    fail(key + ": missing \"gamma\" [a, b, c, d]");
  }
  s.roundtrip_dt = v.contains("dt") ? number(v.at("dt"), key + ".dt") : 1.0;
  if (!(s.roundtrip_dt > 0.0)) fail(key + ".dt: round-trip time must be > 0");
  if (v.contains("n")) {
    s.n_particles = particle_count(v.at("n"), key + ".n");
  } else if (default_n) {
    s.n_particles = *default_n;
  } else {
    fail(key + ": Kerr stages need a finite particle number (set \"n\" or --n)");
  }
  for (const auto& [k, _] : v.items())
    if (k != "gamma" && k != "dt" && k != "n" && k != "rotation") fail(key + ": unknown key \"" + k + "\"");
  return s;
}

TwistingTensor parse_device(const json& v, std::optional<int> default_n) {
  if (!v.is_object() || !v.contains("stages")) fail("device: expected {\"stages\": [...]}");
  const json& list = v.at("stages");
  if (!list.is_array() || list.empty()) fail("device.stages: expected a non-empty list");
  std::vector<ChainedStage> chain;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string key = "device.stages[" + std::to_string(i) + "]";
    ChainedStage c;
    c.stage = parse_stage(list[i], key, default_n);
    if (list[i].contains("rotation")) c.rotation = parse_rotation(list[i].at("rotation"), key + ".rotation");
    chain.push_back(c);
  }
  return chain_stages(chain);
}

TwistingTensor parse_lmg(const json& v) {
  LmgParameters p;
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (k == "omega") p.omega_big = number(x, "lmg.omega");
      else if (k == "v") p.v_param = number(x, "lmg.v");
      else if (k == "w") p.w_param = number(x, "lmg.w");
      else fail("lmg: unknown key \"" + k + "\" (expected omega, v, w)");
    }
  } else {
    const auto l = numbers(v, "lmg", 3);
    p = {l[0], l[1], l[2]};
  }
  return lmg_to_tensor(p);
}

TwistingTensor preset_tensor(const json& v) {
  if (!v.is_string()) fail("preset: expected oat, tact or general");
  const std::string p = lower(v.get<std::string>());
  if (p == "oat") return TwistingTensor::diagonal(1, 0, 0);
  if (p == "tact") return TwistingTensor::diagonal(1, 0, 0.5);
  if (p == "general") return TwistingTensor::diagonal(1, 0, 0.8);
  fail("preset: unknown preset \"" + v.get<std::string>() + "\" (expected oat, tact or general)");
}

Engine parse_engine(const json& v) {
  if (!v.is_string()) fail("engine: expected a string");
  const std::string e = lower(v.get<std::string>());
  if (e == "exact") return Engine::Exact;
  if (e == "gaussian-full" || e == "full") return Engine::GaussianFull;
  if (e == "gaussian-scaled" || e == "scaled") return Engine::GaussianScaled;
  if (e == "analytic") return Engine::Analytic;
  fail("engine: unknown engine \"" + v.get<std::string>() +
       "\" (expected exact, gaussian-full, gaussian-scaled, analytic)");
}

ControlMode parse_control(const json& v) {
  if (!v.is_string()) fail("control: expected a string");
  const std::string c = lower(v.get<std::string>());
  if (c == "none") return ControlMode::None;
  if (c == "fixed") return ControlMode::Fixed;
  if (c == "pole-lock" || c == "polelock") return ControlMode::PoleLock;
  fail("control: unknown mode \"" + v.get<std::string>() + "\" (expected none, fixed, pole-lock)");
}

GridSpec parse_grid(const json& v) {
  GridSpec g;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto x = s.find_first_of("xX");
    if (x == std::string::npos) fail("grid: expected THETAxPHI, e.g. 181x360");
    g.n_theta = integer(json(s.substr(0, x)), "grid");
    g.n_phi = integer(json(s.substr(x + 1)), "grid");
  } else {
    const auto l = numbers(v, "grid", 2);
    g.n_theta = integer(json(l[0]), "grid");
    g.n_phi = integer(json(l[1]), "grid");
  }
  if (g.n_theta < 2 || g.n_phi < 2) fail("grid: resolution must be at least 2x2");
  if (static_cast<long long>(g.n_theta) * g.n_phi > 50'000'000LL) fail("grid: more than 5e7 cells");
  return g;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Evolve: return "evolve";
    case Command::Compare: return "compare";
    case Command::Landscape: return "landscape";
    case Command::Husimi: return "husimi";
    case Command::Device: return "device";
  }
  return "?";
}

const char* to_string(Engine e) {
  switch (e) {
    case Engine::Exact: return "exact";
    case Engine::GaussianFull: return "gaussian-full";
    case Engine::GaussianScaled: return "gaussian-scaled";
    case Engine::Analytic: return "analytic";
  }
  return "?";
}

double parse_number(const std::string& text, const std::string& what) {
  const char* b = text.data();
  const char* e = b + text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(e[-1]))) --e;
  if (b < e && *b == '+') ++b;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || b == e) fail(what + ": \"" + text + "\" is not a number");
  if (!std::isfinite(v)) fail(what + ": must be finite");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, what));
  if (!text.empty() && text.back() == ',') fail(what + ": trailing comma");
  return out;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    fail("config " + path + ": " + e.what());
  }
  if (!j.is_object()) fail("config " + path + ": top level must be an object");
  return j;
}

json merge_layers(json file, const json& flags) {
  bool flag_source = false;
  for (const auto& k : kTensorKeys) flag_source = flag_source || flags.contains(k);
  if (flag_source)
    for (const auto& k : kTensorKeys) file.erase(k);
  for (const auto& [k, v] : flags.items()) file[k] = v;
  return file;
}

int RunConfig::pole() const {
  if (near(initial.theta, 0.0)) return 1;
  if (near(initial.theta, std::numbers::pi)) return -1;
  return 0;
}

ControlLaw RunConfig::control_law() const {
  switch (control) {
    case ControlMode::None: return NoControl{};
    case ControlMode::Fixed: return FixedRotation{fixed_omega};
    case ControlMode::PoleLock: return PoleLock{};
  }
  return NoControl{};
}

ScaledControl RunConfig::scaled_control() const {
  if (control == ControlMode::PoleLock) return ScaledPoleLock{};
  if (omega_tilde) return ScaledRotation{*omega_tilde};
  const Vec3 w = control == ControlMode::Fixed ? fixed_omega : tensor.omega();
  return ScaledRotation{n_particles ? w.z() / *n_particles : 0.0};
}

DiagonalChi RunConfig::diagonal_chi() const {
  return {tensor.chi(0, 0), tensor.chi(1, 1), tensor.chi(2, 2)};
}

RunConfig resolve_config(Command command, const json& values) {
  if (!values.is_object()) fail("config: expected an object");
  for (const auto& [k, _] : values.items())
    if (!kKnownKeys.count(k)) fail("config: unknown key \"" + k + "\"");
  auto has = [&](const char* k) { return values.contains(k) && !values.at(k).is_null(); };

  RunConfig c;
  c.command = command;

  if (has("n")) {
    const json& v = values.at("n");
    if (command == Command::Compare) {
      if (v.is_array()) {
        for (const auto& x : v) c.n_list.push_back(particle_count(x, "n"));
      } else if (v.is_string() && !is_infinite_token(v)) {
        for (double x : parse_list(v.get<std::string>(), "n")) c.n_list.push_back(particle_count(json(x), "n"));
      } else if (!is_infinite_token(v)) {
        c.n_list.push_back(particle_count(v, "n"));
      }
    } else if (!is_infinite_token(v)) {
      if (v.is_array()) fail("n: a list of particle numbers is only accepted by compare");
      c.n_particles = particle_count(v, "n");
    }
  }

  int sources = 0;
  for (const auto& k : kTensorKeys) sources += has(k.c_str()) ? 1 : 0;
  if (sources == 0) fail("no twisting tensor given: use one of --chi, --chi-full, --preset, or a device/lmg spec");
  if (sources > 1) fail("more than one twisting tensor source given (chi, chi_full, preset, device, lmg are exclusive)");
  if (has("chi")) {
    const auto d = numbers(values.at("chi"), "chi", 3);
    c.tensor = TwistingTensor::diagonal(d[0], d[1], d[2]);
    c.tensor_source = "chi";
  } else if (has("chi_full")) {
    const auto d = numbers(values.at("chi_full"), "chi_full", 6);
    c.tensor = TwistingTensor::from_components({d[0], d[1], d[2], d[3], d[4], d[5]});
    c.tensor_source = "chi_full";
  } else if (has("preset")) {
    c.tensor = preset_tensor(values.at("preset"));
    c.tensor_source = "preset";
  } else if (has("device")) {
    try {
      c.tensor = parse_device(values.at("device"), c.n_particles);
    } catch (const std::invalid_argument& e) {
      fail(std::string("device: ") + e.what());
    }
    c.tensor_source = "device";
  } else {
    c.tensor = parse_lmg(values.at("lmg"));
    c.tensor_source = "lmg";
  }

  const bool omega_given = has("omega");
  if (omega_given) {
    const auto w = numbers(values.at("omega"), "omega", 3);
    c.fixed_omega = Vec3(w[0], w[1], w[2]);
  }
  if (has("omega_tilde")) c.omega_tilde = number(values.at("omega_tilde"), "omega_tilde");
  if (has("control")) {
    c.control = parse_control(values.at("control"));
  } else if (omega_given || c.omega_tilde) {
    c.control = ControlMode::Fixed;
  }
  if (c.control == ControlMode::None && (omega_given || c.omega_tilde))
    fail("omega: a rotation was given with --control none; use --control fixed");
  if (c.control == ControlMode::PoleLock && (omega_given || c.omega_tilde))
    fail("omega: the pole lock computes its own rotation; drop --omega/--omega-tilde");
  if (c.control == ControlMode::Fixed && !omega_given && !c.omega_tilde)
    fail("control: fixed needs --omega x,y,z (or --omega-tilde for the scaled engine)");

  if (has("theta0")) c.initial.theta = number(values.at("theta0"), "theta0");
  if (has("phi0")) c.initial.phi = number(values.at("phi0"), "phi0");
  if (c.initial.theta < 0.0 || c.initial.theta > std::numbers::pi + 1e-12)
    fail("theta0: must lie in [0, pi]");

  if (has("tau_max")) c.integration.tau_max = number(values.at("tau_max"), "tau_max");
  if (has("dtau")) c.integration.dtau = number(values.at("dtau"), "dtau");
  if (has("stride")) c.integration.stride = integer(values.at("stride"), "stride");
  if (c.integration.tau_max < 0.0) fail("tau_max: must be >= 0");
  if (!(c.integration.dtau > 0.0)) fail("dtau: must be > 0");
  if (c.integration.stride < 1) fail("stride: must be >= 1");
  if (c.integration.tau_max / c.integration.dtau > 1e9) fail("dtau: more than 1e9 steps requested");

  if (has("grid")) c.grid = parse_grid(values.at("grid"));
  if (has("out")) {
    if (!values.at("out").is_string()) fail("out: expected a path");
    c.out = values.at("out").get<std::string>();
  }
  if (has("physical_time")) {
    const json& v = values.at("physical_time");
    if (!v.is_boolean()) fail("physical_time: expected true or false");
    c.physical_time = v.get<bool>();
  }

  const bool engine_given = has("engine");
  if (engine_given) c.engine = parse_engine(values.at("engine"));
  else c.engine = c.n_particles ? Engine::GaussianFull : Engine::GaussianScaled;

  switch (command) {
    case Command::Evolve: {
      if (c.physical_time && !c.n_particles) fail("physical_time: needs a finite particle number");
      if (c.omega_tilde && c.engine != Engine::GaussianScaled)
        fail("omega_tilde: only the gaussian-scaled engine takes a scaled rotation; use --omega");
      switch (c.engine) {
        case Engine::Exact:
          if (!c.n_particles) fail("engine exact: needs a finite particle number (--n)");
          if (*c.n_particles > kMaxExactN)
            fail("engine exact: N = " + std::to_string(*c.n_particles) + " exceeds " + std::to_string(kMaxExactN));
          break;
        case Engine::GaussianFull:
          if (!c.n_particles) fail("engine gaussian-full: needs a finite particle number; use gaussian-scaled for N = inf");
          break;
        case Engine::GaussianScaled:
        case Engine::Analytic: {
          const std::string e = to_string(c.engine);
          if (!c.tensor.is_diagonal()) fail("engine " + e + ": needs a diagonal tensor (use --chi)");
          if (c.pole() == 0) fail("engine " + e + ": needs a pole start (theta0 = 0 or pi)");
          const Vec3 w = c.control == ControlMode::Fixed ? c.fixed_omega : c.tensor.omega();
          if (w.x() != 0.0 || w.y() != 0.0) fail("engine " + e + ": rotation must be about z");
          if (c.engine == Engine::GaussianScaled) {
            if (w.z() != 0.0 && !c.n_particles)
              fail("omega: with N = inf give the scaled rotation via --omega-tilde");
          } else {
            if (w.z() != 0.0 || c.omega_tilde) fail("engine analytic: supports free twisting or the pole lock only");
            const DiagonalChi chi = c.diagonal_chi();
            if (c.control != ControlMode::PoleLock && (chi.z - chi.x) * (chi.z - chi.y) > 0.0)
              fail("engine analytic: the pole-axis eigenvalue chi_z must lie between chi_x and chi_y");
          }
          break;
        }
      }
      break;
    }
    case Command::Compare: {
      if (engine_given && c.engine != Engine::Exact) fail("compare: runs the exact engine; drop --engine");
      c.engine = Engine::Exact;
      if (c.n_list.empty()) fail("compare: needs a list of finite particle numbers, e.g. --n 10,60");
      for (int n : c.n_list)
        if (n > kMaxExactN) fail("compare: N = " + std::to_string(n) + " exceeds " + std::to_string(kMaxExactN));
      if (!c.tensor.is_diagonal()) fail("compare: needs a diagonal tensor");
      if (c.pole() == 0) fail("compare: needs a pole start (theta0 = 0 or pi)");
      if (c.control == ControlMode::Fixed || c.tensor.omega().norm() != 0.0)
        fail("compare: supports free twisting or the pole lock only");
      const DiagonalChi chi = c.diagonal_chi();
      if (c.control != ControlMode::PoleLock && (chi.z - chi.x) * (chi.z - chi.y) > 0.0)
        fail("compare: the pole-axis eigenvalue chi_z must lie between chi_x and chi_y");
      if (c.physical_time) fail("physical_time: compare mixes several N; times are always scaled");
      break;
    }
    case Command::Landscape:
      if (!c.n_particles) fail("landscape: needs a finite particle number (--n)");
      if (c.out.empty()) fail("landscape: writes two files; give an output stem with --out");
      break;
    case Command::Husimi:
      if (engine_given && c.engine != Engine::Exact) fail("husimi: runs the exact engine; drop --engine");
      c.engine = Engine::Exact;
      if (!c.n_particles) fail("husimi: needs a finite particle number (--n)");
      if (*c.n_particles > kMaxExactN) fail("husimi: N exceeds " + std::to_string(kMaxExactN));
      break;
    case Command::Device:
      break;
  }
  return c;
}

}  // namespace twist::cli

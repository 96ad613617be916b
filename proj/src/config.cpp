#include "kgs/config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "kgs/linop.hpp"
#include "kgs/random_fields.hpp"
#include "kgs/scatter.hpp"
#include "kgs/spectral.hpp"
#include "kgs/symplectic.hpp"

namespace kgs {

namespace {

using json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct KvTable {
  // (section, key) -> (value, line)
  std::map<std::pair<std::string, std::string>, std::pair<std::string, int>> items;
  std::string origin;

  const std::string* find(const std::string& sec, const std::string& key) const {
    auto it = items.find({sec, key});
    return it == items.end() ? nullptr : &it->second.first;
  }
  double number(const std::string& sec, const std::string& key, double fallback) const {
    const std::string* v = find(sec, key);
    if (!v) return fallback;
    try {
      std::size_t pos = 0;
      const double x = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return x;
    } catch (...) {
      throw validation_error(origin + ": field [" + sec + "] " + key + " is not a number: '" +
                             *v + "'");
    }
  }
  long integer(const std::string& sec, const std::string& key, long fallback) const {
    const double x = number(sec, key, static_cast<double>(fallback));
    if (x != std::floor(x))
      throw validation_error(origin + ": field [" + sec + "] " + key + " must be an integer");
    return static_cast<long>(x);
  }
  Vec3 vec3(const std::string& sec, const std::string& key, const Vec3& fallback) const {
    const std::string* v = find(sec, key);
    if (!v) return fallback;
    std::istringstream in(*v);
    Vec3 out;
    if (!(in >> out[0] >> out[1] >> out[2]))
      throw validation_error(origin + ": field [" + sec + "] " + key + " needs three numbers");
    return out;
  }
  std::string str(const std::string& sec, const std::string& key,
                  const std::string& fallback) const {
    const std::string* v = find(sec, key);
    return v ? *v : fallback;
  }
};

KvTable parse_table(const std::string& text, const std::string& origin) {
  KvTable t;
  t.origin = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw validation_error(origin + ":" + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw validation_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw validation_error(origin + ":" + std::to_string(lineno) + ": empty key");
    t.items[{section, key}] = {val, lineno};
  }
  return t;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(const Vec3& v) { return fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]); }

// ---- output helpers ----

struct CsvWriter {
  std::ofstream out;
  explicit CsvWriter(const std::string& path) : out(path) {
    if (!out) throw numerical_error("cannot open " + path);
  }
  void row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i)
      out << (i ? "," : "") << fmt(vals[i]);
    out << "\n";
  }
  void header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
    out << "\n";
  }
};

struct Manifest {
  json j;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void add(const std::string& name) { outputs.push_back(name); }
  void finish(const ExperimentSpec& spec, const std::string& dir) {
    j["command"] = spec.command;
    j["seed"] = spec.seed;
    j["threads"] = spec.threads;
    j["version"] = "kgsoliton 0.1.0";
    j["config_echo"] = emit_config(spec);
    j["wraparound_bound"] = spec.run.wraparound_bound();
    j["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    j["outputs"] = outputs;
    std::ofstream out(dir + "/manifest.json");
    out << j.dump(2) << "\n";
  }
};

void write_json(Manifest& man, const std::string& dir, const std::string& name, const json& j) {
  std::ofstream out(dir + "/" + name);
  if (!out) throw numerical_error("cannot open " + dir + "/" + name);
  out << j.dump(2) << "\n";
  man.add(name);
}

json fit_json(const DecayFit& f) {
  return json{{"t0", f.t0}, {"t1", f.t1}, {"exponent", f.exponent},
              {"amplitude", f.amplitude}, {"r2", f.r2}};
}

// ---- per-command drivers ----

int cmd_wiener(const ExperimentSpec& spec, Manifest& man) {
  const WienerReport rep =
      wiener_check(spec.run.profile, spec.wiener.k_max, spec.wiener.n, spec.wiener.threshold);
  write_json(man, spec.out_dir, "wiener.json",
             json{{"min_abs", rep.min_abs},
                  {"argmin", rep.argmin},
                  {"rho_hat0", rep.rho_hat0},
                  {"threshold", rep.threshold},
                  {"pass", rep.pass}});
  return 0;
}

int cmd_soliton(const ExperimentSpec& spec, Manifest& man) {
  const RunConfig& rc = spec.run;
  const FullState y = soliton_state(rc.sigma0, rc.profile, rc.grid, rc.m);

  // residual || (-Lap + m^2 + (v.grad)^2) psi_v + rho ||
  const SpectralField rho = rho_hat_on_grid(rc.profile, rc.grid);
  SpectralPair sol = soliton_spectra(rc.sigma0.v, rc.profile, rc.grid, rc.m);
  const Grid& g = rc.grid;
  double res2 = 0.0, rho2 = 0.0, grad_pair = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < g.n; ++i) {
    const double ki = g.k(i);
    for (int j = 0; j < g.n; ++j) {
      const double kj = g.k(j);
      for (int l = 0; l < g.n; ++l, ++idx) {
        const double kl = g.k(l);
        const double k2 = ki * ki + kj * kj + kl * kl;
        const double kv = ki * rc.sigma0.v[0] + kj * rc.sigma0.v[1] + kl * rc.sigma0.v[2];
        const Complex r = (k2 + rc.m * rc.m - kv * kv) * sol.psi[idx] + rho[idx];
        res2 += std::norm(r);
        rho2 += std::norm(rho[idx]);
        // <grad psi_v, rho> component magnitude (stationarity of the force)
        grad_pair += (Complex(0.0, -ki) * sol.psi[idx] * std::conj(rho[idx])).real();
      }
    }
  }
  const double mes = std::pow(M_PI / g.half_length, 3);
  const std::string snap = "soliton.kgsnap";
  write_snapshot(spec.out_dir + "/" + snap, {&y.fields.psi, &y.fields.pi}, 0.0);
  man.add(snap);
  write_json(man, spec.out_dir, "soliton.json",
             json{{"residual_l2", std::sqrt(res2 * mes)},
                  {"rho_l2", std::sqrt(rho2 * mes)},
                  {"force_component_1", grad_pair * mes},
                  {"energy", hamiltonian(y, rc.m, rc.profile)},
                  {"p", {y.p[0], y.p[1], y.p[2]}}});
  return 0;
}

int cmd_simulate(const ExperimentSpec& spec, Manifest& man) {
  const RunConfig& rc = spec.run;
  const TrajectoryRecord rec = run(rc);
  CsvWriter csv(spec.out_dir + "/series.csv");
  man.add("series.csv");
  csv.header({"t", "H", "qx", "qy", "qz", "px", "py", "pz", "speed"});
  for (std::size_t i = 0; i < rec.t.size(); ++i)
    csv.row({rec.t[i], rec.energy[i], rec.q[i][0], rec.q[i][1], rec.q[i][2], rec.p[i][0],
             rec.p[i][1], rec.p[i][2], rec.speed[i]});
  for (std::size_t i = 0; i < rec.snapshots.size(); ++i) {
    const std::string name = "snapshot_" + std::to_string(i) + ".kgsnap";
    write_snapshot(spec.out_dir + "/" + name,
                   {&rec.snapshots[i].fields.psi, &rec.snapshots[i].fields.pi}, rec.snapshot_t[i]);
    man.add(name);
  }
  double drift = 0.0;
  for (double e : rec.energy) drift = std::max(drift, std::abs(e - rec.energy.front()));
  write_json(man, spec.out_dir, "summary.json",
             json{{"energy_drift_rel", drift / std::abs(rec.energy.front())},
                  {"max_speed", rec.max_speed},
                  {"wraparound_bound", rec.wraparound_bound},
                  {"samples", rec.t.size()}});
  return 0;
}

int cmd_spectral(const ExperimentSpec& spec, Manifest& man) {
  const SpectralScan& sc = spec.spectral;
  const RunConfig& rc = spec.run;
  CsvWriter csv(spec.out_dir + "/spectral.csv");
  man.add("spectral.csv");
  csv.header({"omega", "ReH11", "ImH11", "ReH22", "ImH22", "ReH33", "ImH33", "RedetM", "ImdetM",
              "ReF11", "ImF11", "ReF22", "ImF22"});
  const Vec3 K = K_matrix(sc.v, rc.profile, rc.m);
  double min_abs_det = std::numeric_limits<double>::infinity();
  const double mu = rc.m * std::sqrt(1.0 - sc.v * sc.v);
  for (int i = 0; i < sc.samples; ++i) {
    const double om = sc.omega_min + (sc.omega_max - sc.omega_min) * i / (sc.samples - 1.0);
    const ResolventSample rs = M_matrix(Complex(0.0, om), sc.v, rc.profile, rc.m);
    const CVec3 F = rs.H - K.cast<Complex>();
    csv.row({om, rs.H[0].real(), rs.H[0].imag(), rs.H[1].real(), rs.H[1].imag(), rs.H[2].real(),
             rs.H[2].imag(), rs.detM.real(), rs.detM.imag(), F[0].real(), F[0].imag(),
             F[1].real(), F[1].imag()});
    if (om > 0.05 * mu) min_abs_det = std::min(min_abs_det, std::abs(rs.detM));
  }
  write_json(man, spec.out_dir, "summary.json",
             json{{"v", sc.v},
                  {"mu", mu},
                  {"K", {K[0], K[1], K[2]}},
                  {"min_abs_detM_away_from_zero", min_abs_det},
                  {"invertible_scan", min_abs_det > 0.0}});
  return 0;
}

int cmd_frozen(const ExperimentSpec& spec, Manifest& man) {
  const RunConfig& rc = spec.run;
  const FrozenParams& fp = spec.frozen;
  const Grid& g = rc.grid;

  FullState x0(g);
  if (fp.mode == "secular") {
    const TangentFrame frame = tangent_vectors(fp.v, rc.profile, g, rc.m);
    x0 = frame[3];  // tau_4: Q grows linearly under the frozen flow
  } else if (fp.mode == "transversal") {
    x0.fields = random_bump_pair(g, fp.seed ^ spec.seed, fp.r0, fp.k_max);
    x0 = transversal_projector(fp.v, x0, rc.profile, rc.m);
  } else {
    throw validation_error("frozen: mode must be 'transversal' or 'secular'");
  }

  const double dt = fp.dt > 0.0 ? fp.dt : g.h() / 4.0;
  const double t_wrap = (g.half_length - fp.r0) / (1.0 + fp.v.norm());
  const double T = std::min(fp.T, t_wrap);
  const FrozenSeries fs = frozen_evolve(fp.v, x0, dt, T, rc.profile, rc.m, rc.beta);

  CsvWriter csv(spec.out_dir + "/frozen.csv");
  man.add("frozen.csv");
  csv.header({"t", "H", "norm_mbeta", "absQ", "absP"});
  std::vector<double> ts, ns, qs;
  for (const FrozenSample& s : fs.samples) {
    csv.row({s.t, s.energy, s.norm_mbeta, s.Q.norm(), s.P.norm()});
    ts.push_back(s.t);
    ns.push_back(s.norm_mbeta);
    qs.push_back(s.Q.norm());
  }
  json out{{"mode", fp.mode}, {"T", T}, {"wraparound_bound", t_wrap}};
  const DecayFit f = fit_decay(ts, ns, fp.fit_t0, T);
  out["norm_fit"] = fit_json(f);
  if (fp.mode == "secular") {
    const DecayFit fq = fit_decay(ts, qs, fp.fit_t0, T);
    out["q_growth_fit"] = fit_json(fq);
  }
  double h0 = fs.samples.front().energy, hdrift = 0.0;
  for (const FrozenSample& s : fs.samples) hdrift = std::max(hdrift, std::abs(s.energy - h0));
  out["energy_drift_rel"] = hdrift / std::abs(h0);
  write_json(man, spec.out_dir, "summary.json", out);
  return 0;
}

int cmd_decay_probe(const ExperimentSpec& spec, Manifest& man) {
  const RunConfig& rc = spec.run;
  const DecayProbeParams& dp = spec.decay;
  const Grid& g = rc.grid;
  const FieldPair f0 = random_bump_pair(g, dp.seed ^ spec.seed, dp.r0, dp.k_max);
  const double bound = (g.half_length - dp.r0) / (1.0 + dp.v.norm());
  const double t1 = dp.t1 > 0.0 ? dp.t1 : bound - 1.0;
  std::vector<double> times;
  for (int i = 0; i < dp.samples; ++i)
    times.push_back(dp.t0 + (t1 - dp.t0) * i / (dp.samples - 1.0));
  const std::vector<double> series = local_decay_probe(f0, dp.v, rc.m, rc.beta, times, dp.r0);
  CsvWriter csv(spec.out_dir + "/decay.csv");
  man.add("decay.csv");
  csv.header({"t", "norm_mbeta"});
  for (std::size_t i = 0; i < times.size(); ++i) csv.row({times[i], series[i]});
  const DecayFit fit = fit_decay(times, series, dp.fit_t0, t1);
  write_json(man, spec.out_dir, "summary.json",
             json{{"fit", fit_json(fit)}, {"wraparound_bound", bound}});
  return 0;
}

int cmd_scatter(const ExperimentSpec& spec, Manifest& man) {
  RunConfig rc = spec.run;
  if (rc.perturbation.kind == PerturbationSpec::Kind::None)
    throw validation_error("scatter: a perturbation must be configured");
  rc.perturbation.seed ^= spec.seed;
  if (rc.snapshot_times.empty())
    rc.snapshot_times = {rc.T / 8, rc.T / 4, rc.T / 2, 3 * rc.T / 4, rc.T};

  TrajectoryRecord traj;
  const DecompositionSeries dec = decompose_run(rc, traj, spec.project_every);

  CsvWriter csv(spec.out_dir + "/decay.csv");
  man.add("decay.csv");
  csv.header({"t", "z_norm_mbeta", "n_norm_beta", "orth_residual", "abs_cdot", "abs_vdot"});
  for (std::size_t i = 0; i < dec.t.size(); ++i)
    csv.row({dec.t[i], dec.z_norm_mbeta[i], dec.n_norm_beta[i], dec.orth_residual[i],
             dec.cdot[i].norm(), dec.vdot[i].norm()});

  const Asymptotics asym = extract_asymptotics(traj);
  const OutgoingWave wave = outgoing_wave(traj, rc.profile, rc.m);
  const EnergyBudget budget = energy_budget(traj, wave, asym, rc.profile, rc.m);

  CsvWriter rem(spec.out_dir + "/remainder.csv");
  man.add("remainder.csv");
  rem.header({"t", "d_norm", "remainder_norm"});
  for (std::size_t i = 0; i < wave.t.size(); ++i)
    rem.row({wave.t[i], wave.d_norm[i], wave.remainder_norm[i]});

  write_snapshot(spec.out_dir + "/psi_plus.kgsnap", {&wave.psi_plus.psi, &wave.psi_plus.pi},
                 traj.t.back());
  man.add("psi_plus.kgsnap");

  const DecayFit zfit =
      fit_decay(dec.t, dec.z_norm_mbeta, std::max(1.0, 0.15 * rc.T), dec.t.back());
  double orth_max = 0.0, sup_rates = 0.0, sup_n = 0.0;
  for (std::size_t i = 0; i < dec.t.size(); ++i) {
    orth_max = std::max(orth_max, dec.orth_residual[i]);
    sup_rates = std::max(sup_rates, dec.cdot[i].norm() + dec.vdot[i].norm());
    sup_n = std::max(sup_n, dec.n_norm_beta[i]);
  }
  write_json(man, spec.out_dir, "record.json",
             json{{"sigma0_b", fmt(rc.sigma0.b)},
                  {"sigma0_v", fmt(rc.sigma0.v)},
                  {"perturbation_amplitude", rc.perturbation.amplitude},
                  {"perturbation_seed", rc.perturbation.seed},
                  {"v_plus", {asym.v_plus[0], asym.v_plus[1], asym.v_plus[2]}},
                  {"a_plus", {asym.a_plus[0], asym.a_plus[1], asym.a_plus[2]}},
                  {"v_cauchy", asym.v_cauchy},
                  {"z_fit", fit_json(zfit)},
                  {"orth_residual_max", orth_max},
                  {"sup_rates", sup_rates},
                  {"sup_n_norm", sup_n},
                  {"cauchy_trend",
                   {{"d_half", wave.d_norm[wave.d_norm.size() / 2]},
                    {"rem_half", wave.remainder_norm[wave.d_norm.size() / 2]}}},
                  {"energy_budget",
                   {{"total", budget.total},
                    {"soliton", budget.soliton},
                    {"free_wave", budget.free_wave},
                    {"residual_rel", budget.residual_rel}}}});
  return 0;
}

}  // namespace

void ExperimentSpec::validate() const {
  static const char* commands[] = {"simulate", "soliton",      "spectral", "wiener-check",
                                   "frozen",   "decay-probe",  "scatter"};
  bool ok = false;
  for (const char* c : commands) ok = ok || command == c;
  if (!ok) throw validation_error("config: unknown command '" + command + "'");
  run.grid.validate();
  run.profile.validate();
  if (run.sigma0.v.squaredNorm() >= 1.0) throw validation_error("superluminal: |v| >= 1");
  if (frozen.v.squaredNorm() >= 1.0) throw validation_error("superluminal: frozen v");
  if (decay.v.squaredNorm() >= 1.0) throw validation_error("superluminal: decay-probe v");
  if (std::abs(spectral.v) >= 1.0) throw validation_error("superluminal: spectral v");
  if (threads < 1) throw validation_error("config: threads must be >= 1");
}

ExperimentSpec parse_config_text(const std::string& text, const std::string& origin) {
  const KvTable t = parse_table(text, origin);
  ExperimentSpec s;
  s.command = t.str("", "command", s.command);
  s.out_dir = t.str("", "out_dir", s.out_dir);
  s.seed = static_cast<std::uint64_t>(t.integer("", "seed", static_cast<long>(s.seed)));
  s.threads = static_cast<int>(t.integer("", "threads", s.threads));
  s.project_every = static_cast<int>(t.integer("", "project_every", s.project_every));

  s.run.grid.n = static_cast<int>(t.integer("grid", "n", 64));
  s.run.grid.half_length = t.number("grid", "L", 16.0);
  s.run.m = t.number("physics", "m", 1.0);
  s.run.beta = t.number("physics", "beta", 2.0);

  s.run.profile.kind = profile_kind_from_string(t.str("profile", "kind", "quartic_bump"));
  s.run.profile.amplitude = t.number("profile", "amplitude", 1.0);
  s.run.profile.radius = t.number("profile", "radius", 2.0);

  s.run.sigma0.b = t.vec3("soliton", "b", Vec3::Zero());
  s.run.sigma0.v = t.vec3("soliton", "v", Vec3::Zero());

  s.run.dt = t.number("run", "dt", 0.0);
  s.run.T = t.number("run", "T", 5.0);
  s.run.sample_every = static_cast<int>(t.integer("run", "sample_every", 0));
  if (const std::string* v = t.find("run", "snapshots")) {
    std::istringstream in(*v);
    double x;
    while (in >> x) s.run.snapshot_times.push_back(x);
  }

  const std::string pkind = t.str("perturbation", "kind", "none");
  if (pkind == "transversal_bump")
    s.run.perturbation.kind = PerturbationSpec::Kind::TransversalBump;
  else if (pkind != "none")
    throw validation_error(origin + ": unknown perturbation kind '" + pkind + "'");
  s.run.perturbation.seed =
      static_cast<std::uint64_t>(t.integer("perturbation", "seed", 1));
  s.run.perturbation.amplitude = t.number("perturbation", "amplitude", 0.0);
  s.run.perturbation.r0 = t.number("perturbation", "r0", 4.0);
  s.run.perturbation.k_max = t.number("perturbation", "k_max", 1.5);
  s.run.perturbation.modes = static_cast<int>(t.integer("perturbation", "modes", 6));

  s.spectral.v = t.number("spectral", "v", 0.5);
  s.spectral.omega_min = t.number("spectral", "omega_min", 0.05);
  s.spectral.omega_max = t.number("spectral", "omega_max", 3.0);
  s.spectral.samples = static_cast<int>(t.integer("spectral", "samples", 60));

  s.wiener.k_max = t.number("wiener", "k_max", 20.0);
  s.wiener.n = static_cast<int>(t.integer("wiener", "n", 4001));
  s.wiener.threshold = t.number("wiener", "threshold", 1e-12);

  s.frozen.v = t.vec3("frozen", "v", s.frozen.v);
  s.frozen.T = t.number("frozen", "T", s.frozen.T);
  s.frozen.dt = t.number("frozen", "dt", 0.0);
  s.frozen.seed = static_cast<std::uint64_t>(t.integer("frozen", "seed", 7));
  s.frozen.r0 = t.number("frozen", "r0", 4.0);
  s.frozen.k_max = t.number("frozen", "k_max", 1.5);
  s.frozen.mode = t.str("frozen", "mode", "transversal");
  s.frozen.fit_t0 = t.number("frozen", "fit_t0", 3.0);

  s.decay.v = t.vec3("decay", "v", Vec3::Zero());
  s.decay.t0 = t.number("decay", "t0", 2.0);
  s.decay.t1 = t.number("decay", "t1", 0.0);
  s.decay.samples = static_cast<int>(t.integer("decay", "samples", 40));
  s.decay.seed = static_cast<std::uint64_t>(t.integer("decay", "seed", 3));
  s.decay.r0 = t.number("decay", "r0", 3.0);
  s.decay.k_max = t.number("decay", "k_max", 1.5);
  s.decay.fit_t0 = t.number("decay", "fit_t0", 5.0);

  s.validate();
  return s;
}

ExperimentSpec parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("config: cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string emit_config(const ExperimentSpec& s) {
  std::ostringstream o;
  o << "command = " << s.command << "\n";
  o << "out_dir = " << s.out_dir << "\n";
  o << "seed = " << s.seed << "\n";
  o << "threads = " << s.threads << "\n";
  o << "project_every = " << s.project_every << "\n";
  o << "\n[grid]\nn = " << s.run.grid.n << "\nL = " << fmt(s.run.grid.half_length) << "\n";
  o << "\n[physics]\nm = " << fmt(s.run.m) << "\nbeta = " << fmt(s.run.beta) << "\n";
  o << "\n[profile]\nkind = " << to_string(s.run.profile.kind)
    << "\namplitude = " << fmt(s.run.profile.amplitude)
    << "\nradius = " << fmt(s.run.profile.radius) << "\n";
  o << "\n[soliton]\nb = " << fmt(s.run.sigma0.b) << "\nv = " << fmt(s.run.sigma0.v) << "\n";
  o << "\n[run]\ndt = " << fmt(s.run.dt) << "\nT = " << fmt(s.run.T)
    << "\nsample_every = " << s.run.sample_every << "\n";
  if (!s.run.snapshot_times.empty()) {
    o << "snapshots =";
    for (double x : s.run.snapshot_times) o << " " << fmt(x);
    o << "\n";
  }
  o << "\n[perturbation]\nkind = "
    << (s.run.perturbation.kind == PerturbationSpec::Kind::None ? "none" : "transversal_bump")
    << "\nseed = " << s.run.perturbation.seed
    << "\namplitude = " << fmt(s.run.perturbation.amplitude)
    << "\nr0 = " << fmt(s.run.perturbation.r0) << "\nk_max = " << fmt(s.run.perturbation.k_max)
    << "\nmodes = " << s.run.perturbation.modes << "\n";
  o << "\n[spectral]\nv = " << fmt(s.spectral.v) << "\nomega_min = " << fmt(s.spectral.omega_min)
    << "\nomega_max = " << fmt(s.spectral.omega_max) << "\nsamples = " << s.spectral.samples
    << "\n";
  o << "\n[wiener]\nk_max = " << fmt(s.wiener.k_max) << "\nn = " << s.wiener.n
    << "\nthreshold = " << fmt(s.wiener.threshold) << "\n";
  o << "\n[frozen]\nv = " << fmt(s.frozen.v) << "\nT = " << fmt(s.frozen.T)
    << "\ndt = " << fmt(s.frozen.dt) << "\nseed = " << s.frozen.seed
    << "\nr0 = " << fmt(s.frozen.r0) << "\nk_max = " << fmt(s.frozen.k_max)
    << "\nmode = " << s.frozen.mode << "\nfit_t0 = " << fmt(s.frozen.fit_t0) << "\n";
  o << "\n[decay]\nv = " << fmt(s.decay.v) << "\nt0 = " << fmt(s.decay.t0)
    << "\nt1 = " << fmt(s.decay.t1) << "\nsamples = " << s.decay.samples
    << "\nseed = " << s.decay.seed << "\nr0 = " << fmt(s.decay.r0)
    << "\nk_max = " << fmt(s.decay.k_max) << "\nfit_t0 = " << fmt(s.decay.fit_t0) << "\n";
  return o.str();
}

int run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);
  Manifest man;
  int rc = 0;
  if (spec.command == "wiener-check") rc = cmd_wiener(spec, man);
  else if (spec.command == "soliton") rc = cmd_soliton(spec, man);
  else if (spec.command == "simulate") rc = cmd_simulate(spec, man);
  else if (spec.command == "spectral") rc = cmd_spectral(spec, man);
  else if (spec.command == "frozen") rc = cmd_frozen(spec, man);
  else if (spec.command == "decay-probe") rc = cmd_decay_probe(spec, man);
  else if (spec.command == "scatter") rc = cmd_scatter(spec, man);
  else throw validation_error("config: unknown command '" + spec.command + "'");
  man.finish(spec, spec.out_dir);
  return rc;
}

}  // namespace kgs

#include "nsac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "nsac/diagnostics.hpp"
#include "nsac/harness.hpp"
#include "nsac/snapshot.hpp"

namespace nsac {

ConfigError::ConfigError(int line_no, const std::string& key, const std::string& what)
    : std::runtime_error(line_no > 0 ? "config line " + std::to_string(line_no) + " (" + key + "): " + what
                                     : "config (" + key + "): " + what),
      line(line_no),
      field(key) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, key, "expected a number, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(line, key, "expected a number, got '" + v + "'");
  return x;
}

long to_long(const std::string& v, int line, const std::string& key) {
  std::size_t pos = 0;
  long x = 0;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, key, "expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(line, key, "expected an integer, got '" + v + "'");
  return x;
}

std::vector<int> to_int_list(const std::string& v, int line, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<int>(to_long(item, line, key)));
  }
  if (out.empty()) throw ConfigError(line, key, "empty list");
  return out;
}

Snapshot make_snapshot(const Scheme& scheme, const State& s) {
  Snapshot snap;
  snap.meta.n = scheme.disc().mesh().cells_per_axis();
  snap.meta.dim = 2;
  snap.meta.time = s.time;
  snap.meta.step = s.step;
  snap.q["rho"] = s.rho;
  snap.v["u"] = s.u;
  snap.x["c"] = s.c;
  return snap;
}

State state_from_snapshot(const Scheme& scheme, const Snapshot& snap) {
  const int n = scheme.disc().mesh().cells_per_axis();
  if (snap.meta.n != n || snap.meta.dim != 2) {
    throw ConfigError(0, "initial_snapshot", "snapshot mesh n = " + std::to_string(snap.meta.n) +
                                                 " does not match config n = " + std::to_string(n));
  }
  auto q = snap.q.find("rho");
  auto v = snap.v.find("u");
  auto x = snap.x.find("c");
  if (q == snap.q.end() || v == snap.v.end() || x == snap.x.end()) {
    throw ConfigError(0, "initial_snapshot", "snapshot must contain fields rho (Q), u (V) and c (X)");
  }
  State s;
  s.step = snap.meta.step;
  s.time = snap.meta.time;
  s.rho = q->second;
  s.u = v->second;
  s.c = x->second;
  if (s.rho.values.size() != scheme.disc().num_elements() || s.u.values.size() != 2 * scheme.disc().num_faces() ||
      s.c.values.size() != 3 * scheme.disc().num_elements()) {
    throw ConfigError(0, "initial_snapshot", "field sizes do not match the mesh");
  }
  if (s.rho.values.minCoeff() <= 0.0) throw ConfigError(0, "initial_snapshot", "density must be positive");
  return s;
}

}  // namespace

RunConfig parse_config(std::istream& is) {
  RunConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(line, text, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string val = trim(text.substr(eq + 1));
    if (val.empty()) throw ConfigError(line, key, "missing value");
    Params& p = cfg.params;
    if (key == "n") cfg.n = static_cast<int>(to_long(val, line, key));
    else if (key == "d") p.dim = static_cast<int>(to_long(val, line, key));
    else if (key == "nu") p.nu = to_double(val, line, key);
    else if (key == "lambda") p.lambda = to_double(val, line, key);
    else if (key == "gamma") p.gamma = to_double(val, line, key);
    else if (key == "a") p.a = to_double(val, line, key);
    else if (key == "epsilon") p.epsilon = to_double(val, line, key);
    else if (key == "beta") p.beta = to_double(val, line, key);
    else if (key == "dt_factor") p.dt_factor = to_double(val, line, key);
    else if (key == "T") p.final_time = to_double(val, line, key);
    else if (key == "steps") cfg.steps = static_cast<int>(to_long(val, line, key));
    else if (key == "newton_tol") p.newton_tol = to_double(val, line, key);
    else if (key == "newton_max_iterations") p.newton_max_iterations = static_cast<int>(to_long(val, line, key));
    else if (key == "homotopy_initial_step") p.homotopy_initial_step = to_double(val, line, key);
    else if (key == "homotopy_min_step") p.homotopy_min_step = to_double(val, line, key);
    else if (key == "preset") cfg.preset = val;
    else if (key == "const_c") cfg.const_c = to_double(val, line, key);
    else if (key == "initial_snapshot") cfg.initial_snapshot = val;
    else if (key == "snapshot_every") cfg.snapshot_every = static_cast<int>(to_long(val, line, key));
    else if (key == "n_list") cfg.n_list = to_int_list(val, line, key);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(val, line, key));
    else if (key == "check_samples") cfg.check_samples = static_cast<int>(to_long(val, line, key));
    else if (key == "check_tol_scale") cfg.check_tol_scale = to_double(val, line, key);
    else throw ConfigError(line, key, "unknown key");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(0, "--config", "cannot open '" + path + "'");
  return parse_config(is);
}

void validate_config(const RunConfig& cfg) {
  if (cfg.n < 1) throw ConfigError(0, "n", "must be >= 1");
  if (cfg.steps < 0) throw ConfigError(0, "steps", "must be >= 0");
  if (cfg.snapshot_every < 0) throw ConfigError(0, "snapshot_every", "must be >= 0");
  if (cfg.check_samples < 1) throw ConfigError(0, "check_samples", "must be >= 1");
  if (!(cfg.check_tol_scale >= 0.0)) throw ConfigError(0, "check_tol_scale", "must be >= 0");
  const auto names = preset_names();
  if (cfg.initial_snapshot.empty() && std::find(names.begin(), names.end(), cfg.preset) == names.end()) {
    throw ConfigError(0, "preset", "unknown preset '" + cfg.preset + "'");
  }
  const AdmissibilityReport rep = theorem_condition_check(cfg.params);
  if (!rep.admissible()) throw ConfigError(0, "admissibility", trim(rep.summary()));
  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& ex) {
    const std::string msg = ex.what();
    const auto colon = msg.find(':');
    throw ConfigError(0, msg.substr(0, colon), trim(msg.substr(colon + 1)));
  }
}

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  try {
    validate_config(cfg);
    const double h = Mesh::uniform_torus(cfg.n, 2).h();
    const AdmissibilityReport rep = theorem_condition_check(cfg.params, h);
    if (!rep.admissible()) throw ConfigError(0, "admissibility", trim(rep.summary()));

    Scheme scheme(Discretization(Mesh::uniform_torus(cfg.n, 2)), cfg.params);
    State initial = cfg.initial_snapshot.empty()
                        ? scheme.initial_state(preset(cfg.preset, cfg.const_c))
                        : state_from_snapshot(scheme, read_snapshot_file(cfg.initial_snapshot));

    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path out(cfg.out_dir);
    std::ofstream csv(out / "energy.csv");
    if (!csv) throw ConfigError(0, "--out", "cannot write to '" + cfg.out_dir + "'");
    write_energy_csv_header(csv);

    const double energy0 = energy(scheme, initial).total();
    double worst_identity = 0.0;
    bool all_consistent = true;
    auto on_step = [&](const State& prev, const StepResult& res) {
      const EnergyReport r = energy_report(scheme, res.state, prev);
      write_energy_csv_row(csv, r);
      worst_identity = std::max(worst_identity, r.residual);
      all_consistent = all_consistent && r.consistent(energy0);
      if (cfg.snapshot_every > 0 && res.state.step % cfg.snapshot_every == 0) {
        std::ostringstream name;
        name << "snapshot_" << std::setw(6) << std::setfill('0') << res.state.step << ".txt";
        write_snapshot_file((out / name.str()).string(), make_snapshot(scheme, res.state));
      }
    };

    Trajectory traj;
    try {
      traj = cfg.steps > 0 ? scheme.run_steps(initial, cfg.steps, on_step)
                           : scheme.run(initial, cfg.params.final_time, on_step);
    } catch (const NonConvergence& ex) {
      log << "non-convergence: " << ex.what() << "\n";
      return kExitNonConvergence;
    }
    write_snapshot_file((out / "snapshot_final.txt").string(), make_snapshot(scheme, traj.states.back()));
    log << "run: n = " << cfg.n << ", steps = " << traj.steps.size() << ", t = " << traj.states.back().time
        << ", max r_E = " << worst_identity << (all_consistent ? "" : " (energy ledger flagged)") << "\n";
    return kExitOk;
  } catch (const ConfigError& ex) {
    log << ex.what() << "\n";
    return kExitConfig;
  } catch (const SnapshotError& ex) {
    log << ex.what() << "\n";
    return kExitConfig;
  }
}

int cmd_check(const RunConfig& cfg, std::ostream& log) {
  try {
    if (cfg.check_samples < 1) throw ConfigError(0, "check_samples", "must be >= 1");
    if (!(cfg.check_tol_scale >= 0.0)) throw ConfigError(0, "check_tol_scale", "must be >= 0");
    if (!(cfg.params.beta > 0.0)) throw ConfigError(0, "beta", "must be > 0");
    if (!(cfg.params.epsilon > 0.0)) throw ConfigError(0, "epsilon", "must be > 0");
  } catch (const ConfigError& ex) {
    log << ex.what() << "\n";
    return kExitConfig;
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.5, 2.0);
  auto random_vec = [&](Eigen::Index n, auto& dist) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
  };

  struct Row {
    std::string name;
    double worst = 0.0;
    double tol = 0.0;
  };
  std::vector<Row> rows{{"flux_identity", 0.0, 1e-12},
                        {"B_symmetry", 0.0, 1e-12},
                        {"dtB_identity", 0.0, 1e-12},
                        {"laplacian_adjoint", 0.0, 1e-11},
                        {"mass_row", 0.0, 1e-12}};

  for (int n : {2, 4}) {
    const Discretization disc(Mesh::uniform_torus(n, 2));
    const DgOperators ops(disc, cfg.params.beta);
    const Scheme scheme(disc, [&] {
      Params p = cfg.params;
      p.dim = 2;
      return p;
    }());
    for (int s = 0; s < cfg.check_samples; ++s) {
      const FieldQ rho{random_vec(disc.num_elements(), pos)};
      const FieldV u{random_vec(2 * disc.num_faces(), sym)};
      const FluxIdentity fi = flux_identity_check(disc, rho, u, cfg.params.epsilon);
      rows[0].worst = std::max(rows[0].worst, fi.relative());

      const FieldX v{random_vec(3 * disc.num_elements(), sym)};
      const FieldX w{random_vec(3 * disc.num_elements(), sym)};
      const double bvw = bilinear_form_direct(disc, v, w, cfg.params.beta);
      const double bwv = bilinear_form_direct(disc, w, v, cfg.params.beta);
      const double bvv = ops.bilinear(v, v);
      const double bww = ops.bilinear(w, w);
      const double scale = std::max({1.0, std::abs(bvv), std::abs(bww)});
      rows[1].worst = std::max(rows[1].worst, std::abs(bvw - bwv) / scale);
      const FieldX diff{v.values - w.values};
      const double lhs = bilinear_form_direct(disc, v, diff, cfg.params.beta);
      const double rhs = 0.5 * bvv - 0.5 * bww + 0.5 * ops.bilinear(diff, diff);
      rows[2].worst = std::max(rows[2].worst, std::abs(lhs - rhs) / scale);

      if (n == 2) {
        // -int Delta_h v w = B(v, w) for every basis function w of X_h.
        const Eigen::VectorXd lhs_all = -(ops.mass_matrix() * ops.laplacian(v).values());
        for (int i = 0; i < 3 * disc.num_elements(); ++i) {
          FieldX e = zero_X(disc);
          e.values[i] = 1.0;
          const double b = bilinear_form_direct(disc, v, e, cfg.params.beta);
          rows[3].worst = std::max(rows[3].worst, std::abs(lhs_all[i] - b) / std::max(1.0, std::sqrt(std::abs(bvv))));
        }
      }

      // The rho rows of the residual sum to the mass change.
      State prev;
      prev.rho = FieldQ{random_vec(disc.num_elements(), pos)};
      prev.u = FieldV{random_vec(2 * disc.num_faces(), sym)};
      prev.c = FieldX{random_vec(3 * disc.num_elements(), sym)};
      State cand;
      cand.rho = rho;
      cand.u = u;
      cand.c = v;
      const double dt = scheme.dt();
      const Eigen::VectorXd res = scheme.assemble(scheme.pack(cand), prev, dt, 1.0, false).residual;
      double mass_change = 0.0;
      for (int k = 0; k < disc.num_elements(); ++k) {
        mass_change += disc.element(k).area * (rho.values[k] - prev.rho.values[k]) / dt;
      }
      const double row_sum = res.head(disc.num_elements()).sum();
      rows[4].worst = std::max(rows[4].worst, std::abs(row_sum - mass_change) / std::max(1.0, std::abs(mass_change)));
    }
  }

  bool ok = true;
  for (Row& r : rows) {
    const double tol = r.tol * cfg.check_tol_scale;
    const bool pass = r.worst <= tol;
    ok = ok && pass;
    log << std::left << std::setw(20) << r.name << " max residual " << std::scientific << std::setprecision(3)
        << r.worst << "  tol " << tol << (pass ? "  ok" : "  FAIL") << "\n";
  }
  log << std::defaultfloat;
  return ok ? kExitOk : kExitIdentity;
}

int cmd_study(const RunConfig& cfg, std::ostream& log) {
  ConvergenceTable table;
  try {
    validate_config(cfg);
    table = reference_convergence_study(cfg.preset, cfg.n_list, cfg.params);
  } catch (const ConfigError& ex) {
    log << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& ex) {
    log << "config (n_list): " << ex.what() << "\n";
    return kExitConfig;
  }
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream csv(std::filesystem::path(cfg.out_dir) / "study.csv");
  if (!csv) {
    log << "cannot write to '" << cfg.out_dir << "'\n";
    return kExitConfig;
  }
  write_study_csv(csv, table);
  write_study_csv(log, table);
  if (!table.complete) {
    log << "study incomplete: " << table.failure << "\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

}  // namespace nsac

#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "plot_script.hpp"
#include "sfg/ensemble.hpp"
#include "sfg/io/config.hpp"
#include "sfg/io/csv.hpp"
#include "sfg/observables.hpp"
#include "sfg/spectrum.hpp"
#include "sfg/stability.hpp"
#include "sfg/steady_state.hpp"

namespace sfg::cli {

namespace fs = std::filesystem;
using io::RunConfig;
using io::Table;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline void add_series(Table& t, const std::string& name, const CorrelationSeries& s, double scale = 1.0) {
  std::vector<double> v = s.value, e = s.se;
  for (auto& x : v) x *= scale;
  for (auto& x : e) x *= scale;
  t.add(name, std::move(v));
  t.add(name + "_se", std::move(e));
}

inline fs::path out_file(const RunConfig& c, const std::string& name) { return fs::path(c.output) / name; }

inline void emit(const fs::path& csv, const Table& t, io::RunMetadata meta, std::ostream& log) {
  io::write_csv(csv, t);
  io::write_metadata(csv, t, meta);
  log << "wrote " << csv.string() << " (" << t.rows() << " rows)\n";
}

// ---------------------------------------------------------------- steady

inline void run_steady(const RunConfig& c, std::ostream& log) {
  const auto ss = solve_steady(c.params);
  const auto st = stability(c.params, ss);
  Table t;
  const auto put = [&](const std::string& n, double v) { t.add(n, {v}); };
  put("alpha1_re", ss.alpha1.real());
  put("alpha1_im", ss.alpha1.imag());
  put("alpha2_re", ss.alpha2.real());
  put("alpha2_im", ss.alpha2.imag());
  put("alpha3_re", ss.alpha3.real());
  put("alpha3_im", ss.alpha3.imag());
  put("residual", ss.residual);
  put("stability_margin", st.margin);
  nlohmann::json extra;
  extra["method"] = ss.method == SteadyStateMethod::closed_form_symmetric ? "closed-form-symmetric" : "numeric-general";
  extra["stable"] = st.stable;
  log.precision(10);
  log << "alpha1 = " << ss.alpha1 << "\nalpha2 = " << ss.alpha2 << "\nalpha3 = " << ss.alpha3
      << "\nresidual = " << ss.residual << "\nmargin = " << st.margin << (st.stable ? " (stable)" : " (unstable)")
      << '\n';
  if (c.params.is_symmetric() && c.params.eps1.imag() == 0.0 && c.params.gamma1 > 0.0) {
    const auto cp = critical_point(c.params);
    const double amp = ss.alpha1.real() / cp.alpha_c;
    put("epsilon_c", cp.epsilon_c);
    put("alpha_c", cp.alpha_c);
    put("amplitude_ratio", amp);
    put("intensity_ratio", amp * amp);
    log << "epsilon_c = " << cp.epsilon_c << ", alpha/alpha_c = " << amp << ", (alpha/alpha_c)^2 = " << amp * amp
        << '\n';
  }
  emit(out_file(c, "steady.csv"), t, {&c, "classical steady state", std::vector<std::string>(t.header.size(), "1")},
       log);

  Table ev;
  std::vector<double> re, im;
  for (const auto& e : st.eigenvalues) re.push_back(e.real()), im.push_back(e.imag());
  ev.add("eigenvalue_re", re);
  ev.add("eigenvalue_im", im);
  emit(out_file(c, "eigenvalues.csv"), ev, {&c, "drift-matrix eigenvalues", {"1/time", "1/time"}}, log);
}

// --------------------------------------------------------- stability map

inline std::vector<BoundarySample> run_stability_map(const RunConfig& c, std::ostream& log, const std::string& stem) {
  const auto ratios = c.ratio_grid();
  const auto rows = stability_map(c.params.kappa, c.params.gamma1, ratios, c.eps_min, c.eps_max);
  Table t;
  std::vector<double> r, e, cf;
  for (const auto& row : rows) {
    r.push_back(row.gamma3_over_gamma);
    e.push_back(row.epsilon.value_or(kNaN));
    cf.push_back(row.closed_form);
    if (!row.epsilon) log << "ratio " << row.gamma3_over_gamma << ": " << row.diagnostic << '\n';
  }
  t.add("gamma3_over_gamma", r);
  t.add("epsilon_boundary", e);
  t.add("epsilon_closed_form", cf);
  const auto csv = out_file(c, stem + ".csv");
  emit(csv, t, {&c, "stability boundary by bisection on the drift-matrix margin", {"1", "field/time", "field/time"}},
       log);
  write_plot_script(csv, {"Stability boundary (unstable to the right)", "epsilon_boundary", "epsilon",
                          "gamma3 / gamma", {{"gamma3_over_gamma", "boundary", ""}}, std::nullopt, {}});
  return rows;
}

// -------------------------------------------------------------- spectrum

inline Table spectrum_table(const SpectrumResult& r) {
  Table t;
  std::vector<double> w;
  for (double x : r.omegas) w.push_back(x / r.params.gamma1);
  t.add("omega", w);
  const char* names[6] = {"V_X1", "V_Y1", "V_X2", "V_Y2", "V_X3", "V_Y3"};
  for (int q = 0; q < 6; ++q) t.add(names[q], spectral_variance(r, q));
  std::vector<double> cx, cy;
  for (const auto& S : r.output) cx.push_back(S(quad::X1, quad::X2)), cy.push_back(S(quad::Y1, quad::Y2));
  t.add("C_X1X2", cx);
  t.add("C_Y1Y2", cy);
  t.add("DS_plus", spectral_duan_simon(r, +1));
  t.add("DS_minus", spectral_duan_simon(r, -1));
  t.add("EPR12", spectral_epr(r, 1, 2));
  t.add("EPR21", spectral_epr(r, 2, 1));
  return t;
}

inline nlohmann::json spectrum_extra(const SpectrumResult& r) {
  nlohmann::json j;
  j["alpha1"] = {r.steady.alpha1.real(), r.steady.alpha1.imag()};
  j["alpha2"] = {r.steady.alpha2.real(), r.steady.alpha2.imag()};
  j["alpha3"] = {r.steady.alpha3.real(), r.steady.alpha3.imag()};
  j["stability_margin"] = r.stability.margin;
  j["max_hermitian_asymmetry"] = r.max_hermitian_asymmetry;
  return j;
}

inline void run_spectrum(const RunConfig& c, std::ostream& log) {
  const auto r = compute_spectrum(c.params, c.grid);
  const auto t = spectrum_table(r);
  const auto csv = out_file(c, "spectrum.csv");
  emit(csv, t, {&c, "output quadrature spectra, shot noise = 1", std::vector<std::string>(t.header.size(), "1"), 0, 0,
                0, spectrum_extra(r)},
       log);
  write_plot_script(csv, {"Output spectra", "omega", "omega / gamma1", "spectral variance",
                          {{"V_X3", "V(X3)", ""}, {"EPR12", "EPR12", ""}, {"EPR21", "EPR21", ""}}, 1.0, {}});
}

// -------------------------------------------------------------- dynamics

struct EnsembleRun {
  MomentTable moments;
  Table table;
  std::vector<std::string> omitted;
  std::map<std::string, double> imag_ratio;  ///< largest |Im| / (5 SE) per column
};

// Evaluates a series, or records why it is undefined for this run.
inline void try_series(Table& t, EnsembleRun& run, const std::string& name,
                       const std::function<CorrelationSeries()>& make, double scale = 1.0) {
  try {
    const auto s = make();
    add_series(t, name, s, scale);
    run.imag_ratio[name] = s.max_imag_ratio;
  } catch (const UndefinedObservable& e) {
    run.omitted.push_back(name + ": " + e.what());
  }
}

inline EnsembleRun run_dynamics(const RunConfig& c) {
  EnsembleRun run;
  run.moments = run_ensemble(c.params, c.initial_state(), c.trajectory());
  const auto& m = run.moments;
  Table& t = run.table;
  t.add(m.time_label, m.times);
  for (int j = 1; j <= 3; ++j) try_series(t, run, "n" + std::to_string(j), [&] { return mean_intensity(m, j); });
  try_series(t, run, "V_X1", [&] { return quadrature_variance(m, QuadratureSpec::X(1)); });
  try_series(t, run, "V_Y1", [&] { return quadrature_variance(m, QuadratureSpec::Y(1)); });
  try_series(t, run, "V_X3", [&] { return quadrature_variance(m, QuadratureSpec::X(3)); });
  try_series(t, run, "V_Y3", [&] { return quadrature_variance(m, QuadratureSpec::Y(3)); });
  try_series(t, run, "Fano_N1N2", [&] { return fano_sum(m); });
  try_series(t, run, "Fano_N1", [&] { return fano_mode(m, 1); });
  try_series(t, run, "DS_plus_over_4", [&] { return duan_simon(m, +1); }, 0.25);
  try_series(t, run, "DS_minus_over_4", [&] { return duan_simon(m, -1); }, 0.25);
  try_series(t, run, "EPR12", [&] { return epr_product(m, 1, 2); });
  try_series(t, run, "EPR21", [&] { return epr_product(m, 2, 1); });
  return run;
}

inline io::RunMetadata dynamics_metadata(const RunConfig& c, const EnsembleRun& run, std::string description) {
  io::RunMetadata meta{&c, std::move(description), {}, run.moments.n_trajectories, run.moments.n_used,
                       run.moments.n_diverged};
  for (const auto& h : run.table.header)
    meta.units.push_back(h == "zeta" ? "kappa |alpha1(0)| t" : h == "t" ? "time (1/gamma units)" : "1");
  meta.extra["omitted"] = run.omitted;
  meta.extra["max_imag_ratio"] = run.imag_ratio;
  return meta;
}

inline void add_semiclassical(const RunConfig& c, Table& t, nlohmann::json& extra) {
  const auto path = semiclassical_trajectory(c.params, c.initial_state(), c.trajectory());
  for (int j = 1; j <= 3; ++j) {
    std::vector<double> n(t.rows(), kNaN);
    for (std::size_t k = 0; k < path.states.size() && k < n.size(); ++k) {
      const auto& s = path.states[k];
      const cplx a = j == 1 ? s.a1 : j == 2 ? s.a2 : s.a3;
      n[k] = std::norm(a);
    }
    t.add("n" + std::to_string(j) + "_meanfield", n);
  }
  extra["meanfield_diverged"] = path.diverged;
  if (c.mode == IntegrationMode::cavity) {
    const auto ss = solve_steady(c.params);
    extra["fixed_point_n1"] = std::norm(ss.alpha1);
    extra["fixed_point_n2"] = std::norm(ss.alpha2);
    extra["fixed_point_n3"] = std::norm(ss.alpha3);
  }
}

inline void run_simulate(const RunConfig& c, std::ostream& log) {
  auto run = run_dynamics(c);
  auto meta = dynamics_metadata(c, run, "positive-P ensemble moments (" + to_string(c.mode) + ")");
  add_semiclassical(c, run.table, meta.extra);
  meta.units.resize(run.table.header.size(), "1");
  const auto csv = out_file(c, "simulate.csv");
  emit(csv, run.table, meta, log);
  log << run.moments.n_used << " of " << run.moments.n_trajectories << " trajectories used\n";
  for (const auto& o : run.omitted) log << "omitted " << o << '\n';
  write_plot_script(csv, {"Mean intensities", run.moments.time_label, run.moments.time_label, "photon number",
                          {{"n1", "n1", "n1_se"}, {"n2", "n2", "n2_se"}, {"n3", "n3", "n3_se"}}, std::nullopt, {}});
}

// ------------------------------------------------------------- reproduce

inline void reproduce_travelling(const RunConfig& c, const io::FigurePreset& preset, std::ostream& log) {
  auto run = run_dynamics(c);
  auto meta = dynamics_metadata(c, run, preset.title);
  const auto csv = out_file(c, preset.id + ".csv");
  emit(csv, run.table, meta, log);
  PlotSpec plot{preset.title, "zeta", "zeta = kappa |alpha1(0)| t", "", {}, std::nullopt, {}};
  if (preset.id == "fig1") {
    plot.y_label = "mean intensity";
    plot.curves = {{"n1", "n1", "n1_se"}, {"n2", "n2", "n2_se"}, {"n3", "n3", "n3_se"}};
  } else if (preset.id == "fig2") {
    plot.y_label = "variance / Fano factor";
    plot.curves = {{"V_X3", "V(X3)", "V_X3_se"}, {"Fano_N1N2", "F(N1+N2)", "Fano_N1N2_se"}};
    plot.threshold = 1.0;
  } else {
    plot.y_label = "correlation";
    plot.curves = {{"DS_plus_over_4", "[V(X1+X2)+V(Y1-Y2)]/4", "DS_plus_over_4_se"},
                   {"EPR12", "EPR12", "EPR12_se"},
                   {"EPR21", "EPR21", "EPR21_se"}};
    plot.threshold = 1.0;
  }
  write_plot_script(csv, plot);
}

inline void reproduce_pump_family(const RunConfig& c, const io::FigurePreset& preset, std::ostream& log) {
  Table t;
  nlohmann::json extra = nlohmann::json::object();
  PlotSpec plot{preset.title, "omega", "omega / gamma1", "", {}, 1.0, {}};
  std::string column, label;
  if (preset.id == "fig4") column = "V_X3", label = "V(X3)", plot.y_label = "V(X3, omega)";
  if (preset.id == "fig5")
    column = "DS_plus", label = "V(X1+X2)+V(Y1-Y2)", plot.y_label = "Duan-Simon", plot.threshold = 4.0;
  if (preset.id == "fig6") column = "EPR12", label = "EPR12", plot.y_label = "EPR product";
  for (double eps : preset.pump_family) {
    SystemParams p = c.params;
    p.eps1 = p.eps2 = cplx{eps, 0.0};
    const auto r = compute_spectrum(p, c.grid);
    const auto st = spectrum_table(r);
    if (t.rows() == 0) t.add("omega", st.columns[0]);
    const std::string suffix = "_eps" + io::format_cell(eps);
    for (std::size_t i = 0; i < st.header.size(); ++i)
      if (st.header[i] == column || (preset.id == "fig6" && st.header[i] == "EPR21"))
        t.add(st.header[i] + suffix, st.columns[i]);
    plot.curves.push_back({column + suffix, label + ", eps=" + io::format_cell(eps), ""});

    const auto cp = critical_point(p);
    const double amp = r.steady.alpha1.real() / cp.alpha_c;
    auto e = spectrum_extra(r);
    e["amplitude_ratio"] = amp;
    e["intensity_ratio"] = amp * amp;
    extra["eps" + io::format_cell(eps)] = e;
    log << "eps = " << eps << ": alpha/alpha_c = " << amp << ", (alpha/alpha_c)^2 = " << amp * amp << '\n';
  }
  const auto csv = out_file(c, preset.id + ".csv");
  emit(csv, t, {&c, preset.title, std::vector<std::string>(t.header.size(), "1"), 0, 0, 0, extra}, log);
  write_plot_script(csv, plot);
}

inline void reproduce_asymmetric(const RunConfig& c, const io::FigurePreset& preset, std::ostream& log) {
  const auto r = compute_spectrum(c.params, c.grid);
  const auto t = spectrum_table(r);
  const auto csv = out_file(c, preset.id + ".csv");
  emit(csv, t, {&c, preset.title, std::vector<std::string>(t.header.size(), "1"), 0, 0, 0, spectrum_extra(r)}, log);
  write_plot_script(csv, {preset.title, "omega", "omega / gamma1", "EPR product",
                          {{"EPR12", "EPR12 (2 steers 1)", ""}, {"EPR21", "EPR21 (1 steers 2)", ""}}, 1.0, {}});
  double min12 = INFINITY, min21 = INFINITY;
  for (const auto& S : r.output) {
    min12 = std::min(min12, epr_value(S, 1, 2));
    min21 = std::min(min21, epr_value(S, 2, 1));
  }
  log << "min EPR12 = " << min12 << ", min EPR21 = " << min21 << '\n';
}

inline void reproduce_above_threshold(const RunConfig& c, const io::FigurePreset& preset, std::ostream& log) {
  auto run = run_dynamics(c);
  auto meta = dynamics_metadata(c, run, preset.title);
  add_semiclassical(c, run.table, meta.extra);
  meta.units.resize(run.table.header.size(), "1");
  const auto csv = out_file(c, preset.id + ".csv");
  emit(csv, run.table, meta, log);
  const double f1 = meta.extra["fixed_point_n1"], f3 = meta.extra["fixed_point_n3"];
  log << "semiclassical fixed point: n1 = " << f1 << ", n3 = " << f3 << '\n';
  write_plot_script(csv, {preset.title, "t", "t", "intracavity intensity",
                          {{"n1", "n1", "n1_se"}, {"n2", "n2", "n2_se"}, {"n3", "n3", "n3_se"}}, std::nullopt,
                          {f1, f3}});
}

inline void run_reproduce(const RunConfig& c, std::ostream& log) {
  const auto& preset = io::find_preset(c.figure);
  log << preset.id << ": " << preset.title << '\n';
  for (const auto& item : preset.checklist) log << "  expect: " << item << '\n';
  if (preset.full_scale_trajectories > 0.0 && c.n_traj > 0)
    log << "  trajectories: " << c.n_traj << " (full scale " << preset.full_scale_trajectories << ")\n";
  if (preset.id == "fig1" || preset.id == "fig2" || preset.id == "fig3") return reproduce_travelling(c, preset, log);
  if (preset.id == "stability") {
    run_stability_map(c, log, "stability");
    return;
  }
  if (!preset.pump_family.empty()) return reproduce_pump_family(c, preset, log);
  if (preset.id == "fig7") return reproduce_asymmetric(c, preset, log);
  if (preset.id == "fig8") return reproduce_above_threshold(c, preset, log);
}

inline void run(const RunConfig& c, std::ostream& log) {
  switch (c.command) {
    case io::Command::steady: return run_steady(c, log);
    case io::Command::stability_map: run_stability_map(c, log, "stability_map"); return;
    case io::Command::spectrum: return run_spectrum(c, log);
    case io::Command::simulate: return run_simulate(c, log);
    case io::Command::reproduce: return run_reproduce(c, log);
  }
}

}  // namespace sfg::cli

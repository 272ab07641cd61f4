#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sfg/errors.hpp"
#include "sfg/io/presets.hpp"
#include "sfg/io/run_config.hpp"

namespace sfg::io {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc{} || ptr != end) throw ContractViolation("cannot parse number '" + v + "'");
  return x;
}

template <class Int>
Int parse_int(const std::string& v) {
  Int x{};
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc{} || ptr != end) throw ContractViolation("cannot parse non-negative integer '" + v + "'");
  return x;
}

// Accepts "re" or "(re,im)".
inline cplx parse_complex(const std::string& v) {
  if (!v.empty() && v.front() == '(') {
    const auto comma = v.find(',');
    if (v.back() != ')' || comma == std::string::npos) throw ContractViolation("cannot parse complex '" + v + "'");
    return {parse_double(trim(std::string_view(v).substr(1, comma - 1))),
            parse_double(trim(std::string_view(v).substr(comma + 1, v.size() - comma - 2)))};
  }
  return {parse_double(v), 0.0};
}

inline std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline std::string format_complex(cplx z) {
  if (z.imag() == 0.0 && !std::signbit(z.imag())) return format_double(z.real());
  return "(" + format_double(z.real()) + "," + format_double(z.imag()) + ")";
}

inline Command parse_command(const std::string& v) {
  for (Command c : {Command::steady, Command::stability_map, Command::spectrum, Command::simulate, Command::reproduce})
    if (to_string(c) == v) return c;
  throw ContractViolation("unknown command '" + v + "'");
}

inline IntegrationMode parse_mode(const std::string& v) {
  if (v == "tw") return IntegrationMode::travelling_wave;
  if (v == "cavity") return IntegrationMode::cavity;
  throw ContractViolation("mode must be 'tw' or 'cavity', got '" + v + "'");
}

inline void require(bool ok, const char* invariant) {
  if (!ok) throw ContractViolation(std::string("invariant violated: ") + invariant);
}

inline bool finite_positive(double x) { return x > 0.0 && std::isfinite(x); }
inline bool finite_nonneg(double x) { return x >= 0.0 && std::isfinite(x); }
inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct Key {
  const char* name;
  const char* help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;  // empty = not rendered
};

}  // namespace detail

/// Every accepted key with its setter (which validates the single field) and
/// renderer. Key order is the render order.
inline const std::vector<detail::Key>& config_keys() {
  using namespace detail;
  using R = RunConfig;
  using S = const std::string&;
  static const std::vector<Key> keys = {
      {"command", "steady | stability-map | spectrum | simulate | reproduce",
       [](R& c, S v) { c.command = parse_command(v); }, [](const R& c) { return to_string(c.command); }},
      {"figure", "reproduce target fig1..fig8 or stability", [](R& c, S v) { c.figure = v; },
       [](const R& c) -> std::optional<std::string> {
         if (c.figure.empty()) return std::nullopt;
         return c.figure;
       }},
      {"kappa", "nonlinear coupling (> 0)",
       [](R& c, S v) {
         c.params.kappa = parse_double(v);
         require(finite_positive(c.params.kappa), "kappa > 0");
       },
       [](const R& c) { return format_double(c.params.kappa); }},
      {"gamma1", "loss rate of mode 1 (>= 0)",
       [](R& c, S v) {
         c.params.gamma1 = parse_double(v);
         require(finite_nonneg(c.params.gamma1), "gamma1 >= 0");
       },
       [](const R& c) { return format_double(c.params.gamma1); }},
      {"gamma2", "loss rate of mode 2 (>= 0)",
       [](R& c, S v) {
         c.params.gamma2 = parse_double(v);
         require(finite_nonneg(c.params.gamma2), "gamma2 >= 0");
       },
       [](const R& c) { return format_double(c.params.gamma2); }},
      {"gamma3", "loss rate of mode 3 (>= 0)",
       [](R& c, S v) {
         c.params.gamma3 = parse_double(v);
         require(finite_nonneg(c.params.gamma3), "gamma3 >= 0");
       },
       [](const R& c) { return format_double(c.params.gamma3); }},
      {"eps1", "pump of mode 1, re or (re,im)",
       [](R& c, S v) {
         c.params.eps1 = parse_complex(v);
         require(finite(c.params.eps1), "eps1 finite");
       },
       [](const R& c) { return format_complex(c.params.eps1); }},
      {"eps2", "pump of mode 2, re or (re,im)",
       [](R& c, S v) {
         c.params.eps2 = parse_complex(v);
         require(finite(c.params.eps2), "eps2 finite");
       },
       [](const R& c) { return format_complex(c.params.eps2); }},
      {"mode", "integration mode: tw | cavity", [](R& c, S v) { c.mode = parse_mode(v); },
       [](const R& c) { return to_string(c.mode); }},
      {"dt", "step (scaled time for tw, raw time for cavity); default 5e-4 or 1e-3/max(gamma)",
       [](R& c, S v) {
         if (v == "default") {
           c.dt.reset();
           return;
         }
         c.dt = parse_double(v);
         require(finite_positive(*c.dt), "dt > 0");
       },
       [](const R& c) { return c.dt ? format_double(*c.dt) : std::string("default"); }},
      {"t_max", "final time",
       [](R& c, S v) {
         c.t_max = parse_double(v);
         require(finite_positive(c.t_max), "t_max > 0");
       },
       [](const R& c) { return format_double(c.t_max); }},
      {"sample_stride", "steps between recorded samples",
       [](R& c, S v) {
         c.sample_stride = parse_int<std::size_t>(v);
         require(c.sample_stride >= 1, "sample_stride >= 1");
       },
       [](const R& c) { return std::to_string(c.sample_stride); }},
      {"n_traj", "number of trajectories (>= 2)",
       [](R& c, S v) {
         c.n_traj = parse_int<std::size_t>(v);
         require(c.n_traj >= 2, "n_traj >= 2");
       },
       [](const R& c) { return std::to_string(c.n_traj); }},
      {"seed", "64-bit noise seed", [](R& c, S v) { c.seed = parse_int<std::uint64_t>(v); },
       [](const R& c) { return std::to_string(c.seed); }},
      {"threads", "worker threads, 0 = SFG_THREADS or all cores (never changes results)",
       [](R& c, S v) { c.threads = parse_int<unsigned>(v); }, [](const R& c) { return std::to_string(c.threads); }},
      {"alpha1_0", "initial coherent amplitude of mode 1",
       [](R& c, S v) {
         c.alpha1_0 = parse_complex(v);
         require(finite(c.alpha1_0), "alpha1_0 finite");
       },
       [](const R& c) { return format_complex(c.alpha1_0); }},
      {"alpha2_0", "initial coherent amplitude of mode 2",
       [](R& c, S v) {
         c.alpha2_0 = parse_complex(v);
         require(finite(c.alpha2_0), "alpha2_0 finite");
       },
       [](const R& c) { return format_complex(c.alpha2_0); }},
      {"alpha3_0", "initial coherent amplitude of mode 3",
       [](R& c, S v) {
         c.alpha3_0 = parse_complex(v);
         require(finite(c.alpha3_0), "alpha3_0 finite");
       },
       [](const R& c) { return format_complex(c.alpha3_0); }},
      {"omega_max", "spectrum grid half-width in units of gamma1",
       [](R& c, S v) {
         c.grid.omega_max = parse_double(v);
         require(finite_positive(c.grid.omega_max), "omega_max > 0");
       },
       [](const R& c) { return format_double(c.grid.omega_max); }},
      {"omega_points", "spectrum grid points",
       [](R& c, S v) {
         c.grid.points = parse_int<std::size_t>(v);
         require(c.grid.points >= 1, "omega_points >= 1");
       },
       [](const R& c) { return std::to_string(c.grid.points); }},
      {"ratio_min", "smallest gamma3/gamma in the stability map",
       [](R& c, S v) {
         c.ratio_min = parse_double(v);
         require(finite_positive(c.ratio_min), "ratio_min > 0");
       },
       [](const R& c) { return format_double(c.ratio_min); }},
      {"ratio_max", "largest gamma3/gamma in the stability map",
       [](R& c, S v) {
         c.ratio_max = parse_double(v);
         require(finite_positive(c.ratio_max), "ratio_max > 0");
       },
       [](const R& c) { return format_double(c.ratio_max); }},
      {"ratio_points", "rows in the stability map",
       [](R& c, S v) {
         c.ratio_points = parse_int<std::size_t>(v);
         require(c.ratio_points >= 1, "ratio_points >= 1");
       },
       [](const R& c) { return std::to_string(c.ratio_points); }},
      {"eps_min", "lower pump bracket for the stability map",
       [](R& c, S v) {
         c.eps_min = parse_double(v);
         require(finite_nonneg(c.eps_min), "eps_min >= 0");
       },
       [](const R& c) { return format_double(c.eps_min); }},
      {"eps_max", "upper pump bracket for the stability map",
       [](R& c, S v) {
         c.eps_max = parse_double(v);
         require(finite_positive(c.eps_max), "eps_max > 0");
       },
       [](const R& c) { return format_double(c.eps_max); }},
      {"output", "output directory", [](R& c, S v) { c.output = v; }, [](const R& c) { return c.output; }},
  };
  return keys;
}

/// Applies one key=value assignment; `where` labels diagnostics.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
  for (const auto& k : config_keys()) {
    if (key != k.name) continue;
    try {
      k.set(cfg, value);
    } catch (const ContractViolation& e) {
      throw ConfigError(key + ": " + e.what(), line);
    }
    return;
  }
  throw ConfigError("unknown key '" + key + "'", line);
}

/// Checks relations between fields once all keys are set.
inline void validate(const RunConfig& cfg) {
  try {
    cfg.params.validate();
    cfg.grid.validate();
    if (cfg.ratio_max < cfg.ratio_min) throw ContractViolation("invariant violated: ratio_min <= ratio_max");
    if (!(cfg.eps_max > cfg.eps_min)) throw ContractViolation("invariant violated: eps_min < eps_max");
    if (cfg.command == Command::simulate || cfg.command == Command::reproduce) cfg.trajectory().validate();
    if (cfg.command == Command::reproduce && cfg.figure.empty())
      throw ContractViolation("reproduce needs a figure (fig1..fig8 or stability)");
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what(), 0);
  }
}

struct Setting {
  std::string key, value;
  int line;
};

inline std::vector<Setting> read_settings(std::string_view text) {
  std::vector<Setting> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + s + "'", line);
    out.push_back({detail::trim(std::string_view(s).substr(0, eq)), detail::trim(std::string_view(s).substr(eq + 1)), line});
  }
  return out;
}

/// Parses key=value text with '#' comments onto `base`. Naming a figure
/// (figure=figN, or the shorthand reproduce=figN) starts from that preset,
/// and every other key in the text then overrides it.
inline RunConfig parse_config(std::string_view text, RunConfig base = {}) {
  auto settings = read_settings(text);
  for (auto& s : settings) {
    if (s.key == "reproduce") {
      base = preset_config(s.value, s.line);
      s.key = "figure";
    } else if (s.key == "figure") {
      base = preset_config(s.value, s.line);
    }
  }
  for (const auto& s : settings) apply_setting(base, s.key, s.value, s.line);
  return base;
}

/// Inverse of parse_config: parse_config(render(c)) == c.
inline std::string render(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : config_keys())
    if (auto v = k.get(cfg)) out += std::string(k.name) + "=" + *v + "\n";
  return out;
}

}  // namespace sfg::io

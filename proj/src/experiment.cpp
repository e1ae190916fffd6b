// SPDX-License-Identifier: Apache-2.0
//
// relaycap - capacity simulator for beamformed MIMO multi-relay networks
// Copyright (C) 2026 The relaycap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "relaycap/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "relaycap/receiver.hpp"

#ifndef RELAYCAP_PRESET_DIR
#define RELAYCAP_PRESET_DIR "presets"
#endif

namespace relaycap {

namespace {

constexpr std::pair<SweepAxis, std::string_view> kAxisNames[] = {
    {SweepAxis::k, "K"},           {SweepAxis::e_sq, "e_sq"},
    {SweepAxis::pnr, "PNR"},       {SweepAxis::qnr, "QNR"},
    {SweepAxis::pnr_eq_qnr, "PNR_eq_QNR"}, {SweepAxis::k_dynamic_e, "K_dynamic_e"},
};

constexpr std::pair<Scheme, std::string_view> kSchemeNames[] = {
    {Scheme::mf, "MF"},
    {Scheme::mf_zf, "MF-ZF"},
    {Scheme::mf_rzf_fixed, "MF-RZF-fixed"},
    {Scheme::mf_rzf_opt, "MF-RZF-opt"},
    {Scheme::mf_rzf_conventional, "MF-RZF-conventional"},
    {Scheme::af_cutset, "AF-cutset"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& tok, const std::string& key) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v))
    throw ConfigError("'" + key + "': not a number: '" + tok + "'");
  return v;
}

std::size_t parse_count(const std::string& tok, const std::string& key) {
  const double v = parse_number(tok, key);
  if (v < 0.0 || v != std::floor(v) || v > 1e15) throw ConfigError("'" + key + "': expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& tok, const std::string& key) {
  if (tok == "true" || tok == "yes" || tok == "1") return true;
  if (tok == "false" || tok == "no" || tok == "0") return false;
  throw ConfigError("'" + key + "': expected true/false, got '" + tok + "'");
}

// "1, 2, 5..10, 20..80:20"
std::vector<double> parse_number_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw ConfigError("'" + key + "': empty list item");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number(item, key));
      continue;
    }
    const std::string lo_s = trim(item.substr(0, dots));
    std::string hi_s = trim(item.substr(dots + 2));
    double step = 1.0;
    if (const auto colon = hi_s.find(':'); colon != std::string::npos) {
      step = parse_number(trim(hi_s.substr(colon + 1)), key);
      hi_s = trim(hi_s.substr(0, colon));
    }
    const double lo = parse_number(lo_s, key), hi = parse_number(hi_s, key);
    if (!(step > 0.0)) throw ConfigError("'" + key + "': range step must be positive");
    if (hi < lo) throw ConfigError("'" + key + "': range end below start");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    if (count > 100000) throw ConfigError("'" + key + "': range too long");
    // lo + i*step rather than accumulation keeps grid points exact-ish.
    for (std::size_t i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  }
  return out;
}

std::vector<Scheme> parse_scheme_list(const std::string& text, const std::string& key) {
  std::vector<Scheme> out;
  for (const auto& item : split(text, ',')) {
    try {
      out.push_back(parse_scheme(item));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("'" + key + "': " + e.what());
    }
  }
  return out;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

bool is_k_axis(SweepAxis a) { return a == SweepAxis::k || a == SweepAxis::k_dynamic_e; }

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string series_label(const ErrorSeries& s) {
  return s.dynamic ? std::string("[e=dynamic]") : "[e=" + format_number(s.e) + "]";
}

std::optional<SchemeSetting> scheme_setting(Scheme s, const NetworkConfig& cfg) {
  switch (s) {
    case Scheme::mf: return SchemeSetting{BeamformerKind::mf, 0.0};
    case Scheme::mf_zf: return SchemeSetting{BeamformerKind::mf_zf, 0.0};
    case Scheme::mf_rzf_fixed: return SchemeSetting{BeamformerKind::mf_rzf, cfg.alpha};
    case Scheme::mf_rzf_opt: return SchemeSetting{BeamformerKind::mf_rzf, optimal_alpha(cfg)};
    case Scheme::mf_rzf_conventional: return SchemeSetting{BeamformerKind::mf_rzf, conventional_alpha(cfg)};
    case Scheme::af_cutset: return std::nullopt;
  }
  return std::nullopt;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

OracleRow oracle_cell(const SweepSpec& spec, const NetworkConfig& cfg, const SchemeSetting& setting,
                      double axis_value, std::string label) {
  NetworkConfig local = cfg;
  local.alpha = setting.alpha;
  local.kind = setting.kind;
  std::vector<double> gaps;
  std::size_t used = 0;
  for (std::size_t d = 0; d < spec.oracle_draws; ++d) {
    try {
      RngStream channel_rng(spec.master_seed, d);
      const auto real = draw_realization(cfg.m, cfg.n, cfg.k, cfg.e, channel_rng);
      const auto rho = exact_power_factors(setting.kind, real, local);
      const auto closed = post_snr(setting.kind, real, rho, local);
      RngStream symbol_rng(spec.master_seed, d, RngStream::Lane::symbols);
      const auto oracle = exact_snr_oracle(setting.kind, real, local, spec.oracle_symbols, symbol_rng);
      for (std::size_t s = 0; s < closed.streams(); ++s)
        gaps.push_back(std::abs(closed.gamma[s] - oracle.gamma[s]) / oracle.gamma[s]);
      ++used;
    } catch (const SingularMatrixError&) {
    } catch (const DegenerateBeamformerError&) {
    }
  }
  OracleRow row{axis_value, std::move(label), used, median(gaps), 0.0};
  for (double g : gaps) row.max_gap = std::max(row.max_gap, g);
  return row;
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  for (const auto& [a, name] : kAxisNames)
    if (a == axis) return name;
  return "?";
}

std::string_view to_string(Scheme scheme) {
  for (const auto& [s, name] : kSchemeNames)
    if (s == scheme) return name;
  return "?";
}

SweepAxis parse_axis(std::string_view name) {
  for (const auto& [a, n] : kAxisNames)
    if (n == name) return a;
  throw std::invalid_argument("unknown axis: " + std::string(name));
}

Scheme parse_scheme(std::string_view name) {
  for (const auto& [s, n] : kSchemeNames)
    if (n == name) return s;
  throw std::invalid_argument("unknown scheme: " + std::string(name));
}

void SweepSpec::validate() const {
  if (base.m < 1) throw ConfigError("M must be >= 1");
  if (base.n < base.m) throw ConfigError("N >= M required (N=" + std::to_string(base.n) + ", M=" +
                                         std::to_string(base.m) + ")");
  if (axis_values.empty()) throw ConfigError("sweep has no axis values");
  for (std::size_t i = 1; i < axis_values.size(); ++i)
    if (!(axis_values[i] > axis_values[i - 1])) throw ConfigError("axis values must be strictly increasing");
  if (schemes.empty()) throw ConfigError("no schemes requested");
  if (std::set<Scheme>(schemes.begin(), schemes.end()).size() != schemes.size())
    throw ConfigError("duplicate scheme");
  if (trials < 100) throw ConfigError("trials must be >= 100");
  if (!(base.alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
  if (!(base.e >= 0.0)) throw ConfigError("e must be nonnegative");
  if (!(sigma_q >= 0.0) || !(sigma_d >= 0.0)) throw ConfigError("sigma_q and sigma_d must be nonnegative");
  if (!(base.sigma1_sq > 0.0) || !(base.sigma2_sq > 0.0)) throw ConfigError("noise powers must be positive");
  for (double v : axis_values) {
    if (is_k_axis(axis) && (v < 1.0 || v != std::floor(v)))
      throw ConfigError("K axis values must be integers >= 1");
    if (axis == SweepAxis::e_sq && v < 0.0) throw ConfigError("e_sq axis values must be nonnegative");
  }
  if (!is_k_axis(axis) && base.k < 1) throw ConfigError("K must be >= 1");
  for (const auto& s : series) {
    if (s.dynamic && axis != SweepAxis::k_dynamic_e) throw ConfigError("e = dynamic needs axis = K_dynamic_e");
    if (!s.dynamic && !(s.e >= 0.0)) throw ConfigError("e must be nonnegative");
  }
  if (axis == SweepAxis::e_sq && series.size() > 1) throw ConfigError("several e series conflict with axis = e_sq");
  for (Scheme s : asymptotic_schemes) {
    if (std::find(schemes.begin(), schemes.end(), s) == schemes.end())
      throw ConfigError("asymptotic scheme " + std::string(to_string(s)) + " is not in schemes");
    if (s == Scheme::af_cutset) throw ConfigError("AF-cutset has no asymptotic closed form");
    if (s == Scheme::mf_zf && base.n == base.m)
      throw ConfigError("MF-ZF asymptotic capacity does not exist for N = M (E[tr (GG^H)^{-1}] is infinite)");
  }
  if (emit_oracle && oracle_symbols < 1000) throw ConfigError("oracle_symbols must be >= 1000");
  if (eigen_samples < 1000) throw ConfigError("eigen_samples must be >= 1000");
}

SweepSpec parse_config_text(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (!kv.emplace(key, value).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }

  static const std::set<std::string> known = {
      "M", "N", "K", "PNR", "QNR", "e", "alpha", "axis", "values", "schemes", "scheme", "trials", "seed",
      "sigma_q", "sigma_d", "asymptotic", "ergodic", "oracle", "oracle_draws", "oracle_symbols", "power",
      "eigen_samples"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw ConfigError("unknown key '" + k + "'");
  if (kv.count("scheme") && kv.count("schemes")) throw ConfigError("give either 'scheme' or 'schemes', not both");

  SweepSpec spec;
  spec.base.sigma1_sq = 1.0;
  spec.base.sigma2_sq = 1.0;
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto v = get("M")) spec.base.m = parse_count(*v, "M");
  if (auto v = get("N")) spec.base.n = parse_count(*v, "N");
  if (auto v = get("PNR")) spec.pnr_db = parse_number(*v, "PNR");
  if (auto v = get("QNR")) spec.qnr_db = parse_number(*v, "QNR");
  if (auto v = get("alpha")) spec.base.alpha = parse_number(*v, "alpha");
  if (auto v = get("trials")) spec.trials = parse_count(*v, "trials");
  if (auto v = get("seed")) {
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), spec.master_seed);
    if (ec != std::errc{} || ptr != v->data() + v->size()) throw ConfigError("'seed': expected an unsigned integer");
  }
  if (auto v = get("sigma_q")) spec.sigma_q = parse_number(*v, "sigma_q");
  if (auto v = get("sigma_d")) spec.sigma_d = parse_number(*v, "sigma_d");
  if (auto v = get("ergodic")) spec.emit_ergodic = parse_bool(*v, "ergodic");
  if (auto v = get("oracle")) spec.emit_oracle = parse_bool(*v, "oracle");
  if (auto v = get("oracle_draws")) spec.oracle_draws = parse_count(*v, "oracle_draws");
  if (auto v = get("oracle_symbols")) spec.oracle_symbols = parse_count(*v, "oracle_symbols");
  if (auto v = get("eigen_samples")) spec.eigen_samples = parse_count(*v, "eigen_samples");
  if (auto v = get("power")) {
    if (*v == "exact") spec.power = PowerControl::exact;
    else if (*v == "taylor") spec.power = PowerControl::taylor;
    else if (*v == "average") spec.power = PowerControl::average;
    else throw ConfigError("'power': expected exact, taylor or average");
  }

  const std::string* scheme_text = get("schemes") ? get("schemes") : get("scheme");
  if (!scheme_text) throw ConfigError("missing 'schemes'");
  spec.schemes = parse_scheme_list(*scheme_text, "schemes");

  bool axis_given = false;
  if (auto v = get("axis")) {
    try {
      spec.axis = parse_axis(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("'axis': ") + e.what());
    }
    axis_given = true;
  }

  std::vector<double> k_values;
  if (auto v = get("K")) k_values = parse_number_list(*v, "K");
  const bool k_is_list = k_values.size() > 1 || (get("K") && get("K")->find("..") != std::string::npos);
  if (k_is_list && !axis_given) {
    spec.axis = SweepAxis::k;
    axis_given = true;
  }
  if (auto v = get("values")) spec.axis_values = parse_number_list(*v, "values");
  if (is_k_axis(spec.axis) && axis_given) {
    if (spec.axis_values.empty()) spec.axis_values = k_values;
    else if (!k_values.empty()) throw ConfigError("give K values either in 'K' or in 'values', not both");
  } else if (k_is_list) {
    throw ConfigError("'K' may only be a list when the axis is K or K_dynamic_e");
  } else if (!k_values.empty()) {
    if (k_values[0] < 1.0 || k_values[0] != std::floor(k_values[0])) throw ConfigError("'K' must be an integer >= 1");
    spec.base.k = static_cast<std::size_t>(k_values[0]);
  }
  if (!axis_given) throw ConfigError("missing 'axis' (or a K list)");

  if (auto v = get("e")) {
    for (const auto& item : split(*v, ',')) {
      if (item == "dynamic") spec.series.push_back({true, 0.0});
      else for (double e : parse_number_list(item, "e")) spec.series.push_back({false, e});
    }
  }
  if (spec.axis == SweepAxis::k_dynamic_e && spec.series.empty()) spec.series.push_back({true, 0.0});
  if (spec.series.size() == 1 && !spec.series[0].dynamic) {
    spec.base.e = spec.series[0].e;
    spec.series.clear();
  }

  if (auto v = get("asymptotic")) {
    if (*v == "true" || *v == "all") {
      for (Scheme s : spec.schemes)
        if (s != Scheme::af_cutset) spec.asymptotic_schemes.push_back(s);
    } else if (*v != "false" && *v != "none") {
      spec.asymptotic_schemes = parse_scheme_list(*v, "asymptotic");
    }
  }

  spec.base.p = db_to_linear(spec.pnr_db) * spec.base.sigma1_sq;
  spec.base.q = db_to_linear(spec.qnr_db) * spec.base.sigma2_sq;
  spec.validate();
  return spec;
}

SweepSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"}; }

std::filesystem::path preset_path(std::string_view name) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig2..fig8)");
  std::filesystem::path dir = RELAYCAP_PRESET_DIR;
  if (const char* env = std::getenv("RELAYCAP_PRESET_DIR"); env && *env) dir = env;
  return dir / (std::string(name) + ".cfg");
}

bool ResultTable::all_failed() const {
  if (rows.empty()) return false;
  return std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.error.empty(); });
}

NetworkConfig point_config(const SweepSpec& spec, double axis_value, const ErrorSeries& series) {
  NetworkConfig cfg = spec.base;
  double pnr = spec.pnr_db, qnr = spec.qnr_db;
  switch (spec.axis) {
    case SweepAxis::k:
    case SweepAxis::k_dynamic_e:
      cfg.k = static_cast<std::size_t>(axis_value);
      break;
    case SweepAxis::e_sq:
      break;
    case SweepAxis::pnr:
      pnr = axis_value;
      break;
    case SweepAxis::qnr:
      qnr = axis_value;
      break;
    case SweepAxis::pnr_eq_qnr:
      pnr = qnr = axis_value;
      break;
  }
  cfg.p = db_to_linear(pnr) * cfg.sigma1_sq;
  cfg.q = db_to_linear(qnr) * cfg.sigma2_sq;
  if (spec.axis == SweepAxis::e_sq) cfg.e = std::sqrt(axis_value);
  else if (series.dynamic) cfg.e = dynamic_error(cfg.k, spec.sigma_q, spec.sigma_d);
  else cfg.e = series.e;
  return cfg;
}

ResultTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  ResultTable table;
  table.axis = spec.axis;

  const bool needs_pool =
      std::any_of(spec.asymptotic_schemes.begin(), spec.asymptotic_schemes.end(),
                  [](Scheme s) { return s == Scheme::mf_rzf_fixed || s == Scheme::mf_rzf_opt ||
                                        s == Scheme::mf_rzf_conventional; }) ||
      spec.power == PowerControl::average;
  std::optional<WishartEigenSample> pool;
  if (needs_pool)
    pool = sample_wishart_eigenvalues(spec.base.m, spec.base.n, spec.eigen_samples, spec.master_seed, spec.workers);

  std::vector<ErrorSeries> series = spec.series;
  if (series.empty()) series.push_back({false, spec.base.e});
  const bool label_series = series.size() > 1;

  CapacityOptions opts;
  opts.power = spec.power;
  opts.workers = spec.workers;
  opts.eigen_pool = pool ? &*pool : nullptr;

  for (const auto& ser : series) {
    for (double x : spec.axis_values) {
      const NetworkConfig cfg = point_config(spec, x, ser);

      // Resolve per-scheme alpha; a failure here marks just that scheme.
      std::vector<std::optional<SchemeSetting>> settings(spec.schemes.size());
      std::vector<std::string> setting_error(spec.schemes.size());
      std::vector<SchemeSetting> batch_settings;
      std::vector<std::size_t> batch_index(spec.schemes.size(), SIZE_MAX);
      for (std::size_t i = 0; i < spec.schemes.size(); ++i) {
        try {
          settings[i] = scheme_setting(spec.schemes[i], cfg);
          if (settings[i]) {
            batch_index[i] = batch_settings.size();
            batch_settings.push_back(*settings[i]);
          }
        } catch (const std::exception& e) {
          setting_error[i] = e.what();
        }
      }

      // Monte Carlo runs when ergodic columns or the cut-set row are wanted.
      std::optional<CapacityBatch> batch;
      std::string batch_error;
      const bool want_cutset = std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::af_cutset) != spec.schemes.end();
      if (spec.emit_ergodic || want_cutset) {
        try {
          const std::vector<SchemeSetting> run = spec.emit_ergodic ? batch_settings : std::vector<SchemeSetting>{};
          batch = simulate_capacities(run, cfg, spec.trials, spec.master_seed, opts);
        } catch (const std::exception& e) {
          batch_error = e.what();
        }
      } else {
        batch = CapacityBatch{};
      }

      for (std::size_t i = 0; i < spec.schemes.size(); ++i) {
        const Scheme s = spec.schemes[i];
        ResultRow row;
        row.axis_value = x;
        row.scheme = std::string(to_string(s)) + (label_series ? series_label(ser) : "");
        if (!setting_error[i].empty()) {
          row.error = setting_error[i];
          table.rows.push_back(std::move(row));
          continue;
        }
        if (!batch) {
          row.error = batch_error;
          table.rows.push_back(std::move(row));
          continue;
        }
        if (spec.emit_ergodic || want_cutset) row.cutset = batch->cutset.mean;
        if (s == Scheme::af_cutset) {
          row.ergodic = batch->cutset.mean;
          row.ci = batch->cutset.half_width;
          table.rows.push_back(std::move(row));
          continue;
        }
        const SchemeSetting& st = *settings[i];
        if (st.kind == BeamformerKind::mf_rzf) row.alpha = st.alpha;
        if (spec.emit_ergodic) {
          const auto& est = batch->schemes[batch_index[i]];
          row.ergodic = est.mean;
          row.ci = est.half_width;
          row.flagged = est.flagged_trials;
        }
        if (std::find(spec.asymptotic_schemes.begin(), spec.asymptotic_schemes.end(), s) !=
            spec.asymptotic_schemes.end()) {
          try {
            NetworkConfig acfg = cfg;
            acfg.alpha = st.alpha;
            EigenExpectations eig;
            if (st.kind == BeamformerKind::mf_rzf) eig = expectations_at(*pool, st.alpha);
            row.asymptotic = asymptotic_capacity(st.kind, acfg, eig);
          } catch (const std::exception& e) {
            row.error = e.what();
            row.ergodic.reset();
            row.ci.reset();
          }
        }
        table.rows.push_back(std::move(row));
      }

      if (spec.emit_oracle) {
        for (std::size_t i = 0; i < spec.schemes.size(); ++i) {
          if (!settings[i]) continue;
          const std::string label = std::string(to_string(spec.schemes[i])) + (label_series ? series_label(ser) : "");
          table.oracle.push_back(oracle_cell(spec, cfg, *settings[i], x, label));
        }
      }
    }
  }
  return table;
}

std::string format_csv(const ResultTable& table) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : table.rows) {
    out += format_number(r.axis_value);
    out += ',';
    out += csv_field(r.scheme);
    if (!r.error.empty()) {
      // Numeric cells of a failed row all carry the marker.
      for (int i = 0; i < 5; ++i) {
        out += ',';
        out += kErrorMarker;
      }
      out += ',';
      out += std::to_string(r.flagged);
      out += '\n';
      continue;
    }
    for (const auto* v : {&r.ergodic, &r.ci, &r.asymptotic, &r.cutset, &r.alpha}) {
      out += ',';
      out += format_optional(*v);
    }
    out += ',';
    out += std::to_string(r.flagged);
    out += '\n';
  }
  return out;
}

std::string format_oracle_csv(const ResultTable& table) {
  std::string out(kOracleCsvHeader);
  out += '\n';
  for (const auto& r : table.oracle) {
    out += format_number(r.axis_value) + ',' + csv_field(r.scheme) + ',' + std::to_string(r.draws) + ',' +
           format_number(r.median_gap) + ',' + format_number(r.max_gap) + '\n';
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  if (table.rows.empty()) throw std::invalid_argument("emit_csv: result table is empty");
  write_file(path, format_csv(table));
}

void emit_oracle_csv(const ResultTable& table, const std::filesystem::path& path) {
  if (table.oracle.empty()) throw std::invalid_argument("emit_oracle_csv: no oracle rows");
  write_file(path, format_oracle_csv(table));
}

}  // namespace relaycap

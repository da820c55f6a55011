// Copyright 2026 The rismac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rismac/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rismac/channel.hpp"
#include "rismac/markov.hpp"
#include "rismac/phase_optimizer.hpp"
#include "rismac/protocol.hpp"
#include "rismac/reservation.hpp"

namespace rismac::cli {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double to_double(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number in " + what + ": '" + text + "'");
  }
  if (pos != text.size()) throw std::invalid_argument("bad number in " + what + ": '" + text + "'");
  return v;
}

// Runs f(i) for i in [0, n) on a worker pool; rethrows the first failure.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

// ---------------------------------------------------------------------------
// Sweeps

SweepAxis parse_sweep(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos) throw std::invalid_argument("sweep '" + std::string(spec) + "' needs key=values");
  SweepAxis axis;
  axis.key = trim(spec.substr(0, eq));
  const std::string rhs = trim(spec.substr(eq + 1));
  if (axis.key.empty()) throw std::invalid_argument("sweep '" + std::string(spec) + "' has no key");
  if (rhs.empty()) return axis;

  if (rhs.find(',') == std::string::npos && std::count(rhs.begin(), rhs.end(), ':') == 2 && axis.key != "A" &&
      axis.key != "l") {
    const auto c1 = rhs.find(':');
    const auto c2 = rhs.find(':', c1 + 1);
    const double a = to_double(trim(rhs.substr(0, c1)), "sweep start");
    const double b = to_double(trim(rhs.substr(c1 + 1, c2 - c1 - 1)), "sweep stop");
    const double step = to_double(trim(rhs.substr(c2 + 1)), "sweep step");
    if (step == 0.0 || (b - a) / step < 0.0) throw std::invalid_argument("sweep step does not reach the stop value");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.12g", a + static_cast<double>(i) * step);
      axis.values.emplace_back(buf);
    }
    return axis;
  }
  std::stringstream ss(rhs);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) axis.values.push_back(item);
  }
  return axis;
}

std::vector<SweepPoint> expand_sweeps(const std::vector<SweepAxis>& axes) {
  std::vector<SweepPoint> points{{}};
  for (const auto& axis : axes) {
    std::vector<SweepPoint> next;
    for (const auto& p : points) {
      for (const auto& v : axis.values) {
        SweepPoint q = p;
        q.emplace_back(axis.key, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

void apply_sweep_value(SystemConfig& c, std::string_view key, std::string_view value) {
  set_key(c, key, value);
  if (key == "t_h") {
    c.t_r = c.T - c.t_h;
  } else if (key == "t_r") {
    c.t_h = c.T - c.t_r;
  } else if (key == "T") {
    c.t_r = c.T - c.t_h;
  } else if (key == "L" || key == "C") {
    c.L = c.C = (key == "L" ? c.L : c.C);
    c.l_x = c.l_y = 0;
  } else if (key == "N") {
    if (c.A_x * c.A_y != c.N) {
      if (c.A_y > 0 && c.N % c.A_y == 0) {
        c.A_x = c.N / c.A_y;
      } else {
        c.A_x = c.N;
        c.A_y = 1;
      }
    }
    c.l_x = c.l_y = 0;
  } else if (key == "A") {
    c.N = c.A_x * c.A_y;
    c.l_x = c.l_y = 0;
  } else if (key == "W0" || key == "m") {
    if (c.m >= 0 && c.m <= 20) c.CW_max = c.W0 << c.m;
  }
}

SystemConfig config_at(const SystemConfig& base, const SweepPoint& point) {
  SystemConfig c = base;
  for (const auto& [k, v] : point) apply_sweep_value(c, k, v);
  return c;
}

Mode parse_mode(std::string_view name) {
  if (name == "mdr-scmu") return Mode::kMdrScmu;
  if (name == "mdr-mcmu") return Mode::kMdrMcmu;
  if (name == "csma-baseline") return Mode::kCsmaBaseline;
  if (name == "no-ris") return Mode::kNoRis;
  throw std::invalid_argument("unknown mode '" + std::string(name) +
                              "' (expected mdr-scmu, mdr-mcmu, csma-baseline or no-ris)");
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kMdrScmu: return "mdr-scmu";
    case Mode::kMdrMcmu: return "mdr-mcmu";
    case Mode::kCsmaBaseline: return "csma-baseline";
    case Mode::kNoRis: return "no-ris";
  }
  return "";
}

Scheme scheme_of(Mode mode) {
  switch (mode) {
    case Mode::kMdrScmu:
    case Mode::kMdrMcmu: return Scheme::kMdr;
    case Mode::kCsmaBaseline: return Scheme::kCsmaBaseline;
    case Mode::kNoRis: return Scheme::kNoRis;
  }
  return Scheme::kMdr;
}

// ---------------------------------------------------------------------------
// analyze

namespace {

struct AnalyzeRow {
  MarkovSolution sol;
  double pi_C = std::nan("");
  double snr_db = std::nan("");
  double capacity = std::nan("");
  double throughput_model = std::nan("");
  int n_r = 0;
  std::string milp;
  std::string balance;
  std::string error;
  bool solved = false;
};

// Reservation-limited throughput: expected grants per frame times r_max data
// slots, shared over C channels and capped by the transmission phase.
double model_throughput(const SystemConfig& c, double zeta_s) {
  const Timings t = derived_timings(c);
  const double grants = c.t_h * zeta_s / t.t_s;
  const double per_channel = std::min(grants * c.r_max * c.t_p / c.C, c.slots_per_phase() * c.t_p);
  return per_channel / c.T;
}

AnalyzeRow analyze_point(const SystemConfig& c) {
  AnalyzeRow row;
  const ValidationReport report = validate(c);
  if (!report.ok()) {
    row.error = report.to_string();
    return row;
  }
  try {
    std::vector<MarkovSolution> per_j;
    std::vector<double> pi;
    try {
      if (c.C == 1) {
        per_j.push_back(solve_self_consistent(c));
        const double g = per_j[0].gamma;
        pi = mmc_steady_state(std::span<const double>(&g, 1), per_j[0].eta, 1);
      } else {
        MultiChannelAnalysis a = analyze_multi_channel(c);
        per_j = std::move(a.per_j);
        pi = std::move(a.pi);
      }
      row.sol = per_j.back();
      row.solved = true;
    } catch (const ConvergenceError& e) {
      row.sol = e.last();
      row.error = e.what();
      return row;
    }
    row.pi_C = pi.back();
    const ChannelRealization ch = realize_channel(c, 0, 1);
    const LinkPlan plan = plan_link(ch, c, 0);
    row.snr_db = 10.0 * std::log10(plan.snr);
    const std::vector<double> snr(static_cast<std::size_t>(c.K), plan.snr);
    const std::vector<int> r(static_cast<std::size_t>(c.K), c.r_max);
    row.capacity = c.C == 1 ? capacity_scmu(c, row.sol, snr, r) : capacity_mcmu(c, per_j, pi, snr, r);
    row.n_r = suggested_cycle(c, row.sol);
    row.throughput_model = model_throughput(c, row.sol.zeta_s);
    try {
      const ReservationProblem problem =
          c.C == 1 ? scmu_problem(c.K, c.r_max, c.slots_per_phase()) : mcmu_problem(c, row.sol.zeta_s);
      row.milp = std::to_string(optimal_objective(problem));
    } catch (const InfeasibleError& e) {
      row.milp = "infeasible:" + e.constraint();
    }
    const auto violation = check_negotiation_balance(c, row.sol.zeta_s);
    row.balance = violation ? violation->label : "ok";
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_point_prefix(std::ostream& out, std::size_t index, const std::vector<SweepAxis>& axes,
                        const SweepPoint& point) {
  out << index;
  for (std::size_t a = 0; a < axes.size(); ++a) out << ',' << csv_field(point[a].second);
}

}  // namespace

void cmd_analyze(const SystemConfig& base, const AnalyzeOptions& options, std::ostream& out) {
  const auto points = expand_sweeps(options.sweeps);
  out << "point";
  for (const auto& a : options.sweeps) out << ',' << a.key;
  auto swept = [&](const char* key) {
    return std::any_of(options.sweeps.begin(), options.sweeps.end(), [&](const SweepAxis& a) { return a.key == key; });
  };
  const bool show_k = !swept("K"), show_l = !swept("L") && !swept("C");
  if (show_k) out << ",K";
  if (show_l) out << ",L,C";
  out << ",converged,tau,p,q,gamma,eta,zeta_s,zeta_e,zeta_c,residual_tau,residual_p,residual_q,iterations,"
         "in_range,pi_C,N_r,snr_db,capacity_bps,throughput_model,milp_rsum,balance,error\n";

  std::vector<SystemConfig> configs;
  configs.reserve(points.size());
  for (const auto& p : points) configs.push_back(config_at(base, p));
  std::vector<AnalyzeRow> rows(points.size());
  parallel_for(points.size(), options.threads, [&](std::size_t i) { rows[i] = analyze_point(configs[i]); });

  for (std::size_t i = 0; i < points.size(); ++i) {
    const SystemConfig& c = configs[i];
    const AnalyzeRow& r = rows[i];
    const MarkovSolution& s = r.sol;
    write_point_prefix(out, i, options.sweeps, points[i]);
    if (show_k) out << ',' << c.K;
    if (show_l) out << ',' << c.L << ',' << c.C;
    out << ',' << (r.solved && s.converged ? 1 : 0);
    for (double v : {s.tau, s.p, s.q, s.gamma, s.eta, s.zeta_s, s.zeta_e, s.zeta_c, s.residual_tau, s.residual_p,
                     s.residual_q})
      out << ',' << format_number(v);
    out << ',' << s.iterations << ',' << (s.probabilities_in_range ? 1 : 0);
    for (double v : {r.pi_C}) out << ',' << format_number(v);
    out << ',' << r.n_r;
    for (double v : {r.snr_db, r.capacity, r.throughput_model}) out << ',' << format_number(v);
    out << ',' << csv_field(r.milp) << ',' << csv_field(r.balance) << ',' << csv_field(r.error) << '\n';
  }
}

// ---------------------------------------------------------------------------
// simulate

namespace {

struct MetricRow {
  double throughput, zeta_s, zeta_e, zeta_c, collision_prob, served, capacity, snr_db, power;
  std::int64_t data_tx;
  std::string occupancy;
  std::vector<double> occupancy_dist;
};

MetricRow summarize(const Metrics& m) {
  std::string occ;
  const std::vector<double> dist = m.occupancy_distribution();
  for (double x : dist) {
    if (!occ.empty()) occ += ';';
    occ += format_number(x);
  }
  return {m.throughput(),  m.zeta_s(),       m.zeta_e(),    m.zeta_c(),         m.collision_probability(),
          m.served_per_frame(), m.capacity_bps(), m.mean_snr_db(), m.mean_tx_power(), m.data_tx, occ, dist};
}

std::vector<double> values_of(const MetricRow& r) {
  return {r.throughput, r.zeta_s, r.zeta_e, r.zeta_c, r.collision_prob, r.served, r.capacity, r.snr_db, r.power,
          static_cast<double>(r.data_tx)};
}

const char* const kMetricNames[] = {"throughput",       "zeta_s",       "zeta_e",      "zeta_c",
                                    "collision_prob",   "served_per_frame", "capacity_bps", "mean_snr_db",
                                    "mean_tx_power_w", "data_tx"};

}  // namespace

void cmd_simulate(const SystemConfig& base, const SimulateOptions& options, std::ostream& out) {
  if (options.seeds < 1) throw std::invalid_argument("simulate: --seeds must be at least 1");
  if (options.frames < 1) throw std::invalid_argument("simulate: --frames must be at least 1");
  const auto points = expand_sweeps(options.sweeps);
  std::vector<SystemConfig> configs;
  for (const auto& p : points) {
    SystemConfig c = config_at(base, p);
    if (options.mode == Mode::kMdrScmu && c.C != 1)
      throw std::invalid_argument("mode mdr-scmu needs C = 1; use mdr-mcmu for C > 1");
    const ValidationReport report = validate(c);
    if (!report.ok()) throw std::invalid_argument("invalid configuration at sweep point: " + report.to_string());
    configs.push_back(std::move(c));
  }

  out << "point";
  for (const auto& a : options.sweeps) out << ',' << a.key;
  out << ",mode,seed,kind,frames";
  for (const char* n : kMetricNames) out << ',' << n;
  for (const char* n : kMetricNames) out << ',' << n << "_se";
  out << ",occupancy\n";

  const std::size_t seeds = static_cast<std::size_t>(options.seeds);
  std::vector<MetricRow> rows(points.size() * seeds);
  parallel_for(rows.size(), options.threads, [&](std::size_t i) {
    const std::size_t p = i / seeds;
    const std::uint64_t seed = options.seed_base + i % seeds;
    rows[i] = summarize(run_scheme(scheme_of(options.mode), configs[p], seed, options.frames));
  });

  const std::size_t n_metrics = std::size(kMetricNames);
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<std::vector<double>> samples;
    for (std::size_t s = 0; s < seeds; ++s) {
      const MetricRow& r = rows[p * seeds + s];
      samples.push_back(values_of(r));
      write_point_prefix(out, p, options.sweeps, points[p]);
      out << ',' << mode_name(options.mode) << ',' << options.seed_base + s << ",seed," << options.frames;
      for (double v : samples.back()) out << ',' << format_number(v);
      for (std::size_t k = 0; k < n_metrics; ++k) out << ',';
      out << ',' << r.occupancy << '\n';
    }
    write_point_prefix(out, p, options.sweeps, points[p]);
    out << ',' << mode_name(options.mode) << ",,mean," << options.frames;
    std::vector<double> mean(n_metrics, 0.0), se(n_metrics, 0.0);
    for (std::size_t k = 0; k < n_metrics; ++k) {
      for (const auto& s : samples) mean[k] += s[k];
      mean[k] /= static_cast<double>(seeds);
      if (seeds > 1) {
        double var = 0.0;
        for (const auto& s : samples) var += (s[k] - mean[k]) * (s[k] - mean[k]);
        var /= static_cast<double>(seeds - 1);
        se[k] = std::sqrt(var / static_cast<double>(seeds));
      }
    }
    for (double v : mean) out << ',' << format_number(v);
    for (double v : se) out << ',' << format_number(v);
    std::vector<double> occ;
    for (std::size_t s = 0; s < seeds; ++s) {
      const auto& d = rows[p * seeds + s].occupancy_dist;
      if (occ.size() < d.size()) occ.resize(d.size(), 0.0);
      for (std::size_t j = 0; j < d.size(); ++j) occ[j] += d[j] / static_cast<double>(seeds);
    }
    out << ',';
    for (std::size_t j = 0; j < occ.size(); ++j) out << (j ? ";" : "") << format_number(occ[j]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// figures

namespace {

struct Curve {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
};

double snr_db_at(const SystemConfig& c) {
  const ChannelRealization ch = realize_channel(c, 0, 1);
  return 10.0 * std::log10(plan_link(ch, c, 0).snr);
}

double direct_snr_db(const SystemConfig& c) {
  const ChannelRealization ch = realize_channel(c, 0, 1);
  return 10.0 * std::log10(plan_direct(ch, c).snr);
}

// Power that gives the RIS link the SNR the direct link reaches at P.
double tx_power_dbm(const SystemConfig& c) {
  const ChannelRealization ch = realize_channel(c, 0, 1);
  const LinkPlan plan = plan_link(ch, c, 0);
  const double gain_ris = plan.snr * c.sigma2 / plan.rho2;  // |h + H Theta G|^2
  return watts_to_dbm(c.P * std::norm(ch.h) / gain_ris);
}

SystemConfig with(const SystemConfig& base, const SweepPoint& point) { return config_at(base, point); }

std::string num(double v) { return format_number(v); }

double mean_metric(const SystemConfig& c, Scheme scheme, const FigureOptions& o,
                   double (Metrics::*metric)() const) {
  double sum = 0.0;
  for (int s = 0; s < o.seeds; ++s) sum += (run_scheme(scheme, c, o.seed_base + s, o.frames).*metric)();
  return sum / o.seeds;
}

// Fills simulated curves point by point on the worker pool.
struct SimJob {
  std::size_t curve;
  double x;
  SystemConfig config;
  Scheme scheme;
  double (Metrics::*metric)() const;
};

void run_jobs(std::vector<Curve>& curves, std::vector<SimJob>& jobs, const FigureOptions& o) {
  std::vector<double> y(jobs.size());
  parallel_for(jobs.size(), o.threads,
               [&](std::size_t i) { y[i] = mean_metric(jobs[i].config, jobs[i].scheme, o, jobs[i].metric); });
  for (std::size_t i = 0; i < jobs.size(); ++i) curves[jobs[i].curve].points.emplace_back(jobs[i].x, y[i]);
}

std::vector<Curve> figure_curves(std::string_view which, const SystemConfig& base, const FigureOptions& o) {
  std::vector<Curve> curves;
  const std::vector<double> distances = {30, 60, 90, 120};
  const std::vector<int> groups = {1, 2, 4, 8, 16};

  if (which == "7a") {
    for (double d : distances) {
      Curve ris{"ris_d" + num(d), "N", "snr_db", {}};
      Curve direct{"no_ris_d" + num(d), "N", "snr_db", {}};
      for (int n = 16; n <= 256; n += 16) {
        const SystemConfig c = with(base, {{"d", num(d)}, {"N", std::to_string(n)}, {"L", "1"}});
        ris.points.emplace_back(n, snr_db_at(c));
        direct.points.emplace_back(n, direct_snr_db(c));
      }
      curves.push_back(std::move(ris));
      curves.push_back(std::move(direct));
    }
  } else if (which == "7b") {
    for (int n : {32, 64, 128, 256}) {
      Curve cv{"ris_N" + std::to_string(n), "d", "tx_power_dbm", {}};
      for (double d = 20; d <= 120; d += 10)
        cv.points.emplace_back(d, tx_power_dbm(with(base, {{"N", std::to_string(n)}, {"d", num(d)}, {"L", "1"}})));
      curves.push_back(std::move(cv));
    }
    Curve direct{"no_ris", "d", "tx_power_dbm", {}};
    for (double d = 20; d <= 120; d += 10) direct.points.emplace_back(d, watts_to_dbm(base.P));
    curves.push_back(std::move(direct));
  } else if (which == "8a") {
    for (double d : distances) {
      Curve cv{"ris_d" + num(d), "L", "snr_db", {}};
      for (int l : groups) cv.points.emplace_back(l, snr_db_at(with(base, {{"d", num(d)}, {"L", std::to_string(l)}})));
      curves.push_back(std::move(cv));
    }
  } else if (which == "8b") {
    for (int l : groups) {
      Curve cv{"ris_L" + std::to_string(l), "d", "tx_power_dbm", {}};
      for (double d = 20; d <= 120; d += 10)
        cv.points.emplace_back(d, tx_power_dbm(with(base, {{"L", std::to_string(l)}, {"d", num(d)}})));
      curves.push_back(std::move(cv));
    }
  } else if (which == "7c" || which == "8c" || which == "9a" || which == "9b") {
    std::vector<SimJob> jobs;
    const std::vector<int> users = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    if (which == "7c") {
      for (int r_max : {5, 20}) {
        curves.push_back({"mdr_rmax" + std::to_string(r_max), "K", "normalized_throughput", {}});
        for (int k : users)
          jobs.push_back({curves.size() - 1, double(k),
                          with(base, {{"K", std::to_string(k)}, {"r_max", std::to_string(r_max)}, {"L", "1"}}),
                          Scheme::kMdr, &Metrics::throughput});
        Curve bound{"upper_rmax" + std::to_string(r_max), "K", "normalized_throughput", {}};
        const SystemConfig c = with(base, {{"r_max", std::to_string(r_max)}, {"L", "1"}});
        const double cap = std::min(c.slots_per_phase(), c.T_cycle * r_max) * c.t_p / c.T;
        for (int k : users) bound.points.emplace_back(k, cap);
        curves.push_back(std::move(bound));
      }
      curves.push_back({"csma_baseline", "K", "normalized_throughput", {}});
      for (int k : users)
        jobs.push_back({curves.size() - 1, double(k), with(base, {{"K", std::to_string(k)}, {"L", "1"}}),
                        Scheme::kCsmaBaseline, &Metrics::throughput});
    } else if (which == "8c") {
      for (int l : {2, 4, 8, 16}) {
        curves.push_back({"mdr_L" + std::to_string(l), "K", "normalized_throughput", {}});
        for (int k : users)
          jobs.push_back({curves.size() - 1, double(k), with(base, {{"K", std::to_string(k)}, {"L", std::to_string(l)}}),
                          Scheme::kMdr, &Metrics::throughput});
      }
    } else if (which == "9a") {
      for (int l : {1, 2, 4, 8}) {
        curves.push_back({"mdr_L" + std::to_string(l), "K", "collision_probability", {}});
        for (int k : users)
          jobs.push_back({curves.size() - 1, double(k), with(base, {{"K", std::to_string(k)}, {"L", std::to_string(l)}}),
                          Scheme::kMdr, &Metrics::collision_probability});
      }
    } else {
      for (int l : groups) {
        curves.push_back({"mdr_L" + std::to_string(l), "t_h", "served_users", {}});
        for (double th : {0.02, 0.03, 0.05})
          jobs.push_back({curves.size() - 1, th,
                          with(base, {{"K", "300"}, {"L", std::to_string(l)}, {"t_h", num(th)}}), Scheme::kMdr,
                          &Metrics::served_per_frame});
      }
    }
    run_jobs(curves, jobs, o);
  } else {
    throw std::invalid_argument("unknown figure '" + std::string(which) +
                                "' (expected 7a, 7b, 7c, 8a, 8b, 8c, 9a or 9b)");
  }
  return curves;
}

}  // namespace

std::vector<std::filesystem::path> cmd_figures(std::string_view which, const SystemConfig& base,
                                               const FigureOptions& options) {
  const std::vector<Curve> curves = figure_curves(which, base, options);
  std::filesystem::create_directories(options.out_dir);
  std::vector<std::filesystem::path> written;
  nlohmann::ordered_json manifest;
  manifest["figure"] = std::string(which);
  manifest["frames"] = options.frames;
  manifest["seeds"] = options.seeds;
  manifest["seed_base"] = options.seed_base;
  std::ostringstream cfg;
  write_config(cfg, base);
  manifest["config"] = cfg.str();
  manifest["curves"] = nlohmann::ordered_json::array();

  for (const Curve& c : curves) {
    const std::string file = "fig" + std::string(which) + "_" + c.name + ".csv";
    const auto path = options.out_dir / file;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << c.x_label << ',' << c.y_label << '\n';
    for (const auto& [x, y] : c.points) out << format_number(x) << ',' << format_number(y) << '\n';
    written.push_back(path);
    manifest["curves"].push_back({{"name", c.name}, {"file", file}, {"x", c.x_label}, {"y", c.y_label}});
  }
  const auto manifest_path = options.out_dir / ("fig" + std::string(which) + "_manifest.json");
  std::ofstream mf(manifest_path);
  if (!mf) throw std::runtime_error("cannot write " + manifest_path.string());
  mf << manifest.dump(2) << '\n';
  written.push_back(manifest_path);
  return written;
}

}  // namespace rismac::cli

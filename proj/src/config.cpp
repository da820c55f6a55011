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

#include "rismac/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rismac {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double SystemConfig::delta_theta() const {
  return phase_bits > 0 ? 2.0 * kPi / psi() : 0.0;
}

int SystemConfig::slots_per_phase() const {
  if (t_p <= 0.0) return 0;
  // Guard against t_r/t_p landing a hair under an integer.
  return static_cast<int>(std::floor(t_r / t_p + 1e-9));
}

double airtime(int bytes, double bandwidth) { return 8.0 * bytes / bandwidth; }

Timings derived_timings(const SystemConfig& config) {
  if (config.B <= 0.0) throw std::invalid_argument("derived_timings: bandwidth must be positive");
  const double erts = airtime(config.eRTS_bytes, config.B);
  const double ects = airtime(config.eCTS_bytes, config.B);
  return {erts + ects + config.DIFS + config.SIFS, erts + config.DIFS};
}

bool ValidationReport::has(std::string_view label) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.label == label; });
}

std::string ValidationReport::to_string() const {
  if (ok()) return "pass";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.label + ": " + v.message;
  }
  return out;
}

std::optional<std::pair<int, int>> default_group_shape(int A_x, int A_y, int L) {
  if (A_x <= 0 || A_y <= 0 || L <= 0) return std::nullopt;
  int lx = A_x;
  int ly = A_y;
  int groups = 1;
  while (groups < L) {
    if (lx > ly) {
      if (lx % 2 != 0) return std::nullopt;
      lx /= 2;
    } else {
      if (ly % 2 != 0) return std::nullopt;
      ly /= 2;
    }
    groups *= 2;
  }
  if (groups != L) return std::nullopt;
  return std::make_pair(lx, ly);
}

namespace {

std::optional<std::pair<int, int>> resolved_group_shape(const SystemConfig& c) {
  if (c.A_x * c.A_y != c.N) return std::nullopt;
  if (c.l_x > 0 && c.l_y > 0) {
    if (c.A_x % c.l_x != 0 || c.A_y % c.l_y != 0) return std::nullopt;
    if ((c.A_x / c.l_x) * (c.A_y / c.l_y) != c.L) return std::nullopt;
    return std::make_pair(c.l_x, c.l_y);
  }
  return default_group_shape(c.A_x, c.A_y, c.L);
}

}  // namespace

std::vector<int> group_members(const SystemConfig& config, int l) {
  if (config.L <= 0 || l < 0 || l >= config.L) throw std::out_of_range("group index out of range");
  std::vector<int> members;
  if (auto shape = resolved_group_shape(config)) {
    const auto [lx, ly] = *shape;
    const int groups_x = config.A_x / lx;
    const int gx = l % groups_x;
    const int gy = l / groups_x;
    members.reserve(static_cast<std::size_t>(lx * ly));
    for (int y = gy * ly; y < (gy + 1) * ly; ++y)
      for (int x = gx * lx; x < (gx + 1) * lx; ++x) members.push_back(y * config.A_x + x);
    return members;
  }
  const int size = config.N / config.L;
  for (int n = l * size; n < (l + 1) * size; ++n) members.push_back(n);
  return members;
}

ValidationReport validate(const SystemConfig& c) {
  ValidationReport report;
  auto fail = [&](std::string label, std::string message) {
    report.violations.push_back({std::move(label), std::move(message)});
  };

  if (c.K < 1) fail("structure", "K must be at least 1");
  if (c.N < 0) fail("structure", "N must be non-negative");
  if (c.L < 1 || c.C < 1) fail("structure", "L and C must be at least 1");
  if (c.L != c.C) fail("C10", "L must equal C");
  if (c.L >= 1 && c.N % c.L != 0) fail("structure", "N must be divisible by L");
  if (c.A_x > 0 && c.A_y > 0 && c.A_x * c.A_y != c.N) fail("structure", "A_x * A_y must equal N");
  if (c.l_x > 0 && c.l_y > 0 && c.L >= 1 && c.l_x * c.l_y * c.L != c.N)
    fail("structure", "group size l_x * l_y must equal N / L");
  if (c.B <= 0.0) fail("structure", "bandwidth must be positive");
  if (c.f_c <= 0.0) fail("structure", "carrier frequency must be positive");
  if (c.sigma2 <= 0.0) fail("structure", "noise power must be positive");
  if (c.phase_bits < 0 || c.phase_bits > 16) fail("C3", "phase bits must be in [0, 16]");
  if (c.P_RIS < 0.0 || c.P <= 0.0) fail("structure", "powers must be non-negative");
  if (c.L >= 1 && c.transmission_budget(c.L) <= 0.0)
    fail(c.L == 1 ? "C1" : "C7", "transmit budget P - P_RIS/L must be positive");

  if (!(c.d > 0.0)) fail("structure", "user-AP distance must be positive");
  if (c.d_v < 0.0 || c.d_h < 0.0) fail("structure", "RIS offsets must be non-negative");
  if (c.d <= c.d_v) fail("structure", "d must exceed d_v");

  if (std::abs(c.t_h + c.t_r - c.T) > 1e-9 * std::max(1.0, c.T)) fail("C4", "t_h + t_r must equal T");
  if (c.t_h <= 0.0 || c.t_r <= 0.0) fail("C4", "t_h and t_r must be positive");
  if (c.t_p <= 0.0) fail("structure", "t_p must be positive");
  if (c.slot_time <= 0.0) fail("structure", "slot time must be positive");
  if (c.SIFS < 0.0 || c.DIFS < 0.0 || c.ack_time < 0.0) fail("structure", "interframe spaces must be non-negative");
  if (c.ack_time >= c.t_p) fail("structure", "ACK airtime must be shorter than t_p");
  if (c.eRTS_bytes < 0 || c.eCTS_bytes < 0) fail("structure", "control packet sizes must be non-negative");
  if (c.T_cycle < 1) fail("structure", "T_cycle must be at least one slot");
  if (c.t_p > 0.0 && c.slots_per_phase() < 1) fail("structure", "t_r must hold at least one data slot");
  if (c.r_max < 1) fail("C6", "r_max must be at least 1");

  if (c.W0 < 1) fail("structure", "W0 must be at least 1");
  if (c.m < 0 || c.m > 20) fail("structure", "m must be in [0, 20]");
  if (c.W0 >= 1 && c.m >= 0 && c.m <= 20 && c.CW_max != (c.W0 << c.m))
    fail("structure", "CW_max must equal 2^m * W0");

  if (c.warmup_frames < 0) fail("structure", "warmup_frames must be non-negative");
  if (c.arrival_rate < 0.0) fail("structure", "arrival_rate must be non-negative");
  if (c.overhear_loss < 0.0 || c.overhear_loss > 1.0) fail("structure", "overhear_loss must be a probability");
  return report;
}

std::optional<Violation> check_negotiation_balance(const SystemConfig& c, double zeta_s) {
  const Timings t = derived_timings(c);
  const double lhs = c.t_p / t.t_s * c.r_max * zeta_s;
  if (lhs <= c.t_r / c.t_h) return std::nullopt;
  std::ostringstream os;
  os << "(t_p/t_s) r_max zeta_s = " << lhs << " exceeds t_r/t_h = " << c.t_r / c.t_h;
  return Violation{c.C > 1 ? "C11" : "C5", os.str()};
}

// ---------------------------------------------------------------------------
// key=value parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

// Splits "12.5ms" into (12.5, "ms").
std::pair<double, std::string> number_with_unit(std::string_view key, std::string_view text) {
  text = trim(text);
  const std::string lowered = lower(text);
  if (lowered == "-inf" || lowered.rfind("-infdbm", 0) == 0)
    return {-std::numeric_limits<double>::infinity(), lowered.size() > 4 ? "dbm" : ""};
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(std::string(text), &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad numeric value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return {value, lower(trim(text.substr(pos)))};
}

double parse_plain(std::string_view key, std::string_view text) {
  auto [v, unit] = number_with_unit(key, text);
  if (!unit.empty()) throw std::invalid_argument("unexpected unit '" + unit + "' for " + std::string(key));
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  const double v = parse_plain(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw std::invalid_argument("integer expected for " + std::string(key));
  return static_cast<int>(v);
}

double parse_seconds(std::string_view key, std::string_view text) {
  auto [v, unit] = number_with_unit(key, text);
  if (unit.empty() || unit == "s") return v;
  if (unit == "ms") return v / 1e3;
  if (unit == "us") return v / 1e6;
  if (unit == "ns") return v / 1e9;
  throw std::invalid_argument("unknown time unit '" + unit + "' for " + std::string(key));
}

double parse_hertz(std::string_view key, std::string_view text) {
  auto [v, unit] = number_with_unit(key, text);
  if (unit.empty() || unit == "hz") return v;
  if (unit == "khz") return v * 1e3;
  if (unit == "mhz" || unit == "mbps") return v * 1e6;
  if (unit == "ghz") return v * 1e9;
  throw std::invalid_argument("unknown frequency unit '" + unit + "' for " + std::string(key));
}

// Bare numbers are dBm.
double parse_watts(std::string_view key, std::string_view text) {
  auto [v, unit] = number_with_unit(key, text);
  if (unit.empty() || unit == "dbm") return std::isinf(v) && v < 0 ? 0.0 : dbm_to_watts(v);
  if (unit == "w") return v;
  if (unit == "mw") return v / 1e3;
  if (unit == "uw") return v / 1e6;
  throw std::invalid_argument("unknown power unit '" + unit + "' for " + std::string(key));
}

void parse_ratio(std::string_view key, std::string_view text, int& x, int& y) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument(std::string(key) + " expects the form x:y");
  x = parse_int(key, text.substr(0, colon));
  y = parse_int(key, text.substr(colon + 1));
}

// T_cycle as a bare count of data transmissions, or as a duration.
void set_cycle(SystemConfig& c, std::string_view text) {
  auto [v, unit] = number_with_unit("T_cycle", text);
  if (unit.empty() || unit == "tx") {
    c.T_cycle = parse_int("T_cycle", trim(text).substr(0, trim(text).size() - unit.size()));
    return;
  }
  const double seconds = parse_seconds("T_cycle", text);
  const double slots = seconds / c.t_p;
  if (std::abs(slots - std::round(slots)) > 1e-6)
    throw std::invalid_argument("T_cycle duration must be a multiple of t_p");
  c.T_cycle = static_cast<int>(std::round(slots));
}

}  // namespace

void set_key(SystemConfig& c, std::string_view raw_key, std::string_view value) {
  const std::string key(trim(raw_key));
  value = trim(value);
  if (key == "K") c.K = parse_int(key, value);
  else if (key == "N") c.N = parse_int(key, value);
  else if (key == "L") c.L = parse_int(key, value);
  else if (key == "C") c.C = parse_int(key, value);
  else if (key == "A") parse_ratio(key, value, c.A_x, c.A_y);
  else if (key == "l") parse_ratio(key, value, c.l_x, c.l_y);
  else if (key == "B") c.B = parse_hertz(key, value);
  else if (key == "f_c") c.f_c = parse_hertz(key, value);
  else if (key == "P") c.P = parse_watts(key, value);
  else if (key == "P_RIS") c.P_RIS = parse_watts(key, value);
  else if (key == "sigma2") c.sigma2 = parse_watts(key, value);
  else if (key == "b" || key == "phase_bits") {
    const std::string v = lower(value);
    c.phase_bits = (v == "inf" || v == "continuous") ? 0 : parse_int(key, value);
  }
  else if (key == "d") c.d = parse_plain(key, value);
  else if (key == "d_h") c.d_h = parse_plain(key, value);
  else if (key == "d_v") c.d_v = parse_plain(key, value);
  else if (key == "channel_mode") {
    const std::string v = lower(value);
    if (v == "geometric-los" || v == "geometric") c.channel_mode = ChannelMode::kGeometricLos;
    else if (v == "random-phase" || v == "random") c.channel_mode = ChannelMode::kRandomPhase;
    else throw std::invalid_argument("channel_mode must be geometric-los or random-phase");
  }
  else if (key == "path_mode") {
    const std::string v = lower(value);
    if (v == "exact") c.path_mode = PathMode::kExact;
    else if (v == "equal") c.path_mode = PathMode::kEqual;
    else throw std::invalid_argument("path_mode must be exact or equal");
  }
  else if (key == "T") c.T = parse_seconds(key, value);
  else if (key == "t_h") c.t_h = parse_seconds(key, value);
  else if (key == "t_r") c.t_r = parse_seconds(key, value);
  else if (key == "t_p") c.t_p = parse_seconds(key, value);
  else if (key == "T_cycle") set_cycle(c, value);
  else if (key == "r_max") c.r_max = parse_int(key, value);
  else if (key == "SIFS") c.SIFS = parse_seconds(key, value);
  else if (key == "DIFS") c.DIFS = parse_seconds(key, value);
  else if (key == "slot_time") c.slot_time = parse_seconds(key, value);
  else if (key == "ack_time") c.ack_time = parse_seconds(key, value);
  else if (key == "eRTS_bytes") c.eRTS_bytes = parse_int(key, value);
  else if (key == "eCTS_bytes") c.eCTS_bytes = parse_int(key, value);
  else if (key == "W0") c.W0 = parse_int(key, value);
  else if (key == "m") c.m = parse_int(key, value);
  else if (key == "CW_max") c.CW_max = parse_int(key, value);
  else if (key == "warmup_frames") c.warmup_frames = parse_int(key, value);
  else if (key == "arrival_rate") c.arrival_rate = parse_plain(key, value);
  else if (key == "overhear_loss") c.overhear_loss = parse_plain(key, value);
  else throw std::invalid_argument("unknown configuration key '" + key + "'");
}

SystemConfig parse_config(std::istream& in) {
  SystemConfig config;
  std::vector<std::pair<std::string, std::string>> deferred;  // T_cycle needs t_p
  bool cw_given = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    try {
      if (key == "T_cycle") {
        deferred.emplace_back(key, value);
      } else {
        set_key(config, key, value);
        cw_given = cw_given || key == "CW_max";
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  for (const auto& [key, value] : deferred) set_key(config, key, value);
  // CW_max follows the doubling ladder unless stated explicitly.
  if (!cw_given && config.m >= 0 && config.m <= 20) config.CW_max = config.W0 << config.m;
  return config;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read configuration file '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const SystemConfig& c) {
  auto num = [](double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  out << "K = " << c.K << "\nN = " << c.N << "\nL = " << c.L << "\nC = " << c.C << '\n'
      << "A = " << c.A_x << ':' << c.A_y << "\nl = " << c.l_x << ':' << c.l_y << '\n'
      << "B = " << num(c.B) << "\nf_c = " << num(c.f_c) << '\n'
      << "P = " << num(c.P) << "W\nP_RIS = " << num(c.P_RIS) << "W\nsigma2 = " << num(c.sigma2) << "W\n"
      << "phase_bits = " << c.phase_bits << '\n'
      << "d = " << num(c.d) << "\nd_h = " << num(c.d_h) << "\nd_v = " << num(c.d_v) << '\n'
      << "channel_mode = " << (c.channel_mode == ChannelMode::kGeometricLos ? "geometric-los" : "random-phase") << '\n'
      << "path_mode = " << (c.path_mode == PathMode::kExact ? "exact" : "equal") << '\n'
      << "T = " << num(c.T) << "\nt_h = " << num(c.t_h) << "\nt_r = " << num(c.t_r) << "\nt_p = " << num(c.t_p) << '\n'
      << "T_cycle = " << c.T_cycle << "\nr_max = " << c.r_max << '\n'
      << "SIFS = " << num(c.SIFS) << "\nDIFS = " << num(c.DIFS) << "\nslot_time = " << num(c.slot_time)
      << "\nack_time = " << num(c.ack_time) << '\n'
      << "eRTS_bytes = " << c.eRTS_bytes << "\neCTS_bytes = " << c.eCTS_bytes << '\n'
      << "W0 = " << c.W0 << "\nm = " << c.m << "\nCW_max = " << c.CW_max << '\n'
      << "warmup_frames = " << c.warmup_frames << "\narrival_rate = " << num(c.arrival_rate)
      << "\noverhear_loss = " << num(c.overhear_loss) << '\n';
}

}  // namespace rismac

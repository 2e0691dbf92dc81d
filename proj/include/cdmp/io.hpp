// Copyright 2026 The cdmp Authors
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

// File formats.
//
// Demonstration CSV : header `t,y1,y2,y3,qw,qx,qy,qz`, one row per sample.
// Model file        : `key = value...` lines, '#' comments, numbers written
//                     in shortest round-trip form so a reload is bit-exact.
// Episode log CSV   : `t,x,tau_a,n_ypos,...,n_wz` then the raw xi blocks.
// Run config        : same key-value syntax as the model file.
#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cdmp/dmp.hpp"
#include "cdmp/learning.hpp"
#include "cdmp/sim.hpp"

namespace cdmp {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::vector<double> parse_numbers(std::string_view s) {
  std::vector<double> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok));
  return out;
}

// Key-value text --------------------------------------------------------------

/// Ordered `key = value` entries. Keys may repeat (e.g. one line per pulse).
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in) {
    KeyValueFile kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
      }
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw FormatError("line " + std::to_string(lineno) + ": expected key = value");
      }
      kv.entries_.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
  }

  static KeyValueFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return parse(in);
  }

  void add(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
  }

  bool has(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return true;
    }
    return false;
  }

  /// Last value for `key`; throws if absent.
  const std::string& get(const std::string& key) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
      if (it->first == key) return it->second;
    }
    throw FormatError("missing key '" + key + "'");
  }

  std::vector<std::string> get_all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) {
      if (k == key) out.push_back(v);
    }
    return out;
  }

  double number(const std::string& key) const { return parse_double(get(key)); }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key, std::size_t expected) const {
    auto v = parse_numbers(get(key));
    if (v.size() != expected) {
      throw FormatError("key '" + key + "' expects " + std::to_string(expected) +
                        " values, got " + std::to_string(v.size()));
    }
    return v;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::vector<std::pair<std::string, std::string>> entries_;
};

// Demonstration CSV -----------------------------------------------------------

inline constexpr std::string_view kDemoHeader = "t,y1,y2,y3,qw,qx,qy,qz";

inline void write_demo_csv(std::ostream& out, const Demonstration& d) {
  out << kDemoHeader << '\n';
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto& y = d.y()[k];
    const auto& q = d.q()[k];
    out << format_double(d.t()[k]) << ',' << format_double(y.x()) << ','
        << format_double(y.y()) << ',' << format_double(y.z()) << ','
        << format_double(q.w()) << ',' << format_double(q.x()) << ','
        << format_double(q.y()) << ',' << format_double(q.z()) << '\n';
  }
}

inline Demonstration read_demo_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty demonstration file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kDemoHeader) {
    throw FormatError("demonstration header must be '" + std::string(kDemoHeader) + "'");
  }
  std::vector<double> t;
  std::vector<Vec3> y;
  std::vector<Quaternion> q;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 8) {
      throw FormatError("line " + std::to_string(lineno) + ": expected 8 columns");
    }
    double v[8];
    for (int i = 0; i < 8; ++i) v[i] = parse_double(cols[i]);
    t.push_back(v[0]);
    y.emplace_back(v[1], v[2], v[3]);
    q.emplace_back(v[4], v[5], v[6], v[7]);
  }
  return Demonstration(std::move(t), std::move(y), std::move(q));
}

inline void save_demo(const std::string& path, const Demonstration& d) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  write_demo_csv(out, d);
}

inline Demonstration load_demo(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return read_demo_csv(in);
}

// Model file -----------------------------------------------------------------

inline constexpr std::string_view kModelFormat = "cdmp-model-1";

namespace detail {

template <typename Vec>
std::string join_numbers(const Vec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_double(v[i]);
  }
  return s;
}

inline std::string join_quat(const Quaternion& q) {
  return join_numbers(q.coeffs());
}

}  // namespace detail

inline void write_model(std::ostream& out, const DmpModel& m) {
  KeyValueFile kv;
  kv.add("format", std::string(kModelFormat));
  kv.add("alpha_z", format_double(m.alpha_z()));
  kv.add("beta_z", format_double(m.beta_z()));
  kv.add("alpha_x", format_double(m.alpha_x()));
  kv.add("tau", format_double(m.tau()));
  kv.add("n_basis", std::to_string(m.n_basis()));
  kv.add("pole_eps", format_double(m.pole_eps()));
  kv.add("start_position", detail::join_numbers(m.start_position()));
  kv.add("start_orientation", detail::join_quat(m.start_orientation()));
  kv.add("goal_position", detail::join_numbers(m.goal_position()));
  kv.add("goal_orientation", detail::join_quat(m.goal_orientation()));
  for (int i = 0; i < kPoseDims; ++i) {
    const std::string idx = std::to_string(i + 1);
    kv.add("centers." + idx, detail::join_numbers(m.centers().row(i)));
    kv.add("widths." + idx, detail::join_numbers(m.widths().row(i)));
    kv.add("weights." + idx, detail::join_numbers(m.weights().row(i)));
  }
  out << "# temporally coupled Cartesian DMP; rows 1-3 position, 4-6 orientation\n";
  kv.write(out);
}

inline DmpModel read_model(std::istream& in) {
  const KeyValueFile kv = KeyValueFile::parse(in);
  if (kv.get("format") != kModelFormat) {
    throw FormatError("unsupported model format '" + kv.get("format") + "'");
  }
  DmpModel::Fields f;
  f.alpha_z = kv.number("alpha_z");
  if (kv.number("beta_z") != f.alpha_z / 4.0) {
    throw FormatError("beta_z must equal alpha_z / 4");
  }
  f.alpha_x = kv.number("alpha_x");
  f.tau = kv.number("tau");
  f.pole_eps = kv.number_or("pole_eps", kDefaultPoleEpsilon);
  const double nb_value = kv.number("n_basis");
  if (!(nb_value >= 1) || nb_value != std::floor(nb_value)) {
    throw FormatError("n_basis must be a positive integer");
  }
  const auto nb = static_cast<std::size_t>(nb_value);
  const auto vec3 = [&](const std::string& key) {
    const auto v = kv.numbers(key, 3);
    return Vec3(v[0], v[1], v[2]);
  };
  const auto quat = [&](const std::string& key) {
    const auto v = kv.numbers(key, 4);
    return Quaternion(v[0], v[1], v[2], v[3]);
  };
  f.start_position = vec3("start_position");
  f.start_orientation = quat("start_orientation");
  f.goal_position = vec3("goal_position");
  f.goal_orientation = quat("goal_orientation");
  f.centers.resize(kPoseDims, static_cast<Eigen::Index>(nb));
  f.widths.resize(kPoseDims, static_cast<Eigen::Index>(nb));
  f.weights.resize(kPoseDims, static_cast<Eigen::Index>(nb));
  for (int i = 0; i < kPoseDims; ++i) {
    const std::string idx = std::to_string(i + 1);
    const auto c = kv.numbers("centers." + idx, nb);
    const auto w = kv.numbers("widths." + idx, nb);
    const auto wt = kv.numbers("weights." + idx, nb);
    for (std::size_t j = 0; j < nb; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      f.centers(i, jj) = c[j];
      f.widths(i, jj) = w[j];
      f.weights(i, jj) = wt[j];
    }
  }
  return DmpModel(std::move(f));
}

inline void save_model(const std::string& path, const DmpModel& m) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  write_model(out, m);
}

inline DmpModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return read_model(in);
}

// Episode log CSV -------------------------------------------------------------

inline constexpr std::string_view kEpisodeHeaderNorms =
    "t,x,tau_a,n_ypos,n_yvel,n_dac,n_womega,n_e,n_ycg,n_z,n_dcg,n_wz";

inline std::string episode_csv_header() {
  std::string h(kEpisodeHeaderNorms);
  const std::pair<const char*, int> raw[] = {
      {"ypos", 3}, {"yvel", 3}, {"dac", 3}, {"womega", 3}, {"e", 6},
      {"ycg", 3},  {"z", 3},    {"dcg", 3}, {"wz", 3}};
  for (const auto& [name, n] : raw) {
    for (int i = 1; i <= n; ++i) h += "," + std::string(name) + "_" + std::to_string(i);
  }
  return h;
}

inline void write_episode_csv(std::ostream& out, const EpisodeLog& log) {
  out << episode_csv_header() << '\n';
  for (const auto& r : log.records) {
    const auto n = r.xi.norms();
    std::string line = format_double(r.t) + ',' + format_double(r.xi.x) + ',' +
                       format_double(r.tau_a);
    // Norms in header order; the phase block (index 5) is the x column.
    for (int b = 0; b < 10; ++b) {
      if (b == 5) continue;
      line += ',' + format_double(n[static_cast<std::size_t>(b)]);
    }
    const auto append = [&](const auto& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) line += ',' + format_double(v[i]);
    };
    append(r.xi.y_pos);
    append(r.xi.y_vel);
    append(r.xi.d_ac);
    append(r.xi.omega_err);
    append(r.xi.e);
    append(r.xi.y_cg);
    append(r.xi.z);
    append(r.xi.d_cg);
    append(r.xi.omega_z);
    out << line << '\n';
  }
}

/// Norm columns of an episode CSV: t, x, tau_a and the nine block norms.
struct EpisodeNormRow {
  double t;
  double x;
  double tau_a;
  std::array<double, 9> norms;

  double xi_norm() const {
    double s = x * x;
    for (double v : norms) s += v * v;
    return std::sqrt(s);
  }
};

inline std::vector<EpisodeNormRow> read_episode_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty episode log");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind(std::string(kEpisodeHeaderNorms), 0) != 0) {
    throw FormatError("episode log header does not match");
  }
  std::vector<EpisodeNormRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cols = split(line, ',');
    if (cols.size() < 12) {
      throw FormatError("episode log line " + std::to_string(lineno) + " is short");
    }
    EpisodeNormRow r{};
    r.t = parse_double(cols[0]);
    r.x = parse_double(cols[1]);
    r.tau_a = parse_double(cols[2]);
    for (std::size_t i = 0; i < 9; ++i) r.norms[i] = parse_double(cols[3 + i]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace cdmp

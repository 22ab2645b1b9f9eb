// Copyright 2026 The swipht-sim Authors
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

#include "swipht/readout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>

#include "swipht/parallel.hpp"
#include "swipht/rng.hpp"

namespace swipht {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInvSqrt2Pi = 0.3989422804014327;

int row_of(int beta) {
  if (beta < 1 || beta > kNumMappings) throw ValidationError("readout: beta must be in 1..7");
  return beta - 1;
}

void check_nu(int nu) {
  if (nu < 0 || nu > 3) throw ValidationError("readout: nu must be in 0..3");
}

Eigen::Vector4d populations_of(const DensityMatrix& rho) { return rho.matrix().diagonal().real(); }

double normal_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
}

// Euclidean projection onto {p >= 0, sum p = 1}.
Eigen::Vector4d project_to_simplex(const Eigen::Vector4d& v) {
  std::array<double, 4> u{v[0], v[1], v[2], v[3]};
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (int k = 0; k < 4; ++k) {
    cumsum += u[k];
    const double t = (cumsum - 1.0) / (k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

using Vector7d = Eigen::Matrix<double, kNumMappings, 1>;

// Weighted least squares restricted to `support`, subject to sum p = 1.
// Returns false if the reduced KKT system is singular.
bool solve_on_support(const ReadoutCalibration::Table& a, const Vector7d& y, const Vector7d& w, unsigned support,
                      Eigen::Vector4d& p) {
  std::vector<int> idx;
  for (int j = 0; j < 4; ++j)
    if (support & (1u << j)) idx.push_back(j);
  const int m = static_cast<int>(idx.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) kkt(r, c) = (a.col(idx[r]).array() * w.array() * a.col(idx[c]).array()).sum();
    kkt(r, m) = kkt(m, r) = 1.0;
    rhs[r] = (a.col(idx[r]).array() * w.array() * y.array()).sum();
  }
  rhs[m] = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible()) return false;
  const Eigen::VectorXd sol = lu.solve(rhs);
  p.setZero();
  for (int r = 0; r < m; ++r) p[idx[r]] = sol[r];
  return true;
}

// ---- mixture fitting -------------------------------------------------------

struct Mixture {
  double weight_high = 0.5;
  double mean_low = 0.0, sigma_low = 1.0;
  double mean_high = 1.0, sigma_high = 1.0;
  double log_likelihood = -std::numeric_limits<double>::infinity();
  bool converged = false;
};

double mixture_log_likelihood(const std::vector<double>& x, const Mixture& m) {
  double ll = 0.0;
  for (double v : x)
    ll += std::log((1.0 - m.weight_high) * normal_pdf(v, m.mean_low, m.sigma_low) +
                   m.weight_high * normal_pdf(v, m.mean_high, m.sigma_high) + 1e-300);
  return ll;
}

// EM on sorted data. `fix_components` re-estimates only the weight.
Mixture run_em(const std::vector<double>& x, Mixture m, double sigma_floor, bool fix_components) {
  const double n = static_cast<double>(x.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < 1000; ++it) {
    double s1 = 0, m0 = 0, m1 = 0, q0 = 0, q1 = 0, ll = 0;
    for (double v : x) {
      const double a = (1.0 - m.weight_high) * normal_pdf(v, m.mean_low, m.sigma_low);
      const double b = m.weight_high * normal_pdf(v, m.mean_high, m.sigma_high);
      const double tot = a + b + 1e-300;
      ll += std::log(tot);
      const double r = b / tot;
      s1 += r;
      m1 += r * v, m0 += (1.0 - r) * v;
      q1 += r * v * v, q0 += (1.0 - r) * v * v;
    }
    const double s0 = n - s1;
    m.weight_high = s1 / n;
    if (!fix_components) {
      if (s0 < 1e-9 || s1 < 1e-9) {
        m.log_likelihood = ll;
        m.converged = true;
        return m;
      }
      m.mean_low = m0 / s0;
      m.mean_high = m1 / s1;
      m.sigma_low = std::max(sigma_floor, std::sqrt(std::max(0.0, q0 / s0 - m.mean_low * m.mean_low)));
      m.sigma_high = std::max(sigma_floor, std::sqrt(std::max(0.0, q1 / s1 - m.mean_high * m.mean_high)));
    }
    if (!std::isfinite(ll)) return m;
    if (std::abs(ll - prev) < 1e-8 * std::max(1.0, std::abs(ll))) {
      m.log_likelihood = mixture_log_likelihood(x, m);
      m.converged = true;
      return m;
    }
    prev = ll;
  }
  m.log_likelihood = mixture_log_likelihood(x, m);
  return m;
}

struct Moments {
  double mean = 0.0, sigma = 0.0;
};

Moments moments(std::vector<double>::const_iterator first, std::vector<double>::const_iterator last) {
  const double n = static_cast<double>(last - first);
  const double mean = std::accumulate(first, last, 0.0) / n;
  double ss = 0.0;
  for (auto it = first; it != last; ++it) ss += (*it - mean) * (*it - mean);
  return {mean, std::sqrt(ss / n)};
}

struct CellFit {
  Mixture mixture;
  Moments single;
  double single_ll = 0.0;
  bool two_components = false;
};

CellFit fit_cell(const std::vector<double>& sorted) {
  const double n = static_cast<double>(sorted.size());
  CellFit out;
  out.single = moments(sorted.begin(), sorted.end());
  const double floor = std::max(1e-12, 1e-6 * (sorted.back() - sorted.front()));
  out.single.sigma = std::max(out.single.sigma, floor);
  out.single_ll = 0.0;
  for (double v : sorted) out.single_ll += std::log(normal_pdf(v, out.single.mean, out.single.sigma) + 1e-300);

  for (double q : {0.1, 0.5, 0.9}) {
    const auto k = static_cast<std::ptrdiff_t>(q * n);
    if (k < 2 || k > static_cast<std::ptrdiff_t>(sorted.size()) - 2) continue;
    const Moments lo = moments(sorted.begin(), sorted.begin() + k);
    const Moments hi = moments(sorted.begin() + k, sorted.end());
    Mixture init;
    init.weight_high = 1.0 - q;
    init.mean_low = lo.mean, init.sigma_low = std::max(lo.sigma, floor);
    init.mean_high = hi.mean, init.sigma_high = std::max(hi.sigma, floor);
    const Mixture m = run_em(sorted, init, floor, false);
    if (m.converged && std::isfinite(m.log_likelihood) && m.log_likelihood > out.mixture.log_likelihood)
      out.mixture = m;
  }
  if (out.mixture.converged && out.mixture.mean_low > out.mixture.mean_high) {
    std::swap(out.mixture.mean_low, out.mixture.mean_high);
    std::swap(out.mixture.sigma_low, out.mixture.sigma_high);
    out.mixture.weight_high = 1.0 - out.mixture.weight_high;
  }
  // BIC: the mixture spends three extra parameters.
  out.two_components = out.mixture.converged && 2.0 * (out.mixture.log_likelihood - out.single_ll) > 3.0 * std::log(n);
  return out;
}

}  // namespace

void ReadoutCalibration::validate() const {
  for (const Table* t : {&K, &V_low, &V_high, &sigma_low, &sigma_high})
    if (!t->allFinite()) throw ValidationError("ReadoutCalibration: non-finite entries");
  if ((K.array() < 0.0).any() || (K.array() > 1.0).any())
    throw ValidationError("ReadoutCalibration: K must lie in [0, 1]");
  if ((sigma_low.array() <= 0.0).any() || (sigma_high.array() <= 0.0).any())
    throw ValidationError("ReadoutCalibration: sigmas must be positive");
  if ((V_high.array() <= V_low.array()).any()) throw ValidationError("ReadoutCalibration: V_high must exceed V_low");
}

ReadoutCalibration::Table ReadoutCalibration::design_matrix() const {
  return ((1.0 - K.array()) * V_low.array() + K.array() * V_high.array()).matrix();
}

nlohmann::json ReadoutCalibration::to_json() const {
  const auto table = [](const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < kNumMappings; ++r) rows.push_back({t(r, 0), t(r, 1), t(r, 2), t(r, 3)});
    return rows;
  };
  nlohmann::json maps = nlohmann::json::array();
  for (int r = 0; r < kNumMappings; ++r)
    maps.push_back({{"beta", r + 1},
                    {"map1_L", map_table[r].map1_L},
                    {"map1_H", map_table[r].map1_H},
                    {"map2_H", map_table[r].map2_H}});
  return {{"schema_version", 1},
          {"basis_order", {"gg", "ge", "eg", "ee"}},
          {"bias_dbm", bias_dbm},
          {"K", table(K)},
          {"V_low", table(V_low)},
          {"V_high", table(V_high)},
          {"sigma_low", table(sigma_low)},
          {"sigma_high", table(sigma_high)},
          {"map_table", maps}};
}

ReadoutCalibration ReadoutCalibration::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != 1) throw ValidationError("calibration: unsupported schema_version");
    if (j.at("basis_order") != nlohmann::json({"gg", "ge", "eg", "ee"}))
      throw ValidationError("calibration: basis_order must be [gg, ge, eg, ee]");
    ReadoutCalibration c;
    const auto table = [&](const char* key, Table& t) {
      const auto& rows = j.at(key);
      if (!rows.is_array() || rows.size() != kNumMappings)
        throw ValidationError(std::string("calibration: ") + key + " must have 7 rows");
      for (int r = 0; r < kNumMappings; ++r) {
        if (!rows[r].is_array() || rows[r].size() != 4)
          throw ValidationError(std::string("calibration: ") + key + " rows must have 4 entries");
        for (int col = 0; col < 4; ++col) t(r, col) = rows[r][col].get<double>();
      }
    };
    table("K", c.K);
    table("V_low", c.V_low);
    table("V_high", c.V_high);
    table("sigma_low", c.sigma_low);
    table("sigma_high", c.sigma_high);
    const auto& bias = j.at("bias_dbm");
    if (bias.size() != kNumMappings) throw ValidationError("calibration: bias_dbm must have 7 entries");
    for (int r = 0; r < kNumMappings; ++r) c.bias_dbm[r] = bias[r].get<double>();
    const auto& maps = j.at("map_table");
    if (maps.size() != kNumMappings) throw ValidationError("calibration: map_table must have 7 entries");
    for (int r = 0; r < kNumMappings; ++r) {
      c.map_table[r].map1_L = maps[r].at("map1_L").get<std::string>();
      c.map_table[r].map1_H = maps[r].at("map1_H").get<std::string>();
      c.map_table[r].map2_H = maps[r].at("map2_H").get<std::string>();
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("calibration: malformed JSON: ") + e.what());
  }
}

ReadoutCalibration ReadoutCalibration::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("calibration: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("calibration: " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

void ReadoutCalibration::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("calibration: cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

double shot_distribution_pdf(double v, int beta, int nu, const ReadoutCalibration& cal) {
  const int r = row_of(beta);
  check_nu(nu);
  const double k = cal.K(r, nu);
  return (1.0 - k) * normal_pdf(v, cal.V_low(r, nu), cal.sigma_low(r, nu)) +
         k * normal_pdf(v, cal.V_high(r, nu), cal.sigma_high(r, nu));
}

ShotRecord sample_shots(const DensityMatrix& rho, int beta, const ReadoutCalibration& cal, std::size_t n,
                        std::uint64_t seed) {
  const int r = row_of(beta);
  if (n < 1) throw ValidationError("sample_shots: N must be >= 1");
  const Eigen::Vector4d p = populations_of(rho).cwiseMax(0.0);
  std::array<double, 4> cdf{};
  std::partial_sum(p.data(), p.data() + 4, cdf.begin());
  auto rng = make_stream(seed, {static_cast<std::uint64_t>(beta)});

  ShotRecord rec;
  rec.beta = beta;
  rec.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uniform01(rng) * cdf[3];
    int nu = 0;
    while (nu < 3 && u >= cdf[nu]) ++nu;
    const bool high = uniform01(rng) < cal.K(r, nu);
    const double z = standard_normal(rng);
    rec.values.push_back(high ? cal.V_high(r, nu) + cal.sigma_high(r, nu) * z
                              : cal.V_low(r, nu) + cal.sigma_low(r, nu) * z);
  }
  return rec;
}

double expected_mean(const Eigen::Vector4d& populations, int beta, const ReadoutCalibration& cal) {
  return cal.design_matrix().row(row_of(beta)).dot(populations);
}

double expected_mean(const DensityMatrix& rho, int beta, const ReadoutCalibration& cal) {
  return expected_mean(populations_of(rho), beta, cal);
}

double mean_uncertainty(const Eigen::Vector4d& populations, int beta, std::size_t n, const ReadoutCalibration& cal) {
  if (n < 1) throw ValidationError("mean_uncertainty: N must be >= 1");
  const int r = row_of(beta);
  const double mean = expected_mean(populations, beta, cal);
  double var = 0.0;
  for (int nu = 0; nu < 4; ++nu) {
    const double k = cal.K(r, nu);
    const double dl = cal.V_low(r, nu) - mean, dh = cal.V_high(r, nu) - mean;
    var += populations[nu] * ((1.0 - k) * (cal.sigma_low(r, nu) * cal.sigma_low(r, nu) + dl * dl) +
                              k * (cal.sigma_high(r, nu) * cal.sigma_high(r, nu) + dh * dh));
  }
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
}

double mean_uncertainty(const DensityMatrix& rho, int beta, std::size_t n, const ReadoutCalibration& cal) {
  return mean_uncertainty(populations_of(rho), beta, n, cal);
}

PopulationEstimate invert_populations(const Vector7d& means, std::size_t n, const ReadoutCalibration& cal) {
  cal.validate();
  if (n < 1) throw ValidationError("invert_populations: N must be >= 1");
  if (!means.allFinite()) throw ValidationError("invert_populations: means must be finite");
  const ReadoutCalibration::Table a = cal.design_matrix();

  Eigen::Vector4d p0;
  if (!solve_on_support(a, means, Vector7d::Ones(), 0xF, p0))
    throw NumericalError("invert_populations: design matrix is rank deficient");
  const Eigen::Vector4d p_sigma = project_to_simplex(p0);

  Vector7d w;
  for (int b = 0; b < kNumMappings; ++b) {
    const double s = mean_uncertainty(p_sigma, b + 1, n, cal);
    w[b] = 1.0 / (s * s);
  }

  PopulationEstimate best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (unsigned support = 1; support < 16; ++support) {
    Eigen::Vector4d p;
    if (!solve_on_support(a, means, w, support, p)) continue;
    if ((p.array() < -1e-12).any()) continue;
    p = p.cwiseMax(0.0);
    p /= p.sum();
    const double obj = ((means - a * p).array().square() * w.array()).sum();
    if (obj < best_obj) best_obj = obj, best.p = p;
  }
  if (!std::isfinite(best_obj)) throw NumericalError("invert_populations: no feasible solution");
  best.residual = best_obj;
  best.model_mismatch = best_obj > kChi2ThreeDof999;

  // Null-space parameterization of sum p = 1 for the covariance.
  Eigen::Matrix<double, 4, 3> z;
  z << 1, 0, 0, 0, 1, 0, 0, 0, 1, -1, -1, -1;
  const Eigen::Matrix3d fisher = z.transpose() * a.transpose() * w.asDiagonal() * a * z;
  best.covariance = z * fisher.inverse() * z.transpose();
  return best;
}

CalibrationFit fit_calibration(const std::vector<ShotRecord>& histograms) {
  std::map<std::pair<int, int>, std::vector<double>> cells;
  for (const auto& rec : histograms) {
    row_of(rec.beta);
    check_nu(rec.nu);
    if (rec.values.size() < 1000) throw ValidationError("fit_calibration: need >= 1000 shots per histogram");
    auto& v = cells[{rec.beta, rec.nu}];
    v.insert(v.end(), rec.values.begin(), rec.values.end());
  }

  CalibrationFit out;
  ReadoutCalibration& c = out.calibration;
  for (auto* t : {&c.K, &c.V_low, &c.V_high, &c.sigma_low, &c.sigma_high}) t->setConstant(kNaN);
  c.bias_dbm = ReadoutCalibration::device().bias_dbm;
  c.map_table = ReadoutCalibration::device().map_table;

  // Sorting makes every fit independent of shot order.
  std::array<std::array<std::optional<CellFit>, 4>, kNumMappings> all_fits;
  std::array<std::array<std::vector<double>, 4>, kNumMappings> all_data;
  for (auto& [key, values] : cells) {
    all_data[key.first - 1][key.second] = std::move(values);
    std::sort(all_data[key.first - 1][key.second].begin(), all_data[key.first - 1][key.second].end());
  }
  parallel_for(kNumMappings * 4, 0, [&](std::size_t i) {
    const auto& d = all_data[i / 4][i % 4];
    if (!d.empty()) all_fits[i / 4][i % 4] = fit_cell(d);
  });

  for (int beta = 1; beta <= kNumMappings; ++beta) {
    const int r = beta - 1;
    const auto& fits = all_fits[r];
    const auto& data = all_data[r];

    int balanced = -1;
    for (int nu = 0; nu < 4; ++nu) {
      if (!fits[nu] || !fits[nu]->two_components) continue;
      const double w = fits[nu]->mixture.weight_high;
      if (w < 0.02 || w > 0.98) continue;
      if (balanced < 0 || std::abs(w - 0.5) < std::abs(fits[balanced]->mixture.weight_high - 0.5)) balanced = nu;
    }

    for (int nu = 0; nu < 4; ++nu) {
      CellFitReport rep;
      rep.beta = beta, rep.nu = nu;
      rep.present = fits[nu].has_value();
      if (!rep.present) {
        out.cells.push_back(rep);
        continue;
      }
      const CellFit& f = *fits[nu];
      Mixture m = f.mixture;
      const bool degenerate = !f.two_components || m.weight_high < 0.02 || m.weight_high > 0.98;
      if (!degenerate) {
        rep.converged = true;
      } else if (balanced >= 0) {
        const Mixture& ref = fits[balanced]->mixture;
        // The surviving component is the single-Gaussian fit when the
        // mixture is not significant, else the dominant component.
        double mean = f.single.mean, sigma = f.single.sigma;
        if (f.two_components) {
          const bool high_dominant = m.weight_high > 0.5;
          mean = high_dominant ? m.mean_high : m.mean_low;
          sigma = high_dominant ? m.sigma_high : m.sigma_low;
        }
        const bool is_low = std::abs(mean - ref.mean_low) <= std::abs(mean - ref.mean_high);
        Mixture init;
        if (is_low) {
          init.mean_low = mean, init.sigma_low = sigma;
          init.mean_high = ref.mean_high, init.sigma_high = ref.sigma_high;
          init.weight_high = 0.01;
        } else {
          init.mean_high = mean, init.sigma_high = sigma;
          init.mean_low = ref.mean_low, init.sigma_low = ref.sigma_low;
          init.weight_high = 0.99;
        }
        m = run_em(data[nu], init, 0.0, true);
        rep.converged = m.converged;
        rep.borrowed = true;
      }
      rep.log_likelihood = m.log_likelihood;
      if (rep.converged) {
        c.K(r, nu) = m.weight_high;
        c.V_low(r, nu) = m.mean_low, c.sigma_low(r, nu) = m.sigma_low;
        c.V_high(r, nu) = m.mean_high, c.sigma_high(r, nu) = m.sigma_high;
      }
      out.cells.push_back(rep);
    }
  }
  return out;
}

void write_shots_csv(std::ostream& os, const std::vector<ShotRecord>& records) {
  os << "beta,shot_index,v\n";
  os.precision(12);
  for (const auto& rec : records)
    for (std::size_t i = 0; i < rec.values.size(); ++i) os << rec.beta << ',' << i << ',' << rec.values[i] << '\n';
}

}  // namespace swipht

#include "superact/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace superact {

std::uint64_t CounterRng::next_u64() {
  std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::vector<Observable> parse_setting(std::string_view setting) {
  std::vector<Observable> out;
  std::size_t i = 0;
  auto lower = [&](std::size_t k) { return static_cast<char>(std::tolower(static_cast<unsigned char>(setting[k]))); };
  while (i < setting.size()) {
    const char c = lower(i);
    if (c == 'x') {
      out.push_back(Observable::X);
    } else if (c == 'y') {
      out.push_back(Observable::Y);
    } else if (c == 'z') {
      out.push_back(Observable::Z);
    } else if (c == 'm' && i + 1 < setting.size() && setting[i + 1] >= '0' && setting[i + 1] <= '2') {
      out.push_back(setting[i + 1] == '0' ? Observable::M0 : setting[i + 1] == '1' ? Observable::M1 : Observable::M2);
      ++i;
    } else {
      throw std::invalid_argument("invalid measurement setting \"" + std::string(setting) + "\"");
    }
    ++i;
  }
  if (out.empty()) throw std::invalid_argument("empty measurement setting");
  return out;
}

std::string setting_name(const std::vector<Observable>& setting) {
  std::string s;
  for (auto o : setting) {
    switch (o) {
      case Observable::X: s += "x"; break;
      case Observable::Y: s += "y"; break;
      case Observable::Z: s += "z"; break;
      case Observable::M0: s += "m0"; break;
      case Observable::M1: s += "m1"; break;
      case Observable::M2: s += "m2"; break;
    }
  }
  return s;
}

namespace {

// Columns are the +1 and -1 eigenvectors.
Matrix eigenbasis(Observable o) {
  const double s = 1.0 / std::sqrt(2.0);
  double angle = 0.0;
  switch (o) {
    case Observable::Z: return Matrix::identity(2);
    case Observable::X: angle = 0.0; break;
    case Observable::Y: angle = std::numbers::pi / 2.0; break;
    case Observable::M0: angle = 0.0; break;
    case Observable::M1: angle = std::numbers::pi / 3.0; break;
    case Observable::M2: angle = 2.0 * std::numbers::pi / 3.0; break;
  }
  const Complex e = std::exp(Complex{0.0, angle});
  return Matrix{{s, s}, {s * e, -s * e}};
}

void check_setting(const DensityMatrix& rho, const std::vector<Observable>& setting) {
  if (setting.size() != rho.n_qubits()) {
    throw std::invalid_argument("setting has " + std::to_string(setting.size()) + " observables for " +
                                std::to_string(rho.n_qubits()) + " qubits");
  }
}

}  // namespace

std::vector<double> born_probabilities(const DensityMatrix& rho, const std::vector<Observable>& setting) {
  check_setting(rho, setting);
  Matrix u = Matrix::identity(1);
  for (auto o : setting) u = kron(u, eigenbasis(o));
  const Matrix rotated = u.adjoint() * rho.matrix() * u;
  const double tr = rho.trace();
  std::vector<double> p(rotated.rows());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(0.0, rotated(i, i).real()) / tr;
  return p;
}

Histogram sample_counts(const DensityMatrix& rho, const std::vector<Observable>& setting, std::uint64_t shots,
                        std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  const auto probs = born_probabilities(rho, setting);
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    if (probs[i] > 0.0) last_nonzero = i;
  Histogram h{setting_name(setting), shots, seed, std::vector<std::uint64_t>(probs.size(), 0), rho.n_qubits()};
  CounterRng rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.next_double() * acc;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    // u can round up to acc; fall back to the last outcome with weight.
    if (k >= probs.size()) k = last_nonzero;
    ++h.counts[k];
  }
  return h;
}

std::string Histogram::to_json() const {
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::string key(n_qubits, '0');
    for (std::size_t b = 0; b < n_qubits; ++b)
      if ((i >> (n_qubits - 1 - b)) & 1U) key[b] = '1';
    hist[key] = counts[i];
  }
  nlohmann::ordered_json doc;
  doc["setting"] = setting;
  doc["shots"] = shots;
  doc["seed"] = seed;
  doc["histogram"] = std::move(hist);
  return doc.dump();
}

double correlation(const Histogram& h) {
  double s = 0.0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double sign = (std::popcount(i) % 2 == 0) ? 1.0 : -1.0;
    s += sign * static_cast<double>(h.counts[i]);
  }
  return s / static_cast<double>(h.shots);
}

double population(const Histogram& h) {
  return static_cast<double>(h.counts.front() + h.counts.back()) / static_cast<double>(h.shots);
}

double exact_correlation(const DensityMatrix& rho, const std::vector<Observable>& setting) {
  const auto p = born_probabilities(rho, setting);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += (std::popcount(i) % 2 == 0 ? 1.0 : -1.0) * p[i];
  return s;
}

}  // namespace superact

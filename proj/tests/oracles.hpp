#pragma once

// Reference implementations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "discrepancy/matrix.hpp"

namespace oracle {

// Cyclic Jacobi rotations on a dense copy; eigenvalues sorted descending.
inline std::vector<double> jacobi_eigenvalues(const discrepancy::SymMatrix& m) {
  const std::size_t d = m.dim();
  std::vector<double> a(m.data().begin(), m.data().end());
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * d + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(d);
  for (std::size_t i = 0; i < d; ++i) ev[i] = at(i, i);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

inline double jacobi_spectral_norm(const discrepancy::SymMatrix& m) {
  const auto ev = jacobi_eigenvalues(m);
  return ev.empty() ? 0.0 : std::max(std::abs(ev.front()), std::abs(ev.back()));
}

inline std::vector<double> gaussian(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 eng(seed * 7919 + 17);
  std::normal_distribution<double> nd;
  std::vector<double> v(count);
  for (auto& x : v) x = nd(eng);
  return v;
}

inline discrepancy::SymMatrix random_sym(std::size_t d, std::uint64_t seed) {
  auto g = gaussian(d * d, seed);
  std::vector<double> s(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s[i * d + j] = 0.5 * (g[i * d + j] + g[j * d + i]);
  return discrepancy::SymMatrix(d, s);
}

inline discrepancy::Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  return discrepancy::Matrix(r, c, gaussian(r * c, seed));
}

// Naive min over all sign vectors of ‖Σ x_i A_i‖.
inline double brute_force_optimum(const std::vector<discrepancy::SymMatrix>& mats) {
  const std::size_t n = mats.size(), d = mats.front().dim();
  double best = 1e300;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<double> acc(d * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = (mask >> i) & 1 ? -1.0 : 1.0;
      for (std::size_t k = 0; k < d * d; ++k) acc[k] += s * mats[i].data()[k];
    }
    best = std::min(best, jacobi_spectral_norm(discrepancy::SymMatrix(d, acc)));
  }
  return best;
}

}  // namespace oracle

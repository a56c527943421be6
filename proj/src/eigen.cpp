// Symmetric eigensolver: Householder reduction to tridiagonal form and the
// implicit-shift QL iteration (the EISPACK tred2/tql2 pair). Eigenvector
// rotations run on contiguous rows so they go through the rot kernel.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "discrepancy/errors.hpp"
#include "discrepancy/kernels.hpp"
#include "discrepancy/matcore.hpp"

namespace discrepancy {

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i-1 and i; off[0] == 0
  std::vector<double> basis;  // n x n, column j is the j-th Householder basis vector
};

Tridiagonal tridiagonalize(const SymMatrix& m, bool want_vectors) {
  const std::size_t n = m.dim();
  std::vector<double> v(m.data().begin(), m.data().end());
  std::vector<double> d(n), e(n, 0.0);
  auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };

  for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += V(k, j) * d[k];
          e[k] += V(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) V(k, j) -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (!want_vectors) {
    for (std::size_t j = 0; j < n; ++j) d[j] = V(j, j);
    e[0] = 0.0;
    return {std::move(d), std::move(e), {}};
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
  return {std::move(d), std::move(e), std::move(v)};
}

// QL with implicit shifts on (d, e). When rows is non-null it holds the
// basis transposed (row j == eigenvector j) and is rotated alongside.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>* rows) {
  const std::size_t n = d.size();
  if (n == 0) return;
  const auto& kt = kernels::active();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60 * static_cast<int>(n) + 200) throw InvalidMatrix("eigensolver failed to converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (rows) kt.rot(rows->data() + ii * n, rows->data() + (ii + 1) * n, c, s, n);
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

void require_finite(const SymMatrix& m) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw InvalidMatrix("matrix has non-finite entries");
  }
}

}  // namespace

Spectrum eig_sym(const SymMatrix& m) {
  require_finite(m);
  const std::size_t n = m.dim();
  if (n == 0) return {};
  Tridiagonal t = tridiagonalize(m, true);
  // transpose the basis so eigenvectors are rows
  std::vector<double> rows(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[j * n + i] = t.basis[i * n + j];
  ql_implicit(t.diag, t.off, &rows);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.diag[a] > t.diag[b]; });

  Spectrum out;
  out.values.resize(n);
  std::vector<double> vecs(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = t.diag[order[k]];
    std::copy_n(rows.begin() + static_cast<std::ptrdiff_t>(order[k] * n), n,
                vecs.begin() + static_cast<std::ptrdiff_t>(k * n));
  }
  out.vectors = Matrix(n, n, std::move(vecs));
  return out;
}

std::vector<double> eigvals_sym(const SymMatrix& m) {
  require_finite(m);
  const std::size_t n = m.dim();
  if (n == 0) return {};
  Tridiagonal t = tridiagonalize(m, false);
  ql_implicit(t.diag, t.off, nullptr);
  std::sort(t.diag.begin(), t.diag.end(), std::greater<>());
  return std::move(t.diag);
}

SymMatrix spectral_apply(const Spectrum& s, const std::function<double(double)>& f) {
  const std::size_t n = s.values.size();
  std::vector<double> out(n * n, 0.0);
  const auto& kt = kernels::active();
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(s.values[k]);
    if (w == 0.0) continue;
    const auto q = s.vector(k);
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = w * q[i];
      if (wi != 0.0) kt.axpy(wi, q.data(), out.data() + i * n, n);
    }
  }
  return SymMatrix(n, std::move(out));
}

SymMatrix reconstruct(const Spectrum& s) {
  return spectral_apply(s, [](double v) { return v; });
}

double spectral_norm(const SymMatrix& m) {
  const auto ev = eigvals_sym(m);
  if (ev.empty()) return 0.0;
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double nuclear_norm(const SymMatrix& m) {
  double s = 0.0;
  for (double v : eigvals_sym(m)) s += std::abs(v);
  return s;
}

double min_eigenvalue(const SymMatrix& m) {
  const auto ev = eigvals_sym(m);
  return ev.empty() ? 0.0 : ev.back();
}

double operator_norm(const Matrix& m) { return spectral_norm(hermitian_dilation(m)); }

}  // namespace discrepancy

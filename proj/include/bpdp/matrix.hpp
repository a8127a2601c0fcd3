#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bpdp {

// Dense square matrix, row-major.
class SmallMatrix {
 public:
  explicit SmallMatrix(int n = 0) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}
  SmallMatrix(std::initializer_list<std::initializer_list<double>> rows) : SmallMatrix(static_cast<int>(rows.size())) {
    int i = 0;
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != n_) throw std::invalid_argument("matrix must be square");
      int j = 0;
      for (double v : r) (*this)(i, j++) = v;
      ++i;
    }
  }

  static SmallMatrix identity(int n) {
    SmallMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int size() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  friend SmallMatrix operator*(const SmallMatrix& x, const SmallMatrix& y) {
    SmallMatrix r(x.n_);
    for (int i = 0; i < x.n_; ++i)
      for (int k = 0; k < x.n_; ++k) {
        const double v = x(i, k);
        if (v == 0.0) continue;
        for (int j = 0; j < x.n_; ++j) r(i, j) += v * y(k, j);
      }
    return r;
  }

  SmallMatrix scaled(double k) const {
    SmallMatrix r = *this;
    for (double& v : r.a_) v *= k;
    return r;
  }

  SmallMatrix transposed() const {
    SmallMatrix r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  friend bool operator==(const SmallMatrix&, const SmallMatrix&) = default;

 private:
  int n_;
  std::vector<double> a_;
};

inline SmallMatrix power(SmallMatrix m, unsigned n) {
  SmallMatrix r = SmallMatrix::identity(m.size());
  while (n > 0) {
    if (n & 1u) r = r * m;
    m = m * m;
    n >>= 1;
  }
  return r;
}

// Non-loop transitions between frame states in the order 0, 1, 2, 3, 2', 1'.
inline SmallMatrix cycle_matrix() {
  return {{0, 1, 0, 0, 0, 0}, {1, 0, 1, 0, 0, 0}, {0, 1, 0, 1, 0, 0},
          {0, 0, 1, 0, 1, 0}, {0, 0, 0, 1, 0, 1}, {1, 0, 0, 0, 1, 0}};
}

// Entry (0,3) of the (2K+3)-rd power of the cycle matrix, in exact integer arithmetic.
inline std::int64_t matrix_power_entry(int K) {
  if (K < 0) throw std::invalid_argument("K must be non-negative");
  using Row = std::array<std::int64_t, 6>;
  static constexpr int adj[6][6] = {{0, 1, 0, 0, 0, 0}, {1, 0, 1, 0, 0, 0}, {0, 1, 0, 1, 0, 0},
                                    {0, 0, 1, 0, 1, 0}, {0, 0, 0, 1, 0, 1}, {1, 0, 0, 0, 1, 0}};
  Row v{1, 0, 0, 0, 0, 0};  // row 0 of the identity
  for (int step = 0; step < 2 * K + 3; ++step) {
    Row next{};
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) next[j] += v[i] * adj[i][j];
    v = next;
  }
  return v[3];
}

// ((1-sqrt2)(2-sqrt2)^K + (1+sqrt2)(2+sqrt2)^K) / 2
inline double closed_form_entry(int K) {
  if (K < 0) throw std::invalid_argument("K must be non-negative");
  constexpr double r2 = std::numbers::sqrt2;
  return 0.5 * ((1.0 - r2) * std::pow(2.0 - r2, K) + (1.0 + r2) * std::pow(2.0 + r2, K));
}

// The cycle matrix with double and triple deletions, weighted by x.
inline SmallMatrix perturbed_matrix(double x) {
  if (!(x > 0.0 && x < 0.25)) throw std::invalid_argument("perturbation must lie in (0, 1/4)");
  return {{0, x, 0, 0, 0, 0}, {1, 0, x, 0, 0, 0}, {1, 1, 0, x, 0, 0},
          {1, 2, 1, 0, 1, 1}, {1, 0, 0, x, 0, 1}, {1, 0, 0, 0, x, 0}};
}

// Monic characteristic polynomial det(X - M), coefficients from X^n down to X^0
// (Faddeev-LeVerrier).
inline std::vector<double> characteristic_polynomial(const SmallMatrix& m) {
  const int n = m.size();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  SmallMatrix mk(n);  // M_0 = 0
  for (int k = 1; k <= n; ++k) {
    SmallMatrix t = mk;
    for (int i = 0; i < n; ++i) t(i, i) += c[k - 1];
    mk = m * t;
    c[k] = -mk.trace() / k;
  }
  return c;
}

using Complex = std::complex<double>;

// All complex roots of a polynomial (coefficients from the leading term down),
// by Aberth-Ehrlich iteration followed by Newton polishing.
inline std::vector<Complex> polynomial_roots(const std::vector<double>& coeffs) {
  std::vector<double> c = coeffs;
  while (!c.empty() && c.front() == 0.0) c.erase(c.begin());
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  for (double& v : c) v /= coeffs[coeffs.size() - c.size()];
  auto eval = [&](Complex z, Complex& deriv) {
    Complex p = 1.0, dp = 0.0;
    for (int i = 1; i <= n; ++i) {
      dp = dp * z + p;
      p = p * z + c[i];
    }
    deriv = dp;
    return p;
  };
  double bound = 0.0;
  for (int i = 1; i <= n; ++i) bound = std::max(bound, std::abs(c[i]));
  const double radius = 1.0 + bound;
  std::vector<Complex> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) z[k] = std::polar(0.5 * radius, 2.0 * std::numbers::pi * (k + 0.25) / n + 0.4);
  for (int iter = 0; iter < 500; ++iter) {
    double move = 0.0;
    for (int k = 0; k < n; ++k) {
      Complex d;
      const Complex p = eval(z[k], d);
      if (p == 0.0) continue;
      const Complex ratio = p / d;
      Complex s = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0 / (z[k] - z[j]);
      const Complex step = ratio / (1.0 - ratio * s);
      z[k] -= step;
      move = std::max(move, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (move < 1e-16) break;
  }
  for (auto& r : z)
    for (int it = 0; it < 3; ++it) {
      Complex d;
      const Complex p = eval(r, d);
      if (d == 0.0) break;
      r -= p / d;
    }
  std::sort(z.begin(), z.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return z;
}

inline std::vector<Complex> eigenvalues(const SmallMatrix& m) { return polynomial_roots(characteristic_polynomial(m)); }

inline double spectral_radius(const SmallMatrix& m) {
  double r = 0.0;
  for (Complex z : eigenvalues(m)) r = std::max(r, std::abs(z));
  return r;
}

// Roots of X^4 + p X^2 + q X + r by Ferrari's method.
inline std::array<Complex, 4> depressed_quartic_roots(double p, double q, double r) {
  if (q == 0.0) {
    const Complex disc = std::sqrt(Complex(p * p - 4.0 * r));
    const Complex y1 = 0.5 * (-p + disc), y2 = 0.5 * (-p - disc);
    return {std::sqrt(y1), -std::sqrt(y1), std::sqrt(y2), -std::sqrt(y2)};
  }
  // Resolvent cubic 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0; take a positive real root.
  const std::vector<Complex> ms = polynomial_roots({8.0, 8.0 * p, 2.0 * p * p - 8.0 * r, -q * q});
  double m = 0.0;
  for (Complex z : ms)
    if (std::abs(z.imag()) < 1e-12 * (1.0 + std::abs(z)) && z.real() > m) m = z.real();
  // Newton polish of m on the cubic.
  for (int it = 0; it < 4; ++it) {
    const double v = ((8.0 * m + 8.0 * p) * m + (2.0 * p * p - 8.0 * r)) * m - q * q;
    const double dv = (24.0 * m + 16.0 * p) * m + (2.0 * p * p - 8.0 * r);
    if (dv == 0.0) break;
    m -= v / dv;
  }
  const double s = std::sqrt(2.0 * m);
  const Complex d1 = std::sqrt(Complex(-(2.0 * p + 2.0 * m) + 2.0 * q / s));
  const Complex d2 = std::sqrt(Complex(-(2.0 * p + 2.0 * m) - 2.0 * q / s));
  return {0.5 * (-s + d1), 0.5 * (-s - d1), 0.5 * (s + d2), 0.5 * (s - d2)};
}

// Eigenvalues of M(P)/sqrt(P): +-1 and the roots of X^4 - 4X^2 - 4 sqrt(P) X + 2 - P.
inline std::array<double, 6> perturbed_scaled_eigenvalues(double P) {
  const auto quartic = depressed_quartic_roots(-4.0, -4.0 * std::sqrt(P), 2.0 - P);
  std::array<double, 6> out{};
  out[0] = 1.0;
  out[1] = -1.0;
  for (int i = 0; i < 4; ++i) out[2 + i] = quartic[i].real();
  std::sort(out.begin(), out.end());
  return out;
}

enum class NormId { operator2, frobenius, max_row_sum };

// Operator norm induced by the Euclidean norm, by power iteration on M^T M.
inline double operator_norm(const SmallMatrix& m, double tol = 1e-10) {
  const int n = m.size();
  const SmallMatrix mtm = m.transposed() * m;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * i;
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w[i] += mtm(i, j) * v[j];
    double nw = 0.0;
    for (double x : w) nw += x * x;
    nw = std::sqrt(nw);
    if (nw == 0.0) return 0.0;
    for (int i = 0; i < n; ++i) v[i] = w[i] / nw;
    const bool done = std::abs(nw - lambda) <= tol * nw;
    lambda = nw;
    if (done) break;
  }
  return std::sqrt(lambda);
}

inline double matrix_norm(const SmallMatrix& m, NormId id) {
  const int n = m.size();
  switch (id) {
    case NormId::operator2: return operator_norm(m);
    case NormId::frobenius: {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += m(i, j) * m(i, j);
      return std::sqrt(s);
    }
    case NormId::max_row_sum: {
      double best = 0.0;
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += std::abs(m(i, j));
        best = std::max(best, s);
      }
      return best;
    }
  }
  return 0.0;
}

inline double min_eigenvalue_gap(const SmallMatrix& m) {
  const auto ev = eigenvalues(m);
  double eps = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i + 1; j < ev.size(); ++j) eps = std::min(eps, std::abs(ev[i] - ev[j]));
  return eps;
}

// A k-fold root comes back from the root finder as a cluster of width about
// u^{1/k}, so a gap threshold cannot tell it from nearby simple roots. Instead a
// cluster counts as repeated when the characteristic polynomial vanishes at its
// centroid to within rounding; two simple roots delta apart leave |p| ~ delta^2.
inline bool has_repeated_eigenvalue(const SmallMatrix& m) {
  const auto c = characteristic_polynomial(m);
  const auto ev = eigenvalues(m);
  const double radius = 1e-2 * std::max(1.0, spectral_radius(m));
  std::vector<bool> used(ev.size(), false);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> cluster{i};
    used[i] = true;
    for (std::size_t k = 0; k < cluster.size(); ++k)
      for (std::size_t j = 0; j < ev.size(); ++j)
        if (!used[j] && std::abs(ev[cluster[k]] - ev[j]) < radius) {
          used[j] = true;
          cluster.push_back(j);
        }
    if (cluster.size() < 2) continue;
    Complex centre = 0.0;
    for (std::size_t j : cluster) centre += ev[j];
    centre /= double(cluster.size());
    Complex value = 0.0;
    double magnitude = 0.0;
    for (double coeff : c) {
      value = value * centre + coeff;
      magnitude = magnitude * std::abs(centre) + std::abs(coeff);
    }
    if (std::abs(value) <= 64.0 * std::numeric_limits<double>::epsilon() * magnitude) return true;
  }
  return false;
}

// d ((1 + |||I|||) |||M||| / eps)^(d-1) rho(M)^n
inline double lagrange_norm_bound(const SmallMatrix& m, unsigned n, NormId id = NormId::operator2) {
  const int d = m.size();
  if (has_repeated_eigenvalue(m)) throw std::invalid_argument("eigenvalues are not pairwise distinct");
  const double eps = min_eigenvalue_gap(m);
  const double id_norm = matrix_norm(SmallMatrix::identity(d), id);
  return d * std::pow((1.0 + id_norm) * matrix_norm(m, id) / eps, d - 1) * std::pow(spectral_radius(m), n);
}

}  // namespace bpdp

#pragma once

// Exact characteristic polynomials of small nonnegative integer matrices and
// the algebraic-number test used to compare Perron-Frobenius eigenvalues.
// Coefficients are int64 with overflow checks; matrices here are tiny.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace traintrack {

using IntMatrix = std::vector<std::vector<std::int64_t>>;
// Polynomial a_0 + a_1 x + ... + a_d x^d as coefficient vector of size d+1.
using IntPoly = std::vector<std::int64_t>;

namespace detail {
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("intpoly: mul");
  return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("intpoly: add");
  return r;
}
}  // namespace detail

// char_poly(M) returns det(xI - M), monic, via Faddeev-LeVerrier.
inline IntPoly char_poly(const IntMatrix& m) {
  const int n = static_cast<int>(m.size());
  IntPoly c(n + 1, 0);
  c[n] = 1;
  IntMatrix mk(n, std::vector<std::int64_t>(n, 0));  // M_0 = 0
  for (int k = 1; k <= n; ++k) {
    // M_k = M (M_{k-1} + c_{n-k+1} I)
    IntMatrix t = mk;
    for (int i = 0; i < n; ++i) t[i][i] = detail::checked_add(t[i][i], c[n - k + 1]);
    IntMatrix nx(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::int64_t s = 0;
        for (int l = 0; l < n; ++l)
          s = detail::checked_add(s, detail::checked_mul(m[i][l], t[l][j]));
        nx[i][j] = s;
      }
    mk = nx;
    std::int64_t tr = 0;
    for (int i = 0; i < n; ++i) tr = detail::checked_add(tr, mk[i][i]);
    if (tr % k != 0) throw std::logic_error("char_poly: non-integer trace step");
    c[n - k] = -tr / k;
  }
  return c;
}

inline int degree(const IntPoly& p) {
  int d = static_cast<int>(p.size()) - 1;
  while (d > 0 && p[d] == 0) --d;
  return d;
}

inline long double eval_poly(const IntPoly& p, long double x) {
  long double r = 0;
  for (int i = degree(p); i >= 0; --i) r = r * x + static_cast<long double>(p[i]);
  return r;
}

inline IntPoly derivative(const IntPoly& p) {
  IntPoly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<std::int64_t>(i));
  if (d.empty()) d.push_back(0);
  return d;
}

inline IntPoly primitive_part(IntPoly p) {
  std::int64_t g = 0;
  for (auto c : p) g = std::gcd(g, c < 0 ? -c : c);
  if (g > 1)
    for (auto& c : p) c /= g;
  int d = degree(p);
  p.resize(d + 1);
  if (p[d] < 0)
    for (auto& c : p) c = -c;
  return p;
}

// gcd over Q via a primitive pseudo-remainder sequence.
inline IntPoly poly_gcd(IntPoly a, IntPoly b) {
  a = primitive_part(a);
  b = primitive_part(b);
  if (degree(a) < degree(b)) std::swap(a, b);
  while (!(degree(b) == 0 && b[0] == 0)) {
    // pseudo-remainder of a by b
    IntPoly r = a;
    int db = degree(b);
    while (degree(r) >= db && !(degree(r) == 0 && r[0] == 0)) {
      int dr = degree(r);
      std::int64_t lr = r[dr], lb = b[db];
      std::int64_t g = std::gcd(lr < 0 ? -lr : lr, lb < 0 ? -lb : lb);
      std::int64_t mult = lb / g, coef = lr / g;
      for (auto& c : r) c = detail::checked_mul(c, mult);
      for (int i = 0; i <= db; ++i)
        r[dr - db + i] =
            detail::checked_add(r[dr - db + i], -detail::checked_mul(coef, b[i]));
      r = primitive_part(r);
      if (degree(r) == 0 && r[0] == 0) break;
      if (degree(r) < dr) continue;
    }
    a = b;
    b = r;
    if (degree(b) == 0 && b[0] != 0) return IntPoly{1};
  }
  return primitive_part(a);
}

// Largest real root of p on (0, hi] by bisection from a float estimate.
// p must change sign on the initial bracket; callers pass the PF estimate.
inline std::optional<std::pair<long double, long double>> isolate_root(
    const IntPoly& p, long double approx, long double spread = 0.5L) {
  long double lo = approx - spread, hi = approx + spread;
  // shrink the bracket until a sign change is found around approx
  for (int tries = 0; tries < 64; ++tries) {
    if (eval_poly(p, lo) == 0.0L) lo -= 1e-15L;
    if (eval_poly(p, hi) == 0.0L) hi += 1e-15L;
    if (eval_poly(p, lo) * eval_poly(p, hi) < 0) break;
    spread *= 0.5L;
    lo = approx - spread;
    hi = approx + spread;
    if (spread < 1e-14L) return std::nullopt;
  }
  if (eval_poly(p, lo) * eval_poly(p, hi) >= 0) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-16L; ++it) {
    long double mid = (lo + hi) / 2;
    if (eval_poly(p, lo) * eval_poly(p, mid) <= 0)
      hi = mid;
    else
      lo = mid;
  }
  return std::make_pair(lo, hi);
}

// Do the given PF values coincide as algebraic numbers?  True when the two
// characteristic polynomials share a factor with a root in the overlap of
// the isolating intervals of their PF roots.
inline bool pf_roots_equal(const IntPoly& p, long double lp, const IntPoly& q,
                           long double lq) {
  if (std::fabs(static_cast<double>(lp - lq)) > 1e-7) return false;
  IntPoly g;
  try {
    g = poly_gcd(p, q);
  } catch (const std::overflow_error&) {
    // fall back to the float comparison, tolerance 1e-9
    return std::fabs(static_cast<double>(lp - lq)) < 1e-9;
  }
  if (degree(g) == 0) return false;
  auto ip = isolate_root(p, lp);
  auto iq = isolate_root(q, lq);
  if (!ip || !iq) return std::fabs(static_cast<double>(lp - lq)) < 1e-12;
  long double lo = std::max(ip->first, iq->first) - 1e-12L;
  long double hi = std::min(ip->second, iq->second) + 1e-12L;
  if (lo > hi) return false;
  // g must vanish somewhere on [lo, hi]; the PF root is simple in p so it is
  // simple in g, giving a sign change once the interval is tight.
  long double a = eval_poly(g, lo), b = eval_poly(g, hi);
  if (a == 0.0L || b == 0.0L) return true;
  if (a * b < 0) return true;
  // no sign change: g has no root here unless tangent; treat as unequal when
  // |g| stays large relative to the interval.
  long double mid = eval_poly(g, (lo + hi) / 2);
  return std::fabs(static_cast<double>(mid)) < 1e-9;
}

// Power iteration for the PF eigenvalue of an irreducible nonnegative matrix.
// Runs on M + I, which is primitive whenever M is irreducible, so the
// iteration converges even for periodic matrices; the shift is removed at
// the end.
inline double pf_eigenvalue(const IntMatrix& m, double tol = 1e-12,
                            int max_iter = 1000000) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return 0.0;
  std::vector<double> v(n, 1.0 / n);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> w(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) w[i] += static_cast<double>(m[i][j]) * v[j];
      w[i] += v[i];  // the +I shift
    }
    double norm = 0.0;
    for (double x : w) norm += x;
    if (norm == 0.0) return 0.0;
    for (double& x : w) x /= norm;
    double next = norm;  // v sums to 1, so the growth factor estimates λ+1
    if (std::fabs(next - lambda) < tol && it > 8) {
      lambda = next;
      break;
    }
    lambda = next;
    v = w;
  }
  return lambda - 1.0;
}

inline std::string poly_to_string(const IntPoly& p) {
  std::string s;
  for (int i = degree(p); i >= 0; --i) {
    if (p[i] == 0 && degree(p) > 0 && i != degree(p)) continue;
    if (!s.empty()) s += p[i] >= 0 ? " + " : " - ";
    else if (p[i] < 0) s += "-";
    std::int64_t a = p[i] < 0 ? -p[i] : p[i];
    if (a != 1 || i == 0) s += std::to_string(a);
    if (i > 0) s += "x";
    if (i > 1) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

}  // namespace traintrack

#include "line_search.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace qaoa::opt::detail {

namespace {

constexpr double kGolden = 1.618033988749895;
constexpr double kCGold = 0.3819660112501051;

struct Probe {
  Evaluator& ev;
  const std::vector<double>& x;
  const std::vector<double>& d;
  LinePoint best;

  double operator()(double t) {
    auto p = axpy(x, t, d);
    const double f = ev.value(p);
    if (f < best.f) best = {t, f, std::move(p), {}};
    return f;
  }
};

}  // namespace

LinePoint brent_line_min(Evaluator& ev, const std::vector<double>& x, double f0, const std::vector<double>& d,
                         double initial_step, double tol) {
  Probe phi{ev, x, d, {0.0, f0, x, {}}};

  // Bracket a minimum: a < b < c (or reversed) with f(b) <= f(a), f(b) <= f(c).
  double a = 0.0, fa = f0;
  double b = initial_step, fb = phi(b);
  if (fb > fa) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = b + kGolden * (b - a), fc = phi(c);
  for (int i = 0; i < 60 && fb > fc; ++i) {
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    c = b + kGolden * (b - a);
    fc = phi(c);
  }
  if (fb > fc) return phi.best;  // unbounded along d within the expansion cap

  // Brent's method on [min(a,c), max(a,c)] seeded with b.
  double lo = std::min(a, c), hi = std::max(a, c);
  double xm = b, w = b, v = b, fx = fb, fw = fb, fv = fb;
  double step = 0.0, prev_step = 0.0;
  constexpr double zeps = 1e-12;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double tol1 = tol * std::abs(xm) + zeps, tol2 = 2.0 * tol1;
    if (std::abs(xm - mid) <= tol2 - 0.5 * (hi - lo)) break;
    bool golden = true;
    if (std::abs(prev_step) > tol1) {
      const double r = (xm - w) * (fx - fv);
      double q = (xm - v) * (fx - fw);
      double p = (xm - v) * q - (xm - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double older = prev_step;
      prev_step = step;
      if (std::abs(p) < std::abs(0.5 * q * older) && p > q * (lo - xm) && p < q * (hi - xm)) {
        step = p / q;
        const double u = xm + step;
        if (u - lo < tol2 || hi - u < tol2) step = mid > xm ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      prev_step = xm >= mid ? lo - xm : hi - xm;
      step = kCGold * prev_step;
    }
    const double u = std::abs(step) >= tol1 ? xm + step : xm + (step > 0 ? tol1 : -tol1);
    const double fu = phi(u);
    if (fu <= fx) {
      (u >= xm ? lo : hi) = xm;
      v = w, fv = fw;
      w = xm, fw = fx;
      xm = u, fx = fu;
    } else {
      (u < xm ? lo : hi) = u;
      if (fu <= fw || w == xm) {
        v = w, fv = fw;
        w = u, fw = fu;
      } else if (fu <= fv || v == xm || v == w) {
        v = u, fv = fu;
      }
    }
  }
  return phi.best;
}

bool backtracking(Evaluator& ev, const std::vector<double>& x, double f0, double slope, const std::vector<double>& d,
                  double alpha0, double c1, LinePoint& out) {
  double alpha = alpha0;
  for (int i = 0; i < 60 && alpha > 1e-20; ++i) {
    auto p = axpy(x, alpha, d);
    const double f = ev.value(p);
    if (f <= f0 + c1 * alpha * slope) {
      out = {alpha, f, std::move(p), {}};
      return true;
    }
    // Minimizer of the quadratic through f0, slope and f(alpha), kept within [0.1, 0.5] alpha.
    const double denom = 2.0 * (f - f0 - slope * alpha);
    double next = denom > 0.0 ? -slope * alpha * alpha / denom : 0.5 * alpha;
    alpha = std::clamp(next, 0.1 * alpha, 0.5 * alpha);
  }
  return false;
}

bool wolfe_search(Evaluator& ev, const std::vector<double>& x, double f0, const std::vector<double>& g0,
                  const std::vector<double>& d, double alpha0, double c1, double c2, LinePoint& out) {
  const double slope0 = dot(g0, d);
  LinePoint best{0.0, f0, x, g0};
  auto remember = [&best](const LinePoint& p) {
    if (p.f < best.f && !p.g.empty()) best = p;
  };
  auto value_at = [&](double t) {
    LinePoint p{t, 0.0, axpy(x, t, d), {}};
    p.f = ev.value(p.x);
    return p;
  };
  auto with_gradient = [&](LinePoint& p) {
    p.g = ev.gradient(p.x);
    remember(p);
    return dot(p.g, d);
  };

  // lo always satisfies sufficient decrease and carries its gradient.
  auto zoom = [&](LinePoint lo, double lo_slope, LinePoint hi) {
    for (int i = 0; i < 30; ++i) {
      const double delta = hi.alpha - lo.alpha;
      if (std::abs(delta) < 1e-14 * std::max(1.0, std::abs(lo.alpha))) break;
      const double denom = 2.0 * (hi.f - lo.f - lo_slope * delta);
      double t = denom > 0.0 ? lo.alpha - lo_slope * delta * delta / denom : lo.alpha + 0.5 * delta;
      const double a = std::min(lo.alpha, hi.alpha), b = std::max(lo.alpha, hi.alpha);
      if (t < a + 0.1 * (b - a) || t > b - 0.1 * (b - a)) t = lo.alpha + 0.5 * delta;
      LinePoint trial = value_at(t);
      if (trial.f > f0 + c1 * t * slope0 || trial.f >= lo.f) {
        hi = std::move(trial);
        continue;
      }
      const double s = with_gradient(trial);
      if (std::abs(s) <= -c2 * slope0) {
        out = std::move(trial);
        return true;
      }
      if (s * delta >= 0.0) hi = lo;
      lo = std::move(trial);
      lo_slope = s;
    }
    return false;
  };

  LinePoint prev{0.0, f0, x, g0};
  double prev_slope = slope0;
  double alpha = alpha0;
  for (int i = 0; i < 25; ++i) {
    LinePoint trial = value_at(alpha);
    if (trial.f > f0 + c1 * alpha * slope0 || (i > 0 && trial.f >= prev.f)) {
      if (zoom(prev, prev_slope, std::move(trial))) return true;
      break;
    }
    const double s = with_gradient(trial);
    if (std::abs(s) <= -c2 * slope0) {
      out = std::move(trial);
      return true;
    }
    if (s >= 0.0) {
      if (zoom(trial, s, prev)) return true;
      break;
    }
    prev = std::move(trial);
    prev_slope = s;
    alpha *= 2.0;
  }
  out = best;
  return false;
}

}  // namespace qaoa::opt::detail

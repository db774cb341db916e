#include "conewolff/cone_chart.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "conewolff/errors.hpp"
#include "conewolff/frenet.hpp"

namespace conewolff {
namespace {

double normal_pairing(const Curve& c, const Vec3& xi, double s) { return xi.dot(frenet_frame(c, s).N); }

// Safeguarded Newton on a sign-changing bracket [a,b].
double refine_root(const Curve& c, const Vec3& xi, double a, double b, double fa, int max_it) {
  double x = 0.5 * (a + b);
  for (int it = 0; it < max_it; ++it) {
    const FrenetFrame f = frenet_frame(c, x);
    const double fx = xi.dot(f.N);
    if (fx == 0.0) return x;
    if ((fx > 0) == (fa > 0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    // d/ds <xi, N> = |gamma'| <xi, -kappa T + tau B>
    const double df = f.speed * (-f.kappa * xi.dot(f.T) + f.tau * xi.dot(f.B));
    double nx = df != 0.0 ? x - fx / df : 0.5 * (a + b);
    if (!(nx > a && nx < b)) nx = 0.5 * (a + b);
    if (std::abs(nx - x) <= 1e-15 * (1.0 + std::abs(x)) || (b - a) <= 1e-15 * (1.0 + std::abs(x))) return nx;
    x = nx;
  }
  throw NotConverged("sigma root finding exceeded iteration budget");
}

}  // namespace

ConeCoordinates cone_coordinates(const Curve& c, const Vec3& xi, const ChartOptions& opt) {
  Interval I = c.domain();
  if (std::isfinite(opt.window_lo) && std::isfinite(opt.window_hi))
    I = {std::max(I.lo, opt.window_lo), std::min(I.hi, opt.window_hi)};
  const int n = std::max(2, opt.coarse_grid);
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = I.lo + I.length() * i / n;
    fs[i] = normal_pairing(c, xi, xs[i]);
  }
  bool found = false;
  ConeCoordinates best;
  double best_u = std::numeric_limits<double>::infinity();
  auto consider = [&](double s) {
    const FrenetFrame f = frenet_frame(c, s);
    const double r = xi.dot(f.B);
    const double u = xi.dot(f.T);
    if (r <= 0.0) return;
    if (std::abs(u) < best_u) {
      best_u = std::abs(u);
      best = {r, u, s};
      found = true;
    }
  };
  for (int i = 0; i < n; ++i) {
    if (fs[i] == 0.0) consider(xs[i]);
    if ((fs[i] < 0 && fs[i + 1] > 0) || (fs[i] > 0 && fs[i + 1] < 0))
      consider(refine_root(c, xi, xs[i], xs[i + 1], fs[i], opt.max_newton));
  }
  if (fs[n] == 0.0) consider(xs[n]);
  if (!found) throw OutsideCone("no root of <xi, N(sigma)> with r > 0 on the curve domain");
  if (opt.u_over_r_cap > 0.0 && std::abs(best.u) > opt.u_over_r_cap * best.r)
    throw OutsideCone("|u|/r = " + std::to_string(std::abs(best.u) / best.r) + " exceeds the chart cap");
  return best;
}

Vec3 cone_point(const Curve& c, const ConeCoordinates& q) {
  const FrenetFrame f = frenet_frame(c, q.sigma);
  return q.r * f.B + q.u * f.T;
}

ChartGradients scr_gradients(const Curve& c, const Vec3& xi, const ChartOptions& opt) {
  const ConeCoordinates q = cone_coordinates(c, xi, opt);
  const FrenetFrame f = frenet_frame(c, q.sigma);
  const double den = f.speed * (q.u * f.kappa - q.r * f.tau);
  if (std::abs(den) < opt.jacobian_floor) throw SingularJacobian("u kappa - r tau vanishes");
  return {f.B, f.T, f.N / den};
}

}  // namespace conewolff

#include "conewolff/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace conewolff {
namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  cplx value;
  double err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const std::function<cplx(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx kron = fc * kWgk[7];
  cplx gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const cplx f1 = f(c - dx);
    const cplx f2 = f(c + dx);
    kron += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadResult integrate_gk15(const std::function<cplx(double)>& f, double a, double b, const QuadOptions& opt,
                          const std::vector<double>& breakpoints) {
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<Panel> heap;
  QuadResult res;
  cplx total{0.0, 0.0};
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    Panel p = gk15(f, cuts[i], cuts[i + 1]);
    res.evaluations += 15;
    total += p.value;
    err += p.err;
    heap.push(p);
  }
  while (!heap.empty()) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (err <= target) {
      res.converged = true;
      break;
    }
    if (static_cast<int>(heap.size()) >= opt.max_intervals) break;
    Panel worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (m <= worst.a || m >= worst.b) {  // interval exhausted at machine precision
      heap.push(worst);
      break;
    }
    Panel left = gk15(f, worst.a, m);
    Panel right = gk15(f, m, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
  }
  if (heap.empty()) res.converged = true;
  // Re-sum from the panels so the returned value carries no update drift.
  cplx sum{0.0, 0.0};
  double esum = 0.0;
  res.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().err;
    heap.pop();
  }
  res.value = sum;
  res.error = esum;
  return res;
}

GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

GaussRule composite_gauss(double a, double b, int panels, int order) {
  const GaussRule base = gauss_legendre(order);
  GaussRule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      r.nodes.push_back(c + 0.5 * h * base.nodes[i]);
      r.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return r;
}

}  // namespace conewolff

#include "conewolff/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conewolff/errors.hpp"

namespace conewolff {

FrenetFrame frenet_frame(const Curve& c, double s, double floor) {
  const Vec3 d1 = c.derivative(s, 1);
  const Vec3 d2 = c.derivative(s, 2);
  const Vec3 d3 = c.derivative(s, 3);
  const Vec3 cr = d1.cross(d2);
  const double n = cr.norm();
  if (n < floor) throw DegenerateCurvature("|gamma' x gamma''| below floor at s=" + std::to_string(s));
  FrenetFrame f;
  f.speed = d1.norm();
  f.T = d1 / f.speed;
  f.B = cr / n;
  f.N = f.B.cross(f.T);
  f.kappa = n / (f.speed * f.speed * f.speed);
  f.tau = cr.dot(d3) / (n * n);
  return f;
}

namespace {

Eigen::MatrixXd derivative_rows(const Curve& c, double s, int n) {
  Eigen::MatrixXd D(n, 3);
  for (int j = 1; j <= n; ++j) D.row(j - 1) = c.derivative(s, j).transpose();
  return D;
}

double pairing_sum(const Eigen::MatrixXd& D, const Vec3& xi) { return (D * xi).cwiseAbs().sum(); }

}  // namespace

FiniteTypeReport finite_type(const Curve& c, const std::vector<double>& s_samples, const std::vector<Vec3>& xi_samples,
                             int n_max, double c_floor) {
  if (n_max < 1 || n_max > Curve::kMaxOrder) throw DomainError("n_max must lie in 1..5");
  if (s_samples.empty() || xi_samples.empty()) throw DomainError("finite_type needs nonempty samples");
  FiniteTypeReport rep;
  rep.witness_constant = std::numeric_limits<double>::infinity();
  for (double s : s_samples) {
    const Eigen::MatrixXd D = derivative_rows(c, s, n_max);
    int found = 0;
    double witness = 0.0;
    for (int n = 1; n <= n_max && !found; ++n) {
      const Eigen::MatrixXd Dn = D.topRows(n);
      double m = std::numeric_limits<double>::infinity();
      for (const Vec3& xi : xi_samples) m = std::min(m, pairing_sum(Dn, xi.normalized()));
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Dn, Eigen::ComputeFullV);
      const Vec3 weakest = svd.matrixV().col(2);
      m = std::min(m, pairing_sum(Dn, weakest));
      if (m > c_floor) {
        found = n;
        witness = m;
      }
    }
    if (!found) throw TypeExceedsNMax("no order <= " + std::to_string(n_max) + " at s=" + std::to_string(s));
    rep.s.push_back(s);
    rep.type.push_back(found);
    rep.max_type = std::max(rep.max_type, found);
    rep.witness_constant = std::min(rep.witness_constant, witness);
  }
  return rep;
}

ExponentTriple exponent_triple(const Curve& c, double s0, double tol) {
  ExponentTriple t;
  int rank = 0;
  Eigen::MatrixXd D(0, 3);
  for (int j = 1; j <= Curve::kMaxOrder && rank < 3; ++j) {
    Eigen::MatrixXd E(D.rows() + 1, 3);
    E.topRows(D.rows()) = D;
    E.row(D.rows()) = c.derivative(s0, j).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(E);
    const auto sv = svd.singularValues();
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * std::max(1.0, sv(0))) ++r;
    if (r > rank) {
      if (r == 1) t.n1 = j;
      if (r == 2) t.n2 = j;
      if (r == 3) t.n3 = j;
      rank = r;
    }
    D = E;
  }
  if (rank < 3) throw TypeExceedsNMax("derivative span below rank 3 up to order 5");
  return t;
}

std::vector<Vec3> sphere_grid(int n_theta, int n_phi) {
  std::vector<Vec3> out;
  for (int i = 0; i <= n_theta; ++i) {
    const double th = M_PI * i / n_theta;
    const int nphi = (i == 0 || i == n_theta) ? 1 : n_phi;
    for (int j = 0; j < nphi; ++j) {
      const double ph = 2.0 * M_PI * j / n_phi;
      out.emplace_back(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
    }
  }
  return out;
}

}  // namespace conewolff

#include "conewolff/exponent_schedule.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <charconv>
#include <regex>

#include "conewolff/errors.hpp"

namespace conewolff {
namespace {

using Big = boost::multiprecision::cpp_int;
using Q = boost::rational<Big>;

Big pow10(int n) {
  Big r = 1;
  for (int i = 0; i < n; ++i) r *= 10;
  return r;
}

// Accepts integers, decimals with optional exponent, and fractions a/b.
Q parse_exact(const std::string& s) {
  static const std::regex frac(R"(\s*([+-]?\d+)\s*/\s*(\d+)\s*)");
  static const std::regex dec(R"(\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*)");
  std::smatch m;
  if (std::regex_match(s, m, frac)) {
    const Big den(m[2].str());
    if (den == 0) throw DomainError("zero denominator in '" + s + "'");
    return Q(Big(m[1].str()), den);
  }
  if (std::regex_match(s, m, dec) && (m[2].length() + m[3].length()) > 0) {
    const std::string digits = m[2].str() + m[3].str();
    Q v(Big(digits), pow10(static_cast<int>(m[3].length())));
    if (m[4].matched) {
      const int e = std::stoi(m[4].str());
      v *= e >= 0 ? Q(pow10(e)) : Q(Big(1), pow10(-e));
    }
    return m[1].str() == "-" ? -v : v;
  }
  throw DomainError("cannot read '" + s + "' as an exact number");
}

double to_double(const Q& q) {
  return boost::multiprecision::cpp_rational(q.numerator(), q.denominator()).convert_to<double>();
}

std::string to_string(const Q& q) {
  std::string s = q.numerator().str();
  if (q.denominator() != 1) s += "/" + q.denominator().str();
  return s;
}

std::string shortest(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace

ExponentSchedule exponent_schedule(const std::string& p_str, const std::string& eps_str) {
  const Q p = parse_exact(p_str), eps = parse_exact(eps_str);
  if (!(p > 2)) throw DomainError("exponent schedule needs p > 2");
  if (!(eps > 0)) throw DomainError("exponent schedule needs eps > 0");

  // (3/2)^n > 2/eps  <=>  3^n eps > 2^(n+1)
  int n_star = 0;
  {
    Big three = 1, two = 2;
    while (!(Q(three) * eps > Q(two))) {
      three *= 3;
      two *= 2;
      ++n_star;
    }
  }

  const Q c = Q(1, 2) - Q(2) / p + eps / 2;
  const Q two_thirds(2, 3);
  ExponentSchedule s;
  s.p = to_double(p);
  s.eps = to_double(eps);
  s.n_star = n_star;
  s.fixed_point = to_double(c);
  s.recursion_matches_closed_form = true;
  s.strictly_decreasing = true;

  Q beta = 1, pw = 1, prev = 0;
  for (int n = 0; n <= n_star; ++n) {
    const Q closed = pw + (Q(1) - pw) * c;
    if (closed != beta) s.recursion_matches_closed_form = false;
    if (n > 0 && prev > c && !(beta < prev)) s.strictly_decreasing = false;
    s.betas.push_back(to_double(beta));
    s.betas_exact.push_back(to_string(beta));
    prev = beta;
    if (n < n_star) {
      beta = two_thirds * beta + (Q(1) - two_thirds) * c;
      pw *= two_thirds;
    }
  }
  s.distance_bound = beta - c <= pw * (Q(1, 2) + Q(2) / p - eps / 2);
  s.final_bound = beta <= Q(1, 2) - Q(2) / p + eps;
  return s;
}

ExponentSchedule exponent_schedule(double p, double eps) {
  return exponent_schedule(shortest(p), shortest(eps));
}

}  // namespace conewolff

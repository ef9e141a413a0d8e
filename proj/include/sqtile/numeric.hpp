#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sqtile {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& x) { return x.template convert_to<double>(); }
inline double to_double(const Int& x) { return x.template convert_to<double>(); }

inline Int num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int den(const Rat& x) { return boost::multiprecision::denominator(x); }

inline std::string rat_to_string(const Rat& x) {
  if (den(x) == 1) return num(x).str();
  return num(x).str() + "/" + den(x).str();
}

inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  Int n(s.substr(0, slash)), d(s.substr(slash + 1));
  if (d == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  return Rat(n, d);
}

// Best rational approximation p/q of x with q <= max_den, via the
// continued-fraction convergents of x.
inline bool rationalize(double x, Int max_den, Rat& out) {
  if (!std::isfinite(x)) return false;
  Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(rem);
    if (fl > 9e15 || fl < -9e15) break;
    Int a(static_cast<long long>(fl));
    Int p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double frac = rem - fl;
    if (frac < 1e-15) break;
    rem = 1.0 / frac;
  }
  if (q1 == 0) return false;
  out = Rat(p1, q1);
  return true;
}

// Round to 12 significant digits; reports store doubles in this form so
// serialized output is reproducible across runs.
inline double round12(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  double mag = std::pow(10.0, 11 - std::floor(std::log10(std::fabs(x))));
  return std::round(x * mag) / mag;
}

}  // namespace sqtile

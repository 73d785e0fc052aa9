#include "wavenorm/bessel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "wavenorm/error.hpp"

namespace wavenorm {
namespace {

constexpr double kSeriesLimit = 8.0;
constexpr double kAsymptoticLimit = 25.0;

double series(int order, double x) {
  const long double half = 0.5L * x;
  const long double q = -half * half;
  long double term = order == 0 ? 1.0L : half;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (k + order));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, normalised with
// J_0 + 2 sum_{k>=1} J_{2k} = 1.
double miller(int order, double x) {
  int start = static_cast<int>(x) + 40;
  if (start % 2 != 0) ++start;
  double next = 0.0;
  double cur = 1e-30;
  double norm = 0.0;
  double j0 = 0.0;
  double j1 = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = 2.0 * k / x * cur - next;
    next = cur;
    cur = prev;
    // cur now holds J_{k-1}, next holds J_k.
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (k - 1 == 1) j1 = cur;
    if (std::fabs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      j1 *= 1e-250;
    }
  }
  j0 = cur;
  norm += j0;
  return (order == 0 ? j0 : j1) / norm;
}

double asymptotic(int order, double x) {
  const double mu = 4.0 * order * order;
  double p = 0.0;
  double q = 0.0;
  double a = 1.0;  // a_k(order) / x^k
  double last = 1.0;
  for (int k = 0; k < 120; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      a *= (mu - odd * odd) / (k * 8.0 * x);
    }
    const double mag = std::fabs(a);
    if (k > 1 && mag > last) break;  // series has started to diverge
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * a;
    } else {
      q += sign * a;
    }
    if (mag < 1e-18) break;
    last = mag;
  }
  const double chi = x - (0.5 * order + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(int order, double x) {
  if (order != 0 && order != 1) throw DomainError("bessel_j: only orders 0 and 1 are supported");
  if (!(x >= 0.0)) throw DomainError("bessel_j: argument must be non-negative");
  if (x < kSeriesLimit) return series(order, x);
  if (x < kAsymptoticLimit) return miller(order, x);
  return asymptotic(order, x);
}

}  // namespace wavenorm

#pragma once

namespace wavenorm {

/// Bessel function of the first kind J_order(x) for order 0 or 1, x >= 0.
///
/// Power series below x = 8, Miller backward recurrence on [8, 25) and the
/// Hankel asymptotic expansion beyond. Absolute accuracy is better than
/// 1e-14 on [0, 25) and 1e-15 beyond.
/// Throws DomainError for x < 0 or an order other than 0 and 1.
double bessel_j(int order, double x);

inline double bessel_j0(double x) { return bessel_j(0, x); }
inline double bessel_j1(double x) { return bessel_j(1, x); }

}  // namespace wavenorm

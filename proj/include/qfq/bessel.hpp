#pragma once

namespace qfq::bessel {

// Bessel functions of order one, double precision (SLATEC FNLIB Chebyshev
// expansions). Relative accuracy is a few ulps across the supported range.
double j1(double x);  // x >= 0
double y1(double x);  // x > 0
double k1(double x);  // x > 0 (underflows to 0 for very large x)

}  // namespace qfq::bessel

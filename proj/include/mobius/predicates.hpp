#pragma once

// Sign of the 3D orientation determinant, filtered: a floating-point
// evaluation with a static error bound, falling back to exact rationals
// (GMP) when the bound cannot certify the sign.

#include <gmpxx.h>

#include <cmath>
#include <limits>

namespace mobius::predicates {

/// Sign of det[b - a; c - a; d - a]: +1 when d lies on the positive side of
/// the oriented plane (a, b, c) (counterclockwise seen from d), -1 on the
/// other side, 0 when coplanar.
inline int orient3d(const double* a, const double* b, const double* c, const double* d) {
  const double adx = a[0] - d[0], bdx = b[0] - d[0], cdx = c[0] - d[0];
  const double ady = a[1] - d[1], bdy = b[1] - d[1], cdy = c[1] - d[1];
  const double adz = a[2] - d[2], bdz = b[2] - d[2], cdz = c[2] - d[2];

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;

  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                           (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                           (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
  // Shewchuk's first-stage bound, inflated slightly for the subtractions
  // that formed the differences above (those are not exact here).
  constexpr double eps = std::numeric_limits<double>::epsilon() / 2;
  constexpr double bound = (16.0 + 224.0 * eps) * eps;
  if (det > bound * permanent) return -1;
  if (-det > bound * permanent) return 1;

  mpq_class q[4][3];
  const double* p[4] = {a, b, c, d};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) q[i][j] = p[i][j];
  mpq_class m[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = q[i][j] - q[3][j];
  const mpq_class exact = m[0][2] * (m[1][0] * m[2][1] - m[2][0] * m[1][1]) +
                          m[1][2] * (m[2][0] * m[0][1] - m[0][0] * m[2][1]) +
                          m[2][2] * (m[0][0] * m[1][1] - m[1][0] * m[0][1]);
  const int s = sgn(exact);
  return -s;
}

}  // namespace mobius::predicates

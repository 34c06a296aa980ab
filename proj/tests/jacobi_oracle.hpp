#pragma once

// Reference eigensolver for tests: cyclic Jacobi rotations on a plain
// row-major array. Deliberately shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n, int max_sweeps = 100) {
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    double scale = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        if (r != c) off += at(r, c) * at(r, c);
        scale += at(r, c) * at(r, c);
      }
    if (off <= 1e-30 * std::max(scale, 1e-300)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) values[k] = at(k, k);
  std::sort(values.begin(), values.end());
  return values;
}

// Independent FIM assembly from raw coordinates (x0, y0, x1, y1, ...).
inline std::vector<double> fim(const std::vector<double>& xy, const std::vector<std::pair<int, int>>& edges,
                               double sigma, int alpha) {
  const std::size_t n = xy.size();
  std::vector<double> f(n * n, 0.0);
  for (const auto& [i, j] : edges) {
    const double dx = xy[2 * i] - xy[2 * j];
    const double dy = xy[2 * i + 1] - xy[2 * j + 1];
    const double len = std::sqrt(dx * dx + dy * dy);
    const double w = sigma * std::pow(len, alpha);
    std::vector<double> row(n, 0.0);
    row[2 * i] = dx / w;
    row[2 * i + 1] = dy / w;
    row[2 * j] = -dx / w;
    row[2 * j + 1] = -dy / w;
    for (std::size_t r = 0; r < n; ++r) {
      if (row[r] == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) f[r * n + c] += row[r] * row[c];
    }
  }
  return f;
}

}  // namespace oracle

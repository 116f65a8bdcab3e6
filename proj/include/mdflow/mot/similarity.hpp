#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace mdflow::mot {

// Cosine similarity; 0 when either vector is zero. In [0, 1] for
// non-negative inputs.
inline double cosine_similarity(const std::vector<double>& a,
                                const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  // Parallel vectors can land an ulp above 1.
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

// Generalized histogram intersection, normalized by the smaller mass;
// 0 when either vector is zero.
inline double histogram_intersection(const std::vector<double>& a,
                                     const std::vector<double>& b) {
  double overlap = 0.0, sa = 0.0, sb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    overlap += std::min(a[i], b[i]);
    sa += a[i];
    sb += b[i];
  }
  const double denom = std::min(sa, sb);
  if (denom == 0.0) return 0.0;
  return std::clamp(overlap / denom, 0.0, 1.0);
}

}  // namespace mdflow::mot

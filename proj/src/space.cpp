#include "kmflow/space.hpp"

#include <cmath>

namespace kmflow {

bool is_finite(const Vector& x) { return x.allFinite(); }

void require_same_dim(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) {
    throw DimensionError("dimension mismatch: " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
  }
}

double inner(const Vector& x, const Vector& y) {
  require_same_dim(x, y);
  return x.dot(y);
}

double norm(const Vector& x) { return x.norm(); }

double convex_identity_residual(double alpha, const Vector& x,
                                const Vector& y) {
  require_same_dim(x, y);
  const Vector combo = alpha * x + (1.0 - alpha) * y;
  const double lhs =
      combo.squaredNorm() + alpha * (1.0 - alpha) * (x - y).squaredNorm();
  const double rhs = alpha * x.squaredNorm() + (1.0 - alpha) * y.squaredNorm();
  return std::abs(lhs - rhs);
}

}  // namespace kmflow

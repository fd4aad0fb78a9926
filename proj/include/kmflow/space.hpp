#ifndef KMFLOW_SPACE_HPP
#define KMFLOW_SPACE_HPP

#include <Eigen/Dense>

#include "kmflow/errors.hpp"

namespace kmflow {

/// A point of the ambient space, realized as a finite-dimensional real
/// coordinate vector. Weak and norm convergence coincide here.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// True iff every entry is finite (no NaN/Inf).
bool is_finite(const Vector& x);

/// Throws DimensionError unless x and y have the same dimension.
void require_same_dim(const Vector& x, const Vector& y);

/// Euclidean inner product <x, y>. Throws DimensionError on mismatch.
double inner(const Vector& x, const Vector& y);

/// Euclidean norm sqrt(<x, x>).
double norm(const Vector& x);

/// Residual of the convex combination identity
///   |alpha x + (1-alpha) y|^2 + alpha(1-alpha)|x-y|^2
///     = alpha |x|^2 + (1-alpha)|y|^2,
/// valid for every real alpha. Mathematically zero; the returned magnitude
/// is a floating-point self-check.
double convex_identity_residual(double alpha, const Vector& x, const Vector& y);

}  // namespace kmflow

#endif

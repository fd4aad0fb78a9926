#ifndef KMFLOW_OPERATORS_HPP
#define KMFLOW_OPERATORS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "kmflow/space.hpp"

namespace kmflow {

/// Declared regularity class of an operator. The declaration is metadata;
/// certify_nonexpansive / certify_cocoercive spot-check it by sampling.
struct Regularity {
  enum class Kind { Nonexpansive, Averaged, Cocoercive, Lipschitz };
  Kind kind = Kind::Nonexpansive;
  double param = 0.0;  // alpha in (0,1), beta > 0, or L >= 0

  static Regularity nonexpansive() { return {Kind::Nonexpansive, 0.0}; }
  static Regularity averaged(double alpha) { return {Kind::Averaged, alpha}; }
  static Regularity cocoercive(double beta) { return {Kind::Cocoercive, beta}; }
  static Regularity lipschitz(double l) { return {Kind::Lipschitz, l}; }

  std::string describe() const;
};

/// An evaluable map on the space, with dimension and regularity metadata.
/// Handles are immutable values: cheap to copy, safe to share.
struct OperatorHandle {
  std::function<Vector(const Vector&)> eval;
  int dim = 0;
  Regularity regularity;
  std::string label;

  /// Applies the map; throws DimensionError on dimension mismatch.
  Vector operator()(const Vector& x) const;
};

// --- Maximally monotone operator specifications ---------------------------

struct LinearMonotone {
  Matrix matrix;  // M with M + M^T positive semidefinite
};

struct L1Subdifferential {
  double weight = 1.0;  // subdifferential of weight * |.|_1
};

struct NormalConeBox {
  Vector lo, hi;
};

struct NormalConeBall {
  Vector center;
  double radius = 1.0;
};

struct ZeroMonotone {};

/// A maximally monotone operator given by one of the supported closed-form
/// kinds. Monotonicity of the linear kind is checked at construction.
struct MonotoneSpec {
  using Payload = std::variant<LinearMonotone, L1Subdifferential, NormalConeBox,
                               NormalConeBall, ZeroMonotone>;
  int dim = 0;
  Payload payload;

  static MonotoneSpec linear(Matrix m);
  static MonotoneSpec l1(double weight, int dim);
  static MonotoneSpec box(Vector lo, Vector hi);
  static MonotoneSpec ball(Vector center, double radius);
  static MonotoneSpec zero(int dim);
};

// --- Smooth (cocoercive) operator specifications ---------------------------

struct AffineGradient {
  Matrix q;  // symmetric PSD
  Vector b;  // gradient of 0.5 x'Qx - b'x is Qx - b
};

struct LeastSquaresGradient {
  Matrix a;
  Vector b;  // gradient of 0.5 |Ax - b|^2 is A'(Ax - b)
};

/// Gradient of a smooth convex quadratic, with its certified cocoercivity
/// constant beta = 1/L (L the largest curvature eigenvalue, floored at 1e-12).
struct SmoothSpec {
  using Payload = std::variant<AffineGradient, LeastSquaresGradient>;
  int dim = 0;
  double beta = 0.0;
  double lipschitz = 0.0;
  Payload payload;

  static SmoothSpec affine_gradient(Matrix q, Vector b);
  static SmoothSpec least_squares(Matrix a, Vector b);

  Vector eval(const Vector& x) const;
  OperatorHandle as_operator() const;
};

// --- Constructors -----------------------------------------------------------

/// Identity map.
OperatorHandle make_identity(int dim);

/// Planar rotation by theta (a nonexpansive isometry on R^2).
OperatorHandle make_rotation(double theta);

/// Projection onto a box or ball (firmly nonexpansive, idempotent).
/// Throws SpecError for other monotone kinds or invalid sets.
OperatorHandle make_projection(const MonotoneSpec& set);

/// prox_{mu f} for f with closed-form prox: l1 -> soft threshold,
/// box/ball indicators -> projection, symmetric linear -> quadratic prox,
/// zero -> identity. Throws UnsupportedProxError otherwise, SpecError for
/// mu <= 0.
OperatorHandle make_prox(const MonotoneSpec& f, double mu);

/// Resolvent J_{gamma A} = (id + gamma A)^{-1}; firmly nonexpansive. Linear
/// kinds cache a dense factorization at construction.
OperatorHandle make_resolvent(const MonotoneSpec& a, double gamma);

/// Averaged relaxation R = (1 - alpha) id + alpha T, alpha in (0,1).
OperatorHandle make_averaged(const OperatorHandle& t, double alpha);

/// Forward-backward operator T = J_{gamma A} o (id - gamma B) together with
/// the averagedness budget delta = min{1, beta/gamma} + 1/2. Requires
/// 0 < gamma < 2 beta.
struct ForwardBackward {
  OperatorHandle op;
  double delta = 0.0;
};
ForwardBackward make_forward_backward(const MonotoneSpec& a,
                                      const SmoothSpec& b, double gamma);

/// Douglas-Rachford operator T = 1/2 (id + R_{gamma A} o R_{gamma B2}) with
/// R = 2J - id; 1/2-averaged. J_{gamma B2} maps fix T into zer(A + B2).
OperatorHandle make_douglas_rachford(const MonotoneSpec& a,
                                     const MonotoneSpec& b2, double gamma);

// --- Randomized regularity certification -----------------------------------

/// Result of a sampled regularity check. Records the seed and the worst
/// violation so failures are reproducible.
struct CertReport {
  int trials = 0;
  std::uint64_t seed = 0;
  double box_radius = 0.0;
  double worst = 0.0;  // max excess (nonexpansive) / min slack (cocoercive)
  bool pass = false;
};

/// Samples pairs (x, y) in the centered box and checks
/// |Tx - Ty| <= |x - y| up to tolerance 1e-9 (1 + |x - y|).
CertReport certify_nonexpansive(const OperatorHandle& t, int trials,
                                std::uint64_t seed, double box_radius);

/// Samples pairs and checks <x - y, Bx - By> >= beta |Bx - By|^2 up to
/// tolerance -1e-9 (1 + |x - y|^2).
CertReport certify_cocoercive(const OperatorHandle& b, double beta, int trials,
                              std::uint64_t seed, double box_radius);

}  // namespace kmflow

#endif

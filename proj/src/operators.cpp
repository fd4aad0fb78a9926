#include "kmflow/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <utility>

namespace kmflow {

namespace {

Vector soft_threshold(const Vector& x, double tau) {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    out[i] = (v > tau) ? v - tau : (v < -tau ? v + tau : 0.0);
  }
  return out;
}

Vector clamp_box(const Vector& x, const Vector& lo, const Vector& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

Vector project_ball(const Vector& x, const Vector& center, double radius) {
  const Vector d = x - center;
  const double dist = d.norm();
  if (dist <= radius) return x;
  // dist > radius >= 0 rules out the 0/0 tie at the center.
  return center + (radius / dist) * d;
}

double max_eigenvalue_sym(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return es.eigenvalues().maxCoeff();
}

double min_eigenvalue_sym(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return es.eigenvalues().minCoeff();
}

}  // namespace

std::string Regularity::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Nonexpansive:
      os << "nonexpansive";
      break;
    case Kind::Averaged:
      os << "averaged(" << param << ")";
      break;
    case Kind::Cocoercive:
      os << "cocoercive(" << param << ")";
      break;
    case Kind::Lipschitz:
      os << "lipschitz(" << param << ")";
      break;
  }
  return os.str();
}

Vector OperatorHandle::operator()(const Vector& x) const {
  if (x.size() != dim) {
    throw DimensionError("operator '" + label + "' expects dim " +
                         std::to_string(dim) + ", got " +
                         std::to_string(x.size()));
  }
  return eval(x);
}

// --- specs -------------------------------------------------------------------

MonotoneSpec MonotoneSpec::linear(Matrix m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw SpecError("linear monotone operator needs a square matrix");
  }
  const Matrix sym = m + m.transpose();
  if (min_eigenvalue_sym(sym) < -1e-10) {
    throw SpecError("linear operator is not monotone (M + M^T has a negative "
                    "eigenvalue)");
  }
  MonotoneSpec s;
  s.dim = static_cast<int>(m.rows());
  s.payload = LinearMonotone{std::move(m)};
  return s;
}

MonotoneSpec MonotoneSpec::l1(double weight, int dim) {
  if (weight < 0.0) throw SpecError("l1 weight must be nonnegative");
  if (dim < 1) throw SpecError("dimension must be positive");
  MonotoneSpec s;
  s.dim = dim;
  s.payload = L1Subdifferential{weight};
  return s;
}

MonotoneSpec MonotoneSpec::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || lo.size() < 1) {
    throw SpecError("box bounds must share a positive dimension");
  }
  if (((hi - lo).array() < 0.0).any()) {
    throw SpecError("box requires lo <= hi componentwise");
  }
  MonotoneSpec s;
  s.dim = static_cast<int>(lo.size());
  s.payload = NormalConeBox{std::move(lo), std::move(hi)};
  return s;
}

MonotoneSpec MonotoneSpec::ball(Vector center, double radius) {
  if (center.size() < 1) throw SpecError("ball center must be nonempty");
  if (!(radius > 0.0)) throw SpecError("ball radius must be positive");
  MonotoneSpec s;
  s.dim = static_cast<int>(center.size());
  s.payload = NormalConeBall{std::move(center), radius};
  return s;
}

MonotoneSpec MonotoneSpec::zero(int dim) {
  if (dim < 1) throw SpecError("dimension must be positive");
  MonotoneSpec s;
  s.dim = dim;
  s.payload = ZeroMonotone{};
  return s;
}

SmoothSpec SmoothSpec::affine_gradient(Matrix q, Vector b) {
  if (q.rows() != q.cols() || q.rows() != b.size() || b.size() < 1) {
    throw SpecError("affine gradient needs square Q matching b");
  }
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw SpecError("Q must be symmetric");
  }
  if (min_eigenvalue_sym(q) < -1e-10) {
    throw SpecError("Q must be positive semidefinite");
  }
  SmoothSpec s;
  s.dim = static_cast<int>(b.size());
  s.lipschitz = std::max(max_eigenvalue_sym(q), 1e-12);
  s.beta = 1.0 / s.lipschitz;
  s.payload = AffineGradient{std::move(q), std::move(b)};
  return s;
}

SmoothSpec SmoothSpec::least_squares(Matrix a, Vector b) {
  if (a.rows() != b.size() || a.cols() < 1) {
    throw SpecError("least squares needs A with rows matching b");
  }
  SmoothSpec s;
  s.dim = static_cast<int>(a.cols());
  s.lipschitz = std::max(max_eigenvalue_sym(a.transpose() * a), 1e-12);
  s.beta = 1.0 / s.lipschitz;
  s.payload = LeastSquaresGradient{std::move(a), std::move(b)};
  return s;
}

Vector SmoothSpec::eval(const Vector& x) const {
  if (x.size() != dim) {
    throw DimensionError("smooth operator dimension mismatch");
  }
  if (const auto* ag = std::get_if<AffineGradient>(&payload)) {
    return ag->q * x - ag->b;
  }
  const auto& ls = std::get<LeastSquaresGradient>(payload);
  return ls.a.transpose() * (ls.a * x - ls.b);
}

OperatorHandle SmoothSpec::as_operator() const {
  SmoothSpec copy = *this;
  return {[copy](const Vector& x) { return copy.eval(x); }, dim,
          Regularity::cocoercive(beta), "smooth-gradient"};
}

// --- constructors -------------------------------------------------------------

OperatorHandle make_identity(int dim) {
  if (dim < 1) throw SpecError("dimension must be positive");
  return {[](const Vector& x) { return x; }, dim, Regularity::nonexpansive(),
          "identity"};
}

OperatorHandle make_rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  std::ostringstream label;
  label << "rotation(" << theta << ")";
  return {[r](const Vector& x) -> Vector { return r * x; }, 2,
          Regularity::nonexpansive(), label.str()};
}

OperatorHandle make_projection(const MonotoneSpec& set) {
  if (const auto* box = std::get_if<NormalConeBox>(&set.payload)) {
    const Vector lo = box->lo, hi = box->hi;
    return {[lo, hi](const Vector& x) { return clamp_box(x, lo, hi); }, set.dim,
            Regularity::averaged(0.5), "projection(box)"};
  }
  if (const auto* ball = std::get_if<NormalConeBall>(&set.payload)) {
    const Vector c = ball->center;
    const double r = ball->radius;
    return {[c, r](const Vector& x) { return project_ball(x, c, r); }, set.dim,
            Regularity::averaged(0.5), "projection(ball)"};
  }
  throw SpecError("projection requires a box or ball set");
}

OperatorHandle make_prox(const MonotoneSpec& f, double mu) {
  if (!(mu > 0.0)) throw SpecError("prox parameter mu must be positive");
  if (std::holds_alternative<L1Subdifferential>(f.payload)) {
    const double tau = mu * std::get<L1Subdifferential>(f.payload).weight;
    return {[tau](const Vector& x) { return soft_threshold(x, tau); }, f.dim,
            Regularity::averaged(0.5), "prox(l1)"};
  }
  if (std::holds_alternative<NormalConeBox>(f.payload) ||
      std::holds_alternative<NormalConeBall>(f.payload)) {
    OperatorHandle p = make_projection(f);
    p.label = "prox(indicator)";
    return p;
  }
  if (std::holds_alternative<ZeroMonotone>(f.payload)) {
    OperatorHandle id = make_identity(f.dim);
    id.regularity = Regularity::averaged(0.5);
    id.label = "prox(zero)";
    return id;
  }
  if (const auto* lin = std::get_if<LinearMonotone>(&f.payload)) {
    // Quadratic 0.5 x'Mx has prox only when M is an actual Hessian.
    if ((lin->matrix - lin->matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
      throw UnsupportedProxError(
          "prox of a nonsymmetric linear operator is not a proximal map");
    }
    OperatorHandle j = make_resolvent(f, mu);
    j.label = "prox(quadratic)";
    return j;
  }
  throw UnsupportedProxError("no closed-form prox for this spec");
}

OperatorHandle make_resolvent(const MonotoneSpec& a, double gamma) {
  if (!(gamma > 0.0)) throw SpecError("resolvent parameter must be positive");
  if (std::holds_alternative<ZeroMonotone>(a.payload)) {
    OperatorHandle id = make_identity(a.dim);
    id.regularity = Regularity::averaged(0.5);
    id.label = "resolvent(zero)";
    return id;
  }
  if (const auto* lin = std::get_if<LinearMonotone>(&a.payload)) {
    const Matrix system =
        Matrix::Identity(a.dim, a.dim) + gamma * lin->matrix;
    auto lu = std::make_shared<Eigen::FullPivLU<Matrix>>(system);
    if (!lu->isInvertible()) {
      throw NumericalError("resolvent system (I + gamma M) is singular");
    }
    return {[lu](const Vector& x) -> Vector { return lu->solve(x); }, a.dim,
            Regularity::averaged(0.5), "resolvent(linear)"};
  }
  if (std::holds_alternative<L1Subdifferential>(a.payload)) {
    OperatorHandle p = make_prox(a, gamma);
    p.label = "resolvent(l1)";
    return p;
  }
  // Resolvent of a normal cone is the projection, for every gamma.
  OperatorHandle p = make_projection(a);
  p.label = "resolvent(normal-cone)";
  return p;
}

OperatorHandle make_averaged(const OperatorHandle& t, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw SpecError("averaging parameter must lie in (0, 1)");
  }
  OperatorHandle inner = t;
  return {[inner, alpha](const Vector& x) -> Vector {
            return (1.0 - alpha) * x + alpha * inner(x);
          },
          t.dim, Regularity::averaged(alpha), "averaged(" + t.label + ")"};
}

ForwardBackward make_forward_backward(const MonotoneSpec& a,
                                      const SmoothSpec& b, double gamma) {
  if (a.dim != b.dim) throw DimensionError("A and B dimensions differ");
  if (!(gamma > 0.0 && gamma < 2.0 * b.beta)) {
    throw SpecError("forward-backward step gamma must lie in (0, 2 beta)");
  }
  const double delta = std::min(1.0, b.beta / gamma) + 0.5;
  OperatorHandle resolvent = make_resolvent(a, gamma);
  SmoothSpec grad = b;
  OperatorHandle op{
      [resolvent, grad, gamma](const Vector& x) -> Vector {
        return resolvent(x - gamma * grad.eval(x));
      },
      a.dim, Regularity::averaged(1.0 / delta), "forward-backward"};
  return {std::move(op), delta};
}

OperatorHandle make_douglas_rachford(const MonotoneSpec& a,
                                     const MonotoneSpec& b2, double gamma) {
  if (a.dim != b2.dim) throw DimensionError("A and B dimensions differ");
  OperatorHandle ja = make_resolvent(a, gamma);
  OperatorHandle jb = make_resolvent(b2, gamma);
  return {[ja, jb](const Vector& x) -> Vector {
            const Vector rb = 2.0 * jb(x) - x;
            const Vector ra = 2.0 * ja(rb) - rb;
            return 0.5 * (x + ra);
          },
          a.dim, Regularity::averaged(0.5), "douglas-rachford"};
}

// --- certification -------------------------------------------------------------

namespace {

Vector sample_box(std::mt19937_64& rng, int dim, double radius) {
  std::uniform_real_distribution<double> uni(-radius, radius);
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x[i] = uni(rng);
  return x;
}

}  // namespace

CertReport certify_nonexpansive(const OperatorHandle& t, int trials,
                                std::uint64_t seed, double box_radius) {
  if (trials < 1) throw SpecError("certification needs at least one trial");
  std::mt19937_64 rng(seed);
  CertReport report{trials, seed, box_radius, -std::numeric_limits<double>::infinity(), true};
  for (int i = 0; i < trials; ++i) {
    const Vector x = sample_box(rng, t.dim, box_radius);
    const Vector y = sample_box(rng, t.dim, box_radius);
    const double excess = (t(x) - t(y)).norm() - (x - y).norm();
    report.worst = std::max(report.worst, excess);
    if (excess > 1e-9 * (1.0 + (x - y).norm())) report.pass = false;
  }
  return report;
}

CertReport certify_cocoercive(const OperatorHandle& b, double beta, int trials,
                              std::uint64_t seed, double box_radius) {
  if (trials < 1) throw SpecError("certification needs at least one trial");
  if (!(beta > 0.0)) throw SpecError("cocoercivity constant must be positive");
  std::mt19937_64 rng(seed);
  CertReport report{trials, seed, box_radius, std::numeric_limits<double>::infinity(), true};
  for (int i = 0; i < trials; ++i) {
    const Vector x = sample_box(rng, b.dim, box_radius);
    const Vector y = sample_box(rng, b.dim, box_radius);
    const Vector d = x - y;
    const Vector bd = b(x) - b(y);
    const double slack = d.dot(bd) - beta * bd.squaredNorm();
    report.worst = std::min(report.worst, slack);
    if (slack < -1e-9 * (1.0 + d.squaredNorm())) report.pass = false;
  }
  return report;
}

}  // namespace kmflow

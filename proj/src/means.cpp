#include "pdmean/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pdmean/error.hpp"

namespace pdmean {

namespace {

constexpr double kMinDamping = 1.0 / 64.0;
constexpr int kStallLimit = 5;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_renyi_range(double t, double z, const char* who) {
  if (!(t > 0.0 && t <= z && z < 1.0))
    throw DomainError(std::string(who) + ": parameters must satisfy 0 < t <= z < 1");
}

Matrix power_matrix(const SpdMatrix& a, double r) {
  std::vector<double> d(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) d[i] = std::pow(a.eigenvalues()[i], r);
  return a.spectrum().reconstruct_with(d).matrix();
}

template <class Term>
HermitianMatrix weighted_sum(const Ensemble& e, Term&& term) {
  HermitianMatrix acc = e.weight(0) * HermitianMatrix(term(0));
  for (std::size_t j = 1; j < e.size(); ++j) acc.add_scaled(e.weight(j), term(j));
  return acc;
}

SpdMatrix initial_point(const Ensemble& e, const SolverConfig& cfg, InitKind fallback) {
  const InitKind kind = cfg.init == InitKind::Default ? fallback : cfg.init;
  switch (kind) {
    case InitKind::ArithmeticMean: return arithmetic_mean(e);
    case InitKind::LogEuclidean: return log_euclidean(e);
    case InitKind::Identity: return SpdMatrix::identity(e.dim());
    case InitKind::Given:
      if (!cfg.initial) throw DomainError("solver init 'given' requires an initial matrix");
      if (cfg.initial->dim() != e.dim()) throw DomainError("solver initial matrix has wrong dimension");
      return *cfg.initial;
    case InitKind::Default: break;
  }
  return arithmetic_mean(e);
}

/// Damped Picard iteration X <- (1 - theta) X + theta F(X). With
/// `adaptive`, theta halves (floor 1/64) after kStallLimit consecutive
/// iterations without a new best equation residual.
template <class Map>
SolveResult picard(SpdMatrix x, Map&& map, const SolverConfig& cfg, bool adaptive) {
  double theta = cfg.damping;
  double best = kInf;
  int stall = 0;
  double step = kInf, eq = kInf;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    try {
      SpdMatrix y = map(x);
      eq = thompson_distance(x, y);
      if (theta == 1.0) {
        step = eq;
        x = std::move(y);
      } else {
        HermitianMatrix mix = (1.0 - theta) * x.hermitian();
        mix.add_scaled(theta, y.hermitian());
        SpdMatrix next(mix);
        step = thompson_distance(x, next);
        x = std::move(next);
      }
    } catch (const Error&) {
      return {std::move(x), it, kInf, kInf, false};
    }
    if (eq <= cfg.tol && step <= cfg.tol) return {std::move(x), it, step, eq, true};
    if (adaptive) {
      if (eq < best) {
        best = eq;
        stall = 0;
      } else if (++stall >= kStallLimit) {
        theta = std::max(0.5 * theta, kMinDamping);
        stall = 0;
      }
    }
  }
  return {std::move(x), cfg.max_iter, step, eq, false};
}

}  // namespace

// ---------------------------------------------------------------------------

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw DomainError("weights: at least one weight required");
  double sum = 0.0;
  for (double v : w_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("weights: entries must be positive");
    sum += v;
  }
  for (double& v : w_) v /= sum;
}

WeightVector WeightVector::uniform(std::size_t n) {
  return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Ensemble::Ensemble(std::vector<SpdMatrix> matrices, WeightVector weights)
    : matrices_(std::move(matrices)), weights_(std::move(weights)) {
  if (matrices_.empty()) throw DomainError("ensemble: at least one matrix required");
  if (weights_.size() != matrices_.size())
    throw DomainError("ensemble: " + std::to_string(weights_.size()) + " weights for " +
                      std::to_string(matrices_.size()) + " matrices");
  for (const SpdMatrix& a : matrices_)
    if (a.dim() != matrices_.front().dim()) throw DomainError("ensemble: dimension mismatch");
}

Ensemble::Ensemble(std::vector<SpdMatrix> matrices)
    : matrices_(std::move(matrices)),
      weights_(WeightVector::uniform(std::max<std::size_t>(matrices_.size(), 1))) {
  if (matrices_.empty()) throw DomainError("ensemble: at least one matrix required");
  for (const SpdMatrix& a : matrices_)
    if (a.dim() != matrices_.front().dim()) throw DomainError("ensemble: dimension mismatch");
}

Ensemble Ensemble::powered(double p) const {
  std::vector<SpdMatrix> out;
  out.reserve(size());
  for (const SpdMatrix& a : matrices_) out.push_back(powm(a, p));
  return Ensemble(std::move(out), weights_);
}

Ensemble Ensemble::scaled(double c) const {
  std::vector<SpdMatrix> out;
  out.reserve(size());
  for (const SpdMatrix& a : matrices_) out.push_back(a.scaled(c));
  return Ensemble(std::move(out), weights_);
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw DomainError("solver tol must be positive");
  if (max_iter < 1) throw DomainError("solver max_iter must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("solver damping must lie in (0, 1]");
}

// ---------------------------------------------------------------------------

SpdMatrix arithmetic_mean(const Ensemble& e) {
  return SpdMatrix(weighted_sum(e, [&](std::size_t j) -> const HermitianMatrix& {
    return e[j].hermitian();
  }));
}

SpdMatrix harmonic_mean(const Ensemble& e) { return inverse(arithmetic_mean(e.inverted())); }

SpdMatrix quasi_arithmetic(const Ensemble& e, double t) {
  if (t == 0.0) return log_euclidean(e);
  if (t == 1.0) return arithmetic_mean(e);
  const SpdMatrix sum(weighted_sum(e, [&](std::size_t j) { return powm(e[j], t).hermitian(); }));
  return powm(sum, 1.0 / t);
}

SpdMatrix log_euclidean(const Ensemble& e) {
  return expm(weighted_sum(e, [&](std::size_t j) { return logm(e[j]); }));
}

// ---------------------------------------------------------------------------

SolveResult power_mean(const Ensemble& e, double t, const SolverConfig& cfg) {
  cfg.validate();
  if (!(t >= -1.0 && t <= 1.0) || t == 0.0)
    throw DomainError("power_mean: t must lie in [-1, 0) U (0, 1]");
  if (t < 0.0) {
    SolverConfig dual = cfg;
    if (cfg.init == InitKind::Given && cfg.initial) dual.initial = inverse(*cfg.initial);
    SolveResult r = power_mean(e.inverted(), -t, dual);
    r.value = inverse(r.value);  // Thompson distances are inversion invariant
    return r;
  }
  auto map = [&](const SpdMatrix& x) {
    if (t == 1.0) return arithmetic_mean(e);
    const Matrix half = power_matrix(x, 0.5);
    const Matrix neg_half = power_matrix(x, -0.5);
    return SpdMatrix(weighted_sum(e, [&](std::size_t j) {
      const SpdMatrix inner(congruence(neg_half, e[j].hermitian()));
      return congruence(half, powm(inner, t).hermitian());
    }));
  };
  return picard(initial_point(e, cfg, InitKind::ArithmeticMean), map, cfg, false);
}

// ---------------------------------------------------------------------------

namespace {

struct KarcherPoint {
  double objective = 0.0;
  HermitianMatrix gradient;
  double grad_norm = 0.0;
};

/// Objective and gradient from one eigendecomposition per ensemble member.
KarcherPoint karcher_point(const Ensemble& e, const SpdMatrix& x) {
  const Matrix neg_half = power_matrix(x, -0.5);
  KarcherPoint k;
  for (std::size_t j = 0; j < e.size(); ++j) {
    const SpdMatrix c(congruence(neg_half, e[j].hermitian()));
    double s = 0.0;
    for (double v : c.eigenvalues()) s += std::log(v) * std::log(v);
    k.objective += e.weight(j) * s;
    if (j == 0) k.gradient = e.weight(0) * logm(c);
    else k.gradient.add_scaled(e.weight(j), logm(c));
  }
  k.grad_norm = frobenius_norm(k.gradient);
  return k;
}

}  // namespace

double karcher_residual(const Ensemble& e, const SpdMatrix& x) { return karcher_point(e, x).grad_norm; }

double karcher_objective(const Ensemble& e, const SpdMatrix& x) { return karcher_point(e, x).objective; }

SolveResult cartan_mean(const Ensemble& e, const SolverConfig& cfg) {
  cfg.validate();
  SpdMatrix x = initial_point(e, cfg, InitKind::LogEuclidean);
  double step = kInf;
  try {
    KarcherPoint cur = karcher_point(e, x);
    for (int it = 1; it <= cfg.max_iter; ++it) {
      const std::vector<double> gev = eigenvalues(cur.gradient);
      const double grad_sup = std::max(std::abs(gev.front()), std::abs(gev.back()));
      if (grad_sup == 0.0) return {std::move(x), it, 0.0, 0.0, true};
      const Matrix half = power_matrix(x, 0.5);

      // Backtrack on the objective. Once its change is below round-off the
      // gradient norm decides instead.
      const double noise = 1e-14 * (1.0 + cur.objective);
      double theta = cfg.damping;
      while (true) {
        SpdMatrix next = congruence(half, expm(theta * cur.gradient));
        KarcherPoint trial = karcher_point(e, next);
        const bool decreased = trial.objective < cur.objective - noise ||
                               (trial.objective <= cur.objective + noise && trial.grad_norm < cur.grad_norm);
        if (decreased || theta <= kMinDamping) {
          x = std::move(next);
          cur = std::move(trial);
          break;
        }
        theta = std::max(0.5 * theta, kMinDamping);
      }
      step = theta * grad_sup;  // Thompson distance of the step just taken
      if (step <= cfg.tol && cur.grad_norm <= cfg.tol * (1.0 + x.lambda_max()))
        return {std::move(x), it, step, cur.grad_norm, true};
    }
    return {std::move(x), cfg.max_iter, step, cur.grad_norm, false};
  } catch (const Error&) {
    return {std::move(x), cfg.max_iter, kInf, kInf, false};
  }
}

// ---------------------------------------------------------------------------

SpdMatrix renyi_entropy(const SpdMatrix& a, const SpdMatrix& b, double t, double z) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("renyi_entropy: t must lie in [0, 1]");
  if (!(z > 0.0)) throw DomainError("renyi_entropy: z must be positive");
  return sandwich_power(a, (1.0 - t) / (2.0 * z), b, t / z, z);
}

double bw_divergence(const SpdMatrix& a, const SpdMatrix& b, double t, double z) {
  require_renyi_range(t, z, "bw_divergence");
  return (1.0 - t) * a.trace() + t * b.trace() - renyi_entropy(a, b, t, z).trace();
}

SolveResult renyi_right_mean(const Ensemble& e, double t, double z, const SolverConfig& cfg) {
  require_renyi_range(t, z, "renyi_right_mean");
  cfg.validate();
  // Q_{1-t,z}(X, A) = (X^{t/2z} A^{(1-t)/z} X^{t/2z})^z
  std::vector<Matrix> roots;
  roots.reserve(e.size());
  for (const SpdMatrix& a : e.matrices()) roots.push_back(power_matrix(a, (1.0 - t) / (2.0 * z)));
  auto map = [&](const SpdMatrix& x) {
    return SpdMatrix(weighted_sum(e, [&](std::size_t j) {
      return detail::sandwich_power_rooted(x, t / (2.0 * z), roots[j], z).hermitian();
    }));
  };
  return picard(initial_point(e, cfg, InitKind::ArithmeticMean), map, cfg, true);
}

double renyi_right_equation_residual(const Ensemble& e, double t, double z, const SpdMatrix& x) {
  require_renyi_range(t, z, "renyi_right_equation_residual");
  const SpdMatrix lhs = powm(x, 1.0 - t / z);
  const SpdMatrix base = powm(x, -t / z);
  const SpdMatrix rhs(weighted_sum(e, [&](std::size_t j) {
    return geometric_mean(base, powm(e[j], (1.0 - t) / z), z).hermitian();
  }));
  return thompson_distance(lhs, rhs);
}

double renyi_right_objective(const Ensemble& e, double t, double z, const SpdMatrix& x) {
  double f = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j) f += e.weight(j) * bw_divergence(e[j], x, t, z);
  return f;
}

SolveResult renyi_power_mean(const Ensemble& e, double t, double z, const SolverConfig& cfg) {
  require_renyi_range(t, z, "renyi_power_mean");
  cfg.validate();
  // Q_{t,z}(A, X) = (A^{(1-t)/2z} X^{t/z} A^{(1-t)/2z})^z
  auto map = [&](const SpdMatrix& x) {
    const Matrix root = power_matrix(x, t / (2.0 * z));
    return SpdMatrix(weighted_sum(e, [&](std::size_t j) {
      return detail::sandwich_power_rooted(e[j], (1.0 - t) / (2.0 * z), root, z).hermitian();
    }));
  };
  return picard(initial_point(e, cfg, InitKind::ArithmeticMean), map, cfg, true);
}

}  // namespace pdmean

#include "homent/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "homent/optimize.hpp"

namespace homent::tomo {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sqrt((2-k)! k!) for k = 0, 1, 2.
const std::array<double, 3> kFactorialNorm = {std::sqrt(2.0), 1.0, std::sqrt(2.0)};

// Amplitudes <0| a_T^2 |e_k> for the three basis states.
Vector3c transmission_amplitudes(const AnalysisVector& a) {
  return {std::sqrt(2.0) * a.u * a.u, 2.0 * a.u * a.v, std::sqrt(2.0) * a.v * a.v};
}

double intensity_from_amplitudes(const Matrix3c& rho, const Vector3c& m) {
  return (m.transpose() * rho * m.conjugate())(0, 0).real();
}

constexpr int kParams = 9;

Matrix3c lower_triangular_from(const Eigen::VectorXd& x) {
  Matrix3c t = Matrix3c::Zero();
  t(0, 0) = x(0);
  t(1, 1) = x(1);
  t(2, 2) = x(2);
  t(1, 0) = {x(3), x(4)};
  t(2, 0) = {x(5), x(6)};
  t(2, 1) = {x(7), x(8)};
  return t;
}

Eigen::VectorXd parameters_from(const Matrix3c& t) {
  Eigen::VectorXd x(kParams);
  x << t(0, 0).real(), t(1, 1).real(), t(2, 2).real(), t(1, 0).real(), t(1, 0).imag(),
      t(2, 0).real(), t(2, 0).imag(), t(2, 1).real(), t(2, 1).imag();
  return x;
}

// T lower-triangular with T^dag T = rho, via Cholesky of the index-reversed
// matrix. rho must be positive definite.
Matrix3c ul_factor(const Matrix3c& rho) {
  Eigen::Matrix3d j = Eigen::Matrix3d::Zero();
  j(0, 2) = j(1, 1) = j(2, 0) = 1.0;
  const Matrix3c jj = j.cast<Complex>();
  const Eigen::LLT<Matrix3c> llt(jj * rho * jj);
  const Matrix3c l = llt.matrixL();
  Matrix3c t = jj * l.adjoint() * jj;
  // Make the diagonal real (it already is for a proper Cholesky factor).
  for (int k = 0; k < 3; ++k) t(k, k) = t(k, k).real();
  return t;
}

Matrix3c nearest_full_rank_state(const Matrix3c& m) {
  const Matrix3c herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(herm);
  Eigen::Vector3d ev = es.eigenvalues().cwiseMax(0.0);
  if (ev.sum() <= 0.0 || !ev.allFinite()) return Matrix3c::Identity() / 3.0;
  ev /= ev.sum();
  Matrix3c rho = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return 0.99 * rho + 0.01 * Matrix3c::Identity() / 3.0;
}

}  // namespace

const AngleSets& default_angle_sets() {
  static const AngleSets sets = {{
      {0.102, 0.440, 1.740},
      {1.803, 1.144, -0.330},
      {2.010, 1.083, -0.464},
      {0.102, -0.236, 1.402},
      {0.232, -0.427, 1.241},
      {0.439, -0.488, 1.107},
      {kPi / 4.0, kPi / 4.0, 13.0 * kPi / 16.0},
      {kPi / 4.0, kPi / 4.0, 7.0 * kPi / 8.0},
      {kPi / 4.0, kPi / 4.0, 15.0 * kPi / 16.0},
  }};
  return sets;
}

Matrix2c waveplate_unitary(Waveplate kind, double angle) {
  const double delta = kind == Waveplate::Quarter ? kPi / 2.0 : kPi;
  const Eigen::Vector2d fast(std::sin(angle), std::cos(angle));
  const Eigen::Vector2d slow(std::cos(angle), -std::sin(angle));
  const Matrix2c ff = (fast * fast.transpose()).cast<Complex>();
  const Matrix2c ss = (slow * slow.transpose()).cast<Complex>();
  return ff + std::polar(1.0, delta) * ss;
}

AnalysisVector analysis_vector(const AngleSet& s) {
  const Matrix2c u = waveplate_unitary(Waveplate::Half, s.a_hwp1) *
                     waveplate_unitary(Waveplate::Quarter, s.a_qwp2) *
                     waveplate_unitary(Waveplate::Quarter, s.a_qwp1);
  return {u(0, 0), u(0, 1)};
}

CoherenceVector::CoherenceVector(const Matrix3c& g) : g_(g) {
  const double err = (g - g.adjoint()).cwiseAbs().maxCoeff();
  if (!(err <= 1e-10)) {
    throw Error(ErrorKind::Consistency,
                "coherences violate g(w,y) = conj(g(y,w)) by " + std::to_string(err));
  }
}

Vector9d CoherenceVector::real_parameters() const {
  Vector9d x;
  x << g_(0, 0).real(), g_(1, 1).real(), g_(2, 2).real(), g_(0, 1).real(), g_(0, 2).real(),
      g_(1, 2).real(), g_(0, 1).imag(), g_(0, 2).imag(), g_(1, 2).imag();
  return x;
}

CoherenceVector CoherenceVector::from_real_parameters(const Vector9d& x) {
  Matrix3c g = Matrix3c::Zero();
  g(0, 0) = x(0);
  g(1, 1) = x(1);
  g(2, 2) = x(2);
  g(0, 1) = {x(3), x(6)};
  g(0, 2) = {x(4), x(7)};
  g(1, 2) = {x(5), x(8)};
  g(1, 0) = std::conj(g(0, 1));
  g(2, 0) = std::conj(g(0, 2));
  g(2, 1) = std::conj(g(1, 2));
  return CoherenceVector(g);
}

// Matrix index k holds H count 2-k, so rho_{2-y,2-w} (H counts) is rho(y, w).
CoherenceVector coherences_of(const Matrix3c& rho) {
  Matrix3c g;
  for (int w = 0; w < 3; ++w)
    for (int y = 0; y < 3; ++y) g(w, y) = kFactorialNorm[w] * kFactorialNorm[y] * rho(y, w);
  // Round-off may break exact pairing for non-Hermitian input; symmetrize.
  return CoherenceVector(0.5 * (g + g.adjoint()));
}

Matrix3c coherences_to_density(const CoherenceVector& g) {
  Matrix3c rho;
  for (int w = 0; w < 3; ++w)
    for (int y = 0; y < 3; ++y) rho(y, w) = g(w, y) / (kFactorialNorm[w] * kFactorialNorm[y]);
  return rho;
}

double second_order_intensity(const Matrix3c& rho, const AnalysisVector& a) {
  return intensity_from_amplitudes(rho, transmission_amplitudes(a));
}

double predicted_g2(const fock::DensityMatrix& rho, const AngleSet& s) {
  fock::require_physical(rho);
  return std::max(0.0, second_order_intensity(rho.matrix(), analysis_vector(s)));
}

double expected_counts(const fock::DensityMatrix& rho, const AngleSet& s, double trials_scale) {
  return trials_scale * predicted_g2(rho, s) / 2.0;
}

DesignMatrix design_matrix(std::span<const AngleSet, 9> sets) {
  DesignMatrix out;
  for (int i = 0; i < 9; ++i) {
    const Vector3c m = transmission_amplitudes(analysis_vector(sets[i]));
    for (int k = 0; k < 9; ++k) {
      Vector9d e = Vector9d::Zero();
      e(k) = 1.0;
      const Matrix3c basis_rho = coherences_to_density(CoherenceVector::from_real_parameters(e));
      out.m(i, k) = intensity_from_amplitudes(basis_rho, m);
    }
  }
  const Eigen::JacobiSVD<Matrix9d> svd(out.m);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(8);
  if (!(smax > 0.0) || smin < 1e-10 * smax) {
    throw Error(ErrorKind::DependentAngleSets,
                "design matrix is singular; the nine settings are not independent");
  }
  out.condition_number = smax / smin;
  return out;
}

CoherenceVector linear_invert(std::span<const double, 9> intensities,
                              std::span<const AngleSet, 9> sets) {
  const DesignMatrix dm = design_matrix(sets);
  const Vector9d rhs = Eigen::Map<const Vector9d>(intensities.data());
  const Vector9d x = dm.m.partialPivLu().solve(rhs);
  return CoherenceVector::from_real_parameters(x);
}

MleReport mle_reconstruct(std::span<const CountsRecord> counts, std::span<const AngleSet, 9> sets,
                          const MleOptions& options) {
  if (counts.size() != 9) {
    throw Error(ErrorKind::Range, "expected 9 count records, got " + std::to_string(counts.size()));
  }
  std::array<double, 9> n{};
  std::array<double, 9> trials{};
  std::array<bool, 9> seen{};
  bool any_nonzero = false;
  for (const auto& rec : counts) {
    if (rec.angle_set_id < 1 || rec.angle_set_id > 9) {
      throw Error(ErrorKind::Range, "angle_set_id must be in 1..9");
    }
    const auto idx = static_cast<std::size_t>(rec.angle_set_id - 1);
    if (seen[idx]) throw Error(ErrorKind::Range, "duplicate angle_set_id");
    if (rec.coincidences < 0) throw Error(ErrorKind::Range, "negative coincidence count");
    if (!(rec.trials_scale > 0.0)) throw Error(ErrorKind::Range, "trials_scale must be positive");
    seen[idx] = true;
    n[idx] = static_cast<double>(rec.coincidences);
    trials[idx] = rec.trials_scale;
    any_nonzero = any_nonzero || rec.coincidences > 0;
  }
  if (!any_nonzero) throw Error(ErrorKind::Range, "all coincidence counts are zero");

  std::array<Vector3c, 9> amps;
  std::array<double, 9> weight{};
  for (std::size_t i = 0; i < 9; ++i) {
    amps[i] = transmission_amplitudes(analysis_vector(sets[i]));
    weight[i] = 1.0 / (2.0 * std::max(n[i], 1.0));
  }

  struct Eval {
    double objective;
    double scale;
  };
  auto evaluate = [&](const Matrix3c& rho) {
    std::array<double, 9> b{};
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
      b[i] = trials[i] * intensity_from_amplitudes(rho, amps[i]) / 2.0;
      num += weight[i] * b[i] * n[i];
      den += weight[i] * b[i] * b[i];
    }
    const double a = den > 0.0 ? std::max(0.0, num / den) : 0.0;
    double obj = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
      const double r = a * b[i] - n[i];
      obj += weight[i] * r * r;
    }
    return Eval{obj, a};
  };
  auto state_of = [](const Eigen::VectorXd& x) {
    const Matrix3c t = lower_triangular_from(x);
    Matrix3c rho = t.adjoint() * t;
    return Matrix3c(rho / rho.trace().real());
  };
  auto objective = [&](const Eigen::VectorXd& x) {
    const Matrix3c t = lower_triangular_from(x);
    const double tr = (t.adjoint() * t).trace().real();
    if (!(tr > 1e-300)) return std::numeric_limits<double>::infinity();
    // The penalty pins the otherwise free overall scale of T; rho ignores it.
    return evaluate(state_of(x)).objective + 1e-3 * (tr - 1.0) * (tr - 1.0);
  };

  // Restart 0 starts from the (projected) linear-inversion estimate.
  std::array<double, 9> intensities{};
  for (std::size_t i = 0; i < 9; ++i) intensities[i] = 2.0 * n[i] / trials[i];
  const Matrix3c rho_lin = coherences_to_density(linear_invert(intensities, sets));
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(parameters_from(ul_factor(nearest_full_rank_state(rho_lin))));
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < options.random_restarts; ++k) {
    Eigen::VectorXd x(kParams);
    for (int p = 0; p < kParams; ++p) x(p) = gauss(rng);
    starts.push_back(x);
  }

  optimize::BfgsOptions bopts;
  bopts.max_iterations = options.max_iterations;
  bopts.stall_tolerance = options.stall_tolerance;
  bopts.stall_window = options.stall_window;

  MleReport best;
  bool have_best = false;
  bool best_converged = false;
  int converged = 0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const auto res = optimize::minimize_bfgs(objective, starts[k], bopts);
    if (res.converged) ++converged;
    const Matrix3c rho = state_of(res.x);
    const Eval e = evaluate(rho);
    // Prefer converged runs; among those the lowest objective wins.
    const bool better = !have_best || (res.converged && !best_converged) ||
                        (res.converged == best_converged && e.objective < best.objective);
    if (better) {
      best.rho = fock::DensityMatrix(0.5 * (rho + rho.adjoint()));
      best.objective = e.objective;
      best.iterations = res.iterations;
      best.restart_index = static_cast<int>(k);
      best.scale = e.scale;
      best_converged = res.converged;
      have_best = true;
    }
  }
  best.converged_starts = converged;
  if (converged == 0) {
    throw NoConvergenceError("no restart met the convergence criterion", best);
  }
  return best;
}

}  // namespace homent::tomo

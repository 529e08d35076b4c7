#include "homent/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "homent/error.hpp"

namespace homent::entangle {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPhysTol = 1e-9;
// Eigenvalues of a unit-trace matrix below this are round-off; taking their
// square root would inject ~1e-8 noise into otherwise exact results.
constexpr double kEigenFloor = 1e-14;

void require_physical(const Eigen::MatrixXcd& m, const char* what) {
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double tr = std::abs(m.trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  const double min_ev = es.eigenvalues().minCoeff();
  if (herm > kPhysTol || tr > kPhysTol || min_ev < -kPhysTol || !m.allFinite()) {
    throw Error(ErrorKind::Physicality,
                std::string(what) + " is not a physical state (hermiticity error " +
                    std::to_string(herm) + ", trace error " + std::to_string(tr) +
                    ", min eigenvalue " + std::to_string(min_ev) + ")");
  }
}

// A with m = A A^dag, columns = eigenvectors scaled by sqrt(eigenvalue).
Eigen::MatrixXcd square_root_factor(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > kEigenFloor ? std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal();
}

}  // namespace

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != rho.cols() || sigma.rows() != sigma.cols() || rho.rows() != sigma.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "fidelity needs two square matrices of equal size");
  }
  require_physical(rho, "rho");
  require_physical(sigma, "sigma");
  // Tr sqrt(sqrt(rho) sigma sqrt(rho)) equals the trace norm of
  // sqrt(rho) sqrt(sigma), which shares its singular values with A^dag B.
  const Eigen::MatrixXcd a = square_root_factor(rho);
  const Eigen::MatrixXcd b = square_root_factor(sigma);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.adjoint() * b);
  const double tr = svd.singularValues().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double fidelity(const fock::DensityMatrix& rho, const fock::DensityMatrix& sigma) {
  return fidelity(Eigen::MatrixXcd(rho.matrix()), Eigen::MatrixXcd(sigma.matrix()));
}

Filtered embed_and_filter(const fock::DensityMatrix& rho) {
  fock::require_physical(rho);
  const Matrix3c& m = rho.matrix();
  const double p = m(fock::kIdx20, fock::kIdx20).real() + m(fock::kIdx02, fock::kIdx02).real();
  if (p < 1e-12) {
    throw Error(ErrorKind::EmptySubspace, "no population in |2,0> or |0,2>; filtered state undefined");
  }
  Matrix4c t = Matrix4c::Zero();
  t(kQubit20, kQubit20) = m(fock::kIdx20, fock::kIdx20);
  t(kQubit02, kQubit02) = m(fock::kIdx02, fock::kIdx02);
  t(kQubit20, kQubit02) = m(fock::kIdx20, fock::kIdx02);
  t(kQubit02, kQubit20) = m(fock::kIdx02, fock::kIdx20);
  return {QubitDensity(t / p), p};
}

double concurrence(const QubitDensity& rho_t) {
  const Eigen::MatrixXcd rho = rho_t.matrix();
  require_physical(rho, "rho_t");
  // sigma_y (x) sigma_y in the computational basis.
  Matrix4c yy = Matrix4c::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  // With rho = A A^dag, the eigenvalues of rho rho~ are the squared singular
  // values of A^T (Y x Y) A. Working with the factor avoids square roots of
  // round-off eigenvalues.
  const Eigen::MatrixXcd a = square_root_factor(rho);
  const Eigen::MatrixXcd tau = a.transpose() * yy * a;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tau);
  Eigen::VectorXd lambda = svd.singularValues();  // decreasing
  double c = lambda(0);
  for (Eigen::Index i = 1; i < lambda.size(); ++i) c -= lambda(i);
  return std::clamp(c, 0.0, 1.0);
}

FilteredConcurrence filtered_concurrence(const fock::DensityMatrix& rho) {
  const Filtered f = embed_and_filter(rho);
  FilteredConcurrence out;
  out.p = f.p;
  out.c = concurrence(f.rho_t);
  out.c_nf = std::clamp(out.p * out.c, 0.0, 1.0);
  return out;
}

PhaseEstimate estimate_noon_phase(const fock::DensityMatrix& rho, double resolution) {
  fock::require_physical(rho);
  if (!(resolution > 0.0)) throw Error(ErrorKind::Range, "resolution must be positive");
  const Matrix3c& m = rho.matrix();
  const double base = 0.5 * (m(0, 0).real() + m(2, 2).real());
  const Complex corner = m(fock::kIdx20, fock::kIdx02);
  // <psi|rho|psi> for psi = (|2,0> + e^{i phi}|0,2>)/sqrt2.
  auto overlap = [&](double phi) { return base + (std::polar(1.0, phi) * corner).real(); };
  const auto steps = static_cast<long>(std::ceil(2.0 * kPi / resolution));
  PhaseEstimate best{kPi, overlap(kPi)};
  for (long k = 1; k < steps; ++k) {
    const double phi = kPi - static_cast<double>(k) * resolution;
    if (phi <= -kPi) break;
    const double f = overlap(phi);
    if (f > best.fidelity) best = {phi, f};
  }
  best.fidelity = std::clamp(best.fidelity, 0.0, 1.0);
  return best;
}

}  // namespace homent::entangle

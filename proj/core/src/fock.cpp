#include "homent/fock.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "homent/error.hpp"

namespace homent {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroState: return "zero-state";
    case ErrorKind::BadWeights: return "bad-weights";
    case ErrorKind::Range: return "range";
    case ErrorKind::Division: return "division";
    case ErrorKind::Unidentifiable: return "unidentifiable";
    case ErrorKind::DependentAngleSets: return "dependent-angle-sets";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::EmptySubspace: return "empty-subspace";
    case ErrorKind::Physicality: return "physicality";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

namespace fock {

DensityMatrix DensityMatrix::basis_projector(std::size_t index) {
  if (index > 2) throw Error(ErrorKind::Range, "basis index must be 0, 1 or 2");
  Matrix3c m = Matrix3c::Zero();
  m(index, index) = 1.0;
  return DensityMatrix(m);
}

std::string PhysicalityReport::describe() const {
  std::ostringstream os;
  os << (physical ? "physical" : "unphysical") << " (hermiticity error " << hermiticity_error
     << (hermitian_ok ? "" : " FAIL") << ", trace error " << trace_error
     << (trace_ok ? "" : " FAIL") << ", min eigenvalue " << min_eigenvalue
     << (positive_ok ? "" : " FAIL") << ")";
  return os.str();
}

TwoModeState state_from_amplitudes(Complex a20, Complex a11, Complex a02) {
  Vector3c v(a20, a11, a02);
  const double norm = v.norm();
  if (norm == 0.0 || !std::isfinite(norm)) {
    throw Error(ErrorKind::ZeroState, "all amplitudes are zero");
  }
  return TwoModeState(v / norm);
}

DensityMatrix density_from_pure(const TwoModeState& psi) {
  const Vector3c& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

DensityMatrix mix(std::span<const DensityMatrix> states, std::span<const double> weights) {
  if (states.size() != weights.size() || states.empty()) {
    throw Error(ErrorKind::BadWeights, "need one weight per state and at least one state");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorKind::BadWeights, "negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::BadWeights, "weights sum to " + std::to_string(total));
  }
  Matrix3c acc = Matrix3c::Zero();
  for (std::size_t k = 0; k < states.size(); ++k) acc += weights[k] * states[k].matrix();
  return DensityMatrix(acc);
}

DensityMatrix dephase_corner(const DensityMatrix& rho, double d) {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw Error(ErrorKind::Range, "dephasing factor must lie in [0, 1]");
  }
  Matrix3c m = rho.matrix();
  m(kIdx20, kIdx02) *= d;
  m(kIdx02, kIdx20) *= d;
  // Shrinking only the corner is not a positive map once |1,1> carries
  // coherence with both corners, so the result is checked rather than assumed.
  const auto report = is_physical(m);
  if (!report.physical) {
    throw Error(ErrorKind::Physicality,
                "corner dephasing leaves an unphysical state: " + report.describe());
  }
  return DensityMatrix(m);
}

PhysicalityReport is_physical(const Matrix3c& rho, double tol) {
  PhysicalityReport r;
  r.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  r.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  // Eigenvalues of the Hermitian part; the anti-Hermitian part is already
  // accounted for by hermiticity_error.
  const Matrix3c herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(herm, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.hermitian_ok = r.hermiticity_error <= tol;
  r.trace_ok = r.trace_error <= tol;
  r.positive_ok = r.min_eigenvalue >= -tol;
  r.physical = r.hermitian_ok && r.trace_ok && r.positive_ok && rho.allFinite();
  return r;
}

void require_physical(const DensityMatrix& rho, double tol) {
  const auto report = is_physical(rho, tol);
  if (!report.physical) throw Error(ErrorKind::Physicality, report.describe());
}

TwoModeState noon_state(double phase) {
  return state_from_amplitudes(1.0, 0.0, std::polar(1.0, phase));
}

}  // namespace fock
}  // namespace homent

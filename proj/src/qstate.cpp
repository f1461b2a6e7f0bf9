#include "qew/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qew/error.hpp"
#include "qew/rng.hpp"

namespace qew {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::NonHermitian: return "non-hermitian";
    case ErrorKind::MissingEntry: return "missing-entry";
    case ErrorKind::InvalidSchedule: return "invalid-schedule";
    case ErrorKind::OverBudget: return "over-budget";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

const char* to_string(WitnessKind kind) noexcept {
  return kind == WitnessKind::Werner ? "werner" : "isotropic";
}

namespace {

void require_dimension(int d, int min_d = 2) {
  if (d < min_d) {
    throw Error(ErrorKind::InvalidDimension,
                "invalid dimension d=" + std::to_string(d) + " (need d >= " +
                    std::to_string(min_d) + ")");
  }
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

std::string density_matrix_violation(int d, const ComplexMatrix& m) {
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  if (d < 2) return "dimension: d=" + std::to_string(d) + " is below 2";
  if (m.rows() != n || m.cols() != n) {
    return "shape: expected " + std::to_string(n) + "x" + std::to_string(n) + ", got " +
           std::to_string(m.rows()) + "x" + std::to_string(m.cols());
  }
  if (!m.allFinite()) return "finite: matrix contains NaN or Inf entries";

  const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kStructuralTol) {
    return "hermitian: max |rho - rho^dagger| = " + fmt_double(herm_dev);
  }
  const Complex tr = m.trace();
  const double trace_dev = std::abs(tr - Complex(1.0, 0.0));
  if (trace_dev > kStructuralTol) {
    return "trace: |Tr rho - 1| = " + fmt_double(trace_dev);
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kStructuralTol) {
    return "positive: min eigenvalue = " + fmt_double(min_eig);
  }
  return {};
}

DensityMatrix::DensityMatrix(int d, ComplexMatrix matrix) : d_(d), matrix_(std::move(matrix)) {
  if (d < 2) require_dimension(d);
  if (auto why = density_matrix_violation(d, matrix_); !why.empty()) {
    throw Error(ErrorKind::InvalidState, "not a density matrix: " + why);
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
}

ComplexMatrix swap_operator(int d) {
  require_dimension(d);
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix f = ComplexMatrix::Zero(n, n);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) f(a * d + b, b * d + a) = 1.0;
  }
  return f;
}

ComplexMatrix gproj_operator(int d) {
  require_dimension(d);
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) g(a * d + a, b * d + b) = 1.0;
  }
  return g;
}

ComplexMatrix witness_operator(WitnessKind kind, int d) {
  return kind == WitnessKind::Werner ? swap_operator(d) : gproj_operator(d);
}

ComplexMatrix partial_transpose_b(const ComplexMatrix& op, int d) {
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  if (op.rows() != n || op.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "partial transpose: operator is not d^2 x d^2");
  }
  ComplexMatrix out(n, n);
  // <a b| T_B(op) |c e> = <a e| op |c b>
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) out(a * d + b, c * d + e) = op(a * d + e, c * d + b);
  return out;
}

DensityMatrix werner_state(int d, double f) {
  require_dimension(d);
  if (!(f >= -1.0 && f <= 1.0)) {
    throw Error(ErrorKind::OutOfRange,
                "werner parameter f=" + std::to_string(f) + " outside [-1, 1]");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  const double norm = d * (static_cast<double>(d) * d - 1.0);
  ComplexMatrix m = ((d - f) / norm) * ComplexMatrix::Identity(n, n) +
                    ((f * d - 1.0) / norm) * swap_operator(d);
  return {d, std::move(m)};
}

DensityMatrix isotropic_state(int d, double g) {
  require_dimension(d);
  if (!(g >= 0.0 && g <= d)) {
    throw Error(ErrorKind::OutOfRange, "isotropic parameter g=" + std::to_string(g) +
                                           " outside [0, " + std::to_string(d) + "]");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  const double norm = d * (static_cast<double>(d) * d - 1.0);
  ComplexMatrix m = ((d - g) / norm) * ComplexMatrix::Identity(n, n) +
                    ((g * d - 1.0) / norm) * gproj_operator(d);
  return {d, std::move(m)};
}

DensityMatrix maximally_mixed_state(int d) {
  require_dimension(d);
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  return {d, ComplexMatrix::Identity(n, n) / static_cast<double>(n)};
}

double expectation(const ComplexMatrix& op, const DensityMatrix& rho) {
  const ComplexMatrix& r = rho.matrix();
  if (op.rows() != r.rows() || op.cols() != r.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "expectation: operator is " + std::to_string(op.rows()) + "x" +
                    std::to_string(op.cols()) + ", state is " + std::to_string(r.rows()) + "x" +
                    std::to_string(r.cols()));
  }
  const double herm_dev = (op - op.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kStructuralTol) {
    throw Error(ErrorKind::NonHermitian,
                "expectation: operator is not Hermitian (deviation " + fmt_double(herm_dev) + ")");
  }
  // Tr[A B] = sum_ij A_ij B_ji
  const Complex value = op.cwiseProduct(r.transpose()).sum();
  if (std::abs(value.imag()) >= kStructuralTol) {
    throw Error(ErrorKind::NonHermitian,
                "expectation: imaginary residue " + fmt_double(value.imag()));
  }
  return value.real();
}

DensityMatrix twirl_uu(const DensityMatrix& rho) {
  const double f = std::clamp(expectation(swap_operator(rho.dim()), rho), -1.0, 1.0);
  return werner_state(rho.dim(), f);
}

DensityMatrix twirl_uustar(const DensityMatrix& rho) {
  const int d = rho.dim();
  const double g = std::clamp(expectation(gproj_operator(d), rho), 0.0, static_cast<double>(d));
  return isotropic_state(d, g);
}

ComplexMatrix haar_unitary(int d, std::uint64_t seed) {
  require_dimension(d, 1);
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) z(i, j) = Complex(normal(rng), normal(rng));

  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= mag > 0.0 ? rjj / mag : Complex(1.0, 0.0);
  }
  return q;
}

DensityMatrix twirl_monte_carlo(const DensityMatrix& rho, int samples, std::uint64_t seed,
                                bool conjugate) {
  if (samples < 1) {
    throw Error(ErrorKind::OutOfRange, "twirl_monte_carlo: samples must be >= 1");
  }
  const int d = rho.dim();
  ComplexMatrix acc = ComplexMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (int k = 0; k < samples; ++k) {
    const ComplexMatrix u = haar_unitary(d, derive_seed(seed, static_cast<std::uint64_t>(k)));
    const ComplexMatrix w = kron(u, conjugate ? ComplexMatrix(u.conjugate()) : u);
    acc.noalias() += w * rho.matrix() * w.adjoint();
  }
  acc /= static_cast<double>(samples);
  return {d, std::move(acc)};
}

DensityMatrix random_density_matrix(int d, int rank, std::uint64_t seed) {
  require_dimension(d);
  const int n = d * d;
  if (rank < 1 || rank > n) {
    throw Error(ErrorKind::OutOfRange, "random_density_matrix: rank " + std::to_string(rank) +
                                           " outside [1, " + std::to_string(n) + "]");
  }
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, rank);
  for (Eigen::Index j = 0; j < rank; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return {d, std::move(m)};
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace qew

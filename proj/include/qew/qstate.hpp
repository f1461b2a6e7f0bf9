#pragma once

// Bipartite qudit states on C^d (x) C^d, the swap operator F, the
// unnormalized maximally-entangled projector G, the Werner / isotropic
// families and the two twirling channels.
//
// Basis convention: tensor index (a, b) maps to row a*d + b, 0-based.

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace qew {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kStructuralTol = 1e-9;

enum class WitnessKind { Werner, Isotropic };

const char* to_string(WitnessKind kind) noexcept;

/// A validated d^2 x d^2 density matrix.
///
/// Construction checks Hermiticity (max entrywise deviation), unit trace and
/// the eigenvalue floor, each against `kStructuralTol`. The stored matrix is
/// the explicitly symmetrized input.
class DensityMatrix {
 public:
  DensityMatrix(int d, ComplexMatrix matrix);

  int dim() const noexcept { return d_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  /// Rebuilds a state from a matrix already known to be valid up to rounding
  /// (e.g. a convex combination of conjugated states). Still validated.
  static DensityMatrix from_matrix(int d, const ComplexMatrix& m) { return {d, m}; }

 private:
  int d_;
  ComplexMatrix matrix_;
};

/// Entry-wise description of the first violated invariant, or empty if `m`
/// is a valid d^2 x d^2 density matrix.
std::string density_matrix_violation(int d, const ComplexMatrix& m);

ComplexMatrix swap_operator(int d);
ComplexMatrix gproj_operator(int d);
ComplexMatrix witness_operator(WitnessKind kind, int d);

/// Partial transpose on subsystem B of a d^2 x d^2 operator.
ComplexMatrix partial_transpose_b(const ComplexMatrix& op, int d);

DensityMatrix werner_state(int d, double f);
DensityMatrix isotropic_state(int d, double g);
DensityMatrix maximally_mixed_state(int d);

/// Tr[op * rho]; the operator must be Hermitian within kStructuralTol.
double expectation(const ComplexMatrix& op, const DensityMatrix& rho);

/// Closed-form U(x)U twirl: projection onto werner_state(d, Tr[F rho]).
DensityMatrix twirl_uu(const DensityMatrix& rho);
/// Closed-form U(x)U* twirl: projection onto isotropic_state(d, Tr[G rho]).
DensityMatrix twirl_uustar(const DensityMatrix& rho);

/// Haar-random d x d unitary (Ginibre matrix, QR, phases of diag(R) removed).
ComplexMatrix haar_unitary(int d, std::uint64_t seed);

/// Sample average of (U(x)U) rho (U(x)U)^dagger, or with U* on B when
/// `conjugate` is set. Statistical oracle for the closed-form twirls.
DensityMatrix twirl_monte_carlo(const DensityMatrix& rho, int samples, std::uint64_t seed,
                                bool conjugate);

/// Random state of the given rank: G G^dagger / Tr for a d^2 x rank Ginibre G.
DensityMatrix random_density_matrix(int d, int rank, std::uint64_t seed);

/// Kronecker product of two dense complex matrices.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qew

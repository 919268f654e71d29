#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "fermirpa/patches.hpp"
#include "fermirpa/quadrature.hpp"

namespace fermirpa {

//=============================================================================
// Bosonic Bogoliubov kernel for one interaction momentum k.
//
// With m = |I_k^+| effective patches, the one-boson data per patch alpha are
// the pair energy lambda_alpha = |k_hat . omega_hat_alpha| and the pair count
// n_alpha^2, and the coupling is g = V_hat(k) / (2 hbar kappa N |k|).  On the
// doubled index set I_k = I_k^+ u I_k^- (plus-half then minus-half, each
// ascending) the quadratic Hamiltonian has
//     D  = diag(lambda),  W~ab = g n_a n_b  (same half),
//     Wt_ab = g n_a n_b  (opposite halves),
// and the Bogoliubov diagonalisation is generated by
//     E  = ((D+W-Wt)^(1/2) (D+W+Wt) (D+W-Wt)^(1/2))^(1/2)
//     S1 = (D+W-Wt)^(1/2) E^(-1/2)
//     K  = log |S1^T|,     |A| = (A A^T)^(1/2).
// The occupation weight of one patch is the diagonal of cosh(2K) - 1,
// evaluated as 2 sinh(K)^2 from the eigendecomposition of K.
//
// All matrix functions go through symmetric eigendecompositions with an
// eigenvalue floor of 1e-13 * trace; falling below the floor is an error.
//=============================================================================

struct KernelBundle {
    Momentum3 k;
    double g = 0.0;                 // V_hat(k) / (2 hbar kappa N |k|)
    double vhat = 0.0;
    std::vector<int> plus_list;     // effective I_k^+ (ascending, count > 0)
    std::vector<int> minus_list;    // their antipodes, in mirror order
    std::vector<int> pruned;        // members of I_k dropped for zero count
    std::vector<double> lambda;     // per plus-half entry (mirror = identical)
    std::vector<double> nvec;       // sqrt(pair count), per plus-half entry
    std::vector<std::int64_t> counts; // pair counts, per plus-half entry

    Eigen::MatrixXd E, S1, K, cosh2Km1; // size 2m x 2m

    int m() const { return static_cast<int>(plus_list.size()); }
    int dim() const { return 2 * m(); }

    // Row of patch alpha inside the doubled index set, if present.
    std::optional<int> index_of(int alpha) const;
    // Plus-half slot carrying alpha's data (alpha itself or its antipode).
    std::optional<int> plus_slot_of(int alpha) const;

    // Q_k(mu) = 2 g sum_alpha n_alpha^2 lambda_alpha / (mu^2 + lambda_alpha^2),
    // summed over the effective plus half.
    double Q(double mu) const;
};

// Builds the kernel for k.  Throws when V_hat(k) <= 0, when every aligned
// patch was pruned, or when D + W - Wt fails positive definiteness.
KernelBundle build_kernel(Momentum3 k, const PatchSet& ps, const ModelParams& mp,
                          const FermiGeometry& geom);

// --- Matrix-function utilities ----------------------------------------------

// (A A^T)^(1/2) via eigendecomposition of the symmetrised product.
// Throws when A A^T is numerically singular (condition number > 1e14).
Eigen::MatrixXd matrix_abs(const Eigen::MatrixXd& A);

// A^s for symmetric positive definite A.  Eigenvalues at or below
// 1e-13 * trace(A) raise an error naming the offending eigenvalue.
Eigen::MatrixXd spd_power(const Eigen::MatrixXd& A, double s);

// Matrix logarithm of a symmetric positive definite A (same floor).
Eigen::MatrixXd spd_log(const Eigen::MatrixXd& A);

// Rank-one update inverse (A + v w^T)^(-1) from A^(-1):
//   A^(-1) - (A^(-1) v)(w^T A^(-1)) / (1 + w^T A^(-1) v).
// Throws when the denominator is below tolerance.
Eigen::MatrixXd sherman_morrison_inverse(const Eigen::MatrixXd& Ainv,
                                         const Eigen::VectorXd& v,
                                         const Eigen::VectorXd& w);

// Quadrature verification of the operator integral identities
//   A^(1/2)  = (2/pi) Int_0^inf ( I - mu^2 (A + mu^2)^(-1) ) dmu
//   A^(-1/2) = (2/pi) Int_0^inf (A + mu^2)^(-1) dmu
// entry by entry.  Returns the maximal absolute deviations.
struct IdentityCheck {
    double dev_sqrt = 0.0;
    double dev_inv_sqrt = 0.0;
    bool converged = false;
};
IdentityCheck verify_integral_identities(const Eigen::MatrixXd& A,
                                         const QuadratureSpec& spec = {});

// --- Diagonal-weight identities ----------------------------------------------

// The four equivalent expressions for the diagonal weight of patch slot i
// (an index into the plus half), built from d = diag(lambda) and the rank-one
// b = g n n^T on the plus half:
//   A = <i| d^(1/2)  (d^(1/2)(d+2b)d^(1/2))^(-1/2) d^(1/2)  |i>
//   B = <i| (d+2b)^(1/2) ((d+2b)^(1/2) d (d+2b)^(1/2))^(-1/2) (d+2b)^(1/2) |i>
//   C = <i| d^(-1/2) (d^(1/2)(d+2b)d^(1/2))^(1/2)  d^(-1/2) |i>
//   D = <i| (d+2b)^(-1/2) ((d+2b)^(1/2) d (d+2b)^(1/2))^(1/2) (d+2b)^(-1/2) |i>
// Functional calculus gives A == D and B == C, and
//   (cosh 2K - 1)_{ii} = (A + B + C + D - 4) / 4.
struct AbcdValues {
    double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
    double combination = 0.0; // (A + B + C + D - 4) / 4
};
AbcdValues abcd_identities(const std::vector<double>& lambda,
                           const std::vector<double>& nvec, double g, int slot);

// Conjugating by U = (1/sqrt2) [[I, I], [I, -I]] block-diagonalises |S1^T|^2
// into the A- and B-blocks above.  Returns the maximal deviation between
// U^T |S1^T|^2 U and diag(blockA, blockB) — a structural check of the bundle.
double verify_block_reduction(const KernelBundle& kb);

} // namespace fermirpa

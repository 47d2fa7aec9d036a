#ifndef CULIFT_MATRIX_HPP
#define CULIFT_MATRIX_HPP

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "culift/region.hpp"

namespace culift {

using CMatrix = Eigen::MatrixXcd;

/// Largest singular value.
double operator_norm(const CMatrix& m);
/// ||u* u - 1||.
double unitarity_defect(const CMatrix& u);

/**
 * A normal matrix together with a unitary diagonalisation.
 *
 * Construction verifies normality (||x x* - x* x|| <= 1e-10 max(1, ||x||^2))
 * and computes the spectral data eagerly through a complex Schur
 * decomposition, whose triangular factor is diagonal for normal input.
 */
class NormalMatrix {
 public:
  explicit NormalMatrix(CMatrix entries);

  static NormalMatrix diagonal(std::span<const Complex> eigenvalues);
  /// basis * diag(eigenvalues) * basis^*; basis must be unitary.
  static NormalMatrix from_spectrum(std::vector<Complex> eigenvalues, CMatrix basis);

  const CMatrix& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const std::vector<Complex>& eigenvalues() const { return eigenvalues_; }
  const CMatrix& eigenbasis() const { return basis_; }
  double normality_defect() const { return defect_; }
  /// Operator norm; equals the spectral radius for normal matrices.
  double norm() const { return norm_; }

  static constexpr double kNormalityTol = 1e-10;
  static constexpr double kBasisTol = 1e-9;

 private:
  NormalMatrix(CMatrix entries, std::vector<Complex> eigenvalues, CMatrix basis);
  void validate() const;

  CMatrix entries_;
  std::vector<Complex> eigenvalues_;
  CMatrix basis_;
  double defect_ = 0.0;
  double norm_ = 0.0;
};

/// A continuous function on the plane, evaluated pointwise at eigenvalues.
/// `lipschitz` is the constant used for error reporting.
struct ContinuousFunction {
  std::string name;
  std::function<Complex(Complex)> eval;
  double lipschitz = 1.0;
};

/// f(x) = u diag(f(lambda_i)) u^*. Throws std::domain_error if f is not
/// finite at some eigenvalue.
NormalMatrix functional_calculus(const NormalMatrix& x, const ContinuousFunction& f);

/// u x u^*. Throws if ||u* u - 1|| > 1e-10.
NormalMatrix conjugate(const NormalMatrix& x, const CMatrix& u);

/// Least 1-based N such that max_f ||f(xs[m]) - f(x)|| < eps for every tested
/// m >= N. Throws std::runtime_error when even the last element fails.
std::size_t convergence_check(std::span<const NormalMatrix> xs, const NormalMatrix& x,
                              std::span<const ContinuousFunction> functions, double eps);

/// Hausdorff distance between two finite point sets.
double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace culift

#endif  // CULIFT_MATRIX_HPP

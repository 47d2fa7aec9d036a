#include "culift/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace culift {

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double unitarity_defect(const CMatrix& u) {
  const auto n = u.rows();
  return operator_norm(u.adjoint() * u - CMatrix::Identity(n, n));
}

NormalMatrix::NormalMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw std::invalid_argument("normal matrix: need a nonempty square matrix");
  if (!entries_.allFinite()) throw std::invalid_argument("normal matrix: non-finite entries");
  const double scale = operator_norm(entries_);
  defect_ = operator_norm(entries_ * entries_.adjoint() - entries_.adjoint() * entries_);
  if (defect_ > kNormalityTol * std::max(1.0, scale * scale))
    throw std::domain_error("normal matrix: normality defect " + std::to_string(defect_) + " above tolerance");

  Eigen::ComplexSchur<CMatrix> schur(entries_);
  if (schur.info() != Eigen::Success) throw std::runtime_error("normal matrix: Schur decomposition failed");
  basis_ = schur.matrixU();
  const CMatrix& t = schur.matrixT();
  eigenvalues_.resize(static_cast<std::size_t>(t.rows()));
  for (Eigen::Index i = 0; i < t.rows(); ++i) eigenvalues_[static_cast<std::size_t>(i)] = t(i, i);
  norm_ = 0.0;
  for (const auto& l : eigenvalues_) norm_ = std::max(norm_, std::abs(l));
  validate();
}

NormalMatrix::NormalMatrix(CMatrix entries, std::vector<Complex> eigenvalues, CMatrix basis)
    : entries_(std::move(entries)), eigenvalues_(std::move(eigenvalues)), basis_(std::move(basis)) {
  defect_ = operator_norm(entries_ * entries_.adjoint() - entries_.adjoint() * entries_);
  norm_ = 0.0;
  for (const auto& l : eigenvalues_) norm_ = std::max(norm_, std::abs(l));
  if (defect_ > kNormalityTol * std::max(1.0, norm_ * norm_))
    throw std::domain_error("normal matrix: normality defect above tolerance");
  validate();
}

void NormalMatrix::validate() const {
  const auto n = static_cast<Eigen::Index>(eigenvalues_.size());
  Eigen::VectorXcd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = eigenvalues_[static_cast<std::size_t>(i)];
  const CMatrix rebuilt = basis_ * d.asDiagonal() * basis_.adjoint();
  const double err = operator_norm(rebuilt - entries_);
  if (err > kBasisTol * std::max(1.0, norm_))
    throw std::runtime_error("normal matrix: eigenbasis reconstruction error " + std::to_string(err));
}

NormalMatrix NormalMatrix::diagonal(std::span<const Complex> eigenvalues) {
  const auto n = static_cast<Eigen::Index>(eigenvalues.size());
  if (n == 0) throw std::invalid_argument("normal matrix: empty spectrum");
  return from_spectrum({eigenvalues.begin(), eigenvalues.end()}, CMatrix::Identity(n, n));
}

NormalMatrix NormalMatrix::from_spectrum(std::vector<Complex> eigenvalues, CMatrix basis) {
  const auto n = static_cast<Eigen::Index>(eigenvalues.size());
  if (n == 0 || basis.rows() != n || basis.cols() != n)
    throw std::invalid_argument("normal matrix: spectrum/basis size mismatch");
  for (const auto& l : eigenvalues)
    if (!std::isfinite(l.real()) || !std::isfinite(l.imag()))
      throw std::invalid_argument("normal matrix: non-finite eigenvalue");
  if (unitarity_defect(basis) > 1e-10) throw std::invalid_argument("normal matrix: basis is not unitary");
  Eigen::VectorXcd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = eigenvalues[static_cast<std::size_t>(i)];
  CMatrix entries = basis * d.asDiagonal() * basis.adjoint();
  return {std::move(entries), std::move(eigenvalues), std::move(basis)};
}

NormalMatrix functional_calculus(const NormalMatrix& x, const ContinuousFunction& f) {
  std::vector<Complex> values;
  values.reserve(x.eigenvalues().size());
  for (const auto& l : x.eigenvalues()) {
    const Complex v = f.eval(l);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("functional calculus: " + f.name + " undefined at an eigenvalue");
    values.push_back(v);
  }
  return NormalMatrix::from_spectrum(std::move(values), x.eigenbasis());
}

NormalMatrix conjugate(const NormalMatrix& x, const CMatrix& u) {
  if (u.rows() != x.dim() || u.cols() != x.dim()) throw std::invalid_argument("conjugate: dimension mismatch");
  if (unitarity_defect(u) > 1e-10) throw std::invalid_argument("conjugate: u is not unitary");
  return NormalMatrix::from_spectrum(x.eigenvalues(), u * x.eigenbasis());
}

std::size_t convergence_check(std::span<const NormalMatrix> xs, const NormalMatrix& x,
                              std::span<const ContinuousFunction> functions, double eps) {
  if (xs.empty()) throw std::invalid_argument("convergence_check: empty sequence");
  if (!(eps > 0.0)) throw std::invalid_argument("convergence_check: eps must be positive");
  std::vector<NormalMatrix> targets;
  targets.reserve(functions.size());
  for (const auto& f : functions) targets.push_back(functional_calculus(x, f));

  std::size_t n = xs.size() + 1;  // 1-based; xs.size()+1 means "not found"
  for (std::size_t m = xs.size(); m-- > 0;) {
    double worst = 0.0;
    for (std::size_t k = 0; k < functions.size(); ++k) {
      const auto fx = functional_calculus(xs[m], functions[k]);
      worst = std::max(worst, operator_norm(fx.entries() - targets[k].entries()));
      if (worst >= eps) break;
    }
    if (worst >= eps) break;
    n = m + 1;
  }
  if (n > xs.size()) throw std::runtime_error("convergence_check: no index reached within the sequence");
  return n;
}

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() || b.empty()) {
    if (a.empty() && b.empty()) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  auto directed = [](std::span<const Complex> from, std::span<const Complex> to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace culift

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace spovm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Default tolerance for Hermiticity, positivity and normalisation checks.
inline constexpr double kDefaultTolerance = 1e-9;

/// Relative eigenvalue cutoff (times the largest eigenvalue) that defines the
/// support of a PSD operator.
inline constexpr double kSupportCutoff = 1e-10;

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

/// (A + A^dagger) / 2.
Matrix hermitian_part(const Matrix& a);

/// Eigendecomposition of the Hermitian part of `a`.
HermitianEig hermitian_eig(const Matrix& a);

double max_eigenvalue(const Matrix& a);
double min_eigenvalue(const Matrix& a);

/// Square complex operator that is Hermitian within `tolerance`.
class HermitianOperator {
 public:
  /// Throws DimensionError for non-square input and ValidationError when the
  /// matrix is not Hermitian within tolerance.
  explicit HermitianOperator(Matrix m, double tolerance = kDefaultTolerance);

  /// Same as the constructor, additionally requiring all eigenvalues to be
  /// at least -tolerance. The result carries the PSD flag.
  static HermitianOperator psd(Matrix m, double tolerance = kDefaultTolerance);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double tolerance() const { return tolerance_; }
  bool is_psd() const { return psd_; }

 private:
  Matrix m_;
  double tolerance_;
  bool psd_ = false;
};

/// Unit-trace PSD operator with an ordered register layout.
class DensityOperator {
 public:
  /// `register_dims` defaults to a single register of the full dimension.
  explicit DensityOperator(Matrix m, std::vector<int> register_dims = {},
                           double tolerance = kDefaultTolerance);

  const Matrix& matrix() const { return op_.matrix(); }
  Eigen::Index dim() const { return op_.dim(); }
  const std::vector<int>& register_dims() const { return dims_; }
  double tolerance() const { return op_.tolerance(); }

 private:
  HermitianOperator op_;
  std::vector<int> dims_;
};

class PureState {
 public:
  explicit PureState(Vector vec, std::vector<int> register_dims = {},
                     double tolerance = kDefaultTolerance);

  const Vector& vector() const { return vec_; }
  const std::vector<int>& register_dims() const { return dims_; }
  Matrix density() const { return vec_ * vec_.adjoint(); }

 private:
  Vector vec_;
  std::vector<int> dims_;
};

/// Ordered collection of labelled operators on one Hilbert space. Whether it
/// is a POVM or a sub-POVM is decided by validate_povm, not at construction.
class Povm {
 public:
  Povm(std::vector<std::string> labels, std::vector<Matrix> elements);
  /// Labels default to "0", "1", ...
  explicit Povm(std::vector<Matrix> elements);

  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.front().rows(); }
  const Matrix& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Matrix>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }
  Matrix sum() const;

 private:
  std::vector<std::string> labels_;
  std::vector<Matrix> elements_;
};

enum class PovmMode { kPovm, kSubPovm };

struct PovmReport {
  bool valid = false;
  /// max over elements of max(0, -lambda_min(element))
  double max_psd_defect = 0.0;
  /// || I - sum ||_1
  double completeness_defect = 0.0;
  /// lambda_max(sum - I)
  double max_excess = 0.0;
  /// I - sum; the completing element for a sub-POVM.
  Matrix completion;
};

PovmReport validate_povm(const Povm& povm, PovmMode mode,
                         double tolerance = kDefaultTolerance);

/// Sum of singular values. Throws DimensionError for non-square input.
double trace_norm(const Matrix& a);

/// -sum lambda log2 lambda over the eigenvalues of a PSD (not necessarily
/// normalised) operator, with 0 log 0 = 0.
double entropy_bits(const Matrix& psd);

/// Shannon entropy in bits of a nonnegative weight vector (not renormalised).
double shannon_bits(std::span<const double> weights);

double von_neumann_entropy(const DensityOperator& rho);

/// Traces out the registers listed in `traced` (indices into `dims`).
Matrix partial_trace(const Matrix& m, std::span<const int> dims,
                     std::span<const int> traced);
DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const int> traced);

/// I(A;B) where A is the register subset `part_a` and B is the rest.
double quantum_mutual_information(const DensityOperator& rho_ab,
                                  std::span<const int> part_a);

/// Psi = sum_i |i>_R (x) sqrt(rho)|i>, reference dimension equal to rho.dim().
/// Register layout: {rho.dim()} followed by rho's own registers.
PureState purify(const DensityOperator& rho);

/// Throws ValidationError when an eigenvalue is below -tolerance.
Matrix psd_sqrt(const Matrix& a, double tolerance = kDefaultTolerance);
/// Square-root pseudo-inverse on the support (relative cutoff kSupportCutoff).
Matrix psd_pinv_sqrt(const Matrix& a, double tolerance = kDefaultTolerance);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_power(const Matrix& a, int n);
Matrix kron_all(std::span<const Matrix> factors);
Matrix projector(const Vector& v);

/// Reorders tensor factors: register q of the result is register perm[q] of
/// the input.
Matrix permute_registers(const Matrix& m, std::span<const int> dims,
                         std::span<const int> perm);

/// Orthonormal basis (columns) of the eigenspace of `a` with eigenvalue
/// above `threshold`.
Matrix support_basis(const Matrix& a, double threshold);

/// Projector onto the non-negative eigenspace of I - x (eigenvalues of I - x
/// at least -threshold are kept).
Matrix pruning_projector(const Matrix& x, double threshold = kSupportCutoff);

}  // namespace spovm

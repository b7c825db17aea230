#include "spovm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spovm/errors.hpp"

namespace spovm {
namespace {

long product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

std::vector<int> resolve_dims(std::vector<int> dims, Eigen::Index dim) {
  if (dims.empty()) return {static_cast<int>(dim)};
  if (product(dims) != dim) {
    throw DimensionError("register dimensions do not multiply to " +
                         std::to_string(dim));
  }
  return dims;
}

}  // namespace

Matrix hermitian_part(const Matrix& a) {
  return (a + a.adjoint()) * 0.5;
}

HermitianEig hermitian_eig(const Matrix& a) {
  require_square(a, "hermitian_eig");
  if (a.rows() == 0) return {RealVector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double max_eigenvalue(const Matrix& a) {
  require_square(a, "max_eigenvalue");
  return Eigen::SelfAdjointEigenSolver<Matrix>(hermitian_part(a),
                                               Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

double min_eigenvalue(const Matrix& a) {
  require_square(a, "min_eigenvalue");
  return Eigen::SelfAdjointEigenSolver<Matrix>(hermitian_part(a),
                                               Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

HermitianOperator::HermitianOperator(Matrix m, double tolerance)
    : m_(std::move(m)), tolerance_(tolerance) {
  require_square(m_, "HermitianOperator");
  if (m_.size() == 0) throw DimensionError("HermitianOperator: empty matrix");
  const double skew = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (skew > tolerance_) {
    throw ValidationError("operator is not Hermitian (max |A - A^dagger| = " +
                          std::to_string(skew) + ")");
  }
}

HermitianOperator HermitianOperator::psd(Matrix m, double tolerance) {
  HermitianOperator op(std::move(m), tolerance);
  const double lo = min_eigenvalue(op.m_);
  if (lo < -tolerance) {
    throw ValidationError("operator is not PSD (min eigenvalue " +
                          std::to_string(lo) + ")");
  }
  op.psd_ = true;
  return op;
}

DensityOperator::DensityOperator(Matrix m, std::vector<int> register_dims,
                                 double tolerance)
    : op_(HermitianOperator::psd(std::move(m), tolerance)),
      dims_(resolve_dims(std::move(register_dims), op_.dim())) {
  const double tr = op_.matrix().trace().real();
  if (std::abs(tr - 1.0) > tolerance) {
    throw ValidationError("density operator trace is " + std::to_string(tr));
  }
}

PureState::PureState(Vector vec, std::vector<int> register_dims,
                     double tolerance)
    : vec_(std::move(vec)),
      dims_(resolve_dims(std::move(register_dims), vec_.size())) {
  if (std::abs(vec_.norm() - 1.0) > tolerance) {
    throw ValidationError("pure state is not normalised");
  }
}

Povm::Povm(std::vector<std::string> labels, std::vector<Matrix> elements)
    : labels_(std::move(labels)), elements_(std::move(elements)) {
  if (elements_.empty()) throw ArgumentError("POVM has no elements");
  if (labels_.size() != elements_.size()) {
    throw ArgumentError("POVM label count differs from element count");
  }
  for (const auto& e : elements_) {
    require_square(e, "Povm");
    if (e.rows() != elements_.front().rows()) {
      throw DimensionError("POVM elements have different dimensions");
    }
  }
}

Povm::Povm(std::vector<Matrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw ArgumentError("POVM has no elements");
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    labels_.push_back(std::to_string(i));
    require_square(elements_[i], "Povm");
    if (elements_[i].rows() != elements_.front().rows()) {
      throw DimensionError("POVM elements have different dimensions");
    }
  }
}

Matrix Povm::sum() const {
  Matrix s = Matrix::Zero(dim(), dim());
  for (const auto& e : elements_) s += e;
  return s;
}

PovmReport validate_povm(const Povm& povm, PovmMode mode, double tolerance) {
  PovmReport report;
  bool hermitian = true;
  for (const auto& e : povm.elements()) {
    if ((e - e.adjoint()).cwiseAbs().maxCoeff() > tolerance) hermitian = false;
    report.max_psd_defect =
        std::max(report.max_psd_defect, std::max(0.0, -min_eigenvalue(e)));
  }
  const Matrix id = Matrix::Identity(povm.dim(), povm.dim());
  report.completion = id - povm.sum();
  report.completeness_defect = trace_norm(report.completion);
  report.max_excess = -min_eigenvalue(report.completion);
  const bool psd_ok = hermitian && report.max_psd_defect <= tolerance;
  if (mode == PovmMode::kPovm) {
    report.valid = psd_ok && report.completeness_defect <= tolerance;
  } else {
    report.valid = psd_ok && report.max_excess <= tolerance;
  }
  return report;
}

double trace_norm(const Matrix& a) {
  require_square(a, "trace_norm");
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double shannon_bits(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) h -= w * std::log2(w);
  }
  return h;
}

double entropy_bits(const Matrix& psd) {
  require_square(psd, "entropy_bits");
  if (psd.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(psd),
                                               Eigen::EigenvaluesOnly);
  const RealVector& ev = solver.eigenvalues();
  return shannon_bits(std::span<const double>(ev.data(), ev.size()));
}

double von_neumann_entropy(const DensityOperator& rho) {
  return entropy_bits(rho.matrix());
}

Matrix partial_trace(const Matrix& m, std::span<const int> dims,
                     std::span<const int> traced) {
  require_square(m, "partial_trace");
  if (product(dims) != m.rows()) {
    throw DimensionError("partial_trace: register dims do not match matrix");
  }
  const int nreg = static_cast<int>(dims.size());
  std::vector<bool> is_traced(nreg, false);
  for (int t : traced) {
    if (t < 0 || t >= nreg) {
      throw DimensionError("partial_trace: register index " +
                           std::to_string(t) + " out of range");
    }
    is_traced[t] = true;
  }
  // Row-major strides: register 0 is the most significant digit.
  std::vector<long> stride(nreg, 1);
  for (int r = nreg - 2; r >= 0; --r) stride[r] = stride[r + 1] * dims[r + 1];

  auto offsets = [&](bool traced_part) {
    std::vector<long> out{0};
    for (int r = 0; r < nreg; ++r) {
      if (is_traced[r] != traced_part) continue;
      std::vector<long> next;
      next.reserve(out.size() * dims[r]);
      for (long base : out) {
        for (int d = 0; d < dims[r]; ++d) next.push_back(base + d * stride[r]);
      }
      out = std::move(next);
    }
    return out;
  };
  const std::vector<long> kept = offsets(false);
  const std::vector<long> summed = offsets(true);

  const auto nk = static_cast<Eigen::Index>(kept.size());
  Matrix out = Matrix::Zero(nk, nk);
  for (Eigen::Index c = 0; c < nk; ++c) {
    for (Eigen::Index r = 0; r < nk; ++r) {
      Complex acc = 0.0;
      for (long t : summed) acc += m(kept[r] + t, kept[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const int> traced) {
  const auto& dims = rho.register_dims();
  std::vector<int> remaining;
  for (int r = 0; r < static_cast<int>(dims.size()); ++r) {
    if (std::find(traced.begin(), traced.end(), r) == traced.end()) {
      remaining.push_back(dims[r]);
    }
  }
  if (remaining.empty()) {
    throw ArgumentError("partial_trace: every register traced out");
  }
  return DensityOperator(partial_trace(rho.matrix(), dims, traced), remaining,
                         rho.tolerance());
}

double quantum_mutual_information(const DensityOperator& rho_ab,
                                  std::span<const int> part_a) {
  const int nreg = static_cast<int>(rho_ab.register_dims().size());
  std::vector<int> part_b;
  for (int r = 0; r < nreg; ++r) {
    if (std::find(part_a.begin(), part_a.end(), r) == part_a.end()) {
      part_b.push_back(r);
    }
  }
  for (int r : part_a) {
    if (r < 0 || r >= nreg) {
      throw DimensionError("mutual information cut references register " +
                           std::to_string(r));
    }
  }
  if (part_a.empty() || part_b.empty()) {
    throw DimensionError("mutual information cut must split the registers");
  }
  const auto& dims = rho_ab.register_dims();
  const Matrix rho_a = partial_trace(rho_ab.matrix(), dims, part_b);
  const Matrix rho_b = partial_trace(rho_ab.matrix(), dims, part_a);
  return entropy_bits(rho_a) + entropy_bits(rho_b) -
         entropy_bits(rho_ab.matrix());
}

PureState purify(const DensityOperator& rho) {
  const Eigen::Index d = rho.dim();
  const Matrix root = psd_sqrt(rho.matrix(), rho.tolerance());
  Vector psi = Vector::Zero(d * d);
  // Reference register first: psi[i * d + j] = <j| sqrt(rho) |i>.
  for (Eigen::Index i = 0; i < d; ++i) {
    psi.segment(i * d, d) = root.col(i);
  }
  psi /= psi.norm();
  std::vector<int> dims{static_cast<int>(d)};
  dims.insert(dims.end(), rho.register_dims().begin(),
              rho.register_dims().end());
  return PureState(std::move(psi), std::move(dims));
}

Matrix psd_sqrt(const Matrix& a, double tolerance) {
  const HermitianEig eig = hermitian_eig(a);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values.minCoeff() < -tolerance * scale) {
    throw ValidationError("psd_sqrt: negative eigenvalue " +
                          std::to_string(eig.values.minCoeff()));
  }
  const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.cast<Complex>().asDiagonal() *
         eig.vectors.adjoint();
}

Matrix psd_pinv_sqrt(const Matrix& a, double tolerance) {
  const HermitianEig eig = hermitian_eig(a);
  const double top = eig.values.maxCoeff();
  if (eig.values.minCoeff() < -tolerance * std::max(1.0, std::abs(top))) {
    throw ValidationError("psd_pinv_sqrt: negative eigenvalue " +
                          std::to_string(eig.values.minCoeff()));
  }
  const double cutoff = kSupportCutoff * std::max(top, 0.0);
  RealVector inv(eig.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    const double v = eig.values[i];
    inv[i] = (v > cutoff && v > 0.0) ? 1.0 / std::sqrt(v) : 0.0;
  }
  return eig.vectors * inv.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix kron_power(const Matrix& a, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Matrix projector(const Vector& v) {
  return v * v.adjoint();
}

Matrix permute_registers(const Matrix& m, std::span<const int> dims,
                         std::span<const int> perm) {
  require_square(m, "permute_registers");
  const int nreg = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != nreg || product(dims) != m.rows()) {
    throw DimensionError("permute_registers: layout mismatch");
  }
  std::vector<int> new_dims(nreg);
  for (int q = 0; q < nreg; ++q) new_dims[q] = dims[perm[q]];
  const long total = m.rows();
  std::vector<long> map(total);
  std::vector<int> digits(nreg);
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int r = nreg - 1; r >= 0; --r) {
      digits[r] = static_cast<int>(rest % dims[r]);
      rest /= dims[r];
    }
    long out = 0;
    for (int q = 0; q < nreg; ++q) out = out * new_dims[q] + digits[perm[q]];
    map[idx] = out;
  }
  Matrix result(total, total);
  for (long c = 0; c < total; ++c) {
    for (long r = 0; r < total; ++r) result(map[r], map[c]) = m(r, c);
  }
  return result;
}

Matrix support_basis(const Matrix& a, double threshold) {
  const HermitianEig eig = hermitian_eig(a);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] > threshold) keep.push_back(i);
  }
  Matrix basis(a.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(keep[c]);
  }
  return basis;
}

Matrix pruning_projector(const Matrix& x, double threshold) {
  require_square(x, "pruning_projector");
  const HermitianEig eig = hermitian_eig(Matrix::Identity(x.rows(), x.cols()) - x);
  Matrix p = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] >= -threshold) p += projector(eig.vectors.col(i));
  }
  return p;
}

}  // namespace spovm

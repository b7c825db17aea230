#include "spovm/random.hpp"

#include <cmath>

namespace spovm {

Matrix ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(r, c) = Complex(re, im) * M_SQRT1_2;
    }
  }
  return g;
}

Matrix random_unitary(Rng& rng, Eigen::Index dim) {
  const Matrix g = ginibre(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

Matrix random_density(Rng& rng, Eigen::Index dim, Eigen::Index rank) {
  const Matrix g = ginibre(rng, dim, rank);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

Vector random_pure(Rng& rng, Eigen::Index dim) {
  Vector v = ginibre(rng, dim, 1).col(0);
  return v / v.norm();
}

Povm random_povm(Rng& rng, Eigen::Index dim, int outcomes) {
  std::vector<Matrix> raw;
  Matrix sum = Matrix::Zero(dim, dim);
  for (int x = 0; x < outcomes; ++x) {
    const Matrix w = ginibre(rng, dim, dim);
    raw.push_back(w.adjoint() * w);
    sum += raw.back();
  }
  const Matrix s = psd_pinv_sqrt(sum);
  for (auto& e : raw) e = hermitian_part(s * e * s);
  return Povm(std::move(raw));
}

Povm random_projective(Rng& rng, Eigen::Index dim) {
  const Matrix u = random_unitary(rng, dim);
  std::vector<Matrix> elements;
  for (Eigen::Index i = 0; i < dim; ++i) elements.push_back(projector(u.col(i)));
  return Povm(std::move(elements));
}

Povm random_sub_povm(Rng& rng, Eigen::Index dim, int outcomes, double lo,
                     double hi) {
  std::vector<Matrix> elements = random_povm(rng, dim, outcomes).elements();
  for (auto& e : elements) e *= rng.uniform(lo, hi);
  return Povm(std::move(elements));
}

}  // namespace spovm

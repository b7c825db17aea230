#pragma once

#include "spovm/linalg.hpp"
#include "spovm/rng.hpp"

namespace spovm {

/// Matrix with i.i.d. standard complex Gaussian entries.
Matrix ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
Matrix random_unitary(Rng& rng, Eigen::Index dim);

/// Random density operator of the given rank (induced measure).
Matrix random_density(Rng& rng, Eigen::Index dim, Eigen::Index rank);

Vector random_pure(Rng& rng, Eigen::Index dim);

/// Random POVM with `outcomes` elements: G_x = W_x^dagger W_x normalised by
/// S^{-1/2} (.) S^{-1/2} with S = sum_x G_x.
Povm random_povm(Rng& rng, Eigen::Index dim, int outcomes);

/// Rank-one projective measurement in a Haar-random basis.
Povm random_projective(Rng& rng, Eigen::Index dim);

/// Random POVM scaled elementwise by factors drawn from [lo, hi] (so the sum
/// stays below the identity when hi <= 1).
Povm random_sub_povm(Rng& rng, Eigen::Index dim, int outcomes,
                     double lo = 0.2, double hi = 0.9);

}  // namespace spovm

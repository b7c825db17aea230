#pragma once

#include <string>

#include "spovm/codes.hpp"
#include "spovm/json_io.hpp"
#include "spovm/random.hpp"
#include "spovm/rates.hpp"

namespace spovm::testing {

inline std::string data_path(const std::string& name) {
  return std::string(SPOVM_DATA_DIR) + "/" + name;
}

inline DistributedProblem bundled_problem(int id) {
  return problem_from_json(read_json_file(data_path("example" + std::to_string(id) + ".json")));
}

inline Matrix bell_state() {
  Matrix rho = Matrix::Zero(4, 4);
  rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
  return rho;
}

/// Random two-qubit problem with sum structure: p in {2, 3}, POVMs with up to
/// p outcomes embedded by identity, random P(z|w) on a binary Z and
/// P(z|s,t) = P(z | s + t).
inline DistributedProblem random_problem(Rng& rng) {
  const int p = rng.uniform_int(2) == 0 ? 2 : 3;
  const int sa = p == 2 ? 2 : 2 + static_cast<int>(rng.uniform_int(2));
  const int sb = p == 2 ? 2 : 2 + static_cast<int>(rng.uniform_int(2));
  const auto rank = 1 + static_cast<Eigen::Index>(rng.uniform_int(4));
  std::vector<std::vector<double>> zw(p);
  for (auto& row : zw) {
    const double a = rng.uniform();
    row = {a, 1.0 - a};
  }
  std::vector<std::vector<double>> zst;
  for (int s = 0; s < sa; ++s) {
    for (int t = 0; t < sb; ++t) zst.push_back(zw[(s + t) % p]);
  }
  std::vector<int> fs(sa), ft(sb);
  for (int i = 0; i < sa; ++i) fs[i] = i;
  for (int i = 0; i < sb; ++i) ft[i] = i;
  return DistributedProblem{
      DensityOperator(random_density(rng, 4, rank), {2, 2}),
      random_povm(rng, 2, sa),
      random_povm(rng, 2, sb),
      StochasticMap({sa, sb}, 2, zst),
      p,
      fs,
      ft,
      StochasticMap({p}, 2, zw)};
}

}  // namespace spovm::testing

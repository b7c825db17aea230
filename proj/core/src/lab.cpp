#include "spovm/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spovm/codes.hpp"
#include "spovm/errors.hpp"
#include "spovm/random.hpp"

namespace spovm {
namespace {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  int count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return sum / count; }
  double stderr_() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1));
    return std::sqrt(var / count);
  }
};

bool is_zero(const Matrix& m) { return m.size() == 0 || m.isZero(0.0); }

int exact_log(std::int64_t M, int p) {
  int k = 0;
  std::int64_t v = 1;
  while (v < M) {
    v *= p;
    ++k;
  }
  if (v != M) throw ArgumentError("UCC sampler needs M to be a power of p");
  return k;
}

}  // namespace

double CoveringInstance::kappa() const {
  if (kappa_override) return *kappa_override;
  double k = 0.0;
  for (std::size_t x = 0; x < size(); ++x) {
    if (lambda[x] <= 0.0) continue;
    k = std::max(k, mu[x] > 0.0 ? lambda[x] / mu[x]
                                : std::numeric_limits<double>::infinity());
  }
  return k;
}

Matrix CoveringInstance::average() const {
  Matrix s = Matrix::Zero(pi.rows(), pi.cols());
  for (std::size_t x = 0; x < size(); ++x) {
    if (lambda[x] > 0.0) s += lambda[x] * sigma[x];
  }
  return s;
}

Matrix CoveringInstance::cut(std::size_t x) const {
  return hermitian_part(pi * pi_x[x] * sigma[x] * pi_x[x] * pi);
}

void CoveringInstance::validate() const {
  if (size() == 0) throw ArgumentError("empty covering ensemble");
  if (sigma.size() != size() || mu.size() != size() || pi_x.size() != size()) {
    throw DimensionError("covering instance vectors differ in length");
  }
  const Eigen::Index dim = pi.rows();
  if (pi.cols() != dim) throw DimensionError("Pi is not square");
  for (std::size_t x = 0; x < size(); ++x) {
    if (sigma[x].rows() != dim || sigma[x].cols() != dim ||
        pi_x[x].rows() != dim || pi_x[x].cols() != dim) {
      throw DimensionError("covering operator dimension mismatch");
    }
    if (lambda[x] < 0.0 || mu[x] < 0.0) {
      throw ArgumentError("negative weight in covering instance");
    }
  }
}

CoveringInstance make_covering_instance(std::vector<double> lambda,
                                        std::vector<Matrix> sigma,
                                        std::vector<double> mu, Matrix pi,
                                        std::vector<Matrix> pi_x) {
  CoveringInstance inst;
  inst.lambda = std::move(lambda);
  inst.sigma = std::move(sigma);
  inst.mu = std::move(mu);
  inst.pi = std::move(pi);
  inst.pi_x = std::move(pi_x);
  inst.validate();
  double eps = 0.0;
  double top = 0.0;
  for (std::size_t x = 0; x < inst.size(); ++x) {
    if (is_zero(inst.sigma[x])) continue;
    eps = std::max(eps, 1.0 - (inst.pi * inst.sigma[x]).trace().real());
    eps = std::max(eps, 1.0 - (inst.pi_x[x] * inst.sigma[x]).trace().real());
    top = std::max(top, max_eigenvalue(inst.pi_x[x] * inst.sigma[x] * inst.pi_x[x]));
  }
  inst.epsilon = std::max(0.0, eps);
  inst.d = top > 0.0 ? 1.0 / top : 1.0;
  const double norm = trace_norm(inst.pi * psd_sqrt(inst.average()));
  inst.D = norm * norm;
  return inst;
}

CoveringInstance qubit_covering_instance(int bits, double noise,
                                         std::uint64_t seed) {
  if (bits < 0 || bits > 20) throw ArgumentError("bits must lie in [0, 20]");
  if (!(noise >= 0.0 && noise < 1.0)) throw ArgumentError("noise must lie in [0, 1)");
  const std::size_t size = std::size_t{1} << bits;
  Rng rng(seed);
  std::vector<double> lambda(size);
  for (double& l : lambda) l = 1.0 + rng.uniform();
  const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  for (double& l : lambda) l /= total;
  std::vector<Matrix> sigma(size), pi_x(size);
  const Matrix white = Matrix::Identity(2, 2) / 2.0;
  for (std::size_t x = 0; x < size; ++x) {
    pi_x[x] = projector(random_pure(rng, 2));
    sigma[x] = (1.0 - noise) * pi_x[x] + noise * white;
  }
  return make_covering_instance(std::move(lambda), std::move(sigma),
                                std::vector<double>(size, 1.0 / size),
                                Matrix::Identity(2, 2), std::move(pi_x));
}

CoveringHypothesisReport check_covering_hypotheses(const CoveringInstance& inst,
                                                   double slack) {
  inst.validate();
  double trace_pi = -1.0, trace_pi_x = -1.0, below_d = -1.0, below_sigma = -1.0;
  double continuity = 0.0;
  for (std::size_t x = 0; x < inst.size(); ++x) {
    if (inst.lambda[x] > 0.0 && inst.mu[x] <= 0.0) continuity = 1.0;
    if (is_zero(inst.sigma[x])) continue;
    const Matrix& s = inst.sigma[x];
    const Matrix& px = inst.pi_x[x];
    trace_pi = std::max(trace_pi, 1.0 - inst.epsilon - (inst.pi * s).trace().real());
    trace_pi_x = std::max(trace_pi_x, 1.0 - inst.epsilon - (px * s).trace().real());
    const Matrix cut = px * s * px;
    below_d = std::max(below_d, max_eigenvalue(cut - px / inst.d));
    below_sigma = std::max(below_sigma, max_eigenvalue(cut - s));
  }
  const double norm = trace_norm(inst.pi * psd_sqrt(inst.average()));
  double kappa_excess = -1.0;
  for (std::size_t x = 0; x < inst.size(); ++x) {
    if (inst.lambda[x] > 0.0 && inst.mu[x] > 0.0) {
      kappa_excess = std::max(kappa_excess, inst.lambda[x] / inst.mu[x] - inst.kappa());
    }
  }

  CoveringHypothesisReport report;
  auto add = [&](std::string name, double v) {
    report.checks.push_back({std::move(name), v, v <= slack});
  };
  add("trace_pi", trace_pi);
  add("trace_pi_x", trace_pi_x);
  add("D_bound", norm * norm - inst.D);
  add("pi_x_below_1/d", below_d);
  add("pi_x_below_sigma", below_sigma);
  add("absolutely_continuous", continuity);
  add("kappa", kappa_excess);
  add("epsilon_range", inst.epsilon >= 0.0 && inst.epsilon < 1.0 ? -1.0 : 1.0);
  report.all_hold = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const HypothesisCheck& c) { return c.holds; });
  return report;
}

std::vector<std::size_t> sample_code(const CoveringInstance& inst,
                                     const SamplerConfig& sampler,
                                     std::int64_t M, Rng& rng) {
  if (M < 1) throw ArgumentError("covering code needs M >= 1");
  std::vector<std::size_t> letters;
  letters.reserve(static_cast<std::size_t>(M));
  if (sampler.kind == SamplerKind::Iid) {
    std::vector<double> cdf(inst.size());
    std::partial_sum(inst.mu.begin(), inst.mu.end(), cdf.begin());
    for (std::int64_t m = 0; m < M; ++m) {
      const double u = rng.uniform() * cdf.back();
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      letters.push_back(std::min<std::size_t>(it - cdf.begin(), inst.size() - 1));
    }
    return letters;
  }
  const int p = sampler.p;
  const int n = sampler.n;
  if (ipow(p, n) != static_cast<std::int64_t>(inst.size())) {
    throw ArgumentError("UCC sampler needs an extended alphabet of size p^n");
  }
  const int k = exact_log(M, p);
  std::vector<Word> G(k, Word(n));
  for (auto& row : G) {
    for (auto& g : row) g = static_cast<int>(rng.uniform_int(p));
  }
  Word h(n);
  for (auto& v : h) v = static_cast<int>(rng.uniform_int(p));
  for (const Word& w : coset_code(p, G, h)) {
    letters.push_back(static_cast<std::size_t>(to_index(w, p)));
  }
  return letters;
}

double covering_delta(double epsilon) { return 4.0 * std::sqrt(epsilon); }

CoveringReport covering_experiment(const CoveringInstance& inst,
                                   const SamplerConfig& sampler, std::int64_t M,
                                   int trials, std::uint64_t seed) {
  if (M < 1) throw ArgumentError("covering experiment needs M >= 1");
  if (trials < 2) throw ArgumentError("covering experiment needs >= 2 trials");
  inst.validate();
  if (sampler.kind == SamplerKind::Ucc) {
    const double u = 1.0 / static_cast<double>(inst.size());
    for (double m : inst.mu) {
      if (std::abs(m - u) > 1e-12) {
        throw ArgumentError("UCC sampler draws uniformly; mu must be uniform");
      }
    }
  }
  const Eigen::Index dim = inst.pi.rows();
  std::vector<Matrix> cuts(inst.size());
  Matrix avg_cut = Matrix::Zero(dim, dim);
  for (std::size_t x = 0; x < inst.size(); ++x) {
    cuts[x] = inst.cut(x);
    if (inst.lambda[x] > 0.0) avg_cut += inst.lambda[x] * cuts[x];
  }
  const Matrix avg = inst.average();
  const double bound_cut =
      std::sqrt(inst.kappa() * inst.D / (static_cast<double>(M) * inst.d));
  const double two_delta = 2.0 * covering_delta(inst.epsilon);

  Moments raw, cut;
  int above = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(t)));
    Matrix est = Matrix::Zero(dim, dim);
    Matrix est_cut = Matrix::Zero(dim, dim);
    for (std::size_t x : sample_code(inst, sampler, M, rng)) {
      if (inst.lambda[x] <= 0.0) continue;  // padding letters contribute 0
      const double w = inst.lambda[x] / inst.mu[x];
      est += w * inst.sigma[x];
      est_cut += w * cuts[x];
    }
    const double scale = 1.0 / static_cast<double>(M);
    const double dr = trace_norm(avg - scale * est);
    const double dc = trace_norm(avg_cut - scale * est_cut);
    raw.add(dr);
    cut.add(dc);
    if (dc > dr + two_delta + 1e-12) ++above;
  }

  CoveringReport report;
  report.M = M;
  report.trials = trials;
  report.seed = seed;
  report.sampler = sampler.kind;
  auto summarize = [](const Moments& m, double bound) {
    StatSummary s;
    s.empirical_mean = m.mean();
    s.stderr_ = m.stderr_();
    s.bound = bound;
    s.pass = s.empirical_mean <= bound + 3.0 * s.stderr_;
    return s;
  };
  report.raw = summarize(raw, bound_cut + two_delta);
  report.cut = summarize(cut, bound_cut);
  report.cut_above_raw = above;
  return report;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ArgumentError("slope needs two or more matched points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

PsdSampler wishart_sampler(Eigen::Index dim, Eigen::Index rank,
                           double mean_scale) {
  if (dim < 1 || rank < 1 || mean_scale < 0.0) {
    throw ArgumentError("invalid Wishart sampler parameters");
  }
  return [dim, rank, mean_scale](Rng& rng) {
    const Matrix w = ginibre(rng, dim, rank);
    return Matrix(hermitian_part(w * w.adjoint()) *
                  (mean_scale / static_cast<double>(rank)));
  };
}

PruningReport pruning_inequality_experiment(const PsdSampler& sampler,
                                            int trials, double eta,
                                            std::uint64_t seed,
                                            const Matrix& expected) {
  if (!(eta > 0.0 && eta < 1.0)) throw ArgumentError("eta must lie in (0, 1)");
  if (trials < 2) throw ArgumentError("pruning experiment needs >= 2 trials");
  auto draw = [&](int t) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(t)));
    return sampler(rng);
  };

  // Sample mean, used for the precondition and as E[X] when none is given.
  Matrix mean = draw(0);
  for (int t = 1; t < trials; ++t) mean += draw(t);
  mean /= static_cast<double>(trials);
  const Eigen::Index dim = mean.rows();
  const Matrix ex = expected.size() == 0 ? mean : expected;
  if (ex.rows() != dim || ex.cols() != dim) {
    throw DimensionError("expected operator does not match the sampler");
  }
  const Matrix identity = Matrix::Identity(dim, dim);
  const HermitianEig excess = hermitian_eig(mean - (1.0 - eta) * identity);
  const Vector top = excess.vectors.col(dim - 1);

  PruningReport report;
  report.trials = trials;
  report.seed = seed;
  report.eta = eta;
  Moments trace_x, deficit, indicator, gap, direction;
  for (int t = 0; t < trials; ++t) {
    const Matrix x = draw(t);
    const Matrix pr = pruning_projector(x);
    const double d = (identity - pr).trace().real();
    const double tx = x.trace().real();
    const bool not_below = max_eigenvalue(x) > 1.0 + kSupportCutoff;
    if (d > tx + 1e-9) ++report.trace_violations;
    if ((not_below ? 1.0 : 0.0) > d + 1e-9) ++report.indicator_violations;
    trace_x.add(tx);
    deficit.add(d);
    indicator.add(not_below ? 1.0 : 0.0);
    const double dev = trace_norm(x - ex);
    gap.add(d - dev / eta);
    direction.add((top.adjoint() * x * top)(0, 0).real());
  }
  report.mean_trace_x = trace_x.mean();
  report.mean_deficit = deficit.mean();
  report.prob_not_below = indicator.mean();
  report.aggregate.empirical_mean = deficit.mean();
  report.aggregate.bound = deficit.mean() - gap.mean();
  report.aggregate.stderr_ = gap.stderr_();
  report.aggregate.pass = gap.mean() <= 3.0 * gap.stderr_();
  report.precondition_warning =
      excess.values(dim - 1) > 3.0 * direction.stderr_();
  return report;
}

SeparateReport separate_lemma_check(const DensityOperator& rho_ab,
                                    const Matrix& gamma_a,
                                    const std::vector<Matrix>& m_y,
                                    double tolerance) {
  const auto& dims = rho_ab.register_dims();
  if (dims.size() != 2) throw DimensionError("rho_AB needs registers (A, B)");
  if (gamma_a.rows() != dims[0] || gamma_a.cols() != dims[0]) {
    throw DimensionError("Gamma does not act on A");
  }
  if (m_y.empty()) throw ArgumentError("empty sub-POVM");
  Matrix total = Matrix::Zero(dims[1], dims[1]);
  for (const Matrix& l : m_y) {
    if (l.rows() != dims[1] || l.cols() != dims[1]) {
      throw DimensionError("sub-POVM element does not act on B");
    }
    total += l;
  }
  const Matrix sq = psd_sqrt(rho_ab.matrix());
  const int traced[] = {1};
  const Matrix sq_a = psd_sqrt(partial_trace(rho_ab.matrix(), dims, traced));

  SeparateReport report;
  for (const Matrix& l : m_y) {
    report.lhs += trace_norm(sq * kron(gamma_a, l) * sq);
  }
  report.rhs = trace_norm(sq_a * gamma_a * sq_a);
  const Matrix defect = Matrix::Identity(dims[1], dims[1]) - total;
  report.complete = defect.cwiseAbs().maxCoeff() <= tolerance;
  report.inequality_holds = report.lhs <= report.rhs + tolerance;
  report.equality_holds = std::abs(report.lhs - report.rhs) <= tolerance;
  return report;
}

}  // namespace spovm

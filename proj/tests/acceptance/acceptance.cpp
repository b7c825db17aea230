// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria. An optional argument runs only criteria whose key
// contains it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "../common/fixtures.hpp"
#include "spovm/lab.hpp"
#include "spovm/protocol.hpp"

using namespace spovm;
using spovm::testing::bundled_problem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

constexpr double kMatch = 5e-4;

Outcome example1_entropies() {
  const InfoQuantities q = distributed_quantities(bundled_problem(1));
  const bool ok = near(q.S_W, 0.5155, kMatch) && near(q.S_U, 0.9999, kMatch) &&
                  near(q.S_V, 0.9999, kMatch) && near(q.S_UV, 1.5154, kMatch) &&
                  near(q.I_U_V, 0.4844, kMatch);
  return {ok, fmt("S(U+V)=%.4f S(U)=%.4f S(V)=%.4f S(U,V)=%.4f I(U;V)=%.4f", q.S_W,
                  q.S_U, q.S_V, q.S_UV, q.I_U_V)};
}

Outcome example2_gain() {
  const double g = gain_indicator(distributed_quantities(bundled_problem(2)));
  return {near(g, -0.9039, kMatch), fmt("gain=%.5f", g)};
}

Outcome example1_chain() {
  const InfoQuantities q = distributed_quantities(bundled_problem(1));
  const double a = q.S_U - q.S_W;
  const double b = q.S_V - q.S_W;
  const bool ok = near(a, q.I_U_V, kMatch) && near(b, q.I_U_V, kMatch);
  return {ok, fmt("S(U)-S(U+V)=%.5f S(V)-S(U+V)=%.5f I(U;V)=%.5f", a, b, q.I_U_V)};
}

Outcome region_comparison() {
  const InfoQuantities q = distributed_quantities(bundled_problem(1));
  Rng rng(2024);
  const BaselineComparison c = compare_with_baseline(q, 10000, rng);
  const bool ok = near(c.gap, 0.4844, kMatch) && c.witnesses > 0;
  std::string w;
  if (c.witness) {
    const auto& pt = *c.witness;
    w = fmt(" witness=(R1=%.3f R2=%.3f C1=%.3f C2=%.3f)", pt.at("R1"), pt.at("R2"),
            pt.at("C1"), pt.at("C2"));
  }
  return {ok, fmt("gap=%.5f witnesses=%d/%d min_structured_sum=%.4f baseline_rhs=%.4f",
                  c.gap, c.witnesses, c.sampled, c.structured_sum_min, c.baseline_rhs) + w};
}

int fm_disagreements(const InfoQuantities& q, Rng& rng, int points) {
  const RateRegion direct = distributed_region(q);
  const RateRegion projected = fourier_motzkin_eliminate(r3_region(q), "Rtilde");
  int bad = 0;
  for (const auto& pt : sample_points(direct, points, rng)) {
    if (region_membership(direct, pt) != region_membership(projected, pt)) ++bad;
  }
  return bad;
}

Outcome fm_consistency() {
  Rng rng(77);
  int bad = fm_disagreements(distributed_quantities(bundled_problem(1)), rng, 10000);
  int instances = 1;
  for (int i = 0; i < 20; ++i, ++instances) {
    bad += fm_disagreements(distributed_quantities(testing::random_problem(rng)), rng, 10000);
  }
  return {bad == 0, fmt("%d instances x 10000 points, %d disagreements", instances, bad)};
}

Outcome surface_symmetry() {
  const DistributedProblem pr = bundled_problem(3);
  const int pts = 21;
  const auto rows = surface_scan(pr.rho_ab, linear_grid(-1.0, 1.0, pts), pr.p_zst,
                                 pr.p, pr.f_s, pr.f_t);
  auto at = [&](int i, int j, int k) -> const SurfaceRow& {
    return rows[(static_cast<std::size_t>(i) * pts + j) * pts + k];
  };
  double asym = 0.0;
  int valid = 0, changes = 0;
  for (int i = 0; i < pts; ++i) {
    for (int j = 0; j < pts; ++j) {
      for (int k = 0; k < pts; ++k) {
        const SurfaceRow& r = at(i, j, k);
        if (!r.valid) continue;
        ++valid;
        const SurfaceRow& m = at(i, j, pts - 1 - k);
        asym = m.valid ? std::max(asym, std::abs(r.gain - m.gain)) : INFINITY;
        const SurfaceRow* next[] = {i + 1 < pts ? &at(i + 1, j, k) : nullptr,
                                    j + 1 < pts ? &at(i, j + 1, k) : nullptr,
                                    k + 1 < pts ? &at(i, j, k + 1) : nullptr};
        for (const SurfaceRow* n : next) {
          if (n && n->valid && (r.gain < 0.0) != (n->gain < 0.0)) ++changes;
        }
      }
    }
  }
  return {asym <= 1e-9 && changes > 0,
          fmt("%d valid points, max asymmetry %.2e, %d sign changes", valid, asym, changes)};
}

Outcome pairwise() {
  bool ok = true;
  std::string detail;
  for (auto [p, n, k, l] : {std::array{2, 2, 1, 1}, std::array{2, 3, 1, 1},
                            std::array{3, 2, 1, 1}}) {
    const PairwiseReport r = pairwise_independence_check(p, n, k, l);
    const bool exact = r.pass && r.max_marginal_deviation == 0.0 &&
                       r.max_pair_deviation == 0.0;
    // odd p admits a three-term relation; over F_2 the first is four-term
    const DependenceWitness w = dependence_witness(p, n, k, l, p == 2 ? 4 : 3);
    ok = ok && exact && w.fires();
    detail += fmt("(%d,%d,%d,%d): pairwise %s, order-%zu witness %s; ", p, n, k, l,
                  exact ? "exact" : "FAILED", w.indices.size(),
                  w.fires() ? "fires" : "silent");
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome covering() {
  const CoveringInstance inst = qubit_covering_instance(12, 0.02, 5);
  const bool hyp = check_covering_hypotheses(inst).all_hold;
  const std::vector<std::int64_t> Ms = {4, 16, 64, 256};
  bool ok = hyp;
  std::string detail = fmt("eps=%.3f kappa=%.3f D=%.3f d=%.3f", inst.epsilon,
                           inst.kappa(), inst.D, inst.d);
  for (SamplerKind kind : {SamplerKind::Iid, SamplerKind::Ucc}) {
    std::vector<double> xs, ys;
    bool bounds = true;
    for (std::int64_t M : Ms) {
      const CoveringReport r = covering_experiment(inst, {kind, 2, 12}, M, 2000, 99);
      bounds = bounds && r.pass();
      xs.push_back(static_cast<double>(M));
      ys.push_back(r.cut.empirical_mean);
    }
    const double slope = loglog_slope(xs, ys);
    ok = ok && bounds && slope >= -0.6 && slope <= -0.4;
    detail += fmt("; %s bounds %s slope %.3f", kind == SamplerKind::Iid ? "iid" : "ucc",
                  bounds ? "hold" : "FAIL", slope);
  }
  return {ok, detail};
}

Outcome pruning() {
  const double eta = 0.5;
  const double scale = (1.0 - eta) / 2.0;
  const PruningReport r = pruning_inequality_experiment(
      wishart_sampler(4, 2, scale), 10000, eta, 31, scale * Matrix::Identity(4, 4));
  return {r.pass() && !r.precondition_warning,
          fmt("trace violations %d, indicator violations %d, E Tr(I-P)=%.4f <= "
              "%.4f (stderr %.4f), P(X!<=I)=%.4f",
              r.trace_violations, r.indicator_violations, r.aggregate.empirical_mean,
              r.aggregate.bound, r.aggregate.stderr_, r.prob_not_below)};
}

Outcome separate() {
  Rng rng(13);
  int eq_fail = 0, ineq_fail = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const DensityOperator rho(random_density(rng, 6, 2), {2, 3});
    const Matrix w = ginibre(rng, 2, 2);
    const Matrix gamma = w * w.adjoint();  // positive, like a POVM element
    const Povm m = t % 2 == 0 ? random_povm(rng, 3, 2 + t % 3) : random_projective(rng, 3);
    const SeparateReport r = separate_lemma_check(rho, gamma, m.elements());
    worst = std::max(worst, std::abs(r.lhs - r.rhs));
    if (!(r.complete && r.equality_holds)) ++eq_fail;
  }
  for (int t = 0; t < 100; ++t) {
    const DensityOperator rho(random_density(rng, 6, 2), {2, 3});
    const Matrix gamma = hermitian_part(ginibre(rng, 2, 2));
    const Povm m = random_sub_povm(rng, 3, 2 + t % 3);
    if (!separate_lemma_check(rho, gamma, m.elements()).inequality_holds) ++ineq_fail;
  }
  return {eq_fail == 0 && ineq_fail == 0,
          fmt("complete: %d/100 unequal (max |LHS-RHS| %.1e); sub-POVM: %d/100 violations",
              eq_fail, worst, ineq_fail)};
}

Outcome protocol() {
  const P2pProblem pr = trine_problem();
  const InfoQuantities q = p2p_quantities(pr.rho, pr.m, pr.p_zw, pr.p);
  const RateRegion region = p2p_region(q);
  double defect = 0.0, self = 0.0, min_margin = INFINITY;
  std::vector<double> medians;
  for (int n = 2; n <= 5; ++n) {
    ProtocolParams pp;
    pp.n = n;
    pp.k = 0;
    pp.l = 2 * n;
    pp.p = 3;
    pp.N = static_cast<int>(std::ceil(std::pow(2.0, 0.5 * n)));
    pp.eta = 0.1;
    pp.delta = 0.9;
    const double lp = std::log2(3.0);
    const RatePoint rate = {{"R", pp.l * lp / n}, {"R1", 0.0}, {"C", std::log2(pp.N) / n}};
    if (!region_membership(region, rate)) min_margin = -INFINITY;
    // slack of the information constraints and of C >= 0
    for (std::size_t i : {0u, 1u, 4u}) {
      const auto& in = region.inequalities()[i];
      min_margin = std::min(min_margin, in.lhs(rate) - in.constant);
    }
    const auto target = target_povm(pr.m, pr.p_zw, n);
    self = std::max(self, faithfulness(kron_power(pr.rho.matrix(), n), target, target));
    std::vector<double> ks;
    for (int seed = 0; seed < 20; ++seed) {
      pp.seed = static_cast<std::uint64_t>(seed);
      const P2pInstance inst = build_instance(pp, pr.m, pr.rho);
      defect = std::max(defect, inst.stats.subpovm_defect);
      ks.push_back(p2p_error(inst, pr));
    }
    std::sort(ks.begin(), ks.end());
    medians.push_back(0.5 * (ks[9] + ks[10]));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < medians.size(); ++i) monotone = monotone && medians[i] <= medians[i - 1];
  const bool ok = defect <= 1e-9 && self == 0.0 && monotone && min_margin >= 0.5;
  return {ok, fmt("defect %.1e, K(target,target)=%g, margin %.3f, median K n=2..5: "
                  "%.4f %.4f %.4f %.4f",
                  defect, self, min_margin, medians[0], medians[1], medians[2], medians[3])};
}

struct Criterion {
  const char* key;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const std::vector<Criterion> criteria = {
      {"example1-entropies", 1.0, example1_entropies},
      {"example2-gain", 1.0, example2_gain},
      {"example1-identity-chain", 1.0, example1_chain},
      {"region-comparison", 10.0, region_comparison},
      {"fourier-motzkin-consistency", 10.0, fm_consistency},
      {"surface-symmetry", 60.0, surface_symmetry},
      {"pairwise-independence", 30.0, pairwise},
      {"covering-bound", 300.0, covering},
      {"pruning-inequalities", 120.0, pruning},
      {"separation-inequality", 10.0, separate},
      {"protocol-sanity", 600.0, protocol},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!filter.empty() && std::string(c.key).find(filter) == std::string::npos) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s %-28s %7.2fs/%gs  %s%s\n", pass ? "PASS" : "FAIL", c.key, dt,
                c.budget_s, o.detail.c_str(), in_time ? "" : " [over budget]");
    std::fflush(stdout);
  }
  return failed;
}

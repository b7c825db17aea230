#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "spovm/codes.hpp"
#include "spovm/errors.hpp"
#include "spovm/json_io.hpp"
#include "spovm/lab.hpp"
#include "spovm/protocol.hpp"
#include "spovm/rates.hpp"

namespace spovm::cli {
namespace {

void emit(const Common& c, const Json& j) { write_text(c.out, j.dump(2) + "\n"); }

std::string bundled(const std::string& dir, int id) {
  return (dir.empty() ? default_data_dir() : dir) + "/example" +
         std::to_string(id) + ".json";
}

// Rejects specs whose P(z|s,t) does not factor through f_S(s) + f_T(t).
bool check_problem(const Json& spec, const DistributedProblem& problem,
                   double tolerance, Json& diagnostics) {
  bool ok = true;
  if (spec.contains("m_ab")) {
    const SeparableReport sep = check_separable_decomposition(
        povm_from_json(spec["m_ab"]), problem.m_a, problem.m_b, problem.p_zst,
        tolerance);
    diagnostics["separable_residuals"] = sep.residuals;
    ok = ok && sep.pass;
  }
  const bool sum = check_sum_structure(problem.p_zst, problem.f_s, problem.f_t,
                                       problem.p, problem.p_zw);
  diagnostics["sum_structure"] = sum;
  return ok && sum;
}

void print_table(const std::vector<std::pair<std::string, std::pair<double, double>>>& rows) {
  std::fprintf(stderr, "%-14s %12s %12s %12s\n", "quantity", "expected",
               "computed", "diff");
  for (const auto& [name, v] : rows) {
    std::fprintf(stderr, "%-14s %12.4f %12.6f %12.2e\n", name.c_str(), v.first,
                 v.second, std::abs(v.first - v.second));
  }
}

std::string surface_csv(const std::vector<SurfaceRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "theta1,theta2,theta3,valid,gain_indicator\n";
  for (const auto& r : rows) {
    out << r.theta1 << ',' << r.theta2 << ',' << r.theta3 << ','
        << (r.valid ? 1 : 0) << ',';
    if (r.valid) out << r.gain; else out << "nan";
    out << '\n';
  }
  return out.str();
}

struct SurfaceSummary {
  int valid = 0;
  int negative = 0;
  double asymmetry = 0.0;
};

SurfaceSummary summarize(const std::vector<SurfaceRow>& rows, int points) {
  SurfaceSummary s;
  const auto at = [&](int i, int j, int k) -> const SurfaceRow& {
    return rows[(static_cast<std::size_t>(i) * points + j) * points + k];
  };
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      for (int k = 0; k < points; ++k) {
        const SurfaceRow& r = at(i, j, k);
        if (!r.valid) continue;
        ++s.valid;
        if (r.gain < 0.0) ++s.negative;
        const SurfaceRow& m = at(i, j, points - 1 - k);
        if (m.valid) s.asymmetry = std::max(s.asymmetry, std::abs(r.gain - m.gain));
      }
    }
  }
  return s;
}

Json params_json(const ProtocolParams& p) {
  return {{"n", p.n},     {"k", p.k},       {"l", p.l},         {"l1", p.l1},
          {"l2", p.l2},   {"p", p.p},       {"N", p.N},         {"N1", p.N1},
          {"N2", p.N2},   {"eta", p.eta},   {"delta", p.delta}, {"seed", p.seed}};
}

Json stats_json(const InstanceStats& s, std::size_t typical) {
  return {{"nonzero_bins", s.nonzero_bins},
          {"singleton_bins", s.singleton_bins},
          {"typical_words", typical},
          {"max_pruned_sigma", s.max_pruned_sigma}};
}

P2pProblem p2p_from_json(const Json& j) {
  return P2pProblem{DensityOperator(matrix_from_json(j.at("rho"))),
                    povm_from_json(j.at("m")),
                    stochastic_map_from_json(j.at("p_zw")), j.at("p").get<int>()};
}

}  // namespace

std::string default_data_dir() {
#ifdef SPOVM_DATA_DIR
  return SPOVM_DATA_DIR;
#else
  return "data";
#endif
}

int cmd_rates(const Common& c, const RatesOptions& o) {
  const Json spec = read_json_file(o.spec);
  const DistributedProblem problem = problem_from_json(spec);
  Json diagnostics;
  if (!check_problem(spec, problem, c.tolerance, diagnostics)) {
    std::cerr << "error: decomposition check failed\n" << diagnostics.dump(2) << '\n';
    return kBadInput;
  }
  const InfoQuantities q = distributed_quantities(problem);
  Rng rng(c.seed);
  const BaselineComparison cmp = compare_with_baseline(q, o.samples, rng);
  const LinearInequality base = unstructured_sum_constraint(q);
  Json out = {{"quantities", quantities_to_json(q)},
              {"region", region_to_json(distributed_region(q))},
              {"baseline", {{"coeffs", base.coeffs}, {"const", base.constant}}},
              {"gain_indicator", gain_indicator(q)},
              {"comparison",
               {{"structured_rhs", cmp.structured_rhs},
                {"baseline_rhs", cmp.baseline_rhs},
                {"gap", cmp.gap},
                {"structured_sum_min", cmp.structured_sum_min},
                {"sampled", cmp.sampled},
                {"witnesses", cmp.witnesses}}},
              {"checks", diagnostics}};
  if (cmp.witness) out["comparison"]["witness"] = *cmp.witness;
  std::fprintf(stderr, "%-28s %10s\n", "constraint", "rhs");
  std::fprintf(stderr, "%-28s %10.4f\n", "R1+R2+C1+C2 (structured)", cmp.structured_rhs);
  std::fprintf(stderr, "%-28s %10.4f\n", "R1+R2+C1+C2 (unstructured)", cmp.baseline_rhs);
  std::fprintf(stderr, "%-28s %10.4f\n", "2S(U+V) - S(U,V)", gain_indicator(q));
  emit(c, out);
  return kOk;
}

int cmd_example(const Common& c, const ExampleOptions& o) {
  if (o.id < 1 || o.id > 3) throw ArgumentError("example id must be 1, 2 or 3");
  if (o.id == 3) {
    SurfaceOptions s;
    s.spec = bundled(o.data_dir, 3);
    return cmd_surface(c, s);
  }
  const Json spec = read_json_file(bundled(o.data_dir, o.id));
  const DistributedProblem problem = problem_from_json(spec);
  Json diagnostics;
  if (!check_problem(spec, problem, c.tolerance, diagnostics)) {
    std::cerr << "error: bundled example failed its decomposition check\n";
    return kBadInput;
  }
  const InfoQuantities q = distributed_quantities(problem);
  const std::map<std::string, double> computed = {
      {"S_W", q.S_W},   {"S_U", q.S_U},     {"S_V", q.S_V},
      {"S_UV", q.S_UV}, {"I_U_V", q.I_U_V}, {"gain", gain_indicator(q)}};
  std::vector<std::pair<std::string, std::pair<double, double>>> rows;
  bool pass = true;
  Json table = Json::object();
  const Json expected_values = spec.value("expected", Json::object());
  for (const auto& [name, expected] : expected_values.items()) {
    const double got = computed.at(name);
    const double want = expected.get<double>();
    rows.push_back({name, {want, got}});
    const bool ok = std::abs(got - want) <= o.match;
    pass = pass && ok;
    table[name] = {{"expected", want}, {"computed", got}, {"pass", ok}};
  }
  print_table(rows);
  Rng rng(c.seed);
  const BaselineComparison cmp = compare_with_baseline(q, 10000, rng);
  emit(c, {{"example", o.id},
           {"table", table},
           {"quantities", quantities_to_json(q)},
           {"corner_gap", cmp.gap},
           {"pass", pass}});
  return pass ? kOk : kAssertionFailed;
}

int cmd_surface(const Common& c, const SurfaceOptions& o) {
  const Json spec = read_json_file(o.spec.empty() ? bundled("", 3) : o.spec);
  const DistributedProblem problem = problem_from_json(spec);
  int points = o.points;
  if (points == 0) points = spec.contains("surface") ? spec["surface"].value("points", 41) : 41;
  if (points < 2) throw ArgumentError("surface needs at least 2 points per axis");
  const auto grid = linear_grid(o.lo, o.hi, points);
  const auto rows = surface_scan(problem.rho_ab, grid, problem.p_zst, problem.p,
                                 problem.f_s, problem.f_t);
  const SurfaceSummary s = summarize(rows, points);
  write_text(c.out, surface_csv(rows));
  std::fprintf(stderr, "grid %d^3: %d valid, %d with negative gain, max theta3 asymmetry %.2e\n",
               points, s.valid, s.negative, s.asymmetry);
  return s.asymmetry <= c.tolerance ? kOk : kAssertionFailed;
}

int cmd_simulate(const Common& c, const SimulateOptions& o) {
  ProtocolParams pp;
  pp.n = o.n;
  pp.k = o.k;
  pp.l = o.l;
  pp.l1 = o.l1;
  pp.l2 = o.l2;
  pp.p = o.p;
  pp.N = o.N;
  pp.N1 = o.N1;
  pp.N2 = o.N2;
  pp.eta = o.eta;
  pp.delta = o.delta;
  pp.seed = c.seed;
  Json out;
  double defect = 0.0;
  if (o.mode == "p2p") {
    const P2pProblem problem =
        o.spec.empty() ? trine_problem() : p2p_from_json(read_json_file(o.spec));
    if (problem.p != pp.p) throw ArgumentError("--p does not match the problem field");
    const P2pInstance inst = build_instance(pp, problem.m, problem.rho);
    defect = inst.stats.subpovm_defect;
    out = {{"params", params_json(pp)},
           {"K", p2p_error(inst, problem)},
           {"subpovm_defect", defect},
           {"bins_stats", stats_json(inst.stats, inst.typical.size())},
           {"decoder_collisions", inst.stats.decoder_collisions}};
  } else if (o.mode == "distributed") {
    const DistributedProblem problem =
        problem_from_json(read_json_file(o.spec.empty() ? bundled("", 1) : o.spec));
    if (problem.p != pp.p) throw ArgumentError("--p does not match the problem field");
    const DistributedInstance inst =
        build_distributed_instance(pp, problem.m_a, problem.m_b, problem.rho_ab);
    defect = inst.stats.subpovm_defect;
    const double K = faithfulness(
        blocked_power(problem.rho_ab, pp.n),
        distributed_target(problem.m_a, problem.m_b, problem.p_zw, pp.p, pp.n),
        assemble_distributed(inst, problem.p_zw));
    out = {{"params", params_json(pp)},
           {"K", K},
           {"subpovm_defect", defect},
           {"bins_stats", stats_json(inst.stats, inst.typical_w.size())},
           {"decoder_collisions", inst.stats.decoder_collisions}};
  } else {
    throw ArgumentError("--mode must be p2p or distributed");
  }
  emit(c, out);
  return defect <= c.tolerance ? kOk : kAssertionFailed;
}

int cmd_covering(const Common& c, const CoveringOptions& o) {
  const CoveringInstance inst = qubit_covering_instance(o.bits, o.noise, c.seed);
  const auto hyp = check_covering_hypotheses(inst, c.tolerance);
  std::vector<SamplerKind> kinds;
  if (o.sampler == "iid" || o.sampler == "both") kinds.push_back(SamplerKind::Iid);
  if (o.sampler == "ucc" || o.sampler == "both") kinds.push_back(SamplerKind::Ucc);
  if (kinds.empty()) throw ArgumentError("--sampler must be iid, ucc or both");
  Json reports = Json::array();
  Json slopes = Json::object();
  bool pass = hyp.all_hold;
  for (SamplerKind kind : kinds) {
    std::vector<double> ms, means;
    for (std::int64_t M : o.M) {
      const auto r = covering_experiment(inst, {kind, 2, o.bits}, M, o.trials, c.seed);
      pass = pass && r.pass();
      reports.push_back(covering_report_to_json(r));
      ms.push_back(static_cast<double>(M));
      means.push_back(r.cut.empirical_mean);
    }
    if (ms.size() >= 2) {
      slopes[kind == SamplerKind::Iid ? "iid" : "ucc"] = loglog_slope(ms, means);
    }
  }
  Json hyps = Json::object();
  for (const auto& h : hyp.checks) hyps[h.name] = {{"violation", h.violation}, {"holds", h.holds}};
  emit(c, {{"instance",
            {{"epsilon", inst.epsilon}, {"d", inst.d}, {"D", inst.D},
             {"kappa", inst.kappa()}, {"alphabet", inst.size()}}},
           {"hypotheses", hyps},
           {"reports", reports},
           {"slope", slopes},
           {"trials", o.trials},
           {"seed", c.seed},
           {"pass", pass}});
  return pass ? kOk : kAssertionFailed;
}

int cmd_pruning(const Common& c, const PruningOptions& o) {
  const double scale = (1.0 - o.eta) / 2.0;
  const auto r = pruning_inequality_experiment(
      wishart_sampler(o.dim, o.rank, scale), o.trials, o.eta, c.seed,
      scale * Matrix::Identity(o.dim, o.dim));
  if (r.precondition_warning) std::cerr << "warning: sampler mean exceeds (1 - eta) I\n";
  emit(c, pruning_report_to_json(r));
  return r.pass() ? kOk : kAssertionFailed;
}

int cmd_ucc(const Common& c, const UccOptions& o) {
  if (!o.verify.empty()) {
    const UccCode code = code_from_json(read_json_file(o.verify));
    const auto mult = multiplicities(code);
    std::int64_t total = 0;
    for (const auto& [w, m] : mult) total += m;
    emit(c, {{"valid", true},
             {"distinct_words", mult.size()},
             {"codewords", total}});
    return kOk;
  }
  bool pass = true;
  Json out = Json::object();
  if (o.check_pairwise) {
    const auto r = pairwise_independence_check(o.p, o.n, o.k, o.l);
    pass = pass && r.pass;
    out["pairwise"] = pairwise_report_to_json(r);
  }
  if (o.witness > 0) {
    const auto w = dependence_witness(o.p, o.n, o.k, o.l, o.witness);
    pass = pass && w.fires();
    out["witness"] = witness_to_json(w);
  }
  if (!o.check_pairwise && o.witness == 0) {
    Json codes = Json::array();
    for (const auto& code : sample_ensemble({o.p, o.n, o.k, o.l, o.N, c.seed})) {
      codes.push_back(code_to_json(code));
    }
    out = o.N == 1 ? codes[0] : codes;
  }
  emit(c, out);
  return pass ? kOk : kAssertionFailed;
}

int cmd_fm(const Common& c, const FmOptions& o) {
  if (o.region.empty() == o.spec.empty()) {
    throw ArgumentError("give exactly one of --region or --spec");
  }
  std::optional<InfoQuantities> q;
  RateRegion region = [&] {
    if (!o.region.empty()) return region_from_json(read_json_file(o.region));
    q = distributed_quantities(problem_from_json(read_json_file(o.spec)));
    return r3_region(*q);
  }();
  for (const auto& v : o.eliminate) region = fourier_motzkin_eliminate(region, v);
  Json out = region_to_json(region);
  if (o.check > 0) {
    if (!q) throw ArgumentError("--check needs --spec");
    const RateRegion reference = distributed_region(*q);
    Rng rng(c.seed);
    int disagreements = 0;
    for (const auto& pt : sample_points(reference, o.check, rng)) {
      if (region_membership(region, pt) != region_membership(reference, pt)) {
        ++disagreements;
      }
    }
    std::fprintf(stderr, "%d disagreements on %d points\n", disagreements, o.check);
    emit(c, out);
    return disagreements == 0 ? kOk : kAssertionFailed;
  }
  emit(c, out);
  return kOk;
}

}  // namespace spovm::cli

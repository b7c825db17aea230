#include "spovm/json_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "spovm/errors.hpp"

namespace spovm {
namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ArgumentError(std::string("missing JSON field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("bad JSON for ") + what + ": " + e.what());
  }
}

Complex entry_from_json(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw ArgumentError("matrix entry must be [re, im] or a number");
}

std::vector<int> int_vector(const Json& j, const char* what) {
  return get_as<std::vector<int>>(j, what);
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ArgumentError("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ArgumentError("matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ArgumentError("matrix rows differ in length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entry_from_json(row[c]);
  }
  return m;
}

Json povm_to_json(const Povm& povm) {
  Json elems = Json::array();
  for (const Matrix& e : povm.elements()) elems.push_back(matrix_to_json(e));
  return {{"labels", povm.labels()}, {"elements", std::move(elems)}};
}

Povm povm_from_json(const Json& j) {
  const Json& elems = j.is_array() ? j : field(j, "elements");
  if (!elems.is_array() || elems.empty()) throw ArgumentError("POVM needs elements");
  std::vector<Matrix> ms;
  for (const Json& e : elems) ms.push_back(matrix_from_json(e));
  if (j.is_object() && j.contains("labels")) {
    return Povm(get_as<std::vector<std::string>>(j["labels"], "POVM labels"),
                std::move(ms));
  }
  return Povm(std::move(ms));
}

Json stochastic_map_to_json(const StochasticMap& map) {
  return {{"inputs", map.input_alphabets()},
          {"output", map.output_alphabet()},
          {"rows", map.rows()}};
}

StochasticMap stochastic_map_from_json(const Json& j) {
  return StochasticMap(
      int_vector(field(j, "inputs"), "stochastic map inputs"),
      get_as<int>(field(j, "output"), "stochastic map output"),
      get_as<std::vector<std::vector<double>>>(field(j, "rows"),
                                               "stochastic map rows"));
}

Json cq_state_to_json(const CqState& cq) {
  Json classical = Json::array();
  for (const auto& r : cq.classical()) {
    classical.push_back({{"name", r.name}, {"alphabet", r.alphabet}});
  }
  Json quantum = Json::array();
  for (const auto& r : cq.quantum()) {
    quantum.push_back({{"name", r.name}, {"dim", r.dim}});
  }
  Json blocks = Json::array();
  for (const auto& [label, m] : cq.blocks()) {
    blocks.push_back({{"label", label}, {"matrix", matrix_to_json(m)}});
  }
  return {{"classical", std::move(classical)},
          {"quantum", std::move(quantum)},
          {"blocks", std::move(blocks)}};
}

CqState cq_state_from_json(const Json& j) {
  std::vector<ClassicalRegister> classical;
  for (const Json& r : field(j, "classical")) {
    classical.push_back({get_as<std::string>(field(r, "name"), "register name"),
                         get_as<int>(field(r, "alphabet"), "alphabet")});
  }
  std::vector<QuantumRegister> quantum;
  for (const Json& r : field(j, "quantum")) {
    quantum.push_back({get_as<std::string>(field(r, "name"), "register name"),
                       get_as<int>(field(r, "dim"), "dim")});
  }
  std::map<Label, Matrix> blocks;
  for (const Json& b : field(j, "blocks")) {
    blocks.emplace(int_vector(field(b, "label"), "block label"),
                   matrix_from_json(field(b, "matrix")));
  }
  return CqState(std::move(classical), std::move(quantum), std::move(blocks));
}

Json code_to_json(const UccCode& code) {
  return {{"p", code.p}, {"n", code.n}, {"k", code.k},
          {"l", code.l}, {"G", code.G}, {"h", code.h}};
}

UccCode code_from_json(const Json& j) {
  UccCode code;
  code.p = get_as<int>(field(j, "p"), "p");
  code.n = get_as<int>(field(j, "n"), "n");
  code.k = get_as<int>(field(j, "k"), "k");
  code.l = get_as<int>(field(j, "l"), "l");
  code.G = get_as<std::vector<Word>>(field(j, "G"), "G");
  code.h = get_as<std::vector<Word>>(field(j, "h"), "h");
  code.validate();
  return code;
}

Json region_to_json(const RateRegion& region) {
  Json ineqs = Json::array();
  for (const auto& in : region.inequalities()) {
    ineqs.push_back({{"coeffs", in.coeffs}, {"const", in.constant}});
  }
  Json out = {{"variables", region.variables()}, {"inequalities", std::move(ineqs)}};
  if (region.infeasible()) out["infeasible"] = true;
  return out;
}

RateRegion region_from_json(const Json& j) {
  auto vars = get_as<std::vector<std::string>>(field(j, "variables"), "variables");
  std::vector<LinearInequality> ineqs;
  for (const Json& in : field(j, "inequalities")) {
    ineqs.push_back(make_inequality(
        get_as<std::map<std::string, double>>(field(in, "coeffs"), "coeffs"),
        get_as<double>(field(in, "const"), "const")));
  }
  const bool infeasible = j.value("infeasible", false);
  return RateRegion(std::move(vars), std::move(ineqs), infeasible);
}

DistributedProblem problem_from_json(const Json& j) {
  std::vector<int> dims = {2, 2};
  if (j.contains("dims")) dims = int_vector(j["dims"], "dims");
  if (dims.size() != 2) throw ArgumentError("rho_ab needs two register dims");
  return DistributedProblem{
      DensityOperator(matrix_from_json(field(j, "rho_ab")), dims),
      povm_from_json(field(j, "m_a")),
      povm_from_json(field(j, "m_b")),
      stochastic_map_from_json(field(j, "p_zst")),
      get_as<int>(field(j, "p"), "p"),
      int_vector(field(j, "f_s"), "f_s"),
      int_vector(field(j, "f_t"), "f_t"),
      stochastic_map_from_json(field(j, "p_zw")),
  };
}

Json problem_to_json(const DistributedProblem& problem) {
  return {{"rho_ab", matrix_to_json(problem.rho_ab.matrix())},
          {"dims", problem.rho_ab.register_dims()},
          {"m_a", povm_to_json(problem.m_a)},
          {"m_b", povm_to_json(problem.m_b)},
          {"p_zst", stochastic_map_to_json(problem.p_zst)},
          {"p", problem.p},
          {"f_s", problem.f_s},
          {"f_t", problem.f_t},
          {"p_zw", stochastic_map_to_json(problem.p_zw)}};
}

Json quantities_to_json(const InfoQuantities& q) { return Json(q.named()); }

Json covering_report_to_json(const CoveringReport& r) {
  auto stat = [](const StatSummary& s) {
    return Json{{"bound", s.bound},
                {"empirical_mean", s.empirical_mean},
                {"stderr", s.stderr_},
                {"pass", s.pass}};
  };
  Json out = stat(r.cut);
  out["M"] = r.M;
  out["trials"] = r.trials;
  out["seed"] = r.seed;
  out["sampler"] = r.sampler == SamplerKind::Iid ? "iid" : "ucc";
  out["raw"] = stat(r.raw);
  out["cut"] = stat(r.cut);
  out["cut_above_raw"] = r.cut_above_raw;
  out["pass"] = r.pass();
  return out;
}

Json pruning_report_to_json(const PruningReport& r) {
  return {{"bound", r.aggregate.bound},
          {"empirical_mean", r.aggregate.empirical_mean},
          {"stderr", r.aggregate.stderr_},
          {"trials", r.trials},
          {"seed", r.seed},
          {"eta", r.eta},
          {"trace_violations", r.trace_violations},
          {"indicator_violations", r.indicator_violations},
          {"mean_trace_x", r.mean_trace_x},
          {"prob_not_below", r.prob_not_below},
          {"precondition_warning", r.precondition_warning},
          {"pass", r.pass()}};
}

Json pairwise_report_to_json(const PairwiseReport& r) {
  return {{"pass", r.pass},
          {"codes_enumerated", r.codes_enumerated},
          {"pairs_checked", r.pairs_checked},
          {"max_marginal_deviation", r.max_marginal_deviation},
          {"max_pair_deviation", r.max_pair_deviation}};
}

Json witness_to_json(const DependenceWitness& w) {
  Json idx = Json::array();
  for (const auto& [a, i] : w.indices) idx.push_back({a, i});
  return {{"indices", std::move(idx)},
          {"coefficients", w.coefficients},
          {"relation_holds", w.relation_holds},
          {"joint_deviation", w.joint_deviation},
          {"codes_enumerated", w.codes_enumerated},
          {"fires", w.fires()}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ArgumentError("invalid JSON in " + path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  out << text;
}

}  // namespace spovm

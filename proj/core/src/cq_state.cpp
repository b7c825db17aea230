#include "spovm/cq_state.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spovm/errors.hpp"

namespace spovm {
namespace {

constexpr double kRowSumTolerance = 1e-12;

Matrix embed(const Matrix& op, int position, const std::vector<int>& dims) {
  std::vector<Matrix> factors;
  for (int r = 0; r < static_cast<int>(dims.size()); ++r) {
    factors.push_back(r == position ? op : Matrix::Identity(dims[r], dims[r]));
  }
  return kron_all(factors);
}

void require_two_registers(const DensityOperator& rho_ab) {
  if (rho_ab.register_dims().size() != 2) {
    throw DimensionError("expected a bipartite state with registers A,B");
  }
}

}  // namespace

StochasticMap::StochasticMap(std::vector<int> input_alphabets,
                             int output_alphabet,
                             std::vector<std::vector<double>> rows)
    : inputs_(std::move(input_alphabets)),
      output_(output_alphabet),
      rows_(std::move(rows)) {
  std::size_t expected = 1;
  for (int a : inputs_) {
    if (a <= 0) throw ArgumentError("stochastic map: empty input alphabet");
    expected *= static_cast<std::size_t>(a);
  }
  if (output_ <= 0) throw ArgumentError("stochastic map: empty output alphabet");
  if (rows_.size() != expected) {
    throw DimensionError("stochastic map: expected " +
                         std::to_string(expected) + " rows, got " +
                         std::to_string(rows_.size()));
  }
  for (const auto& row : rows_) {
    if (static_cast<int>(row.size()) != output_) {
      throw DimensionError("stochastic map: row length differs from output");
    }
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0 || v > 1.0) {
        throw ValidationError("stochastic map: entry outside [0,1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ValidationError("stochastic map: row sums to " +
                            std::to_string(sum));
    }
  }
}

StochasticMap StochasticMap::deterministic(
    std::vector<int> input_alphabets, int output_alphabet,
    const std::function<int(const Label&)>& f) {
  std::size_t total = 1;
  for (int a : input_alphabets) total *= static_cast<std::size_t>(a);
  std::vector<std::vector<double>> rows(
      total, std::vector<double>(output_alphabet, 0.0));
  Label x(input_alphabets.size(), 0);
  for (std::size_t r = 0; r < total; ++r) {
    rows[r].at(f(x)) = 1.0;
    for (int q = static_cast<int>(x.size()) - 1; q >= 0; --q) {
      if (++x[q] < input_alphabets[q]) break;
      x[q] = 0;
    }
  }
  return StochasticMap(std::move(input_alphabets), output_alphabet,
                       std::move(rows));
}

std::size_t StochasticMap::row_index(const Label& inputs) const {
  if (inputs.size() != inputs_.size()) {
    throw DimensionError("stochastic map: wrong number of inputs");
  }
  std::size_t idx = 0;
  for (std::size_t q = 0; q < inputs.size(); ++q) {
    if (inputs[q] < 0 || inputs[q] >= inputs_[q]) {
      throw ArgumentError("stochastic map: input out of range");
    }
    idx = idx * inputs_[q] + inputs[q];
  }
  return idx;
}

double StochasticMap::operator()(const Label& inputs, int z) const {
  if (z < 0 || z >= output_) throw ArgumentError("stochastic map: bad output");
  return rows_[row_index(inputs)][z];
}

CqState::CqState(std::vector<ClassicalRegister> classical,
                 std::vector<QuantumRegister> quantum,
                 std::map<Label, Matrix> blocks, double tolerance)
    : classical_(std::move(classical)),
      quantum_(std::move(quantum)),
      blocks_(std::move(blocks)),
      tolerance_(tolerance) {
  std::set<std::string> names;
  for (const auto& c : classical_) {
    if (!names.insert(c.name).second) {
      throw ArgumentError("duplicate register name " + c.name);
    }
  }
  for (const auto& q : quantum_) {
    if (!names.insert(q.name).second) {
      throw ArgumentError("duplicate register name " + q.name);
    }
  }
  const Eigen::Index dim = quantum_dim();
  double total = 0.0;
  for (const auto& [label, block] : blocks_) {
    if (label.size() != classical_.size()) {
      throw DimensionError("cq block label has wrong arity");
    }
    for (std::size_t q = 0; q < label.size(); ++q) {
      if (label[q] < 0 || label[q] >= classical_[q].alphabet) {
        throw ValidationError("cq label outside register alphabet");
      }
    }
    if (block.rows() != dim || block.cols() != dim) {
      throw DimensionError("cq block has wrong dimension");
    }
    if (min_eigenvalue(block) < -tolerance_) {
      throw ValidationError("cq block is not PSD");
    }
    total += block.trace().real();
  }
  if (std::abs(total - 1.0) > tolerance_) {
    throw ValidationError("cq state trace is " + std::to_string(total));
  }
}

Eigen::Index CqState::quantum_dim() const {
  Eigen::Index d = 1;
  for (const auto& q : quantum_) d *= q.dim;
  return d;
}

std::vector<int> CqState::quantum_dims() const {
  std::vector<int> dims;
  for (const auto& q : quantum_) dims.push_back(q.dim);
  return dims;
}

int CqState::classical_index(const std::string& name) const {
  for (std::size_t i = 0; i < classical_.size(); ++i) {
    if (classical_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int CqState::quantum_index(const std::string& name) const {
  for (std::size_t i = 0; i < quantum_.size(); ++i) {
    if (quantum_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::map<Label, double> CqState::classical_marginal(
    const std::vector<std::string>& names) const {
  std::vector<int> idx;
  for (const auto& n : names) {
    const int i = classical_index(n);
    if (i < 0) throw ArgumentError("unknown classical register " + n);
    idx.push_back(i);
  }
  std::map<Label, double> law;
  for (const auto& [label, block] : blocks_) {
    Label key;
    for (int i : idx) key.push_back(label[i]);
    law[key] += block.trace().real();
  }
  return law;
}

CqState measure_to_cq(const PureState& psi, const Povm& povm, int measured,
                      const std::vector<std::string>& quantum_names,
                      const std::string& outcome_name) {
  const auto& dims = psi.register_dims();
  if (quantum_names.size() != dims.size()) {
    throw ArgumentError("measure_to_cq: one name per register required");
  }
  if (measured < 0 || measured >= static_cast<int>(dims.size())) {
    throw DimensionError("measure_to_cq: measured register out of range");
  }
  if (povm.dim() != dims[measured]) {
    throw DimensionError("measure_to_cq: POVM dimension " +
                         std::to_string(povm.dim()) + " vs register " +
                         std::to_string(dims[measured]));
  }
  const Matrix rho = psi.density();
  const int traced[] = {measured};
  std::map<Label, Matrix> blocks;
  for (std::size_t x = 0; x < povm.size(); ++x) {
    const Matrix applied = embed(povm[x], measured, dims) * rho;
    blocks[{static_cast<int>(x)}] =
        hermitian_part(partial_trace(applied, dims, traced));
  }
  std::vector<QuantumRegister> quantum;
  for (std::size_t r = 0; r < dims.size(); ++r) {
    if (static_cast<int>(r) != measured) {
      quantum.push_back({quantum_names[r], dims[r]});
    }
  }
  return CqState({{outcome_name, static_cast<int>(povm.size())}},
                 std::move(quantum), std::move(blocks));
}

CqState build_sigma1(const DensityOperator& rho_ab, const Povm& m_a) {
  require_two_registers(rho_ab);
  return measure_to_cq(purify(rho_ab), m_a, 1, {"R", "A", "B"}, "S");
}

CqState build_sigma2(const DensityOperator& rho_ab, const Povm& m_b) {
  require_two_registers(rho_ab);
  return measure_to_cq(purify(rho_ab), m_b, 2, {"R", "A", "B"}, "T");
}

CqState build_sigma3(const DensityOperator& rho_ab, const Povm& m_a,
                     const Povm& m_b, const StochasticMap& p_zst) {
  require_two_registers(rho_ab);
  const auto& dims = rho_ab.register_dims();
  if (m_a.dim() != dims[0] || m_b.dim() != dims[1]) {
    throw DimensionError("build_sigma3: POVM dimensions do not match A,B");
  }
  const int ns = static_cast<int>(m_a.size());
  const int nt = static_cast<int>(m_b.size());
  if (p_zst.input_alphabets() != std::vector<int>{ns, nt}) {
    throw ArgumentError("build_sigma3: P(z|s,t) alphabets do not match POVMs");
  }
  const Matrix root = psd_sqrt(rho_ab.matrix());
  const int nz = p_zst.output_alphabet();
  std::map<Label, Matrix> blocks;
  for (int s = 0; s < ns; ++s) {
    for (int t = 0; t < nt; ++t) {
      const Matrix base =
          hermitian_part(root * kron(m_a[s], m_b[t]) * root);
      for (int z = 0; z < nz; ++z) {
        blocks[{s, t, z}] = base * p_zst({s, t}, z);
      }
    }
  }
  return CqState({{"S", ns}, {"T", nt}, {"Z", nz}},
                 {{"R", static_cast<int>(rho_ab.dim())}}, std::move(blocks));
}

CqState build_sigma_p2p(const DensityOperator& rho, const Povm& m,
                        const StochasticMap& p_zw) {
  if (m.dim() != rho.dim()) {
    throw DimensionError("build_sigma_p2p: POVM dimension mismatch");
  }
  const int nw = static_cast<int>(m.size());
  if (p_zw.input_alphabets() != std::vector<int>{nw}) {
    throw ArgumentError("build_sigma_p2p: P(z|w) alphabet does not match POVM");
  }
  const Matrix root = psd_sqrt(rho.matrix());
  const int nz = p_zw.output_alphabet();
  std::map<Label, Matrix> blocks;
  for (int w = 0; w < nw; ++w) {
    const Matrix base = hermitian_part(root * m[w] * root);
    for (int z = 0; z < nz; ++z) blocks[{w, z}] = base * p_zw({w}, z);
  }
  return CqState({{"W", nw}, {"Z", nz}}, {{"R", static_cast<int>(rho.dim())}},
                 std::move(blocks));
}

CqState relabel_classical(const CqState& cq, const std::string& reg,
                          const std::vector<int>& f, int new_alphabet,
                          const std::string& new_name) {
  const int idx = cq.classical_index(reg);
  if (idx < 0) throw ArgumentError("unknown classical register " + reg);
  if (static_cast<int>(f.size()) != cq.classical()[idx].alphabet) {
    throw ArgumentError("relabel map must cover the whole alphabet");
  }
  std::map<Label, Matrix> blocks;
  for (const auto& [label, block] : cq.blocks()) {
    Label key = label;
    key[idx] = f[label[idx]];
    if (key[idx] < 0 || key[idx] >= new_alphabet) {
      throw ArgumentError("relabel map leaves the new alphabet");
    }
    auto [it, fresh] = blocks.try_emplace(key, block);
    if (!fresh) it->second += block;
  }
  auto classical = cq.classical();
  classical[idx].alphabet = new_alphabet;
  if (!new_name.empty()) classical[idx].name = new_name;
  return CqState(std::move(classical), cq.quantum(), std::move(blocks),
                 cq.tolerance());
}

CqState derive_classical(const CqState& cq,
                         const std::vector<std::string>& inputs,
                         const std::string& name, int alphabet,
                         const std::function<int(const Label&)>& f) {
  std::vector<int> idx;
  for (const auto& n : inputs) {
    const int i = cq.classical_index(n);
    if (i < 0) throw ArgumentError("unknown classical register " + n);
    idx.push_back(i);
  }
  std::map<Label, Matrix> blocks;
  for (const auto& [label, block] : cq.blocks()) {
    Label args;
    for (int i : idx) args.push_back(label[i]);
    Label key = label;
    key.push_back(f(args));
    blocks.emplace(std::move(key), block);
  }
  auto classical = cq.classical();
  classical.push_back({name, alphabet});
  return CqState(std::move(classical), cq.quantum(), std::move(blocks),
                 cq.tolerance());
}

double entropy_of(const CqState& cq, const std::vector<std::string>& names) {
  std::vector<int> cidx;
  std::vector<int> keep_q;
  for (const auto& n : names) {
    if (int c = cq.classical_index(n); c >= 0) {
      cidx.push_back(c);
    } else if (int q = cq.quantum_index(n); q >= 0) {
      keep_q.push_back(q);
    } else {
      throw ArgumentError("unknown register " + n);
    }
  }
  std::sort(keep_q.begin(), keep_q.end());
  keep_q.erase(std::unique(keep_q.begin(), keep_q.end()), keep_q.end());
  const std::vector<int> dims = cq.quantum_dims();

  if (keep_q.empty()) {
    std::map<Label, double> law;
    for (const auto& [label, block] : cq.blocks()) {
      Label key;
      for (int i : cidx) key.push_back(label[i]);
      law[key] += block.trace().real();
    }
    std::vector<double> weights;
    for (const auto& [key, w] : law) weights.push_back(w);
    return shannon_bits(weights);
  }

  std::map<Label, Matrix> grouped;
  for (const auto& [label, block] : cq.blocks()) {
    Label key;
    for (int i : cidx) key.push_back(label[i]);
    auto [it, fresh] = grouped.try_emplace(key, block);
    if (!fresh) it->second += block;
  }
  std::vector<int> traced;
  for (int q = 0; q < static_cast<int>(dims.size()); ++q) {
    if (!std::binary_search(keep_q.begin(), keep_q.end(), q)) {
      traced.push_back(q);
    }
  }
  // Selected quantum registers keep their declared order; names given out of
  // order select the same subsystem.
  double h = 0.0;
  for (const auto& [key, block] : grouped) {
    h += traced.empty() ? entropy_bits(block)
                        : entropy_bits(partial_trace(block, dims, traced));
  }
  return h;
}

double cq_mutual_information(const CqState& cq,
                             const std::vector<std::string>& part1,
                             const std::vector<std::string>& part2) {
  for (const auto& a : part1) {
    if (std::find(part2.begin(), part2.end(), a) != part2.end()) {
      throw ArgumentError("mutual information parts overlap at " + a);
    }
  }
  std::vector<std::string> joint = part1;
  joint.insert(joint.end(), part2.begin(), part2.end());
  return entropy_of(cq, part1) + entropy_of(cq, part2) - entropy_of(cq, joint);
}

}  // namespace spovm

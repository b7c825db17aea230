#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "spovm/linalg.hpp"

namespace spovm {

struct ClassicalRegister {
  std::string name;
  int alphabet = 1;
};

struct QuantumRegister {
  std::string name;
  int dim = 1;
};

using Label = std::vector<int>;

/// Conditional distribution P(z | x_1, ..., x_m). Rows are indexed by the
/// inputs in row-major order (last input fastest).
class StochasticMap {
 public:
  StochasticMap(std::vector<int> input_alphabets, int output_alphabet,
                std::vector<std::vector<double>> rows);

  /// Deterministic map given as a function of the input tuple.
  static StochasticMap deterministic(std::vector<int> input_alphabets,
                                     int output_alphabet,
                                     const std::function<int(const Label&)>& f);

  const std::vector<int>& input_alphabets() const { return inputs_; }
  int output_alphabet() const { return output_; }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  std::size_t row_index(const Label& inputs) const;
  double operator()(const Label& inputs, int z) const;

 private:
  std::vector<int> inputs_;
  int output_;
  std::vector<std::vector<double>> rows_;
};

/// Classical-quantum state: sum over label tuples x of |x><x| (x) block(x).
/// Blocks act on the tensor product of the quantum registers in order.
class CqState {
 public:
  CqState(std::vector<ClassicalRegister> classical,
          std::vector<QuantumRegister> quantum, std::map<Label, Matrix> blocks,
          double tolerance = kDefaultTolerance);

  const std::vector<ClassicalRegister>& classical() const { return classical_; }
  const std::vector<QuantumRegister>& quantum() const { return quantum_; }
  const std::map<Label, Matrix>& blocks() const { return blocks_; }
  Eigen::Index quantum_dim() const;
  std::vector<int> quantum_dims() const;
  double tolerance() const { return tolerance_; }

  /// Index of a classical register by name, or -1.
  int classical_index(const std::string& name) const;
  /// Index of a quantum register by name, or -1.
  int quantum_index(const std::string& name) const;

  /// Marginal law of the listed classical registers.
  std::map<Label, double> classical_marginal(
      const std::vector<std::string>& names) const;

 private:
  std::vector<ClassicalRegister> classical_;
  std::vector<QuantumRegister> quantum_;
  std::map<Label, Matrix> blocks_;
  double tolerance_;
};

/// Measures register `measured` of psi with `povm`. The measured register is
/// consumed and replaced by a classical register named `outcome_name`;
/// `quantum_names` names the registers of psi in order.
CqState measure_to_cq(const PureState& psi, const Povm& povm, int measured,
                      const std::vector<std::string>& quantum_names,
                      const std::string& outcome_name);

/// Purifies rho_ab (registers A,B) and measures A: registers S | R, B.
CqState build_sigma1(const DensityOperator& rho_ab, const Povm& m_a);
/// Purifies rho_ab and measures B: registers T | R, A.
CqState build_sigma2(const DensityOperator& rho_ab, const Povm& m_b);

/// Blocks sqrt(rho)(L_s (x) L_t)sqrt(rho) P(z|s,t) keyed (s,t,z); quantum
/// register R spans the full AB space.
CqState build_sigma3(const DensityOperator& rho_ab, const Povm& m_a,
                     const Povm& m_b, const StochasticMap& p_zst);

/// Blocks sqrt(rho) L_w sqrt(rho) P(z|w) keyed (w,z) with quantum register R.
CqState build_sigma_p2p(const DensityOperator& rho, const Povm& m,
                        const StochasticMap& p_zw);

/// Replaces the values of `reg` by f[value]; blocks with equal images merge.
/// The register is renamed to `new_name` if given and takes alphabet
/// `new_alphabet`.
CqState relabel_classical(const CqState& cq, const std::string& reg,
                          const std::vector<int>& f, int new_alphabet,
                          const std::string& new_name = "");

/// Appends a classical register `name` whose value is a deterministic
/// function of the registers `inputs`.
CqState derive_classical(const CqState& cq,
                         const std::vector<std::string>& inputs,
                         const std::string& name, int alphabet,
                         const std::function<int(const Label&)>& f);

/// Entropy in bits of the reduced state on the named registers (classical
/// and quantum names may be mixed). Empty selection gives 0.
double entropy_of(const CqState& cq, const std::vector<std::string>& names);

/// I(part1; part2). Throws ArgumentError when the parts overlap.
double cq_mutual_information(const CqState& cq,
                             const std::vector<std::string>& part1,
                             const std::vector<std::string>& part2);

}  // namespace spovm

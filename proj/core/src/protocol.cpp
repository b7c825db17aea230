#include "spovm/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "spovm/errors.hpp"
#include "spovm/rng.hpp"

namespace spovm {
namespace {

struct Spectrum {
  std::vector<double> values;
  Matrix vectors;
};

// Eigenvalues below the relative support cutoff are reported as exact zeros.
Spectrum spectrum(const Matrix& a) {
  const HermitianEig eig = hermitian_eig(a);
  const double top = std::max(0.0, eig.values.maxCoeff());
  Spectrum s{std::vector<double>(eig.values.size()), eig.vectors};
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double v = eig.values[i];
    s.values[i] = v > kSupportCutoff * top ? v : 0.0;
  }
  return s;
}

void require_cap(std::int64_t alphabet, int n) {
  if (n < 1) throw ArgumentError("block length must be positive");
  const double count = std::pow(static_cast<double>(alphabet), n);
  if (count > static_cast<double>(kSequenceCap)) {
    throw SizeError(std::to_string(alphabet) + "^" + std::to_string(n) +
                    " sequences exceed the enumeration cap");
  }
}

Vector product_vector(const Matrix& vectors, const Word& idx) {
  Vector v = Vector::Ones(1);
  for (int j : idx) {
    Vector next(v.size() * vectors.rows());
    for (Eigen::Index a = 0; a < v.size(); ++a) {
      next.segment(a * vectors.rows(), vectors.rows()) = v[a] * vectors.col(j);
    }
    v = std::move(next);
  }
  return v;
}

std::vector<double> padded(std::vector<double> weights, int p) {
  if (static_cast<int>(weights.size()) > p) {
    throw ArgumentError("POVM has more outcomes than field elements");
  }
  weights.resize(p, 0.0);
  return weights;
}

double sequence_probability(const std::vector<double>& dist, const Word& w) {
  double pr = 1.0;
  for (int x : w) pr *= dist[x];
  return pr;
}

// Cuts, pseudo-inverts and rescales the typical post-states of one side.
std::map<std::int64_t, Matrix> abar_table(const CanonicalEnsemble& ens,
                                          const Matrix& rho,
                                          const Matrix& pi_rho,
                                          const TypicalSet& typical,
                                          const std::vector<double>& lambda,
                                          int p, int k, int l, int n,
                                          double eta) {
  const Matrix inv_root = kron_power(psd_pinv_sqrt(rho), n);
  const double scale = std::pow(static_cast<double>(p), n - k - l) / (1.0 + eta);
  std::map<std::int64_t, Matrix> table;
  for (const auto& w : typical.members) {
    const double alpha = scale * sequence_probability(lambda, w);
    const Matrix cut = cut_post_state(ens, pi_rho, typical, w);
    table.emplace(to_index(w, p),
                  hermitian_part(alpha * inv_root * cut * inv_root));
  }
  return table;
}

EncoderRealization realize(const UccCode& code,
                           const std::map<std::int64_t, Matrix>& abar,
                           const Matrix& pi_rho) {
  const Eigen::Index dim = pi_rho.rows();
  EncoderRealization r;
  r.code = code;
  std::map<std::int64_t, std::int64_t> gamma_w;
  const std::vector<Word> shifts = code.h;
  for (std::int64_t b = 0; b < code.num_bins(); ++b) {
    for (const Word& cw : coset_code(code.p, code.G, shifts[b])) {
      const std::int64_t w = to_index(cw, code.p);
      if (abar.count(w) == 0) continue;
      ++gamma_w[w];
      r.bin_members[b].push_back(w);
    }
  }
  r.sigma = Matrix::Zero(dim, dim);
  for (const auto& [w, g] : gamma_w) {
    r.sigma += static_cast<double>(g) * abar.at(w);
  }
  const Matrix basis = support_basis(pi_rho, 0.5);
  const Matrix restricted = basis.adjoint() * r.sigma * basis;
  r.pruning = hermitian_part(basis * pruning_projector(restricted) *
                             basis.adjoint());

  r.gamma_sum = Matrix::Zero(dim, dim);
  for (const auto& [w, g] : gamma_w) {
    const auto& a = r.pruned
                        .emplace(w, hermitian_part(r.pruning * abar.at(w) *
                                                   r.pruning))
                        .first->second;
    r.gamma_sum += static_cast<double>(g) * a;
  }
  r.gamma0 = hermitian_part(Matrix::Identity(dim, dim) - r.gamma_sum);
  return r;
}

void accumulate_stats(InstanceStats& stats, const EncoderRealization& r) {
  for (const auto& [b, ws] : r.bin_members) {
    ++stats.nonzero_bins;
    if (ws.size() == 1) ++stats.singleton_bins;
    if (ws.size() > 1) ++stats.decoder_collisions;
  }
  stats.subpovm_defect =
      std::max(stats.subpovm_defect, std::max(0.0, -min_eigenvalue(r.gamma0)));
  stats.max_pruned_sigma =
      std::max(stats.max_pruned_sigma,
               max_eigenvalue(r.pruning * r.sigma * r.pruning));
}

Word smallest_outside(const TypicalSet& typical, int p, int n) {
  const std::int64_t total = ipow(p, n);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    if (typical.index.count(idx) == 0) return to_word(idx, p, n);
  }
  return {};
}

// Row P^n(. | w) over Z^n; uniform for the empty sentinel word.
std::vector<double> output_law(const StochasticMap& p_zw, const Word& w, int n) {
  const int nz = p_zw.output_alphabet();
  const std::int64_t total = ipow(nz, n);
  std::vector<double> law(total);
  if (w.empty()) {
    std::fill(law.begin(), law.end(), 1.0 / static_cast<double>(total));
    return law;
  }
  for (std::int64_t zi = 0; zi < total; ++zi) {
    const Word z = to_word(zi, nz, n);
    double pr = 1.0;
    for (int t = 0; t < n && pr > 0.0; ++t) pr *= p_zw({w[t]}, z[t]);
    law[zi] = pr;
  }
  return law;
}

void add_weighted(std::vector<Matrix>& out, const Matrix& op,
                  const std::vector<double>& law, double scale) {
  for (std::size_t z = 0; z < law.size(); ++z) {
    if (law[z] != 0.0) out[z] += (scale * law[z]) * op;
  }
}

std::vector<UccCode> codes_with_shared_g(const std::vector<Word>& G, int p,
                                         int n, int k, int l, int count,
                                         std::uint64_t seed) {
  std::vector<UccCode> codes =
      sample_ensemble({p, n, k, l, count, seed});
  for (auto& c : codes) c.G = G;
  return codes;
}

}  // namespace

Matrix EncoderRealization::gamma(std::int64_t b) const {
  Matrix g = Matrix::Zero(gamma0.rows(), gamma0.cols());
  const auto it = bin_members.find(b);
  if (it == bin_members.end()) return g;
  for (std::int64_t w : it->second) g += pruned.at(w);
  return g;
}

CanonicalEnsemble canonical_ensemble(const Povm& m, const DensityOperator& rho) {
  if (m.dim() != rho.dim()) {
    throw DimensionError("canonical_ensemble: POVM and state dimensions differ");
  }
  const Matrix root = psd_sqrt(rho.matrix());
  CanonicalEnsemble ens;
  for (const auto& e : m.elements()) {
    const Matrix cut = hermitian_part(root * e * root);
    const double w = std::max(0.0, cut.trace().real());
    ens.weights.push_back(w);
    ens.post_states.push_back(w > 0.0 ? Matrix(cut / w)
                                      : Matrix::Zero(rho.dim(), rho.dim()));
  }
  return ens;
}

bool TypicalSet::contains(const Word& w) const {
  if (static_cast<int>(w.size()) != n) return false;
  return index.count(to_index(w, static_cast<int>(distribution.size()))) > 0;
}

double TypicalSet::probability() const {
  double total = 0.0;
  for (const auto& w : members) total += sequence_probability(distribution, w);
  return total;
}

bool is_strongly_typical(const Word& w, const std::vector<double>& dist,
                         double delta) {
  if (w.empty()) return true;
  std::vector<int> counts(dist.size(), 0);
  for (int x : w) {
    if (x < 0 || x >= static_cast<int>(dist.size())) return false;
    ++counts[x];
  }
  const double n = static_cast<double>(w.size());
  for (std::size_t x = 0; x < dist.size(); ++x) {
    const double freq = counts[x] / n;
    if (dist[x] <= 0.0) {
      if (counts[x] > 0) return false;
    } else if (std::abs(freq - dist[x]) > delta * dist[x] + 1e-12) {
      return false;
    }
  }
  return true;
}

TypicalSet typical_set(const std::vector<double>& dist, int n, double delta) {
  const int a = static_cast<int>(dist.size());
  require_cap(a, n);
  TypicalSet t{dist, n, delta, {}, {}};
  const std::int64_t total = ipow(a, n);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    Word w = to_word(idx, a, n);
    if (is_strongly_typical(w, dist, delta)) {
      t.members.push_back(std::move(w));
      t.index.insert(idx);
    }
  }
  return t;
}

Matrix typical_projector(const Matrix& rho, int n, double delta) {
  const Spectrum s = spectrum(rho);
  const int d = static_cast<int>(s.values.size());
  require_cap(d, n);
  const double entropy = shannon_bits(s.values);
  const std::int64_t total = ipow(d, n);
  const Eigen::Index big = static_cast<Eigen::Index>(total);
  Matrix pi = Matrix::Zero(big, big);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const Word j = to_word(idx, d, n);
    double log_q = 0.0;
    bool support = true;
    for (int x : j) {
      if (s.values[x] <= 0.0) {
        support = false;
        break;
      }
      log_q += std::log2(s.values[x]);
    }
    if (!support) continue;
    // Relative slack absorbs rounding in sums of logs of equal eigenvalues.
    if (std::abs(-log_q / n - entropy) <= delta + 1e-12) {
      const Vector v = product_vector(s.vectors, j);
      pi.noalias() += v * v.adjoint();
    }
  }
  return pi;
}

Matrix cond_typical_projector(const CanonicalEnsemble& ens, const Word& w_seq,
                              double delta) {
  const int n = static_cast<int>(w_seq.size());
  const int d = static_cast<int>(ens.dim());
  require_cap(d, n);
  std::vector<Spectrum> spectra;
  for (const auto& st : ens.post_states) spectra.push_back(spectrum(st));
  const std::int64_t total = ipow(d, n);
  const Eigen::Index big = static_cast<Eigen::Index>(total);
  Matrix pi = Matrix::Zero(big, big);
  for (int w : w_seq) {
    if (w < 0 || w >= static_cast<int>(ens.weights.size()) ||
        ens.weights[w] <= 0.0) {
      return pi;
    }
  }
  std::vector<std::vector<int>> positions(ens.weights.size());
  for (int t = 0; t < n; ++t) positions[w_seq[t]].push_back(t);

  for (std::int64_t idx = 0; idx < total; ++idx) {
    const Word j = to_word(idx, d, n);
    bool typical = true;
    for (std::size_t w = 0; w < positions.size() && typical; ++w) {
      if (positions[w].empty()) continue;
      Word sub;
      for (int t : positions[w]) sub.push_back(j[t]);
      typical = is_strongly_typical(sub, spectra[w].values, delta);
    }
    if (!typical) continue;
    Vector v = Vector::Ones(1);
    for (int t = 0; t < n; ++t) {
      const Vector& col = spectra[w_seq[t]].vectors.col(j[t]);
      Vector next(v.size() * d);
      for (Eigen::Index a = 0; a < v.size(); ++a) {
        next.segment(a * d, d) = v[a] * col;
      }
      v = std::move(next);
    }
    pi.noalias() += v * v.adjoint();
  }
  return pi;
}

Matrix product_post_state(const CanonicalEnsemble& ens, const Word& w_seq) {
  Matrix out = Matrix::Identity(1, 1);
  for (int w : w_seq) out = kron(out, ens.post_states.at(w));
  return out;
}

Matrix cut_post_state(const CanonicalEnsemble& ens, const Matrix& pi_rho,
                      const TypicalSet& typical, const Word& w_seq) {
  const Eigen::Index big = pi_rho.rows();
  if (!typical.contains(w_seq)) return Matrix::Zero(big, big);
  const Matrix pi_w = cond_typical_projector(ens, w_seq, typical.delta);
  const Matrix outer = pi_rho * pi_w;
  return hermitian_part(outer * product_post_state(ens, w_seq) *
                        outer.adjoint());
}

void ProtocolParams::validate(bool distributed) const {
  PrimeField field(p);
  if (n < 1) throw ArgumentError("n must be positive");
  if (k < 0 || l < 0 || l1 < 0 || l2 < 0) {
    throw ArgumentError("k and l must be nonnegative");
  }
  if (!(eta > 0.0 && eta < 1.0)) throw ArgumentError("eta must lie in (0,1)");
  if (!(delta > 0.0)) throw ArgumentError("delta must be positive");
  if (distributed) {
    if (N1 < 1 || N2 < 1) throw ArgumentError("N1, N2 must be >= 1");
  } else if (N < 1) {
    throw ArgumentError("N must be >= 1");
  }
  require_cap(p, n);
  const int lmax = distributed ? std::max(l1, l2) : l;
  if (std::pow(static_cast<double>(p), k + lmax) >
      static_cast<double>(kSequenceCap)) {
    throw SizeError("p^(k+l) exceeds the enumeration cap");
  }
}

P2pInstance build_instance(const ProtocolParams& params, const Povm& m,
                           const DensityOperator& rho) {
  params.validate(false);
  require_cap(rho.dim(), params.n);
  const int p = params.p;
  const int n = params.n;
  P2pInstance inst;
  inst.params = params;
  inst.ensemble = canonical_ensemble(m, rho);
  const std::vector<double> lambda = padded(inst.ensemble.weights, p);
  inst.typical = typical_set(lambda, n, params.delta);
  inst.pi_rho = typical_projector(rho.matrix(), n, params.delta);
  inst.abar = abar_table(inst.ensemble, rho.matrix(), inst.pi_rho, inst.typical,
                         lambda, p, params.k, params.l, n, params.eta);
  inst.w0 = smallest_outside(inst.typical, p, n);

  const auto codes =
      sample_ensemble({p, n, params.k, params.l, params.N, params.seed});
  for (const auto& code : codes) {
    EncoderRealization r = realize(code, inst.abar, inst.pi_rho);
    std::vector<std::int64_t> dec(code.num_bins(), -1);
    for (const auto& [b, ws] : r.bin_members) {
      if (ws.size() == 1) dec[b] = ws.front();
    }
    accumulate_stats(inst.stats, r);
    inst.decoder.push_back(std::move(dec));
    inst.realizations.push_back(std::move(r));
  }
  return inst;
}

std::optional<Word> decode_p2p(const P2pInstance& inst, int mu,
                               std::int64_t i) {
  if (mu < 0 || mu >= static_cast<int>(inst.decoder.size())) {
    throw ArgumentError("decode_p2p: mu out of range");
  }
  const auto& dec = inst.decoder[mu];
  if (i < 0 || i > static_cast<std::int64_t>(dec.size())) {
    throw ArgumentError("decode_p2p: bin index out of range");
  }
  if (i == 0 || dec[i - 1] < 0) return std::nullopt;
  return to_word(dec[i - 1], inst.params.p, inst.params.n);
}

std::vector<Matrix> assemble_overall(const P2pInstance& inst,
                                     const StochasticMap& p_zw) {
  const int p = inst.params.p;
  const int n = inst.params.n;
  if (p_zw.input_alphabets() != std::vector<int>{p}) {
    throw ArgumentError("assemble_overall: P(z|w) must take inputs in F_p");
  }
  const Eigen::Index dim = inst.pi_rho.rows();
  const std::int64_t outcomes = ipow(p_zw.output_alphabet(), n);
  std::vector<Matrix> out(outcomes, Matrix::Zero(dim, dim));
  const double scale = 1.0 / static_cast<double>(inst.realizations.size());
  const std::vector<double> w0_law = output_law(p_zw, inst.w0, n);
  std::map<std::int64_t, std::vector<double>> laws;
  for (std::size_t mu = 0; mu < inst.realizations.size(); ++mu) {
    const auto& r = inst.realizations[mu];
    // Operators sent to each decoded word; -1 collects everything mapped to w0.
    std::map<std::int64_t, Matrix> by_word;
    by_word.emplace(-1, r.gamma0);
    for (const auto& [b, ws] : r.bin_members) {
      const std::int64_t w = inst.decoder[mu][b];
      auto it = by_word.try_emplace(w, Matrix::Zero(dim, dim)).first;
      for (std::int64_t member : ws) it->second += r.pruned.at(member);
    }
    for (const auto& [w, op] : by_word) {
      if (w < 0) {
        add_weighted(out, op, w0_law, scale);
        continue;
      }
      auto it = laws.find(w);
      if (it == laws.end()) {
        it = laws.emplace(w, output_law(p_zw, to_word(w, p, n), n)).first;
      }
      add_weighted(out, op, it->second, scale);
    }
  }
  for (auto& e : out) e = hermitian_part(e);
  return out;
}

std::vector<Matrix> target_povm(const Povm& m, const StochasticMap& p_zw,
                                int n) {
  if (p_zw.input_alphabets().size() != 1 ||
      p_zw.input_alphabets()[0] < static_cast<int>(m.size())) {
    throw ArgumentError("target_povm: P(z|w) does not cover the POVM outcomes");
  }
  const int nz = p_zw.output_alphabet();
  std::vector<Matrix> letter(nz, Matrix::Zero(m.dim(), m.dim()));
  for (int z = 0; z < nz; ++z) {
    for (std::size_t w = 0; w < m.size(); ++w) {
      letter[z] += p_zw({static_cast<int>(w)}, z) * m[w];
    }
  }
  require_cap(nz, n);
  const std::int64_t total = ipow(nz, n);
  std::vector<Matrix> out;
  out.reserve(total);
  for (std::int64_t zi = 0; zi < total; ++zi) {
    Matrix e = Matrix::Identity(1, 1);
    for (int z : to_word(zi, nz, n)) e = kron(e, letter[z]);
    out.push_back(std::move(e));
  }
  return out;
}

double faithfulness(const Matrix& rho_n, const std::vector<Matrix>& target,
                    const std::vector<Matrix>& candidate) {
  if (target.size() != candidate.size()) {
    throw ArgumentError("faithfulness: outcome sets differ in size");
  }
  const Matrix root = psd_sqrt(rho_n);
  double k = 0.0;
  Matrix missing = Matrix::Zero(rho_n.rows(), rho_n.cols());
  for (std::size_t x = 0; x < target.size(); ++x) {
    if (target[x].rows() != rho_n.rows() || candidate[x].rows() != rho_n.rows()) {
      throw DimensionError("faithfulness: operator dimension mismatch");
    }
    const Matrix diff = target[x] - candidate[x];
    k += trace_norm(hermitian_part(root * diff * root));
    missing += diff;
  }
  // Tr((I - sum_x candidate_x) rho) for a complete target, written so that
  // identical inputs give exactly zero.
  return k + std::max(0.0, (missing * rho_n).trace().real());
}

DistributedInstance build_distributed_instance(const ProtocolParams& params,
                                               const Povm& m_a, const Povm& m_b,
                                               const DensityOperator& rho_ab) {
  params.validate(true);
  const auto& dims = rho_ab.register_dims();
  if (dims.size() != 2) {
    throw DimensionError("distributed instance needs registers (A, B)");
  }
  if (m_a.dim() != dims[0] || m_b.dim() != dims[1]) {
    throw DimensionError("distributed instance: POVM dimensions differ");
  }
  require_cap(rho_ab.dim(), params.n);
  const int p = params.p;
  const int n = params.n;
  const PrimeField field(p);
  const int only_a[] = {0};
  const int only_b[] = {1};
  const DensityOperator rho_a(partial_trace(rho_ab.matrix(), dims, only_b));
  const DensityOperator rho_b(partial_trace(rho_ab.matrix(), dims, only_a));

  DistributedInstance inst;
  inst.params = params;
  inst.ensemble_a = canonical_ensemble(m_a, rho_a);
  inst.ensemble_b = canonical_ensemble(m_b, rho_b);
  const auto lambda_a = padded(inst.ensemble_a.weights, p);
  const auto lambda_b = padded(inst.ensemble_b.weights, p);
  inst.typical_u = typical_set(lambda_a, n, params.delta);
  inst.typical_v = typical_set(lambda_b, n, params.delta);

  std::vector<double> law_w(p, 0.0);
  for (std::size_t u = 0; u < m_a.size(); ++u) {
    for (std::size_t v = 0; v < m_b.size(); ++v) {
      const double pr =
          std::max(0.0, (rho_ab.matrix() * kron(m_a[u], m_b[v])).trace().real());
      law_w[field.add(static_cast<int>(u), static_cast<int>(v))] += pr;
    }
  }
  inst.typical_w = typical_set(law_w, n, p * params.delta);
  inst.w0 = smallest_outside(inst.typical_w, p, n);

  inst.pi_a = typical_projector(rho_a.matrix(), n, params.delta);
  inst.pi_b = typical_projector(rho_b.matrix(), n, params.delta);
  const auto abar_a = abar_table(inst.ensemble_a, rho_a.matrix(), inst.pi_a,
                                 inst.typical_u, lambda_a, p, params.k,
                                 params.l1, n, params.eta);
  const auto abar_b = abar_table(inst.ensemble_b, rho_b.matrix(), inst.pi_b,
                                 inst.typical_v, lambda_b, p, params.k,
                                 params.l2, n, params.eta);

  const auto g_source = sample_ensemble({p, n, params.k, 0, 1, params.seed});
  const std::vector<Word>& G = g_source.front().G;
  for (const auto& code :
       codes_with_shared_g(G, p, n, params.k, params.l1, params.N1,
                           Rng::derive(params.seed, 1))) {
    inst.side_a.push_back(realize(code, abar_a, inst.pi_a));
    accumulate_stats(inst.stats, inst.side_a.back());
  }
  for (const auto& code :
       codes_with_shared_g(G, p, n, params.k, params.l2, params.N2,
                           Rng::derive(params.seed, 2))) {
    inst.side_b.push_back(realize(code, abar_b, inst.pi_b));
    accumulate_stats(inst.stats, inst.side_b.back());
  }
  // Joint decoding collisions are counted separately from the per-side ones.
  inst.stats.decoder_collisions = 0;
  for (int mu1 = 0; mu1 < params.N1; ++mu1) {
    for (int mu2 = 0; mu2 < params.N2; ++mu2) {
      for (const auto& [i, wa] : inst.side_a[mu1].bin_members) {
        for (const auto& [j, wb] : inst.side_b[mu2].bin_members) {
          const UccCode& ca = inst.side_a[mu1].code;
          const UccCode& cb = inst.side_b[mu2].code;
          int hits = 0;
          for (std::int64_t a = 0; a < ca.num_messages(); ++a) {
            Word w = ucc_codeword(ca, a, i);
            for (int t = 0; t < n; ++t) w[t] = field.add(w[t], cb.h[j][t]);
            if (inst.typical_w.contains(w)) ++hits;
          }
          if (hits > 1) ++inst.stats.decoder_collisions;
        }
      }
    }
  }
  return inst;
}

std::optional<Word> decode_distributed(const DistributedInstance& inst,
                                       int mu1, int mu2, std::int64_t i,
                                       std::int64_t j) {
  if (mu1 < 0 || mu1 >= static_cast<int>(inst.side_a.size()) || mu2 < 0 ||
      mu2 >= static_cast<int>(inst.side_b.size())) {
    throw ArgumentError("decode_distributed: realization index out of range");
  }
  const UccCode& ca = inst.side_a[mu1].code;
  const UccCode& cb = inst.side_b[mu2].code;
  if (i < 0 || i > ca.num_bins() || j < 0 || j > cb.num_bins()) {
    throw ArgumentError("decode_distributed: bin index out of range");
  }
  if (i == 0 || j == 0) return std::nullopt;
  const PrimeField field(inst.params.p);
  std::optional<Word> found;
  int hits = 0;
  for (std::int64_t a = 0; a < ca.num_messages(); ++a) {
    Word w = ucc_codeword(ca, a, i - 1);
    for (int t = 0; t < inst.params.n; ++t) {
      w[t] = field.add(w[t], cb.h[j - 1][t]);
    }
    if (inst.typical_w.contains(w)) {
      ++hits;
      found = std::move(w);
    }
  }
  if (hits != 1) return std::nullopt;
  return found;
}

std::vector<Matrix> assemble_distributed(const DistributedInstance& inst,
                                         const StochasticMap& p_zw) {
  const int p = inst.params.p;
  const int n = inst.params.n;
  if (p_zw.input_alphabets() != std::vector<int>{p}) {
    throw ArgumentError("assemble_distributed: P(z|w) must take inputs in F_p");
  }
  const Eigen::Index dim = inst.pi_a.rows() * inst.pi_b.rows();
  const std::int64_t outcomes = ipow(p_zw.output_alphabet(), n);
  std::vector<Matrix> out(outcomes, Matrix::Zero(dim, dim));
  const double scale =
      1.0 / static_cast<double>(inst.side_a.size() * inst.side_b.size());
  const std::vector<double> w0_law = output_law(p_zw, inst.w0, n);

  using Outcomes = std::vector<std::pair<std::int64_t, Matrix>>;
  auto outcomes_of = [](const EncoderRealization& r) {
    Outcomes list{{0, r.gamma0}};
    for (const auto& [b, ws] : r.bin_members) list.emplace_back(b + 1, r.gamma(b));
    return list;
  };
  std::vector<Outcomes> lists_b;
  for (const auto& r : inst.side_b) lists_b.push_back(outcomes_of(r));
  std::map<std::int64_t, std::vector<double>> laws;
  for (std::size_t mu1 = 0; mu1 < inst.side_a.size(); ++mu1) {
    const Outcomes list_a = outcomes_of(inst.side_a[mu1]);
    for (std::size_t mu2 = 0; mu2 < inst.side_b.size(); ++mu2) {
      for (const auto& [i, ga] : list_a) {
        for (const auto& [j, gb] : lists_b[mu2]) {
          const auto w = decode_distributed(inst, static_cast<int>(mu1),
                                            static_cast<int>(mu2), i, j);
          const Matrix op = kron(ga, gb);
          if (!w) {
            add_weighted(out, op, w0_law, scale);
            continue;
          }
          const std::int64_t key = to_index(*w, p);
          auto it = laws.find(key);
          if (it == laws.end()) it = laws.emplace(key, output_law(p_zw, *w, n)).first;
          add_weighted(out, op, it->second, scale);
        }
      }
    }
  }
  for (auto& e : out) e = hermitian_part(e);
  return out;
}

std::vector<int> interleaved_to_blocked(int n) {
  std::vector<int> perm(2 * n);
  for (int q = 0; q < n; ++q) {
    perm[q] = 2 * q;
    perm[n + q] = 2 * q + 1;
  }
  return perm;
}

Matrix blocked_power(const DensityOperator& rho_ab, int n) {
  const auto& dims = rho_ab.register_dims();
  if (dims.size() != 2) throw DimensionError("blocked_power needs (A, B)");
  std::vector<int> reg;
  for (int t = 0; t < n; ++t) reg.insert(reg.end(), dims.begin(), dims.end());
  const auto perm = interleaved_to_blocked(n);
  return permute_registers(kron_power(rho_ab.matrix(), n), reg, perm);
}

std::vector<Matrix> distributed_target(const Povm& m_a, const Povm& m_b,
                                       const StochasticMap& p_zw, int p,
                                       int n) {
  const PrimeField field(p);
  if (p_zw.input_alphabets() != std::vector<int>{p}) {
    throw ArgumentError("distributed_target: P(z|w) must take inputs in F_p");
  }
  std::vector<Matrix> joint;
  for (std::size_t u = 0; u < m_a.size(); ++u) {
    for (std::size_t v = 0; v < m_b.size(); ++v) {
      joint.push_back(kron(m_a[u], m_b[v]));
    }
  }
  // Per-letter M_AB, then the same product/permutation as for the state.
  const int nz = p_zw.output_alphabet();
  std::vector<Matrix> letters;
  for (int z = 0; z < nz; ++z) {
    Matrix e = Matrix::Zero(joint.front().rows(), joint.front().cols());
    for (std::size_t u = 0; u < m_a.size(); ++u) {
      for (std::size_t v = 0; v < m_b.size(); ++v) {
        const int w = field.add(static_cast<int>(u), static_cast<int>(v));
        e += p_zw({w}, z) * joint[u * m_b.size() + v];
      }
    }
    letters.push_back(std::move(e));
  }
  std::vector<int> reg;
  for (int t = 0; t < n; ++t) {
    reg.push_back(static_cast<int>(m_a.dim()));
    reg.push_back(static_cast<int>(m_b.dim()));
  }
  const auto perm = interleaved_to_blocked(n);
  const std::int64_t total = ipow(nz, n);
  std::vector<Matrix> out;
  for (std::int64_t zi = 0; zi < total; ++zi) {
    Matrix e = Matrix::Identity(1, 1);
    for (int z : to_word(zi, nz, n)) e = kron(e, letters[z]);
    out.push_back(permute_registers(e, reg, perm));
  }
  return out;
}

P2pProblem trine_problem() {
  std::vector<Matrix> elements;
  for (int w = 0; w < 3; ++w) {
    const double half = M_PI * w / 3.0;
    Vector v(2);
    v << std::cos(half), std::sin(half);
    elements.push_back((2.0 / 3.0) * projector(v));
  }
  return P2pProblem{
      DensityOperator(Matrix::Identity(2, 2) / 2.0), Povm(std::move(elements)),
      StochasticMap::deterministic({3}, 3, [](const Label& w) { return w[0]; }),
      3};
}

double p2p_error(const P2pInstance& inst, const P2pProblem& problem) {
  const int n = inst.params.n;
  return faithfulness(kron_power(problem.rho.matrix(), n),
                      target_povm(problem.m, problem.p_zw, n),
                      assemble_overall(inst, problem.p_zw));
}

}  // namespace spovm

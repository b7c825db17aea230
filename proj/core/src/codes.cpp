#include "spovm/codes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spovm/errors.hpp"
#include "spovm/rng.hpp"

namespace spovm {
namespace {

// Codes are enumerated by a single counter: digits [0, kn) fill G row-major,
// the remaining n * p^l digits fill the shift table.
struct CodeEnumerator {
  int p, n, k, l;
  std::int64_t bins;
  std::int64_t total;

  CodeEnumerator(int p_, int n_, int k_, int l_) : p(p_), n(n_), k(k_), l(l_) {
    bins = ipow(p, l);
    const std::int64_t digits = static_cast<std::int64_t>(k) * n + n * bins;
    if (digits > 62 || ipow(p, static_cast<int>(digits)) > kExhaustiveCap) {
      throw SizeError("exhaustive enumeration over " + std::to_string(p) +
                      "^" + std::to_string(digits) + " codes exceeds the cap");
    }
    total = ipow(p, static_cast<int>(digits));
  }

  UccCode decode(std::int64_t index) const {
    UccCode code{p, n, k, l, std::vector<Word>(k, Word(n)),
                 std::vector<Word>(bins, Word(n))};
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < n; ++c) {
        code.G[r][c] = static_cast<int>(index % p);
        index /= p;
      }
    }
    for (std::int64_t b = 0; b < bins; ++b) {
      for (int c = 0; c < n; ++c) {
        code.h[b][c] = static_cast<int>(index % p);
        index /= p;
      }
    }
    return code;
  }
};

Word random_word(Rng& rng, int p, int n) {
  Word w(n);
  for (auto& x : w) x = static_cast<int>(rng.uniform_int(p));
  return w;
}

}  // namespace

PrimeField::PrimeField(int p) : p_(p) {
  if (!is_prime(p)) throw ArgumentError(std::to_string(p) + " is not prime");
}

bool PrimeField::is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

int PrimeField::inv(int a) const {
  if (a % p_ == 0) throw ArgumentError("zero has no inverse");
  // Fermat: a^(p-2).
  int result = 1;
  int base = a % p_;
  for (int e = p_ - 2; e > 0; e >>= 1) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
  }
  return result;
}

std::int64_t ipow(std::int64_t p, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::numeric_limits<std::int64_t>::max() >> 1) / p) {
      throw SizeError("integer power overflow");
    }
    r *= p;
  }
  return r;
}

Word to_word(std::int64_t index, int p, int len) {
  Word w(len);
  for (int c = len - 1; c >= 0; --c) {
    w[c] = static_cast<int>(index % p);
    index /= p;
  }
  return w;
}

std::int64_t to_index(const Word& w, int p) {
  std::int64_t idx = 0;
  for (int x : w) idx = idx * p + x;
  return idx;
}

void UccCode::validate() const {
  PrimeField field(p);
  if (n < 1 || k < 0 || l < 0) throw ArgumentError("invalid UCC sizes");
  if (static_cast<int>(G.size()) != k) {
    throw DimensionError("G must have k rows");
  }
  if (static_cast<std::int64_t>(h.size()) != ipow(p, l)) {
    throw DimensionError("shift table must have p^l entries");
  }
  auto check = [&](const Word& w) {
    if (static_cast<int>(w.size()) != n) {
      throw DimensionError("UCC vector has wrong length");
    }
    for (int x : w) {
      if (x < 0 || x >= p) throw ArgumentError("UCC entry outside [0, p)");
    }
  };
  for (const auto& row : G) check(row);
  for (const auto& s : h) check(s);
}

std::vector<Word> coset_code(int p, const std::vector<Word>& G, const Word& B) {
  const PrimeField field(p);
  const int n = static_cast<int>(B.size());
  for (const auto& row : G) {
    if (static_cast<int>(row.size()) != n) {
      throw DimensionError("coset_code: G row length differs from B");
    }
  }
  const int k = static_cast<int>(G.size());
  const std::int64_t count = ipow(p, k);
  std::vector<Word> out;
  out.reserve(count);
  for (std::int64_t ai = 0; ai < count; ++ai) {
    const Word a = to_word(ai, p, k);
    Word w = B;
    for (int r = 0; r < k; ++r) {
      if (a[r] == 0) continue;
      for (int c = 0; c < n; ++c) w[c] = field.add(w[c], field.mul(a[r], G[r][c]));
    }
    out.push_back(std::move(w));
  }
  return out;
}

Word ucc_codeword(const UccCode& code, const Word& a, const Word& i) {
  if (static_cast<int>(a.size()) != code.k ||
      static_cast<int>(i.size()) != code.l) {
    throw DimensionError("ucc_codeword: index lengths must be (k, l)");
  }
  for (int x : a) {
    if (x < 0 || x >= code.p) throw ArgumentError("ucc_codeword: a out of range");
  }
  for (int x : i) {
    if (x < 0 || x >= code.p) throw ArgumentError("ucc_codeword: i out of range");
  }
  return ucc_codeword(code, to_index(a, code.p), to_index(i, code.p));
}

Word ucc_codeword(const UccCode& code, std::int64_t a, std::int64_t i) {
  if (a < 0 || a >= code.num_messages() || i < 0 || i >= code.num_bins()) {
    throw ArgumentError("ucc_codeword: index out of range");
  }
  const Word av = to_word(a, code.p, code.k);
  Word w = code.h[i];
  for (int r = 0; r < code.k; ++r) {
    for (int c = 0; c < code.n; ++c) {
      w[c] = (w[c] + av[r] * code.G[r][c]) % code.p;
    }
  }
  return w;
}

std::map<std::int64_t, std::int64_t> multiplicities(const UccCode& code) {
  std::map<std::int64_t, std::int64_t> gamma;
  for (std::int64_t i = 0; i < code.num_bins(); ++i) {
    for (const auto& w : coset_code(code.p, code.G, code.h[i])) {
      ++gamma[to_index(w, code.p)];
    }
  }
  return gamma;
}

std::int64_t multiplicity(const UccCode& code, const Word& w) {
  if (static_cast<int>(w.size()) != code.n) {
    throw DimensionError("multiplicity: word length differs from n");
  }
  const auto gamma = multiplicities(code);
  const auto it = gamma.find(to_index(w, code.p));
  return it == gamma.end() ? 0 : it->second;
}

std::vector<std::vector<Word>> bins(const UccCode& code) {
  std::vector<std::vector<Word>> out;
  for (const auto& shift : code.h) {
    out.push_back(coset_code(code.p, code.G, shift));
  }
  return out;
}

std::vector<UccCode> sample_ensemble(const CodeEnsembleSpec& spec) {
  PrimeField field(spec.p);
  if (spec.N < 1) throw ArgumentError("ensemble needs N >= 1");
  if (spec.n < 1 || spec.k < 0 || spec.l < 0) {
    throw ArgumentError("invalid ensemble sizes");
  }
  if (ipow(spec.p, spec.n) > (std::int64_t{1} << 20)) {
    throw SizeError("p^n exceeds the desk-scale cap 2^20");
  }
  Rng rng(spec.seed);
  std::vector<Word> G;
  for (int r = 0; r < spec.k; ++r) G.push_back(random_word(rng, spec.p, spec.n));
  const std::int64_t nb = ipow(spec.p, spec.l);
  std::vector<UccCode> out;
  for (int mu = 0; mu < spec.N; ++mu) {
    UccCode code{spec.p, spec.n, spec.k, spec.l, G, {}};
    for (std::int64_t i = 0; i < nb; ++i) {
      code.h.push_back(random_word(rng, spec.p, spec.n));
    }
    out.push_back(std::move(code));
  }
  return out;
}

PairwiseReport pairwise_independence_check(int p, int n, int k, int l) {
  PrimeField field(p);
  const CodeEnumerator codes(p, n, k, l);
  const std::int64_t words = ipow(p, n);
  const std::int64_t messages = ipow(p, k);
  const std::int64_t cws = messages * codes.bins;
  if (cws * cws * words * words > (std::int64_t{1} << 28)) {
    throw SizeError("pairwise table too large for exhaustive check");
  }

  std::vector<std::int64_t> single(cws * words, 0);
  std::vector<std::int64_t> pair(cws * cws * words * words, 0);
  std::vector<std::int64_t> cw(cws);
  for (std::int64_t c = 0; c < codes.total; ++c) {
    const UccCode code = codes.decode(c);
    for (std::int64_t i = 0; i < codes.bins; ++i) {
      for (std::int64_t a = 0; a < messages; ++a) {
        cw[i * messages + a] = to_index(ucc_codeword(code, a, i), p);
      }
    }
    for (std::int64_t x = 0; x < cws; ++x) {
      ++single[x * words + cw[x]];
      for (std::int64_t y = 0; y < cws; ++y) {
        if (x != y) ++pair[((x * cws + y) * words + cw[x]) * words + cw[y]];
      }
    }
  }

  PairwiseReport report;
  report.codes_enumerated = codes.total;
  report.pairs_checked = cws * (cws - 1);
  const double total = static_cast<double>(codes.total);
  bool exact = true;
  for (std::int64_t x = 0; x < cws; ++x) {
    for (std::int64_t w = 0; w < words; ++w) {
      const std::int64_t cnt = single[x * words + w];
      exact = exact && cnt * words == codes.total;
      report.max_marginal_deviation =
          std::max(report.max_marginal_deviation,
                   std::abs(cnt / total - 1.0 / words));
    }
    for (std::int64_t y = 0; y < cws; ++y) {
      if (x == y) continue;
      for (std::int64_t cell = 0; cell < words * words; ++cell) {
        const std::int64_t cnt = pair[(x * cws + y) * words * words + cell];
        exact = exact && cnt * words * words == codes.total;
        report.max_pair_deviation =
            std::max(report.max_pair_deviation,
                     std::abs(cnt / total - 1.0 / (words * words)));
      }
    }
  }
  report.pass = exact;
  return report;
}

double joint_uniformity_deviation(
    int p, int n, int k, int l,
    const std::vector<std::pair<std::int64_t, std::int64_t>>& indices) {
  PrimeField field(p);
  const CodeEnumerator codes(p, n, k, l);
  const std::int64_t words = ipow(p, n);
  const int m = static_cast<int>(indices.size());
  const std::int64_t cells = ipow(words, m);
  if (cells > (std::int64_t{1} << 26)) {
    throw SizeError("joint table too large for exhaustive check");
  }
  std::vector<std::int64_t> counts(cells, 0);
  for (std::int64_t c = 0; c < codes.total; ++c) {
    const UccCode code = codes.decode(c);
    std::int64_t cell = 0;
    for (const auto& [a, i] : indices) {
      cell = cell * words + to_index(ucc_codeword(code, a, i), p);
    }
    ++counts[cell];
  }
  double dev = 0.0;
  const double total = static_cast<double>(codes.total);
  for (std::int64_t cnt : counts) {
    dev = std::max(dev, std::abs(cnt / total - 1.0 / static_cast<double>(cells)));
  }
  return dev;
}

DependenceWitness dependence_witness(int p, int n, int k, int l, int order) {
  PrimeField field(p);
  DependenceWitness w;
  if (order == 3) {
    if (p == 2) throw ArgumentError("order-3 relation needs odd p");
    if (k < 1) throw ArgumentError("order-3 relation needs k >= 1");
    // a = e_k (index 1), 2a (index 2), 0.
    w.indices = {{1, 0}, {2, 0}, {0, 0}};
    w.coefficients = {2, p - 1, p - 1};
  } else if (order == 4) {
    if (k < 1 || l < 1) throw ArgumentError("order-4 relation needs k, l >= 1");
    // W(a,0) - W(0,0) - W(a,1) + W(0,1) = aG - aG = 0.
    w.indices = {{1, 0}, {0, 0}, {1, 1}, {0, 1}};
    w.coefficients = {1, p - 1, p - 1, 1};
  } else {
    throw ArgumentError("supported witness orders are 3 and 4");
  }
  const CodeEnumerator codes(p, n, k, l);
  w.codes_enumerated = codes.total;
  w.relation_holds = true;
  for (std::int64_t c = 0; c < codes.total && w.relation_holds; ++c) {
    const UccCode code = codes.decode(c);
    Word acc(n, 0);
    for (std::size_t j = 0; j < w.indices.size(); ++j) {
      const Word cw = ucc_codeword(code, w.indices[j].first, w.indices[j].second);
      for (int x = 0; x < n; ++x) {
        acc[x] = field.add(acc[x], field.mul(w.coefficients[j], cw[x]));
      }
    }
    w.relation_holds = std::all_of(acc.begin(), acc.end(),
                                   [](int v) { return v == 0; });
  }
  w.joint_deviation = joint_uniformity_deviation(p, n, k, l, w.indices);
  return w;
}

}  // namespace spovm

#pragma once

// 2n Majorana operators on the 2^n-dimensional occupation space of n complex
// fermion modes, with braid generators T_i = exp((pi/4) gamma_{i+1} gamma_i).
//
// Conventions
//   basis index bit k-1 (little endian) is the occupation of c_k
//   gamma_{2k-1} = Z^{(k-1)} X I...,  gamma_{2k} = Z^{(k-1)} Y I...   (Jordan-Wigner)
//   c_k = (gamma_{2k-1} + i gamma_{2k}) / 2, so {c_k, c_k^dag} = 1 and c_k |0> = 0
//   T_i = (I + gamma_{i+1} gamma_i) / sqrt(2),  T_i^-1 = (I - gamma_{i+1} gamma_i) / sqrt(2)
//
// Every gamma and every product of gammas is a Pauli string, so generators are
// applied matrix-free; dense matrices are built only on request.

#include "mzm/braid_word.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzm::braid {

using cplx = std::complex<double>;

inline constexpr int kMaxPairs = 12;
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

/// c * X^x_mask * Z^z_mask on n qubits (Z applied first).
struct PauliString {
  int n = 1;
  std::uint32_t x_mask = 0;
  std::uint32_t z_mask = 0;
  cplx coef{1.0, 0.0};

  std::size_t dim() const { return std::size_t{1} << n; }

  /// Phase picked up by basis state j, before the bit flip.
  cplx phase(std::uint32_t j) const { return (std::popcount(j & z_mask) & 1) ? -coef : coef; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const {
    Eigen::VectorXcd out(psi.size());
    for (std::uint32_t j = 0; j < psi.size(); ++j) out[j ^ x_mask] = phase(j) * psi[j];
    return out;
  }

  Eigen::MatrixXcd matrix() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
    for (std::uint32_t j = 0; j < dim(); ++j) m(j ^ x_mask, j) = phase(j);
    return m;
  }

  friend PauliString operator*(const PauliString& a, const PauliString& b) {
    // Z^{za} X^{xb} = (-1)^{|za & xb|} X^{xb} Z^{za}
    const bool flip = std::popcount(a.z_mask & b.x_mask) & 1;
    return {a.n, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask, (flip ? -1.0 : 1.0) * a.coef * b.coef};
  }
};

inline void require_pairs(int n) {
  if (n < 1 || n > kMaxPairs)
    throw std::out_of_range("number of pairs must be in [1, " + std::to_string(kMaxPairs) + "], got " +
                            std::to_string(n));
}

struct MajoranaOperator {
  int index = 1;  // 1-based, in [1, 2n]
  PauliString op;

  Eigen::MatrixXcd matrix() const { return op.matrix(); }
};

inline MajoranaOperator majorana(int n, int index) {
  require_pairs(n);
  if (index < 1 || index > 2 * n)
    throw std::out_of_range("Majorana index " + std::to_string(index) + " outside [1, " + std::to_string(2 * n) + "]");
  const int mode = (index - 1) / 2;  // 0-based fermion mode
  const std::uint32_t bit = 1u << mode;
  const std::uint32_t string = bit - 1;
  if (index % 2 == 1) return {index, {n, bit, string, {1.0, 0.0}}};
  return {index, {n, bit, string | bit, {0.0, 1.0}}};  // Y = i X Z
}

inline std::vector<MajoranaOperator> build_majoranas(int n) {
  require_pairs(n);
  std::vector<MajoranaOperator> out;
  out.reserve(2 * n);
  for (int k = 1; k <= 2 * n; ++k) out.push_back(majorana(n, k));
  return out;
}

/// Dense c_k = (gamma_{2k-1} + i gamma_{2k}) / 2.
inline Eigen::MatrixXcd annihilator(int n, int mode) {
  if (mode < 1 || mode > n) throw std::out_of_range("mode index out of range");
  return 0.5 * (majorana(n, 2 * mode - 1).matrix() + cplx(0.0, 1.0) * majorana(n, 2 * mode).matrix());
}

/// Dense d_i = (gamma_i + i gamma_{i+1}) / 2 for adjacent Majoranas. For odd i
/// this is c_{(i+1)/2}; in general T_i = exp(i pi/4 (2 d_i^dag d_i - 1)).
inline Eigen::MatrixXcd pair_annihilator(int n, int site) {
  require_pairs(n);
  if (site < 1 || site > 2 * n - 1) throw std::out_of_range("pair site out of range");
  return 0.5 * (majorana(n, site).matrix() + cplx(0.0, 1.0) * majorana(n, site + 1).matrix());
}

struct BraidGenerator {
  int site = 1;
  bool inverse = false;
  PauliString product;  // gamma_{site+1} gamma_site

  double sign() const { return inverse ? -1.0 : 1.0; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const {
    return (psi + sign() * product.apply(psi)) * kInvSqrt2;
  }

  Eigen::MatrixXcd matrix() const {
    const auto d = product.dim();
    return (Eigen::MatrixXcd::Identity(d, d) + sign() * product.matrix()) * kInvSqrt2;
  }
};

inline void require_site(int n, int site) {
  if (site < 1 || site > 2 * n - 1)
    throw std::out_of_range("braid site " + std::to_string(site) + " outside [1, " + std::to_string(2 * n - 1) +
                            "] for n = " + std::to_string(n));
}

inline BraidGenerator braid_generator(int n, int site, bool inverse) {
  require_pairs(n);
  require_site(n, site);
  return {site, inverse, majorana(n, site + 1).op * majorana(n, site).op};
}

/// Applies the word to a raw amplitude vector, leftmost letter first.
inline Eigen::VectorXcd apply_word(int n, const BraidWord& word, Eigen::VectorXcd psi) {
  for (const auto& l : word.letters) require_site(n, l.site);
  for (const auto& l : word.letters) psi = braid_generator(n, l.site, l.inverse).apply(psi);
  return psi;
}

/// Dense unitary of a word: T_{w_k} ... T_{w_1}.
inline Eigen::MatrixXcd word_unitary(int n, const BraidWord& word) {
  require_pairs(n);
  const std::size_t d = std::size_t{1} << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
  for (const auto& l : word.letters) u = braid_generator(n, l.site, l.inverse).matrix() * u;
  return u;
}

/// Normalized state of n topological qubits, immutable.
class MajoranaRegister {
 public:
  static MajoranaRegister vacuum(int n) { return basis_state(n, 0); }

  static MajoranaRegister basis_state(int n, std::uint32_t bits) {
    require_pairs(n);
    if (bits >= (1u << n)) throw std::out_of_range("basis bitstring out of range");
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(std::size_t{1} << n);
    a[bits] = 1.0;
    return MajoranaRegister(n, std::move(a));
  }

  static MajoranaRegister from_amplitudes(int n, Eigen::VectorXcd amplitudes) {
    require_pairs(n);
    if (static_cast<std::size_t>(amplitudes.size()) != (std::size_t{1} << n))
      throw std::invalid_argument("amplitude vector must have 2^n entries");
    if (std::fabs(amplitudes.squaredNorm() - 1.0) > 1e-10)
      throw std::invalid_argument("amplitudes must be normalized to within 1e-10");
    return MajoranaRegister(n, std::move(amplitudes));
  }

  int n_pairs() const { return n_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }

 private:
  MajoranaRegister(int n, Eigen::VectorXcd a) : n_(n), amp_(std::move(a)) {}
  int n_;
  Eigen::VectorXcd amp_;
};

inline MajoranaRegister apply_braid(const MajoranaRegister& state, const BraidWord& word) {
  Eigen::VectorXcd out = apply_word(state.n_pairs(), word, state.amplitudes());
  return MajoranaRegister::from_amplitudes(state.n_pairs(), std::move(out));
}

/// Probability of every occupation bitstring, indexed by the bitstring.
inline std::vector<double> measure_occupations(const MajoranaRegister& state) {
  const auto& a = state.amplitudes();
  std::vector<double> p(a.size());
  for (Eigen::Index j = 0; j < a.size(); ++j) p[j] = std::norm(a[j]);
  return p;
}

/// Expectation of prod_k (1 - 2 n_k).
inline double parity(const MajoranaRegister& state) {
  const auto& a = state.amplitudes();
  double s = 0.0;
  for (std::uint32_t j = 0; j < a.size(); ++j) s += ((std::popcount(j) & 1) ? -1.0 : 1.0) * std::norm(a[j]);
  return s;
}

/// Draws `shots` bitstrings from the occupation distribution. Deterministic for a seed.
inline std::map<std::uint32_t, long> sample_occupations(const MajoranaRegister& state, long shots,
                                                        std::uint64_t seed) {
  if (shots < 0) throw std::invalid_argument("shots must be >= 0");
  const auto p = measure_occupations(state);
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) cdf[j] = (acc += p[j]);
  std::mt19937_64 rng(seed);
  std::map<std::uint32_t, long> hist;
  for (long s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto j = static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1));
    ++hist[j];
  }
  return hist;
}

struct SignedIndex {
  int index = 0;
  int sign = 1;

  friend bool operator==(const SignedIndex&, const SignedIndex&) = default;
};

class ConjugationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Computes U gamma_k U^dag for the word's unitary U by explicit conjugation
/// and identifies it as +-gamma_j.
inline SignedIndex conjugate_majorana(int n, const BraidWord& word, int k) {
  require_pairs(n);
  if (k < 1 || k > 2 * n) throw std::out_of_range("Majorana index out of range");
  for (const auto& l : word.letters) require_site(n, l.site);

  const std::size_t d = std::size_t{1} << n;
  const BraidWord inv = inverse(word);
  const auto gamma = majorana(n, k);
  Eigen::MatrixXcd conj(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
    e[j] = 1.0;
    conj.col(j) = apply_word(n, word, gamma.op.apply(apply_word(n, inv, e)));
  }

  // Overlap tr(gamma_m^dag M) / 2^n picks the candidate.
  int best = 0;
  cplx best_overlap = 0.0;
  for (int m = 1; m <= 2 * n; ++m) {
    const auto g = majorana(n, m).op;
    cplx overlap = 0.0;
    for (std::uint32_t j = 0; j < d; ++j) overlap += std::conj(g.phase(j)) * conj(j ^ g.x_mask, j);
    overlap /= static_cast<double>(d);
    if (std::abs(overlap) > std::abs(best_overlap)) {
      best = m;
      best_overlap = overlap;
    }
  }
  const double s = best_overlap.real() >= 0.0 ? 1.0 : -1.0;
  const double err = best ? (conj - s * majorana(n, best).matrix()).cwiseAbs().maxCoeff() : 1.0;
  if (err > 1e-10)
    throw ConjugationError("conjugated operator is not proportional to a single Majorana (deviation " +
                           std::to_string(err) + ")");
  return {best, static_cast<int>(s)};
}

}  // namespace mzm::braid

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "discrepancy/matcore.hpp"
#include "discrepancy/purify.hpp"

namespace discrepancy {

// Messages g in {±1}^n are indexed by integers: bit i set means g_i = -1.
inline double message_bit(std::uint64_t g, std::size_t i) { return ((g >> i) & 1U) ? -1.0 : 1.0; }
std::vector<double> message_vector(std::uint64_t g, std::size_t n);
std::uint64_t message_index(std::span<const double> g);

/// Classical code with explicit tables. encoder[g] lists (codeword, probability);
/// decoders[i][c] is the probability that D_i outputs +1 on codeword c.
struct ClassicalRAC {
  std::size_t n = 0;
  std::size_t codewords = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> encoder;
  std::vector<std::vector<double>> decoders;

  /// Throws ConfigError if a row does not sum to 1 within 1e-12 or a
  /// probability leaves [0, 1].
  void validate() const;
  /// Pr(D_i(c) = g_i) averaged over the encoding of g.
  double success(std::uint64_t g, std::size_t i) const;
};

/// Pure-state code: states[g] is a unit vector, measurement i is M_i with ‖M_i‖ <= 1.
struct QuantumPureRAC {
  std::size_t n = 0;
  std::vector<std::vector<double>> states;
  std::vector<SymMatrix> measurements;

  /// InvalidMatrix for non-unit states, BiasError for ‖M_i‖ > 1 + 1e-9.
  void validate() const;
  std::size_t qubits() const;
};

/// ½ + bit <y yᵀ, M> / 2. BiasError if ‖M‖ > 1 + 1e-9.
double qrac_success(std::span<const double> y, const SymMatrix& M, double bit);

enum class EvalMode { Worst, Weak };

struct RacEvalOptions {
  EvalMode mode = EvalMode::Worst;
  double delta = 0.0;
  /// Above 20 bits a sample of messages is required.
  std::optional<std::size_t> sample_messages;
  std::uint64_t seed = 0;
};

struct RacEval {
  std::size_t n = 0;
  std::vector<std::uint64_t> messages;
  /// p[k * n + i] for messages[k]
  std::vector<double> p;
  double eta = 0.0;
  double delta = 0.0;
  /// n − log2 |messages|
  double t = 0.0;
  double worst = 0.0;
  double average = 0.0;
  bool sampled = false;
};

RacEval evaluate_rac(const ClassicalRAC& code, const RacEvalOptions& opts = {});
RacEval evaluate_rac(const QuantumPureRAC& code, const RacEvalOptions& opts = {});

/// Success of measuring M_i on y_g in its eigenbasis and emitting +1 with
/// probability (1 + λ)/2, estimated over `trials` runs.
double simulate_quantum_success(const QuantumPureRAC& code, std::uint64_t g, std::size_t i, std::size_t trials,
                                std::uint64_t seed);

struct AmplifyPair {
  std::uint64_t g = 0;
  std::size_t i = 0;
  double p = 0.0;           // single-shot success
  double failure = 0.0;     // empirical majority failure
  double exact_tail = 0.0;  // Pr(Bin(r, p) <= (r-1)/2)
  double se = 0.0;          // √(tail (1 − tail) / trials)
  double hoeffding = 0.0;   // exp(−r η²), η = p − ½ (1 when η <= 0)
};

/// Majority vote over r independent encodings. InvalidArgument-style
/// ConfigError for even r.
std::vector<AmplifyPair> amplify_classical(const ClassicalRAC& code, std::size_t r, std::size_t trials,
                                           std::uint64_t seed, std::size_t jobs = 1);

/// Pr(Bin(r, p) <= k)
double binomial_cdf(std::size_t r, double p, std::size_t k);

struct MatrixDecode {
  double bias = 0.0;
  double variance = 0.0;
  double failure = 0.0;
  double se = 0.0;
  double chebyshev = 0.0;  // Var / (r b²)
  bool informative = false;
};

/// Measure M on y r times, average the eigenvalues, output the sign.
MatrixDecode amplify_matrix_decode(std::span<const double> y, const SymMatrix& M, double truth, std::size_t r,
                                   std::size_t trials, std::uint64_t seed);

using BigInt = boost::multiprecision::cpp_int;

struct MultisetCount {
  BigInt count;        // C(K + r − 1, r)
  BigInt upper_bound;  // C(K + r, r)
};
MultisetCount multiset_count(std::uint64_t K, std::uint64_t r);
BigInt binomial(std::uint64_t N, std::uint64_t k);

struct RacBoundConstants {
  double small_eta_offset = 3.0;
  double large_eta_coeff = 0.25;
};

struct RacBounds {
  double small_eta_bound = 0.0;  // log n − log log(1/η²) − c
  double large_eta_bound = 0.0;  // log(1/η²) + c η² n
  double wqrac_bound = 0.0;      // (1 − H(δ) − H(½ − η)) n − t
};

/// All logarithms base 2. ConfigError unless 0 < η <= ½, 0 <= δ < ½, t >= 0.
RacBounds rac_bounds(std::size_t n, double eta, double delta, double t, const RacBoundConstants& c = {});
double wqrac_bound(std::size_t n, double delta, double eps, double t);

double binary_entropy(double p);
/// −Σ λ log2 λ over the spectrum.
double von_neumann_entropy(const DensityMatrix& rho);

struct Coalescence {
  double lhs = 0.0;
  double rhs = 0.0;
  double p = 0.0;
  bool applicable = false;
  bool holds = false;
};

/// S((1−β)ρ₋ + βρ₊) against (1−β)S(ρ₋) + βS(ρ₊) + H(β) − H(p), with
/// p = min(Tr ρ₊ Π, Tr ρ₋ (I − Π)). Not applicable when p < ½.
Coalescence coalescence_check(const DensityMatrix& rho_minus, const DensityMatrix& rho_plus, double beta,
                              const SymMatrix& Pi);

struct Witness {
  std::size_t j = 0;
  double s = 1.0;
};

struct DiscrepancyProtocol {
  ClassicalRAC code;
  /// ½ + |<e_j, Σ x_i v_i>| / (2n) − ½ per message
  std::vector<double> advantage;
  double average_advantage = 0.0;
  double min_advantage = 0.0;
};

/// Codeword (j, s) is index 2j + (s < 0). Without a witness map the best
/// coordinate per x is used (lowest j on ties). WitnessError if some x has
/// |<e_j, Σ x_i v_i>| <= 2 ε n or the sign does not match.
DiscrepancyProtocol protocol_from_high_discrepancy(const std::vector<std::vector<double>>& v, double eps = 0.0,
                                                   const std::function<Witness(std::uint64_t)>& witness = {});

struct Codebook {
  std::size_t n = 0;
  std::vector<std::vector<double>> words;
};
Codebook make_codebook(std::size_t n, std::size_t t, std::uint64_t seed);
/// E_i Pr(y_j(i) = x_i) − ½ for the codeword j maximising <x, y_j>.
double codebook_advantage(const Codebook& cb, std::span<const double> x);

struct CodebookEstimate {
  double advantage = 0.0;
  double se = 0.0;
  std::size_t samples = 0;
};
CodebookEstimate random_codebook_protocol(std::size_t n, std::size_t t, std::uint64_t seed, std::size_t samples,
                                          std::size_t jobs = 1);

struct HadamardFourier {
  std::size_t n = 0;
  /// Σ_S |X(S)| with X the unnormalised Walsh–Hadamard transform of x.
  std::vector<std::int64_t> fourier_mass;
  /// success[x * n + i] = (Σ_S |X(S)| [sign(X(S)) χ_S(i) = x_i]) / W, integer numerator.
  std::vector<double> success;
  double min_success = 0.0;
  /// max over x of (max_i − min_i) success.
  double index_spread = 0.0;

  ClassicalRAC classical() const;
  QuantumPureRAC quantum() const;
};

/// Exhaustive over all 2^n inputs; ConfigError unless n is a power of two <= 16.
HadamardFourier hadamard_fourier_protocol(std::size_t n);

}  // namespace discrepancy

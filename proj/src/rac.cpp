#include "discrepancy/rac.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include <boost/math/distributions/binomial.hpp>

#include "discrepancy/errors.hpp"
#include "discrepancy/parallel.hpp"
#include "discrepancy/rng.hpp"

namespace discrepancy {

namespace {

constexpr std::size_t kMaxExhaustiveBits = 20;

void check_bias(const SymMatrix& M) {
  const double nrm = spectral_norm(M);
  if (nrm > 1.0 + 1e-9) throw BiasError("measurement has spectral norm " + std::to_string(nrm) + " > 1");
}

void check_bit(double bit) {
  if (bit != 1.0 && bit != -1.0) throw ConfigError("bit must be +1 or -1");
}

std::vector<std::uint64_t> choose_messages(std::size_t n, std::size_t available, const RacEvalOptions& opts,
                                           bool& sampled) {
  sampled = false;
  if (!opts.sample_messages) {
    if (n > kMaxExhaustiveBits)
      throw SizeError("exhaustive evaluation needs n <= 20, got " + std::to_string(n) + "; pass a message sample");
    std::vector<std::uint64_t> all(available);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    return all;
  }
  const std::size_t count = *opts.sample_messages;
  if (count == 0) throw ConfigError("message sample must be non-empty");
  if (count >= available) {
    std::vector<std::uint64_t> all(available);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    return all;
  }
  sampled = true;
  Rng rng(opts.seed);
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> out;
  while (out.size() < count) {
    const std::uint64_t g = rng.below(available);
    if (seen.insert(g).second) out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class SuccessFn>
RacEval evaluate_impl(std::size_t n, std::size_t available, const RacEvalOptions& opts, SuccessFn success) {
  if (n == 0) throw ConfigError("code has no message bits");
  if (opts.mode == EvalMode::Weak && (opts.delta < 0.0 || opts.delta >= 0.5))
    throw ConfigError("weak mode needs 0 <= delta < 1/2");
  RacEval ev;
  ev.n = n;
  ev.messages = choose_messages(n, available, opts, ev.sampled);
  ev.delta = opts.mode == EvalMode::Weak ? opts.delta : 0.0;
  ev.t = static_cast<double>(n) - std::log2(static_cast<double>(ev.messages.size()));
  ev.p.resize(ev.messages.size() * n);
  for (std::size_t k = 0; k < ev.messages.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) ev.p[k * n + i] = std::clamp(success(ev.messages[k], i), 0.0, 1.0);

  const auto drop = static_cast<std::size_t>(std::floor(ev.delta * static_cast<double>(n)));
  double eta = std::numeric_limits<double>::infinity();
  std::vector<double> row(n);
  for (std::size_t k = 0; k < ev.messages.size(); ++k) {
    std::copy_n(ev.p.begin() + static_cast<std::ptrdiff_t>(k * n), n, row.begin());
    std::sort(row.begin(), row.end());
    eta = std::min(eta, row[std::min(drop, n - 1)] - 0.5);
  }
  ev.eta = eta;
  ev.worst = *std::min_element(ev.p.begin(), ev.p.end());
  ev.average = std::accumulate(ev.p.begin(), ev.p.end(), 0.0) / static_cast<double>(ev.p.size());
  return ev;
}

// before validation, which itself walks every message
void check_size(std::size_t n, const RacEvalOptions& opts) {
  if (n > kMaxExhaustiveBits && !opts.sample_messages)
    throw SizeError("exhaustive evaluation needs n <= 20, got " + std::to_string(n) + "; pass a message sample");
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int character(std::size_t S, std::size_t i) { return (std::popcount(S & i) & 1) ? -1 : 1; }

}  // namespace

std::vector<double> message_vector(std::uint64_t g, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = message_bit(g, i);
  return out;
}

std::uint64_t message_index(std::span<const double> g) {
  if (g.size() > 64) throw SizeError("message longer than 64 bits");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] < 0) idx |= std::uint64_t{1} << i;
  return idx;
}

void ClassicalRAC::validate() const {
  if (n == 0) throw ConfigError("code has no message bits");
  if (decoders.size() != n) throw ConfigError("expected one decoder per message bit");
  for (const auto& d : decoders) {
    if (d.size() != codewords) throw ConfigError("decoder table does not cover every codeword");
    for (double q : d)
      if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("decoder probability outside [0, 1]");
  }
  for (const auto& row : encoder) {
    double total = 0.0;
    for (const auto& [c, q] : row) {
      if (c >= codewords) throw ConfigError("encoder refers to an unknown codeword");
      if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("encoder probability outside [0, 1]");
      total += q;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("encoder row does not sum to 1");
  }
}

double ClassicalRAC::success(std::uint64_t g, std::size_t i) const {
  const bool plus = message_bit(g, i) > 0;
  double p = 0.0;
  for (const auto& [c, q] : encoder[g]) {
    const double up = decoders[i][c];
    p += q * (plus ? up : 1.0 - up);
  }
  return p;
}

void QuantumPureRAC::validate() const {
  if (n == 0) throw ConfigError("code has no message bits");
  if (measurements.size() != n) throw ConfigError("expected one measurement per message bit");
  if (states.empty()) throw ConfigError("code has no states");
  const std::size_t dim = states.front().size();
  for (const auto& y : states) {
    if (y.size() != dim) throw ShapeError("states have different dimensions");
    if (std::abs(norm2(y) - 1.0) > 1e-10) throw InvalidMatrix("state is not a unit vector");
  }
  for (const auto& M : measurements) {
    if (M.dim() != dim) throw ShapeError("measurement dimension does not match the states");
    check_bias(M);
  }
}

std::size_t QuantumPureRAC::qubits() const {
  if (states.empty()) return 0;
  return static_cast<std::size_t>(std::bit_width(states.front().size() - 1));
}

double qrac_success(std::span<const double> y, const SymMatrix& M, double bit) {
  check_bit(bit);
  if (y.size() != M.dim()) throw ShapeError("state and measurement dimensions differ");
  check_bias(M);
  return std::clamp(0.5 + bit * quadratic_form(M, y) / 2.0, 0.0, 1.0);
}

RacEval evaluate_rac(const ClassicalRAC& code, const RacEvalOptions& opts) {
  check_size(code.n, opts);
  code.validate();
  return evaluate_impl(code.n, code.encoder.size(), opts,
                       [&](std::uint64_t g, std::size_t i) { return code.success(g, i); });
}

RacEval evaluate_rac(const QuantumPureRAC& code, const RacEvalOptions& opts) {
  check_size(code.n, opts);
  code.validate();
  return evaluate_impl(code.n, code.states.size(), opts, [&](std::uint64_t g, std::size_t i) {
    return 0.5 + message_bit(g, i) * quadratic_form(code.measurements[i], code.states[g]) / 2.0;
  });
}

double simulate_quantum_success(const QuantumPureRAC& code, std::uint64_t g, std::size_t i, std::size_t trials,
                                std::uint64_t seed) {
  if (g >= code.states.size() || i >= code.n) throw ConfigError("message or index out of range");
  if (trials == 0) throw ConfigError("trials must be positive");
  const Spectrum s = eig_sym(code.measurements[i]);
  const auto& y = code.states[g];
  std::vector<double> w(s.values.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double a = dot(s.vector(k), y);
    w[k] = a * a;
  }
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  Rng rng(seed);
  const double bit = message_bit(g, i);
  std::size_t correct = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double lam = s.values[pick(rng.engine())];
    const double out = rng.bernoulli((1.0 + lam) / 2.0) ? 1.0 : -1.0;
    if (out == bit) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(trials);
}

double binomial_cdf(std::size_t r, double p, std::size_t k) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probability outside [0, 1]");
  if (k >= r) return 1.0;
  boost::math::binomial_distribution<double> dist(static_cast<double>(r), p);
  return boost::math::cdf(dist, static_cast<double>(k));
}

std::vector<AmplifyPair> amplify_classical(const ClassicalRAC& code, std::size_t r, std::size_t trials,
                                           std::uint64_t seed, std::size_t jobs) {
  if (r % 2 == 0) throw ConfigError("majority amplification needs an odd repetition count");
  if (trials == 0) throw ConfigError("trials must be positive");
  code.validate();
  if (code.n > kMaxExhaustiveBits) throw SizeError("amplification enumerates every message; n <= 20 required");
  const std::size_t pairs = code.encoder.size() * code.n;
  std::vector<AmplifyPair> out(pairs);
  parallel_for(pairs, jobs, [&](std::size_t idx) {
    AmplifyPair& a = out[idx];
    a.g = idx / code.n;
    a.i = idx % code.n;
    a.p = code.success(a.g, a.i);
    const auto& row = code.encoder[a.g];
    std::vector<double> w;
    w.reserve(row.size());
    for (const auto& e : row) w.push_back(e.second);
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    const bool plus = message_bit(a.g, a.i) > 0;
    Rng rng(derive_seed(seed, idx));
    std::size_t failures = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      std::size_t votes = 0;
      for (std::size_t k = 0; k < r; ++k) {
        const std::size_t c = row[pick(rng.engine())].first;
        const bool says_plus = rng.bernoulli(code.decoders[a.i][c]);
        if (says_plus == plus) ++votes;
      }
      if (2 * votes < r) ++failures;
    }
    a.failure = static_cast<double>(failures) / static_cast<double>(trials);
    a.exact_tail = binomial_cdf(r, std::clamp(a.p, 0.0, 1.0), (r - 1) / 2);
    a.se = std::sqrt(a.exact_tail * (1.0 - a.exact_tail) / static_cast<double>(trials));
    const double eta = a.p - 0.5;
    a.hoeffding = eta > 0.0 ? std::exp(-static_cast<double>(r) * eta * eta) : 1.0;
  });
  return out;
}

MatrixDecode amplify_matrix_decode(std::span<const double> y, const SymMatrix& M, double truth, std::size_t r,
                                   std::size_t trials, std::uint64_t seed) {
  check_bit(truth);
  if (r == 0 || trials == 0) throw ConfigError("r and trials must be positive");
  if (y.size() != M.dim()) throw ShapeError("state and measurement dimensions differ");
  if (std::abs(norm2(y) - 1.0) > 1e-10) throw InvalidMatrix("state is not a unit vector");
  check_bias(M);

  MatrixDecode out;
  const double mean = quadratic_form(M, y);
  const auto My = apply(M, y);
  out.bias = truth * mean;
  out.variance = std::max(0.0, dot(My, My) - mean * mean);
  out.informative = out.bias > 0.0;
  out.chebyshev = out.informative ? out.variance / (static_cast<double>(r) * out.bias * out.bias) : 1.0;

  const Spectrum s = eig_sym(M);
  std::vector<double> w(s.values.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double a = dot(s.vector(k), y);
    w[k] = a * a;
  }
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  Rng rng(seed);
  std::size_t failures = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < r; ++k) sum += s.values[pick(rng.engine())];
    if (truth * sum <= 0.0) ++failures;
  }
  out.failure = static_cast<double>(failures) / static_cast<double>(trials);
  out.se = std::sqrt(std::max(out.failure * (1.0 - out.failure), 1.0 / static_cast<double>(trials)) /
                     static_cast<double>(trials));
  return out;
}

BigInt binomial(std::uint64_t N, std::uint64_t k) {
  if (k > N) return 0;
  k = std::min(k, N - k);
  BigInt acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc *= N - k + i;
    acc /= i;
  }
  return acc;
}

MultisetCount multiset_count(std::uint64_t K, std::uint64_t r) {
  MultisetCount out;
  out.count = r == 0 ? BigInt(1) : binomial(K + r - 1, r);
  out.upper_bound = binomial(K + r, r);
  return out;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probability outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double wqrac_bound(std::size_t n, double delta, double eps, double t) {
  if (!(delta >= 0.0 && delta < 0.5)) throw ConfigError("delta must lie in [0, 1/2)");
  if (!(eps >= 0.0 && eps <= 0.5)) throw ConfigError("eps must lie in [0, 1/2]");
  if (!(t >= 0.0)) throw ConfigError("t must be non-negative");
  return (1.0 - binary_entropy(delta) - binary_entropy(eps)) * static_cast<double>(n) - t;
}

RacBounds rac_bounds(std::size_t n, double eta, double delta, double t, const RacBoundConstants& c) {
  if (n == 0) throw ConfigError("n must be positive");
  if (!(eta > 0.0 && eta <= 0.5)) throw ConfigError("eta must lie in (0, 1/2]");
  const double inv = 1.0 / (eta * eta);
  RacBounds b;
  b.small_eta_bound = std::log2(static_cast<double>(n)) - std::log2(std::log2(inv)) - c.small_eta_offset;
  b.large_eta_bound = std::log2(inv) + c.large_eta_coeff * eta * eta * static_cast<double>(n);
  b.wqrac_bound = wqrac_bound(n, delta, 0.5 - eta, t);
  return b;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double lam : rho.spectrum().values)
    if (lam > 0.0) s -= lam * std::log2(lam);
  return std::max(0.0, s);
}

Coalescence coalescence_check(const DensityMatrix& rho_minus, const DensityMatrix& rho_plus, double beta,
                              const SymMatrix& Pi) {
  if (rho_minus.dim() != rho_plus.dim() || Pi.dim() != rho_plus.dim())
    throw ShapeError("states and measurement must share a dimension");
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
  const auto ev = eigvals_sym(Pi);
  if (ev.back() < -1e-9 || ev.front() > 1.0 + 1e-9) throw ConfigError("measurement element must satisfy 0 <= Pi <= I");

  const DensityMatrix mix((1.0 - beta) * rho_minus.matrix() + beta * rho_plus.matrix());
  Coalescence out;
  const double plus_ok = inner(rho_plus.matrix(), Pi);
  const double minus_ok = 1.0 - inner(rho_minus.matrix(), Pi);
  out.p = std::clamp(std::min(plus_ok, minus_ok), 0.0, 1.0);
  out.lhs = von_neumann_entropy(mix);
  out.rhs = (1.0 - beta) * von_neumann_entropy(rho_minus) + beta * von_neumann_entropy(rho_plus) +
            binary_entropy(beta) - binary_entropy(out.p);
  out.applicable = out.p >= 0.5 - 1e-12;
  out.holds = out.applicable && out.lhs >= out.rhs - 1e-9;
  return out;
}

DiscrepancyProtocol protocol_from_high_discrepancy(const std::vector<std::vector<double>>& v, double eps,
                                                   const std::function<Witness(std::uint64_t)>& witness) {
  const std::size_t n = v.size();
  if (n == 0) throw ConfigError("need at least one vector");
  if (n > 16) throw SizeError("exhaustive construction needs n <= 16");
  if (eps < 0.0) throw ConfigError("eps must be non-negative");
  const std::size_t m = v.front().size();
  if (m == 0) throw ConfigError("vectors must be non-empty");
  for (const auto& vi : v) {
    if (vi.size() != m) throw ShapeError("vectors have different lengths");
    for (double a : vi)
      if (!(std::abs(a) <= 1.0)) throw ConfigError("vector entries must lie in [-1, 1]");
  }

  DiscrepancyProtocol out;
  ClassicalRAC& code = out.code;
  code.n = n;
  code.codewords = 2 * m;
  code.decoders.assign(n, std::vector<double>(2 * m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      code.decoders[i][2 * j] = (1.0 + v[i][j]) / 2.0;
      code.decoders[i][2 * j + 1] = (1.0 - v[i][j]) / 2.0;
    }

  const std::size_t messages = std::size_t{1} << n;
  code.encoder.resize(messages);
  out.advantage.resize(messages);
  const double threshold = 2.0 * eps * static_cast<double>(n);
  std::vector<double> w(m);
  for (std::uint64_t x = 0; x < messages; ++x) {
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = message_bit(x, i);
      for (std::size_t j = 0; j < m; ++j) w[j] += xi * v[i][j];
    }
    Witness wit;
    if (witness) {
      wit = witness(x);
      if (wit.j >= m || (wit.s != 1.0 && wit.s != -1.0)) throw WitnessError("witness out of range");
    } else {
      std::size_t best = 0;
      for (std::size_t j = 1; j < m; ++j)
        if (std::abs(w[j]) > std::abs(w[best])) best = j;
      wit.j = best;
      wit.s = w[best] < 0 ? -1.0 : 1.0;
    }
    const double signed_value = wit.s * w[wit.j];
    if (!(signed_value > threshold + 1e-12))
      throw WitnessError("witness for message " + std::to_string(x) + " certifies only " +
                         std::to_string(signed_value) + ", need more than " + std::to_string(threshold));
    code.encoder[x] = {{2 * wit.j + (wit.s < 0 ? 1 : 0), 1.0}};
    out.advantage[x] = signed_value / (2.0 * static_cast<double>(n));
  }
  out.average_advantage =
      std::accumulate(out.advantage.begin(), out.advantage.end(), 0.0) / static_cast<double>(messages);
  out.min_advantage = *std::min_element(out.advantage.begin(), out.advantage.end());
  return out;
}

Codebook make_codebook(std::size_t n, std::size_t t, std::uint64_t seed) {
  if (n == 0 || t == 0) throw ConfigError("codebook needs n >= 1 and t >= 1");
  Codebook cb;
  cb.n = n;
  Rng rng(seed);
  cb.words.reserve(t);
  for (std::size_t j = 0; j < t; ++j) cb.words.push_back(rng.rademacher_vector(n));
  return cb;
}

double codebook_advantage(const Codebook& cb, std::span<const double> x) {
  if (x.size() != cb.n) throw ShapeError("message length does not match the codebook");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& y : cb.words) best = std::max(best, dot(x, y));
  return best / (2.0 * static_cast<double>(cb.n));
}

CodebookEstimate random_codebook_protocol(std::size_t n, std::size_t t, std::uint64_t seed, std::size_t samples,
                                          std::size_t jobs) {
  if (samples < 2) throw ConfigError("need at least two samples");
  const Codebook cb = make_codebook(n, t, derive_seed(seed, 0));
  std::vector<double> adv(samples);
  parallel_for(samples, jobs, [&](std::size_t s) {
    Rng rng(derive_seed(seed, 1, s));
    const auto x = rng.rademacher_vector(n);
    adv[s] = codebook_advantage(cb, x);
  });
  CodebookEstimate est;
  est.samples = samples;
  est.advantage = std::accumulate(adv.begin(), adv.end(), 0.0) / static_cast<double>(samples);
  double ss = 0.0;
  for (double a : adv) ss += (a - est.advantage) * (a - est.advantage);
  est.se = std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
  return est;
}

HadamardFourier hadamard_fourier_protocol(std::size_t n) {
  if (!is_power_of_two(n)) throw ConfigError("n must be a power of two");
  if (n > 16) throw SizeError("exhaustive enumeration needs n <= 16");
  HadamardFourier h;
  h.n = n;
  const std::size_t messages = std::size_t{1} << n;
  h.fourier_mass.resize(messages);
  h.success.resize(messages * n);
  h.min_success = 1.0;
  std::vector<std::int64_t> X(n);
  for (std::uint64_t x = 0; x < messages; ++x) {
    for (std::size_t i = 0; i < n; ++i) X[i] = static_cast<std::int64_t>(message_bit(x, i));
    for (std::size_t len = 1; len < n; len <<= 1)
      for (std::size_t i = 0; i < n; i += 2 * len)
        for (std::size_t k = i; k < i + len; ++k) {
          const std::int64_t a = X[k], b = X[k + len];
          X[k] = a + b;
          X[k + len] = a - b;
        }
    std::int64_t W = 0;
    for (auto c : X) W += std::abs(c);
    h.fourier_mass[x] = W;
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t xi = static_cast<std::int64_t>(message_bit(x, i));
      std::int64_t num = 0;
      for (std::size_t S = 0; S < n; ++S) {
        if (X[S] == 0) continue;
        const std::int64_t sent = (X[S] > 0 ? 1 : -1) * character(S, i);
        if (sent == xi) num += std::abs(X[S]);
      }
      const double p = static_cast<double>(num) / static_cast<double>(W);
      h.success[x * n + i] = p;
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    h.min_success = std::min(h.min_success, lo);
    h.index_spread = std::max(h.index_spread, hi - lo);
  }
  return h;
}

namespace {

std::vector<std::int64_t> walsh(std::uint64_t x, std::size_t n) {
  std::vector<std::int64_t> X(n, 0);
  for (std::size_t S = 0; S < n; ++S)
    for (std::size_t i = 0; i < n; ++i) X[S] += static_cast<std::int64_t>(message_bit(x, i)) * character(S, i);
  return X;
}

}  // namespace

ClassicalRAC HadamardFourier::classical() const {
  ClassicalRAC code;
  code.n = n;
  code.codewords = 2 * n;
  code.decoders.assign(n, std::vector<double>(2 * n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t S = 0; S < n; ++S) {
      code.decoders[i][2 * S] = character(S, i) > 0 ? 1.0 : 0.0;
      code.decoders[i][2 * S + 1] = character(S, i) > 0 ? 0.0 : 1.0;
    }
  code.encoder.resize(fourier_mass.size());
  for (std::uint64_t x = 0; x < fourier_mass.size(); ++x) {
    const auto X = walsh(x, n);
    const double W = static_cast<double>(fourier_mass[x]);
    for (std::size_t S = 0; S < n; ++S)
      if (X[S] != 0)
        code.encoder[x].emplace_back(2 * S + (X[S] < 0 ? 1 : 0), static_cast<double>(std::abs(X[S])) / W);
  }
  return code;
}

QuantumPureRAC HadamardFourier::quantum() const {
  QuantumPureRAC code;
  code.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> diag(2 * n);
    for (std::size_t S = 0; S < n; ++S) {
      diag[2 * S] = character(S, i);
      diag[2 * S + 1] = -character(S, i);
    }
    code.measurements.push_back(SymMatrix::diagonal(diag));
  }
  code.states.resize(fourier_mass.size());
  for (std::uint64_t x = 0; x < fourier_mass.size(); ++x) {
    const auto X = walsh(x, n);
    const double W = static_cast<double>(fourier_mass[x]);
    std::vector<double> y(2 * n, 0.0);
    for (std::size_t S = 0; S < n; ++S)
      if (X[S] != 0) y[2 * S + (X[S] < 0 ? 1 : 0)] = std::sqrt(static_cast<double>(std::abs(X[S])) / W);
    code.states[x] = std::move(y);
  }
  return code;
}

}  // namespace discrepancy

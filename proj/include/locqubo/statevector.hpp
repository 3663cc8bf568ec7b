#pragma once

// Noise-free statevector simulation: little-endian basis ordering (qubit 0 is
// the least significant bit of the basis index), hard cap of 25 qubits.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "locqubo/qubo.hpp"

namespace locqubo {

inline constexpr int kMaxQubits = 25;

struct Statevector {
  int n_qubits = 0;
  std::vector<std::complex<double>> amp;

  double norm2() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return s;
  }
};

namespace detail {

inline void check_qubits(int n) {
  if (n < 1 || n > kMaxQubits)
    throw TooManyQubits("n_qubits: must lie in [1, " +
                        std::to_string(kMaxQubits) + "]");
}

// Applies a 2x2 unitary to qubit t of the state, in place.
inline void apply_single_qubit(Statevector& s, int t,
                               const std::complex<double> u[2][2]) {
  const std::uint64_t stride = 1ULL << t;
  const std::uint64_t dim = s.amp.size();
  for (std::uint64_t base = 0; base < dim; base += 2 * stride)
    for (std::uint64_t k = base; k < base + stride; ++k) {
      const auto a0 = s.amp[k];
      const auto a1 = s.amp[k + stride];
      s.amp[k] = u[0][0] * a0 + u[0][1] * a1;
      s.amp[k + stride] = u[1][0] * a0 + u[1][1] * a1;
    }
}

}  // namespace detail

inline Statevector prepare_uniform(int n) {
  detail::check_qubits(n);
  Statevector s;
  s.n_qubits = n;
  const double a = std::pow(2.0, -0.5 * n);
  s.amp.assign(1ULL << n, {a, 0.0});
  return s;
}

// Product state with per-qubit amplitudes (cos(theta/2), sin(theta/2)).
inline Statevector prepare_warmstart(const std::vector<double>& thetas) {
  const int n = static_cast<int>(thetas.size());
  detail::check_qubits(n);
  Statevector s;
  s.n_qubits = n;
  s.amp.assign(1ULL << n, {1.0, 0.0});
  for (std::uint64_t k = 0; k < s.amp.size(); ++k) {
    double a = 1.0;
    for (int i = 0; i < n; ++i) {
      const double half = thetas[static_cast<std::size_t>(i)] / 2.0;
      a *= ((k >> i) & 1ULL) ? std::sin(half) : std::cos(half);
    }
    s.amp[k] = {a, 0.0};
  }
  return s;
}

// Fills E[k] = energy of basis state k via single-bit-flip (Gray code)
// updates, so each circuit run costs one energy evaluation per bitstring.
inline std::vector<double> energy_table(const QuboModel& q) {
  if (q.n_vars < 1 || q.n_vars > kMaxQubits)
    throw TooManyQubits("energy_table: model exceeds the qubit cap");
  const int n = q.n_vars;
  std::vector<std::vector<std::pair<int, double>>> adj(
      static_cast<std::size_t>(n));
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  for (const auto& [key, v] : q.coeffs) {
    if (key.first == key.second) {
      diag[static_cast<std::size_t>(key.first)] += v;
    } else {
      adj[static_cast<std::size_t>(key.first)].push_back({key.second, v});
      adj[static_cast<std::size_t>(key.second)].push_back({key.first, v});
    }
  }
  std::vector<double> table(1ULL << n);
  std::vector<int> x(static_cast<std::size_t>(n), 0);
  double e = q.offset;
  std::uint64_t gray_prev = 0;
  table[0] = e;
  for (std::uint64_t k = 1; k < table.size(); ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t diff = gray ^ gray_prev;
    int bit = 0;
    while (!((diff >> bit) & 1ULL)) ++bit;
    double field = diag[static_cast<std::size_t>(bit)];
    for (const auto& [j, v] : adj[static_cast<std::size_t>(bit)])
      field += v * x[static_cast<std::size_t>(j)];
    e += x[static_cast<std::size_t>(bit)] ? -field : field;
    x[static_cast<std::size_t>(bit)] ^= 1;
    table[gray] = e;
    gray_prev = gray;
  }
  return table;
}

// Multiplies amplitude k by exp(-i*gamma*energies[k]).
inline void apply_cost_phase_table(Statevector& s,
                                   const std::vector<double>& energies,
                                   double gamma) {
  if (energies.size() != s.amp.size())
    throw SizeMismatch("apply_cost_phase: energy table size mismatch");
  for (std::uint64_t k = 0; k < s.amp.size(); ++k)
    s.amp[k] *= std::polar(1.0, -gamma * energies[k]);
}

inline Statevector apply_cost_phase(const Statevector& s, const QuboModel& q,
                                    double gamma) {
  if (q.n_vars != s.n_qubits)
    throw SizeMismatch("apply_cost_phase: model/state size mismatch");
  Statevector out = s;
  apply_cost_phase_table(out, energy_table(q), gamma);
  return out;
}

// exp(-i*beta*X) on every qubit.
inline Statevector apply_x_mixer(const Statevector& s, double beta) {
  Statevector out = s;
  const std::complex<double> c(std::cos(beta), 0.0);
  const std::complex<double> ms(0.0, -std::sin(beta));
  const std::complex<double> u[2][2] = {{c, ms}, {ms, c}};
  for (int t = 0; t < out.n_qubits; ++t)
    detail::apply_single_qubit(out, t, u);
  return out;
}

// exp(-i*beta*(sin(theta_i) X + cos(theta_i) Z)) on qubit i: the biased mixer
// whose +1 eigenstate is the warm-start product state, and which reduces to
// the plain X mixer at theta = pi/2.
inline Statevector apply_ws_mixer(const Statevector& s, double beta,
                                  const std::vector<double>& thetas) {
  if (static_cast<int>(thetas.size()) != s.n_qubits)
    throw SizeMismatch("apply_ws_mixer: one theta per qubit required");
  Statevector out = s;
  for (int t = 0; t < out.n_qubits; ++t) {
    const double th = thetas[static_cast<std::size_t>(t)];
    const double cb = std::cos(beta), sb = std::sin(beta);
    const std::complex<double> u[2][2] = {
        {{cb, -sb * std::cos(th)}, {0.0, -sb * std::sin(th)}},
        {{0.0, -sb * std::sin(th)}, {cb, sb * std::cos(th)}}};
    detail::apply_single_qubit(out, t, u);
  }
  return out;
}

inline double expectation_table(const Statevector& s,
                                const std::vector<double>& energies) {
  if (energies.size() != s.amp.size())
    throw SizeMismatch("expectation: energy table size mismatch");
  double e = 0.0;
  for (std::uint64_t k = 0; k < s.amp.size(); ++k)
    e += std::norm(s.amp[k]) * energies[k];
  return e;
}

inline double expectation(const Statevector& s, const QuboModel& q) {
  if (q.n_vars != s.n_qubits)
    throw SizeMismatch("expectation: model/state size mismatch");
  return expectation_table(s, energy_table(q));
}

// Multinomial measurement: deterministic for a fixed seed.
inline std::map<std::uint64_t, int> sample(const Statevector& s, int shots,
                                           std::uint64_t seed) {
  if (shots < 1) throw ValidationError("shots: must be >= 1");
  std::vector<double> cdf(s.amp.size());
  double acc = 0.0;
  for (std::uint64_t k = 0; k < s.amp.size(); ++k) {
    acc += std::norm(s.amp[k]);
    cdf[k] = acc;
  }
  std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ULL);
  std::map<std::uint64_t, int> counts;
  for (int shot = 0; shot < shots; ++shot) {
    // top 53 bits give a uniform double in [0,1) independent of the platform
    const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    const auto k = static_cast<std::uint64_t>(it - cdf.begin());
    ++counts[std::min<std::uint64_t>(k, cdf.size() - 1)];
  }
  return counts;
}

inline Bitstring bits_of_index(std::uint64_t k, int n) {
  Bitstring x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    x[static_cast<std::size_t>(i)] = static_cast<int>((k >> i) & 1ULL);
  return x;
}

}  // namespace locqubo

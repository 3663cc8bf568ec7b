#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "locqubo/qaoa.hpp"
#include "oracles.hpp"

using namespace locqubo;

namespace {

constexpr double kPi = 3.14159265358979323846;

QuboModel small_random_model(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QuboModel q;
  q.n_vars = n;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if ((rng() % 10) < 6)
        q.add(i, j, static_cast<double>(rng() % 13) - 6.0);
  return q;
}

double max_prob_diff(const Statevector& a, const Statevector& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.amp.size(); ++k)
    d = std::max(d, std::abs(std::norm(a.amp[k]) - std::norm(b.amp[k])));
  return d;
}

}  // namespace

TEST_CASE("uniform preparation", "[quantum]") {
  auto s1 = prepare_uniform(1);
  CHECK(s1.amp[0].real() == Catch::Approx(std::sqrt(0.5)));
  CHECK(s1.amp[1].real() == Catch::Approx(std::sqrt(0.5)));
  auto s3 = prepare_uniform(3);
  REQUIRE(s3.amp.size() == 8);
  for (const auto& a : s3.amp)
    CHECK(std::norm(a) == Catch::Approx(1.0 / 8.0));
  CHECK(s3.norm2() == Catch::Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(prepare_uniform(26), TooManyQubits);
  CHECK_THROWS_AS(prepare_uniform(0), TooManyQubits);
}

TEST_CASE("warm-start preparation", "[quantum]") {
  std::vector<double> half(4, kPi / 2.0);
  auto w = prepare_warmstart(half);
  auto u = prepare_uniform(4);
  for (std::size_t k = 0; k < w.amp.size(); ++k)
    CHECK(std::abs(w.amp[k] - u.amp[k]) < 1e-12);

  auto zero = prepare_warmstart({0.0});
  CHECK(zero.amp[0] == std::complex<double>(1.0, 0.0));
  CHECK(zero.amp[1] == std::complex<double>(0.0, 0.0));

  const double th = 2.0 * std::asin(std::sqrt(0.1));
  auto biased = prepare_warmstart({th, th});
  double p_q0 = std::norm(biased.amp[1]) + std::norm(biased.amp[3]);
  CHECK(p_q0 == Catch::Approx(0.1));
  CHECK(biased.norm2() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("energy table matches direct evaluation", "[quantum]") {
  auto q = small_random_model(10, 21);
  auto table = energy_table(q);
  for (std::uint64_t k = 0; k < table.size(); ++k)
    REQUIRE(table[k] == q.energy(bits_of_index(k, 10)));
}

TEST_CASE("cost phase is the exact diagonal unitary", "[quantum]") {
  auto q = small_random_model(8, 4);
  auto s = prepare_uniform(8);
  auto same = apply_cost_phase(s, q, 0.0);
  for (std::size_t k = 0; k < s.amp.size(); ++k)
    CHECK(same.amp[k] == s.amp[k]);
  const double gamma = 0.37;
  auto rotated = apply_cost_phase(s, q, gamma);
  CHECK(rotated.norm2() == Catch::Approx(1.0).margin(1e-12));
  for (std::uint64_t k = 0; k < s.amp.size(); ++k) {
    auto expected =
        s.amp[k] * std::polar(1.0, -gamma * q.energy(bits_of_index(k, 8)));
    REQUIRE(std::abs(rotated.amp[k] - expected) < 1e-12);
  }
  QuboModel wrong;
  wrong.n_vars = 3;
  CHECK_THROWS_AS(apply_cost_phase(s, wrong, 1.0), SizeMismatch);
}

TEST_CASE("transverse mixer conventions", "[quantum]") {
  auto s = prepare_uniform(3);
  auto id = apply_x_mixer(s, 0.0);
  for (std::size_t k = 0; k < s.amp.size(); ++k) CHECK(id.amp[k] == s.amp[k]);

  // |+>^n is an eigenstate: only a global phase e^{-i n beta}
  const double beta = 0.21;
  auto moved = apply_x_mixer(s, beta);
  auto phase = std::polar(1.0, -3.0 * beta);
  for (std::size_t k = 0; k < s.amp.size(); ++k)
    CHECK(std::abs(moved.amp[k] - phase * s.amp[k]) < 1e-12);

  Statevector zero;
  zero.n_qubits = 1;
  zero.amp = {{1.0, 0.0}, {0.0, 0.0}};
  auto flipped = apply_x_mixer(zero, kPi / 2.0);
  CHECK(std::abs(flipped.amp[0]) < 1e-12);
  CHECK(std::abs(flipped.amp[1] - std::complex<double>(0.0, -1.0)) < 1e-12);
}

TEST_CASE("biased mixer fixes its warm-start state", "[quantum]") {
  std::vector<double> thetas = {0.3, 1.1, 2.4, kPi / 2.0};
  auto s = prepare_warmstart(thetas);
  auto id = apply_ws_mixer(s, 0.0, thetas);
  for (std::size_t k = 0; k < s.amp.size(); ++k) CHECK(id.amp[k] == s.amp[k]);

  const double beta = 0.47;
  auto moved = apply_ws_mixer(s, beta, thetas);
  auto phase = std::polar(1.0, -4.0 * beta);  // eigenvalue +1 per qubit
  for (std::size_t k = 0; k < s.amp.size(); ++k)
    REQUIRE(std::abs(moved.amp[k] - phase * s.amp[k]) < 1e-10);
  CHECK(moved.norm2() == Catch::Approx(1.0).margin(1e-10));

  // at theta = pi/2 the biased mixer is the plain transverse mixer
  std::vector<double> flat(3, kPi / 2.0);
  auto any = prepare_warmstart({0.7, 1.9, 0.2});
  auto a = apply_ws_mixer(any, beta, flat);
  auto b = apply_x_mixer(any, beta);
  for (std::size_t k = 0; k < a.amp.size(); ++k)
    REQUIRE(std::abs(a.amp[k] - b.amp[k]) < 1e-12);

  CHECK_THROWS_AS(apply_ws_mixer(any, beta, {0.1}), SizeMismatch);
}

TEST_CASE("expectation values", "[quantum]") {
  auto q = small_random_model(6, 8);
  Statevector basis;
  basis.n_qubits = 6;
  basis.amp.assign(64, {0.0, 0.0});
  basis.amp[37] = {1.0, 0.0};
  CHECK(expectation(basis, q) == q.energy(bits_of_index(37, 6)));

  auto u = prepare_uniform(6);
  double mean = 0.0;
  for (std::uint64_t k = 0; k < 64; ++k)
    mean += q.energy(bits_of_index(k, 6)) / 64.0;
  CHECK(expectation(u, q) == Catch::Approx(mean).margin(1e-9));
  CHECK(expectation(u, q) >= brute_force_min(q).min_energy - 1e-9);
}

TEST_CASE("measurement sampling", "[quantum]") {
  Statevector basis;
  basis.n_qubits = 2;
  basis.amp = {{0, 0}, {0, 0}, {1, 0}, {0, 0}};
  auto counts = sample(basis, 500, 7);
  REQUIRE(counts.size() == 1);
  CHECK(counts.at(2) == 500);

  auto u = prepare_uniform(2);
  auto c1 = sample(u, 8000, 42);
  auto c2 = sample(u, 8000, 42);
  CHECK(c1 == c2);  // reproducible
  int total = 0;
  double chi2 = 0.0;
  for (const auto& [k, n] : c1) {
    total += n;
    const double dev = n - 2000.0;
    chi2 += dev * dev / 2000.0;
  }
  CHECK(total == 8000);
  CHECK(chi2 < 16.27);  // chi-square df=3 at p = 0.001
  CHECK(sample(u, 8000, 43) != c1);
  CHECK_THROWS_AS(sample(u, 0, 1), ValidationError);
}

TEST_CASE("zero-angle circuit leaves the distribution exactly uniform",
          "[quantum]") {
  auto pm = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 3)[0]);
  auto q = build_pmedian(pm);
  auto s = prepare_uniform(q.n_vars);
  auto after = apply_x_mixer(apply_cost_phase(s, q, 0.0), 0.83);
  const double uniform = 1.0 / static_cast<double>(after.amp.size());
  for (const auto& a : after.amp)
    REQUIRE(std::abs(std::norm(a) - uniform) < 1e-10);
}

TEST_CASE("variational run on a built model", "[quantum][slow]") {
  auto pm = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 3)[0]);
  auto q = build_pmedian(pm);
  const double opt = brute_force_min(q).min_energy;
  QaoaConfig cfg;
  cfg.layers = 1;
  cfg.seed = 3;
  auto r = run_qaoa(q, cfg);
  int total = 0;
  for (const auto& [k, n] : r.counts) total += n;
  CHECK(total == cfg.shots);
  CHECK(r.best_energy >= opt);
  CHECK(r.expectation >= opt);
  for (const auto& [k, n] : r.counts)
    CHECK(r.best_energy <= q.energy(bits_of_index(k, q.n_vars)));
  CHECK(r.rel_freq > 0.0);
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i] <= r.trace[i - 1]);
  CHECK(static_cast<int>(r.trace.size()) <= cfg.max_iter);
  REQUIRE(r.best_feasible.has_value());
  if (*r.best_feasible) CHECK(r.best_energy == opt);
}

TEST_CASE("no-optimization run with zero angles samples uniformly",
          "[quantum]") {
  auto q = small_random_model(3, 15);
  QaoaConfig cfg;
  cfg.max_iter = 0;
  cfg.init_betas = {0.0};
  cfg.init_gammas = {0.0};
  cfg.seed = 11;
  auto r = run_qaoa(q, cfg);
  REQUIRE(r.counts.size() == 8);
  for (const auto& [k, n] : r.counts) {
    CHECK(n > 800);
    CHECK(n < 1200);
  }
  CHECK(r.trace.empty());
  CHECK(r.betas == std::vector<double>{0.0});
  CHECK(r.gammas == std::vector<double>{0.0});
}

TEST_CASE("warm start at eps 0.5 reduces to the standard ansatz",
          "[quantum][slow]") {
  auto pm = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 3)[1]);
  auto q = build_pmedian(pm);
  QaoaConfig cfg;
  cfg.layers = 2;
  cfg.seed = 19;
  auto plain = run_qaoa(q, cfg);
  auto ws = strategy_R(q, 0.5);
  auto warm = run_ws_qaoa(q, ws, cfg);
  CHECK(std::abs(plain.expectation - warm.expectation) < 1e-10);
  CHECK(plain.counts == warm.counts);
  CHECK(plain.best_sample == warm.best_sample);

  // distribution-level equality at fixed parameters
  auto e = energy_table(q);
  auto s1 = apply_x_mixer(apply_cost_phase(prepare_uniform(q.n_vars), q, 0.4),
                          0.9);
  auto s2 = apply_ws_mixer(
      apply_cost_phase(prepare_warmstart(ws.thetas), q, 0.4), 0.9, ws.thetas);
  CHECK(max_prob_diff(s1, s2) < 1e-10);
}

TEST_CASE("binary warm start is frozen by the circuit", "[quantum]") {
  auto q = small_random_model(5, 33);
  WarmStartPoint ws;
  ws.strategy = "L";
  ws.epsilon = 0.0;
  ws.thetas = {0.0, kPi, kPi, 0.0, kPi};  // basis state 10110 (lsb first)
  ws.raw = {0, 1, 1, 0, 1};
  ws.projected = ws.raw;
  QaoaConfig cfg;
  cfg.layers = 2;
  cfg.seed = 5;
  auto r = run_ws_qaoa(q, ws, cfg);
  REQUIRE(r.counts.size() == 1);
  CHECK(r.counts.begin()->second == cfg.shots);
  CHECK(r.best_sample == Bitstring{0, 1, 1, 0, 1});
  CHECK(r.rel_freq == 1.0);
}

TEST_CASE("LP warm start solves a small assignment model", "[quantum][slow]") {
  auto inst = builtin_instances(Family::PMedian, 3)[0];
  auto q = build_pmedian(std::get<PMedianInstance>(inst));
  auto ws = strategy_L(inst, "", 0.1);
  QaoaConfig cfg;
  cfg.layers = 1;
  for (std::uint64_t seed : {1ULL, 2ULL}) {
    cfg.seed = seed;
    auto r = run_ws_qaoa(q, ws, cfg);
    REQUIRE(r.best_feasible.has_value());
    CHECK(*r.best_feasible);
  }
  WarmStartPoint bad = ws;
  bad.thetas.pop_back();
  CHECK_THROWS_AS(run_ws_qaoa(q, bad, cfg), SizeMismatch);
}

TEST_CASE("result serialization uses hex-keyed counts", "[quantum]") {
  auto q = small_random_model(4, 2);
  QaoaConfig cfg;
  cfg.max_iter = 5;
  cfg.shots = 64;
  auto r = run_qaoa(q, cfg);
  auto j = qaoa_result_to_json(r);
  CHECK(j["betas"].size() == 1);
  int total = 0;
  for (const auto& [key, val] : j["counts"].items()) {
    CHECK(key.rfind("0x", 0) == 0);
    total += val.get<int>();
  }
  CHECK(total == 64);
  CHECK(j["best_energy"].get<double>() == r.best_energy);
}

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "locqubo/builders.hpp"
#include "locqubo/relaxations.hpp"
#include "oracles.hpp"

using namespace locqubo;

namespace {

bool is_integral(const std::vector<Rational>& x) {
  return std::all_of(x.begin(), x.end(), [](const Rational& v) {
    return boost::multiprecision::denominator(v) == 1;
  });
}

double frobenius(const DenseMatrix& a, const DenseMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) s += a[i][j] * b[i][j];
  return s;
}

DenseMatrix rank1_lift(const Bitstring& x) {
  const std::size_t n = x.size();
  std::vector<double> v(n + 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) v[i + 1] = static_cast<double>(x[i]);
  DenseMatrix y(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) y[i][j] = v[i] * v[j];
  return y;
}

}  // namespace

TEST_CASE("trivial one-variable program", "[lp]") {
  LinearProgram lp;
  lp.n_vars = 1;
  lp.objective = {1};
  auto sol = solve_lp(lp);
  CHECK(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == 0);
  CHECK(sol.objective == 0);
}

TEST_CASE("assignment relaxations are integral on every built-in",
          "[lp][slow]") {
  for (int size : {3, 4}) {
    for (const auto& pi : builtin_instances(Family::PMedian, size)) {
      const auto& pm = std::get<PMedianInstance>(pi);
      auto sol = solve_lp(lp_relaxation(pi));
      REQUIRE(sol.status == LpStatus::Optimal);
      CHECK(is_integral(sol.x));
      CHECK(sol.objective == Rational(oracles::pmedian_optimum(pm)));
    }
  }
}

TEST_CASE("capacitated relaxations bound the integer optimum", "[lp]") {
  auto instances = builtin_instances(Family::Fcflp, 3);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const auto& fc = std::get<FcflpInstance>(instances[k]);
    const Rational ip(oracles::fcflp_optimum(fc));
    auto agg = solve_lp(lp_relaxation(instances[k], "aggregated"));
    auto dis = solve_lp(lp_relaxation(instances[k], "disaggregated"));
    CHECK(agg.objective <= ip);
    CHECK(dis.objective <= ip);
    // the disjoint-row form dominates the aggregated one
    CHECK(agg.objective <= dis.objective);
    if (k == 0) {  // instance 1: aggregated relaxation is fractional
      CHECK_FALSE(is_integral(agg.x));
      CHECK(agg.objective <= 40);
    }
    if (k == 3 || k == 8) {  // instances 4 and 9: disaggregated is integral
      CHECK(is_integral(dis.x));
      CHECK(dis.objective == ip);
    }
  }
}

TEST_CASE("solution is invariant to input row order", "[lp]") {
  auto lp = lp_relaxation(builtin_instances(Family::PMedian, 4)[2]);
  auto base = solve_lp(lp);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    LinearProgram shuffled = lp;
    std::vector<std::size_t> perm(lp.le_rows.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      shuffled.le_rows[i] = lp.le_rows[perm[i]];
      shuffled.le_rhs[i] = lp.le_rhs[perm[i]];
    }
    auto again = solve_lp(shuffled);
    CHECK(again.objective == base.objective);
    CHECK(again.x == base.x);
  }
}

TEST_CASE("redundant equality rows still terminate", "[lp]") {
  LinearProgram lp;
  lp.n_vars = 2;
  lp.objective = {1, 2};
  lp.eq_rows = {{1, 1}, {1, 1}, {2, 2}};
  lp.eq_rhs = {1, 1, 2};
  auto sol = solve_lp(lp);
  CHECK(sol.x == std::vector<Rational>{1, 0});
  CHECK(sol.objective == 1);
}

TEST_CASE("infeasible and malformed programs are rejected", "[lp]") {
  LinearProgram lp;
  lp.n_vars = 1;
  lp.objective = {1};
  lp.eq_rows = {{1}};
  lp.eq_rhs = {2};  // x = 2 with x in [0,1]
  CHECK_THROWS_AS(solve_lp(lp), InfeasibleError);
  LinearProgram bad;
  bad.n_vars = 2;
  bad.objective = {1};  // wrong length
  CHECK_THROWS_AS(solve_lp(bad), ValidationError);
  CHECK_THROWS_AS(
      lp_relaxation(builtin_instances(Family::Fcflp, 3)[0], "nonsense"),
      UnsupportedFamily);
  GapInstance g;
  g.n = 2;
  g.open_sites = {0, 1};
  g.demand = {1, 1};
  g.capacity = {2, 2};
  g.cost = {{1, 1}, {1, 1}};
  CHECK_THROWS_AS(lp_relaxation(ProblemInstance{g}), UnsupportedFamily);
}

TEST_CASE("box minimization on simple programs", "[boxqubo]") {
  QuboModel q;
  q.n_vars = 1;
  q.add(0, 0, 1.0);
  auto r = minimize_box_qubo(q, {0.5});
  CHECK(r.converged);
  CHECK(r.x[0] == Catch::Approx(0.0).margin(1e-6));

  QuboModel sep;
  sep.n_vars = 4;
  for (int i = 0; i < 4; ++i) sep.add(i, i, -1.0 - i);
  auto rs = minimize_box_qubo(sep, std::vector<double>(4, 0.5));
  CHECK(rs.converged);
  for (double v : rs.x) CHECK(v == Catch::Approx(1.0).margin(1e-6));

  CHECK_THROWS_AS(minimize_box_qubo(q, {0.5, 0.5}), LengthMismatch);
}

TEST_CASE("box minimization is a monotone lower-bounded descent",
          "[boxqubo][slow]") {
  auto pm = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 4)[0]);
  auto q = build_pmedian(pm);
  std::vector<double> half(static_cast<std::size_t>(q.n_vars), 0.5);
  auto r = minimize_box_qubo(q, half);
  CHECK(r.energy <= detail::box_energy(q, half));
  CHECK(r.energy >= brute_force_min(q).min_energy - 1e-9);
  // determinism
  auto r2 = minimize_box_qubo(q, half);
  CHECK(r2.x == r.x);
}

TEST_CASE("lifted-matrix data for a one-variable model", "[sdp]") {
  QuboModel q;
  q.n_vars = 1;
  q.add(0, 0, 1.0);
  auto d = sdp_relaxation_data(q);
  REQUIRE(d.dim == 2);
  CHECK(d.objective == DenseMatrix{{0.0, 0.0}, {0.0, 1.0}});
  REQUIRE(d.linking.size() == 1);
  CHECK(d.linking[0] == DenseMatrix{{0.0, -0.5}, {-0.5, 1.0}});
}

TEST_CASE("rank-one binary lifts satisfy the emitted constraints", "[sdp]") {
  std::mt19937_64 rng(3);
  auto pm = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 3)[0]);
  auto fc = std::get<FcflpInstance>(builtin_instances(Family::Fcflp, 3)[0]);
  for (const auto& q :
       {build_pmedian(pm), build_fcflp_aggregated(fc)}) {
    auto d = sdp_relaxation_data(q);
    for (int trial = 0; trial < 100; ++trial) {
      Bitstring x(static_cast<std::size_t>(q.n_vars));
      for (auto& b : x) b = static_cast<int>(rng() & 1ULL);
      auto y = rank1_lift(x);
      CHECK(y[0][0] == 1.0);
      for (const auto& a : d.linking)
        CHECK(frobenius(a, y) == Catch::Approx(0.0).margin(1e-12));
      CHECK(frobenius(d.objective, y) ==
            Catch::Approx(q.energy(x)).margin(1e-6));
    }
  }
}

TEST_CASE("symmetric fold preserves energies exhaustively", "[sdp]") {
  std::mt19937_64 rng(9);
  QuboModel q;
  q.n_vars = 12;
  for (int i = 0; i < 12; ++i)
    for (int j = i; j < 12; ++j)
      if ((rng() % 10) < 5)
        q.add(i, j, static_cast<double>(rng() % 17) - 8.0);
  auto d = sdp_relaxation_data(q);
  for (std::uint64_t k = 0; k < (1ULL << 12); ++k) {
    Bitstring x(12);
    for (int i = 0; i < 12; ++i) x[static_cast<std::size_t>(i)] =
        static_cast<int>((k >> i) & 1ULL);
    REQUIRE(frobenius(d.objective, rank1_lift(x)) ==
            Catch::Approx(q.energy(x)).margin(1e-9));
  }
}

TEST_CASE("warm-start extraction from a lifted matrix", "[sdp]") {
  Bitstring x = {1, 0, 1};
  auto y = rank1_lift(x);
  auto got = extract_sdp_warmstart(y);
  CHECK(got == std::vector<double>{1.0, 0.0, 1.0});

  DenseMatrix fractional = {{1.0, 0.3, 0.9}, {0.3, 1, 0}, {0.9, 0, 1}};
  CHECK(extract_sdp_warmstart(fractional) == std::vector<double>{0.3, 0.9});

  DenseMatrix rounded = {{1.0, 1.04}, {1.04, 1.0}};
  CHECK(extract_sdp_warmstart(rounded) == std::vector<double>{1.0});

  DenseMatrix ragged = {{1.0, 0.0}, {0.0}};
  CHECK_THROWS_AS(extract_sdp_warmstart(ragged), ShapeMismatch);
  DenseMatrix off = {{0.9, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(extract_sdp_warmstart(off), NotNormalized);
}

TEST_CASE("lifted-matrix data survives a JSON round trip", "[sdp]") {
  auto pm = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 3)[0]);
  auto q = build_pmedian(pm);
  auto d = sdp_relaxation_data(q);
  auto j = sdp_data_to_json(d);
  CHECK(j["dim"] == d.dim);
  CHECK(matrix_from_json(j["objective"]) == d.objective);
  for (std::size_t i = 0; i < d.linking.size(); ++i)
    CHECK(matrix_from_json(j["linking"][i]) == d.linking[i]);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json{{"a", 1}}), ParseError);
}

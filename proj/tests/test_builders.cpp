#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "locqubo/builders.hpp"
#include "domp_support.hpp"
#include "oracles.hpp"
#include "paper_data.hpp"

using namespace locqubo;

namespace {

void check_matrix_equal(const QuboModel& q, const refdata::Matrix& ref) {
  REQUIRE(q.n_vars == static_cast<int>(ref.size()));
  for (int i = 0; i < q.n_vars; ++i)
    for (int j = i; j < q.n_vars; ++j) {
      INFO("entry (" << i << "," << j << ")");
      REQUIRE(q.get(i, j) ==
              ref[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
}

// Objective part of the penalized Hamiltonian, read straight off the bits.
double raw_objective(const QuboModel& q, const Bitstring& x) {
  const ProblemInstance& pin = *q.source;
  auto bit = [&x](int idx) { return x[static_cast<std::size_t>(idx)]; };
  switch (*q.family) {
    case Family::PMedian: {
      const auto& in = std::get<PMedianInstance>(pin);
      double obj = 0.0;
      for (int i = 0; i < in.n; ++i)
        for (int j = 0; j < in.n; ++j)
          if (bit(i * in.n + j))
            obj += static_cast<double>(in.demand[j] * in.cost[i][j]);
      return obj;
    }
    case Family::PCenter: {
      const auto& in = std::get<PCenterInstance>(pin);
      const int lz = slack_bits(in.d_max() - in.d_min());
      double obj = static_cast<double>(in.d_min());
      for (int k = 0; k < lz; ++k)
        obj += static_cast<double>((1LL << k) * bit(in.n * in.n + in.n + k));
      return obj;
    }
    case Family::Fcflp: {
      const auto& in = std::get<FcflpInstance>(pin);
      double obj = 0.0;
      for (int i = 0; i < in.n; ++i) {
        if (bit(in.n * in.n + i))
          obj += in.fixed_cost[static_cast<std::size_t>(i)];
        for (int j = 0; j < in.n; ++j)
          if (bit(i * in.n + j))
            obj += in.cost[static_cast<std::size_t>(i)]
                          [static_cast<std::size_t>(j)];
      }
      return obj;
    }
    case Family::Gap: {
      const auto& in = std::get<GapInstance>(pin);
      const int m = static_cast<int>(in.open_sites.size());
      double obj = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < in.n; ++j)
          if (bit(i * in.n + j)) obj += static_cast<double>(in.cost[i][j]);
      return obj;
    }
    default:
      FAIL("raw_objective: unsupported family in this test");
      return 0.0;
  }
}

Bitstring bits_of(std::uint64_t k, int n) {
  Bitstring x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    x[static_cast<std::size_t>(i)] = static_cast<int>((k >> i) & 1ULL);
  return x;
}

}  // namespace

TEST_CASE("20-variable assignment model matches the reference matrix",
          "[builders][matrix]") {
  auto inst = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 4)[0]);
  REQUIRE(inst.p == 2);
  auto q = build_pmedian(inst);
  CHECK(q.penalty == 1100.0);
  CHECK(q.offset == 8800.0);
  check_matrix_equal(q, refdata::pmedian_example_matrix());
}

TEST_CASE("24-variable capacitated models match the reference matrices",
          "[builders][matrix]") {
  auto inst = std::get<FcflpInstance>(builtin_instances(Family::Fcflp, 3)[0]);
  auto qa = build_fcflp_aggregated(inst);
  CHECK(qa.penalty == 81.0);
  CHECK(qa.offset == 243.0);
  check_matrix_equal(qa, refdata::fcflp_aggregated_matrix());

  auto qd = build_fcflp_disaggregated(inst);
  CHECK(qd.penalty == 81.0);
  CHECK(qd.offset == 28107.0);
  check_matrix_equal(qd, refdata::fcflp_disaggregated_matrix());
}

TEST_CASE("variable-count formulas", "[builders]") {
  for (const auto& pi : builtin_instances(Family::PMedian, 3))
    CHECK(build_pmedian(std::get<PMedianInstance>(pi)).n_vars == 12);
  for (const auto& pi : builtin_instances(Family::PMedian, 4))
    CHECK(build_pmedian(std::get<PMedianInstance>(pi)).n_vars == 20);
  auto fc = builtin_instances(Family::Fcflp, 3);
  for (std::size_t k = 0; k < fc.size(); ++k) {
    int expected = (k == 3) ? 25 : 24;  // instance 4 has a capacity of 15
    CHECK(build_fcflp_aggregated(std::get<FcflpInstance>(fc[k])).n_vars ==
          expected);
    CHECK(build_fcflp_disaggregated(std::get<FcflpInstance>(fc[k])).n_vars ==
          expected);
  }

  PCenterInstance pc;
  pc.n = 3;
  pc.p = 1;
  pc.distance = {{0, 3, 7}, {3, 0, 4}, {7, 4, 0}};  // d_max 7, d_min 0
  CHECK(build_pcenter(pc).n_vars == 9 + 3 + 3 + 9 + 1);

  GapInstance g;
  g.n = 3;
  g.open_sites = {0, 1};
  g.demand = {3, 8, 10};
  g.capacity = {12, 10};
  g.cost = {{0, 4, 4}, {9, 0, 2}};
  CHECK(build_gap(g).n_vars == 6 + 4 + 4);

  DompInstance dm;
  dm.m = 3;
  dm.n_open = 1;
  dm.cost = {{0, 5, 6}, {5, 0, 7}, {6, 5, 0}};  // SC = 34
  dm.lambda = {1, 1, 1};
  CHECK(build_domp(dm).n_vars == 3 + 18 + 81 + 2 * 6);

  DmpflpInstance dp;
  dp.periods = 2;
  dp.n = 2;
  dp.p = 1;
  dp.cost = {{{0, 2}, {3, 0}}, {{0, 4}, {1, 0}}};
  dp.open_cost = {{1, 1}, {1, 1}};
  dp.close_cost = {{1, 1}, {1, 1}};
  dp.open_limit = {1, 1};
  CHECK(build_dmpflp(dp).n_vars == 8 + 8 + 8 + 2);
}

TEST_CASE("brute-force optima of the worked examples", "[builders][slow]") {
  auto pm = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 4)[0]);
  auto q = build_pmedian(pm);
  auto r = brute_force_min(q);
  CHECK(r.min_energy == 99.0);
  auto sol = decode(q, r.argmin);
  CHECK(sol.feasible);
  CHECK(sol.original_objective == 99.0);
  CHECK(sol.opened == std::vector<int>{1, 2});

  auto fi = std::get<FcflpInstance>(builtin_instances(Family::Fcflp, 3)[0]);
  for (auto* build : {&build_fcflp_aggregated, &build_fcflp_disaggregated}) {
    auto qf = (*build)(fi, std::nullopt, nullptr);
    auto rf = brute_force_min(qf);
    CHECK(rf.min_energy == 40.0);
    auto sf = decode(qf, rf.argmin);
    CHECK(sf.feasible);
    CHECK(sf.original_objective == 40.0);
    CHECK(sf.opened == std::vector<int>{0, 1});
    CHECK(rf.argmin[0] == 1);  // client 1 served by facility 1
    CHECK(rf.argmin[1] == 1);  // client 2 served by facility 1
    CHECK(rf.argmin[5] == 1);  // client 3 served by facility 2
  }
}

TEST_CASE("energy of a hand-built feasible point equals its objective",
          "[builders]") {
  auto pm = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 4)[0]);
  auto q = build_pmedian(pm);
  Bitstring x(20, 0);
  x[4 + 1] = 1;   // x(1,1)
  x[8 + 0] = 1;   // x(2,0)
  x[8 + 2] = 1;   // x(2,2)
  x[8 + 3] = 1;   // x(2,3)
  x[16 + 1] = 1;  // y(1)
  x[16 + 2] = 1;  // y(2)
  CHECK(q.energy(x) == 99.0);

  Bitstring zero(20, 0);
  CHECK(q.energy(zero) == q.offset);
  auto sol = decode(q, zero);
  CHECK_FALSE(sol.feasible);
  // four unassigned clients plus the facility-count constraint
  CHECK(sol.violations.size() == 5);
}

TEST_CASE("decode reports capacity overload", "[builders]") {
  auto fi = std::get<FcflpInstance>(builtin_instances(Family::Fcflp, 3)[0]);
  auto q = build_fcflp_aggregated(fi);
  Bitstring x(static_cast<std::size_t>(q.n_vars), 0);
  // all three clients on facility 2 (capacity 10 < demand 21), facility open
  x[3 + 0] = x[3 + 1] = x[3 + 2] = 1;
  x[9 + 1] = 1;
  auto sol = decode(q, x);
  CHECK_FALSE(sol.feasible);
  bool found = false;
  for (const auto& [id, res] : sol.violations)
    if (id.find("capacity facility 1") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("simple-constraint penalty pieces", "[builders]") {
  const double P = 10.0;
  QuboModel q;
  q.n_vars = 3;
  table1_penalty(q, SimpleConstraint::LeqCoupling, {0, 1}, P);
  CHECK(q.energy({1, 0, 0}) == P);   // x <= y violated
  CHECK(q.energy({1, 1, 0}) == 0.0);
  CHECK(q.energy({0, 0, 0}) == 0.0);
  CHECK(q.energy({0, 1, 0}) == 0.0);

  QuboModel q2;
  q2.n_vars = 3;
  table1_penalty(q2, SimpleConstraint::PairAtMostOne, {0, 2}, P);
  CHECK(q2.energy({1, 0, 1}) == P);
  CHECK(q2.energy({1, 1, 0}) == 0.0);

  QuboModel q3;
  q3.n_vars = 3;
  table1_penalty(q3, SimpleConstraint::SetAtMostOne, {0, 1, 2}, P);
  CHECK(q3.energy({1, 1, 1}) == 3 * P);  // C(3,2) pairs
  CHECK(q3.energy({1, 1, 0}) == P);
  CHECK(q3.energy({1, 0, 0}) == 0.0);
}

TEST_CASE("user-supplied penalty below the bound warns", "[builders]") {
  auto pm = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 3)[0]);
  std::vector<std::string> warnings;
  auto q = build_pmedian(pm, 5.0, &warnings);
  CHECK(q.penalty == 5.0);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("below the certified bound") != std::string::npos);
  warnings.clear();
  build_pmedian(pm, 1e6, &warnings);
  CHECK(warnings.empty());
}

TEST_CASE("feasible decode is equivalent to zero penalty, exhaustively",
          "[builders]") {
  auto pm = std::get<PMedianInstance>(builtin_instances(Family::PMedian, 3)[0]);
  auto q = build_pmedian(pm);
  REQUIRE(q.n_vars == 12);
  for (std::uint64_t k = 0; k < (1ULL << 12); ++k) {
    auto x = bits_of(k, 12);
    auto sol = decode(q, x);
    double penalty_part = q.energy(x) - raw_objective(q, x);
    if (sol.feasible) {
      REQUIRE(penalty_part == 0.0);
      REQUIRE(q.energy(x) == sol.original_objective);
    } else {
      REQUIRE(penalty_part >= q.penalty);
    }
  }
}

TEST_CASE("feasible decode is equivalent to zero penalty, sampled",
          "[builders]") {
  std::mt19937_64 rng(7);
  PCenterInstance pc;
  pc.n = 3;
  pc.p = 2;
  pc.distance = {{0, 2, 3}, {2, 0, 1}, {3, 1, 0}};
  GapInstance g;
  g.n = 3;
  g.open_sites = {0, 2};
  g.demand = {2, 1, 2};
  g.capacity = {3, 3};
  g.cost = {{0, 4, 4}, {5, 5, 0}};
  auto fi = std::get<FcflpInstance>(builtin_instances(Family::Fcflp, 3)[0]);
  std::vector<QuboModel> models = {build_pcenter(pc), build_gap(g),
                                   build_fcflp_aggregated(fi),
                                   build_fcflp_disaggregated(fi)};
  int feasible_seen = 0;
  for (const auto& q : models) {
    for (int trial = 0; trial < 10000; ++trial) {
      Bitstring x(static_cast<std::size_t>(q.n_vars));
      for (auto& b : x) b = static_cast<int>(rng() & 1ULL);
      auto sol = decode(q, x);
      double penalty_part = q.energy(x) - raw_objective(q, x);
      if (sol.feasible) {
        ++feasible_seen;
        REQUIRE(penalty_part == 0.0);
      } else {
        REQUIRE(penalty_part >= 1.0);
      }
    }
  }
  // also check constructed feasible points, since random ones are rare
  for (const auto& q : models) {
    auto r = brute_force_min(q);
    auto sol = decode(q, r.argmin);
    REQUIRE(sol.feasible);
    REQUIRE(q.energy(r.argmin) == sol.original_objective);
  }
}

TEST_CASE("aggregated and disaggregated minima agree on all built-ins",
          "[builders][slow]") {
  for (const auto& pi : builtin_instances(Family::Fcflp, 3)) {
    const auto& fi = std::get<FcflpInstance>(pi);
    auto ra = brute_force_min(build_fcflp_aggregated(fi));
    auto qd = build_fcflp_disaggregated(fi);
    auto rd = brute_force_min(qd);
    CHECK(ra.min_energy == rd.min_energy);
    CHECK(decode(qd, rd.argmin).original_objective == rd.min_energy);
    CHECK(ra.min_energy == oracles::fcflp_optimum(fi));
  }
}

TEST_CASE("minimizers decode to enumerator optima on random instances",
          "[builders][equivalence]") {
  RandomRanges pm_ranges;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto inst = std::get<PMedianInstance>(
        random_instance(Family::PMedian, 3, seed, pm_ranges));
    auto q = build_pmedian(inst);
    auto r = brute_force_min(q);
    auto sol = decode(q, r.argmin);
    REQUIRE(sol.feasible);
    REQUIRE(sol.original_objective == oracles::pmedian_optimum(inst));
  }
  RandomRanges pc_ranges;
  pc_ranges.dist_max = 3;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = std::get<PCenterInstance>(
        random_instance(Family::PCenter, 3, seed, pc_ranges));
    auto q = build_pcenter(inst);
    auto r = brute_force_min(q);
    auto sol = decode(q, r.argmin);
    REQUIRE(sol.feasible);
    REQUIRE(sol.original_objective == oracles::pcenter_optimum(inst));
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst =
        std::get<GapInstance>(random_instance(Family::Gap, 3, seed));
    auto q = build_gap(inst);
    auto r = brute_force_min(q);
    auto sol = decode(q, r.argmin);
    REQUIRE(sol.feasible);
    REQUIRE(sol.original_objective == oracles::gap_optimum(inst));
  }
}

TEST_CASE("ordered-median Hamiltonian matches an independent evaluation",
          "[builders][domp]") {
  DompInstance dm;
  dm.m = 3;
  dm.n_open = 1;
  dm.cost = {{0, 5, 6}, {5, 0, 7}, {6, 5, 0}};
  dm.lambda = {1, 2, 3};
  auto q = build_domp(dm);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    Bitstring x(static_cast<std::size_t>(q.n_vars));
    for (auto& b : x) b = static_cast<int>(rng() & 1ULL);
    REQUIRE(q.energy(x) == domp_support::hamiltonian(dm, x, q.penalty));
  }
}

TEST_CASE("constructed ordered-median encodings have zero penalty",
          "[builders][domp]") {
  DompInstance dm;
  dm.m = 3;
  dm.n_open = 2;
  dm.cost = {{0, 5, 6}, {5, 1, 7}, {6, 5, 0}};
  for (auto lambda : {std::vector<double>{1, 1, 1},
                      std::vector<double>{0, 0, 1},
                      std::vector<double>{0, 1, 2}}) {
    dm.lambda = lambda;
    auto q = build_domp(dm);
    std::vector<int> best_set;
    double opt = oracles::domp_optimum(dm, &best_set);
    auto bits = domp_support::feasible_encoding(dm, best_set);
    auto sol = decode(q, bits);
    REQUIRE(sol.feasible);
    CHECK(q.energy(bits) == opt);
    CHECK(sol.original_objective == opt);
  }
}

TEST_CASE("multi-period model: feasible schedule has zero penalty",
          "[builders][dmpflp]") {
  DmpflpInstance dp;
  dp.periods = 2;
  dp.n = 2;
  dp.p = 1;
  dp.cost = {{{0, 2}, {3, 1}}, {{0, 4}, {1, 1}}};
  dp.open_cost = {{2, 3}, {4, 5}};
  dp.close_cost = {{1, 1}, {2, 2}};
  dp.open_limit = {1, 1};
  auto q = build_dmpflp(dp);
  // operate site 0 in both periods, serve both clients from it; open it in
  // period 1 (z'_{0,1} = 1), open-limit slacks absorb the rest
  Bitstring x(static_cast<std::size_t>(q.n_vars), 0);
  auto X = [&](int t, int i, int j) { return (t * 2 + i) * 2 + j; };
  x[static_cast<std::size_t>(X(0, 0, 0))] = 1;
  x[static_cast<std::size_t>(X(0, 0, 1))] = 1;
  x[static_cast<std::size_t>(X(1, 0, 0))] = 1;
  x[static_cast<std::size_t>(X(1, 0, 1))] = 1;
  x[8 + 0] = 1;   // zo(0,0): opened in period 1
  x[24 + 1] = 1;  // u(1,0): period-2 opening slack = 1
  // service-coupling slacks: |J| x_iit - served = 2*1 - 2 = 0 for site 0;
  // site 1 rows are all zero, so their slack is 0 as well.
  auto sol = decode(q, x);
  REQUIRE(sol.feasible);
  // cost: period-1 assignments 0+2, period-2 assignments 0+4, opening cost 2
  CHECK(sol.original_objective == 8.0);
  CHECK(q.energy(x) == 8.0);
  // single-period reduction: T=1 has no balance rows; brute force is viable
  DmpflpInstance one;
  one.periods = 1;
  one.n = 2;
  one.p = 1;
  one.cost = {{{0, 2}, {3, 1}}};
  one.open_cost = {{2}, {4}};
  one.close_cost = {{1}, {2}};
  one.open_limit = {1};
  auto q1 = build_dmpflp(one);
  REQUIRE(q1.n_vars <= 14);
  auto r1 = brute_force_min(q1);
  auto s1 = decode(q1, r1.argmin);
  CHECK(s1.feasible);
  CHECK(s1.original_objective == r1.min_energy);
}

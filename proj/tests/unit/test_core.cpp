#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"

#include "irswpcn/core.hpp"
#include "irswpcn/errors.hpp"
#include "irswpcn/psd_variable.hpp"
#include "test_support.hpp"

using namespace irswpcn;
using namespace irswpcn::testing;

namespace {

double grid_time_objective(double a, double total, int points, double* argTau1 = nullptr) {
  double best = 0.0;
  double arg = total;
  for (int i = 1; i <= points; ++i) {
    const double tau1 = total * i / points;
    const double f = tau1 * std::log2(1.0 + a * (total - tau1) / tau1);
    if (f > best) {
      best = f;
      arg = tau1;
    }
  }
  if (argTau1 != nullptr) *argTau1 = arg;
  return best;
}

}  // namespace

TEST_CASE("PhaseVector") {
  CHECK_THROWS_AS(PhaseVector(ComplexVector::Constant(2, Complex(0.5, 0.0))), ContractViolation);
  const auto v = PhaseVector::from_phases(std::vector<double>{0.0, M_PI / 2.0, M_PI});
  CHECK(std::abs(v[1] - Complex(0.0, 1.0)) < 1e-15);
  const auto lifted = v.lifted();
  REQUIRE(lifted.size() == 4);
  CHECK(lifted(3) == Complex(1.0, 0.0));
  ComplexVector u(3);
  u << Complex(2.0, 0.0), Complex(0.0, 0.0), Complex(0.0, -3.0);
  const auto p = PhaseVector::project(u);
  CHECK(p[0] == Complex(1.0, 0.0));
  CHECK(p[1] == Complex(1.0, 0.0));
  CHECK(std::abs(p[2] - Complex(0.0, -1.0)) < 1e-15);
  CHECK(PhaseVector::ones(0).size() == 0);
}

TEST_CASE("PsdVariable") {
  Rng rng(4);
  const auto v = random_phases(5, rng);
  const auto lift = PsdVariable::rank_one(v.lifted());
  CHECK(lift.dim() == 6);
  CHECK(std::abs(lift.rank_residual()) < 1e-12);
  ComplexMatrix bad = ComplexMatrix::Identity(3, 3);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(PsdVariable{bad}, ContractViolation);
  ComplexMatrix indefinite = ComplexMatrix::Identity(2, 2);
  indefinite(0, 1) = indefinite(1, 0) = 2.0;
  CHECK_THROWS_AS(PsdVariable{indefinite}, ContractViolation);
  const PsdVariable id(ComplexMatrix::Identity(4, 4));
  CHECK(id.rank_residual() == doctest::Approx(3.0));
}

TEST_CASE("harvested energy") {
  const auto real = realization_from_q({ComplexVector::Zero(1)}, {Complex(std::sqrt(1e-3), 0.0)});
  const SystemParams p = SystemParams{}.with_size(1, 1);
  CHECK(harvested_energy(real, 0, PhaseVector::ones(1), 0.0, p) == 0.0);
  CHECK(harvested_energy(real, 0, PhaseVector::ones(1), 0.5, p) == doctest::Approx(4e-3).epsilon(1e-12));
}

TEST_CASE("per-user rates and sum throughput") {
  SUBCASE("silent devices") {
    Rng rng(1);
    const auto real = random_unit_realization(3, 2, rng);
    const auto p = unit_params(3, 2);
    const std::vector<double> zero(3, 0.0);
    const std::vector<int> order{0, 1, 2};
    for (const double r : per_user_rates(real, PhaseVector::ones(2), zero, 1.0, order, p)) CHECK(r == 0.0);
  }
  SUBCASE("single user, SNR 3") {
    const auto real = realization_from_q({ComplexVector::Zero(0)}, {Complex(1.0, 0.0)});
    auto p = unit_params(1, 0);
    const std::vector<double> power{3.0};
    const std::vector<int> order{0};
    CHECK(per_user_rates(real, PhaseVector::ones(0), power, 1.0, order, p)[0] == doctest::Approx(2.0));
  }
  SUBCASE("two users at the noise level") {
    const auto real = realization_from_q({ComplexVector::Zero(0), ComplexVector::Zero(0)},
                                         {Complex(1.0, 0.0), Complex(0.0, 1.0)});
    const auto p = unit_params(2, 0);
    const std::vector<double> power{1.0, 1.0};
    CHECK(sum_throughput(real, PhaseVector::ones(0), power, 1.0, p) == doctest::Approx(std::log2(3.0)));
    CHECK(sum_throughput(real, PhaseVector::ones(0), power, 0.0, p) == 0.0);
  }
  SUBCASE("decomposition identity over random orders") {
    Rng rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const int k = 1 + trial % 6;
      const auto real = random_unit_realization(k, 4, rng);
      const auto p = unit_params(k, 4);
      const auto v = random_phases(4, rng);
      std::vector<double> power(static_cast<std::size_t>(k));
      for (auto& x : power) x = 5.0 * u(rng);
      const double tau1 = u(rng);
      std::vector<int> order(static_cast<std::size_t>(k));
      std::iota(order.begin(), order.end(), 0);
      for (int o = 0; o < 5; ++o) {
        std::shuffle(order.begin(), order.end(), rng);
        const auto rates = per_user_rates(real, v, power, tau1, order, p);
        const double total = std::accumulate(rates.begin(), rates.end(), 0.0);
        REQUIRE(std::abs(total - sum_throughput(real, v, power, tau1, p)) <= 1e-10);
      }
    }
  }
  SUBCASE("bad decoding order") {
    Rng rng(3);
    const auto real = random_unit_realization(2, 1, rng);
    const std::vector<double> power{1.0, 1.0};
    const std::vector<int> order{0, 0};
    CHECK_THROWS_AS(per_user_rates(real, PhaseVector::ones(1), power, 1.0, order, unit_params(2, 1)), ArgumentError);
  }
}

TEST_CASE("recover_powers") {
  const auto real = realization_from_q({ComplexVector::Zero(1)}, {Complex(std::sqrt(1e-3), 0.0)});
  const SystemParams p = SystemParams{}.with_size(1, 1);
  CHECK(recover_powers(real, PhaseVector::ones(1), {0.0, 1.0}, p)[0] == 0.0);
  CHECK(recover_powers(real, PhaseVector::ones(1), {0.5, 0.5}, p)[0] == doctest::Approx(8e-3).epsilon(1e-12));
  CHECK_THROWS_AS(recover_powers(real, PhaseVector::ones(1), {1.0, 0.0}, p), DegenerateAllocation);

  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = random_unit_realization(3, 3, rng);
    const auto params = unit_params(3, 3);
    const auto v = random_phases(3, rng);
    const TimeAllocation t{0.3, 0.7};
    const auto powers = recover_powers(r, v, t, params);
    for (int k = 0; k < 3; ++k) {
      const double e = harvested_energy(r, k, v, t.tau0, params);
      CHECK(std::abs(powers[static_cast<std::size_t>(k)] * t.tau1 - e) <= 1e-12 * std::max(1.0, e));
    }
  }
}

TEST_CASE("optimize_time") {
  SUBCASE("no energy") {
    const auto r = optimize_time(0.0, 1.0);
    CHECK(r.time.tau0 == 0.0);
    CHECK(r.time.tau1 == 1.0);
    CHECK(r.throughput == 0.0);
  }
  SUBCASE("A = 1 has z = e") {
    const auto r = optimize_time(1.0, 1.0);
    CHECK(r.time.tau1 == doctest::Approx(1.0 / M_E).epsilon(1e-9));
    CHECK(r.throughput == doctest::Approx(std::log2(M_E) / M_E).epsilon(1e-9));
    CHECK(std::abs(r.throughput - 0.53074) < 1e-5);
    CHECK(std::abs(r.throughput - grid_time_objective(1.0, 1.0, 1'000'000)) <= 1e-6 * r.throughput);
  }
  SUBCASE("A = 100 against a dense grid") {
    const auto r = optimize_time(100.0, 1.0);
    CHECK(std::abs(r.throughput - grid_time_objective(100.0, 1.0, 1'000'000)) <= 1e-6 * r.throughput);
  }
  SUBCASE("saturates the frame, concave along a grid, monotone in A") {
    Rng rng(12);
    std::uniform_real_distribution<double> logA(-3.0, 4.0);
    std::vector<double> as;
    for (int i = 0; i < 50; ++i) as.push_back(std::pow(10.0, logA(rng)));
    std::sort(as.begin(), as.end());
    double previous = 0.0;
    for (const double a : as) {
      const auto r = optimize_time(a, 2.0);
      CHECK(r.time.tau0 + r.time.tau1 == doctest::Approx(2.0).epsilon(1e-14));
      CHECK(r.time.tau0 > 0.0);
      CHECK(r.throughput >= previous);
      previous = r.throughput;
      const auto f = [&](double tau1) { return tau1 * std::log2(1.0 + a * (2.0 - tau1) / tau1); };
      const int points = 2000;
      const double h = 2.0 / points;
      for (int i = 2; i < points; ++i) {
        const double second = f((i + 1) * h) - 2.0 * f(i * h) + f((i - 1) * h);
        CHECK(second <= 1e-8);
      }
    }
  }
  SUBCASE("argument checks") {
    CHECK_THROWS_AS(optimize_time(-1.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(optimize_time(1.0, 0.0), ArgumentError);
  }
}

TEST_CASE("evaluate_phases and feasibility") {
  Rng rng(77);
  const auto real = generate_drop(SystemParams{}.with_size(4, 8), 77);
  const SystemParams p = SystemParams{}.with_size(4, 8);
  const auto v = random_phases(8, rng);
  const auto sol = evaluate_phases(real, v, p);
  CHECK(feasibility_violation(sol, real, p).empty());
  CHECK(sol.hapEnergy == doctest::Approx(p.hapPower * sol.time.tau0));
  const auto opt = optimize_time(aggregate_gain(real, v, p), p.totalTime);
  CHECK(sol.sumThroughput == doctest::Approx(opt.throughput).epsilon(1e-12));

  auto broken = sol;
  broken.powers[0] *= 2.0;
  CHECK_FALSE(feasibility_violation(broken, real, p).empty());
  broken = sol;
  broken.time.tau1 += 0.1;
  CHECK_FALSE(feasibility_violation(broken, real, p).empty());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <doctest.h>

#include <random>

#include "iirsim/energy_radio.hpp"

using namespace iirsim;

TEST_CASE("tx_cost follows the first-order model") {
  const RadioParams p;
  CHECK(tx_cost(p, 0, 25.0) == 0.0);
  CHECK(tx_cost(p, 1000, 0.0) == doctest::Approx(5.0e-5).epsilon(1e-12));
  CHECK(tx_cost(p, 1000, 10.0) == doctest::Approx(6.0e-5).epsilon(1e-12));
}

TEST_CASE("rx_cost is electronics only") {
  const RadioParams p;
  CHECK(rx_cost(p, 0) == 0.0);
  CHECK(rx_cost(p, 1000) == doctest::Approx(5.0e-5).epsilon(1e-12));
  CHECK(rx_cost(p, 128) == doctest::Approx(6.4e-6).epsilon(1e-12));
}

TEST_CASE("debit") {
  const EnergyState full = EnergyState::full(1.0);

  SUBCASE("zero is the identity") {
    const auto s = debit(full, 0.0);
    CHECK(s.remaining == 1.0);
    CHECK(s.alive);
  }
  SUBCASE("exactly draining the budget kills") {
    const auto s = debit(full, 1.0);
    CHECK(s.remaining == 0.0);
    CHECK_FALSE(s.alive);
  }
  SUBCASE("overdraw clamps at zero") {
    const auto s = debit(EnergyState::full(0.5), 0.7);
    CHECK(s.remaining == 0.0);
    CHECK_FALSE(s.alive);
  }
  SUBCASE("unlimited nodes never drain") {
    const auto s = debit(EnergyState::unlimited(), 1e9);
    CHECK(s.alive);
    CHECK_FALSE(s.finite());
  }
}

TEST_CASE("ledger conserves energy under random debits") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> amount(0.0, 0.05);
  const NodeId sink = 0;
  EnergyLedger ledger(10, 0.5, std::span(&sink, 1));

  double applied = 0.0;
  double billed = 0.0;
  double to_sink = 0.0;
  std::vector<double> last(10, 0.5);
  last[sink] = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 400; ++i) {
    const NodeId n = NodeId(rng() % 10);
    const double a = amount(rng);
    billed += a;
    if (n == sink) {
      to_sink += a;
    } else if (ledger.alive(n)) {
      applied += std::min(a, ledger.state(n).remaining);
    }
    const bool was_alive = ledger.alive(n);
    const bool died = ledger.charge(n, a).died;
    CHECK(died == (was_alive && !ledger.alive(n)));
    CHECK(ledger.state(n).remaining >= 0.0);
    CHECK(ledger.state(n).remaining <= last[n]);
    last[n] = ledger.state(n).remaining;
    CHECK(ledger.alive(n) == (ledger.state(n).remaining > 0.0));
  }
  CHECK(ledger.drained() == doctest::Approx(applied).epsilon(1e-12));
  CHECK(ledger.unlimited_billed() == doctest::Approx(to_sink).epsilon(1e-12));
  CHECK(ledger.drained() + ledger.unlimited_billed() + ledger.overdraw() ==
        doctest::Approx(billed).epsilon(1e-12));
}

TEST_CASE("compensated sums of many small terms") {
  CompensatedSum s;
  double plain = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    s.add(1e-5);
    plain += 1e-5;
  }
  CHECK(std::fabs(s.value() - 10.0) <= 1e-15 * 10.0);
  CHECK(std::fabs(plain - 10.0) > 1e-12 * 10.0);
}

TEST_CASE("small debits against a large budget keep their precision") {
  const NodeId sink = 1;
  EnergyLedger ledger(2, 0.5, std::span(&sink, 1));
  double drained = 0.0;
  for (int i = 0; i < 100000; ++i) drained += ledger.charge(0, 1e-6).drained;
  CHECK(std::fabs(ledger.drained() - 0.1) <= 1e-15 * 0.1);
  CHECK(ledger.drained() == doctest::Approx(drained).epsilon(1e-12));
  // remaining is derived from the spent total, off by at most one rounding
  CHECK(std::fabs(ledger.state(0).remaining - 0.4) <= 1e-16);
}

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "idsq/attack.hpp"

using namespace idsq;

TEST_CASE("single complexity evaluations") {
  auto r = complexity({4, 15, 59, 15, 12});
  CHECK(std::abs(r.time_log2 - 61.976) < 0.001);
  CHECK(r.data_log2 == 48);
  CHECK(std::abs(complexity({8, 15, 59, 15, 12}).time_log2 - 125.976) < 0.001);
  CHECK(std::abs(complexity({4, 13, 57, 15, 12}).time_log2 - 53.926) < 0.001);
  CHECK_THROWS_AS(complexity({4, 0, 59, 15, 12}), std::invalid_argument);
}

TEST_CASE("complexity is monotone in guessed cells and cost") {
  double last = 0;
  for (int g = 1; g < 40; ++g) {
    const double t = complexity({4, g, 59, 15, 12}).time_log2;
    CHECK(t > last);
    last = t;
  }
  last = 0;
  for (int cost = 1; cost < 200; ++cost) {
    const double t = complexity({8, 15, cost, 15, 12}).time_log2;
    CHECK(t > last);
    last = t;
  }
}

TEST_CASE("table rows reproduce the published exponents") {
  const double expected[] = {48.087,  61.976,  53.926,  126.421, 118.388, 190.695, 182.671,
                             96.006,  125.976, 109.926, 254.421, 238.388, 382.695, 366.671};
  const int key_space[] = {64, 64, 62, 128, 126, 192, 190, 128, 128, 126, 256, 254, 384, 382};
  const auto rows = table2_rows();
  REQUIRE(rows.size() == 14);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(i);
    CHECK(std::abs(rows[i].time_log2 - expected[i]) <= 0.001);
    CHECK(rows[i].key_space_log2 == key_space[i]);
    CHECK(rows[i].data_log2 == (i < 7 ? 48 : 96));
  }
}

TEST_CASE("report text") {
  const auto all = table2_report();
  CHECK(all.find("2^61.976") != std::string::npos);
  CHECK(all.find("note:") != std::string::npos);
  const auto one = table2_report(std::string("skinny-64-192"));
  CHECK(one.find("2^190.695") != std::string::npos);
  CHECK(one.find("skinny-64-64 ") == std::string::npos);
  CHECK_THROWS_AS(table2_report(std::string("skinny-32-32")), std::invalid_argument);
}

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "idsq/parallel.hpp"

using namespace idsq;

TEST_CASE("each index runs exactly once") {
  for (unsigned jobs : {1U, 2U, 7U}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("exceptions propagate to the caller") {
  CHECK_THROWS_AS(parallel_for(100, 3,
                               [](std::size_t i) {
                                 if (i == 42) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("job count from the environment") {
  setenv("IDSQ_JOBS", "3", 1);
  CHECK(default_jobs() == 3);
  setenv("IDSQ_JOBS", "zero", 1);
  CHECK(default_jobs() >= 1);
  unsetenv("IDSQ_JOBS");
  CHECK(default_jobs() >= 1);
}

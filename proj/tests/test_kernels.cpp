#include "ecw/kernels.hpp"
#include "ecw/oracle.hpp"

#include <doctest.h>

using namespace ecw;

TEST_CASE("serial and parallel lift kernels agree") {
  for (auto params : {GraphParams{1, 4}, GraphParams{2, 2}, GraphParams{3, 2}}) {
    const auto graph = build_graph(params);
    auto serial = hitting_table_exact({params.q, 0}, Execution::serial);
    auto parallel = serial;
    auto serial_f = hitting_table_float({params.q, 0}, Execution::serial);
    auto parallel_f = serial_f;
    for (int level = 1; level <= params.g; ++level) {
      serial = kernels::lift_table_serial(serial, graph);
      parallel = kernels::lift_table_parallel(parallel, graph);
      CHECK(serial.values == parallel.values);
      serial_f = kernels::lift_table_serial(serial_f, graph);
      parallel_f = kernels::lift_table_parallel(parallel_f, graph);
      CHECK(serial_f.values == parallel_f.values);
    }
    CHECK(serial.values == hitting_table_exact(params, Execution::parallel).values);
    CHECK(serial_f.values == hitting_table_float(params, Execution::parallel).values);
  }
}

TEST_CASE("serial and parallel oracle kernels agree") {
  for (auto params : {GraphParams{1, 2}, GraphParams{2, 1}, GraphParams{1, 3}}) {
    const auto graph = build_graph(params);
    CHECK(kernels::oracle_table_exact_serial(graph).values == kernels::oracle_table_exact_parallel(graph).values);
    CHECK(kernels::oracle_table_float_serial(graph).values == kernels::oracle_table_float_parallel(graph).values);
  }
}

TEST_CASE("first-step solve") {
  // Path 0 - 1 - 2: hitting times to 2 are 4 and 3.
  const std::vector<std::vector<NodeId>> path{{1}, {0, 2}, {1}};
  const auto h = kernels::first_step_solve_exact(path, 2);
  CHECK(h[0] == 4);
  CHECK(h[1] == 3);
  CHECK(h[2] == 0);
}

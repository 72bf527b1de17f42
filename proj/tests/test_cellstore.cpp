#include <doctest.h>

#include "effad/cellstore.hpp"
#include "effad/errors.hpp"

using namespace effad;

TEST_CASE("allocation counts") {
  CellStore s;
  CellId a = s.new_cell(0);
  CHECK(a.index == 0);
  CHECK(s.live_count() == 1);
  s.new_cell(0);
  s.new_cell(0);
  CHECK(s.peak_live() == 3);
  CHECK(s.total_allocations() == 3);
}

TEST_CASE("release then allocate again") {
  CellStore s;
  Mark m = s.mark_region();
  s.new_cell(0);
  s.release_region(m);
  s.new_cell(0);
  CHECK(s.live_count() == 1);
  CHECK(s.peak_live() == 1);
}

TEST_CASE("read and write") {
  CellStore s;
  CellId a = s.new_cell(0);
  CHECK(s.read(a) == 0.0);
  s.write(a, 5);
  CHECK(s.read(a) == 5.0);
}

TEST_CASE("write log records kinds in order") {
  CellStore s;
  s.enable_write_log();
  CellId a = s.new_cell(0);
  s.write(a, 1, WriteKind::Seed);
  s.write(a, 3, WriteKind::Accumulate);
  REQUIRE(s.write_log().size() == 2);
  CHECK(s.write_log()[0].kind == WriteKind::Seed);
  CHECK(s.write_log()[1].value == 3.0);
}

TEST_CASE("regions") {
  CellStore s;
  CellId keep = s.new_cell(7);
  Mark outer = s.mark_region();
  for (int i = 0; i < 4; ++i) s.new_cell(0);
  CHECK(s.live_count() == 5);

  SUBCASE("flat release") {
    s.release_region(outer);
    CHECK(s.live_count() == 1);
    CHECK(s.read(keep) == 7.0);
  }
  SUBCASE("nested") {
    Mark inner = s.mark_region();
    CellId tmp = s.new_cell(0);
    s.new_cell(0);
    CHECK(s.live_count() == 7);
    s.release_region(inner);
    CHECK(s.live_count() == 5);
    CHECK_FALSE(s.is_live(tmp));
    s.release_region(outer);
    CHECK(s.live_count() == 1);
    CHECK(s.peak_live() == 7);
  }
  SUBCASE("inner release leaves outer cells readable") {
    CellId o = s.new_cell(2);
    Mark inner = s.mark_region();
    s.new_cell(0);
    s.release_region(inner);
    CHECK(s.read(o) == 2.0);
  }
}

TEST_CASE("dangling cells") {
  CellStore s;
  Mark m = s.mark_region();
  CellId a = s.new_cell(0);
  s.release_region(m);
  CHECK_THROWS_AS(s.read(a), DanglingCell);
  CHECK_THROWS_AS(s.write(a, 1), DanglingCell);
  CHECK_THROWS_AS(s.read(CellId{99}), DanglingCell);
}

TEST_CASE("releases must nest") {
  CellStore s;
  Mark outer = s.mark_region();
  s.new_cell(0);
  Mark inner = s.mark_region();
  (void)inner;
  CHECK_THROWS_AS(s.release_region(outer), NonNestedRelease);
}

TEST_CASE("peak never below live") {
  CellStore s;
  for (int round = 0; round < 3; ++round) {
    Mark m = s.mark_region();
    for (int i = 0; i <= round; ++i) {
      s.new_cell(0);
      CHECK(s.peak_live() >= s.live_count());
    }
    s.release_region(m);
  }
  CHECK(s.peak_live() == 3);
  CHECK(s.live_count() == 0);
}

#include "doctest.h"
#include "treepark/errors.hpp"
#include "treepark/rng.hpp"
#include "treepark/tree.hpp"

using namespace treepark;

TEST_CASE("figure-1 tree decodes and round-trips") {
  const std::vector<std::int32_t> degrees{2, 2, 0, 0, 3, 2, 0, 0, 0, 1, 0};
  const PlaneTree t = PlaneTree::from_degrees(degrees);
  CHECK(t.size() == 11);
  const auto walk = t.lukasiewicz();
  CHECK(walk.front() == 0);
  CHECK(walk.back() == -1);
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) CHECK(walk[i] >= 0);
  CHECK(PlaneTree::from_lukasiewicz(walk).degrees() == degrees);
  // parents read off the picture
  CHECK(t.parent(0) == -1);
  CHECK(t.parent(1) == 0);
  CHECK(t.parent(2) == 1);
  CHECK(t.parent(3) == 1);
  CHECK(t.parent(4) == 0);
  CHECK(t.parent(5) == 4);
  CHECK(t.parent(6) == 5);
  CHECK(t.parent(7) == 5);
  CHECK(t.parent(8) == 4);
  CHECK(t.parent(9) == 4);
  CHECK(t.parent(10) == 9);
}

TEST_CASE("single vertex <-> walk [0,-1]") {
  const PlaneTree t = PlaneTree::from_degrees({0});
  CHECK(t.size() == 1);
  CHECK(t.lukasiewicz() == std::vector<std::int64_t>{0, -1});
}

TEST_CASE("invalid excursions rejected") {
  CHECK_THROWS_AS(PlaneTree::from_degrees({0, 0}), Error);     // hits -1 early
  CHECK_THROWS_AS(PlaneTree::from_degrees({2, 0}), Error);     // never closes
  CHECK_THROWS_AS(PlaneTree::from_degrees({}), Error);
  CHECK_THROWS_AS(PlaneTree::from_degrees({1, -1}), Error);
}

TEST_CASE("line format round trip") {
  const PlaneTree t = PlaneTree::from_degrees({2, 2, 0, 0, 3, 2, 0, 0, 0, 1, 0});
  CHECK(t.to_line() == "2 2 0 0 3 2 0 0 0 1 0");
  CHECK(PlaneTree::from_line(t.to_line()).degrees() == t.degrees());
  CHECK_THROWS_AS(PlaneTree::from_line("2 x 0"), Error);
}

TEST_CASE("subtree sizes and depths") {
  const PlaneTree t = PlaneTree::from_degrees({2, 2, 0, 0, 3, 2, 0, 0, 0, 1, 0});
  const auto sz = t.subtree_sizes();
  CHECK(sz[0] == 11);
  CHECK(sz[1] == 3);
  CHECK(sz[4] == 7);
  CHECK(sz[5] == 3);
  CHECK(sz[9] == 2);
  CHECK(sz[10] == 1);
  const auto d = t.depths();
  CHECK(d[0] == 0);
  CHECK(d[1] == 1);
  CHECK(d[10] == 3);
}

TEST_CASE("random walk round-trips through both codecs") {
  Rng rng(99);
  for (int iter = 0; iter < 200; ++iter) {
    // random excursion by rejection on short geometric trees
    std::vector<std::int32_t> degrees;
    std::int64_t open = 1;
    while (open > 0 && degrees.size() < 400) {
      std::int32_t d = 0;
      while (rng.u01() < 0.5 && d < 12) ++d;
      degrees.push_back(d);
      open += d - 1;
    }
    if (open != 0) continue;
    const PlaneTree t = PlaneTree::from_degrees(degrees);
    CHECK(PlaneTree::from_lukasiewicz(t.lukasiewicz()).degrees() == degrees);
    CHECK(PlaneTree::from_line(t.to_line()).parents() == t.parents());
  }
}

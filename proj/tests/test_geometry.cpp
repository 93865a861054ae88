#include <cmath>
#include <random>

#include <boost/math/distributions/normal.hpp>

#include "doctest.h"
#include "snss/geometry.hpp"

using namespace snss;

TEST_SUITE("geometry") {
  TEST_CASE("uniform coordinates fill the square and are reproducible") {
    const Coords c = gen_uniform_coords(20, 7);
    CHECK(c.rows() == 400);
    CHECK(c.minCoeff() >= 0.0);
    CHECK(c.maxCoeff() <= 20.0);
    CHECK(gen_uniform_coords(20, 7) == c);
    CHECK(gen_uniform_coords(20, 8) != c);

    const Coords one = gen_uniform_coords(1, 3);
    CHECK(one.rows() == 1);
    CHECK(one.minCoeff() >= 0.0);
    CHECK(one.maxCoeff() <= 1.0);
    CHECK_THROWS_AS(gen_uniform_coords(0, 1), ConfigError);
  }

  TEST_CASE("skewed coordinates follow Beta(2,5) in x and U(0,1) in y") {
    const Coords c = gen_skewed_coords(30, 11);
    REQUIRE(c.rows() == 900);
    CHECK(c.minCoeff() >= 0.0);
    CHECK(c.maxCoeff() <= 30.0);
    CHECK(std::abs(c.col(0).mean() / 30.0 - 2.0 / 7.0) < 0.02);
    CHECK(std::abs(c.col(1).mean() / 30.0 - 0.5) < 0.04);
    // Beta(2,5) variance = 10 / (49 * 8).
    const double xv = (c.col(0).array() / 30.0 - c.col(0).mean() / 30.0).square().mean();
    CHECK(std::abs(xv - 10.0 / 392.0) < 0.005);
    CHECK(gen_skewed_coords(30, 11) == c);
  }

  TEST_CASE("kernel weights") {
    CHECK(KernelSpec::ball(2).weight({1, 1}) == 1.0);
    CHECK(KernelSpec::ball(1).weight({1, 1}) == 0.0);
    CHECK(KernelSpec::ring(0, 2).weight({0, 0}) == 0.0);
    CHECK(KernelSpec::ring(0, 2).weight({2, 0}) == 1.0);
    CHECK(KernelSpec::ring(1, 2).weight({1, 0}) == 0.0);
    CHECK(KernelSpec::f0().weight({0, 0}) == 1.0);
    CHECK(KernelSpec::f0().weight({1e-300, 0}) == 0.0);

    // Quantile from an independent routine.
    const double q = boost::math::quantile(boost::math::normal(0.0, 1.0), 0.95);
    CHECK(q == doctest::Approx(kNormalQuantile95).epsilon(1e-15));
    const double expected = std::exp(-0.5 * q * q);
    CHECK(KernelSpec::gauss(2).weight({2, 0}) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(0.2585).epsilon(1e-4));
  }

  TEST_CASE("kernels are isotropic and ball(0) equals f0") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 2.0);
    const KernelSpec specs[] = {KernelSpec::f0(), KernelSpec::ball(1.5), KernelSpec::ring(0.5, 2.5),
                                KernelSpec::gauss(1.0)};
    for (int t = 0; t < 500; ++t) {
      Point d(normal(rng), normal(rng));
      if (t % 50 == 0) d.setZero();
      for (const auto& k : specs) CHECK(k.weight(d) == k.weight(-d));
      CHECK(KernelSpec::ball(0).weight(d) == KernelSpec::f0().weight(d));
    }
  }

  TEST_CASE("kernel parsing and validation") {
    CHECK(KernelSpec::parse("ring:0:1.5") == KernelSpec::ring(0, 1.5));
    CHECK(KernelSpec::parse("ball:2").to_string() == "ball:2");
    CHECK(KernelSpec::parse("gauss:0.5").to_string() == "gauss:0.5");
    const auto list = KernelSpec::parse_list("f0+ring:0:2");
    REQUIRE(list.size() == 2);
    CHECK(list[0] == KernelSpec::f0());
    CHECK(to_string(list) == "f0+ring:0:2");
    CHECK_THROWS_AS(KernelSpec::parse("ring:2:1"), ConfigError);
    CHECK_THROWS_AS(KernelSpec::parse("ball:-1"), ConfigError);
    CHECK_THROWS_AS(KernelSpec::parse("gauss:0"), ConfigError);
    CHECK_THROWS_AS(KernelSpec::parse("disk:1"), ConfigError);
    CHECK_THROWS_AS(KernelSpec::parse("ball:x"), ConfigError);
  }

  TEST_CASE("grid partition of quadrant centers") {
    Coords c(4, 2);
    c << 0.5, 0.5, 1.5, 0.5, 0.5, 1.5, 1.5, 1.5;
    const Partition p = make_partition(c, PartitionSpec::grid(2, 2), Rect::square(2));
    CHECK(p.num_blocks == 4);
    CHECK(p.block_of == std::vector<int>{0, 1, 2, 3});
    for (auto s : p.block_sizes()) CHECK(s == 1);
  }

  TEST_CASE("grid boundaries are half-open and the upper edge is closed") {
    Coords c(4, 2);
    c << 1.0, 0.0,  // on the midline: upper cell
        2.0, 2.0,   // upper domain corner: last cell
        0.0, 0.0,   // lower corner
        0.999, 1.0;
    const Partition p = make_partition(c, PartitionSpec::grid(2, 2), Rect::square(2));
    CHECK(p.block_of == std::vector<int>{1, 3, 0, 2});
    const Partition hx = make_partition(c, PartitionSpec::halve_x(), Rect::square(2));
    CHECK(hx.block_of == std::vector<int>{1, 1, 0, 0});
    const Partition hy = make_partition(c, PartitionSpec::halve_y(), Rect::square(2));
    CHECK(hy.block_of == std::vector<int>{0, 1, 0, 1});
  }

  TEST_CASE("nearest centers with lowest-index tie break") {
    Matrix centers(2, 2);
    centers << 0, 0, 10, 0;
    Coords c(3, 2);
    c << 4, 0, 5, 0, 6, 0;
    const Partition p = make_partition(c, PartitionSpec::nearest_centers(centers), Rect::square(10));
    CHECK(p.block_of == std::vector<int>{0, 0, 1});
    Matrix dup(2, 2);
    dup << 1, 1, 1, 1;
    CHECK_THROWS_AS(PartitionSpec::nearest_centers(dup), ConfigError);
    CHECK_THROWS_AS(PartitionSpec::nearest_centers(Matrix::Zero(1, 2)), ConfigError);
  }

  TEST_CASE("partitions are disjoint covers") {
    const Coords c = gen_uniform_coords(15, 3);
    const Rect dom = Rect::square(15);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 15);
    Matrix centers(4, 2);
    for (Index i = 0; i < 4; ++i) centers.row(i) << u(rng), u(rng);
    for (const auto& spec : {PartitionSpec::whole(), PartitionSpec::halve_x(), PartitionSpec::grid(3, 3),
                             PartitionSpec::grid(4, 2), PartitionSpec::nearest_centers(centers)}) {
      const Partition p = make_partition(c, spec, dom);
      std::vector<int> seen(static_cast<std::size_t>(c.rows()), 0);
      Index total = 0;
      for (const auto& block : p.blocks()) {
        total += static_cast<Index>(block.size());
        for (auto i : block) ++seen[static_cast<std::size_t>(i)];
      }
      CHECK(total == c.rows());
      CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
    }
    const Partition one = make_partition(c, PartitionSpec::grid(1, 1), dom);
    CHECK(one.num_blocks == 1);
    CHECK(one.block_sizes()[0] == c.rows());
  }

  TEST_CASE("partition parsing and required block sizes") {
    CHECK(PartitionSpec::parse("grid:3x3").to_string() == "grid:3x3");
    CHECK(PartitionSpec::parse("halve-x").to_string() == "halve-x");
    CHECK(PartitionSpec::parse("grid:2x1").to_string() == "halve-x");
    CHECK(PartitionSpec::parse("none").kind == PartitionSpec::Kind::Whole);
    CHECK_THROWS_AS(PartitionSpec::parse("grid:0x2"), ConfigError);
    CHECK_THROWS_AS(PartitionSpec::parse("grid:2"), ConfigError);
    CHECK_THROWS_AS(PartitionSpec::parse("quarters"), ConfigError);

    Coords c(3, 2);
    c << 0.1, 0.1, 0.2, 0.2, 0.3, 0.3;
    const Partition p = make_partition(c, PartitionSpec::grid(2, 2), Rect::square(2));
    try {
      require_block_sizes(p, 1);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("block 2") != std::string::npos);
    }
    CHECK_THROWS_AS(make_partition(c, PartitionSpec::grid(2, 2), Rect{0, 0, 0, 1}), DataError);
  }
}

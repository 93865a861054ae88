#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "snss/config.hpp"
#include "snss/csv.hpp"
#include "snss/metrics.hpp"
#include "snss/study.hpp"

using namespace snss;

TEST_SUITE("config") {
  TEST_CASE("key value parsing") {
    const auto cfg = KeyValueConfig::parse("# comment\n\n reps = 10 \nseed=3\nreps = 12\n");
    CHECK(cfg.get("reps") == "12");
    CHECK(cfg.get_or("seed", "x") == "3");
    CHECK(cfg.get_or("missing", "x") == "x");
    CHECK_FALSE(cfg.get("missing").has_value());
    CHECK(KeyValueConfig::parse(cfg.dump()).values() == cfg.values());
  }

  TEST_CASE("malformed lines report their number") {
    try {
      KeyValueConfig::parse("a = 1\nbogus\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(KeyValueConfig::parse("= 3"), ConfigError);
  }

  TEST_CASE("overrides") {
    KeyValueConfig cfg;
    cfg.apply_override("reps=4");
    CHECK(cfg.get("reps") == "4");
    CHECK_THROWS_AS(cfg.apply_override("reps"), ConfigError);
  }

  TEST_CASE("number parsing") {
    CHECK(parse_int(" 42 ", "k") == 42);
    CHECK(parse_double("1e-3", "k") == 1e-3);
    CHECK(parse_u64("18446744073709551615", "k") == 18446744073709551615ull);
    CHECK_THROWS_AS(parse_int("4x", "k"), ConfigError);
    CHECK_THROWS_AS(parse_int("", "k"), ConfigError);
    CHECK_THROWS_AS(parse_double("nan", "k"), ConfigError);
    CHECK(split_list(" a, b ,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_list("  ").empty());
  }
}

TEST_SUITE("csv") {
  TEST_CASE("round trip of reals") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678}) {
      CHECK(std::stod(format_real(v)) == v);
    }
  }

  TEST_CASE("parsing and errors") {
    const auto t = parse_csv("x,y,a\n1,2,3\n4,5,6\n");
    CHECK(t.header.size() == 3);
    CHECK(t.data.rows() == 2);
    CHECK(t.data(1, 2) == 6.0);
    CHECK(t.column("y") == 1);
    CHECK_THROWS_AS(t.column("z"), DataError);
    CHECK_THROWS_AS(parse_csv("x,y\n1\n"), DataError);
    try {
      parse_csv("x,y\n1,2\n3,abc\n");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("line 3") != std::string::npos);
      CHECK(msg.find("column 'y'") != std::string::npos);
    }
  }

  TEST_CASE("spatial files") {
    const auto dir = std::filesystem::temp_directory_path() / "snss_csv_test";
    std::filesystem::create_directories(dir);
    write_text(dir / "ok.csv", "x,y,Cu,Zn\n0,0,1,2\n1,0,3,4\n");
    std::vector<std::string> names;
    const SpatialData d = read_spatial_csv(dir / "ok.csv", &names);
    CHECK(names == std::vector<std::string>{"Cu", "Zn"});
    CHECK(d.n() == 2);
    CHECK(d.p() == 2);
    CHECK(d.values(1, 1) == 4.0);
    write_text(dir / "bad.csv", "a,b,c\n0,0,1\n");
    CHECK_THROWS_AS(read_spatial_csv(dir / "bad.csv"), DataError);
    CHECK_THROWS_AS(read_spatial_csv(dir / "missing.csv"), DataError);
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("study") {
  TEST_CASE("method specs") {
    for (const auto& m : default_study_methods()) {
      CHECK(MethodSpec::parse(m.to_string()).to_string() == m.to_string());
    }
    CHECK(default_study_methods().size() == 8);
    CHECK(MethodSpec::parse("sbss//ring:0:2").kernels.front() == KernelSpec::ring(0, 2));
    CHECK_THROWS_AS(MethodSpec::parse("sd/grid:2x2"), ConfigError);
    CHECK_THROWS_AS(MethodSpec::parse("sd"), ConfigError);
    CHECK_THROWS_AS(MethodSpec::parse("sjd/grid:2x2"), ConfigError);
    CHECK_THROWS_AS(MethodSpec::parse("sbss/halve-x/ball:2"), ConfigError);
    CHECK_THROWS_AS(MethodSpec::parse("fobi/halve-x"), ConfigError);
    CHECK_THROWS_AS(MethodSpec::parse("jd/grid:2x2/ball:2"), ConfigError);
    CHECK_THROWS_AS(MethodSpec::parse("pca"), ConfigError);
  }

  TEST_CASE("config round trip and validation") {
    const StudyConfig def;
    const StudyConfig back = StudyConfig::from_config(def.to_config());
    CHECK(back.to_config().dump() == def.to_config().dump());
    CHECK(def.reps == 100);

    KeyValueConfig cfg;
    cfg.set("unknown", "1");
    CHECK_THROWS_AS(StudyConfig::from_config(cfg), ConfigError);
    KeyValueConfig bad_setting;
    bad_setting.set("settings", "7");
    CHECK_THROWS_AS(StudyConfig::from_config(bad_setting), ConfigError);
    KeyValueConfig bad_reps;
    bad_reps.set("reps", "0");
    CHECK_THROWS_AS(StudyConfig::from_config(bad_reps), ConfigError);
  }

  TEST_CASE("replicate seeds are distinct and stable") {
    CHECK(replicate_seed(1, 1, Pattern::Uniform, 20, 1) == replicate_seed(1, 1, Pattern::Uniform, 20, 1));
    CHECK(replicate_seed(1, 1, Pattern::Uniform, 20, 1) != replicate_seed(1, 1, Pattern::Uniform, 20, 2));
    CHECK(replicate_seed(1, 1, Pattern::Uniform, 20, 1) != replicate_seed(1, 1, Pattern::Skewed, 20, 1));
    CHECK(replicate_seed(1, 1, Pattern::Uniform, 20, 1) != replicate_seed(2, 1, Pattern::Uniform, 20, 1));
  }

  TEST_CASE("small study is deterministic across thread counts") {
    StudyConfig c;
    c.settings = {1, 4};
    c.n_sides = {10};
    c.reps = 3;
    c.threads = 1;
    const auto one = run_study(c);
    c.threads = 3;
    int calls = 0;
    const auto three = run_study(c, [&](int, int total) {
      ++calls;
      CHECK(total == 12);
    });
    CHECK(calls == 12);
    CHECK(replicates_csv(c, one) == replicates_csv(c, three));
    CHECK(one.size() == 2 * 2 * 1 * 8 * 3);

    const auto agg = aggregate(one);
    CHECK(agg.size() == 2 * 2 * 8);
    for (const auto& a : agg) {
      double sum = 0.0;
      int n = 0;
      for (const auto& r : one) {
        if (r.setting == a.setting && r.pattern == a.pattern && r.n_side == a.n_side &&
            r.method_index == a.method_index && r.mdi) {
          sum += *r.mdi;
          ++n;
        }
      }
      CHECK(a.reps == 3);
      CHECK(a.n_ok == n);
      if (n > 0) CHECK(*a.mean_mdi == doctest::Approx(sum / n).epsilon(1e-14));
    }
    const std::string csv = aggregate_csv(c, agg);
    CHECK(csv.rfind("setting,pattern,n_side,method,partition,kernels,reps,n_ok,mean_mdi\n", 0) == 0);
  }

  TEST_CASE("random mixing is undone by the fitted model") {
    StudyConfig c;
    c.mixing = Mixing::Random;
    const auto rep = simulate_replicate(c, 3, Pattern::Uniform, 20, 99);
    CHECK(rep.A.rows() == 3);
    CHECK((rep.A - Matrix::Identity(3, 3)).norm() > 0.1);
    const auto model = MethodSpec::parse("fobi").fit(rep.data, Rect::square(20));
    const double v = mdi(model.W * rep.A);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }

  TEST_CASE("failures become rows without mdi") {
    StudyConfig c;
    c.settings = {1};
    c.patterns = {Pattern::Uniform};
    c.n_sides = {2};  // 4 points: too few for a 2x2 grid with p = 3 per block
    c.methods = {MethodSpec::parse("jd/grid:2x2"), MethodSpec::parse("fobi")};
    c.reps = 2;
    const auto rows = run_study(c);
    REQUIRE(rows.size() == 4);
    CHECK_FALSE(rows[0].mdi.has_value());
    CHECK_FALSE(rows[0].failure.empty());
    const auto agg = aggregate(rows);
    CHECK(agg[0].n_ok == 0);
    CHECK_FALSE(agg[0].mean_mdi.has_value());
    const std::string csv = replicates_csv(c, rows);
    CHECK(csv.find(",,false\n") != std::string::npos);
  }
}

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "hsgrowth/config.hpp"
#include "hsgrowth/frame_io.hpp"

using namespace hsgrowth;

TEST(FrameIo, GoldenFormat) {
  const GridSpec g = GridSpec::make(0.0, 1.0, 2);
  ScalarField f(g);
  f(1, 1) = 0.1;
  f(2, 1) = 1.0;
  f(1, 2) = -2.5;
  f(2, 2) = 0.0;
  std::ostringstream out;
  write_frame(out, f, 0.25, "n");
  EXPECT_EQ(out.str(),
            "# t=0.25 nx=2 h=0.5 field=n\n"
            "0.10000000000000001,1\n"
            "-2.5,0\n");
}

TEST(FrameIo, RoundTripIsExact) {
  const GridSpec g = GridSpec::make(-2.5, 2.5, 7);
  const ScalarField f = cell_average_init(
      [](double x, double y) { return std::exp(-x * x) * std::sin(3 * y) / 3.0; }, g);
  std::stringstream buffer;
  write_frame(buffer, f, 1.0 / 3.0, "W");
  const Frame frame = read_frame(buffer);
  EXPECT_EQ(frame.t, 1.0 / 3.0);
  EXPECT_EQ(frame.nx, 7);
  EXPECT_EQ(frame.h, g.h);
  EXPECT_EQ(frame.field, "W");
  ASSERT_EQ(frame.values.size(), 49u);
  for (std::size_t k = 0; k < 49; ++k) EXPECT_EQ(frame.values[k], f.values()[k]);
}

TEST(FrameIo, RowsAreIndexedByJ) {
  const GridSpec g = GridSpec::make(0.0, 3.0, 3);
  ScalarField f(g);
  f(3, 1) = 7.0;
  std::stringstream buffer;
  write_frame(buffer, f, 0.0, "n");
  const Frame frame = read_frame(buffer);
  EXPECT_EQ(frame.values[2], 7.0);
}

TEST(FrameIo, MalformedInput) {
  std::istringstream no_header("1,2\n3,4\n");
  EXPECT_THROW(read_frame(no_header), FrameFormatError);
  std::istringstream short_rows("# t=0 nx=2 h=0.5 field=n\n1,2\n");
  EXPECT_THROW(read_frame(short_rows), FrameFormatError);
  std::istringstream ragged("# t=0 nx=2 h=0.5 field=n\n1,2\n3\n");
  EXPECT_THROW(read_frame(ragged), FrameFormatError);
  std::istringstream garbage("# t=0 nx=2 h=0.5 field=n\n1,x\n3,4\n");
  EXPECT_THROW(read_frame(garbage), FrameFormatError);
}

TEST(FrameIo, FileNames) {
  EXPECT_EQ(frame_filename("n", 0), "n_00000000.csv");
  EXPECT_EQ(frame_filename("p", 1234), "p_00001234.csv");
}

TEST(Config, Defaults) {
  const SimConfig cfg;
  EXPECT_EQ(cfg.lo, -2.5);
  EXPECT_EQ(cfg.hi, 2.5);
  EXPECT_EQ(cfg.bc, BoundaryCondition::Neumann);
  EXPECT_EQ(cfg.params.gamma(), 3.0);
  EXPECT_EQ(cfg.cfl.mode, CflMode::StrictLemma41);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, ParsesAllKeys) {
  const SimConfig cfg = parse_config(R"(
    # comment line
    lo = 0
    hi = 2       # trailing comment
    n_cells = 16
    bc = periodic
    mu = 0.5
    a = 2
    gamma = 4
    alpha = 3
    beta = 1.5
    theta = 2
    cfl_mode = strict_lemma43
    safety = 0.5
    practical_number = 0.3
    max_dt = 0.01
    rel_tolerance = 1e-11
    max_iterations = 500
    t_end = 0.75
    output_every = 10
    output_dir = some/dir
    init = custom:exp(-x^2-y^2)
    check_invariants = false
    quadrature = midpoint
  )");
  EXPECT_EQ(cfg.lo, 0.0);
  EXPECT_EQ(cfg.hi, 2.0);
  EXPECT_EQ(cfg.n_cells, 16);
  EXPECT_EQ(cfg.bc, BoundaryCondition::Periodic);
  EXPECT_EQ(cfg.params.mu(), 0.5);
  EXPECT_EQ(cfg.params.a(), 2.0);
  EXPECT_EQ(cfg.params.gamma(), 4.0);
  EXPECT_EQ(cfg.params.alpha(), 3.0);
  EXPECT_EQ(cfg.params.beta(), 1.5);
  EXPECT_EQ(cfg.params.theta(), 2.0);
  EXPECT_EQ(cfg.cfl.mode, CflMode::StrictLemma43);
  EXPECT_EQ(cfg.cfl.safety, 0.5);
  EXPECT_EQ(cfg.cfl.practical_number, 0.3);
  EXPECT_EQ(cfg.cfl.max_dt, 0.01);
  EXPECT_EQ(cfg.elliptic.rel_tolerance, 1e-11);
  EXPECT_EQ(cfg.elliptic.max_iterations, 500);
  EXPECT_EQ(cfg.t_end, 0.75);
  EXPECT_EQ(cfg.output_every, 10);
  EXPECT_EQ(cfg.output_dir, "some/dir");
  EXPECT_EQ(cfg.init.kind, InitialData::Kind::Custom);
  EXPECT_DOUBLE_EQ(cfg.init.function()(1.0, 0.0), std::exp(-1.0));
  EXPECT_FALSE(cfg.check_invariants);
  EXPECT_EQ(cfg.quadrature, Quadrature::Midpoint);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("colour = blue"), ConfigError);
  EXPECT_THROW(parse_config("n_cells = 3.5"), ConfigError);
  EXPECT_THROW(parse_config("gamma = 1"), ConfigError);
  EXPECT_THROW(parse_config("bc = dirichlet"), ConfigError);
  EXPECT_THROW(parse_config("init = uniform:abc"), ConfigError);
  EXPECT_THROW(parse_config("init = custom:exp("), ConfigError);
  EXPECT_THROW(parse_config("just words"), ConfigError);
  try {
    parse_config("lo = 0\n\nmu = -1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Config, Validation) {
  SimConfig cfg;
  cfg.n_cells = 3;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.t_end = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.hi = cfg.lo;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.t_end = 0.0;
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, Overrides) {
  SimConfig cfg;
  apply_override(cfg, "gamma=10");
  apply_override(cfg, " init = gaussian2 ");
  EXPECT_EQ(cfg.params.gamma(), 10.0);
  EXPECT_EQ(cfg.params.mu(), 1.0);
  EXPECT_EQ(cfg.init.kind, InitialData::Kind::Gaussian2);
  EXPECT_THROW(apply_override(cfg, "gamma"), ConfigError);
}

TEST(InitialData, ParseAndPrint) {
  for (const char* text : {"gaussian1", "gaussian2", "uniform:0.5", "custom:x+y"}) {
    EXPECT_EQ(InitialData::parse(text).to_string(), text);
  }
  EXPECT_THROW(InitialData::parse("gaussian3"), ConfigError);
}

TEST(InitialData, GaussianShapes) {
  const auto g1 = InitialData::gaussian1().function();
  EXPECT_DOUBLE_EQ(g1(0, 0), 0.5);
  const auto g2 = InitialData::gaussian2().function();
  EXPECT_NEAR(g2(0.7, 0.0), 0.5, 1e-6);
  EXPECT_NEAR(g2(-0.6, 0.2), 0.5, 1e-6);
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"gauss1.cfg", "gauss2.cfg", "uniform.cfg"}) {
    const auto path = std::filesystem::path(HSGROWTH_CONFIG_DIR) / name;
    EXPECT_NO_THROW(load_config(path.string()).validate()) << name;
  }
  EXPECT_THROW(load_config("/nonexistent/file.cfg"), ConfigError);
}

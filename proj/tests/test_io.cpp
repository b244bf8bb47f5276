#include <catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "generators.hpp"
#include "rpde/error.hpp"
#include "rpde/io.hpp"

using namespace rpde;

TEST_CASE("format_double round-trips") {
  gen::for_all(200, 1, [](gen::Rng& r, std::size_t) {
    const double v = r.normal() * std::pow(10.0, r.uniform(-30, 30));
    CHECK(std::stod(io::format_double(v)) == v);
  });
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("rough path round-trip") {
  gen::for_all(10, 2, [](gen::Rng& r, std::size_t) {
    const RoughPath X = fbm_lift({0.4 + 0.1 * r.uniform(0, 1), 1 + r.index(1, 80), r.uniform(0.5, 3), r.bits()});
    std::stringstream ss;
    io::write_rough_path(ss, X);
    const RoughPath Y = io::read_rough_path(ss);
    CHECK(Y.alpha() == X.alpha());
    CHECK(Y.provenance() == X.provenance());
    CHECK(std::equal(X.x().begin(), X.x().end(), Y.x().begin(), Y.x().end()));
    CHECK(std::equal(X.x2_step().begin(), X.x2_step().end(), Y.x2_step().begin(), Y.x2_step().end()));
    CHECK(Y.grid().same_as(X.grid(), 0.0));
  });

  const auto dir = std::filesystem::temp_directory_path() / "rpde-test-io";
  const RoughPath X = fbm_lift({0.45, 16, 1.0, 4});
  io::save_rough_path(dir / "sub" / "x.csv", X);
  const RoughPath Y = io::load_rough_path(dir / "sub" / "x.csv");
  CHECK(std::equal(X.x().begin(), X.x().end(), Y.x().begin(), Y.x().end()));
  CHECK_THROWS_AS(io::load_rough_path(dir / "missing.csv"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed rough path files") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return io::read_rough_path(in);
  };
  CHECK_THROWS_AS(parse(""), InvalidArgument);
  CHECK_THROWS_AS(parse("t,x,x2_step\n0,0,0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("# rpde-rough-path alpha=0.4\n0,0,0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("# rpde-rough-path alpha=0.4\nt,x,x2_step\n0,0,0\n0.5,1,\n1,1,0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("# rpde-rough-path alpha=0.4\nt,x,x2_step\n0,0,0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("# rpde-rough-path alpha=0.4\nt,x,x2_step\n0,0,abc\n1,1,\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("# rpde-rough-path alpha=0.4\nt,x,x2_step\n0,0\n1,1,\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("# rpde-rough-path alpha=0.2\nt,x,x2_step\n0,0,0.5\n1,1,\n"), InvalidArgument);
  CHECK_NOTHROW(parse("# rpde-rough-path alpha=0.4\nt,x,x2_step\n0,0,0.5\n1,1,\n"));
}

TEST_CASE("field round-trip and malformed input") {
  gen::for_all(10, 3, [](gen::Rng& r, std::size_t) {
    const auto u = gen::field(r, 1 + r.index(0, 2), r.index(0, 4));
    std::stringstream ss;
    io::write_field(ss, u);
    CHECK(io::read_field(ss) == u);
  });
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return io::read_field(in);
  };
  CHECK_THROWS_AS(parse(""), InvalidArgument);
  CHECK_THROWS_AS(parse("dim,cutoff\n1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("dim,cutoff\n1,1\nk_1,re,im\n2,1,0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("dim,cutoff\n1,1\nk_1,re,im\n0,1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("dim,cutoff\n1,1\nk_1,re,im\n0,1,0\n"), InvalidArgument);
}

TEST_CASE("collocation and norm rows") {
  SpectralField u(1, 2);
  u.at({0}) = 2.0;
  std::ostringstream out;
  io::write_collocation_csv(out, u, 5);
  const std::string text = out.str();
  CHECK(text.rfind("x1,u\n0,2\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);

  std::ostringstream n;
  io::write_norm_header(n);
  io::write_norm_row(n, {1, 2, 3, 4, 5, 15});
  CHECK(n.str() == "sup_y,sup_yp,hol_yp,hol_R,hol2_R,total\n1,2,3,4,5,15\n");
}

#include <limits>

#include "doctest.h"

#include "afa/coalition_game.hpp"
#include "afa/errors.hpp"
#include "test_games.hpp"

using namespace afa;
using namespace afa_test;

TEST_CASE("make_game validates its table") {
  const CoalitionGame g = make_game(1, {0, 5});
  CHECK(g.empty_value() == 0);
  CHECK(g.value(Coalition::of({1})) == 5);

  CHECK_THROWS_AS(make_game(2, {0, 1, 3}), DimensionMismatch);
  CHECK_THROWS_AS(make_game(0, {1}), NOutOfRange);
  CHECK_THROWS_AS(make_game(21, std::vector<double>(1u << 21, 0.0)), NOutOfRange);
  CHECK_THROWS_AS(make_game(1, {0, std::numeric_limits<double>::quiet_NaN()}),
                  NonFinite);
}

TEST_CASE("grand_gap") {
  CHECK(grand_gap(g2()) == 6);
  CHECK(grand_gap(g3()) == 1);
  CHECK(grand_gap(make_game(2, {4.2, 4.2, 4.2, 4.2})) == 0);
}

TEST_CASE("is_additive") {
  const auto cert = is_additive(gadd(), 1e-12);
  REQUIRE(cert.additive);
  REQUIRE(cert.a.has_value());
  CHECK((*cert.a)[0] == 1);
  CHECK((*cert.a)[1] == 2);
  CHECK((*cert.a)[2] == 3);
  CHECK(cert.max_residual == 0);

  CHECK_FALSE(is_additive(g3(), 1e-12).additive);

  const auto flat = is_additive(make_game(2, {4.2, 4.2, 4.2, 4.2}), 1e-12);
  CHECK(flat.additive);
  CHECK((*flat.a)[0] == 0);
  CHECK((*flat.a)[1] == 0);
}

TEST_CASE("certificate reconstruction round-trips") {
  const auto cert = is_additive(gadd());
  REQUIRE(cert.additive);
  std::vector<double> values(8);
  for (unsigned m = 0; m < 8; ++m) {
    values[m] = gadd().empty_value();
    for (int j = 0; j < 3; ++j)
      if (m >> j & 1u) values[m] += (*cert.a)[j];
  }
  const auto again = is_additive(make_game(3, std::move(values)), 1e-15);
  CHECK(again.additive);
  CHECK(again.max_residual == 0);
}

TEST_CASE("marginal_to_grand") {
  CHECK(marginal_to_grand(g3(), 1) == 1);
  CHECK(marginal_to_grand(g3(), 2) == 0);
  CHECK(marginal_to_grand(gadd(), 3) == 3);
  CHECK_THROWS_AS(marginal_to_grand(g3(), 0), IndexOutOfRange);
  CHECK_THROWS_AS(marginal_to_grand(g3(), 4), IndexOutOfRange);
}

TEST_CASE("game JSON round-trips bit-exactly") {
  const CoalitionGame g = make_game(2, {0.1, -1.0 / 3.0, 3e-17, 6});
  const CoalitionGame back = game_from_json(game_to_json(g));
  REQUIRE(back.n() == 2);
  for (unsigned m = 0; m < 4; ++m) CHECK(back.value(m) == g.value(m));

  CHECK(game_from_json("{\"n\":2,\"values\":[0,1,3,6]}").value(3) == 6);
  CHECK_THROWS_AS(game_from_json("{\"n\":2,\"values\":[0,1,3]}"), DimensionMismatch);
  CHECK_THROWS_AS(game_from_json("{\"n\":2,\"values\":[0,1,3,6],\"extra\":1}"),
                  ParseError);
  CHECK_THROWS_AS(game_from_json("not json"), ParseError);
}

TEST_CASE("coalition popcount matches kernel size lookup") {
  for (unsigned m = 0; m < 32; ++m) {
    int count = 0;
    for (int j = 1; j <= 5; ++j) count += Coalition{m}.contains(j) ? 1 : 0;
    CHECK(Coalition{m}.size() == count);
  }
}

#include <doctest.h>

#include <random>

#include "momcert/dsl.hpp"
#include "momcert/network.hpp"

using namespace momcert;

namespace {

Polynomial P(const char* text, std::size_t n = 2) { return parse_polynomial(text, n); }

ReactionNetwork example4() {
  ReactionNetwork net({"S1", "S2"});
  net.add_mass_action("r1", {1, 1}, {2, 1}, Rational(1));
  net.add_mass_action("r2", {1, 1}, {1, 2}, Rational(1));
  net.add_mass_action("r3", {1, 1}, {0, 0}, Rational(2));
  return net;
}

ReactionNetwork example5() {
  ReactionNetwork net({"S1", "S2"});
  net.add_polynomial("r1", {2, -1}, P("x2^2"));
  net.add_polynomial("r2", {-1, 1}, P("x1^2"));
  return net;
}

}  // namespace

TEST_CASE("mass-action construction") {
  auto a = build_mass_action({1, 0}, {0, 1}, Rational(3, 2));
  CHECK(a.jump == IntVector{-1, 1});
  CHECK(a.propensity == P("3/2*x1"));
  auto b = build_mass_action({2}, {0}, Rational(1));
  CHECK(b.jump == IntVector{-2});
  CHECK(b.propensity == P("x1^2 - x1", 1));
  auto c = build_mass_action({1, 1}, {2, 1}, Rational(1));
  CHECK(c.jump == IntVector{1, 0});
  CHECK(c.propensity == P("x1*x2"));
  CHECK_THROWS_AS(build_mass_action({1}, {0}, Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(build_mass_action({-1}, {0}, Rational(1)), std::invalid_argument);
}

TEST_CASE("properness") {
  CHECK(all_proper(validate_properness(example4())));

  ReactionNetwork bad({"S1"});
  bad.add_polynomial("r", {-1}, P("1", 1));
  const auto v = validate_properness(bad);
  CHECK_FALSE(v[0].proper);
  REQUIRE(v[0].witness);
  CHECK(*v[0].witness == IntVector{0});
  CHECK(v[0].species == std::size_t{0});

  ReactionNetwork ok({"S1", "S2"});
  ok.add_polynomial("r", {-2, 3}, P("x1*(x1-1)"));
  CHECK(validate_properness(ok)[0].proper);
}

TEST_CASE("proper propensities vanish wherever the jump leaves the lattice") {
  for (const auto& net : {example4(), example5()}) {
    for (std::size_t j = 0; j < net.n_reactions(); ++j)
      for (std::int64_t a = 0; a <= 6; ++a)
        for (std::int64_t b = 0; b <= 6; ++b) {
          const IntVector x{a, b};
          const auto& nu = net.reaction(j).jump;
          if (a + nu[0] < 0 || b + nu[1] < 0) CHECK(net.propensity(j).evaluate(x) == 0);
        }
  }
}

TEST_CASE("regularity") {
  ReactionNetwork conv({"S1", "S2"});
  conv.add_mass_action("f", {1, 0}, {0, 1}, Rational(1));
  CHECK(check_regularity(conv, 3)[0].status == RegularityStatus::Analytic);

  ReactionNetwork shifted({"S1", "S2"});
  shifted.add_polynomial("r", {0, 1}, P("x1 - 2"));
  const auto v = check_regularity(shifted, 5);
  CHECK(v[0].status == RegularityStatus::Violation);
  bool at0 = false, at1 = false, at2 = false;
  for (const auto& x : v[0].violations) {
    at0 |= x[0] == 0;
    at1 |= x[0] == 1;
    at2 |= x[0] == 2;
  }
  CHECK(at0);
  CHECK(at1);
  CHECK(at2);

  ReactionNetwork ex2({"S1", "S2"});
  ex2.add_polynomial("r1", {2, -1}, P("x2^2"));
  ex2.add_polynomial("r2", {-1, 1}, P("x1"));
  for (const auto& r : check_regularity(ex2, 10)) CHECK(r.status == RegularityStatus::RegularOnBox);

  // Catalytic mass action is not regular: S1 + S2 -> 2 S1 + S2 cannot fire at (0, k).
  CHECK(check_regularity(example4(), 4)[0].status == RegularityStatus::Violation);
}

TEST_CASE("nonnegativity on the box") {
  ReactionNetwork net({"S1"});
  net.add_polynomial("r", {1}, P("x1^2 - 3*x1 + 2", 1));
  const auto v = check_nonnegativity(net, 5);
  CHECK(v[0].nonnegative_on_box);
  ReactionNetwork neg({"S1"});
  neg.add_polynomial("r", {1}, P("x1^2 - 3*x1 + 1", 1));
  const auto w = check_nonnegativity(neg, 5);
  CHECK_FALSE(w[0].nonnegative_on_box);
  REQUIRE(w[0].witness);
  CHECK(*w[0].witness == IntVector{1});
  for (const auto& r : check_nonnegativity(example4(), 25)) CHECK(r.nonnegative_on_box);
}

TEST_CASE("drift and weighted drift") {
  CHECK(weighted_drift(example5(), {Rational(2), Rational(3)}) == P("x1^2 + x2^2"));
  CHECK(weighted_drift(example4(), {Rational(1), Rational(1)}) == P("-2*x1*x2"));
  ReactionNetwork bd({"X"});
  bd.add_polynomial("birth", {1}, P("x1^2", 1));
  bd.add_polynomial("death", {-1}, P("2*x1^2", 1));
  CHECK(weighted_drift(bd, {Rational(1)}) == P("-x1^2", 1));
  CHECK_THROWS_AS(weighted_drift(bd, {Rational(0)}), std::invalid_argument);
  CHECK_THROWS_AS(weighted_drift(bd, {Rational(1), Rational(1)}), std::invalid_argument);
}

TEST_CASE("drift matches direct summation at random points") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> pick(0, 30);
  for (const auto& net : {example4(), example5()}) {
    const auto f = drift(net);
    for (int k = 0; k < 100; ++k) {
      const IntVector x{pick(rng), pick(rng)};
      RationalVector direct(2, Rational(0));
      for (std::size_t j = 0; j < net.n_reactions(); ++j)
        for (std::size_t i = 0; i < 2; ++i) direct[i] += make_rational(net.reaction(j).jump[i]) * net.propensity(j).evaluate(x);
      CHECK(f.evaluate(x) == direct);
    }
  }
}

TEST_CASE("dimension checks when adding reactions") {
  ReactionNetwork net({"S1", "S2"});
  CHECK_THROWS_AS(net.add_polynomial("r", {1}, P("x1")), DimensionMismatch);
  CHECK_THROWS_AS(net.add_polynomial("r", {1, 0}, P("x1", 3)), DimensionMismatch);
}

// ---------------------------------------------------------------------------
// Network language

TEST_CASE("DSL parses the documented form") {
  const auto net = parse_network(R"(
# comment line
species S1 S2
reaction r1: S1 + S2 -> 2 S1 + S2 @ mass_action 1
reaction r2: . -> S1 @ poly "x2^2"   # trailing comment
reaction r3: 2S1 -> . @ mass_action 3/2
init 10 10
)");
  CHECK(net.n_species() == 2);
  CHECK(net.n_reactions() == 3);
  CHECK(net.reaction(0).jump == IntVector{1, 0});
  CHECK(net.propensity(0) == P("x1*x2"));
  CHECK(net.reaction(1).jump == IntVector{1, 0});
  CHECK(net.propensity(1) == P("x2^2"));
  CHECK(net.propensity(2) == P("3/2*x1^2 - 3/2*x1"));
  REQUIRE(net.initial_state());
  CHECK(*net.initial_state() == IntVector{10, 10});
}

TEST_CASE("DSL accepts species names inside poly propensities") {
  const auto net = parse_network("species A B\nreaction r: A -> B @ poly \"A*B + A\"\n");
  CHECK(net.propensity(0) == P("x1*x2 + x1"));
}

TEST_CASE("DSL errors carry line numbers") {
  auto line_of = [](const char* text) {
    try {
      parse_network(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("species S1\nreaction r1 S1 ->\n") == 2);
  CHECK(line_of("species S1\nreaction r1: S1 -> S9 @ mass_action 1\n") == 2);
  CHECK(line_of("species S1\n\nreaction r1: S1 -> . @ mass_action -1\n") == 3);
  CHECK(line_of("species S1\nreaction r1: S1 -> . @ mass_action 0\n") == 2);
  CHECK(line_of("species S1\nreaction r1: S1 -> . @ poly \"x2\"\n") == 2);
  CHECK(line_of("reaction r1: S1 -> . @ mass_action 1\n") == 1);
  CHECK(line_of("species S1\nreaction r1: S1 -> . @ mass_action 1\nreaction r1: . -> S1 @ mass_action 1\n") == 3);
  CHECK(line_of("species S1\nreaction r1: S1 -> . @ mass_action 1\ninit -1\n") == 3);
  CHECK(line_of("species S1\nreaction r1: S1 -> . @ mass_action 1\ninit 1 2\n") == 3);
  CHECK(line_of("species S1\nfrobnicate\n") == 2);
  CHECK_THROWS_AS(parse_network("species S1\n"), ParseError);
}

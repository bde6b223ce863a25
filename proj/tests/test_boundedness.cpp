#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "momcert/boundedness.hpp"
#include "momcert/dsl.hpp"

using namespace momcert;

namespace {

const IntMatrix kConservation{{-1, 1}, {1, -1}};
const IntMatrix kExample1{{3, -2}, {-2, 3}};
const IntMatrix kExample2{{2, -1}, {-1, 1}};

ReactionNetwork example2() {
  return parse_network(
      "species S1 S2\n"
      "reaction r1: S2 -> 2 S1 @ poly \"x2^2\"\n"
      "reaction r2: S1 -> S2 @ poly \"x1\"\n");
}

ReactionNetwork example3(int m) {
  const auto e = std::to_string(m);
  return parse_network("species X\nreaction birth: . -> X @ poly \"x1^" + e + "\"\nreaction death: X -> . @ poly \"2*x1^" +
                       e + "\"\n");
}

ReactionNetwork conservation() {
  return parse_network(
      "species S1 S2\nreaction f: S1 -> S2 @ mass_action 1\nreaction b: S2 -> S1 @ mass_action 1\n");
}

}  // namespace

TEST_CASE("per-species decisions") {
  const auto c = decide_species_boundedness(kConservation, 0);
  REQUIRE(is_bounded(c));
  CHECK(std::get<BoundednessCertificate>(c).alpha == IntVector{1, 1});

  const auto w1 = decide_species_boundedness(kExample1, 1);
  REQUIRE_FALSE(is_bounded(w1));
  CHECK(std::get<UnboundednessWitness>(w1).w == IntVector{1, 1});

  const auto w2 = decide_species_boundedness(kExample2, 0);
  REQUIRE_FALSE(is_bounded(w2));
  CHECK(std::get<UnboundednessWitness>(w2).w == IntVector{2, 3});
  CHECK(std::get<UnboundednessWitness>(w2).growth == IntVector{1, 1});
  CHECK_THROWS_AS(decide_species_boundedness(kExample2, 2), std::out_of_range);
}

TEST_CASE("verifiers reject tampered evidence") {
  CHECK(verify(BoundednessCertificate{{1, 1}, {0}}, kConservation));
  CHECK_FALSE(verify(BoundednessCertificate{{1, 2}, {0}}, kConservation));
  CHECK_FALSE(verify(BoundednessCertificate{{0, 1}, {0}}, kConservation));
  CHECK(verify(UnboundednessWitness{{2, 3}, 0, {1, 1}}, kExample2));
  // (1,1) is itself a valid witness for S1 (growth (1,0)), but not for S2.
  CHECK(verify(UnboundednessWitness{{1, 1}, 0, {1, 0}}, kExample2));
  CHECK_FALSE(verify(UnboundednessWitness{{1, 1}, 1, {1, 0}}, kExample2));
  CHECK_FALSE(verify(UnboundednessWitness{{1, 1}, 0, {1, 1}}, kExample2));
  CHECK_FALSE(verify(UnboundednessWitness{{0, 1}, 1, {-1, 1}}, kExample2));
  CHECK_FALSE(verify(UnboundednessWitness{{-1, 0}, 0, {-2, 1}}, kExample2));
}

TEST_CASE("subset decisions") {
  const std::vector<std::size_t> both{0, 1}, first{0};
  const auto s = decide_subset_boundedness(kConservation, both);
  REQUIRE(s.certificate);
  CHECK(s.certificate->alpha == IntVector{1, 1});

  const auto r = decide_subset_boundedness(kExample2, first);
  CHECK_FALSE(r.certificate);
  CHECK(r.unbounded == std::vector<std::size_t>{0});

  const auto p = decide_subset_boundedness(IntMatrix{{-1}, {-1}}, both);
  REQUIRE(p.certificate);
  CHECK(p.certificate->alpha == IntVector{1, 1});
}

TEST_CASE("additivity of certificates") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 4), entry(-3, 3);
  int pairs = 0;
  for (int trial = 0; trial < 300 && pairs < 50; ++trial) {
    const int n = dim(rng), m = dim(rng);
    IntMatrix nu(n, IntVector(m));
    for (auto& row : nu)
      for (auto& v : row) v = entry(rng);
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) {
        const auto a = decide_species_boundedness(nu, i), b = decide_species_boundedness(nu, k);
        if (!is_bounded(a) || !is_bounded(b)) continue;
        auto sum = std::get<BoundednessCertificate>(a).alpha;
        const auto& other = std::get<BoundednessCertificate>(b).alpha;
        for (int t = 0; t < n; ++t) sum[t] += other[t];
        CHECK(verify(BoundednessCertificate{sum, {static_cast<std::size_t>(i), static_cast<std::size_t>(k)}}, nu));
        ++pairs;
      }
  }
  CHECK(pairs >= 20);
}

TEST_CASE("classification of the worked examples") {
  const auto p2 = classify(example2());
  CHECK(p2.critical_species == std::vector<std::size_t>{0, 1});
  CHECK(p2.critical_reactions == std::vector<std::size_t>{0});
  CHECK(p2.nuc == IntMatrix{{2}, {-1}});
  CHECK(p2.nu2.empty());

  const auto p3 = classify(example3(2));
  CHECK(p3.critical_species == std::vector<std::size_t>{0});
  CHECK(p3.critical_reactions == std::vector<std::size_t>{0, 1});
  CHECK(p3.nuc == IntMatrix{{1, -1}});

  const auto p1 = classify(example3(1));
  CHECK(p1.critical_reactions.empty());

  const auto pc = classify(conservation());
  CHECK(pc.critical_species.empty());
  CHECK(pc.critical_reactions.empty());
  CHECK(pc.nuc.empty());
  CHECK(pc.nu2 == kConservation);
}

TEST_CASE("classification is invariant under relabeling") {
  const auto base = parse_network(
      "species A B C\n"
      "reaction r1: A + B -> 2 A + B @ mass_action 1\n"
      "reaction r2: 2 B -> C @ mass_action 1\n"
      "reaction r3: C -> 2 B @ mass_action 1\n"
      "reaction r4: A -> . @ mass_action 1\n"
      "reaction r5: . -> C @ poly \"A^2\"\n");
  const auto pb = classify(base);
  auto named = [](const std::vector<std::size_t>& idx, auto name_of) {
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(name_of(i));
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto crit_species = named(pb.critical_species, [&](std::size_t i) { return base.species_names()[i]; });
  const auto crit_reactions = named(pb.critical_reactions, [&](std::size_t j) { return base.reaction(j).name; });
  CHECK(crit_reactions == std::vector<std::string>{"r1", "r2", "r5"});

  std::vector<std::size_t> sp{0, 1, 2}, rp{0, 1, 2, 3, 4};
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    std::shuffle(sp.begin(), sp.end(), rng);
    std::shuffle(rp.begin(), rp.end(), rng);
    // New species k is old species sp[k]; new reaction j is old reaction rp[j].
    std::vector<std::string> names;
    for (auto k : sp) names.push_back(base.species_names()[k]);
    ReactionNetwork perm(names);
    for (auto j : rp) {
      const auto& r = base.reaction(j);
      IntVector jump;
      for (auto k : sp) jump.push_back(r.jump[k]);
      Polynomial a(3);
      for (const auto& [mono, c] : r.propensity.terms()) {
        std::vector<std::uint32_t> e;
        for (auto k : sp) e.push_back(mono[k]);
        a += Polynomial::monomial(Monomial(e), c);
      }
      perm.add_polynomial(r.name, jump, a);
    }
    const auto pp = classify(perm);
    CHECK(named(pp.critical_species, [&](std::size_t i) { return perm.species_names()[i]; }) == crit_species);
    CHECK(named(pp.critical_reactions, [&](std::size_t j) { return perm.reaction(j).name; }) == crit_reactions);
    for (std::size_t k = 0; k < 3; ++k) CHECK(pp.species_order[pp.species_position[k]] == k);
    for (std::size_t j = 0; j < 5; ++j) CHECK(pp.reaction_order[pp.reaction_position[j]] == j);
  }
}

TEST_CASE("monotone norms") {
  const std::vector<std::size_t> r1{0}, both{0, 1};
  const auto a = construct_monotone_norm(kExample2, r1);
  REQUIRE(a);
  CHECK(verify_monotone_norm(kExample2, r1, *a));
  CHECK(verify_monotone_norm(kExample2, r1, IntVector{1, 3}));
  CHECK_FALSE(construct_monotone_norm(kExample2, both));
  const auto c = construct_monotone_norm(IntMatrix{{-1, 0}, {0, -2}}, both);
  REQUIRE(c);
  CHECK(*c == IntVector{1, 1});
}

TEST_CASE("accessible set exploration") {
  const auto ex1 = parse_network(
      "species S1 S2\nreaction r1: 2 S2 -> 3 S1 @ mass_action 1\nreaction r2: 2 S1 -> 3 S2 @ mass_action 1\n");
  const auto s1 = explore_accessible(ex1, {1, 1});
  CHECK(s1.states == std::vector<IntVector>{{1, 1}});
  CHECK(s1.frontier_exhausted);

  const auto s2 = explore_accessible(conservation(), {2, 0});
  CHECK(s2.states.size() == 3);
  CHECK(s2.find({1, 1}));
  CHECK(s2.find({0, 2}));
  CHECK(s2.frontier_exhausted);
  CHECK(s2.path_to(*s2.find({0, 2})) == std::vector<std::size_t>{0, 0});

  const auto s3 = explore_accessible(example2(), {10, 10}, {100, 1000});
  CHECK(s3.cap_hit);
  CHECK_FALSE(s3.frontier_exhausted);
  CHECK(s3.states.size() == 100);
}

TEST_CASE("every sampled state has a valid firing path") {
  const auto net = example2();
  const auto s = explore_accessible(net, {2, 2}, {500, 40});
  for (std::size_t k = 0; k < s.states.size(); ++k) {
    IntVector x{2, 2};
    for (auto j : s.path_to(k)) {
      CHECK(net.propensity(j).evaluate(x) > 0);
      for (std::size_t i = 0; i < 2; ++i) x[i] += net.reaction(j).jump[i];
      CHECK(std::all_of(x.begin(), x.end(), [](auto v) { return v >= 0; }));
    }
    CHECK(x == s.states[k]);
  }
}

TEST_CASE("bounded species respect their certificate on the accessible set") {
  const auto net = parse_network(
      "species A B C\n"
      "reaction bind: A + B -> C @ mass_action 1\n"
      "reaction unbind: C -> A + B @ mass_action 1\n"
      "reaction grow: A -> 2 A @ mass_action 1\n");
  const IntVector x0{3, 2, 1};
  const auto s = explore_accessible(net, x0, {5000, 60});
  const auto nu = net.stoichiometry();
  int certified = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto d = decide_species_boundedness(nu, i);
    if (!is_bounded(d)) continue;
    ++certified;
    const auto& alpha = std::get<BoundednessCertificate>(d).alpha;
    auto dot = [&](const IntVector& y) {
      std::int64_t v = 0;
      for (std::size_t k = 0; k < 3; ++k) v += alpha[k] * y[k];
      return v;
    };
    for (const auto& y : s.states) CHECK(dot(y) <= dot(x0));
  }
  CHECK(certified == 2);  // B + C never grows; only A does
}

TEST_CASE("unboundedness thresholds") {
  const auto t2 = unboundedness_threshold(kExample2, {2, 3});
  CHECK(t2.sequence.firings == std::vector<std::size_t>{0, 0, 1, 1, 1});
  CHECK(t2.xbar == IntVector{0, 2});
  CHECK(t2.sequence.partial_sums.front() == IntVector{0, 0});
  CHECK(t2.sequence.partial_sums.back() == IntVector{2, 3});
  for (std::size_t l = 1; l < t2.sequence.partial_sums.size(); ++l) {
    int diff = 0;
    for (std::size_t j = 0; j < 2; ++j) diff += static_cast<int>(t2.sequence.partial_sums[l][j] - t2.sequence.partial_sums[l - 1][j]);
    CHECK(diff == 1);
  }
  CHECK(unboundedness_threshold(IntMatrix{{1}, {2}}, {1}).xbar == IntVector{0, 0});
  CHECK(unboundedness_threshold(kExample1, {1, 1}).xbar == IntVector{0, 2});
}

TEST_CASE("threshold states realize unboundedness") {
  const auto net = example2();
  const auto t = unboundedness_threshold(net.stoichiometry(), {2, 3});
  const IntVector x0{t.xbar[0] + 5, t.xbar[1] + 5};
  const auto s = explore_accessible(net, x0, {100000, 25});
  for (std::int64_t target = 6; target <= 20; ++target) {
    bool hit0 = false, hit1 = false;
    for (const auto& y : s.states) {
      hit0 |= y[0] > target;
      hit1 |= y[1] > target;
    }
    CHECK(hit0);
    CHECK(hit1);
  }
}

#include <doctest.h>

#include "support.hpp"

using namespace qdock;

namespace {

constexpr PhysChemVector kWeights = {5.0, 2.0, 0.0, 5.0, 1.0};

QuboProblem raw(std::size_t n, std::initializer_list<std::tuple<std::size_t, std::size_t, double>> entries,
                double offset = 0.0) {
  QuboProblem q(n);
  for (auto [a, b, v] : entries) q.add(a, b, v);
  q.set_offset(offset);
  q.finalize();
  return q;
}

QuboProblem tiny4_problem(PhysChemVector lambdas = {}) {
  Hyperparameters hp;
  hp.lambdas = lambdas;
  return build_full(load_complex(test::fixture("tiny4.json")), hp);
}

}  // namespace

TEST_CASE("single variable with negative diagonal") {
  const auto q = raw(1, {{0, 0, -1.0}});
  AnnealSchedule s;
  s.n_reads = 20;
  s.n_sweeps = 50;
  const auto set = simulated_anneal(q, s);
  REQUIRE(set.samples.size() == 20);
  for (const auto& smp : set.samples) {
    CHECK(smp.assignment.to_string() == "1");
    CHECK(smp.energy.total == -1.0);
  }
}

TEST_CASE("zero matrix returns the offset") {
  const auto q = raw(5, {}, 2.5);
  AnnealSchedule s;
  s.n_reads = 4;
  s.n_sweeps = 10;
  for (const auto& smp : simulated_anneal(q, s).samples) CHECK(smp.energy.total == 2.5);
  CHECK(brute_force(q).best().energy.total == 2.5);
}

TEST_CASE("two variable brute force") {
  const auto q = raw(2, {{0, 0, 1.0}, {1, 1, 1.0}, {0, 1, -3.0}});
  const auto set = brute_force(q, 4);
  REQUIRE(set.samples.size() == 4);
  CHECK(set.best().assignment.to_string() == "11");
  CHECK(set.best().energy.total == -1.0);
  CHECK(set.samples[1].energy.total == 0.0);
  CHECK(set.samples[3].energy.total == 1.0);
}

TEST_CASE("empty problem has one empty assignment") {
  const auto q = raw(0, {}, 3.0);
  const auto set = brute_force(q);
  REQUIRE(set.samples.size() == 1);
  CHECK(set.best().assignment.size() == 0);
  CHECK(set.best().energy.total == 3.0);
}

TEST_CASE("brute force refuses large problems") {
  QuboProblem q(kBruteForceMaxVars + 1);
  q.finalize();
  CHECK_THROWS_AS(brute_force(q), Error);
}

TEST_CASE("tiny4 optimum matches the oracle") {
  const auto q = tiny4_problem();
  const auto opt = brute_force(q);
  CHECK(opt.best().energy.total == doctest::Approx(0.10225188414892727).epsilon(1e-12));
  const auto weighted = brute_force(tiny4_problem(kWeights));
  CHECK(weighted.best().energy.total == doctest::Approx(-155.31973401705784).epsilon(1e-12));
  CHECK(weighted.best().assignment == test::pose_bits(*q.layout(), {4, 5, 2, 0}));
}

TEST_CASE("annealing reaches the tiny4 optimum in almost every read") {
  const auto q = tiny4_problem();
  const double best = brute_force(q).best().energy.total;
  AnnealSchedule s;
  s.seed = 7;
  const auto set = simulated_anneal(q, s);
  REQUIRE(set.samples.size() == 100);
  std::size_t hits = 0;
  for (const auto& smp : set.samples) {
    CHECK(smp.energy.total >= best - 1e-9);
    if (test::rel_close(smp.energy.total, best, 1e-9)) ++hits;
  }
  CHECK(hits >= 95);
}

TEST_CASE("annealing is reproducible and thread independent") {
  const auto q = tiny4_problem(kWeights);
  AnnealSchedule s;
  s.n_reads = 16;
  s.n_sweeps = 200;
  s.seed = 42;
  const auto a = simulated_anneal(q, s, 1);
  CHECK(a == simulated_anneal(q, s, 1));
  CHECK(a == simulated_anneal(q, s, 4));
  s.seed = 43;
  CHECK_FALSE(a == simulated_anneal(q, s, 1));
}

TEST_CASE("samples are sorted by energy then read") {
  const auto q = tiny4_problem(kWeights);
  AnnealSchedule s;
  s.n_reads = 30;
  s.n_sweeps = 5;
  const auto set = simulated_anneal(q, s);
  for (std::size_t k = 1; k < set.samples.size(); ++k) {
    const auto &p = set.samples[k - 1], &c = set.samples[k];
    CHECK((p.energy.total < c.energy.total || (p.energy.total == c.energy.total && p.read < c.read)));
  }
}

TEST_CASE("schedule validation and default temperatures") {
  AnnealSchedule s;
  s.n_reads = 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = {};
  s.t_initial = 1.0;
  s.t_final = 2.0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  const auto q = raw(3, {{0, 0, -4.0}, {1, 2, 0.5}});
  const auto t = resolve_temperatures(q, AnnealSchedule{});
  CHECK(t.initial == 4.0);
  CHECK(t.final == 4.0 / kDefaultTemperatureRatio);
}

TEST_CASE("flipping twice undoes the delta") {
  const auto q = tiny4_problem(kWeights);
  std::mt19937_64 rng(9);
  auto a = test::random_assignment(q.n_vars(), rng);
  for (std::size_t v = 0; v < q.n_vars(); ++v) {
    const double d1 = incremental_delta(q, a, v);
    a[v] ^= 1u;
    const double d2 = incremental_delta(q, a, v);
    a[v] ^= 1u;
    CHECK(d2 == -d1);
  }
}

TEST_CASE("isolated variable delta is its diagonal") {
  const auto q = raw(3, {{0, 0, 2.5}, {1, 2, -1.0}});
  Assignment a(3);
  CHECK(incremental_delta(q, a, 0) == 2.5);
  a[0] = 1;
  CHECK(incremental_delta(q, a, 0) == -2.5);
}

TEST_CASE("incremental delta matches recomputation") {
  const auto q = tiny4_problem(kWeights);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = test::random_assignment(q.n_vars(), rng);
    const auto v = std::size_t(rng() % q.n_vars());
    const double before = energy(q, a).total;
    const double delta = incremental_delta(q, a, v);
    a[v] ^= 1u;
    CHECK(std::abs(energy(q, a).total - before - delta) <= 1e-10 * std::max(1.0, std::abs(before)));
  }
}

TEST_CASE("external samples are scored and sorted") {
  const auto q = raw(2, {{0, 0, 1.0}, {1, 1, 1.0}, {0, 1, -3.0}});
  ExternalSampler sampler(parse_samples(R"(["10", "11", "00"])", 2));
  const auto set = sampler.sample(q);
  CHECK(set.sampler == "external");
  REQUIRE(set.samples.size() == 3);
  CHECK(set.samples[0].assignment.to_string() == "11");
  CHECK(set.samples[0].read == 1);
  CHECK(set.samples[2].energy.total == 1.0);
}

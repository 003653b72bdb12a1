// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include "qdock/physics.hpp"
#include "support.hpp"

using namespace qdock;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kOptimumRelTol = 1e-9;
constexpr std::size_t kMinOptimalReads = 95;
constexpr double kOracleSeconds = 30.0;
constexpr double kDecompositionRelTol = 1e-9;
constexpr double kLjRelTol = 1e-12;
constexpr double kAdjustedFloor = -1e-9;
constexpr double kTranslationTol = 1e-12;
constexpr double kPlantedSeconds = 10.0;
constexpr std::size_t kRandomAssignments = 1000;
constexpr std::size_t kRandomPoses = 10000;

constexpr PhysChemVector kReferenceLambdas = {5.0, 2.0, 0.0, 5.0, 1.0};

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Fixture {
  std::string name;
  ComplexInput input;
  LigandGraph lig;
  GridGraph grid;
};

std::vector<Fixture> load_fixtures() {
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(QDOCK_FIXTURE_DIR))
    if (entry.path().extension() == ".json") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<Fixture> out;
  for (const auto& p : paths) {
    Fixture f;
    f.input = load_complex(p);
    f.name = f.input.name;
    f.lig = build_ligand_graph(f.input);
    f.grid = build_grid_graph(f.input);
    out.push_back(std::move(f));
  }
  return out;
}

QuboProblem build(const Fixture& f, const PhysChemVector& lambdas) {
  Hyperparameters hp;
  hp.lambdas = lambdas;
  return build_full(f.lig, f.grid, hp);
}

std::vector<std::size_t> random_pose(std::size_t atoms, std::size_t points, std::mt19937_64& rng) {
  std::vector<std::size_t> all(points);
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (std::size_t k = 0; k < atoms; ++k) std::swap(all[k], all[k + rng() % (points - k)]);
  all.resize(atoms);
  return all;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail.clear();
  o.pass = false;
  if (o.detail.find(why) == std::string::npos) o.detail += (o.detail.empty() ? "" : "; ") + why;
}

Outcome oracle_equivalence(const std::vector<Fixture>& fixtures) {
  Outcome o;
  for (const auto& f : fixtures) {
    for (const auto& lambdas : {PhysChemVector{}, kReferenceLambdas}) {
      const auto start = Clock::now();
      const auto q = build(f, lambdas);
      if (q.n_vars() > kBruteForceMaxVars) continue;
      const double opt = brute_force(q).best().energy.total;
      AnnealSchedule s;
      s.n_reads = 100;
      s.n_sweeps = 2000;
      s.seed = 7;
      const auto set = simulated_anneal(q, s);
      std::size_t hits = 0;
      bool below = false;
      for (const auto& smp : set.samples) {
        if (test::rel_close(smp.energy.total, opt, kOptimumRelTol)) ++hits;
        else if (smp.energy.total < opt) below = true;
      }
      const double secs = since(start);
      const std::string tag = f.name + (lambdas == PhysChemVector{} ? "/geom" : "/weighted");
      o.detail += (o.detail.empty() ? "" : ", ") + tag + " " + std::to_string(hits) + "/100 in " + fmt(secs) + "s";
      if (hits < kMinOptimalReads || below || secs >= kOracleSeconds) o.pass = false;
    }
  }
  return o;
}

Outcome energy_decomposition(const std::vector<Fixture>& fixtures) {
  Outcome o;
  std::size_t checked = 0, valid_checked = 0;
  std::mt19937_64 rng(2);
  for (const auto& f : fixtures) {
    const auto q = build(f, kReferenceLambdas);
    const auto& layout = *q.layout();
    auto check = [&](const Assignment& a) {
      const auto e = energy(q, a);
      double sum = 0.0;
      for (auto t : kAllTerms) sum += e[t];
      if (!test::rel_close(e.total, sum, kDecompositionRelTol)) fail(o, f.name + " total != sum of terms");
      ++checked;
      const auto decoded = decode(a, q);
      if (const auto* pose = std::get_if<Pose>(&decoded)) {
        const double direct = test::direct_pose_energy(f.lig, f.grid, *q.build_info(), pose->point_of_atom);
        if (!test::rel_close(e.total, direct, kDecompositionRelTol)) fail(o, f.name + " pose formula mismatch");
        ++valid_checked;
      }
    };
    for (std::size_t k = 0; k < kRandomAssignments; ++k) check(test::random_assignment(q.n_vars(), rng));
    for (std::size_t k = 0; k < kRandomAssignments; ++k)
      check(test::pose_bits(layout, random_pose(layout.n_atoms, layout.n_points, rng)));
  }
  if (o.pass)
    o.detail = std::to_string(checked) + " assignments, " + std::to_string(valid_checked) + " valid decodings";
  return o;
}

Outcome penalty_correctness(const std::vector<Fixture>& fixtures) {
  Outcome o;
  std::size_t injected = 0;
  std::mt19937_64 rng(3);
  for (const auto& f : fixtures) {
    const auto q = build(f, kReferenceLambdas);
    const auto& layout = *q.layout();
    const double gamma = q.build_info()->gamma;
    for (std::size_t k = 0; k < kRandomAssignments; ++k) {
      const auto a = test::random_assignment(q.n_vars(), rng);
      const bool valid = std::holds_alternative<Pose>(decode(a, q));
      if (valid != (energy(q, a)[Term::Penalty] == 0.0)) fail(o, f.name + " validity/penalty disagree");
    }
    for (std::size_t k = 0; k < kRandomAssignments; ++k) {
      const auto pose = random_pose(layout.n_atoms, layout.n_points, rng);
      const auto base = test::pose_bits(layout, pose);
      if (energy(q, base)[Term::Penalty] != 0.0) fail(o, f.name + " valid pose has nonzero penalty");
      const std::size_t atom = rng() % layout.n_atoms;

      auto unassigned = base;
      unassigned[layout.index(atom, pose[atom])] = 0;
      std::vector<std::pair<const char*, Assignment>> cases = {{"unassigned", unassigned}};

      std::vector<bool> used(layout.n_points, false);
      for (auto j : pose) used[j] = true;
      for (std::size_t j = 0; j < layout.n_points; ++j)
        if (!used[j]) {
          auto twice = base;
          twice[layout.index(atom, j)] = 1;
          cases.emplace_back("double assignment", twice);
          break;
        }
      if (layout.n_atoms > 1) {
        const std::size_t other = (atom + 1) % layout.n_atoms;
        auto collide = base;
        collide[layout.index(atom, pose[atom])] = 0;
        collide[layout.index(atom, pose[other])] = 1;
        cases.emplace_back("collision", collide);
      }
      for (const auto& [what, a] : cases) {
        ++injected;
        if (std::holds_alternative<Pose>(decode(a, q))) fail(o, f.name + " " + what + " decoded as valid");
        if (!(energy(q, a)[Term::Penalty] >= gamma)) fail(o, f.name + " " + what + " penalty below gamma");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(injected) + " injected violations, all >= gamma";
  return o;
}

Outcome analytic_physics() {
  Outcome o;
  const AtomTypeTable table{{0.1, 0.4, 0.07, 0.2}, {1.5, 2.5, 1.9, 2.0}};
  for (std::size_t a = 0; a < table.n_types(); ++a)
    for (std::size_t k = 0; k < table.n_types(); ++k) {
      const double eps = physics::mix_epsilon(table.epsilon[a], table.epsilon[k]);
      const double rmin = physics::mix_r_min(table.r_min[a], table.r_min[k]);
      const std::vector p = {test::protein_atom(1, Vec3(0, rmin, 0), 0.0, int(k))};
      const double v = lj_vector(Vec3::Zero(), p, table)(Eigen::Index(a));
      if (std::abs(v + eps) > kLjRelTol * eps) fail(o, "LJ minimum off for types " + std::to_string(a) + "," + std::to_string(k));
    }

  if (physics::mix_epsilon(0.1, 0.4) != 0.2 || physics::mix_r_min(1.5, 2.5) != 2.0)
    fail(o, "Lorentz-Berthelot worked example");

  // Each subset sums q/r to a signed power of two, so both sides are one
  // rounding of the same real number.
  std::size_t superpositions = 0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (double dielectric : {1.0, 4.0}) {
        const double qa = std::ldexp(1.0, a), qb = std::ldexp(1.0, b);
        const std::vector set_a = {test::protein_atom(1, Vec3(2, 0, 0), qa), test::protein_atom(2, Vec3(0, -4, 0), qa),
                                   test::protein_atom(3, Vec3(0, 0, 4), qa)};
        const std::vector set_b = {test::protein_atom(4, Vec3(-1, 0, 0), -qb), test::protein_atom(5, Vec3(0, 8, 0), qb),
                                   test::protein_atom(6, Vec3(0, 0, -8), -qb)};
        auto both = set_a;
        both.insert(both.end(), set_b.begin(), set_b.end());
        const double lhs = coulomb_potential(Vec3::Zero(), both, dielectric);
        const double rhs = coulomb_potential(Vec3::Zero(), set_a, dielectric) +
                           coulomb_potential(Vec3::Zero(), set_b, dielectric);
        if (lhs != rhs) fail(o, "Coulomb superposition");
        ++superpositions;
      }

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<ProteinAtom> p, flipped;
    for (int k = 0; k < 5; ++k) {
      p.push_back(test::protein_atom(k, Vec3(u(rng), u(rng), u(rng)), u(rng) / 6.0));
      flipped.push_back(p.back());
      flipped.back().charge = -p.back().charge;
    }
    const Vec3 x(u(rng), u(rng), u(rng));
    if (coulomb_potential(x, flipped, 2.0) != -coulomb_potential(x, p, 2.0)) fail(o, "Coulomb sign flip");
  }
  if (o.pass) o.detail = "16 LJ type pairs, LB example, " + std::to_string(superpositions) + " superpositions, 1000 sign flips";
  return o;
}

Outcome metric_invariants(const std::vector<Fixture>& fixtures) {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  double worst = std::numeric_limits<double>::infinity(), worst_shift = 0.0;
  for (std::size_t k = 0; k < kRandomPoses; ++k) {
    const auto& f = fixtures[k % fixtures.size()];
    const auto pose = random_pose(f.lig.n_atoms(), f.grid.n_points(), rng);
    const Eigen::MatrixX3d p = pose_coordinates(Pose{pose}, f.grid);
    const Eigen::MatrixX3d e = f.input.ligand_coordinates();
    const double adj = adjusted_rmsd(p, e, f.grid.positions);
    worst = std::min(worst, adj);
    if (adj < kAdjustedFloor) fail(o, f.name + " adjusted rmsd " + fmt(adj));

    const Eigen::RowVector3d t(u(rng), u(rng), u(rng));
    const double r = rmsd(p, e);
    const double shifted = rmsd((p.rowwise() + t).eval(), (e.rowwise() + t).eval());
    worst_shift = std::max(worst_shift, std::abs(shifted - r));
    if (std::abs(shifted - r) > kTranslationTol * std::max(1.0, r)) fail(o, f.name + " translation changes rmsd");
  }
  if (o.pass)
    o.detail = std::to_string(kRandomPoses) + " poses, min adjusted " + fmt(worst) + ", max shift error " +
               fmt(worst_shift);
  return o;
}

Outcome planted_improvement() {
  Outcome o;
  const auto start = Clock::now();
  const std::vector<PreparedComplex> data = {prepare(load_complex(test::fixture("planted6.json")))};
  const ExactSampler exact;
  const auto tuned = greedy_tune(data, exact);
  Hyperparameters zero, best;
  best.lambdas = tuned.lambdas;
  const auto r0 = dock(data[0], zero, exact);
  const auto r1 = dock(data[0], best, exact);
  const double secs = since(start);
  if (!r0.valid || !r1.valid) return {false, "no valid pose"};
  if (!(*r1.adjusted_rmsd < *r0.adjusted_rmsd)) fail(o, "tuned weights do not improve adjusted rmsd");
  if (tuned.selection.empty() || tuned.selection.front().interaction != Term::Hydro)
    fail(o, "first selected interaction is not hydro");
  if (secs >= kPlantedSeconds) fail(o, "took " + fmt(secs) + "s");
  if (o.pass)
    o.detail = "adjusted rmsd " + fmt(*r0.adjusted_rmsd) + " -> " + fmt(*r1.adjusted_rmsd) + ", first pick hydro@" +
               fmt(tuned.selection.front().weight) + ", " + fmt(secs) + "s";
  return o;
}

Outcome reproducibility(const std::vector<Fixture>& fixtures) {
  Outcome o;
  AnnealSchedule s;
  s.seed = 7;
  std::vector<PreparedComplex> data;
  for (const auto& f : fixtures) {
    const auto q = build(f, kReferenceLambdas);
    const auto ref = to_json(simulated_anneal(q, s, 1)).dump();
    Hyperparameters hp;
    hp.lambdas = kReferenceLambdas;
    const auto ref_report = to_json(dock(f.input, hp, AnnealingSampler(s, 1), 1)).dump();
    for (unsigned threads : {2u, 4u, 8u}) {
      if (to_json(simulated_anneal(q, s, threads)).dump() != ref) fail(o, f.name + " sample set differs");
      if (to_json(dock(f.input, hp, AnnealingSampler(s, threads), threads)).dump() != ref_report)
        fail(o, f.name + " report differs");
    }
    data.push_back(prepare(f.input));
  }
  AnnealSchedule quick = s;
  quick.n_reads = 20;
  quick.n_sweeps = 300;
  const AnnealingSampler sampler(quick);
  const std::vector<double> weights = {0.5, 2.0};
  const auto ref = to_json(greedy_tune(data, sampler, weights, {}, 1)).dump();
  if (to_json(greedy_tune(data, sampler, weights, {}, 4)).dump() != ref) fail(o, "tuner result differs");
  if (o.pass) o.detail = "sample sets, reports and tuner output identical for 1/2/4/8 threads";
  return o;
}

Outcome round_trip(const std::vector<Fixture>& fixtures) {
  Outcome o;
  for (const auto& f : fixtures)
    for (const auto& lambdas : {PhysChemVector{}, kReferenceLambdas}) {
      const auto q = build(f, lambdas);
      const auto path = fs::temp_directory_path() / ("qdock_acceptance_" + f.name + ".qubo");
      export_qubo(q, path);
      const auto back = import_qubo(path);
      std::ostringstream first, second;
      write_qubo(first, q);
      write_qubo(second, back);
      fs::remove(path);
      if (!(back.coeffs() == q.coeffs()) || back.offset() != q.offset() || back.n_vars() != q.n_vars() ||
          !(back.layout() == q.layout()) || first.str() != second.str())
        fail(o, f.name + " round trip differs");
    }
  if (o.pass) o.detail = std::to_string(fixtures.size() * 2) + " problems identical after export/import";
  return o;
}

}  // namespace

int main() {
  const auto fixtures = load_fixtures();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", [&] { return oracle_equivalence(fixtures); }},
      {"energy decomposition", [&] { return energy_decomposition(fixtures); }},
      {"penalty correctness", [&] { return penalty_correctness(fixtures); }},
      {"analytic physics", [] { return analytic_physics(); }},
      {"metric invariants", [&] { return metric_invariants(fixtures); }},
      {"planted improvement", [] { return planted_improvement(); }},
      {"reproducibility", [&] { return reproducibility(fixtures); }},
      {"round trip", [&] { return round_trip(fixtures); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << k + 1 << "] " << criteria[k].first << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

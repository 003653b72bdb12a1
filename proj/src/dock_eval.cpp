#include "qdock/dock_eval.hpp"

#include <algorithm>

#include "qdock/parallel.hpp"

namespace qdock {

std::string describe(const Invalidity& why) {
  switch (why.kind) {
    case Invalidity::Kind::Unassigned: return "Unassigned(atom " + std::to_string(why.index) + ")";
    case Invalidity::Kind::MultiAssigned: return "MultiAssigned(atom " + std::to_string(why.index) + ")";
    case Invalidity::Kind::Collision: return "Collision(grid point " + std::to_string(why.index) + ")";
  }
  return "invalid";
}

Decoded decode(const Assignment& a, const QuboProblem& problem) {
  if (a.size() != problem.n_vars()) throw ValidationError("assignment", "length does not match the problem");
  if (!problem.layout()) throw ValidationError("problem", "no atom/grid layout; cannot decode");
  const auto& L = *problem.layout();

  Pose pose;
  pose.point_of_atom.resize(L.n_atoms);
  for (std::size_t i = 0; i < L.n_atoms; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < L.n_points; ++j)
      if (a[L.index(i, j)]) {
        pose.point_of_atom[i] = j;
        ++count;
      }
    if (count == 0) return Invalidity{Invalidity::Kind::Unassigned, i};
    if (count > 1) return Invalidity{Invalidity::Kind::MultiAssigned, i};
  }
  std::vector<std::size_t> users(L.n_points, 0);
  for (auto j : pose.point_of_atom) ++users[j];
  for (std::size_t j = 0; j < L.n_points; ++j)
    if (users[j] > 1) return Invalidity{Invalidity::Kind::Collision, j};
  return pose;
}

Eigen::MatrixX3d pose_coordinates(const Pose& pose, const GridGraph& grid) {
  Eigen::MatrixX3d xyz(static_cast<Eigen::Index>(pose.point_of_atom.size()), 3);
  for (std::size_t i = 0; i < pose.point_of_atom.size(); ++i)
    xyz.row(static_cast<Eigen::Index>(i)) = grid.positions.row(static_cast<Eigen::Index>(pose.point_of_atom[i]));
  return xyz;
}

PreparedComplex prepare(const ComplexInput& input, unsigned threads) {
  PreparedComplex c{input.name, build_ligand_graph(input), build_grid_graph(input, threads), input.ligand_coordinates()};
  return c;
}

DockingReport dock(const PreparedComplex& complex, const Hyperparameters& hp, const Sampler& sampler) {
  const auto problem = build_full(complex.ligand, complex.grid, hp);
  const auto set = sampler.sample(problem);

  DockingReport report;
  report.name = complex.name;
  report.build = *problem.build_info();
  report.n_samples = set.samples.size();

  std::size_t n_valid = 0;
  for (std::size_t s = 0; s < set.samples.size(); ++s) {
    const auto& sample = set.samples[s];
    const auto decoded = decode(sample.assignment, problem);
    const auto* pose = std::get_if<Pose>(&decoded);
    if (s == 0) {
      report.best_energy = sample.energy.total;
      report.best_valid = pose != nullptr;
      if (!pose) report.best_invalid_reason = describe(std::get<Invalidity>(decoded));
    }
    if (!pose) continue;
    ++n_valid;
    if (report.valid) continue;
    report.valid = true;
    report.pose = *pose;
    for (std::size_t i = 0; i < pose->point_of_atom.size(); ++i)
      report.mapping.emplace_back(complex.ligand.atoms[i].id, complex.grid.ids[pose->point_of_atom[i]]);
    report.energy = sample.energy;
    report.coordinates = pose_coordinates(*pose, complex.grid);
    report.rmsd = rmsd(report.coordinates, complex.experimental);
    report.adjusted_rmsd = adjusted_rmsd(report.coordinates, complex.experimental, complex.grid.positions);
  }
  report.valid_solution_rate = set.samples.empty() ? 0.0 : double(n_valid) / double(set.samples.size());
  return report;
}

DockingReport dock(const ComplexInput& input, const Hyperparameters& hp, const Sampler& sampler, unsigned threads) {
  return dock(prepare(input, threads), hp, sampler);
}

namespace {

struct Evaluation {
  double mean = std::numeric_limits<double>::infinity();
  std::size_t excluded = 0;
};

// Mean adjusted RMSD over complexes with a valid pose, for each lambda vector.
std::vector<Evaluation> evaluate(std::span<const PreparedComplex> dataset, const Sampler& sampler,
                                 const Hyperparameters& base, const std::vector<PhysChemVector>& lambdas,
                                 unsigned threads) {
  const std::size_t nc = dataset.size();
  std::vector<std::optional<double>> scores(lambdas.size() * nc);
  parallel_for(scores.size(), threads, [&](std::size_t k) {
    Hyperparameters hp = base;
    hp.lambdas = lambdas[k / nc];
    const auto report = dock(dataset[k % nc], hp, sampler);
    if (report.valid) scores[k] = *report.adjusted_rmsd;
  });

  std::vector<Evaluation> out(lambdas.size());
  for (std::size_t c = 0; c < lambdas.size(); ++c) {
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t m = 0; m < nc; ++m)
      if (const auto& s = scores[c * nc + m]) {
        sum += *s;
        ++used;
      }
    out[c].excluded = nc - used;
    if (used) out[c].mean = sum / double(used);
  }
  return out;
}

}  // namespace

TunerResult greedy_tune(std::span<const PreparedComplex> dataset, const Sampler& sampler,
                        const std::vector<double>& weights, const Hyperparameters& base, unsigned threads) {
  if (dataset.empty()) throw ValidationError("dataset", "no complexes to tune on");
  if (weights.empty()) throw ValidationError("weights", "no candidate weights");
  std::vector<double> sorted_weights = weights;
  std::sort(sorted_weights.begin(), sorted_weights.end());

  TunerResult result;
  Hyperparameters hp = base;
  hp.lambdas.fill(0.0);

  const auto baseline = evaluate(dataset, sampler, hp, {hp.lambdas}, threads).front();
  result.baseline_mean = baseline.mean;
  result.baseline_excluded = baseline.excluded;
  double current = baseline.mean;
  bool any_valid = std::isfinite(current);

  std::vector<bool> set(kPhysChemCount, false);
  for (std::size_t step = 1; step <= kPhysChemCount; ++step) {
    std::vector<TunerCandidate> candidates;
    std::vector<PhysChemVector> trial;
    for (auto t : kPhysChemTerms) {
      if (set[lambda_slot(t)]) continue;
      for (double w : sorted_weights) {
        auto lam = result.lambdas;
        lam[lambda_slot(t)] = w;
        trial.push_back(lam);
        candidates.push_back({step, t, w});
      }
    }
    if (candidates.empty()) break;

    const auto evals = evaluate(dataset, sampler, hp, trial, threads);
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      candidates[c].mean_adjusted_rmsd = evals[c].mean;
      candidates[c].excluded = evals[c].excluded;
      any_valid = any_valid || std::isfinite(evals[c].mean);
      if (!best || evals[c].mean < candidates[*best].mean_adjusted_rmsd) best = c;
    }
    result.trace.insert(result.trace.end(), candidates.begin(), candidates.end());

    if (!std::isfinite(candidates[*best].mean_adjusted_rmsd) || !(candidates[*best].mean_adjusted_rmsd < current)) break;
    const auto& chosen = candidates[*best];
    result.lambdas[lambda_slot(chosen.interaction)] = chosen.weight;
    set[lambda_slot(chosen.interaction)] = true;
    result.selection.push_back(chosen);
    current = chosen.mean_adjusted_rmsd;
  }

  if (!any_valid) throw NoValidSolutionError("no complex produced a valid pose under any candidate weighting");
  return result;
}

}  // namespace qdock

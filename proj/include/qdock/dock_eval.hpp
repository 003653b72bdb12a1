#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "qdock/annealer.hpp"
#include "qdock/errors.hpp"
#include "qdock/ligand_graph.hpp"
#include "qdock/pocket_grid.hpp"
#include "qdock/qubo.hpp"

namespace qdock {

// Injective map from ligand atom index to grid point index.
struct Pose {
  std::vector<std::size_t> point_of_atom;
  bool operator==(const Pose&) const = default;
};

struct Invalidity {
  enum class Kind { Unassigned, MultiAssigned, Collision };
  Kind kind = Kind::Unassigned;
  std::size_t index = 0;  // atom index, or grid point index for Collision
  bool operator==(const Invalidity&) const = default;
};

std::string describe(const Invalidity& why);

using Decoded = std::variant<Pose, Invalidity>;

// Valid iff every atom has exactly one set bit and no point is used twice.
// Atoms are checked in order before grid collisions.
Decoded decode(const Assignment& a, const QuboProblem& problem);

Eigen::MatrixX3d pose_coordinates(const Pose& pose, const GridGraph& grid);

// sqrt(mean_i |p_i - e_i|^2), rows matched by atom; no superposition.
template <typename DerivedP, typename DerivedE>
typename DerivedP::Scalar rmsd(const Eigen::MatrixBase<DerivedP>& predicted, const Eigen::MatrixBase<DerivedE>& experimental) {
  if (predicted.rows() != experimental.rows() || predicted.cols() != experimental.cols())
    throw ValidationError("pose", "atom count mismatch between predicted and experimental coordinates");
  using std::sqrt;
  if (predicted.rows() == 0) return 0;
  return sqrt((predicted - experimental).rowwise().squaredNorm().mean());
}

// RMSD of the per-atom nearest grid point mapping (not necessarily injective).
template <typename DerivedE, typename DerivedG>
typename DerivedE::Scalar nearest_grid_rmsd(const Eigen::MatrixBase<DerivedE>& experimental,
                                            const Eigen::MatrixBase<DerivedG>& grid_positions) {
  using Scalar = typename DerivedE::Scalar;
  using std::sqrt;
  if (experimental.rows() == 0) return 0;
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < experimental.rows(); ++i)
    sum += (grid_positions.rowwise() - experimental.row(i)).rowwise().squaredNorm().minCoeff();
  return sqrt(sum / Scalar(experimental.rows()));
}

template <typename DerivedP, typename DerivedE, typename DerivedG>
typename DerivedP::Scalar adjusted_rmsd(const Eigen::MatrixBase<DerivedP>& predicted,
                                        const Eigen::MatrixBase<DerivedE>& experimental,
                                        const Eigen::MatrixBase<DerivedG>& grid_positions) {
  return rmsd(predicted, experimental) - nearest_grid_rmsd(experimental, grid_positions);
}

struct DockingReport {
  std::string name;
  bool valid = false;
  std::optional<Pose> pose;
  std::vector<std::pair<int, int>> mapping;  // (ligand atom id, grid point id)
  Eigen::MatrixX3d coordinates;              // empty unless valid
  EnergyBreakdown energy;                    // of the lowest-energy valid sample
  std::optional<double> rmsd;
  std::optional<double> adjusted_rmsd;
  double valid_solution_rate = 0.0;
  std::size_t n_samples = 0;
  // Lowest-energy sample regardless of validity.
  double best_energy = 0.0;
  bool best_valid = false;
  std::string best_invalid_reason;
  BuildInfo build;
};

// Complex prepared once for repeated docking with different weights.
struct PreparedComplex {
  std::string name;
  LigandGraph ligand;
  GridGraph grid;
  Eigen::MatrixX3d experimental;
};

PreparedComplex prepare(const ComplexInput& input, unsigned threads = 1);

DockingReport dock(const PreparedComplex& complex, const Hyperparameters& hp, const Sampler& sampler);

// Build, solve and score. A report with valid == false (rate 0) is returned
// when no sample decodes; callers decide whether that is fatal.
DockingReport dock(const ComplexInput& input, const Hyperparameters& hp, const Sampler& sampler, unsigned threads = 1);

struct TunerCandidate {
  std::size_t step = 0;
  Term interaction = Term::El;
  double weight = 0.0;
  double mean_adjusted_rmsd = std::numeric_limits<double>::infinity();  // inf: no valid pose anywhere
  std::size_t excluded = 0;  // complexes without a valid pose
};

struct TunerResult {
  PhysChemVector lambdas{};
  double baseline_mean = std::numeric_limits<double>::infinity();
  std::size_t baseline_excluded = 0;
  std::vector<TunerCandidate> selection;  // accepted steps in order
  std::vector<TunerCandidate> trace;      // every evaluated candidate
};

inline const std::vector<double> kDefaultTunerWeights = {0.2, 0.5, 1.0, 2.0, 5.0};

// Greedy forward selection of physico-chemical weights by mean adjusted RMSD.
// `base` supplies gamma and scales; its lambdas are ignored (start at zero).
// Throws NoValidSolutionError when no evaluation yields a valid pose.
TunerResult greedy_tune(std::span<const PreparedComplex> dataset, const Sampler& sampler,
                        const std::vector<double>& weights = kDefaultTunerWeights, const Hyperparameters& base = {},
                        unsigned threads = 1);

}  // namespace qdock

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qdock/model.hpp"

namespace qdock {

// Interaction cutoffs (Angstrom / degrees).
inline constexpr double kHBondCutoff = 3.5;
inline constexpr double kHBondAngleMin = 130.0;
inline constexpr double kHBondAngleMax = 180.0;
inline constexpr double kHydrophobicCutoff = 4.5;
// D-H length used when placing the virtual hydrogen of a ligand donor.
inline constexpr double kVirtualHydrogenBond = 1.0;
// Cap on a single protein atom's LJ contribution (kcal/mol).
inline constexpr double kLjClamp = 1e4;
inline constexpr double kCoincidenceTol = 1e-6;

// Complete weighted graph over the pocket points with every node colouring.
struct GridGraph {
  std::vector<int> ids;
  Eigen::MatrixX3d positions;
  Eigen::MatrixXd dist;         // n x n pairwise distances
  Eigen::VectorXd coulomb;      // electrostatic potential, kcal/(mol e)
  Eigen::MatrixXd lj;           // n x n_types, kcal/mol
  Eigen::VectorXi hb_acceptor;  // donors able to bond a ligand acceptor here
  Eigen::VectorXi hb_donor;     // acceptors able to bond a ligand donor here
  Eigen::VectorXi hydrophobic;  // hydrophobic protein atoms in range

  std::size_t n_points() const { return ids.size(); }
};

// All functions below sum protein atoms in ascending id order, so results do
// not depend on the order of `protein`.

// Throws CoincidentPointError if the point sits on a protein atom.
double coulomb_potential(const Vec3& point, std::span<const ProteinAtom> protein, double dielectric);

// Entry `alpha` is the LJ energy a ligand atom of type alpha would feel at
// `point`. Throws CoincidentPointError like coulomb_potential.
Eigen::VectorXd lj_vector(const Vec3& point, std::span<const ProteinAtom> protein, const AtomTypeTable& table);

// Protein donors within cutoff having a hydrogen with D-H-A angle in (130, 180).
int hbond_acceptor_count(const Vec3& point, std::span<const ProteinAtom> protein);

// Protein acceptors at 1.0 < r < 3.5. A virtual hydrogen on the segment
// towards the acceptor always satisfies the angle window once r exceeds the
// D-H length, so the angle test reduces to the lower distance bound.
int hbond_donor_count(const Vec3& point, std::span<const ProteinAtom> protein);

int hydrophobic_count(const Vec3& point, std::span<const ProteinAtom> protein);

// `threads` > 1 colours grid points concurrently; output is identical.
GridGraph build_grid_graph(const ComplexInput& input, unsigned threads = 1);

}  // namespace qdock

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "qdock/model.hpp"

namespace qdock {

enum class EdgeKind { Connectivity, BondAngle, Dihedral };

std::string_view to_string(EdgeKind k);

// Undirected edge between ligand atom indices `a < b`, weighted by their
// distance in the experimental pose.
struct LigandEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double distance = 0.0;
  EdgeKind kind = EdgeKind::Connectivity;
};

// Extended molecular graph: bonds, distance-2 pairs that pin bond angles and
// 1-4 pairs across dihedral-locked bonds. Node colours are the ligand atoms.
struct LigandGraph {
  std::vector<LigandAtom> atoms;
  std::vector<LigandEdge> edges;  // sorted by (a, b)

  std::size_t n_atoms() const { return atoms.size(); }
};

// Throws ValidationError if the bond graph is disconnected or an edge has
// zero length.
LigandGraph build_ligand_graph(const ComplexInput& input);

}  // namespace qdock

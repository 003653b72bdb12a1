#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qdock/qdock.hpp"

namespace qdock::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(QDOCK_FIXTURE_DIR) / name;
}

inline Assignment random_assignment(std::size_t n, std::mt19937_64& rng) {
  Assignment a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = static_cast<std::uint8_t>(rng() & 1u);
  return a;
}

inline Assignment pose_bits(const VarLayout& layout, const std::vector<std::size_t>& point_of_atom) {
  Assignment a(layout.n_vars());
  for (std::size_t i = 0; i < point_of_atom.size(); ++i) a[layout.index(i, point_of_atom[i])] = 1;
  return a;
}

inline bool rel_close(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

// Protein atom with only the fields the colouring tests vary.
inline ProteinAtom protein_atom(int id, Vec3 pos, double charge = 0.0, int type = 0,
                                HBondRole role = HBondRole::None, bool hydrophobic = false) {
  ProteinAtom a;
  a.id = id;
  a.position = pos;
  a.charge = charge;
  a.type_index = type;
  a.hbond_role = role;
  a.hydrophobic = hydrophobic;
  return a;
}

}  // namespace qdock::test

namespace qdock::test {

// Energy of a valid pose straight from the model formulas: edge distortion
// over grid distances plus weighted colour products. No QUBO involved.
inline double direct_pose_energy(const LigandGraph& lig, const GridGraph& grid, const BuildInfo& info,
                                 const std::vector<std::size_t>& point_of_atom) {
  double e = 0.0;
  for (const auto& edge : lig.edges) {
    const double d = (grid.positions.row(Eigen::Index(point_of_atom[edge.a])) -
                      grid.positions.row(Eigen::Index(point_of_atom[edge.b])))
                         .norm();
    e += (edge.distance - d) * (edge.distance - d);
  }
  for (std::size_t i = 0; i < lig.n_atoms(); ++i) {
    const auto& a = lig.atoms[i];
    const auto j = Eigen::Index(point_of_atom[i]);
    const double raw[5] = {a.charge * grid.coulomb(j), grid.lj(j, a.type_index),
                           -double(a.hbond_acceptor * grid.hb_acceptor(j)), -double(a.hbond_donor * grid.hb_donor(j)),
                           -double(a.hydrophobic * grid.hydrophobic(j))};
    for (std::size_t t = 0; t < 5; ++t) e += info.scales[t] * info.lambdas[t] * raw[t];
  }
  return e;
}

}  // namespace qdock::test

#include "qdock/pocket_grid.hpp"

#include <algorithm>
#include <iostream>

#include "qdock/errors.hpp"
#include "qdock/parallel.hpp"
#include "qdock/physics.hpp"

namespace qdock {

namespace {

using AtomOrder = std::vector<const ProteinAtom*>;

AtomOrder by_id(std::span<const ProteinAtom> protein) {
  AtomOrder order;
  order.reserve(protein.size());
  for (const auto& a : protein) order.push_back(&a);
  std::stable_sort(order.begin(), order.end(), [](auto* l, auto* r) { return l->id < r->id; });
  return order;
}

double checked_distance(const Vec3& point, const ProteinAtom& atom) {
  const double r = (point - atom.position).norm();
  if (r < kCoincidenceTol)
    throw CoincidentPointError("grid point coincides with protein atom " + std::to_string(atom.id));
  return r;
}

double coulomb_impl(const Vec3& point, const AtomOrder& atoms, double dielectric) {
  double sum = 0.0;
  for (const auto* a : atoms) sum += a->charge / checked_distance(point, *a);
  return kCoulombConstant / dielectric * sum;
}

Eigen::VectorXd lj_impl(const Vec3& point, const AtomOrder& atoms, const AtomTypeTable& table) {
  const auto n_types = static_cast<Eigen::Index>(table.n_types());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n_types);
  for (const auto* a : atoms) {
    const double r = checked_distance(point, *a);
    const double eps_k = table.epsilon.at(a->type_index);
    const double rmin_k = table.r_min.at(a->type_index);
    for (Eigen::Index alpha = 0; alpha < n_types; ++alpha) {
      const double eps = physics::mix_epsilon(table.epsilon[alpha], eps_k);
      const double rmin = physics::mix_r_min(table.r_min[alpha], rmin_k);
      u[alpha] += std::min(physics::lj_8_4(eps, rmin, r), kLjClamp);
    }
  }
  return u;
}

bool angle_in_window(double phi) { return phi > kHBondAngleMin && phi < kHBondAngleMax; }

int acceptor_count_impl(const Vec3& point, const AtomOrder& atoms) {
  int count = 0;
  for (const auto* a : atoms) {
    if (!is_donor(a->hbond_role)) continue;
    if (a->donor_hydrogens.empty()) {
      std::clog << "warning: donor protein atom " << a->id << " has no hydrogens; ignored\n";
      continue;
    }
    if (!((point - a->position).norm() < kHBondCutoff)) continue;
    const bool bonded = std::any_of(a->donor_hydrogens.begin(), a->donor_hydrogens.end(), [&](const Vec3& h) {
      return angle_in_window(physics::angle_deg(a->position, h, point));
    });
    if (bonded) ++count;
  }
  return count;
}

int donor_count_impl(const Vec3& point, const AtomOrder& atoms) {
  int count = 0;
  for (const auto* a : atoms) {
    if (!is_acceptor(a->hbond_role)) continue;
    const double r = (point - a->position).norm();
    if (r > kVirtualHydrogenBond && r < kHBondCutoff) ++count;
  }
  return count;
}

int hydrophobic_count_impl(const Vec3& point, const AtomOrder& atoms) {
  int count = 0;
  for (const auto* a : atoms)
    if (a->hydrophobic && (point - a->position).norm() < kHydrophobicCutoff) ++count;
  return count;
}

}  // namespace

double coulomb_potential(const Vec3& point, std::span<const ProteinAtom> protein, double dielectric) {
  return coulomb_impl(point, by_id(protein), dielectric);
}

Eigen::VectorXd lj_vector(const Vec3& point, std::span<const ProteinAtom> protein, const AtomTypeTable& table) {
  return lj_impl(point, by_id(protein), table);
}

int hbond_acceptor_count(const Vec3& point, std::span<const ProteinAtom> protein) {
  return acceptor_count_impl(point, by_id(protein));
}

int hbond_donor_count(const Vec3& point, std::span<const ProteinAtom> protein) {
  return donor_count_impl(point, by_id(protein));
}

int hydrophobic_count(const Vec3& point, std::span<const ProteinAtom> protein) {
  return hydrophobic_count_impl(point, by_id(protein));
}

GridGraph build_grid_graph(const ComplexInput& input, unsigned threads) {
  const auto n = static_cast<Eigen::Index>(input.grid_points.size());
  const auto n_types = static_cast<Eigen::Index>(input.type_table.n_types());

  GridGraph g;
  g.positions = input.grid_coordinates();
  for (const auto& p : input.grid_points) g.ids.push_back(p.id);

  g.dist.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    g.dist(j, j) = 0.0;
    for (Eigen::Index k = j + 1; k < n; ++k) g.dist(j, k) = g.dist(k, j) = (g.positions.row(j) - g.positions.row(k)).norm();
  }

  g.coulomb.resize(n);
  g.lj.resize(n, n_types);
  g.hb_acceptor.resize(n);
  g.hb_donor.resize(n);
  g.hydrophobic.resize(n);

  const auto atoms = by_id(input.protein);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t idx) {
    const auto j = static_cast<Eigen::Index>(idx);
    const Vec3 p = g.positions.row(j).transpose();
    g.coulomb[j] = coulomb_impl(p, atoms, input.dielectric);
    g.lj.row(j) = lj_impl(p, atoms, input.type_table).transpose();
    g.hb_acceptor[j] = acceptor_count_impl(p, atoms);
    g.hb_donor[j] = donor_count_impl(p, atoms);
    g.hydrophobic[j] = hydrophobic_count_impl(p, atoms);
  });
  return g;
}

}  // namespace qdock

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace qdock {

using Vec3 = Eigen::Vector3d;

// Global unit conventions: Angstrom, elementary charge, kcal/mol.
// Coulomb constant in kcal*Angstrom/(mol*e^2).
inline constexpr double kCoulombConstant = 332.0636;

enum class HBondRole { None, Donor, Acceptor, DonorAcceptor };

constexpr bool is_donor(HBondRole r) {
  return r == HBondRole::Donor || r == HBondRole::DonorAcceptor;
}
constexpr bool is_acceptor(HBondRole r) {
  return r == HBondRole::Acceptor || r == HBondRole::DonorAcceptor;
}

std::string_view to_string(HBondRole r);
HBondRole parse_hbond_role(std::string_view s);

struct ProteinAtom {
  int id = 0;
  Vec3 position = Vec3::Zero();
  double charge = 0.0;
  int type_index = 0;
  HBondRole hbond_role = HBondRole::None;
  bool hydrophobic = false;
  std::vector<Vec3> donor_hydrogens;  // explicit H positions, donors only
};

struct LigandAtom {
  int id = 0;
  Vec3 position = Vec3::Zero();  // experimental pose
  double charge = 0.0;
  int type_index = 0;
  int hbond_acceptor = 0;
  int hbond_donor = 0;
  int hydrophobic = 0;
};

struct LigandBond {
  std::pair<int, int> endpoints;  // atom ids
  bool rotatable = false;
  bool dihedral_locked = false;
};

// Per-type Lennard-Jones parameters (epsilon in kcal/mol, r_min in Angstrom).
struct AtomTypeTable {
  std::vector<double> epsilon;
  std::vector<double> r_min;
  std::size_t n_types() const { return epsilon.size(); }
};

struct GridPointInput {
  int id = 0;
  Vec3 position = Vec3::Zero();
};

struct ComplexInput {
  std::string name;
  std::vector<ProteinAtom> protein;
  std::vector<LigandAtom> ligand_atoms;
  std::vector<LigandBond> ligand_bonds;
  std::vector<GridPointInput> grid_points;
  AtomTypeTable type_table;
  double dielectric = 1.0;

  // Index of the ligand atom / grid point with the given id; throws
  // ValidationError when absent.
  std::size_t ligand_index(int id) const;
  std::size_t grid_index(int id) const;

  // Experimental ligand coordinates as an N x 3 matrix in atom order.
  Eigen::MatrixX3d ligand_coordinates() const;
  Eigen::MatrixX3d grid_coordinates() const;
};

// Checks every ComplexInput invariant; throws ValidationError naming the
// field, or InfeasibleError when there are more ligand atoms than grid points.
void validate(const ComplexInput& input);

// Parses the complex JSON document. `source` is used in error messages.
ComplexInput parse_complex(std::string_view text, const std::string& source = "<memory>");
ComplexInput load_complex(const std::filesystem::path& path);

}  // namespace qdock

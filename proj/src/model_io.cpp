#include "qdock/model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qdock/errors.hpp"

namespace qdock {

using nlohmann::json;

namespace {

constexpr double kCoincidenceTol = 1e-6;

std::size_t line_of_byte(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + "." + key, "missing required field");
  return *it;
}

double as_real(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
  return v.get<int>();
}

int as_flag(const json& v, const std::string& path) {
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  return as_int(v, path);
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ValidationError(path, "expected a boolean");
  return v.get<bool>();
}

Vec3 as_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw ValidationError(path, "expected an array of 3 numbers");
  return {as_real(v[0], path + "[0]"), as_real(v[1], path + "[1]"), as_real(v[2], path + "[2]")};
}

std::vector<double> as_real_vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_real(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "expected an array");
  return v;
}

std::string indexed(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

}  // namespace

std::string_view to_string(HBondRole r) {
  switch (r) {
    case HBondRole::None: return "none";
    case HBondRole::Donor: return "donor";
    case HBondRole::Acceptor: return "acceptor";
    case HBondRole::DonorAcceptor: return "donor_acceptor";
  }
  return "none";
}

HBondRole parse_hbond_role(std::string_view s) {
  if (s == "none") return HBondRole::None;
  if (s == "donor") return HBondRole::Donor;
  if (s == "acceptor") return HBondRole::Acceptor;
  if (s == "donor_acceptor") return HBondRole::DonorAcceptor;
  throw ValidationError("hbond_role", "unknown role '" + std::string(s) + "'");
}

std::size_t ComplexInput::ligand_index(int id) const {
  for (std::size_t i = 0; i < ligand_atoms.size(); ++i)
    if (ligand_atoms[i].id == id) return i;
  throw ValidationError("ligand.atoms", "no atom with id " + std::to_string(id));
}

std::size_t ComplexInput::grid_index(int id) const {
  for (std::size_t j = 0; j < grid_points.size(); ++j)
    if (grid_points[j].id == id) return j;
  throw ValidationError("grid_points", "no grid point with id " + std::to_string(id));
}

Eigen::MatrixX3d ComplexInput::ligand_coordinates() const {
  Eigen::MatrixX3d xyz(ligand_atoms.size(), 3);
  for (std::size_t i = 0; i < ligand_atoms.size(); ++i) xyz.row(i) = ligand_atoms[i].position.transpose();
  return xyz;
}

Eigen::MatrixX3d ComplexInput::grid_coordinates() const {
  Eigen::MatrixX3d xyz(grid_points.size(), 3);
  for (std::size_t j = 0; j < grid_points.size(); ++j) xyz.row(j) = grid_points[j].position.transpose();
  return xyz;
}

void validate(const ComplexInput& in) {
  if (!(in.dielectric > 0.0)) throw ValidationError("dielectric", "must be > 0");

  const auto& tt = in.type_table;
  if (tt.epsilon.empty()) throw ValidationError("type_table.epsilon", "table is empty");
  if (tt.r_min.size() != tt.epsilon.size())
    throw ValidationError("type_table.r_min", "length differs from type_table.epsilon");
  for (std::size_t a = 0; a < tt.n_types(); ++a) {
    if (!(tt.epsilon[a] > 0.0)) throw ValidationError(indexed("type_table.epsilon", a), "must be > 0");
    if (!(tt.r_min[a] > 0.0)) throw ValidationError(indexed("type_table.r_min", a), "must be > 0");
  }
  const auto n_types = static_cast<int>(tt.n_types());

  std::set<int> seen;
  for (std::size_t k = 0; k < in.protein.size(); ++k) {
    const auto& p = in.protein[k];
    const auto path = indexed("protein", k);
    if (!seen.insert(p.id).second) throw ValidationError(path + ".id", "duplicate protein id " + std::to_string(p.id));
    if (p.type_index < 0 || p.type_index >= n_types)
      throw ValidationError(path + ".type_index", "outside the type table");
    if (is_donor(p.hbond_role) == p.donor_hydrogens.empty())
      throw ValidationError(path + ".donor_hydrogens", "must be non-empty exactly for donor roles");
  }

  if (in.ligand_atoms.empty()) throw ValidationError("ligand.atoms", "ligand has no atoms");
  seen.clear();
  for (std::size_t i = 0; i < in.ligand_atoms.size(); ++i) {
    const auto& a = in.ligand_atoms[i];
    const auto path = indexed("ligand.atoms", i);
    if (!seen.insert(a.id).second) throw ValidationError(path + ".id", "duplicate ligand atom id " + std::to_string(a.id));
    if (a.type_index < 0 || a.type_index >= n_types)
      throw ValidationError(path + ".type_index", "outside the type table");
    auto flag_ok = [](int f) { return f == 0 || f == 1; };
    if (!flag_ok(a.hbond_acceptor)) throw ValidationError(path + ".hbond_acceptor", "must be 0 or 1");
    if (!flag_ok(a.hbond_donor)) throw ValidationError(path + ".hbond_donor", "must be 0 or 1");
    if (!flag_ok(a.hydrophobic)) throw ValidationError(path + ".hydrophobic", "must be 0 or 1");
  }

  std::set<std::pair<int, int>> bonds;
  for (std::size_t b = 0; b < in.ligand_bonds.size(); ++b) {
    const auto [u, v] = in.ligand_bonds[b].endpoints;
    const auto path = indexed("ligand.bonds", b) + ".endpoints";
    if (u == v) throw ValidationError(path, "bond endpoints must be distinct");
    if (!seen.contains(u) || !seen.contains(v)) throw ValidationError(path, "bond references an unknown atom id");
    if (!bonds.insert(std::minmax(u, v)).second) throw ValidationError(path, "duplicate bond");
  }

  if (in.grid_points.empty()) throw ValidationError("grid_points", "no grid points");
  seen.clear();
  for (std::size_t j = 0; j < in.grid_points.size(); ++j) {
    const auto& g = in.grid_points[j];
    if (!seen.insert(g.id).second) throw ValidationError(indexed("grid_points", j) + ".id", "duplicate grid id " + std::to_string(g.id));
    for (std::size_t m = 0; m < j; ++m)
      if ((in.grid_points[m].position - g.position).norm() < kCoincidenceTol)
        throw ValidationError(indexed("grid_points", j) + ".position",
                              "coincides with grid id " + std::to_string(in.grid_points[m].id));
  }

  if (in.ligand_atoms.size() > in.grid_points.size())
    throw InfeasibleError("docking infeasible: " + std::to_string(in.ligand_atoms.size()) + " ligand atoms but only " +
                          std::to_string(in.grid_points.size()) + " grid points");
}

ComplexInput parse_complex(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }

  ComplexInput in;
  if (!doc.is_object()) throw ValidationError("<root>", "expected an object");
  if (auto it = doc.find("name"); it != doc.end() && it->is_string()) in.name = it->get<std::string>();
  if (auto it = doc.find("dielectric"); it != doc.end()) in.dielectric = as_real(*it, "dielectric");

  const auto& tt = require(doc, "type_table", "<root>");
  in.type_table.epsilon = as_real_vector(require(tt, "epsilon", "type_table"), "type_table.epsilon");
  in.type_table.r_min = as_real_vector(require(tt, "r_min", "type_table"), "type_table.r_min");
  if (auto it = tt.find("n_types"); it != tt.end()) {
    if (as_int(*it, "type_table.n_types") != static_cast<int>(in.type_table.epsilon.size()))
      throw ValidationError("type_table.n_types", "does not match the epsilon vector length");
  }

  const auto& protein = as_array(require(doc, "protein", "<root>"), "protein");
  for (std::size_t k = 0; k < protein.size(); ++k) {
    const auto path = indexed("protein", k);
    const auto& p = protein[k];
    ProteinAtom atom;
    atom.id = as_int(require(p, "id", path), path + ".id");
    atom.position = as_vec3(require(p, "position", path), path + ".position");
    atom.charge = as_real(require(p, "charge", path), path + ".charge");
    atom.type_index = as_int(require(p, "type_index", path), path + ".type_index");
    if (auto it = p.find("hbond_role"); it != p.end()) {
      if (!it->is_string()) throw ValidationError(path + ".hbond_role", "expected a string");
      try {
        atom.hbond_role = parse_hbond_role(it->get<std::string>());
      } catch (const ValidationError& e) {
        throw ValidationError(path + ".hbond_role", e.what());
      }
    }
    if (auto it = p.find("hydrophobic"); it != p.end()) atom.hydrophobic = as_bool(*it, path + ".hydrophobic");
    if (auto it = p.find("donor_hydrogens"); it != p.end()) {
      const auto& hs = as_array(*it, path + ".donor_hydrogens");
      for (std::size_t h = 0; h < hs.size(); ++h)
        atom.donor_hydrogens.push_back(as_vec3(hs[h], indexed(path + ".donor_hydrogens", h)));
    }
    in.protein.push_back(std::move(atom));
  }

  const auto& ligand = require(doc, "ligand", "<root>");
  const auto& atoms = as_array(require(ligand, "atoms", "ligand"), "ligand.atoms");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto path = indexed("ligand.atoms", i);
    const auto& a = atoms[i];
    LigandAtom atom;
    atom.id = as_int(require(a, "id", path), path + ".id");
    atom.position = as_vec3(require(a, "position", path), path + ".position");
    atom.charge = as_real(require(a, "charge", path), path + ".charge");
    atom.type_index = as_int(require(a, "type_index", path), path + ".type_index");
    if (auto it = a.find("hbond_acceptor"); it != a.end()) atom.hbond_acceptor = as_flag(*it, path + ".hbond_acceptor");
    if (auto it = a.find("hbond_donor"); it != a.end()) atom.hbond_donor = as_flag(*it, path + ".hbond_donor");
    if (auto it = a.find("hydrophobic"); it != a.end()) atom.hydrophobic = as_flag(*it, path + ".hydrophobic");
    in.ligand_atoms.push_back(atom);
  }
  if (auto it = ligand.find("bonds"); it != ligand.end()) {
    const auto& bonds = as_array(*it, "ligand.bonds");
    for (std::size_t b = 0; b < bonds.size(); ++b) {
      const auto path = indexed("ligand.bonds", b);
      const auto& ends = require(bonds[b], "endpoints", path);
      if (!ends.is_array() || ends.size() != 2) throw ValidationError(path + ".endpoints", "expected two atom ids");
      LigandBond bond;
      bond.endpoints = {as_int(ends[0], path + ".endpoints[0]"), as_int(ends[1], path + ".endpoints[1]")};
      if (auto r = bonds[b].find("rotatable"); r != bonds[b].end()) bond.rotatable = as_bool(*r, path + ".rotatable");
      if (auto d = bonds[b].find("dihedral_locked"); d != bonds[b].end())
        bond.dihedral_locked = as_bool(*d, path + ".dihedral_locked");
      in.ligand_bonds.push_back(bond);
    }
  }

  const auto& grid = as_array(require(doc, "grid_points", "<root>"), "grid_points");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto path = indexed("grid_points", j);
    GridPointInput g;
    g.id = as_int(require(grid[j], "id", path), path + ".id");
    g.position = as_vec3(require(grid[j], "position", path), path + ".position");
    in.grid_points.push_back(g);
  }

  validate(in);
  return in;
}

ComplexInput load_complex(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open complex file '" + path.string() + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  auto in = parse_complex(buf.str(), path.string());
  if (in.name.empty()) in.name = path.stem().string();
  return in;
}

}  // namespace qdock

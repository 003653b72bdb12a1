#include "qdock/ligand_graph.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "qdock/errors.hpp"

namespace qdock {

namespace {

constexpr double kMinEdgeLength = 1e-9;

}  // namespace

std::string_view to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Connectivity: return "connectivity";
    case EdgeKind::BondAngle: return "bond_angle";
    case EdgeKind::Dihedral: return "dihedral";
  }
  return "connectivity";
}

LigandGraph build_ligand_graph(const ComplexInput& input) {
  const std::size_t n = input.ligand_atoms.size();
  if (n == 0) throw ValidationError("ligand.atoms", "ligand has no atoms");

  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<std::pair<std::size_t, std::size_t>> locked;
  for (const auto& bond : input.ligand_bonds) {
    const auto u = input.ligand_index(bond.endpoints.first);
    const auto v = input.ligand_index(bond.endpoints.second);
    if (u == v) throw ValidationError("ligand.bonds", "self bond on atom " + std::to_string(bond.endpoints.first));
    adj[u].push_back(v);
    adj[v].push_back(u);
    if (bond.dihedral_locked) locked.emplace_back(u, v);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  {
    std::vector<char> reached(n, 0);
    std::queue<std::size_t> todo;
    todo.push(0);
    reached[0] = 1;
    std::size_t count = 1;
    while (!todo.empty()) {
      const auto u = todo.front();
      todo.pop();
      for (auto v : adj[u])
        if (!reached[v]) {
          reached[v] = 1;
          ++count;
          todo.push(v);
        }
    }
    if (count != n) throw ValidationError("ligand.bonds", "bond graph is disconnected");
  }

  // Keyed by (min, max); first insertion fixes the kind.
  std::map<std::pair<std::size_t, std::size_t>, EdgeKind> kinds;
  auto add = [&](std::size_t u, std::size_t v, EdgeKind kind) {
    if (u == v) return;
    kinds.try_emplace(std::minmax(u, v), kind);
  };

  for (std::size_t u = 0; u < n; ++u)
    for (auto v : adj[u]) add(u, v, EdgeKind::Connectivity);

  for (std::size_t mid = 0; mid < n; ++mid)
    for (std::size_t p = 0; p < adj[mid].size(); ++p)
      for (std::size_t q = p + 1; q < adj[mid].size(); ++q) {
        const auto u = adj[mid][p], v = adj[mid][q];
        // Three-membered rings: the pair is already bonded (distance 1).
        if (!kinds.contains(std::minmax(u, v))) add(u, v, EdgeKind::BondAngle);
      }

  for (const auto& [a, b] : locked)
    for (auto x : adj[a]) {
      if (x == b) continue;
      for (auto y : adj[b])
        if (y != a) add(x, y, EdgeKind::Dihedral);
    }

  LigandGraph g;
  g.atoms = input.ligand_atoms;
  g.edges.reserve(kinds.size());
  for (const auto& [key, kind] : kinds) {
    const double d = (g.atoms[key.first].position - g.atoms[key.second].position).norm();
    if (d < kMinEdgeLength)
      throw ValidationError("ligand.atoms", "zero-length edge between atom ids " + std::to_string(g.atoms[key.first].id) +
                                                " and " + std::to_string(g.atoms[key.second].id));
    g.edges.push_back({key.first, key.second, d, kind});
  }
  return g;
}

}  // namespace qdock

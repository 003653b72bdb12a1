#include "qdock/report.hpp"

#include <ostream>

#include "qdock/qubo_io.hpp"

namespace qdock {

namespace {

ordered_json vec3(const auto& row) { return ordered_json::array({row(0), row(1), row(2)}); }

ordered_json phys_chem(const PhysChemVector& v) {
  ordered_json o;
  for (auto t : kPhysChemTerms) o[std::string(to_string(t))] = v[lambda_slot(t)];
  return o;
}

// JSON has no infinity; an undefined mean is written as null.
ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json candidate(const TunerCandidate& c) {
  return {{"step", c.step},
          {"interaction", std::string(to_string(c.interaction))},
          {"weight", c.weight},
          {"mean_adjusted_rmsd", finite_or_null(c.mean_adjusted_rmsd)},
          {"excluded", c.excluded}};
}

}  // namespace

ordered_json to_json(const LigandGraph& g) {
  ordered_json atoms = ordered_json::array();
  for (const auto& a : g.atoms)
    atoms.push_back({{"id", a.id},
                     {"position", vec3(a.position)},
                     {"charge", a.charge},
                     {"type_index", a.type_index},
                     {"hbond_acceptor", a.hbond_acceptor},
                     {"hbond_donor", a.hbond_donor},
                     {"hydrophobic", a.hydrophobic}});
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"atoms", {g.atoms[e.a].id, g.atoms[e.b].id}},
                     {"distance", e.distance},
                     {"kind", std::string(to_string(e.kind))}});
  return {{"n_atoms", g.n_atoms()}, {"atoms", atoms}, {"edges", edges}};
}

ordered_json to_json(const GridGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.n_points());
  ordered_json positions = ordered_json::array(), dist = ordered_json::array(), lj = ordered_json::array();
  for (Eigen::Index j = 0; j < n; ++j) {
    positions.push_back(vec3(g.positions.row(j)));
    ordered_json drow = ordered_json::array(), lrow = ordered_json::array();
    for (Eigen::Index k = 0; k < n; ++k) drow.push_back(g.dist(j, k));
    for (Eigen::Index a = 0; a < g.lj.cols(); ++a) lrow.push_back(g.lj(j, a));
    dist.push_back(drow);
    lj.push_back(lrow);
  }
  auto to_array = [](const auto& v) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
    return out;
  };
  return {{"n_points", g.n_points()},
          {"ids", g.ids},
          {"positions", positions},
          {"dist", dist},
          {"coulomb", to_array(g.coulomb)},
          {"lj", lj},
          {"hb_acceptor", to_array(g.hb_acceptor)},
          {"hb_donor", to_array(g.hb_donor)},
          {"hydrophobic", to_array(g.hydrophobic)}};
}

ordered_json to_json(const EnergyBreakdown& e) {
  ordered_json o;
  if (e.decomposed)
    for (auto t : kAllTerms) o[std::string(to_string(t))] = e[t];
  o["total"] = e.total;
  return o;
}

ordered_json to_json(const SampleSet& s) {
  ordered_json samples = ordered_json::array();
  for (const auto& smp : s.samples)
    samples.push_back({{"read", smp.read}, {"bits", smp.assignment.to_string()}, {"energy", to_json(smp.energy)}});
  return {{"sampler", s.sampler},
          {"seed", s.seed},
          {"n_reads", s.n_reads},
          {"n_sweeps", s.n_sweeps},
          {"t_initial", s.temperatures.initial},
          {"t_final", s.temperatures.final},
          {"samples", samples}};
}

ordered_json to_json(const DockingReport& r) {
  ordered_json o;
  o["name"] = r.name;
  o["valid"] = r.valid;
  o["valid_solution_rate"] = r.valid_solution_rate;
  o["n_samples"] = r.n_samples;
  o["gamma"] = r.build.gamma;
  o["lambdas"] = phys_chem(r.build.lambdas);
  o["scales"] = phys_chem(r.build.scales);
  o["best_energy"] = r.best_energy;
  o["best_valid"] = r.best_valid;
  if (!r.best_valid) o["best_invalid_reason"] = r.best_invalid_reason;
  if (r.valid) {
    ordered_json mapping = ordered_json::array();
    for (const auto& [atom, point] : r.mapping) mapping.push_back({{"atom", atom}, {"grid_point", point}});
    ordered_json coords = ordered_json::array();
    for (Eigen::Index i = 0; i < r.coordinates.rows(); ++i) coords.push_back(vec3(r.coordinates.row(i)));
    o["pose"] = {{"mapping", mapping}, {"coordinates", coords}};
    o["energy"] = to_json(r.energy);
    o["rmsd"] = *r.rmsd;
    o["adjusted_rmsd"] = *r.adjusted_rmsd;
  } else {
    o["error"] = "NoValidSolution";
  }
  return o;
}

ordered_json to_json(const TunerResult& r) {
  ordered_json selection = ordered_json::array(), trace = ordered_json::array();
  for (const auto& c : r.selection) selection.push_back(candidate(c));
  for (const auto& c : r.trace) trace.push_back(candidate(c));
  return {{"lambdas", phys_chem(r.lambdas)},
          {"lambda_vector", r.lambdas},
          {"baseline_mean_adjusted_rmsd", finite_or_null(r.baseline_mean)},
          {"baseline_excluded", r.baseline_excluded},
          {"selection", selection},
          {"trace", trace}};
}

void write_metrics_csv(std::ostream& out, std::span<const DockingReport> reports) {
  out << "complex";
  for (auto t : kAllTerms) out << ",e_" << to_string(t);
  out << ",e_total,rmsd,adjusted_rmsd,valid_solution_rate\n";
  for (const auto& r : reports) {
    out << r.name;
    for (auto t : kAllTerms) out << ',' << (r.valid ? format_real(r.energy[t]) : "");
    out << ',' << (r.valid ? format_real(r.energy.total) : "");
    out << ',' << (r.valid ? format_real(*r.rmsd) : "");
    out << ',' << (r.valid ? format_real(*r.adjusted_rmsd) : "");
    out << ',' << format_real(r.valid_solution_rate) << '\n';
  }
}

}  // namespace qdock

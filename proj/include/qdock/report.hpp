#pragma once

#include <iosfwd>
#include <span>

#include <nlohmann/json.hpp>

#include "qdock/annealer.hpp"
#include "qdock/dock_eval.hpp"
#include "qdock/ligand_graph.hpp"
#include "qdock/pocket_grid.hpp"

namespace qdock {

// Serialized views used by the CLI. Keys are emitted in a fixed order and
// timing information is left out, so equal inputs give byte-identical text.
using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const LigandGraph& g);
ordered_json to_json(const GridGraph& g);
ordered_json to_json(const EnergyBreakdown& e);
ordered_json to_json(const SampleSet& s);
ordered_json to_json(const DockingReport& r);
ordered_json to_json(const TunerResult& r);

// One row per report: name, per-term energies, total, rmsd, adjusted rmsd,
// valid rate. Invalid reports leave the pose columns empty.
void write_metrics_csv(std::ostream& out, std::span<const DockingReport> reports);

}  // namespace qdock

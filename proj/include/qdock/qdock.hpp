#pragma once

#include "qdock/annealer.hpp"
#include "qdock/dock_eval.hpp"
#include "qdock/errors.hpp"
#include "qdock/ligand_graph.hpp"
#include "qdock/model.hpp"
#include "qdock/pocket_grid.hpp"
#include "qdock/qubo.hpp"
#include "qdock/qubo_io.hpp"
#include "qdock/report.hpp"

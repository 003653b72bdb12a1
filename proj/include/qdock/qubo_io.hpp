#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qdock/qubo.hpp"

namespace qdock {

// Coordinate-list text format:
//
//   p qubo <n_vars> <n_entries>
//   c offset <value>                 (optional)
//   c layout <n_atoms> <n_points>    (optional)
//   <i> <j> <value>                  (n_entries lines, i <= j)
//
// Values are written in shortest round-trip form, so import(export(q)) has
// bit-identical coefficients.
void write_qubo(std::ostream& out, const QuboProblem& problem);
void export_qubo(const QuboProblem& problem, const std::filesystem::path& path);

// Inverse of write_qubo; any other line is a ParseError. The result is
// finalized and carries raw (unattributed) coefficients.
QuboProblem read_qubo(std::string_view text, const std::string& source = "<memory>");
QuboProblem import_qubo(const std::filesystem::path& path);

// External sampler hand-off: a JSON array of bitstrings ("0110...") or of
// 0/1 integer arrays, each of length n_vars.
std::vector<Assignment> parse_samples(std::string_view text, std::size_t n_vars, const std::string& source = "<memory>");
std::vector<Assignment> import_samples(const std::filesystem::path& path, std::size_t n_vars);

std::string format_real(double v);

}  // namespace qdock

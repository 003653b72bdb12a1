#include "qdock/qubo_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qdock/errors.hpp"

namespace qdock {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t')) ++k;
    const std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t') ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_qubo(std::ostream& out, const QuboProblem& problem) {
  out << "p qubo " << problem.n_vars() << ' ' << problem.coeffs().size() << '\n';
  if (problem.offset() != 0.0) out << "c offset " << format_real(problem.offset()) << '\n';
  if (const auto& L = problem.layout()) out << "c layout " << L->n_atoms << ' ' << L->n_points << '\n';
  for (const auto& [key, v] : problem.coeffs()) out << key.first << ' ' << key.second << ' ' << format_real(v) << '\n';
}

void export_qubo(const QuboProblem& problem, const std::filesystem::path& path) {
  if (!problem.finalized()) throw std::logic_error("export_qubo needs a finalized problem");
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path.string() + "'");
  write_qubo(file, problem);
  if (!file.flush()) throw Error("write failed for '" + path.string() + "'");
}

QuboProblem read_qubo(std::string_view text, const std::string& source) {
  std::optional<std::size_t> n_vars, n_entries;
  std::optional<double> offset;
  std::optional<VarLayout> layout;
  std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;

    auto fail = [&](const std::string& why) { throw ParseError(source, line_no, why); };

    if (!n_vars) {
      if (tok.size() != 4 || tok[0] != "p" || tok[1] != "qubo") fail("expected header 'p qubo <n_vars> <n_entries>'");
      n_vars = parse_number<std::size_t>(tok[2]);
      n_entries = parse_number<std::size_t>(tok[3]);
      if (!n_vars || !n_entries) fail("malformed header counts");
      continue;
    }
    if (tok[0] == "c") {
      if (tok.size() == 3 && tok[1] == "offset") {
        offset = parse_number<double>(tok[2]);
        if (!offset) fail("malformed offset");
      } else if (tok.size() == 4 && tok[1] == "layout") {
        const auto na = parse_number<std::size_t>(tok[2]);
        const auto np = parse_number<std::size_t>(tok[3]);
        if (!na || !np) fail("malformed layout");
        layout = VarLayout{*na, *np};
        if (layout->n_vars() != *n_vars) fail("layout does not match the variable count");
      } else {
        fail("unknown comment directive");
      }
      continue;
    }
    if (tok.size() != 3) fail("expected '<i> <j> <value>'");
    const auto i = parse_number<std::size_t>(tok[0]);
    const auto j = parse_number<std::size_t>(tok[1]);
    const auto v = parse_number<double>(tok[2]);
    if (!i || !j || !v) fail("malformed coefficient line");
    if (*i > *j) fail("entry below the diagonal");
    if (*j >= *n_vars) fail("variable id out of range");
    if (!seen.insert({*i, *j}).second) fail("duplicate entry");
    entries.emplace_back(*i, *j, *v);
  }
  if (!n_vars) throw ParseError(source, line_no, "missing header");
  if (entries.size() != *n_entries)
    throw ParseError(source, line_no,
                     "header announces " + std::to_string(*n_entries) + " entries, found " + std::to_string(entries.size()));

  QuboProblem problem = layout ? QuboProblem(*layout) : QuboProblem(*n_vars);
  for (const auto& [i, j, v] : entries) problem.add(i, j, v);
  if (offset) problem.set_offset(*offset);
  problem.finalize();
  return problem;
}

QuboProblem import_qubo(const std::filesystem::path& path) { return read_qubo(read_file(path), path.string()); }

std::vector<Assignment> parse_samples(std::string_view text, std::size_t n_vars, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    throw ParseError(source, 1 + std::count(text.begin(), text.begin() + upto, '\n'), e.what());
  }
  if (!doc.is_array()) throw ValidationError("samples", "expected a JSON array of bitstrings");

  std::vector<Assignment> out;
  for (std::size_t s = 0; s < doc.size(); ++s) {
    const auto field = "samples[" + std::to_string(s) + "]";
    Assignment a(n_vars);
    const auto& item = doc[s];
    if (item.is_string()) {
      const auto bits = item.get<std::string>();
      if (bits.size() != n_vars) throw ValidationError(field, "expected " + std::to_string(n_vars) + " bits");
      for (std::size_t k = 0; k < n_vars; ++k) {
        if (bits[k] != '0' && bits[k] != '1') throw ValidationError(field, "bitstrings may only contain 0 and 1");
        a[k] = bits[k] == '1';
      }
    } else if (item.is_array()) {
      if (item.size() != n_vars) throw ValidationError(field, "expected " + std::to_string(n_vars) + " bits");
      for (std::size_t k = 0; k < n_vars; ++k) {
        if (!item[k].is_number_integer() || (item[k] != 0 && item[k] != 1))
          throw ValidationError(field, "bit arrays may only contain 0 and 1");
        a[k] = item[k] == 1;
      }
    } else {
      throw ValidationError(field, "expected a bitstring or an array of bits");
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Assignment> import_samples(const std::filesystem::path& path, std::size_t n_vars) {
  return parse_samples(read_file(path), n_vars, path.string());
}

}  // namespace qdock

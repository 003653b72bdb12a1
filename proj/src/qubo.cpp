#include "qdock/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qdock/errors.hpp"

namespace qdock {

std::string_view to_string(Term t) {
  switch (t) {
    case Term::Geom: return "geom";
    case Term::Penalty: return "penalty";
    case Term::El: return "el";
    case Term::Vdw: return "vdw";
    case Term::HbA: return "hba";
    case Term::HbD: return "hbd";
    case Term::Hydro: return "hydro";
  }
  return "geom";
}

void Hyperparameters::validate() const {
  if (gamma && !(*gamma > 0.0)) throw ValidationError("gamma", "must be > 0");
  for (std::size_t t = 0; t < kPhysChemCount; ++t)
    if (!(lambdas[t] >= 0.0)) throw ValidationError("lambdas[" + std::to_string(t) + "]", "must be >= 0");
  if (component_scales)
    for (std::size_t t = 0; t < kPhysChemCount; ++t)
      if (!((*component_scales)[t] > 0.0))
        throw ValidationError("component_scales[" + std::to_string(t) + "]", "must be > 0");
}

// --- CoeffMap ---------------------------------------------------------------

void CoeffMap::add(std::size_t a, std::size_t b, double value) {
  if (a > b) std::swap(a, b);
  entries_[{a, b}] += value;
}

double CoeffMap::get(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  auto it = entries_.find({a, b});
  return it == entries_.end() ? 0.0 : it->second;
}

double CoeffMap::max_abs() const {
  double m = 0.0;
  for (const auto& [key, v] : entries_) m = std::max(m, std::abs(v));
  return m;
}

void CoeffMap::drop_zeros() { std::erase_if(entries_, [](const auto& kv) { return kv.second == 0.0; }); }

// --- QuboProblem ------------------------------------------------------------

QuboProblem::QuboProblem(std::size_t n_vars) : n_vars_(n_vars) {}

QuboProblem::QuboProblem(VarLayout layout) : n_vars_(layout.n_vars()), layout_(layout) {}

void QuboProblem::require_open() const {
  if (finalized_) throw std::logic_error("QuboProblem is finalized");
}

void QuboProblem::add(Term term, std::size_t a, std::size_t b, double value) {
  require_open();
  if (has_raw_) throw std::logic_error("cannot mix attributed and raw coefficients");
  if (a >= n_vars_ || b >= n_vars_) throw std::out_of_range("QUBO variable id out of range");
  terms_[index_of(term)].add(a, b, value);
  has_terms_ = true;
}

void QuboProblem::add(std::size_t a, std::size_t b, double value) {
  require_open();
  if (has_terms_) throw std::logic_error("cannot mix attributed and raw coefficients");
  if (a >= n_vars_ || b >= n_vars_) throw std::out_of_range("QUBO variable id out of range");
  coeffs_.add(a, b, value);
  has_raw_ = true;
}

void QuboProblem::finalize() {
  require_open();
  if (has_terms_) {
    coeffs_ = CoeffMap{};
    for (auto& t : terms_) {
      t.drop_zeros();
      for (const auto& [key, v] : t) coeffs_.add(key.first, key.second, v);
    }
  }
  coeffs_.drop_zeros();

  const auto n = static_cast<Eigen::Index>(n_vars_);
  diagonal_ = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& [key, v] : coeffs_) {
    const auto [a, b] = key;
    if (a == b) {
      diagonal_[static_cast<Eigen::Index>(a)] = v;
    } else {
      triplets.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b), v);
      triplets.emplace_back(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a), v);
    }
  }
  couplings_.resize(n, n);
  couplings_.setFromTriplets(triplets.begin(), triplets.end());
  couplings_.makeCompressed();
  finalized_ = true;
}

std::string Assignment::to_string() const {
  std::string s(bits.size(), '0');
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k]) s[k] = '1';
  return s;
}

// --- energies ---------------------------------------------------------------

namespace {

// Neumaier-compensated, so that a valid pose cancels the penalty offset to
// exactly zero.
double quadratic_form(const CoeffMap& m, const Assignment& a, double offset = 0.0) {
  double s = offset, c = 0.0;
  for (const auto& [key, v] : m) {
    if (!(a[key.first] && a[key.second])) continue;
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return s + c;
}

void check_length(const QuboProblem& problem, const Assignment& a) {
  if (a.size() != problem.n_vars())
    throw ValidationError("assignment", "length " + std::to_string(a.size()) + " does not match " +
                                            std::to_string(problem.n_vars()) + " variables");
}

}  // namespace

EnergyBreakdown energy(const QuboProblem& problem, const Assignment& a) {
  check_length(problem, a);
  EnergyBreakdown e;
  e.total = quadratic_form(problem.coeffs(), a, problem.offset());
  if (problem.has_terms()) {
    e.decomposed = true;
    for (auto t : kAllTerms)
      e.terms[index_of(t)] = quadratic_form(problem.term(t), a, t == Term::Penalty ? problem.offset() : 0.0);
  }
  return e;
}

double incremental_delta(const QuboProblem& problem, const Assignment& a, std::size_t var) {
  check_length(problem, a);
  if (var >= problem.n_vars()) throw ValidationError("flip", "variable id " + std::to_string(var) + " out of range");
  if (!problem.finalized()) throw std::logic_error("incremental_delta needs a finalized problem");
  const auto k = static_cast<Eigen::Index>(var);
  double field = problem.diagonal()[k];
  for (Eigen::SparseMatrix<double>::InnerIterator it(problem.couplings(), k); it; ++it)
    if (a[static_cast<std::size_t>(it.row())]) field += it.value();
  return a[var] ? -field : field;
}

// --- builders ---------------------------------------------------------------

GeometricTerms build_geometric(const LigandGraph& lig, const GridGraph& grid, double gamma) {
  const VarLayout L{lig.n_atoms(), grid.n_points()};
  const std::size_t np = L.n_points;
  GeometricTerms out;

  for (const auto& e : lig.edges)
    for (std::size_t j = 0; j < np; ++j)
      for (std::size_t k = 0; k < np; ++k) {
        if (j == k) continue;
        const double diff = e.distance - grid.dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
        out.geom.add(L.index(e.a, j), L.index(e.b, k), diff * diff);
      }

  // gamma * sum_i (1 - sum_j x_ij)^2 with x^2 = x.
  for (std::size_t i = 0; i < L.n_atoms; ++i)
    for (std::size_t j = 0; j < np; ++j) {
      out.penalty.add(L.index(i, j), L.index(i, j), -gamma);
      for (std::size_t k = j + 1; k < np; ++k) out.penalty.add(L.index(i, j), L.index(i, k), 2.0 * gamma);
    }
  // gamma * sum_{i != i'} sum_j x_ij x_i'j over ordered atom pairs.
  for (std::size_t j = 0; j < np; ++j)
    for (std::size_t i = 0; i < L.n_atoms; ++i)
      for (std::size_t m = i + 1; m < L.n_atoms; ++m) out.penalty.add(L.index(i, j), L.index(m, j), 2.0 * gamma);

  out.offset = gamma * static_cast<double>(L.n_atoms);
  return out;
}

Eigen::MatrixXd raw_physchem(const LigandGraph& lig, const GridGraph& grid, Term term) {
  const auto na = static_cast<Eigen::Index>(lig.n_atoms());
  const auto np = static_cast<Eigen::Index>(grid.n_points());
  Eigen::VectorXd w(na);

  auto ligand_colour = [&](auto&& pick) {
    for (Eigen::Index i = 0; i < na; ++i) w[i] = pick(lig.atoms[static_cast<std::size_t>(i)]);
    return w;
  };

  switch (term) {
    case Term::El:
      return ligand_colour([](const LigandAtom& a) { return a.charge; }) * grid.coulomb.transpose();
    case Term::Vdw: {
      // One-hot type selector dotted with the grid LJ vector.
      Eigen::MatrixXd out(na, np);
      for (Eigen::Index i = 0; i < na; ++i) out.row(i) = grid.lj.col(lig.atoms[static_cast<std::size_t>(i)].type_index).transpose();
      return out;
    }
    case Term::HbA:
      return -ligand_colour([](const LigandAtom& a) { return double(a.hbond_acceptor); }) *
             grid.hb_acceptor.cast<double>().transpose();
    case Term::HbD:
      return -ligand_colour([](const LigandAtom& a) { return double(a.hbond_donor); }) *
             grid.hb_donor.cast<double>().transpose();
    case Term::Hydro:
      return -ligand_colour([](const LigandAtom& a) { return double(a.hydrophobic); }) *
             grid.hydrophobic.cast<double>().transpose();
    case Term::Geom:
    case Term::Penalty: break;
  }
  throw std::invalid_argument("raw_physchem: not a physico-chemical term");
}

PhysChemVector auto_scales(double geom_max_abs, const std::array<Eigen::MatrixXd, kPhysChemCount>& raw) {
  PhysChemVector s;
  for (std::size_t t = 0; t < kPhysChemCount; ++t) {
    const double m = raw[t].size() ? raw[t].cwiseAbs().maxCoeff() : 0.0;
    s[t] = (m > 0.0 && geom_max_abs > 0.0) ? geom_max_abs / m : 1.0;
  }
  return s;
}

std::array<Eigen::MatrixXd, kPhysChemCount> build_physchem(const LigandGraph& lig, const GridGraph& grid,
                                                           const PhysChemVector& lambdas,
                                                           const PhysChemVector& scales) {
  std::array<Eigen::MatrixXd, kPhysChemCount> out;
  for (auto t : kPhysChemTerms) {
    const auto s = lambda_slot(t);
    out[s] = (scales[s] * lambdas[s]) * raw_physchem(lig, grid, t);
  }
  return out;
}

QuboProblem build_full(const LigandGraph& lig, const GridGraph& grid, const Hyperparameters& hp) {
  hp.validate();
  if (lig.n_atoms() == 0 || grid.n_points() == 0) throw ValidationError("graphs", "ligand and grid must be non-empty");
  const VarLayout L{lig.n_atoms(), grid.n_points()};

  // The distortion term does not depend on gamma; build it once with a
  // placeholder and rebuild the penalty once gamma is known.
  auto geometric = build_geometric(lig, grid, 1.0);
  const double geom_max = geometric.geom.max_abs();

  std::array<Eigen::MatrixXd, kPhysChemCount> raw;
  for (auto t : kPhysChemTerms) raw[lambda_slot(t)] = raw_physchem(lig, grid, t);
  const PhysChemVector scales = hp.component_scales ? *hp.component_scales : auto_scales(geom_max, raw);

  std::array<Eigen::MatrixXd, kPhysChemCount> weighted;
  for (std::size_t s = 0; s < kPhysChemCount; ++s) weighted[s] = (scales[s] * hp.lambdas[s]) * raw[s];

  double gamma = 0.0;
  if (hp.gamma) {
    gamma = *hp.gamma;
  } else if (geom_max > 0.0) {
    gamma = 10.0 * geom_max;
  } else {
    // No ligand edges: fall back to the physico-chemical range, then to 1.
    double m = 0.0;
    for (const auto& w : weighted) m = std::max(m, w.size() ? w.cwiseAbs().maxCoeff() : 0.0);
    gamma = m > 0.0 ? 10.0 * m : 1.0;
  }
  if (gamma != 1.0) geometric = build_geometric(lig, grid, gamma);

  QuboProblem problem(L);
  for (const auto& [key, v] : geometric.geom) problem.add(Term::Geom, key.first, key.second, v);
  for (const auto& [key, v] : geometric.penalty) problem.add(Term::Penalty, key.first, key.second, v);
  for (auto t : kPhysChemTerms) {
    const auto& w = weighted[lambda_slot(t)];
    for (std::size_t i = 0; i < L.n_atoms; ++i)
      for (std::size_t j = 0; j < L.n_points; ++j) {
        const double v = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (v != 0.0) problem.add(t, L.index(i, j), L.index(i, j), v);
      }
  }
  problem.set_offset(geometric.offset);
  problem.set_build_info({gamma, hp.lambdas, scales});
  problem.finalize();
  return problem;
}

QuboProblem build_full(const ComplexInput& input, const Hyperparameters& hp, unsigned threads) {
  return build_full(build_ligand_graph(input), build_grid_graph(input, threads), hp);
}

}  // namespace qdock

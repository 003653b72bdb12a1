#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "qdock/ligand_graph.hpp"
#include "qdock/pocket_grid.hpp"

namespace qdock {

// Hamiltonian components. The five physico-chemical terms come last and are
// weighted by lambda_1..lambda_5 in this order.
enum class Term : std::uint8_t { Geom, Penalty, El, Vdw, HbA, HbD, Hydro };
inline constexpr std::size_t kTermCount = 7;
inline constexpr std::size_t kPhysChemCount = 5;
inline constexpr std::array<Term, kTermCount> kAllTerms = {Term::Geom, Term::Penalty, Term::El, Term::Vdw,
                                                           Term::HbA,  Term::HbD,     Term::Hydro};
inline constexpr std::array<Term, kPhysChemCount> kPhysChemTerms = {Term::El, Term::Vdw, Term::HbA, Term::HbD,
                                                                    Term::Hydro};

std::string_view to_string(Term t);
constexpr std::size_t index_of(Term t) { return static_cast<std::size_t>(t); }
// Position of a physico-chemical term inside the lambda vector.
constexpr std::size_t lambda_slot(Term t) { return index_of(t) - index_of(Term::El); }

using PhysChemVector = std::array<double, kPhysChemCount>;

struct Hyperparameters {
  std::optional<double> gamma;  // unset: ten times the largest geometric coefficient
  PhysChemVector lambdas{};
  std::optional<PhysChemVector> component_scales;  // unset: auto-scale to the geometric range

  void validate() const;
};

// Flat variable id for x_ij (ligand atom i on grid point j): i * n_points + j.
struct VarLayout {
  std::size_t n_atoms = 0;
  std::size_t n_points = 0;

  std::size_t n_vars() const { return n_atoms * n_points; }
  std::size_t index(std::size_t atom, std::size_t point) const { return atom * n_points + point; }
  std::size_t atom(std::size_t var) const { return var / n_points; }
  std::size_t point(std::size_t var) const { return var % n_points; }
  bool operator==(const VarLayout&) const = default;
};

// Sparse upper-triangular coefficients keyed by (a, b) with a <= b.
class CoeffMap {
 public:
  using Key = std::pair<std::size_t, std::size_t>;
  using Storage = std::map<Key, double>;

  void add(std::size_t a, std::size_t b, double value);
  double get(std::size_t a, std::size_t b) const;
  double max_abs() const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  void drop_zeros();

  Storage::const_iterator begin() const { return entries_.begin(); }
  Storage::const_iterator end() const { return entries_.end(); }
  bool operator==(const CoeffMap&) const = default;

 private:
  Storage entries_;
};

// Values actually used to build a problem, after auto-resolution.
struct BuildInfo {
  double gamma = 0.0;
  PhysChemVector lambdas{};
  PhysChemVector scales{};
};

class QuboProblem {
 public:
  explicit QuboProblem(std::size_t n_vars = 0);
  explicit QuboProblem(VarLayout layout);

  std::size_t n_vars() const { return n_vars_; }
  const std::optional<VarLayout>& layout() const { return layout_; }

  // Accumulates into one Hamiltonian term. Not allowed after finalize().
  void add(Term term, std::size_t a, std::size_t b, double value);
  // Accumulates an unattributed coefficient (imported problems).
  void add(std::size_t a, std::size_t b, double value);
  // Constant energy shift; for built problems this is the penalty constant.
  void set_offset(double offset) { offset_ = offset; }
  void set_build_info(BuildInfo info) { info_ = info; }

  // Sums the term maps into coeffs() and prepares the sampler adjacency.
  void finalize();
  bool finalized() const { return finalized_; }

  double offset() const { return offset_; }
  const std::optional<BuildInfo>& build_info() const { return info_; }
  bool has_terms() const { return has_terms_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  const CoeffMap& term(Term t) const { return terms_[index_of(t)]; }

  // Sampler view: linear coefficients and a symmetric coupling matrix with an
  // empty diagonal, so that E(x) = offset + d.x + x'Jx / 2.
  const Eigen::VectorXd& diagonal() const { return diagonal_; }
  const Eigen::SparseMatrix<double>& couplings() const { return couplings_; }

 private:
  void require_open() const;

  std::size_t n_vars_ = 0;
  std::optional<VarLayout> layout_;
  std::optional<BuildInfo> info_;
  double offset_ = 0.0;
  bool has_terms_ = false;
  bool has_raw_ = false;
  bool finalized_ = false;
  CoeffMap coeffs_;
  std::array<CoeffMap, kTermCount> terms_;
  Eigen::VectorXd diagonal_;
  Eigen::SparseMatrix<double> couplings_;
};

struct Assignment {
  std::vector<std::uint8_t> bits;

  Assignment() = default;
  explicit Assignment(std::size_t n) : bits(n, 0) {}
  std::size_t size() const { return bits.size(); }
  std::uint8_t operator[](std::size_t k) const { return bits[k]; }
  std::uint8_t& operator[](std::size_t k) { return bits[k]; }
  std::string to_string() const;
  bool operator==(const Assignment&) const = default;
};

struct EnergyBreakdown {
  std::array<double, kTermCount> terms{};  // zeros when the problem has no terms
  double total = 0.0;
  bool decomposed = false;

  double operator[](Term t) const { return terms[index_of(t)]; }
  bool operator==(const EnergyBreakdown&) const = default;
};

// x'Qx + offset, evaluated per term. The penalty term carries the offset.
// Throws ValidationError on length mismatch.
EnergyBreakdown energy(const QuboProblem& problem, const Assignment& a);

// Energy change from flipping `var`, using only that variable's couplings.
double incremental_delta(const QuboProblem& problem, const Assignment& a, std::size_t var);

struct GeometricTerms {
  CoeffMap geom;
  CoeffMap penalty;
  double offset = 0.0;  // gamma * n_atoms
};

// Distortion over ligand edges x all ordered grid pairs j != j', plus the
// one-hot and injectivity penalties expanded to QUBO form.
GeometricTerms build_geometric(const LigandGraph& lig, const GridGraph& grid, double gamma);

// Per-(atom, point) diagonal value of one physico-chemical term before
// scale and lambda weighting; n_atoms x n_points.
Eigen::MatrixXd raw_physchem(const LigandGraph& lig, const GridGraph& grid, Term term);

// scale_t = max|geom| / max|raw_t|, or 1 when either is zero.
PhysChemVector auto_scales(double geom_max_abs, const std::array<Eigen::MatrixXd, kPhysChemCount>& raw);

// Scaled and lambda-weighted diagonals, one matrix per physico-chemical term.
std::array<Eigen::MatrixXd, kPhysChemCount> build_physchem(const LigandGraph& lig, const GridGraph& grid,
                                                           const PhysChemVector& lambdas,
                                                           const PhysChemVector& scales);

QuboProblem build_full(const LigandGraph& lig, const GridGraph& grid, const Hyperparameters& hp);
QuboProblem build_full(const ComplexInput& input, const Hyperparameters& hp, unsigned threads = 1);

}  // namespace qdock

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdock/qubo.hpp"

namespace qdock {

// Default ladder spans max |coefficient| down to max |coefficient| / ratio.
// Each read returns the lowest state it visits.
inline constexpr double kDefaultTemperatureRatio = 6.0;

struct AnnealSchedule {
  std::size_t n_reads = 100;
  std::size_t n_sweeps = 2000;
  // Unset: max |coefficient| and max |coefficient| / kDefaultTemperatureRatio.
  std::optional<double> t_initial;
  std::optional<double> t_final;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Temperatures {
  double initial = 1.0;
  double final = 1.0;
};

Temperatures resolve_temperatures(const QuboProblem& problem, const AnnealSchedule& sched);

struct Sample {
  Assignment assignment;
  EnergyBreakdown energy;  // recomputed with energy(problem, assignment)
  std::size_t read = 0;
  bool operator==(const Sample&) const = default;
};

// Samples sorted by total energy, ties in read order.
struct SampleSet {
  std::vector<Sample> samples;
  std::string sampler;
  std::uint64_t seed = 0;
  std::size_t n_reads = 0;
  std::size_t n_sweeps = 0;
  Temperatures temperatures;
  double wall_seconds = 0.0;  // informational; excluded from comparisons

  bool empty() const { return samples.empty(); }
  const Sample& best() const { return samples.front(); }
  bool operator==(const SampleSet& o) const {
    return samples == o.samples && sampler == o.sampler && seed == o.seed && n_reads == o.n_reads &&
           n_sweeps == o.n_sweeps && temperatures.initial == o.temperatures.initial &&
           temperatures.final == o.temperatures.final;
  }
};

// Largest instance brute_force accepts.
inline constexpr std::size_t kBruteForceMaxVars = 24;

// Metropolis single-flip annealing. Each read draws its own stream from
// (seed, read index), so the result does not depend on `threads`.
SampleSet simulated_anneal(const QuboProblem& problem, const AnnealSchedule& sched, unsigned threads = 1);

// Exhaustive Gray-code enumeration. Returns the `keep` lowest-energy states
// (the global optimum first). Throws Error above kBruteForceMaxVars.
SampleSet brute_force(const QuboProblem& problem, std::size_t keep = 1);

// Scores externally produced assignments (e.g. from a hardware annealer).
SampleSet evaluate_samples(const QuboProblem& problem, std::vector<Assignment> assignments,
                           std::string sampler = "external");

class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual SampleSet sample(const QuboProblem& problem) const = 0;
};

class AnnealingSampler final : public Sampler {
 public:
  explicit AnnealingSampler(AnnealSchedule sched, unsigned threads = 1) : sched_(sched), threads_(threads) {}
  SampleSet sample(const QuboProblem& problem) const override { return simulated_anneal(problem, sched_, threads_); }

 private:
  AnnealSchedule sched_;
  unsigned threads_;
};

class ExactSampler final : public Sampler {
 public:
  explicit ExactSampler(std::size_t keep = 1) : keep_(keep) {}
  SampleSet sample(const QuboProblem& problem) const override { return brute_force(problem, keep_); }

 private:
  std::size_t keep_;
};

class ExternalSampler final : public Sampler {
 public:
  explicit ExternalSampler(std::vector<Assignment> assignments) : assignments_(std::move(assignments)) {}
  SampleSet sample(const QuboProblem& problem) const override { return evaluate_samples(problem, assignments_); }

 private:
  std::vector<Assignment> assignments_;
};

}  // namespace qdock

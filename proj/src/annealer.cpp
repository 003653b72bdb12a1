#include "qdock/annealer.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

#include "qdock/errors.hpp"
#include "qdock/parallel.hpp"

namespace qdock {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Portable draws on top of mt19937_64 (the std distributions are
// implementation-defined).
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t read) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(read), static_cast<std::uint32_t>(read >> 32)};
    engine_.seed(seq);
  }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n) by rejection.
  std::size_t below(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do v = engine_();
    while (v >= limit);
    return static_cast<std::size_t>(v % bound);
  }

  bool coin() { return engine_() >> 63; }

 private:
  std::mt19937_64 engine_;
};

// Local fields h_k = d_k + sum_m J_km x_m; flipping k changes the energy by
// (1 - 2 x_k) h_k.
struct FieldState {
  const QuboProblem& problem;
  Assignment x;
  Eigen::VectorXd field;

  FieldState(const QuboProblem& p, Assignment init) : problem(p), x(std::move(init)) { recompute(); }

  void recompute() {
    field = problem.diagonal();
    const auto& J = problem.couplings();
    for (Eigen::Index k = 0; k < J.outerSize(); ++k) {
      if (!x[static_cast<std::size_t>(k)]) continue;
      for (Eigen::SparseMatrix<double>::InnerIterator it(J, k); it; ++it) field[it.row()] += it.value();
    }
  }

  double delta(std::size_t k) const { return x[k] ? -field[static_cast<Eigen::Index>(k)] : field[static_cast<Eigen::Index>(k)]; }

  void flip(std::size_t k) {
    x[k] ^= 1;
    const double sign = x[k] ? 1.0 : -1.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(problem.couplings(), static_cast<Eigen::Index>(k)); it; ++it)
      field[it.row()] += sign * it.value();
  }

  // Energy relative to the offset: sum_k x_k (d_k + h_k) / 2.
  double energy() const {
    double e = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k]) e += 0.5 * (problem.diagonal()[static_cast<Eigen::Index>(k)] + field[static_cast<Eigen::Index>(k)]);
    return e;
  }
};

void sort_samples(std::vector<Sample>& samples) {
  std::stable_sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    if (a.energy.total != b.energy.total) return a.energy.total < b.energy.total;
    return a.read < b.read;
  });
}

void require_finalized(const QuboProblem& problem) {
  if (!problem.finalized()) throw std::logic_error("sampler needs a finalized problem");
}

}  // namespace

void AnnealSchedule::validate() const {
  if (n_reads < 1) throw ValidationError("n_reads", "must be >= 1");
  if (n_sweeps < 1) throw ValidationError("n_sweeps", "must be >= 1");
  if (t_initial && !(*t_initial > 0.0)) throw ValidationError("t_initial", "must be > 0");
  if (t_final && !(*t_final > 0.0)) throw ValidationError("t_final", "must be > 0");
  if (t_initial && t_final && *t_initial < *t_final) throw ValidationError("t_initial", "must be >= t_final");
}

Temperatures resolve_temperatures(const QuboProblem& problem, const AnnealSchedule& sched) {
  const double max_abs = problem.coeffs().max_abs();
  const double hot = max_abs > 0.0 ? max_abs : 1.0;
  Temperatures t;
  t.initial = sched.t_initial.value_or(hot);
  t.final = sched.t_final.value_or(hot / kDefaultTemperatureRatio);
  if (t.final > t.initial) {
    if (sched.t_final && !sched.t_initial) t.initial = t.final;
    else t.final = t.initial;
  }
  return t;
}

SampleSet simulated_anneal(const QuboProblem& problem, const AnnealSchedule& sched, unsigned threads) {
  require_finalized(problem);
  sched.validate();
  const auto start = Clock::now();
  const std::size_t n = problem.n_vars();
  const Temperatures temps = resolve_temperatures(problem, sched);

  std::vector<double> ladder(sched.n_sweeps);
  for (std::size_t s = 0; s < sched.n_sweeps; ++s) {
    const double frac = sched.n_sweeps > 1 ? double(s) / double(sched.n_sweeps - 1) : 0.0;
    ladder[s] = temps.initial * std::pow(temps.final / temps.initial, frac);
  }

  std::vector<Sample> samples(sched.n_reads);
  parallel_for(sched.n_reads, threads, [&](std::size_t read) {
    Stream rng(sched.seed, read);
    Assignment init(n);
    for (std::size_t k = 0; k < n; ++k) init[k] = rng.coin();
    FieldState state(problem, std::move(init));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    double current = state.energy();
    double best = current;
    Assignment best_x = state.x;

    for (const double T : ladder) {
      for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
      for (const auto var : order) {
        const double d = state.delta(var);
        if (d <= 0.0 || rng.uniform() < std::exp(-d / T)) {
          state.flip(var);
          current += d;
          if (current < best) {
            best = current;
            best_x = state.x;
          }
        }
      }
    }
    samples[read] = {best_x, energy(problem, best_x), read};
  });
  sort_samples(samples);

  SampleSet out;
  out.samples = std::move(samples);
  out.sampler = "simulated_annealing";
  out.seed = sched.seed;
  out.n_reads = sched.n_reads;
  out.n_sweeps = sched.n_sweeps;
  out.temperatures = temps;
  out.wall_seconds = seconds_since(start);
  return out;
}

SampleSet brute_force(const QuboProblem& problem, std::size_t keep) {
  require_finalized(problem);
  const std::size_t n = problem.n_vars();
  if (n > kBruteForceMaxVars)
    throw Error("brute force is limited to " + std::to_string(kBruteForceMaxVars) + " variables, problem has " +
                std::to_string(n));
  keep = std::max<std::size_t>(keep, 1);
  const auto start = Clock::now();

  // Max-heap on (energy, visit index) holding the `keep` best states.
  struct Entry {
    double energy;
    std::uint64_t visit;
    std::uint32_t mask;
    bool operator<(const Entry& o) const { return energy != o.energy ? energy < o.energy : visit < o.visit; }
  };
  std::priority_queue<Entry> heap;
  auto offer = [&](double e, std::uint64_t visit, std::uint32_t mask) {
    if (heap.size() < keep) {
      heap.push({e, visit, mask});
    } else if (Entry{e, visit, mask} < heap.top()) {
      heap.pop();
      heap.push({e, visit, mask});
    }
  };

  FieldState state(problem, Assignment(n));
  double current = 0.0;
  std::uint32_t mask = 0;
  offer(current, 0, mask);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto var = static_cast<std::size_t>(std::countr_zero(step));
    current += state.delta(var);
    state.flip(var);
    mask ^= std::uint32_t{1} << var;
    if ((step & 0xFFFF) == 0) {
      state.recompute();
      current = state.energy();
    }
    offer(current, step, mask);
  }

  std::vector<Sample> samples;
  samples.reserve(heap.size());
  while (!heap.empty()) {
    const auto top = heap.top();
    heap.pop();
    Assignment a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = (top.mask >> k) & 1u;
    samples.push_back({a, energy(problem, a), static_cast<std::size_t>(top.visit)});
  }
  sort_samples(samples);

  SampleSet out;
  out.samples = std::move(samples);
  out.sampler = "brute_force";
  out.n_reads = out.samples.size();
  out.wall_seconds = seconds_since(start);
  return out;
}

SampleSet evaluate_samples(const QuboProblem& problem, std::vector<Assignment> assignments, std::string sampler) {
  SampleSet out;
  out.sampler = std::move(sampler);
  out.n_reads = assignments.size();
  for (std::size_t r = 0; r < assignments.size(); ++r) {
    auto e = energy(problem, assignments[r]);
    out.samples.push_back({std::move(assignments[r]), e, r});
  }
  sort_samples(out.samples);
  return out;
}

}  // namespace qdock

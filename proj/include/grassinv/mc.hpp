#ifndef GRASSINV_MC_HPP
#define GRASSINV_MC_HPP

// Monte Carlo driver. Work is split over `threads` workers; worker w owns
// Rng(seed, stream_base + w + 1) and a contiguous share of the samples.
// Per-worker (count, mean, M2) summaries are merged in worker order, so the
// result depends only on (seed, samples, threads), never on scheduling.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <thread>
#include <vector>

#include "grassinv/errors.hpp"
#include "grassinv/rng.hpp"

namespace grassinv {

/// Streaming mean/variance (Welford), mergeable (Chan et al.).
struct Accumulator {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Accumulator& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double n1 = static_cast<double>(count);
    const double n2 = static_cast<double>(o.count);
    const double delta = o.mean - mean;
    const double total = n1 + n2;
    mean += delta * n2 / total;
    m2 += o.m2 + delta * delta * n1 * n2 / total;
    count += o.count;
  }

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const { return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

struct McOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  unsigned threads = 1;
  std::uint64_t stream_base = 0;  ///< offsets the stream indices of a second, independent run
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::size_t redraws = 0;
};

struct McVectorEstimate {
  std::vector<Accumulator> components;
  std::size_t redraws = 0;
};

namespace detail {

inline constexpr std::size_t kMaxConsecutiveRedraws = 1000;

// Calls draw(rng, out) until it succeeds; RankDeficient draws are counted
// and redrawn.
template <class Draw>
void draw_with_redraws(Draw& draw, Rng& rng, std::span<double> out, std::size_t& redraws) {
  for (std::size_t attempt = 0;; ++attempt) {
    try {
      draw(rng, out);
      return;
    } catch (const RankDeficient&) {
      if (attempt >= kMaxConsecutiveRedraws) throw;
      ++redraws;
    }
  }
}

}  // namespace detail

/// Runs `draw(Rng&, std::span<double> out)` `opts.samples` times and
/// accumulates each of the `dim` output components.
template <class Draw>
McVectorEstimate run_mc_vector(const McOptions& opts, std::size_t dim, Draw draw) {
  if (opts.samples < 1) throw DomainError("Monte Carlo needs at least one sample");
  const unsigned workers = opts.threads == 0 ? 1u : opts.threads;

  struct WorkerResult {
    std::vector<Accumulator> acc;
    std::size_t redraws = 0;
    std::exception_ptr error;
  };
  std::vector<WorkerResult> results(workers);

  auto job = [&](unsigned w) {
    WorkerResult& res = results[w];
    try {
      res.acc.assign(dim, Accumulator{});
      std::size_t share = opts.samples / workers + (w < opts.samples % workers ? 1 : 0);
      Rng rng(opts.seed, opts.stream_base + w + 1);
      std::vector<double> out(dim);
      Draw local = draw;
      for (std::size_t s = 0; s < share; ++s) {
        detail::draw_with_redraws(local, rng, out, res.redraws);
        for (std::size_t d = 0; d < dim; ++d) res.acc[d].add(out[d]);
      }
    } catch (...) {
      res.error = std::current_exception();
    }
  };

  if (workers == 1) {
    job(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(job, w);
    for (auto& t : pool) t.join();
  }

  McVectorEstimate est;
  est.components.assign(dim, Accumulator{});
  for (const auto& res : results) {
    if (res.error) std::rethrow_exception(res.error);
    for (std::size_t d = 0; d < dim; ++d) est.components[d].merge(res.acc[d]);
    est.redraws += res.redraws;
  }
  return est;
}

/// Scalar version: `draw(Rng&) -> double`.
template <class Draw>
McEstimate run_mc(const McOptions& opts, Draw draw) {
  auto wrapped = [draw](Rng& rng, std::span<double> out) mutable { out[0] = draw(rng); };
  const McVectorEstimate v = run_mc_vector(opts, 1, wrapped);
  const Accumulator& a = v.components.front();
  return {a.mean, a.std_error(), a.count, v.redraws};
}

}  // namespace grassinv

#endif  // GRASSINV_MC_HPP

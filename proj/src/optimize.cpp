#include "relfid/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace relfid {

RealVector numeric_gradient(const Objective& f, const RealVector& x, double h) {
  RealVector g(x.size());
  RealVector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double up = f(probe);
    probe(i) = x(i) - h;
    const double down = f(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

LocalResult bfgs_minimize(const Objective& f, RealVector x0, const LocalOptions& opts) {
  const Eigen::Index n = x0.size();
  LocalResult res;
  res.x = std::move(x0);
  res.value = f(res.x);
  if (n == 0 || !std::isfinite(res.value)) return res;

  RealVector g = numeric_gradient(f, res.x, opts.fd_step);
  RealMatrix h = RealMatrix::Identity(n, n);
  bool fresh_h = true;
  int slow_steps = 0;
  double alpha0 = opts.step_init / std::max(g.norm(), 1e-12);

  for (int it = 0; it < opts.max_iters; ++it) {
    res.iterations = it + 1;
    if (g.lpNorm<Eigen::Infinity>() < 1e-13) {
      res.converged = true;
      break;
    }
    RealVector p = -h * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      h.setIdentity();
      fresh_h = true;
      p = -g;
      slope = -g.squaredNorm();
    }
    double alpha = fresh_h ? std::min(1.0, alpha0) : 1.0;
    RealVector trial;
    double ftrial = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      trial = res.x + alpha * p;
      ftrial = f(trial);
      if (std::isfinite(ftrial) && ftrial <= res.value + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (fresh_h) {
        // No descent even along the gradient: stationary up to FD noise.
        res.converged = true;
        break;
      }
      h.setIdentity();
      fresh_h = true;
      alpha0 = opts.step_init / std::max(g.norm(), 1e-12);
      continue;
    }
    const double improvement = res.value - ftrial;
    const RealVector gnew = numeric_gradient(f, trial, opts.fd_step);
    const RealVector s = trial - res.x;
    const RealVector y = gnew - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (fresh_h) h *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const RealVector hy = h * y;
      h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
      fresh_h = false;
    }
    res.x = std::move(trial);
    res.value = ftrial;
    g = gnew;
    slow_steps = improvement <= opts.tol * (1.0 + std::abs(res.value)) ? slow_steps + 1 : 0;
    if (slow_steps >= 2) {
      res.converged = true;
      break;
    }
  }
  return res;
}

int worker_count(int jobs) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RELFID_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) n = v;
  }
  return std::clamp(n, 1, std::max(jobs, 1));
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = worker_count(n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

MultiStartResult multistart_minimize(const Objective& f,
                                     const std::function<RealVector(std::mt19937_64&)>& init,
                                     int restarts, std::uint64_t seed, const LocalOptions& opts,
                                     double agree_tol, const std::vector<RealVector>& extra_starts) {
  const int total = std::max(restarts, 1);
  std::vector<LocalResult> results(total);
  parallel_for(total, [&](int r) {
    RealVector x0;
    if (r < static_cast<int>(extra_starts.size())) {
      x0 = extra_starts[r];
    } else {
      auto rng = seeded_rng(seed, static_cast<std::uint64_t>(r));
      x0 = init(rng);
    }
    results[r] = bfgs_minimize(f, std::move(x0), opts);
  });

  MultiStartResult out;
  out.values.reserve(total);
  for (int r = 0; r < total; ++r) {
    out.values.push_back(results[r].value);
    if (r == 0 || results[r].value < results[out.best_restart].value) out.best_restart = r;
  }
  out.best = results[out.best_restart];
  const int close = static_cast<int>(std::count_if(out.values.begin(), out.values.end(), [&](double v) {
    return v <= out.best.value + agree_tol;
  }));
  out.agreed = close >= 2 || total == 1;
  return out;
}

}  // namespace relfid

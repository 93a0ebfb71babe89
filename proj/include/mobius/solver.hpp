#pragma once

// Minimization of the pointwise maximum of quasiconvex terms over the Klein
// ball. Two backends:
//   Local - central-cut ellipsoid method. Every active term supplies a
//           supporting halfspace of the current sublevel set, so the optimum
//           is never cut away; finishes with a short compass polish.
//   Glp   - Clarkson's two-stage random sampling (recursive sampling around
//           an iterative reweighting stage) with Local on the small samples.
//           Only term evaluations touch the full set.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mobius/errors.hpp"
#include "mobius/geometry.hpp"

namespace mobius {

/// Value taken by constraint terms outside their feasible halfspace.
inline constexpr double kBarrier = 1e18;

/// A viewpoint in Klein coordinates together with its hyperboloid lift,
/// shared by every term evaluated at that point.
class Viewframe {
 public:
  explicit Viewframe(const Vec& klein) : klein_(klein), hyper_(klein.size() + 1) {
    w_ = std::sqrt(std::max(0.0, 1.0 - klein.squaredNorm()));
    hyper_.head(klein.size()) = klein / w_;
    hyper_[klein.size()] = 1.0 / w_;
  }

  const Vec& klein() const { return klein_; }
  /// Unit timelike vector U of the viewpoint.
  const Vec& hyper() const { return hyper_; }
  Eigen::Index dim() const { return klein_.size(); }

  /// -<U, a>: the time coordinate of `a` after recentering at this viewpoint.
  double recentered_time(const Vec& a) const {
    const Eigen::Index n = klein_.size();
    return a[n] * hyper_[n] - a.head(n).dot(hyper_.head(n));
  }

  /// Klein-coordinate gradient of recentered_time(a); `c` is its value.
  Vec recentered_time_gradient(const Vec& a, double c) const {
    const Eigen::Index n = klein_.size();
    return (-a.head(n) + (c / w_) * klein_) / w_;
  }

 private:
  Vec klein_;
  Vec hyper_;
  double w_ = 1.0;
};

/// Terms the solver can minimize over. `cut` returns a normal of a halfspace
/// through the current point that contains the term's sublevel set at its
/// current value (the gradient for smooth terms); a zero vector signals the
/// point minimizes the term.
template <class T>
concept QuasiconvexTerm = requires(const T& t, const Viewframe& f) {
  { t.value(f) } -> std::convertible_to<double>;
  { t.cut(f) } -> std::convertible_to<Vec>;
};

/// Type-erased term for callers that only have an evaluator. Without an
/// explicit gradient the cut normal comes from central differences.
struct ObjectiveTerm {
  std::function<double(const Viewframe&)> evaluate;
  std::function<Vec(const Viewframe&)> gradient;
  std::string kind = "custom";
  long source = -1;

  double value(const Viewframe& f) const { return evaluate(f); }

  Vec cut(const Viewframe& f) const {
    if (gradient) return gradient(f);
    const Eigen::Index n = f.dim();
    Vec g(n);
    const double h = 1e-7;
    for (Eigen::Index j = 0; j < n; ++j) {
      Vec xp = f.klein(), xm = f.klein();
      xp[j] += h;
      xm[j] -= h;
      g[j] = (evaluate(Viewframe(xp)) - evaluate(Viewframe(xm))) / (2 * h);
    }
    return g;
  }
};

template <QuasiconvexTerm Term>
struct Instance {
  std::vector<Term> terms;
  Eigen::Index dimension = 2;
  double domain_shrink = 1e-7;
};

enum class Backend { Local, Glp };

struct SolverConfig {
  Backend backend = Backend::Local;
  double tol_x = 1e-10;
  double tol_f = 1e-9;
  long max_iters = 100000;
  std::uint64_t rng_seed = 0;
  /// Dimension bound used by the sampling stages; 0 means 2n+3.
  long base_case_size = 0;
};

struct Solution {
  double t_star = 0.0;
  KleinPoint x_star;
  long iterations = 0;
  std::vector<std::size_t> active;
  bool converged = true;
};

// ---------------------------------------------------------------------------

/// Pointwise maximum of the terms at x; also reports the maximizing index.
template <QuasiconvexTerm Term>
double evaluate_max(std::span<const Term> terms, const Viewframe& f, std::size_t* argmax = nullptr) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double v = terms[i].value(f);
    if (v > best || std::isnan(v)) {
      best = std::isnan(v) ? kBarrier : v;
      arg = i;
      if (std::isnan(v)) break;
    }
  }
  if (argmax) *argmax = arg;
  return best;
}

template <QuasiconvexTerm Term>
double evaluate_max(const Instance<Term>& instance, const KleinPoint& x) {
  return evaluate_max(std::span<const Term>(instance.terms), Viewframe(x.coords));
}

/// Indices i with f_i(x) >= max - tol.
template <QuasiconvexTerm Term>
std::vector<std::size_t> active_terms(std::span<const Term> terms, const KleinPoint& x, double tol) {
  const Viewframe f(x.coords);
  std::vector<double> values(terms.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    values[i] = terms[i].value(f);
    best = std::max(best, values[i]);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (values[i] >= best - tol) out.push_back(i);
  return out;
}

template <QuasiconvexTerm Term>
std::vector<std::size_t> active_terms(const Instance<Term>& instance, const KleinPoint& x, double tol) {
  return active_terms(std::span<const Term>(instance.terms), x, tol);
}

namespace detail {

/// View of a subset of terms by index, so the sampling stages never copy terms.
template <QuasiconvexTerm Term>
struct TermSubset {
  std::span<const Term> all;
  std::span<const std::size_t> idx;

  double max_at(const Viewframe& f, std::size_t* argmax) const {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = idx.empty() ? 0 : idx[0];
    for (std::size_t i : idx) {
      const double v = all[i].value(f);
      if (v > best || std::isnan(v)) {
        best = std::isnan(v) ? kBarrier : v;
        arg = i;
        if (std::isnan(v)) break;
      }
    }
    *argmax = arg;
    return best;
  }
};

struct LocalResult {
  Vec x;
  double t = 0.0;
  long iterations = 0;
  bool converged = true;
};

template <QuasiconvexTerm Term>
LocalResult ellipsoid_minimize(const TermSubset<Term>& terms, Eigen::Index n, double radius,
                               const SolverConfig& config, long iteration_budget) {
  LocalResult out;
  Vec c = Vec::Zero(n);
  Mat P = Mat::Identity(n, n);
  const double dn = static_cast<double>(n);
  const double expand = dn * dn / (dn * dn - 1.0);

  out.x = c;
  out.t = std::numeric_limits<double>::infinity();
  long it = 0;
  bool done = false;
  for (; it < iteration_budget && !done; ++it) {
    Vec g;
    if (c.norm() > radius) {
      g = c;
    } else {
      const Viewframe f(c);
      std::size_t arg = 0;
      const double value = terms.max_at(f, &arg);
      if (value < out.t) {
        out.t = value;
        out.x = c;
      }
      g = terms.all[arg].cut(f);
      if (!(g.squaredNorm() > 0.0) || !g.allFinite()) {
        // The active term is minimized here, so nothing can beat this point.
        if (g.allFinite() && value <= out.t) {
          out.t = value;
          out.x = c;
        }
        break;
      }
    }
    Vec Pg = P * g;
    double gPg = g.dot(Pg);
    if (!(gPg > 0.0) || !std::isfinite(gPg)) {
      // Lost positive definiteness: restart from an enclosing ball.
      P = Mat::Identity(n, n) * std::max(P.trace(), config.tol_x * config.tol_x);
      Pg = P * g;
      gPg = g.dot(Pg);
      if (!(gPg > 0.0)) break;
    }
    const Vec b = Pg / std::sqrt(gPg);
    c -= b / (dn + 1.0);
    P = expand * (P - (2.0 / (dn + 1.0)) * b * b.transpose());
    P = 0.5 * (P + P.transpose()).eval();
    if (std::sqrt(std::max(0.0, P.trace())) < config.tol_x) done = true;
  }
  out.iterations = it;
  out.converged = done || it < iteration_budget;

  // Final evaluation of the last center.
  if (c.norm() <= radius) {
    std::size_t arg = 0;
    const double value = terms.max_at(Viewframe(c), &arg);
    if (value < out.t) {
      out.t = value;
      out.x = c;
    }
  }

  // Compass polish around the best point.
  double h = std::max(64.0 * std::sqrt(std::max(0.0, P.trace())), config.tol_x);
  h = std::min(h, 1e-3);
  while (h >= config.tol_x) {
    bool improved = false;
    for (Eigen::Index j = 0; j < n && !improved; ++j) {
      for (double sgn : {1.0, -1.0}) {
        Vec y = out.x;
        y[j] += sgn * h;
        if (y.norm() > radius) continue;
        std::size_t arg = 0;
        const double value = terms.max_at(Viewframe(y), &arg);
        if (value < out.t) {
          out.t = value;
          out.x = y;
          improved = true;
          break;
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  if (!std::isfinite(out.t)) {
    std::size_t arg = 0;
    out.t = terms.max_at(Viewframe(out.x), &arg);
  }
  return out;
}

class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : gen_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

template <QuasiconvexTerm Term>
class ClarksonSolver {
 public:
  ClarksonSolver(std::span<const Term> terms, Eigen::Index n, double radius, const SolverConfig& config)
      : terms_(terms), n_(n), radius_(radius), config_(config), rng_(config.rng_seed) {
    delta_ = config.base_case_size > 0 ? config.base_case_size : 2 * static_cast<long>(n) + 3;
  }

  LocalResult solve() {
    std::vector<std::size_t> all(terms_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return recursive_stage(all);
  }

  long iterations() const { return iterations_; }
  bool converged() const { return converged_; }

 private:
  std::size_t small_size() const { return static_cast<std::size_t>(6 * delta_ * delta_); }

  LocalResult local(std::span<const std::size_t> idx) {
    const long budget = std::max<long>(1, config_.max_iters - iterations_);
    LocalResult r = ellipsoid_minimize(TermSubset<Term>{terms_, idx}, n_, radius_, config_, budget);
    iterations_ += r.iterations;
    if (!r.converged) converged_ = false;
    return r;
  }

  std::vector<std::size_t> violators(std::span<const std::size_t> idx, const LocalResult& r) const {
    const Viewframe f(r.x);
    std::vector<std::size_t> out;
    for (std::size_t i : idx)
      if (terms_[i].value(f) > r.t + config_.tol_f) out.push_back(i);
    return out;
  }

  bool out_of_budget() const { return iterations_ >= config_.max_iters; }

  // Clarkson's recursive stage: samples of size delta*sqrt(m), accumulating
  // small violator sets.
  LocalResult recursive_stage(std::span<const std::size_t> set) {
    const std::size_t m = set.size();
    if (m <= 9 * small_size()) return iterative_stage(set);
    const std::size_t r = std::min(m, static_cast<std::size_t>(delta_ * std::sqrt(static_cast<double>(m))));
    std::vector<std::size_t> kept;
    std::vector<std::size_t> pool(set.begin(), set.end());
    while (true) {
      // Partial Fisher-Yates: the first r entries of pool become the sample.
      for (std::size_t i = 0; i < r; ++i) std::swap(pool[i], pool[i + rng_.below(m - i)]);
      std::vector<std::size_t> trial(kept);
      trial.insert(trial.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(r));
      std::sort(trial.begin(), trial.end());
      trial.erase(std::unique(trial.begin(), trial.end()), trial.end());
      LocalResult sol = iterative_stage(trial);
      const std::vector<std::size_t> bad = violators(set, sol);
      if (bad.empty() || out_of_budget()) {
        if (!bad.empty()) converged_ = false;
        return sol;
      }
      if (bad.size() <= 2 * static_cast<std::size_t>(std::sqrt(static_cast<double>(m))) + 1) {
        kept.insert(kept.end(), bad.begin(), bad.end());
      }
    }
  }

  // Clarkson's iterative reweighting stage with constant-size samples.
  LocalResult iterative_stage(std::span<const std::size_t> set) {
    const std::size_t m = set.size();
    if (m <= small_size()) return local(set);
    std::vector<double> weight(m, 1.0);
    std::vector<double> cumulative(m);
    std::vector<char> violated(m);
    const double threshold = 2.0 / (9.0 * static_cast<double>(delta_) - 1.0);
    while (true) {
      double total = 0.0;
      for (std::size_t i = 0; i < m; ++i) cumulative[i] = (total += weight[i]);
      std::vector<std::size_t> sample;
      sample.reserve(small_size());
      for (std::size_t k = 0; k < small_size(); ++k) {
        const double u = rng_.unit() * total;
        const auto pos = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
        sample.push_back(set[std::min<std::size_t>(static_cast<std::size_t>(pos), m - 1)]);
      }
      std::sort(sample.begin(), sample.end());
      sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
      LocalResult sol = local(sample);

      const Viewframe f(sol.x);
      double bad_weight = 0.0;
      bool any = false;
      for (std::size_t i = 0; i < m; ++i) {
        violated[i] = terms_[set[i]].value(f) > sol.t + config_.tol_f;
        if (violated[i]) {
          bad_weight += weight[i];
          any = true;
        }
      }
      if (!any || out_of_budget()) {
        if (any) converged_ = false;
        return sol;
      }
      if (bad_weight <= threshold * total) {
        for (std::size_t i = 0; i < m; ++i)
          if (violated[i]) weight[i] *= 2.0;
      }
    }
  }

  std::span<const Term> terms_;
  Eigen::Index n_;
  double radius_;
  SolverConfig config_;
  SampleRng rng_;
  long delta_ = 7;
  long iterations_ = 0;
  bool converged_ = true;
};

}  // namespace detail

/// Global minimizer of max_i f_i over the Klein ball of radius 1 - shrink.
template <QuasiconvexTerm Term>
Solution minimize_max(std::span<const Term> terms, Eigen::Index dimension, const SolverConfig& config,
                      double domain_shrink = 1e-7) {
  if (terms.empty()) throw Error(ErrorKind::Validation, "instance needs at least one term");
  if (dimension < 2) throw Error(ErrorKind::UnsupportedDimension, "viewpoint dimension must be at least 2");
  if (!(config.tol_x > 0.0 && config.tol_f > 0.0)) throw Error(ErrorKind::Validation, "tolerances must be positive");
  const double radius = 1.0 - domain_shrink;

  detail::LocalResult r;
  long iterations = 0;
  bool converged = true;
  if (config.backend == Backend::Local) {
    std::vector<std::size_t> all(terms.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    r = detail::ellipsoid_minimize(detail::TermSubset<Term>{terms, all}, dimension, radius, config, config.max_iters);
    iterations = r.iterations;
    converged = r.converged;
  } else {
    detail::ClarksonSolver<Term> solver(terms, dimension, radius, config);
    r = solver.solve();
    iterations = solver.iterations();
    converged = solver.converged();
  }

  Solution out;
  out.x_star = KleinPoint(r.x);
  out.t_star = evaluate_max(terms, Viewframe(r.x));
  out.iterations = iterations;
  out.converged = converged;
  if (out.t_star >= kBarrier) {
    throw Error(ErrorKind::InfeasibleConstraint, "no sampled viewpoint satisfies every constraint term");
  }
  out.active = active_terms(terms, out.x_star, config.tol_f);
  return out;
}

template <QuasiconvexTerm Term>
Solution minimize_max(const Instance<Term>& instance, const SolverConfig& config) {
  return minimize_max(std::span<const Term>(instance.terms), instance.dimension, config, instance.domain_shrink);
}

}  // namespace mobius

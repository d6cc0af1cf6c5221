#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "replab/game.hpp"

namespace replab {

// Replicator vector field: each probability grows at its excess utility.
// Both blocks sum to zero, so the field is tangent to the simplex product.
template <typename Scalar>
void replicator_field_inplace(const MatrixX<Scalar>& a, const VectorX<Scalar>& x,
                              const VectorX<Scalar>& y, VectorX<Scalar>& dx,
                              VectorX<Scalar>& dy, VectorX<Scalar>& u,
                              VectorX<Scalar>& v) {
  u.noalias() = a * y;
  v.noalias() = -(a.transpose() * x);  // B x with B = -A^T
  const Scalar row_payoff = x.dot(u);
  const Scalar col_payoff = y.dot(v);
  dx = x.array() * (u.array() - row_payoff);
  dy = y.array() * (v.array() - col_payoff);
}

template <typename Scalar>
std::pair<VectorX<Scalar>, VectorX<Scalar>> replicator_field(
    const Game<Scalar>& g, const StrategyProfile<Scalar>& s) {
  require_dims(g, s, "replicator_field");
  VectorX<Scalar> dx, dy, u, v;
  replicator_field_inplace(g.payoff(), s.x.coeffs(), s.y.coeffs(), dx, dy, u, v);
  return {std::move(dx), std::move(dy)};
}

template <typename Scalar>
struct OdeConfig {
  Scalar dt = Scalar(1e-3);
  Scalar t_end = Scalar(1);
  StrategyProfile<Scalar> init;
  long thin = 10;        // record every thin-th step
  bool renorm = true;    // clamp negatives and renormalize after each step

  OdeConfig(Scalar dt_in, Scalar t_end_in, StrategyProfile<Scalar> init_in,
            long thin_in = 10, bool renorm_in = true)
      : dt(dt_in), t_end(t_end_in), init(std::move(init_in)), thin(thin_in),
        renorm(renorm_in) {
    if (!(dt > Scalar(0)) || !(t_end > Scalar(0)) || dt > t_end)
      throw PreconditionError("ode config requires 0 < dt <= t_end");
    if (thin < 1) throw PreconditionError("ode config requires thin >= 1");
  }
};

template <typename Scalar>
struct TrajectoryMeta {
  std::string game_name;
  std::string integrator;
  Scalar dt = Scalar(0);
  Scalar t_end = Scalar(0);
  Scalar burn_in = Scalar(0);
  long thin = 1;
  std::uint64_t seed = 0;
  long clamp_events = 0;
};

// Time-stamped, possibly thinned sequence of states.
template <typename Scalar>
struct Trajectory {
  std::vector<Scalar> times;
  std::vector<StrategyProfile<Scalar>> states;
  TrajectoryMeta<Scalar> meta;

  Scalar t_front() const { return times.front(); }
  Scalar t_back() const { return times.back(); }
  std::size_t size() const { return times.size(); }
};

using OdeConfigXd = OdeConfig<double>;
using TrajectoryXd = Trajectory<double>;

namespace detail {

// Clamps negative components (counting the events) and renormalizes.
template <typename Scalar>
void project_to_simplex(VectorX<Scalar>& w, long& clamp_events) {
  for (Index i = 0; i < w.size(); ++i) {
    if (w[i] < Scalar(0)) {
      w[i] = Scalar(0);
      ++clamp_events;
    }
  }
  w /= w.sum();
}

}  // namespace detail

// Classical fourth-order one-step integration of the replicator flow.
template <typename Scalar>
Trajectory<Scalar> integrate_ode(const Game<Scalar>& g,
                                 const OdeConfig<Scalar>& cfg) {
  require_dims(g, cfg.init, "integrate_ode");
  using Vec = VectorX<Scalar>;
  const auto& a = g.payoff();
  const long steps = static_cast<long>(std::llround(cfg.t_end / cfg.dt));
  const Scalar h = cfg.dt;

  Trajectory<Scalar> traj;
  traj.meta = {g.name(), "rk4", cfg.dt, cfg.t_end, Scalar(0), cfg.thin, 0, 0};
  traj.times.reserve(static_cast<std::size_t>(steps / cfg.thin) + 2);
  traj.states.reserve(static_cast<std::size_t>(steps / cfg.thin) + 2);

  Vec x = cfg.init.x.coeffs(), y = cfg.init.y.coeffs();
  Vec u(g.rows()), v(g.cols());
  Vec k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, tx, ty;

  auto record = [&](long k) {
    traj.times.push_back(Scalar(k) * h);
    traj.states.emplace_back(SimplexPoint<Scalar>(x), SimplexPoint<Scalar>(y));
  };
  record(0);

  for (long k = 1; k <= steps; ++k) {
    replicator_field_inplace(a, x, y, k1x, k1y, u, v);
    tx = x + (h / 2) * k1x;
    ty = y + (h / 2) * k1y;
    replicator_field_inplace(a, tx, ty, k2x, k2y, u, v);
    tx = x + (h / 2) * k2x;
    ty = y + (h / 2) * k2y;
    replicator_field_inplace(a, tx, ty, k3x, k3y, u, v);
    tx = x + h * k3x;
    ty = y + h * k3y;
    replicator_field_inplace(a, tx, ty, k4x, k4y, u, v);
    x += (h / 6) * (k1x + 2 * k2x + 2 * k3x + k4x);
    y += (h / 6) * (k1y + 2 * k2y + 2 * k3y + k4y);

    if (!x.allFinite() || !y.allFinite())
      throw NonFiniteState("integrate_ode: non-finite state at step " +
                           std::to_string(k));
    if (cfg.renorm) {
      detail::project_to_simplex(x, traj.meta.clamp_events);
      detail::project_to_simplex(y, traj.meta.clamp_events);
    }
    if (k % cfg.thin == 0 || k == steps) record(k);
  }
  return traj;
}

// Cross entropy V(ref; s) = -sum p_i ln x_i - sum q_j ln y_j. Finite only
// while s stays positive on the support of ref; V -> infinity at the
// boundary of that support.
template <typename Scalar>
Scalar cross_entropy(const StrategyProfile<Scalar>& ref,
                     const StrategyProfile<Scalar>& s) {
  if (ref.x.dim() != s.x.dim() || ref.y.dim() != s.y.dim())
    throw DimensionMismatch("cross_entropy: ref and state dims differ");
  auto block = [](const VectorX<Scalar>& w, const VectorX<Scalar>& z) {
    Scalar acc = Scalar(0);
    for (Index i = 0; i < w.size(); ++i) {
      if (w[i] <= Scalar(0)) continue;
      if (z[i] < Scalar(1e-300))
        throw DivergedToBoundary(
            "cross_entropy: state component " + std::to_string(i + 1) +
            " vanished on the reference support");
      acc -= w[i] * std::log(z[i]);
    }
    return acc;
  };
  return block(ref.x.coeffs(), s.x.coeffs()) + block(ref.y.coeffs(), s.y.coeffs());
}

template <typename Scalar>
Scalar shannon_entropy(const StrategyProfile<Scalar>& ref) {
  return cross_entropy(ref, ref);
}

// Sum of the two Kullback-Leibler divergences D(p||x) + D(q||y).
template <typename Scalar>
Scalar kl_sum(const StrategyProfile<Scalar>& ref, const StrategyProfile<Scalar>& s) {
  return cross_entropy(ref, s) - shannon_entropy(ref);
}

// Drift part of the generator applied to -sum a_i ln x_i - sum b_j ln y_j;
// weights need not be normalized.
template <typename Scalar>
Scalar weighted_log_drift(const Game<Scalar>& g, const VectorX<Scalar>& a,
                          const VectorX<Scalar>& b,
                          const StrategyProfile<Scalar>& s) {
  const auto util = utilities(g, s);
  return -(a.dot(util.u) + b.dot(util.v)) + a.sum() * util.row_payoff +
         b.sum() * util.col_payoff;
}

// Time derivative of the cross entropy along the replicator flow. Zero when
// ref is an interior equilibrium, negative for the maximal-support
// equilibrium of a game without interior equilibrium, positive for the
// corresponding anti-equilibrium.
template <typename Scalar>
Scalar lyapunov_time_derivative(const Game<Scalar>& g,
                                const StrategyProfile<Scalar>& ref,
                                const StrategyProfile<Scalar>& s) {
  require_dims(g, ref, "lyapunov_time_derivative");
  require_dims(g, s, "lyapunov_time_derivative");
  return weighted_log_drift(g, ref.x.coeffs(), ref.y.coeffs(), s);
}

}  // namespace replab

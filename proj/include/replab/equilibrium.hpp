#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "replab/game.hpp"

namespace replab {

inline constexpr int kEnumerationCap = 8;     // max rows/cols for enumeration
inline constexpr double kFeasTol = 1e-9;      // constraint slack accepted
inline constexpr double kVertexDedupTol = 1e-7;

namespace detail {

// Visits all k-subsets of {0,...,n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

template <typename Scalar>
bool contains_close(const std::vector<VectorX<Scalar>>& set,
                    const VectorX<Scalar>& v, double tol = kVertexDedupTol) {
  for (const auto& w : set)
    if ((w - v).template lpNorm<Eigen::Infinity>() <= tol) return true;
  return false;
}

template <typename Scalar>
VectorX<Scalar> barycenter(const std::vector<VectorX<Scalar>>& set) {
  VectorX<Scalar> out = VectorX<Scalar>::Zero(set.front().size());
  for (const auto& w : set) out += w;
  return out / Scalar(set.size());
}

}  // namespace detail

template <typename Scalar>
struct MaximinSolution {
  Scalar value;                             // max_p min_j (p^T M)_j
  std::vector<VectorX<Scalar>> vertices;    // optimal basic solutions, deduped
};

// Solves the maximin program max_p min_j (p^T M)_j over the simplex by
// exhaustive enumeration of basic solutions: the feasible set
// {(p, v) : p^T M >= v 1, sum p = 1, p >= 0} has its optimum at a vertex,
// and every vertex activates rows(M) constraints besides the sum.
template <typename Scalar>
MaximinSolution<Scalar> maximin_vertices(const MatrixX<Scalar>& m_payoff,
                                         int cap = kEnumerationCap) {
  const int n = static_cast<int>(m_payoff.rows());
  const int m = static_cast<int>(m_payoff.cols());
  if (n > cap || m > cap) {
    throw PreconditionError("maximin enumeration limited to " +
                            std::to_string(cap) + " strategies per side, got " +
                            Game<Scalar>::shape_string(n, m));
  }

  using Mat = MatrixX<Scalar>;
  using Vec = VectorX<Scalar>;

  struct Candidate {
    Vec p;
    Scalar v;
  };
  std::vector<Candidate> feasible;
  Scalar best = -std::numeric_limits<Scalar>::infinity();

  Mat sys(n + 1, n + 1);
  Vec rhs(n + 1);
  detail::for_each_subset(n + m, n, [&](const std::vector<int>& active) {
    sys.setZero();
    rhs.setZero();
    sys.row(0).head(n).setOnes();  // sum p = 1
    rhs[0] = Scalar(1);
    for (int r = 0; r < n; ++r) {
      const int c = active[r];
      if (c < n) {
        sys(r + 1, c) = Scalar(1);  // p_c = 0
      } else {
        const int j = c - n;  // column j tight: (p^T M)_j - v = 0
        sys.row(r + 1).head(n) = m_payoff.col(j).transpose();
        sys(r + 1, n) = Scalar(-1);
      }
    }
    Eigen::FullPivLU<Mat> lu(sys);
    if (!lu.isInvertible()) return;
    const Vec z = lu.solve(rhs);
    const Vec p = z.head(n);
    const Scalar v = z[n];
    if (!z.allFinite()) return;
    if ((p.array() < Scalar(-kFeasTol)).any()) return;
    const Vec col_vals = m_payoff.transpose() * p;
    if ((col_vals.array() < v - Scalar(kFeasTol)).any()) return;
    feasible.push_back({p, v});
    best = std::max(best, v);
  });

  if (feasible.empty()) {
    throw std::logic_error("maximin enumeration found no feasible vertex");
  }

  MaximinSolution<Scalar> out;
  out.value = best;
  for (auto& cand : feasible) {
    if (cand.v < best - Scalar(kFeasTol)) continue;
    Vec p = cand.p.cwiseMax(Scalar(0));
    p /= p.sum();
    if (!detail::contains_close(out.vertices, p)) out.vertices.push_back(p);
  }
  return out;
}

// Game value and one optimal pair (the barycenters of the optimal basic
// solutions, which always pass the Nash check in a zero-sum game).
template <typename Scalar>
struct ValueSolution {
  Scalar value;
  SimplexPoint<Scalar> p, q;
};

template <typename Scalar>
ValueSolution<Scalar> solve_value(const Game<Scalar>& g,
                                  int cap = kEnumerationCap) {
  const auto row = maximin_vertices<Scalar>(g.payoff(), cap);
  const auto col = maximin_vertices<Scalar>(g.opponent_payoff().eval(), cap);
  return ValueSolution<Scalar>{row.value,
                               SimplexPoint<Scalar>(detail::barycenter(row.vertices)),
                               SimplexPoint<Scalar>(detail::barycenter(col.vertices))};
}

template <typename Scalar>
struct NashVertexSet {
  std::vector<VectorX<Scalar>> p_vertices, q_vertices;
  bool ambiguous = false;  // a consistent singular indifference system occurred
};

// Enumerates equilibrium vertices over all equal-size support pairs (S, T):
// per pair, the square indifference system pins q on T (rows of S
// indifferent) and p on S (columns of T indifferent); feasible solutions
// passing the Nash check are kept.
template <typename Scalar>
NashVertexSet<Scalar> enumerate_nash_vertices(const Game<Scalar>& g,
                                              int cap = kEnumerationCap) {
  const int n = static_cast<int>(g.rows());
  const int m = static_cast<int>(g.cols());
  if (n > cap || m > cap) {
    throw PreconditionError("support enumeration limited to " +
                            std::to_string(cap) + " strategies per side, got " +
                            Game<Scalar>::shape_string(n, m));
  }

  using Mat = MatrixX<Scalar>;
  using Vec = VectorX<Scalar>;
  const Mat& a = g.payoff();

  NashVertexSet<Scalar> out;

  // Solves [indifference rows; probability sum] = (0,...,0,1); returns the
  // probability part, or nothing if the system is singular/infeasible.
  auto solve_square = [&](const Mat& sys) -> std::optional<Vec> {
    const int k = static_cast<int>(sys.rows());
    Vec rhs = Vec::Zero(k);
    rhs[k - 1] = Scalar(1);
    Eigen::FullPivLU<Mat> lu(sys);
    if (!lu.isInvertible()) {
      if ((sys * lu.solve(rhs) - rhs).norm() <= Scalar(1e-9)) out.ambiguous = true;
      return std::nullopt;
    }
    Vec z = lu.solve(rhs);
    if (!z.allFinite()) return std::nullopt;
    if ((z.head(k - 1).array() < Scalar(-kFeasTol)).any()) return std::nullopt;
    return z;
  };

  for (int k = 1; k <= std::min(n, m); ++k) {
    detail::for_each_subset(n, k, [&](const std::vector<int>& rows_s) {
      detail::for_each_subset(m, k, [&](const std::vector<int>& cols_t) {
        Mat qsys = Mat::Zero(k + 1, k + 1);
        Mat psys = Mat::Zero(k + 1, k + 1);
        for (int r = 0; r < k; ++r) {
          for (int c = 0; c < k; ++c) {
            qsys(r, c) = a(rows_s[r], cols_t[c]);
            psys(r, c) = -a(rows_s[c], cols_t[r]);  // B = -A^T
          }
          qsys(r, k) = Scalar(-1);
          psys(r, k) = Scalar(-1);
        }
        qsys.row(k).head(k).setOnes();
        psys.row(k).head(k).setOnes();

        const auto qz = solve_square(qsys);
        if (!qz) return;
        const auto pz = solve_square(psys);
        if (!pz) return;

        Vec p = Vec::Zero(n), q = Vec::Zero(m);
        for (int r = 0; r < k; ++r) p[rows_s[r]] = std::max((*pz)[r], Scalar(0));
        for (int c = 0; c < k; ++c) q[cols_t[c]] = std::max((*qz)[c], Scalar(0));
        p /= p.sum();
        q /= q.sum();
        const SimplexPoint<Scalar> sp(p), sq(q);
        if (!is_nash(g, sp, sq, Scalar(1e-8))) return;
        if (!detail::contains_close(out.p_vertices, p)) out.p_vertices.push_back(p);
        if (!detail::contains_close(out.q_vertices, q)) out.q_vertices.push_back(q);
      });
    });
  }
  return out;
}

// Full equilibrium/anti-equilibrium report for a zero-sum game.
template <typename Scalar>
struct EquilibriumReport {
  Scalar value;                              // p^T A q at the barycenters
  SimplexPoint<Scalar> p, q;                 // maximal-support equilibrium
  SimplexPoint<Scalar> p_star, q_star;       // maximal-support anti-equilibrium
  SupportSet I, J, I_star, J_star;
  bool interior = false;
  bool interior_anti = false;
  bool degenerate = false;
  std::vector<VectorX<Scalar>> p_vertices, q_vertices;
  std::vector<VectorX<Scalar>> p_star_vertices, q_star_vertices;
};

using EquilibriumReportXd = EquilibriumReport<double>;

namespace detail {

template <typename Scalar>
struct SideSolution {
  Scalar value;
  SimplexPoint<Scalar> p, q;
  std::vector<VectorX<Scalar>> p_vertices, q_vertices;
  bool ambiguous;
};

// Merges the support-enumeration vertex set with the basic solutions of the
// value program; the two routes must agree, but merging keeps the barycenter
// well defined even for degenerate games where one route misses a vertex.
template <typename Scalar>
SideSolution<Scalar> solve_side(const Game<Scalar>& g, int cap) {
  auto verts = enumerate_nash_vertices(g, cap);
  const auto row = maximin_vertices<Scalar>(g.payoff(), cap);
  const auto col = maximin_vertices<Scalar>(g.opponent_payoff().eval(), cap);
  for (const auto& v : row.vertices)
    if (!contains_close(verts.p_vertices, v)) verts.p_vertices.push_back(v);
  for (const auto& v : col.vertices)
    if (!contains_close(verts.q_vertices, v)) verts.q_vertices.push_back(v);

  SideSolution<Scalar> out{row.value,
                           SimplexPoint<Scalar>(barycenter(verts.p_vertices)),
                           SimplexPoint<Scalar>(barycenter(verts.q_vertices)),
                           std::move(verts.p_vertices),
                           std::move(verts.q_vertices),
                           verts.ambiguous};
  return out;
}

}  // namespace detail

template <typename Scalar>
EquilibriumReport<Scalar> maximal_support_equilibrium(const Game<Scalar>& g,
                                                      int cap = kEnumerationCap) {
  const auto eq = detail::solve_side(g, cap);
  const auto anti = detail::solve_side(g.negated(), cap);

  EquilibriumReport<Scalar> report{
      eq.p.coeffs().dot(g.payoff() * eq.q.coeffs()),
      eq.p,
      eq.q,
      anti.p,
      anti.q,
      support(eq.p),
      support(eq.q),
      support(anti.p),
      support(anti.q),
      /*interior=*/false,
      /*interior_anti=*/false,
      /*degenerate=*/eq.ambiguous || anti.ambiguous,
      eq.p_vertices,
      eq.q_vertices,
      anti.p_vertices,
      anti.q_vertices};
  report.interior = report.I.full(g.rows()) && report.J.full(g.cols());
  report.interior_anti =
      report.I_star.full(g.rows()) && report.J_star.full(g.cols());

  if (!is_nash(g, report.p, report.q, Scalar(1e-8)) ||
      !is_anti_equilibrium(g, report.p_star, report.q_star, Scalar(1e-8))) {
    throw std::logic_error("equilibrium solver produced an invalid report");
  }
  return report;
}

}  // namespace replab

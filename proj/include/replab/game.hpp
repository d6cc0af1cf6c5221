#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "replab/errors.hpp"

namespace replab {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

// Default cutoff below which a probability counts as zero.
inline constexpr double kSupportTol = 1e-9;

// Two-player zero-sum game. Only the row player's payoff matrix is stored;
// the column player's matrix is always -A^T, so the zero-sum identity
// x^T A y + y^T B x = 0 holds by construction.
template <typename Scalar = double>
class Game {
 public:
  using Matrix = MatrixX<Scalar>;

  Game(std::string name, Matrix payoff, std::vector<std::string> row_labels = {},
       std::vector<std::string> col_labels = {})
      : name_(std::move(name)),
        payoff_(std::move(payoff)),
        row_labels_(std::move(row_labels)),
        col_labels_(std::move(col_labels)) {
    if (payoff_.rows() < 2 || payoff_.cols() < 2) {
      throw PreconditionError("game payoff matrix must be at least 2x2, got " +
                              shape_string(payoff_.rows(), payoff_.cols()));
    }
    if (!payoff_.allFinite()) {
      throw PreconditionError("game payoff matrix has non-finite entries");
    }
    if (row_labels_.empty()) {
      for (Index i = 0; i < payoff_.rows(); ++i)
        row_labels_.push_back("r" + std::to_string(i + 1));
    }
    if (col_labels_.empty()) {
      for (Index j = 0; j < payoff_.cols(); ++j)
        col_labels_.push_back("c" + std::to_string(j + 1));
    }
    if (static_cast<Index>(row_labels_.size()) != payoff_.rows() ||
        static_cast<Index>(col_labels_.size()) != payoff_.cols()) {
      throw PreconditionError("label count does not match payoff shape");
    }
  }

  const std::string& name() const { return name_; }
  const Matrix& payoff() const { return payoff_; }
  // Column player's payoff matrix, derived on the fly.
  auto opponent_payoff() const { return -payoff_.transpose(); }
  Index rows() const { return payoff_.rows(); }
  Index cols() const { return payoff_.cols(); }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  // Same roles, negated payoffs; equilibria of this game are the
  // anti-equilibria of the original.
  Game negated() const {
    return Game("neg(" + name_ + ")", (-payoff_).eval(), row_labels_, col_labels_);
  }

  // Role-swapped game (row matrix -A^T); used for minimax duality checks.
  Game swapped() const {
    return Game("swap(" + name_ + ")", (-payoff_.transpose()).eval(), col_labels_,
                row_labels_);
  }

  static std::string shape_string(Index r, Index c) {
    return std::to_string(r) + "x" + std::to_string(c);
  }

 private:
  std::string name_;
  Matrix payoff_;
  std::vector<std::string> row_labels_, col_labels_;
};

// Point in the closed probability simplex. Construction rejects negative
// components, renormalizes sums within [1 - 1e-9, 1 + 1e-9], rejects worse.
template <typename Scalar = double>
class SimplexPoint {
 public:
  using Vector = VectorX<Scalar>;

  explicit SimplexPoint(Vector w) : w_(std::move(w)) {
    if (w_.size() < 1) throw PreconditionError("simplex point must have dim >= 1");
    if (!w_.allFinite())
      throw PreconditionError("simplex point has non-finite components");
    if ((w_.array() < Scalar(0)).any())
      throw PreconditionError("simplex point has negative components");
    const Scalar sum = w_.sum();
    if (std::abs(sum - Scalar(1)) > Scalar(1e-9)) {
      std::ostringstream os;
      os << "simplex point components sum to " << sum << ", outside [1-1e-9, 1+1e-9]";
      throw PreconditionError(os.str());
    }
    w_ /= sum;
  }

  const Vector& coeffs() const { return w_; }
  Index dim() const { return w_.size(); }
  Scalar operator[](Index i) const { return w_[i]; }

  bool interior(Scalar tol = Scalar(kSupportTol)) const {
    return (w_.array() > tol).all();
  }

  static SimplexPoint uniform(Index n) {
    return SimplexPoint(Vector::Constant(n, Scalar(1) / Scalar(n)));
  }
  static SimplexPoint vertex(Index n, Index i) {
    Vector w = Vector::Zero(n);
    w[i] = Scalar(1);
    return SimplexPoint(std::move(w));
  }

 private:
  Vector w_;
};

// Joint mixed-strategy state (x, y) of the two players.
template <typename Scalar = double>
struct StrategyProfile {
  SimplexPoint<Scalar> x;
  SimplexPoint<Scalar> y;

  StrategyProfile(SimplexPoint<Scalar> x_in, SimplexPoint<Scalar> y_in)
      : x(std::move(x_in)), y(std::move(y_in)) {}
  StrategyProfile(VectorX<Scalar> x_in, VectorX<Scalar> y_in)
      : x(std::move(x_in)), y(std::move(y_in)) {}

  bool interior(Scalar tol = Scalar(kSupportTol)) const {
    return x.interior(tol) && y.interior(tol);
  }

  static StrategyProfile uniform(Index n, Index m) {
    return StrategyProfile(SimplexPoint<Scalar>::uniform(n),
                           SimplexPoint<Scalar>::uniform(m));
  }
  static StrategyProfile vertex(Index n, Index m, Index i, Index j) {
    return StrategyProfile(SimplexPoint<Scalar>::vertex(n, i),
                           SimplexPoint<Scalar>::vertex(m, j));
  }
};

using GameXd = Game<double>;
using SimplexPointXd = SimplexPoint<double>;
using StrategyProfileXd = StrategyProfile<double>;

template <typename Scalar>
void require_dims(const Game<Scalar>& g, const StrategyProfile<Scalar>& s,
                  const char* where) {
  if (s.x.dim() != g.rows() || s.y.dim() != g.cols()) {
    throw DimensionMismatch(std::string(where) + ": game is " +
                            Game<Scalar>::shape_string(g.rows(), g.cols()) +
                            " but profile is " +
                            Game<Scalar>::shape_string(s.x.dim(), s.y.dim()));
  }
}

// Set of strategies played with positive probability. Indices are 1-based
// and sorted, matching the reporting convention of the file formats.
struct SupportSet {
  std::vector<int> indices;
  double tol = kSupportTol;

  bool contains(int one_based) const {
    return std::binary_search(indices.begin(), indices.end(), one_based);
  }
  int size() const { return static_cast<int>(indices.size()); }
  bool full(Index dim) const { return size() == static_cast<int>(dim); }

  std::vector<int> complement(Index dim) const {
    std::vector<int> out;
    for (int i = 1; i <= static_cast<int>(dim); ++i)
      if (!contains(i)) out.push_back(i);
    return out;
  }
};

// Per-strategy utility vectors u = A y, v = B x and the scalar payoffs.
template <typename Scalar>
struct Utilities {
  VectorX<Scalar> u;   // row player's utility per pure strategy
  VectorX<Scalar> v;   // column player's utility per pure strategy
  Scalar row_payoff;   // x^T A y
  Scalar col_payoff;   // y^T B x = -row_payoff
};

template <typename Scalar>
Utilities<Scalar> utilities(const Game<Scalar>& g, const StrategyProfile<Scalar>& s) {
  require_dims(g, s, "utilities");
  Utilities<Scalar> out;
  out.u = g.payoff() * s.y.coeffs();
  out.v = g.opponent_payoff() * s.x.coeffs();
  out.row_payoff = s.x.coeffs().dot(out.u);
  out.col_payoff = s.y.coeffs().dot(out.v);
  return out;
}

// Nash equilibrium test: no pure deviation improves either player's payoff
// by more than tol.
template <typename Scalar>
bool is_nash(const Game<Scalar>& g, const SimplexPoint<Scalar>& p,
             const SimplexPoint<Scalar>& q, Scalar tol) {
  if (tol < Scalar(0)) throw PreconditionError("is_nash: tol must be >= 0");
  const StrategyProfile<Scalar> s(p, q);
  const auto util = utilities(g, s);
  return (util.u.array() <= util.row_payoff + tol).all() &&
         (util.v.array() <= util.col_payoff + tol).all();
}

// Anti-equilibrium test: every pure deviation is at least as good, i.e. the
// profile is a Nash equilibrium of the negated game.
template <typename Scalar>
bool is_anti_equilibrium(const Game<Scalar>& g, const SimplexPoint<Scalar>& p,
                         const SimplexPoint<Scalar>& q, Scalar tol) {
  if (tol < Scalar(0))
    throw PreconditionError("is_anti_equilibrium: tol must be >= 0");
  const StrategyProfile<Scalar> s(p, q);
  const auto util = utilities(g, s);
  return (util.u.array() >= util.row_payoff - tol).all() &&
         (util.v.array() >= util.col_payoff - tol).all();
}

template <typename Scalar>
SupportSet support(const SimplexPoint<Scalar>& w, Scalar tol = Scalar(kSupportTol)) {
  if (tol < Scalar(0) || tol >= Scalar(1) / Scalar(w.dim())) {
    throw PreconditionError("support: tol must lie in [0, 1/dim)");
  }
  SupportSet out;
  out.tol = static_cast<double>(tol);
  for (Index i = 0; i < w.dim(); ++i)
    if (w[i] > tol) out.indices.push_back(static_cast<int>(i) + 1);
  return out;
}

enum class SupportRelation { BothInterior, MutuallyNonNested, Violation };

inline const char* to_string(SupportRelation r) {
  switch (r) {
    case SupportRelation::BothInterior: return "BothInterior";
    case SupportRelation::MutuallyNonNested: return "MutuallyNonNested";
    case SupportRelation::Violation: return "Violation";
  }
  return "?";
}

// Relation between the supports of a maximal Nash equilibrium and a maximal
// anti-equilibrium. Generic games give BothInterior or MutuallyNonNested;
// Violation flags a non-generic game rather than failing.
template <typename Scalar>
SupportRelation check_support_lemma(const Game<Scalar>& g,
                                    const StrategyProfile<Scalar>& eq,
                                    const StrategyProfile<Scalar>& anti,
                                    Scalar tol = Scalar(kSupportTol)) {
  if (!is_nash(g, eq.x, eq.y, tol))
    throw PreconditionError("check_support_lemma: eq fails the Nash check");
  if (!is_anti_equilibrium(g, anti.x, anti.y, tol))
    throw PreconditionError(
        "check_support_lemma: anti fails the anti-equilibrium check");

  const SupportSet sp = support(eq.x, tol), sq = support(eq.y, tol);
  const SupportSet sps = support(anti.x, tol), sqs = support(anti.y, tol);
  if (sp.full(g.rows()) && sq.full(g.cols()) && sps.full(g.rows()) &&
      sqs.full(g.cols())) {
    return SupportRelation::BothInterior;
  }

  // Union over both sides, row indices tagged apart from column indices.
  auto tagged_union = [&](const SupportSet& a, const SupportSet& b) {
    std::vector<int> out;
    for (int i : a.indices) out.push_back(i);
    for (int j : b.indices) out.push_back(-j);
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto eq_union = tagged_union(sp, sq);
  const auto anti_union = tagged_union(sps, sqs);
  auto has_exclusive = [](const std::vector<int>& a, const std::vector<int>& b) {
    return !std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  if (has_exclusive(eq_union, anti_union) && has_exclusive(anti_union, eq_union))
    return SupportRelation::MutuallyNonNested;
  return SupportRelation::Violation;
}

}  // namespace replab

#include "treelearn/metrics.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace treelearn {

namespace {

/// Reachable part of the product automaton, with per-state agreement flags.
struct Product {
  std::size_t num_states = 0;
  std::size_t num_symbols = 0;
  std::vector<std::size_t> delta;  // q * num_symbols + a
  std::vector<bool> agree;
};

Product build_product(const Dfa& t, const Dfa& h) {
  if (t.alphabet != h.alphabet)
    throw std::invalid_argument("progress: automata have different alphabets");
  const std::size_t k = t.alphabet.size();
  const std::size_t nh = h.num_states();

  std::vector<std::size_t> id(t.num_states() * nh, std::size_t(-1));
  std::vector<std::pair<StateId, StateId>> states;
  std::deque<std::size_t> queue;

  auto intern = [&](StateId q1, StateId q2) {
    std::size_t key = std::size_t(q1) * nh + q2;
    if (id[key] == std::size_t(-1)) {
      id[key] = states.size();
      states.emplace_back(q1, q2);
      queue.push_back(id[key]);
    }
    return id[key];
  };

  Product p;
  p.num_symbols = k;
  intern(t.initial, h.initial);
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    auto [q1, q2] = states[s];
    p.delta.resize(std::max(p.delta.size(), (s + 1) * k));
    for (Symbol a = 0; a < k; ++a)
      p.delta[s * k + a] = intern(t.next(q1, a), h.next(q2, a));
  }
  p.num_states = states.size();
  p.delta.resize(p.num_states * k);
  p.agree.resize(p.num_states);
  for (std::size_t s = 0; s < p.num_states; ++s)
    p.agree[s] = t.is_accepting(states[s].first) ==
                 h.is_accepting(states[s].second);
  return p;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie strictly inside (0, 1)");
}

}  // namespace

double progress(const Dfa& target, const Dfa& hypothesis, double alpha) {
  check_alpha(alpha);
  Product p = build_product(target, hypothesis);
  const double base = 1.0 - alpha;
  const double step = alpha / double(p.num_symbols);

  std::vector<double> f(p.num_states, 0.0), g(p.num_states, 0.0);
  constexpr double kTol = 1e-14;
  for (;;) {
    double diff = 0.0;
    for (std::size_t s = 0; s < p.num_states; ++s) {
      double sum = 0.0;
      for (std::size_t a = 0; a < p.num_symbols; ++a)
        sum += f[p.delta[s * p.num_symbols + a]];
      g[s] = (p.agree[s] ? base : 0.0) + step * sum;
      diff = std::max(diff, std::abs(g[s] - f[s]));
    }
    f.swap(g);
    if (diff <= kTol) break;
  }
  return f[0];
}

double progress_solved(const Dfa& target, const Dfa& hypothesis,
                       double alpha) {
  check_alpha(alpha);
  Product p = build_product(target, hypothesis);
  const double step = alpha / double(p.num_symbols);
  const auto n = Eigen::Index(p.num_states);

  // (I - step * P) f = (1 - alpha) * agree, P summing over symbols.
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(p.num_states * (p.num_symbols + 1));
  for (std::size_t s = 0; s < p.num_states; ++s) {
    triplets.emplace_back(Eigen::Index(s), Eigen::Index(s), 1.0);
    for (std::size_t a = 0; a < p.num_symbols; ++a)
      triplets.emplace_back(Eigen::Index(s),
                            Eigen::Index(p.delta[s * p.num_symbols + a]),
                            -step);
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::VectorXd rhs(n);
  for (std::size_t s = 0; s < p.num_states; ++s)
    rhs[Eigen::Index(s)] = p.agree[s] ? 1.0 - alpha : 0.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("progress_solved: factorization failed");
  Eigen::VectorXd f = solver.solve(rhs);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("progress_solved: solve failed");
  return f[0];
}

double progress_truncated(const Dfa& target, const Dfa& hypothesis,
                          double alpha, double tol) {
  check_alpha(alpha);
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  Product p = build_product(target, hypothesis);

  // Smallest L with alpha^(L+1) <= tol.
  std::size_t max_len =
      std::size_t(std::max(0.0, std::ceil(std::log(tol) / std::log(alpha)))) ;
  // u[q]: probability a uniformly random word of the current length lands
  // in q; per-length agreement mass is then alpha^len * (1-alpha) * sum.
  std::vector<double> u(p.num_states, 0.0), v(p.num_states, 0.0);
  u[0] = 1.0;
  double total = 0.0;
  double length_weight = 1.0 - alpha;
  for (std::size_t len = 0;; ++len) {
    double agreeing = 0.0;
    for (std::size_t s = 0; s < p.num_states; ++s)
      if (p.agree[s]) agreeing += u[s];
    total += length_weight * agreeing;
    if (len + 1 > max_len) break;
    std::fill(v.begin(), v.end(), 0.0);
    const double share = 1.0 / double(p.num_symbols);
    for (std::size_t s = 0; s < p.num_states; ++s) {
      if (u[s] == 0.0) continue;
      for (std::size_t a = 0; a < p.num_symbols; ++a)
        v[p.delta[s * p.num_symbols + a]] += u[s] * share;
    }
    u.swap(v);
    length_weight *= alpha;
  }
  return total;
}

}  // namespace treelearn

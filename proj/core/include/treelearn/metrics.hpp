#pragma once

#include "treelearn/automata.hpp"

namespace treelearn {

/// Discounted agreement between two languages: each word u carries weight
/// (1-alpha)·(alpha/|A|)^|u| and contributes when target and hypothesis
/// agree on it. Computed exactly on the reachable product automaton by
/// fixed-point iteration (reference implementation, sup-norm tolerance
/// 1e-14). alpha must lie strictly inside (0, 1).
double progress(const Dfa& target, const Dfa& hypothesis, double alpha);

/// Same value via a sparse direct solve of the underlying linear system;
/// orders of magnitude faster for alpha close to 1. Used on the benchmark
/// hot path.
double progress_solved(const Dfa& target, const Dfa& hypothesis, double alpha);

/// Independent oracle: direct summation over all word lengths up to the
/// smallest L with alpha^(L+1) <= tol (the tail beyond L weighs at most
/// alpha^(L+1)).
double progress_truncated(const Dfa& target, const Dfa& hypothesis,
                          double alpha, double tol);

}  // namespace treelearn

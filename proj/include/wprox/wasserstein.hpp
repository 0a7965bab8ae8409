#pragma once

#include "wprox/sample_set.hpp"

namespace wprox {

// Exact W1 between 1-D empirical measures: the integral of |F_a - F_b|
// computed from the merged sorted supports and weight prefix sums.
double w1_1d(const SampleSet& a, const SampleSet& b);

// Exact optimal transport cost under the Euclidean ground metric.
// Equal counts with uniform weights solve a min-cost assignment (shortest
// augmenting paths); anything else becomes a min-cost flow after the weights
// are rationalized to a common denominator (capped; refuses rather than
// approximates beyond the cap).
double w1_exact(const SampleSet& a, const SampleSet& b,
                long long denominator_cap = 1000000);

// L * W1(p_m, q_n): the computable dominating term of the a-posteriori
// chain. The optional `eta_to_target` term composes the sampled bound with
// D(Q_n || Q) when the caller can evaluate it.
double posteriori_bound(const SampleSet& p_m, const SampleSet& q_n, double L,
                        double eta_to_target = 0.0);

namespace detail {
// Min-cost assignment on a dense square cost matrix; returns the optimal
// column for each row. Exposed for tests.
double solve_assignment(const std::vector<double>& cost, int n,
                        std::vector<int>& row_to_col);
}  // namespace detail

}  // namespace wprox

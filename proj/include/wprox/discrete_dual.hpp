#pragma once

#include <cstddef>
#include <vector>

#include "wprox/conjugate.hpp"
#include "wprox/sample_set.hpp"

namespace wprox {

// Maximizing potential for the Lipschitz dual between two discrete measures:
// values gamma on the joint support plus the optimal shift nu. The objective
// sum_i p_i gamma_i - (nu + sum_j q_j f*(gamma_j - nu)) of any feasible
// iterate is a valid lower bound on the optimum.
struct DualPotential {
    std::vector<double> gamma;         // per joint support point
    std::vector<double> joint_points;  // row-major N x d
    std::vector<double> p_weights;
    std::vector<double> q_weights;
    int dim = 0;
    double nu = 0.0;
    double objective = 0.0;
    double feasibility_violation = 0.0;  // max Lipschitz slack at return
    double corollary3_cap = 0.0;         // L * W1(P, Q)
    int iterations = 0;
    bool converged = false;
};

struct DiscreteDualOptions {
    double tol = 1e-7;            // projected-step norm stopping threshold
    int max_iter = 50000;
    double projection_tol = 1e-10;
    int max_sweeps = 2000;        // per projection call
    double armijo = 1e-4;
    int max_halvings = 40;
    int stall_iters = 25;         // consecutive non-improving iterations = done
    bool check_cap = true;        // assert objective <= L * W1 + slack
};

// Cyclic pairwise Dykstra projection onto {|g_i - g_j| <= L * d_ij}.
// `distances` is a dense symmetric N x N matrix (row-major).
std::vector<double> project_lipschitz(std::vector<double> gamma,
                                      const std::vector<double>& distances,
                                      std::size_t n, double L,
                                      double tol = 1e-10);

// Exact D^L_{alpha,1}(P_m || Q_n) between discrete measures: projected
// gradient ascent over potential values on the joint support, with the shift
// subproblem re-solved by bisection each step. alpha >= 1 (power or KL).
DualPotential solve_discrete_dual(const SampleSet& p, const SampleSet& q,
                                  const AlphaValue& a, double L,
                                  const DiscreteDualOptions& opt = {});

}  // namespace wprox

#include "wprox/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

namespace wprox {

double w1_1d(const SampleSet& a, const SampleSet& b) {
    if (a.dim() != 1 || b.dim() != 1)
        throw std::invalid_argument("w1_1d: both sample sets must be 1-D");
    if (a.size() == 0 || b.size() == 0)
        throw std::invalid_argument("w1_1d: empty sample set");

    struct Atom {
        double x;
        double wa;
        double wb;
    };
    std::vector<Atom> atoms;
    atoms.reserve(a.size() + b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        atoms.push_back({a.point(i)[0], a.weight(i), 0.0});
    for (std::size_t j = 0; j < b.size(); ++j)
        atoms.push_back({b.point(j)[0], 0.0, b.weight(j)});
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& u, const Atom& v) { return u.x < v.x; });

    double total = 0.0;
    double fa = 0.0, fb = 0.0;
    for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
        fa += atoms[k].wa;
        fb += atoms[k].wb;
        total += std::abs(fa - fb) * (atoms[k + 1].x - atoms[k].x);
    }
    return total;
}

namespace detail {

// Shortest augmenting path assignment (Jonker-Volgenant style) on a dense
// n x n matrix, O(n^3).
double solve_assignment(const std::vector<double>& cost, int n,
                        std::vector<int>& row_to_col) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, n), way(n + 1, n);  // p[j]: row matched to column j
    for (int i = 0; i < n; ++i) {
        p[n] = i;
        int j0 = n;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = inf;
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                double cur = cost[static_cast<std::size_t>(i0) * n + j] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != n);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != n);
    }
    row_to_col.assign(n, -1);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        if (p[j] < n) {
            row_to_col[p[j]] = j;
            total += cost[static_cast<std::size_t>(p[j]) * n + j];
        }
    }
    return total;
}

}  // namespace detail

namespace {

// Best rational approximation of w with denominator <= cap (continued
// fractions). Returns false when no denominator within the cap matches w
// to 1e-12.
bool rationalize(double w, long long cap, long long& num, long long& den) {
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = w;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(x);
        long long ai = static_cast<long long>(fl);
        long long p2 = ai * p1 + p0;
        long long q2 = ai * q1 + q0;
        if (q2 > cap || q2 <= 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = x - fl;
        if (std::abs(w - static_cast<double>(p1) / static_cast<double>(q1)) < 1e-13)
            break;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    num = p1;
    den = q1;
    return q1 >= 1 && std::abs(w - static_cast<double>(p1) / static_cast<double>(q1)) < 1e-12;
}

long long lcm_capped(long long a, long long b, long long cap) {
    long long g = std::gcd(a, b);
    long long l = a / g;
    if (l > cap / b) return -1;
    return l * b;
}

// Integer supplies on a common denominator; throws when the weights cannot
// be represented within the cap.
std::vector<long long> integer_supplies(const SampleSet& s, long long D) {
    std::vector<long long> u(s.size());
    long long total = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        u[i] = std::llround(s.weight(i) * static_cast<double>(D));
        total += u[i];
    }
    // Rounding drift (at most a few units) lands on the heaviest atom.
    long long drift = D - total;
    if (drift != 0) {
        std::size_t heavy = 0;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (s.weight(i) > s.weight(heavy)) heavy = i;
        u[heavy] += drift;
        if (u[heavy] < 0) throw std::runtime_error("w1_exact: weight rationalization drift");
    }
    return u;
}

// Successive shortest augmenting paths with potentials on the dense
// bipartite transport graph.
double min_cost_transport(const SampleSet& a, const SampleSet& b,
                          std::vector<long long> supply,
                          std::vector<long long> demand, long long D) {
    const std::size_t m = a.size(), n = b.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cost[i * n + j] = euclidean_distance(a.point(i), b.point(j), a.dim());

    std::vector<double> pot_a(m, 0.0), pot_b(n, 0.0);
    double total_cost = 0.0;
    long long remaining = D;
    std::vector<std::vector<long long>> flow(m, std::vector<long long>(n, 0));

    while (remaining > 0) {
        // Dijkstra from all sources with remaining supply over the residual
        // graph (forward arcs i->j always, backward j->i when flow > 0).
        std::vector<double> dist_a(m, inf), dist_b(n, inf);
        std::vector<int> parent_b(n, -1);   // source row used to reach column j
        std::vector<int> parent_a(m, -1);   // column used to reach row i (backward)
        std::vector<char> done_a(m, 0), done_b(n, 0);
        for (std::size_t i = 0; i < m; ++i)
            if (supply[i] > 0) dist_a[i] = 0.0;

        while (true) {
            // Pick the unsettled node with the smallest distance.
            double best = inf;
            int bi = -1;
            bool is_row = true;
            for (std::size_t i = 0; i < m; ++i)
                if (!done_a[i] && dist_a[i] < best) {
                    best = dist_a[i];
                    bi = static_cast<int>(i);
                    is_row = true;
                }
            for (std::size_t j = 0; j < n; ++j)
                if (!done_b[j] && dist_b[j] < best) {
                    best = dist_b[j];
                    bi = static_cast<int>(j);
                    is_row = false;
                }
            if (bi < 0) break;
            if (is_row) {
                std::size_t i = static_cast<std::size_t>(bi);
                done_a[i] = 1;
                for (std::size_t j = 0; j < n; ++j) {
                    if (done_b[j]) continue;
                    double red = cost[i * n + j] - pot_a[i] - pot_b[j];
                    double nd = dist_a[i] + red;
                    if (nd < dist_b[j] - 1e-18) {
                        dist_b[j] = nd;
                        parent_b[j] = static_cast<int>(i);
                    }
                }
            } else {
                std::size_t j = static_cast<std::size_t>(bi);
                done_b[j] = 1;
                for (std::size_t i = 0; i < m; ++i) {
                    if (done_a[i] || flow[i][j] == 0) continue;
                    double red = -(cost[i * n + j] - pot_a[i] - pot_b[j]);
                    double nd = dist_b[j] + red;
                    if (nd < dist_a[i] - 1e-18) {
                        dist_a[i] = nd;
                        parent_a[i] = static_cast<int>(j);
                    }
                }
            }
        }

        // Cheapest reachable column with unmet demand.
        int target = -1;
        for (std::size_t j = 0; j < n; ++j)
            if (demand[j] > 0 && dist_b[j] < inf &&
                (target < 0 || dist_b[j] < dist_b[static_cast<std::size_t>(target)]))
                target = static_cast<int>(j);
        if (target < 0) throw std::runtime_error("w1_exact: transport network disconnected");

        // Trace the augmenting path and find its bottleneck.
        long long push = demand[static_cast<std::size_t>(target)];
        {
            int j = target;
            while (true) {
                int i = parent_b[static_cast<std::size_t>(j)];
                if (parent_a[static_cast<std::size_t>(i)] < 0) {
                    push = std::min(push, supply[static_cast<std::size_t>(i)]);
                    break;
                }
                int jprev = parent_a[static_cast<std::size_t>(i)];
                push = std::min(push, flow[static_cast<std::size_t>(i)]
                                          [static_cast<std::size_t>(jprev)]);
                j = jprev;
            }
        }
        // Apply the push.
        {
            int j = target;
            while (true) {
                int i = parent_b[static_cast<std::size_t>(j)];
                flow[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += push;
                if (parent_a[static_cast<std::size_t>(i)] < 0) {
                    supply[static_cast<std::size_t>(i)] -= push;
                    break;
                }
                int jprev = parent_a[static_cast<std::size_t>(i)];
                flow[static_cast<std::size_t>(i)][static_cast<std::size_t>(jprev)] -= push;
                j = jprev;
            }
            demand[static_cast<std::size_t>(target)] -= push;
        }
        remaining -= push;

        // Johnson potential update, capped at the target distance so reduced
        // costs stay nonnegative (forward reduced cost is
        // c - pot_a[i] - pot_b[j]).
        double dt = dist_b[static_cast<std::size_t>(target)];
        for (std::size_t i = 0; i < m; ++i)
            pot_a[i] -= std::min(dist_a[i], dt);
        for (std::size_t j = 0; j < n; ++j)
            pot_b[j] += std::min(dist_b[j], dt);
    }

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (flow[i][j] > 0)
                total_cost += static_cast<double>(flow[i][j]) * cost[i * n + j];
    return total_cost / static_cast<double>(D);
}

}  // namespace

double w1_exact(const SampleSet& a, const SampleSet& b, long long denominator_cap) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("w1_exact: dimension mismatch");
    if (a.size() == 0 || b.size() == 0)
        throw std::invalid_argument("w1_exact: empty sample set");

    if (a.uniform_weights() && b.uniform_weights() && a.size() == b.size()) {
        int n = static_cast<int>(a.size());
        std::vector<double> cost(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                cost[static_cast<std::size_t>(i) * n + j] =
                    euclidean_distance(a.point(i), b.point(j), a.dim());
        std::vector<int> assign;
        return detail::solve_assignment(cost, n, assign) / static_cast<double>(n);
    }

    // Rationalize every weight, then place both measures on a common
    // integer grid of D units.
    long long D = 1;
    auto fold = [&](const SampleSet& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            long long num, den;
            if (!rationalize(s.weight(i), denominator_cap, num, den))
                throw std::runtime_error(
                    "w1_exact: weight rationalization overflow (denominator beyond cap)");
            D = lcm_capped(D, den, denominator_cap);
            if (D < 0)
                throw std::runtime_error(
                    "w1_exact: weight rationalization overflow (required common "
                    "denominator exceeds cap " + std::to_string(denominator_cap) + ")");
        }
    };
    fold(a);
    fold(b);
    return min_cost_transport(a, b, integer_supplies(a, D), integer_supplies(b, D), D);
}

double posteriori_bound(const SampleSet& p_m, const SampleSet& q_n, double L,
                        double eta_to_target) {
    if (!(L > 0.0)) throw std::invalid_argument("posteriori_bound: L must be positive");
    return L * w1_exact(p_m, q_n) + eta_to_target;
}

}  // namespace wprox

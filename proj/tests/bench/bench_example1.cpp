#include <chrono>
#include <cstdio>

#include "wprox/harness.hpp"

using namespace wprox;
using Clock = std::chrono::steady_clock;

int main() {
    auto t0 = Clock::now();
    Example1Report rep = run_example1(1.0, AlphaValue::power(2.0), 1.0, 2000);
    auto ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    std::printf("w1_p_eta      = %.12f (expect 2)\n", rep.w1_p_eta);
    std::printf("tail_integral = %.12f (expect %.12f)\n", rep.tail_integral, 13.0 / 12.0);
    std::printf("d_eta_q       = %.12f (expect %.12f)\n", rep.d_eta_q, 5.0 / 6.0);
    std::printf("bound         = %.12f (expect %.12f)\n", rep.bound, 17.0 / 6.0);
    std::printf("dual_estimate = %.12f (within bound+0.2: %d)\n", rep.dual_estimate,
                (int)rep.estimate_within_bound);
    for (std::size_t i = 0; i < rep.evidence_axis.size(); ++i)
        std::printf("axis=%.0f w1_trunc=%.6f dalpha_lb=%.6f\n", rep.evidence_axis[i],
                    rep.w1_truncated[i], rep.dalpha_lower_bound[i]);
    std::printf("time = %.0f ms\n", ms);
    return 0;
}

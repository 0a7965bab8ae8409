#pragma once

#include <cstdint>
#include <vector>

#include "wprox/conjugate.hpp"
#include "wprox/neural_dual.hpp"
#include "wprox/sample_set.hpp"

namespace wprox {

// Particle cloud being transported; positions stay finite by construction
// (run-away clamping), and any non-finite update is a recorded event.
struct ParticleEnsemble {
    std::vector<double> positions;  // n x d
    int dim = 0;
    int step_index = 0;
    double step_size = 0.0;
    double max_speed = 0.0;  // largest |dx| of the latest step

    std::size_t count() const {
        return dim > 0 ? positions.size() / static_cast<std::size_t>(dim) : 0;
    }
};

struct GpaMode {
    bool lipschitz = true;  // false: same network without spectral normalization
    double L = 1.0;

    static GpaMode w1_proximal(double L) { return {true, L}; }
    static GpaMode unconstrained() { return {false, 1.0}; }
};

struct GpaSchedule {
    int outer_steps = 3000;
    int inner_steps = 10;  // discriminator ascent steps per transport step
    double eta = 0.1;      // particle step size
    double disc_step = 1e-3;
    std::size_t batch_p = 256;
    std::size_t batch_q = 256;
    std::vector<int> hidden = {64, 64, 64};
    int power_iters = 1;
    std::uint64_t seed = 0;
};

struct GpaDiagnostics {
    std::vector<double> objective;  // mean inner minibatch objective per step
    std::vector<double> max_speed;
    std::vector<double> rccdf_l1;   // against the supplied truth curve
    std::vector<int> nonfinite_steps;  // steps where an update went non-finite
    long long runaway_events = 0;      // clamps at |x| = 1e9 (unconstrained)
};

struct GpaResult {
    ParticleEnsemble particles;
    GpaDiagnostics diagnostics;
    LipschitzNet discriminator;
};

// One transport step: x <- x - eta * grad(net)(x).
ParticleEnsemble gpa_step(const ParticleEnsemble& particles,
                          const LipschitzNet& net, double eta);

// Alternating scheme: K discriminator ascent steps on the dual objective
// with P = particles and Q = target, then one particle transport step along
// the negative potential gradient.
GpaResult gpa_run(const SampleSet& target, std::size_t n_particles,
                  const std::vector<double>& prior_mean, double prior_scale,
                  const AlphaValue& a, const GpaMode& mode,
                  const GpaSchedule& schedule,
                  const std::vector<double>& eval_grid = {},
                  const std::vector<double>& eval_truth = {});

}  // namespace wprox

#include "wprox/gpa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wprox/metrics.hpp"
#include "wprox/rng.hpp"
#include "wprox/samplers.hpp"

namespace wprox {

namespace {
constexpr double kRunawayRadius = 1e9;
}

ParticleEnsemble gpa_step(const ParticleEnsemble& particles,
                          const LipschitzNet& net, double eta) {
    if (particles.dim != net.input_dim())
        throw std::invalid_argument("gpa_step: dimension mismatch");
    ParticleEnsemble out = particles;
    out.step_index = particles.step_index + 1;
    out.step_size = eta;
    out.max_speed = 0.0;
    std::vector<double> grad(static_cast<std::size_t>(particles.dim));
    const std::size_t n = particles.count();
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = particles.positions.data() + i * particles.dim;
        net.input_gradient(x, grad.data());
        double speed2 = 0.0;
        for (int k = 0; k < particles.dim; ++k) {
            double dx = -eta * grad[static_cast<std::size_t>(k)];
            out.positions[i * particles.dim + static_cast<std::size_t>(k)] = x[k] + dx;
            speed2 += dx * dx;
        }
        out.max_speed = std::max(out.max_speed, std::sqrt(speed2));
    }
    return out;
}

GpaResult gpa_run(const SampleSet& target, std::size_t n_particles,
                  const std::vector<double>& prior_mean, double prior_scale,
                  const AlphaValue& a, const GpaMode& mode,
                  const GpaSchedule& schedule,
                  const std::vector<double>& eval_grid,
                  const std::vector<double>& eval_truth) {
    if (target.size() == 0) throw std::invalid_argument("gpa_run: empty target");
    if (n_particles == 0) throw std::invalid_argument("gpa_run: need particles");
    if (!a.dual_supported())
        throw std::invalid_argument("gpa_run: requires alpha >= 1 (power or KL)");
    if (!eval_grid.empty() && eval_grid.size() != eval_truth.size())
        throw std::invalid_argument("gpa_run: eval grid/truth length mismatch");

    const int d = target.dim();
    CounterRng root(schedule.seed);
    SampleSet prior = sample_gaussian(d, n_particles, root.spawn(1).seed(),
                                      prior_mean, prior_scale);

    GpaResult res;
    res.particles.positions = prior.points();
    res.particles.dim = d;
    res.discriminator = LipschitzNet(d, schedule.hidden, mode.L, mode.lipschitz,
                                     root.spawn(2).seed());
    CounterRng batch_rng = root.spawn(3);

    const std::size_t bp = std::min(schedule.batch_p, n_particles);
    const std::size_t bq = std::min(schedule.batch_q, target.size());
    std::vector<const double*> xs(bp), ys(bq);
    std::vector<double> gq(bq), batch_w(bq, 1.0 / static_cast<double>(bq));

    for (int t = 0; t < schedule.outer_steps; ++t) {
        double obj_sum = 0.0;
        for (int k = 0; k < schedule.inner_steps; ++k) {
            for (auto& x : xs)
                x = res.particles.positions.data() +
                    (batch_rng.next_u64() % n_particles) * static_cast<std::size_t>(d);
            for (auto& y : ys)
                y = target.point(static_cast<std::size_t>(batch_rng.next_u64() % target.size()));

            for (std::size_t j = 0; j < bq; ++j) gq[j] = res.discriminator.forward(ys[j]);
            ShiftResult sr = shift_functional(gq, batch_w, a);

            LipschitzNet::Gradients grads = res.discriminator.zero_gradients();
            double obj = 0.0;
            for (std::size_t i = 0; i < bp; ++i)
                obj += res.discriminator.accumulate_gradients(
                           xs[i], 1.0 / static_cast<double>(bp), grads) /
                       static_cast<double>(bp);
            obj -= sr.nu_star;
            for (std::size_t j = 0; j < bq; ++j) {
                double coeff = -f_alpha_star_prime(gq[j] - sr.nu_star, a) /
                               static_cast<double>(bq);
                res.discriminator.accumulate_gradients(ys[j], coeff, grads);
                obj -= f_alpha_star(gq[j] - sr.nu_star, a) / static_cast<double>(bq);
            }
            obj_sum += obj;
            res.discriminator.apply_ascent_step(grads, schedule.disc_step);
            if (mode.lipschitz) res.discriminator.spectral_normalize(schedule.power_iters);
        }

        ParticleEnsemble next = gpa_step(res.particles, res.discriminator, schedule.eta);

        // Keep positions finite: clamp run-aways, keep the previous position
        // on a non-finite update and record the event.
        bool bad_step = false;
        for (std::size_t i = 0; i < n_particles; ++i) {
            double* x = next.positions.data() + i * static_cast<std::size_t>(d);
            bool finite = true;
            double r2 = 0.0;
            for (int k = 0; k < d; ++k) {
                if (!std::isfinite(x[k])) finite = false;
                r2 += x[k] * x[k];
            }
            if (!finite) {
                bad_step = true;
                const double* old =
                    res.particles.positions.data() + i * static_cast<std::size_t>(d);
                std::copy(old, old + d, x);
                continue;
            }
            double r = std::sqrt(r2);
            if (r > kRunawayRadius) {
                ++res.diagnostics.runaway_events;
                double scale = kRunawayRadius / r;
                for (int k = 0; k < d; ++k) x[k] *= scale;
            }
        }
        if (bad_step) res.diagnostics.nonfinite_steps.push_back(t);
        res.particles = std::move(next);

        res.diagnostics.objective.push_back(obj_sum / schedule.inner_steps);
        res.diagnostics.max_speed.push_back(res.particles.max_speed);
        if (!eval_grid.empty()) {
            std::vector<double> radii(n_particles);
            for (std::size_t i = 0; i < n_particles; ++i) {
                const double* x = res.particles.positions.data() +
                                  i * static_cast<std::size_t>(d);
                double r2 = 0.0;
                for (int k = 0; k < d; ++k) r2 += x[k] * x[k];
                radii[i] = std::sqrt(r2);
            }
            res.diagnostics.rccdf_l1.push_back(
                l1_error(eval_truth, rccdf_empirical(radii, eval_grid), eval_grid));
        }
    }
    return res;
}

}  // namespace wprox

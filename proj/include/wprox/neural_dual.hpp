#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wprox/conjugate.hpp"
#include "wprox/sample_set.hpp"

namespace wprox {

// Small fully connected potential network. Hidden activations are the
// 1-Lipschitz smooth primitive of exp(-t^2) (scaled error function), so with
// every layer's operator norm kept at <= 1 + eps by spectral normalization
// the network is (L + slack)-Lipschitz after the output scaling by L.
class LipschitzNet {
public:
    LipschitzNet() = default;
    LipschitzNet(int input_dim, std::vector<int> hidden_widths, double budget_L,
                 bool spectral_norm, std::uint64_t seed);

    int input_dim() const { return input_dim_; }
    double budget() const { return budget_L_; }
    bool spectral_norm_enabled() const { return spectral_norm_; }
    int layer_count() const { return static_cast<int>(weights_.size()); }

    double forward(const double* x) const;

    // Exact reverse-mode pass: accumulates coeff * d(forward)/d(params) into
    // grads and, when requested, writes coeff * d(forward)/dx to input_grad.
    struct Gradients {
        std::vector<std::vector<double>> w;  // same shapes as the weights
        std::vector<std::vector<double>> b;
    };
    Gradients zero_gradients() const;
    double accumulate_gradients(const double* x, double coeff, Gradients& grads,
                                double* input_grad = nullptr) const;

    // Gradient of the output with respect to the input only.
    void input_gradient(const double* x, double* out) const;

    void apply_ascent_step(const Gradients& grads, double step);

    // Divide each weight matrix by its leading singular value (persistent
    // power iteration). Zero matrices are left untouched.
    void spectral_normalize(int power_iters);

    // Power-iteration estimate of a layer's operator norm.
    double layer_norm_estimate(int layer, int power_iters = 30) const;

    void save(const std::string& path) const;
    static LipschitzNet load(const std::string& path);

    // Flat parameter access for finite-difference tests.
    std::size_t parameter_count() const;
    double get_parameter(std::size_t idx) const;
    void set_parameter(std::size_t idx, double value);
    double flatten_gradient(const Gradients& grads, std::size_t idx) const;

private:
    friend bool operator==(const LipschitzNet&, const LipschitzNet&);
    int rows(int layer) const { return dims_[layer + 1]; }
    int cols(int layer) const { return dims_[layer]; }

    int input_dim_ = 0;
    std::vector<int> dims_;  // input, hidden..., 1
    double budget_L_ = 1.0;
    bool spectral_norm_ = false;
    std::vector<std::vector<double>> weights_;  // row-major rows x cols
    std::vector<std::vector<double>> biases_;
    mutable std::vector<std::vector<double>> pi_u_, pi_v_;  // power iteration state
};

bool operator==(const LipschitzNet& a, const LipschitzNet& b);

struct TrainConfig {
    std::size_t batch_p = 512;
    std::size_t batch_q = 512;
    int iterations = 5000;
    double step = 1e-3;
    bool cosine_decay = true;
    int power_iters = 1;
    std::uint64_t seed = 0;
    int eval_window = 200;
    std::vector<int> hidden = {64, 64, 64};

    void validate() const;
};

struct EstimateResult {
    double estimate = 0.0;
    std::vector<double> trace;  // minibatch objective per iteration
    LipschitzNet net;
    bool aborted = false;  // non-finite objective encountered
};

// Stochastic ascent on E_P[net] - nu - E_Q[f*(net - nu)] over the network
// parameters; nu is re-solved by bisection on each minibatch. The reported
// estimate is the mean full-sample objective over the final evaluation
// window.
EstimateResult estimate_dual(const SampleSet& p, const SampleSet& q,
                             const AlphaValue& a, double L,
                             const TrainConfig& cfg);

// Full-sample dual objective of a fixed potential network (shift solved
// exactly). Used for evaluation windows and oracle-containment tests.
double dual_objective(const LipschitzNet& net, const SampleSet& p,
                      const SampleSet& q, const AlphaValue& a);

}  // namespace wprox

#include "wprox/neural_dual.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "wprox/rng.hpp"

namespace wprox {

namespace {

constexpr double kSqrtPiHalf = 0.88622692545275801365;  // sqrt(pi)/2

// 1-Lipschitz smooth activation: integral of exp(-t^2), slope 1 at zero.
inline double act(double z) { return kSqrtPiHalf * std::erf(z); }
inline double act_prime(double z) { return std::exp(-z * z); }

}  // namespace

LipschitzNet::LipschitzNet(int input_dim, std::vector<int> hidden_widths,
                           double budget_L, bool spectral_norm,
                           std::uint64_t seed)
    : input_dim_(input_dim), budget_L_(budget_L), spectral_norm_(spectral_norm) {
    if (input_dim < 1) throw std::invalid_argument("LipschitzNet: input_dim must be >= 1");
    if (!(budget_L > 0.0)) throw std::invalid_argument("LipschitzNet: budget must be positive");
    for (int w : hidden_widths)
        if (w < 1) throw std::invalid_argument("LipschitzNet: widths must be positive");
    dims_.push_back(input_dim);
    for (int w : hidden_widths) dims_.push_back(w);
    dims_.push_back(1);

    CounterRng rng(seed);
    int layers = static_cast<int>(dims_.size()) - 1;
    for (int l = 0; l < layers; ++l) {
        int r = rows(l), c = cols(l);
        std::vector<double> w(static_cast<std::size_t>(r) * c, 0.0);
        if (l + 1 < layers) {
            double a = std::sqrt(6.0 / static_cast<double>(r + c));
            for (double& v : w) v = (2.0 * rng.next_uniform() - 1.0) * a;
        }
        // Output layer starts at zero: the initial potential is identically
        // zero, so untrained networks move nothing.
        weights_.push_back(std::move(w));
        biases_.push_back(std::vector<double>(static_cast<std::size_t>(r), 0.0));
        std::vector<double> u(static_cast<std::size_t>(r)), v(static_cast<std::size_t>(c));
        for (double& x : u) x = rng.next_normal();
        for (double& x : v) x = rng.next_normal();
        auto normalize = [](std::vector<double>& vec) {
            double s = 0.0;
            for (double x : vec) s += x * x;
            s = std::sqrt(s);
            if (s > 0.0)
                for (double& x : vec) x /= s;
        };
        normalize(u);
        normalize(v);
        pi_u_.push_back(std::move(u));
        pi_v_.push_back(std::move(v));
    }
    if (spectral_norm_) spectral_normalize(30);
}

double LipschitzNet::forward(const double* x) const {
    std::vector<double> h(x, x + input_dim_), next;
    int layers = layer_count();
    for (int l = 0; l < layers; ++l) {
        int r = rows(l), c = cols(l);
        next.assign(static_cast<std::size_t>(r), 0.0);
        const auto& W = weights_[l];
        for (int i = 0; i < r; ++i) {
            double z = biases_[l][static_cast<std::size_t>(i)];
            const double* wrow = W.data() + static_cast<std::size_t>(i) * c;
            for (int j = 0; j < c; ++j) z += wrow[j] * h[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(i)] = (l + 1 < layers) ? act(z) : z;
        }
        h.swap(next);
    }
    return budget_L_ * h[0];
}

LipschitzNet::Gradients LipschitzNet::zero_gradients() const {
    Gradients g;
    for (int l = 0; l < layer_count(); ++l) {
        g.w.emplace_back(weights_[l].size(), 0.0);
        g.b.emplace_back(biases_[l].size(), 0.0);
    }
    return g;
}

double LipschitzNet::accumulate_gradients(const double* x, double coeff,
                                          Gradients& grads,
                                          double* input_grad) const {
    int layers = layer_count();
    // Forward pass, keeping pre-activations and activations.
    std::vector<std::vector<double>> acts(static_cast<std::size_t>(layers) + 1);
    std::vector<std::vector<double>> pre(static_cast<std::size_t>(layers));
    acts[0].assign(x, x + input_dim_);
    for (int l = 0; l < layers; ++l) {
        int r = rows(l), c = cols(l);
        pre[static_cast<std::size_t>(l)].assign(static_cast<std::size_t>(r), 0.0);
        acts[static_cast<std::size_t>(l) + 1].assign(static_cast<std::size_t>(r), 0.0);
        const auto& W = weights_[l];
        for (int i = 0; i < r; ++i) {
            double z = biases_[l][static_cast<std::size_t>(i)];
            const double* wrow = W.data() + static_cast<std::size_t>(i) * c;
            for (int j = 0; j < c; ++j)
                z += wrow[j] * acts[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
            pre[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] = z;
            acts[static_cast<std::size_t>(l) + 1][static_cast<std::size_t>(i)] =
                (l + 1 < layers) ? act(z) : z;
        }
    }
    double out = budget_L_ * acts.back()[0];

    // Backward pass.
    std::vector<double> delta{coeff * budget_L_}, prev;
    for (int l = layers - 1; l >= 0; --l) {
        int r = rows(l), c = cols(l);
        auto& gw = grads.w[static_cast<std::size_t>(l)];
        auto& gb = grads.b[static_cast<std::size_t>(l)];
        const auto& W = weights_[l];
        prev.assign(static_cast<std::size_t>(c), 0.0);
        for (int i = 0; i < r; ++i) {
            double d = delta[static_cast<std::size_t>(i)];
            gb[static_cast<std::size_t>(i)] += d;
            const double* a_in = acts[static_cast<std::size_t>(l)].data();
            double* gw_row = gw.data() + static_cast<std::size_t>(i) * c;
            const double* wrow = W.data() + static_cast<std::size_t>(i) * c;
            for (int j = 0; j < c; ++j) {
                gw_row[j] += d * a_in[j];
                prev[static_cast<std::size_t>(j)] += d * wrow[j];
            }
        }
        if (l > 0) {
            for (int j = 0; j < c; ++j)
                prev[static_cast<std::size_t>(j)] *=
                    act_prime(pre[static_cast<std::size_t>(l) - 1][static_cast<std::size_t>(j)]);
        }
        delta.swap(prev);
    }
    if (input_grad)
        for (int j = 0; j < input_dim_; ++j) input_grad[j] = delta[static_cast<std::size_t>(j)];
    return out;
}

void LipschitzNet::input_gradient(const double* x, double* out) const {
    int layers = layer_count();
    std::vector<std::vector<double>> pre(static_cast<std::size_t>(layers));
    std::vector<double> h(x, x + input_dim_), next;
    for (int l = 0; l < layers; ++l) {
        int r = rows(l), c = cols(l);
        pre[static_cast<std::size_t>(l)].assign(static_cast<std::size_t>(r), 0.0);
        const auto& W = weights_[l];
        for (int i = 0; i < r; ++i) {
            double z = biases_[l][static_cast<std::size_t>(i)];
            const double* wrow = W.data() + static_cast<std::size_t>(i) * c;
            for (int j = 0; j < c; ++j) z += wrow[j] * h[static_cast<std::size_t>(j)];
            pre[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] = z;
        }
        if (l + 1 < layers) {
            next.assign(static_cast<std::size_t>(r), 0.0);
            for (int i = 0; i < r; ++i)
                next[static_cast<std::size_t>(i)] =
                    act(pre[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)]);
            h.swap(next);
        }
    }
    std::vector<double> delta{budget_L_}, prev;
    for (int l = layers - 1; l >= 0; --l) {
        int r = rows(l), c = cols(l);
        const auto& W = weights_[l];
        prev.assign(static_cast<std::size_t>(c), 0.0);
        for (int i = 0; i < r; ++i) {
            double d = delta[static_cast<std::size_t>(i)];
            const double* wrow = W.data() + static_cast<std::size_t>(i) * c;
            for (int j = 0; j < c; ++j) prev[static_cast<std::size_t>(j)] += d * wrow[j];
        }
        if (l > 0)
            for (int j = 0; j < c; ++j)
                prev[static_cast<std::size_t>(j)] *=
                    act_prime(pre[static_cast<std::size_t>(l) - 1][static_cast<std::size_t>(j)]);
        delta.swap(prev);
    }
    for (int j = 0; j < input_dim_; ++j) out[j] = delta[static_cast<std::size_t>(j)];
}

void LipschitzNet::apply_ascent_step(const Gradients& grads, double step) {
    for (int l = 0; l < layer_count(); ++l) {
        auto& W = weights_[l];
        const auto& gw = grads.w[static_cast<std::size_t>(l)];
        for (std::size_t k = 0; k < W.size(); ++k) W[k] += step * gw[k];
        auto& B = biases_[l];
        const auto& gb = grads.b[static_cast<std::size_t>(l)];
        for (std::size_t k = 0; k < B.size(); ++k) B[k] += step * gb[k];
    }
}

void LipschitzNet::spectral_normalize(int power_iters) {
    if (power_iters < 1)
        throw std::invalid_argument("spectral_normalize: power_iters must be >= 1");
    for (int l = 0; l < layer_count(); ++l) {
        int r = rows(l), c = cols(l);
        auto& W = weights_[l];
        auto& u = pi_u_[static_cast<std::size_t>(l)];
        auto& v = pi_v_[static_cast<std::size_t>(l)];
        double sigma = 0.0;
        for (int it = 0; it < power_iters; ++it) {
            // v <- normalize(W^T u), u <- normalize(W v)
            for (int j = 0; j < c; ++j) {
                double s = 0.0;
                for (int i = 0; i < r; ++i)
                    s += W[static_cast<std::size_t>(i) * c + j] * u[static_cast<std::size_t>(i)];
                v[static_cast<std::size_t>(j)] = s;
            }
            double nv = 0.0;
            for (double z : v) nv += z * z;
            nv = std::sqrt(nv);
            if (nv < 1e-300) {
                sigma = 0.0;
                break;
            }
            for (double& z : v) z /= nv;
            for (int i = 0; i < r; ++i) {
                double s = 0.0;
                const double* wrow = W.data() + static_cast<std::size_t>(i) * c;
                for (int j = 0; j < c; ++j) s += wrow[j] * v[static_cast<std::size_t>(j)];
                u[static_cast<std::size_t>(i)] = s;
            }
            double nu = 0.0;
            for (double z : u) nu += z * z;
            nu = std::sqrt(nu);
            if (nu < 1e-300) {
                sigma = 0.0;
                break;
            }
            for (double& z : u) z /= nu;
            sigma = nu;  // |W v| with v unit: leading singular value estimate
        }
        if (sigma > 1e-12)
            for (double& w : W) w /= sigma;
    }
}

double LipschitzNet::layer_norm_estimate(int layer, int power_iters) const {
    int r = rows(layer), c = cols(layer);
    const auto& W = weights_[static_cast<std::size_t>(layer)];
    std::vector<double> u(static_cast<std::size_t>(r), 1.0 / std::sqrt(static_cast<double>(r)));
    std::vector<double> v(static_cast<std::size_t>(c), 0.0);
    double sigma = 0.0;
    for (int it = 0; it < power_iters; ++it) {
        for (int j = 0; j < c; ++j) {
            double s = 0.0;
            for (int i = 0; i < r; ++i)
                s += W[static_cast<std::size_t>(i) * c + j] * u[static_cast<std::size_t>(i)];
            v[static_cast<std::size_t>(j)] = s;
        }
        double nv = 0.0;
        for (double z : v) nv += z * z;
        nv = std::sqrt(nv);
        if (nv < 1e-300) return 0.0;
        for (double& z : v) z /= nv;
        for (int i = 0; i < r; ++i) {
            double s = 0.0;
            const double* wrow = W.data() + static_cast<std::size_t>(i) * c;
            for (int j = 0; j < c; ++j) s += wrow[j] * v[static_cast<std::size_t>(j)];
            u[static_cast<std::size_t>(i)] = s;
        }
        double nu = 0.0;
        for (double z : u) nu += z * z;
        sigma = std::sqrt(nu);
        if (sigma < 1e-300) return 0.0;
        for (double& z : u) z /= sigma;
    }
    return sigma;
}

namespace {
constexpr char kMagic[8] = {'W', 'P', 'X', 'N', 'E', 'T', '0', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

void write_f64(std::ostream& os, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}
}  // namespace

void LipschitzNet::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("LipschitzNet::save: cannot open " + path);
    os.write(kMagic, 8);
    write_u32(os, static_cast<std::uint32_t>(dims_.size()));
    for (int d : dims_) write_u32(os, static_cast<std::uint32_t>(d));
    write_u32(os, spectral_norm_ ? 1 : 0);
    write_f64(os, budget_L_);
    for (int l = 0; l < layer_count(); ++l) {
        for (double w : weights_[l]) write_f64(os, w);
        for (double b : biases_[l]) write_f64(os, b);
    }
}

LipschitzNet LipschitzNet::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("LipschitzNet::load: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("LipschitzNet::load: bad magic in " + path);
    std::uint32_t ndims = read_u32(is);
    if (ndims < 2 || ndims > 64) throw std::runtime_error("LipschitzNet::load: bad layout");
    std::vector<int> dims(ndims);
    for (auto& d : dims) d = static_cast<int>(read_u32(is));
    bool sn = read_u32(is) != 0;
    double L = read_f64(is);
    std::vector<int> hidden(dims.begin() + 1, dims.end() - 1);
    LipschitzNet net(dims[0], hidden, L, false, 0);
    net.spectral_norm_ = sn;
    for (int l = 0; l < net.layer_count(); ++l) {
        for (double& w : net.weights_[l]) w = read_f64(is);
        for (double& b : net.biases_[l]) b = read_f64(is);
    }
    if (!is) throw std::runtime_error("LipschitzNet::load: truncated file " + path);
    return net;
}

std::size_t LipschitzNet::parameter_count() const {
    std::size_t n = 0;
    for (int l = 0; l < layer_count(); ++l) n += weights_[l].size() + biases_[l].size();
    return n;
}

double LipschitzNet::get_parameter(std::size_t idx) const {
    for (int l = 0; l < layer_count(); ++l) {
        if (idx < weights_[l].size()) return weights_[l][idx];
        idx -= weights_[l].size();
        if (idx < biases_[l].size()) return biases_[l][idx];
        idx -= biases_[l].size();
    }
    throw std::out_of_range("LipschitzNet::get_parameter");
}

void LipschitzNet::set_parameter(std::size_t idx, double value) {
    for (int l = 0; l < layer_count(); ++l) {
        if (idx < weights_[l].size()) {
            weights_[l][idx] = value;
            return;
        }
        idx -= weights_[l].size();
        if (idx < biases_[l].size()) {
            biases_[l][idx] = value;
            return;
        }
        idx -= biases_[l].size();
    }
    throw std::out_of_range("LipschitzNet::set_parameter");
}

double LipschitzNet::flatten_gradient(const Gradients& grads, std::size_t idx) const {
    for (int l = 0; l < layer_count(); ++l) {
        if (idx < grads.w[static_cast<std::size_t>(l)].size())
            return grads.w[static_cast<std::size_t>(l)][idx];
        idx -= grads.w[static_cast<std::size_t>(l)].size();
        if (idx < grads.b[static_cast<std::size_t>(l)].size())
            return grads.b[static_cast<std::size_t>(l)][idx];
        idx -= grads.b[static_cast<std::size_t>(l)].size();
    }
    throw std::out_of_range("LipschitzNet::flatten_gradient");
}

bool operator==(const LipschitzNet& a, const LipschitzNet& b) {
    return a.dims_ == b.dims_ && a.budget_L_ == b.budget_L_ &&
           a.spectral_norm_ == b.spectral_norm_ && a.weights_ == b.weights_ &&
           a.biases_ == b.biases_;
}

void TrainConfig::validate() const {
    if (batch_p == 0 || batch_q == 0 || iterations <= 0 || !(step > 0.0) ||
        power_iters < 1 || eval_window <= 0 || hidden.empty())
        throw std::invalid_argument("TrainConfig: all counts and steps must be positive");
}

double dual_objective(const LipschitzNet& net, const SampleSet& p,
                      const SampleSet& q, const AlphaValue& a) {
    std::vector<double> gq(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) gq[j] = net.forward(q.point(j));
    ShiftResult sr = shift_functional(gq, q.weights(), a);
    double ep = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        ep += p.weight(i) * net.forward(p.point(i));
    return ep - sr.lambda_value;
}

EstimateResult estimate_dual(const SampleSet& p, const SampleSet& q,
                             const AlphaValue& a, double L,
                             const TrainConfig& cfg) {
    cfg.validate();
    if (!a.dual_supported())
        throw std::invalid_argument("estimate_dual: requires alpha >= 1 (power or KL)");
    if (p.dim() != q.dim()) throw std::invalid_argument("estimate_dual: dimension mismatch");

    EstimateResult out;
    out.net = LipschitzNet(p.dim(), cfg.hidden, L, true, cfg.seed);
    CounterRng rng(cfg.seed, 1);

    const std::size_t bp = std::min(cfg.batch_p, p.size());
    const std::size_t bq = std::min(cfg.batch_q, q.size());
    std::vector<const double*> xs(bp), ys(bq);
    std::vector<double> gq(bq), batch_w(bq, 1.0 / static_cast<double>(bq));
    out.trace.reserve(static_cast<std::size_t>(cfg.iterations));

    double eval_sum = 0.0;
    int eval_count = 0;
    const double pi = 3.14159265358979323846;

    for (int it = 0; it < cfg.iterations; ++it) {
        for (auto& x : xs)
            x = p.point(static_cast<std::size_t>(rng.next_u64() % p.size()));
        for (auto& y : ys)
            y = q.point(static_cast<std::size_t>(rng.next_u64() % q.size()));

        for (std::size_t j = 0; j < bq; ++j) gq[j] = out.net.forward(ys[j]);
        ShiftResult sr = shift_functional(gq, batch_w, a);

        LipschitzNet::Gradients grads = out.net.zero_gradients();
        double obj = 0.0;
        for (std::size_t i = 0; i < bp; ++i)
            obj += out.net.accumulate_gradients(xs[i], 1.0 / static_cast<double>(bp),
                                                grads) /
                   static_cast<double>(bp);
        obj -= sr.nu_star;
        for (std::size_t j = 0; j < bq; ++j) {
            double coeff = -f_alpha_star_prime(gq[j] - sr.nu_star, a) /
                           static_cast<double>(bq);
            out.net.accumulate_gradients(ys[j], coeff, grads);
            obj -= f_alpha_star(gq[j] - sr.nu_star, a) / static_cast<double>(bq);
        }
        if (!std::isfinite(obj)) {
            out.aborted = true;
            break;
        }
        out.trace.push_back(obj);

        double step = cfg.step;
        if (cfg.cosine_decay)
            step *= 0.5 * (1.0 + std::cos(pi * static_cast<double>(it) /
                                          static_cast<double>(cfg.iterations)));
        out.net.apply_ascent_step(grads, step);
        out.net.spectral_normalize(cfg.power_iters);

        if (it >= cfg.iterations - cfg.eval_window) {
            eval_sum += dual_objective(out.net, p, q, a);
            ++eval_count;
        }
    }
    out.estimate = eval_count > 0 ? eval_sum / eval_count
                                  : (out.trace.empty() ? 0.0 : out.trace.back());
    return out;
}

}  // namespace wprox

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mutnet/error.hpp"

namespace mutnet {

struct Topology {
    std::size_t n_in = 0;
    std::size_t n_hidden = 0;
    std::size_t n_out = 0;
};

// Single-hidden-layer feed-forward network with logistic activations on both
// layers. v/v0 are the input->hidden weights and biases, w/w0 hidden->output;
// both weight matrices are stored row-major (v[i*n_hidden+j], w[j*n_out+k]).
struct Network {
    std::size_t n_in = 0;
    std::size_t n_hidden = 0;
    std::size_t n_out = 0;
    std::vector<double> v;
    std::vector<double> v0;
    std::vector<double> w;
    std::vector<double> w0;
};

struct Sample {
    std::vector<double> input;
    std::vector<double> target;
};

struct TrainConfig {
    double alpha = 0.3;
    std::size_t max_epochs = 100000;
    double goal_mse = 1e-6;
    std::uint64_t seed = 42;
    bool shuffle_each_epoch = false;
};

enum class StopReason { GoalReached, MaxEpochs };

struct TrainReport {
    std::size_t epochs_run = 0;
    double final_mse = 0.0;
    std::vector<double> mse_history;
    StopReason stopped_by = StopReason::MaxEpochs;
};

struct ForwardResult {
    std::vector<double> hidden;  // z
    std::vector<double> output;  // y
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace detail {

// 53-bit uniform in [-0.5, 0.5) from a raw 64-bit draw; kept explicit so the
// stream is identical on every platform for a given seed.
inline double uniform_half(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
}

} // namespace detail

/// Seeded uniform [-0.5, 0.5) initialization. Fill order is v row-major,
/// then v0, then w row-major, then w0; the same seed rebuilds the same bits.
inline Network init_network(Topology t, std::uint64_t seed) {
    if (t.n_in == 0 || t.n_hidden == 0 || t.n_out == 0)
        fail(errc::zero_dimension, "network layers must all be non-empty");
    Network net;
    net.n_in = t.n_in;
    net.n_hidden = t.n_hidden;
    net.n_out = t.n_out;
    net.v.resize(t.n_in * t.n_hidden);
    net.v0.resize(t.n_hidden);
    net.w.resize(t.n_hidden * t.n_out);
    net.w0.resize(t.n_out);

    std::mt19937_64 rng(seed);
    for (double& p : net.v) p = detail::uniform_half(rng);
    for (double& p : net.v0) p = detail::uniform_half(rng);
    for (double& p : net.w) p = detail::uniform_half(rng);
    for (double& p : net.w0) p = detail::uniform_half(rng);
    return net;
}

/// z_j = f(v0_j + sum_i x_i v_ij), y_k = f(w0_k + sum_j z_j w_jk).
inline ForwardResult forward(const Network& net, std::span<const double> x) {
    if (x.size() != net.n_in)
        fail(errc::dimension_mismatch, "input has " + std::to_string(x.size()) +
                                           " components, network expects " +
                                           std::to_string(net.n_in));
    ForwardResult r;
    r.hidden.resize(net.n_hidden);
    for (std::size_t j = 0; j < net.n_hidden; ++j) {
        double acc = net.v0[j];
        for (std::size_t i = 0; i < net.n_in; ++i)
            acc += x[i] * net.v[i * net.n_hidden + j];
        r.hidden[j] = sigmoid(acc);
    }
    r.output.resize(net.n_out);
    for (std::size_t k = 0; k < net.n_out; ++k) {
        double acc = net.w0[k];
        for (std::size_t j = 0; j < net.n_hidden; ++j)
            acc += r.hidden[j] * net.w[j * net.n_out + k];
        r.output[k] = sigmoid(acc);
    }
    return r;
}

/// One on-line update: delta_k = (t_k - y_k) f'(y_in_k) at the output, the
/// hidden deltas fold back through the pre-update output weights, and every
/// weight moves by alpha * delta * activation. Returns the squared error of
/// the sample measured before the update.
inline double train_step(Network& net, std::span<const double> x,
                         std::span<const double> target, double alpha) {
    if (target.size() != net.n_out)
        fail(errc::dimension_mismatch, "target has " + std::to_string(target.size()) +
                                           " components, network expects " +
                                           std::to_string(net.n_out));
    ForwardResult r = forward(net, x);

    double sample_error = 0.0;
    std::vector<double> delta_out(net.n_out);
    for (std::size_t k = 0; k < net.n_out; ++k) {
        double y = r.output[k];
        double diff = target[k] - y;
        sample_error += diff * diff;
        delta_out[k] = diff * y * (1.0 - y);  // f'(y_in) = y (1 - y)
    }

    // hidden deltas use w as it was before this step's update
    std::vector<double> delta_hidden(net.n_hidden);
    for (std::size_t j = 0; j < net.n_hidden; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < net.n_out; ++k)
            acc += delta_out[k] * net.w[j * net.n_out + k];
        double z = r.hidden[j];
        delta_hidden[j] = acc * z * (1.0 - z);
    }

    for (std::size_t j = 0; j < net.n_hidden; ++j)
        for (std::size_t k = 0; k < net.n_out; ++k)
            net.w[j * net.n_out + k] += alpha * delta_out[k] * r.hidden[j];
    for (std::size_t k = 0; k < net.n_out; ++k) net.w0[k] += alpha * delta_out[k];
    for (std::size_t i = 0; i < net.n_in; ++i)
        for (std::size_t j = 0; j < net.n_hidden; ++j)
            net.v[i * net.n_hidden + j] += alpha * delta_hidden[j] * x[i];
    for (std::size_t j = 0; j < net.n_hidden; ++j) net.v0[j] += alpha * delta_hidden[j];

    return sample_error;
}

/// Mean squared error over all samples and output nodes, accumulated in the
/// given sample order so repeated calls are bit-identical.
inline double mse(const Network& net, std::span<const Sample> samples) {
    if (samples.empty()) fail(errc::empty_dataset, "mse over an empty dataset");
    double acc = 0.0;
    for (const Sample& s : samples) {
        ForwardResult r = forward(net, s.input);
        if (s.target.size() != net.n_out)
            fail(errc::dimension_mismatch, "target size does not match network outputs");
        for (std::size_t k = 0; k < net.n_out; ++k) {
            double diff = s.target[k] - r.output[k];
            acc += diff * diff;
        }
    }
    return acc / (static_cast<double>(samples.size()) * static_cast<double>(net.n_out));
}

/// Epoch loop of per-sample updates. The epoch MSE is measured with the
/// post-epoch weights in the original sample order; training stops once it
/// reaches goal_mse or after max_epochs.
inline TrainReport train(Network& net, std::span<const Sample> samples, const TrainConfig& cfg,
                         const std::function<void(std::size_t, double)>& on_epoch = {}) {
    if (samples.empty()) fail(errc::empty_dataset, "cannot train on an empty dataset");

    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 shuffle_rng(cfg.seed);

    TrainReport report;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        if (cfg.shuffle_each_epoch)
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[shuffle_rng() % i]);
        for (std::size_t idx : order)
            train_step(net, samples[idx].input, samples[idx].target, cfg.alpha);

        double epoch_mse = mse(net, samples);
        report.mse_history.push_back(epoch_mse);
        report.epochs_run = epoch;
        report.final_mse = epoch_mse;
        if (on_epoch) on_epoch(epoch, epoch_mse);
        if (epoch_mse <= cfg.goal_mse) {
            report.stopped_by = StopReason::GoalReached;
            return report;
        }
    }
    report.stopped_by = StopReason::MaxEpochs;
    return report;
}

/// Central-difference audit of the backprop gradient. E = sum_k (t_k - y_k)^2;
/// the analytic gradient implied by one train_step is -2 * delta_p / alpha
/// (the update rule descends E/2). Returns the worst relative disagreement.
/// Differences below 1e-8 count as agreement: central differences carry
/// round-off noise of roughly eps*E/h (about 1e-9 at h = 1e-6), so below that
/// scale the comparison measures noise, not the chain rule.
inline double gradient_check(const Network& net, std::span<const double> x,
                             std::span<const double> target, double h = 1e-6) {
    auto energy = [&](const Network& n) {
        ForwardResult r = forward(n, x);
        double e = 0.0;
        for (std::size_t k = 0; k < n.n_out; ++k) {
            double diff = target[k] - r.output[k];
            e += diff * diff;
        }
        return e;
    };

    const double alpha = 1.0;
    Network stepped = net;
    train_step(stepped, x, target, alpha);

    std::vector<double*> params;
    std::vector<const double*> stepped_params;
    auto collect = [&](std::vector<double>& mine, const std::vector<double>& theirs) {
        for (std::size_t i = 0; i < mine.size(); ++i) {
            params.push_back(&mine[i]);
            stepped_params.push_back(&theirs[i]);
        }
    };
    Network probe = net;
    collect(probe.v, stepped.v);
    collect(probe.v0, stepped.v0);
    collect(probe.w, stepped.w);
    collect(probe.w0, stepped.w0);

    double worst = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        double saved = *params[p];
        *params[p] = saved + h;
        double e_plus = energy(probe);
        *params[p] = saved - h;
        double e_minus = energy(probe);
        *params[p] = saved;

        double numeric = (e_plus - e_minus) / (2.0 * h);
        double analytic = -2.0 * (*stepped_params[p] - saved) / alpha;
        double diff = std::abs(analytic - numeric);
        if (diff <= 1e-8) continue;
        double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
        worst = std::max(worst, diff / denom);
    }
    return worst;
}

} // namespace mutnet

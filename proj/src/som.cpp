#include "puckergrade/som.hpp"

#include "puckergrade/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace puckergrade::som {

namespace {

void check_dim(const Model& model, std::span<const double> x) {
    if (x.size() != model.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "input has " + std::to_string(x.size()) + " components, map expects " + std::to_string(model.dim()));
    }
}

void check_iteration(std::size_t t, const TrainingSchedule& schedule) {
    if (t > schedule.iterations) {
        throw Error(ErrorCode::IterationOutOfRange,
                    "t=" + std::to_string(t) + " outside [0, " + std::to_string(schedule.iterations) + "]");
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

} // namespace

Model::Model(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed, std::vector<double> weights,
             std::vector<std::uint8_t> labels, ClassifyMode mode)
    : rows_(rows), cols_(cols), dim_(dim), seed_(seed), weights_(std::move(weights)), labels_(std::move(labels)),
      mode_(mode) {
    if (rows_ == 0 || cols_ == 0 || dim_ == 0) {
        throw Error(ErrorCode::InvalidDimensions, "rows, cols and dim must all be >= 1");
    }
    if (weights_.size() != rows_ * cols_ * dim_) {
        throw Error(ErrorCode::InvalidDimensions, "weight count does not match rows x cols x dim");
    }
    if (labels_.empty()) {
        labels_.assign(rows_ * cols_, 0);
    }
    if (labels_.size() != rows_ * cols_) {
        throw Error(ErrorCode::InvalidDimensions, "label count does not match rows x cols");
    }
    for (std::uint8_t l : labels_) {
        if (l > Grade::kMax) {
            throw Error(ErrorCode::InvalidGrade, "node label out of range: " + std::to_string(l));
        }
    }
}

std::optional<Grade> Model::label(std::size_t flat_index) const {
    const std::uint8_t l = labels_[flat_index];
    if (l == 0) {
        return std::nullopt;
    }
    return Grade(l);
}

bool Model::fully_labeled() const noexcept {
    return std::none_of(labels_.begin(), labels_.end(), [](std::uint8_t l) { return l == 0; });
}

TrainingSchedule TrainingSchedule::defaults(std::size_t rows, std::size_t cols, std::size_t sample_count) {
    TrainingSchedule s;
    s.alpha0 = 0.35;
    s.d0 = std::ceil(0.75 * static_cast<double>(std::max(rows, cols)) / 2.0);
    s.iterations = 200 * std::max<std::size_t>(sample_count, 1);
    return s;
}

void TrainingSchedule::validate() const {
    if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) {
        throw Error(ErrorCode::InvalidSchedule, "alpha0 must lie in [0, 1]");
    }
    if (!(d0 >= 0.0) || !std::isfinite(d0)) {
        throw Error(ErrorCode::InvalidSchedule, "d0 must be finite and >= 0");
    }
    if (iterations < 1) {
        throw Error(ErrorCode::InvalidSchedule, "iterations must be >= 1");
    }
}

Model new_map(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed) {
    if (rows == 0 || cols == 0 || dim == 0) {
        throw Error(ErrorCode::InvalidDimensions, "rows, cols and dim must all be >= 1");
    }
    std::mt19937_64 gen(seed);
    std::vector<double> weights(rows * cols * dim);
    for (double& w : weights) {
        w = static_cast<double>(gen() >> 11U) * 0x1.0p-53;
    }
    return Model(rows, cols, dim, seed, std::move(weights), {});
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

NodeIndex bmu(const Model& model, std::span<const double> x) {
    check_dim(model, x);
    std::size_t best = 0;
    double best_d = squared_distance(model.weight(0), x);
    for (std::size_t i = 1; i < model.node_count(); ++i) {
        const double d = squared_distance(model.weight(i), x);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return model.node(best);
}

double learning_rate(std::size_t t, const TrainingSchedule& schedule) {
    check_iteration(t, schedule);
    const auto total = static_cast<double>(schedule.iterations);
    return schedule.alpha0 * (total - static_cast<double>(t)) / total;
}

double neighborhood_radius(std::size_t t, const TrainingSchedule& schedule) {
    check_iteration(t, schedule);
    const auto total = static_cast<double>(schedule.iterations);
    return schedule.d0 * (total - static_cast<double>(t)) / total;
}

bool in_neighborhood(NodeIndex node, NodeIndex winner, double radius) noexcept {
    if (node == winner) {
        return true;
    }
    const double dr = std::abs(static_cast<double>(node.row) - static_cast<double>(winner.row));
    const double dc = std::abs(static_cast<double>(node.col) - static_cast<double>(winner.col));
    return dr < radius && dc < radius;
}

void update(Model& model, std::span<const double> x, NodeIndex winner, double alpha, double radius) {
    check_dim(model, x);
    if (winner.row >= model.rows() || winner.col >= model.cols()) {
        throw Error(ErrorCode::InvalidDimensions, "winner outside the grid");
    }
    const double keep = 1.0 - alpha;
    // Only rows/cols within ceil(radius) of the winner can satisfy the strict window test.
    const auto reach = static_cast<std::size_t>(std::max(0.0, std::ceil(radius)));
    const std::size_t r0 = winner.row > reach ? winner.row - reach : 0;
    const std::size_t c0 = winner.col > reach ? winner.col - reach : 0;
    const std::size_t r1 = std::min(model.rows() - 1, winner.row + reach);
    const std::size_t c1 = std::min(model.cols() - 1, winner.col + reach);
    for (std::size_t r = r0; r <= r1; ++r) {
        for (std::size_t c = c0; c <= c1; ++c) {
            if (!in_neighborhood({r, c}, winner, radius)) {
                continue;
            }
            auto w = model.weight(model.flat({r, c}));
            for (std::size_t j = 0; j < w.size(); ++j) {
                w[j] = keep * w[j] + alpha * x[j];
            }
        }
    }
}

void train(Model& model, std::span<const std::vector<double>> samples, const TrainingSchedule& schedule) {
    if (samples.empty()) {
        throw Error(ErrorCode::EmptyTrainingSet, "no training samples");
    }
    for (const auto& s : samples) {
        check_dim(model, s);
    }
    schedule.validate();
    for (std::size_t t = 0; t < schedule.iterations; ++t) {
        const auto& x = samples[t % samples.size()];
        const NodeIndex winner = bmu(model, x);
        update(model, x, winner, learning_rate(t, schedule), neighborhood_radius(t, schedule));
    }
}

void label_nodes(Model& model, std::span<const Prototype> prototypes) {
    if (prototypes.empty()) {
        throw Error(ErrorCode::EmptyPrototypes, "no labeling prototypes");
    }
    for (const auto& p : prototypes) {
        check_dim(model, p.vector);
    }
    for (std::size_t i = 0; i < model.node_count(); ++i) {
        std::size_t best = 0;
        double best_d = squared_distance(model.weight(i), prototypes[0].vector);
        for (std::size_t p = 1; p < prototypes.size(); ++p) {
            const double d = squared_distance(model.weight(i), prototypes[p].vector);
            if (d < best_d) {
                best_d = d;
                best = p;
            }
        }
        model.set_label(i, prototypes[best].grade);
    }
}

Classification classify(const Model& model, std::span<const double> x, ClassifyMode mode) {
    check_dim(model, x);
    if (!model.fully_labeled()) {
        throw Error(ErrorCode::UnlabeledModel, "every node needs a grade label before classification");
    }
    std::size_t winner = 0;
    if (mode == ClassifyMode::BmuDistance) {
        winner = model.flat(bmu(model, x));
    } else {
        double best = dot(model.weight(0), x);
        for (std::size_t i = 1; i < model.node_count(); ++i) {
            const double s = dot(model.weight(i), x);
            if (s > best) {
                best = s;
                winner = i;
            }
        }
    }
    return Classification{*model.label(winner), model.node(winner), distance(model.weight(winner), x),
                          dot(model.weight(winner), x), mode};
}

double quantization_error(const Model& model, std::span<const std::vector<double>> samples) {
    if (samples.empty()) {
        throw Error(ErrorCode::EmptyTrainingSet, "no samples");
    }
    double acc = 0.0;
    for (const auto& s : samples) {
        acc += distance(model.weight(model.flat(bmu(model, s))), s);
    }
    return acc / static_cast<double>(samples.size());
}

} // namespace puckergrade::som

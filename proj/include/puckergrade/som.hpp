#pragma once

#include "puckergrade/grade.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace puckergrade::som {

enum class ClassifyMode : std::uint8_t {
    BmuDistance = 0, // label of the nearest node (Euclidean)
    DotProduct = 1,  // label of the node with the largest scalar product
};

struct NodeIndex {
    std::size_t row = 0;
    std::size_t col = 0;
    friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

// Kohonen map: a rows x cols grid of weight vectors of length dim, plus optional grade labels.
class Model {
public:
    Model(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed, std::vector<double> weights,
          std::vector<std::uint8_t> labels, ClassifyMode mode = ClassifyMode::BmuDistance);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return rows_ * cols_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    [[nodiscard]] std::size_t flat(NodeIndex node) const noexcept { return node.row * cols_ + node.col; }
    [[nodiscard]] NodeIndex node(std::size_t flat_index) const noexcept {
        return {flat_index / cols_, flat_index % cols_};
    }

    [[nodiscard]] std::span<const double> weight(std::size_t flat_index) const {
        return {weights_.data() + flat_index * dim_, dim_};
    }
    [[nodiscard]] std::span<double> weight(std::size_t flat_index) {
        return {weights_.data() + flat_index * dim_, dim_};
    }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }

    // 0 = unlabeled, 1..5 = grade.
    [[nodiscard]] const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
    [[nodiscard]] std::optional<Grade> label(std::size_t flat_index) const;
    void set_label(std::size_t flat_index, Grade grade) {
        labels_[flat_index] = static_cast<std::uint8_t>(grade.value());
    }
    [[nodiscard]] bool fully_labeled() const noexcept;

    [[nodiscard]] ClassifyMode classify_mode() const noexcept { return mode_; }
    void set_classify_mode(ClassifyMode mode) noexcept { mode_ = mode; }

    friend bool operator==(const Model&, const Model&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::size_t dim_;
    std::uint64_t seed_;
    std::vector<double> weights_;
    std::vector<std::uint8_t> labels_;
    ClassifyMode mode_;
};

struct TrainingSchedule {
    double alpha0 = 0.35;       // initial learning step
    double d0 = 4.0;            // initial neighborhood half-width, in grid cells
    std::size_t iterations = 1; // T

    // alpha0 = 0.35, d0 = ceil(0.75 * max(rows, cols) / 2), T = 200 * sample_count.
    [[nodiscard]] static TrainingSchedule defaults(std::size_t rows, std::size_t cols, std::size_t sample_count);

    // Throws InvalidSchedule unless 0 <= alpha0 <= 1, d0 >= 0 and T >= 1.
    void validate() const;
};

struct Prototype {
    std::vector<double> vector;
    Grade grade;
};

struct Classification {
    Grade grade;
    NodeIndex node;
    double distance = 0.0; // Euclidean distance to the winning node
    double score = 0.0;    // scalar product with the winning node
    ClassifyMode mode = ClassifyMode::BmuDistance;
};

// Weights drawn uniformly from [0, 1) by a seeded mt19937_64 (53-bit mantissa).
[[nodiscard]] Model new_map(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed);

[[nodiscard]] double distance(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double squared_distance(std::span<const double> a, std::span<const double> b);

// Nearest node by Euclidean distance, smallest row-major index on ties.
[[nodiscard]] NodeIndex bmu(const Model& model, std::span<const double> x);

// alpha0 (1 - t / T) for t in [0, T].
[[nodiscard]] double learning_rate(std::size_t t, const TrainingSchedule& schedule);
// d0 (1 - t / T) for t in [0, T].
[[nodiscard]] double neighborhood_radius(std::size_t t, const TrainingSchedule& schedule);

// Square window |row - winner.row| < radius and |col - winner.col| < radius; the winner is always inside.
[[nodiscard]] bool in_neighborhood(NodeIndex node, NodeIndex winner, double radius) noexcept;

// w <- (1 - alpha) w + alpha x for every node in the window around winner.
void update(Model& model, std::span<const double> x, NodeIndex winner, double alpha, double radius);

// T steps presenting samples in cyclic order: bmu, then update with alpha_t and d_t.
void train(Model& model, std::span<const std::vector<double>> samples, const TrainingSchedule& schedule);

// Each node takes the grade of its nearest prototype (earliest prototype on ties).
void label_nodes(Model& model, std::span<const Prototype> prototypes);

[[nodiscard]] Classification classify(const Model& model, std::span<const double> x, ClassifyMode mode);
[[nodiscard]] inline Classification classify(const Model& model, std::span<const double> x) {
    return classify(model, x, model.classify_mode());
}

// Mean Euclidean distance from each sample to its best matching unit.
[[nodiscard]] double quantization_error(const Model& model, std::span<const std::vector<double>> samples);

} // namespace puckergrade::som

#include "puckergrade/pipeline.hpp"

#include "puckergrade/error.hpp"
#include "puckergrade/otsu.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace puckergrade::pipeline {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

GrayImage maybe_binarize(const GrayImage& img, bool enabled) {
    if (!enabled) {
        return img;
    }
    try {
        const std::size_t t = otsu::otsu_threshold(otsu::histogram(img));
        return otsu::binarize(img, t).to_gray();
    } catch (const Error& e) {
        // A uniform image is already "binary".
        if (e.code() == ErrorCode::DegenerateHistogram) {
            return img;
        }
        throw;
    }
}

std::string format_percent(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << v;
    return out.str();
}

} // namespace

std::vector<LabeledPath> read_labels(const std::filesystem::path& tsv) {
    std::ifstream in(tsv);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, tsv.string());
    }
    const std::filesystem::path base = tsv.parent_path();
    std::vector<LabeledPath> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') {
            continue;
        }
        const auto tab = view.find('\t');
        if (tab == std::string_view::npos) {
            throw Error(ErrorCode::CorruptData, tsv.string() + ":" + std::to_string(line_no) + ": expected filename<TAB>grade");
        }
        const std::string name(trim(view.substr(0, tab)));
        const std::string grade_text(trim(view.substr(tab + 1)));
        int grade = 0;
        try {
            std::size_t used = 0;
            grade = std::stoi(grade_text, &used);
            if (used != grade_text.size()) {
                throw std::invalid_argument(grade_text);
            }
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::CorruptData, tsv.string() + ":" + std::to_string(line_no) + ": bad grade '" + grade_text + "'");
        }
        std::filesystem::path file(name);
        if (file.is_relative()) {
            file = base / file;
        }
        out.push_back(LabeledPath{file, Grade(grade)});
    }
    return out;
}

std::vector<LabeledSample> load_samples(const std::filesystem::path& tsv) {
    std::vector<LabeledSample> out;
    for (const LabeledPath& entry : read_labels(tsv)) {
        out.push_back(LabeledSample{entry.file.filename().string(), load_gray(entry.file), entry.grade});
    }
    return out;
}

spectral::FeatureVector extract(const GrayImage& img, const PipelineConfig& config) {
    const GrayImage prepared = spectral::prepare_square(maybe_binarize(img, config.binarize), config.transform_size);
    const spectral::AmplitudeMap amps = spectral::amplitude(spectral::dft2(prepared));
    return spectral::extract_features(amps, config.feature_side, config.include_dc);
}

TrainedModel train(const PipelineConfig& config, std::span<const LabeledSample> samples) {
    config.validate();
    std::array<std::size_t, Grade::kCount> per_grade{};
    for (const LabeledSample& s : samples) {
        ++per_grade[s.grade.index()];
    }
    for (int g = Grade::kMin; g <= Grade::kMax; ++g) {
        if (per_grade[Grade(g).index()] == 0) {
            throw Error(ErrorCode::MissingGrade, "no training image for grade " + std::to_string(g));
        }
    }

    const PipelineConfig resolved = config.resolved(samples.size());
    std::vector<std::vector<double>> features;
    features.reserve(samples.size());
    for (const LabeledSample& s : samples) {
        features.push_back(extract(s.image, resolved).data);
    }

    som::Model model = som::new_map(resolved.som_rows, resolved.som_cols, resolved.feature_dim(), resolved.seed);
    model.set_classify_mode(resolved.classify_mode);
    const double before = som::quantization_error(model, features);
    som::train(model, features, resolved.schedule(samples.size()));
    const double after = som::quantization_error(model, features);

    std::vector<som::Prototype> prototypes;
    for (int g = Grade::kMin; g <= Grade::kMax; ++g) {
        const Grade grade(g);
        std::vector<double> mean(resolved.feature_dim(), 0.0);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (samples[i].grade != grade) {
                continue;
            }
            for (std::size_t j = 0; j < mean.size(); ++j) {
                mean[j] += features[i][j];
            }
        }
        const auto count = static_cast<double>(per_grade[grade.index()]);
        for (double& v : mean) {
            v /= count;
        }
        prototypes.push_back(som::Prototype{std::move(mean), grade});
    }
    som::label_nodes(model, prototypes);
    return TrainedModel{std::move(model), resolved, before, after};
}

std::vector<std::uint8_t> model_bytes(const TrainedModel& trained) {
    return som::encode_model(trained.model, trained.config.to_text());
}

TrainedModel run_train(const PipelineConfig& config, const std::filesystem::path& labels,
                       const std::filesystem::path& model_out) {
    const std::vector<LabeledSample> samples = load_samples(labels);
    TrainedModel trained = train(config, samples);
    write_file(model_out, model_bytes(trained));
    return trained;
}

LoadedModel open_model(som::ModelFile file, const PipelineConfig& fallback) {
    PipelineConfig config = file.config ? PipelineConfig::parse(*file.config) : fallback;
    if (file.model.dim() != config.feature_dim()) {
        throw Error(ErrorCode::ConfigMismatch, "model dimension " + std::to_string(file.model.dim()) +
                                                   " does not match feature_side^2 = " +
                                                   std::to_string(config.feature_dim()));
    }
    // The mode tag stored with the weights is authoritative.
    config.classify_mode = file.model.classify_mode();
    return LoadedModel{std::move(file.model), config};
}

LoadedModel open_model(const std::filesystem::path& path, const PipelineConfig& fallback) {
    return open_model(som::load_model(path), fallback);
}

som::Classification classify(const LoadedModel& loaded, const GrayImage& img) {
    const spectral::FeatureVector fv = extract(img, loaded.config);
    if (fv.data.size() != loaded.model.dim()) {
        throw Error(ErrorCode::ConfigMismatch, "feature vector length does not match the model");
    }
    return som::classify(loaded.model, fv.data, loaded.config.classify_mode);
}

som::Classification run_classify(const std::filesystem::path& model, const std::filesystem::path& image,
                                 const PipelineConfig& fallback) {
    const LoadedModel loaded = open_model(model, fallback);
    return classify(loaded, load_gray(image));
}

std::size_t EvaluationReport::correct() const noexcept {
    std::size_t n = 0;
    for (std::size_t g = 0; g < Grade::kCount; ++g) {
        n += confusion[g][g];
    }
    return n;
}

std::size_t EvaluationReport::total() const noexcept {
    std::size_t n = 0;
    for (const auto& row : confusion) {
        for (std::size_t c : row) {
            n += c;
        }
    }
    return n;
}

double EvaluationReport::accuracy() const noexcept {
    const std::size_t n = total();
    return n == 0 ? 0.0 : 100.0 * static_cast<double>(correct()) / static_cast<double>(n);
}

std::string EvaluationReport::to_text() const {
    std::ostringstream out;
    out << std::left << std::setw(24) << "image" << "truth  predicted  node     distance\n";
    for (const EvaluationEntry& e : entries) {
        std::ostringstream node;
        node << "(" << e.node.row << "," << e.node.col << ")";
        out << std::left << std::setw(24) << e.name << std::setw(7) << e.truth.value() << std::setw(11)
            << e.predicted.value() << std::setw(9) << node.str() << std::fixed << std::setprecision(6) << e.distance
            << "\n";
    }
    out << "\nconfusion (rows = true grade, cols = predicted)\n      ";
    for (int g = Grade::kMin; g <= Grade::kMax; ++g) {
        out << std::right << std::setw(4) << g;
    }
    out << "\n";
    for (std::size_t t = 0; t < Grade::kCount; ++t) {
        out << std::right << std::setw(6) << t + 1;
        for (std::size_t p = 0; p < Grade::kCount; ++p) {
            out << std::setw(4) << confusion[t][p];
        }
        out << "\n";
    }
    out << "\naccuracy: " << format_percent(accuracy()) << "% (" << correct() << "/" << total() << ")\n";
    return out.str();
}

std::string EvaluationReport::to_tsv() const {
    std::ostringstream out;
    out << "image\ttrue_grade\tpredicted_grade\tnode_row\tnode_col\tdistance\n";
    for (const EvaluationEntry& e : entries) {
        out << e.name << "\t" << e.truth.value() << "\t" << e.predicted.value() << "\t" << e.node.row << "\t"
            << e.node.col << "\t" << std::setprecision(17) << e.distance << "\n";
    }
    out << "# accuracy\t" << format_percent(accuracy()) << "\n";
    return out.str();
}

EvaluationReport evaluate(const LoadedModel& loaded, std::span<const LabeledSample> samples) {
    if (samples.empty()) {
        throw Error(ErrorCode::EmptyTrainingSet, "evaluation set is empty");
    }
    EvaluationReport report;
    for (const LabeledSample& s : samples) {
        const som::Classification c = classify(loaded, s.image);
        report.entries.push_back(EvaluationEntry{s.name, s.grade, c.grade, c.node, c.distance});
        ++report.confusion[s.grade.index()][c.grade.index()];
    }
    std::stable_sort(report.entries.begin(), report.entries.end(),
                     [](const EvaluationEntry& a, const EvaluationEntry& b) { return a.name < b.name; });
    return report;
}

EvaluationReport run_evaluate(const std::filesystem::path& model, const std::filesystem::path& labels,
                              const PipelineConfig& fallback) {
    const LoadedModel loaded = open_model(model, fallback);
    return evaluate(loaded, load_samples(labels));
}

} // namespace puckergrade::pipeline

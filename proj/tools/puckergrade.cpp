// puckergrade: seam pucker grading from fabric images.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 config/model mismatch.

#include "puckergrade/config.hpp"
#include "puckergrade/error.hpp"
#include "puckergrade/image.hpp"
#include "puckergrade/metrics.hpp"
#include "puckergrade/otsu.hpp"
#include "puckergrade/pipeline.hpp"
#include "puckergrade/spectral.hpp"
#include "puckergrade/synth.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace puckergrade;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitMismatch = 4;

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::ConfigMismatch:
    case ErrorCode::DimensionMismatch:
        return kExitMismatch;
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidSchedule:
        return kExitUsage;
    default:
        return kExitData;
    }
}

struct ConfigOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value pipeline configuration file")->check(CLI::ExistingFile);
    }

    [[nodiscard]] PipelineConfig load() const {
        PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : PipelineConfig::load(config_path);
        apply_environment(cfg);
        if (seed) {
            cfg.seed = *seed;
        }
        cfg.validate();
        return cfg;
    }
};

void print_classification(const std::string& image, const som::Classification& c) {
    std::cout << "image:    " << image << "\n"
              << "grade:    " << c.grade.value() << "\n"
              << "mode:     " << to_string(c.mode) << "\n"
              << "node:     (" << c.node.row << "," << c.node.col << ")\n"
              << std::setprecision(9) << "distance: " << c.distance << "\n"
              << "score:    " << c.score << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seam pucker grading: spectral features + Kohonen map"};
    app.require_subcommand(1);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled seam-image dataset");
    std::string synth_out;
    std::size_t synth_train = 5;
    std::size_t synth_test = 21;
    std::uint64_t synth_seed = 42;
    std::size_t synth_size = 256;
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();
    synth_cmd->add_option("--train", synth_train, "Total training images, spread over grades 1..5");
    synth_cmd->add_option("--test", synth_test, "Total test images, spread over grades 1..5");
    synth_cmd->add_option("--seed", synth_seed, "Dataset seed");
    synth_cmd->add_option("--size", synth_size, "Image side in pixels")->check(CLI::Range(8, 4096));

    // otsu
    auto* otsu_cmd = app.add_subcommand("otsu", "Print the Otsu threshold, optionally write the binary image");
    std::string otsu_image;
    std::string otsu_out;
    otsu_cmd->add_option("image", otsu_image, "PNG or PGM image")->required()->check(CLI::ExistingFile);
    otsu_cmd->add_option("--out", otsu_out, "Binary image output (P5, 0/255)");

    // spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Amplitude/phase displays and feature vector of an image");
    std::string spectrum_image_path;
    std::string spectrum_amp_out;
    std::string spectrum_phase_out;
    std::string spectrum_features_out;
    ConfigOptions spectrum_cfg;
    spectrum_cmd->add_option("image", spectrum_image_path, "PNG or PGM image")->required()->check(CLI::ExistingFile);
    spectrum_cmd->add_option("--out", spectrum_amp_out, "Centered log-amplitude display (PNG or .pgm)");
    spectrum_cmd->add_option("--phase", spectrum_phase_out, "Centered phase display (PNG or .pgm)");
    spectrum_cmd->add_option("--features", spectrum_features_out, "Feature vector (u32 side + f64 LE values)");
    spectrum_cfg.attach(spectrum_cmd);

    // sp
    auto* sp_cmd = app.add_subcommand("sp", "Seam pucker percentage from thickness or length measurements");
    std::optional<double> sp_ts;
    std::optional<double> sp_t;
    std::optional<double> sp_l;
    std::optional<double> sp_ls;
    auto* ts_opt = sp_cmd->add_option("--ts", sp_ts, "Seam thickness");
    auto* t_opt = sp_cmd->add_option("--t", sp_t, "Fabric thickness");
    auto* l_opt = sp_cmd->add_option("--l", sp_l, "Length of unraveled fabric");
    auto* ls_opt = sp_cmd->add_option("--ls", sp_ls, "Length of sewn assembly");
    ts_opt->needs(t_opt);
    t_opt->needs(ts_opt);
    l_opt->needs(ls_opt);
    ls_opt->needs(l_opt);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train and label a map from a labels file");
    std::string train_labels;
    std::string train_model = "model.pksm";
    ConfigOptions train_cfg;
    train_cmd->add_option("--labels", train_labels, "filename<TAB>grade file")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--out", train_model, "Model output path");
    train_cmd->add_option("--seed", train_cfg.seed, "Map initialization seed (overrides config and environment)");
    train_cfg.attach(train_cmd);

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "Grade one image with a trained model");
    std::string classify_model;
    std::string classify_image;
    ConfigOptions classify_cfg;
    classify_cmd->add_option("--model", classify_model, "PKSM model file")->required()->check(CLI::ExistingFile);
    classify_cmd->add_option("image", classify_image, "PNG or PGM image")->required()->check(CLI::ExistingFile);
    classify_cfg.attach(classify_cmd);

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Grade a labeled test set and report accuracy");
    std::string evaluate_model;
    std::string evaluate_labels;
    std::string evaluate_tsv;
    ConfigOptions evaluate_cfg;
    evaluate_cmd->add_option("--model", evaluate_model, "PKSM model file")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--labels", evaluate_labels, "filename<TAB>grade file")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--report", evaluate_tsv, "Machine-readable TSV report output");
    evaluate_cfg.attach(evaluate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*synth_cmd) {
            const auto spec = synth::DatasetSpec::from_totals(synth_train, synth_test, synth_seed, synth_size);
            const auto dataset = synth::generate_dataset(spec);
            synth::write_dataset(dataset, synth_out);
            std::cout << "wrote " << dataset.train.size() << " training and " << dataset.test.size()
                      << " test images to " << synth_out << "\n";
        } else if (*otsu_cmd) {
            const GrayImage img = load_gray(otsu_image);
            const std::size_t t = otsu::otsu_threshold(otsu::histogram(img));
            std::cout << t << "\n";
            if (!otsu_out.empty()) {
                save_pgm(otsu::binarize(img, t).to_gray(), otsu_out);
            }
        } else if (*spectrum_cmd) {
            const PipelineConfig cfg = spectrum_cfg.load();
            const GrayImage img = spectral::prepare_square(load_gray(spectrum_image_path), cfg.transform_size);
            const spectral::Spectrum spec = spectral::dft2(img);
            const spectral::AmplitudeMap amps = spectral::amplitude(spec);
            if (!spectrum_amp_out.empty()) {
                save_image(spectral::spectrum_image(amps), spectrum_amp_out);
            }
            if (!spectrum_phase_out.empty()) {
                save_image(spectral::phase_image(spectral::phase(spec)), spectrum_phase_out);
            }
            if (!spectrum_features_out.empty()) {
                write_file(spectrum_features_out,
                           spectral::encode_features(spectral::extract_features(amps, cfg.feature_side, cfg.include_dc)));
            }
            std::cout << "N=" << spec.n << " DC=" << std::setprecision(9) << spec.values[0].real() << "\n";
        } else if (*sp_cmd) {
            if (!sp_ts && !sp_l) {
                std::cerr << "sp: give --ts/--t and/or --l/--ls\n";
                return kExitUsage;
            }
            std::cout << std::fixed << std::setprecision(2);
            if (sp_ts) {
                std::cout << "SP_thickness = " << metrics::sp_thickness(*sp_ts, *sp_t) << " %\n";
            }
            if (sp_l) {
                std::cout << "SP_length = " << metrics::sp_length(*sp_l, *sp_ls) << " %\n";
            }
        } else if (*train_cmd) {
            const PipelineConfig cfg = train_cfg.load();
            const auto start = std::chrono::steady_clock::now();
            const auto trained = pipeline::run_train(cfg, train_labels, train_model);
            const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
            std::cout << "model: " << train_model << "\n"
                      << "map: " << trained.model.rows() << "x" << trained.model.cols() << ", dim "
                      << trained.model.dim() << ", iterations " << *trained.config.iterations << "\n"
                      << std::setprecision(6) << "quantization error: " << trained.error_before << " -> "
                      << trained.error_after << "\n"
                      << "took " << std::setprecision(3) << took.count() << " s\n";
        } else if (*classify_cmd) {
            const auto c = pipeline::run_classify(classify_model, classify_image, classify_cfg.load());
            print_classification(classify_image, c);
        } else if (*evaluate_cmd) {
            const auto report = pipeline::run_evaluate(evaluate_model, evaluate_labels, evaluate_cfg.load());
            std::cout << report.to_text();
            if (!evaluate_tsv.empty()) {
                std::ofstream out(evaluate_tsv, std::ios::trunc);
                out << report.to_tsv();
                if (!out) {
                    throw Error(ErrorCode::Io, "cannot write " + evaluate_tsv);
                }
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}

#include "puckergrade/error.hpp"
#include "puckergrade/model_io.hpp"
#include "puckergrade/pipeline.hpp"
#include "puckergrade/synth.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

namespace puckergrade::pipeline {
namespace {

std::vector<LabeledSample> samples_of(const std::vector<synth::LabeledImage>& items) {
    std::vector<LabeledSample> out;
    for (const auto& item : items) {
        out.push_back(LabeledSample{item.name, item.image, item.grade});
    }
    return out;
}

PipelineConfig small_config() {
    PipelineConfig cfg;
    cfg.transform_size = 32;
    cfg.feature_side = 16;
    cfg.som_rows = 4;
    cfg.som_cols = 4;
    return cfg;
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("puckergrade_pipeline_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

TEST(Pipeline, MissingGrade) {
    auto samples = samples_of(synth::generate_dataset(synth::DatasetSpec::from_totals(5, 0, 1, 32)).train);
    samples.erase(samples.begin() + 2);
    try {
        (void)train(small_config(), samples);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingGrade);
    }
    try {
        (void)train(small_config(), {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingGrade);
    }
}

TEST(Pipeline, TrainingImagesClassifyToTheirOwnGrade) {
    const auto samples = samples_of(synth::generate_dataset(synth::DatasetSpec::from_totals(5, 0, 42, 256)).train);
    const TrainedModel trained = train(PipelineConfig{}, samples);
    EXPECT_LE(trained.error_after, trained.error_before);
    EXPECT_TRUE(trained.model.fully_labeled());
    const LoadedModel loaded{trained.model, trained.config};
    for (const LabeledSample& s : samples) {
        EXPECT_EQ(classify(loaded, s.image).grade, s.grade) << s.name;
    }
    const EvaluationReport report = evaluate(loaded, samples);
    EXPECT_EQ(report.accuracy(), 100.0);
}

TEST(Pipeline, HeldOutImagesOfSeed42) {
    const auto ds = synth::generate_dataset(synth::DatasetSpec::from_totals(5, 21, 42, 256));
    const TrainedModel trained = train(PipelineConfig{}, samples_of(ds.train));
    const LoadedModel loaded{trained.model, trained.config};
    for (const auto& item : ds.test) {
        if (item.name == "g2_test_0.png" || item.name == "g3_test_0.png") {
            EXPECT_EQ(classify(loaded, item.image).grade, item.grade) << item.name;
        }
    }
}

TEST(Pipeline, ModelBytesAreDeterministic) {
    const auto samples = samples_of(synth::generate_dataset(synth::DatasetSpec::from_totals(5, 0, 9, 32)).train);
    EXPECT_EQ(model_bytes(train(small_config(), samples)), model_bytes(train(small_config(), samples)));
    PipelineConfig other = small_config();
    other.seed = 43;
    EXPECT_NE(model_bytes(train(small_config(), samples)), model_bytes(train(other, samples)));
}

TEST(Pipeline, EmbeddedConfigDrivesClassification) {
    const auto samples = samples_of(synth::generate_dataset(synth::DatasetSpec::from_totals(5, 0, 9, 32)).train);
    const TrainedModel trained = train(small_config(), samples);
    const som::ModelFile file = som::decode_model(model_bytes(trained));
    ASSERT_TRUE(file.config.has_value());
    // The fallback is ignored when the file carries its own config.
    const LoadedModel loaded = open_model(file, PipelineConfig{});
    EXPECT_EQ(loaded.config, trained.config);
}

TEST(Pipeline, LegacyModelUsesFallbackConfig) {
    const auto samples = samples_of(synth::generate_dataset(synth::DatasetSpec::from_totals(5, 0, 9, 32)).train);
    const TrainedModel trained = train(small_config(), samples);
    const auto v1 = som::encode_model(trained.model, std::nullopt);
    const LoadedModel loaded = open_model(som::decode_model(v1), small_config());
    EXPECT_EQ(classify(loaded, samples[0].image).grade, samples[0].grade);
    try {
        (void)open_model(som::decode_model(v1), PipelineConfig{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigMismatch);
    }
}

TEST(Pipeline, FilesRoundTripAndEvaluate) {
    const auto dir = fresh_dir("files");
    synth::write_dataset(synth::generate_dataset(synth::DatasetSpec::from_totals(5, 5, 4, 32)), dir);
    const auto model_path = dir / "model.pksm";
    const TrainedModel trained = run_train(small_config(), dir / "train.tsv", model_path);
    const auto bytes = read_file(model_path);
    EXPECT_EQ(bytes, model_bytes(trained));
    const som::ModelFile file = som::load_model(model_path);
    EXPECT_EQ(som::encode_model(file.model, file.config), bytes);

    const EvaluationReport report = run_evaluate(model_path, dir / "test.tsv", PipelineConfig{});
    EXPECT_EQ(report.total(), 5U);
    EXPECT_EQ(report.entries.size(), 5U);
    EXPECT_TRUE(std::is_sorted(report.entries.begin(), report.entries.end(),
                               [](const auto& a, const auto& b) { return a.name < b.name; }));
    EXPECT_DOUBLE_EQ(report.accuracy(), 100.0 * static_cast<double>(report.correct()) / 5.0);
    EXPECT_NE(report.to_text().find("accuracy: "), std::string::npos);
    const std::string tsv = report.to_tsv();
    EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 7);

    const som::Classification c = run_classify(model_path, dir / "g3_test_0.png", PipelineConfig{});
    EXPECT_EQ(c.grade, report.entries[2].predicted);
}

TEST(Pipeline, EvaluationIsOrderInvariant) {
    const auto ds = synth::generate_dataset(synth::DatasetSpec::from_totals(5, 10, 5, 32));
    const TrainedModel trained = train(small_config(), samples_of(ds.train));
    const LoadedModel loaded{trained.model, trained.config};
    auto test = samples_of(ds.test);
    const EvaluationReport a = evaluate(loaded, test);
    std::reverse(test.begin(), test.end());
    const EvaluationReport b = evaluate(loaded, test);
    EXPECT_EQ(a.confusion, b.confusion);
    EXPECT_EQ(a.to_tsv(), b.to_tsv());
    try {
        (void)evaluate(loaded, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyTrainingSet);
    }
}

TEST(Pipeline, ReportAccuracyFormatting) {
    EvaluationReport r;
    r.confusion[0][0] = 15;
    r.confusion[0][1] = 6;
    EXPECT_EQ(r.total(), 21U);
    EXPECT_EQ(r.correct(), 15U);
    EXPECT_NE(r.to_text().find("accuracy: 71.43% (15/21)"), std::string::npos);
}

TEST(Pipeline, FeaturesMatchBetweenTrainingAndClassification) {
    const GrayImage img = synth::generate_sample(Grade(2), 11, 64);
    PipelineConfig cfg = small_config();
    cfg.binarize = true;
    EXPECT_EQ(spectral::encode_features(extract(img, cfg)), spectral::encode_features(extract(img, cfg)));
    // Uniform images pass the binarize stage unchanged and then fail as degenerate features.
    EXPECT_THROW((void)extract(GrayImage(32, 32, 10), cfg), Error);
}

TEST(Pipeline, LabelFileParsing) {
    const auto dir = fresh_dir("labels");
    {
        std::ofstream out(dir / "ok.tsv");
        out << "# comment\n\na.png\t3\n/abs/b.png\t5\n";
    }
    const auto entries = read_labels(dir / "ok.tsv");
    ASSERT_EQ(entries.size(), 2U);
    EXPECT_EQ(entries[0].file, dir / "a.png");
    EXPECT_EQ(entries[0].grade, Grade(3));
    EXPECT_EQ(entries[1].file, std::filesystem::path("/abs/b.png"));
    {
        std::ofstream out(dir / "bad.tsv");
        out << "a.png 3\n";
    }
    EXPECT_THROW((void)read_labels(dir / "bad.tsv"), Error);
    {
        std::ofstream out(dir / "grade.tsv");
        out << "a.png\t7\n";
    }
    EXPECT_THROW((void)read_labels(dir / "grade.tsv"), Error);
    EXPECT_THROW((void)read_labels(dir / "missing.tsv"), Error);
}

} // namespace
} // namespace puckergrade::pipeline

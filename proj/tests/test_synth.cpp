#include "puckergrade/config.hpp"
#include "puckergrade/error.hpp"
#include "puckergrade/pipeline.hpp"
#include "puckergrade/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace puckergrade::synth {
namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

TEST(Synth, Deterministic) {
    EXPECT_EQ(generate_sample(Grade(2), 42, 64), generate_sample(Grade(2), 42, 64));
    EXPECT_NE(generate_sample(Grade(2), 42, 64), generate_sample(Grade(2), 43, 64));
}

TEST(Synth, FlatGradeIsNoiseOnly) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GrayImage img = generate_sample(Grade(5), seed, 128);
        EXPECT_LT(off_band_stddev(img), 2.0 * kNoiseSigma);
        const WrinkleField f = wrinkle_field(Grade(5), seed, 16);
        for (double h : f.height) {
            EXPECT_EQ(h, 0.0);
        }
    }
}

TEST(Synth, WorstGradeVariesMoreThanBest) {
    const GrayImage worst = generate_sample(Grade(1), 42, 256);
    const GrayImage best = generate_sample(Grade(5), 42, 256);
    EXPECT_GT(off_band_stddev(worst), off_band_stddev(best));
}

TEST(Synth, WrinkleParameters) {
    const WrinkleField f = wrinkle_field(Grade(1), 7, 64);
    ASSERT_EQ(f.params.size(), kComponents);
    for (std::size_t k = 0; k < kComponents; ++k) {
        const WrinkleComponent& c = f.params[k];
        EXPECT_LE(std::abs(c.orientation), kMaxOrientationDegrees * std::acos(-1.0) / 180.0);
        EXPECT_GT(c.frequency, 0.0);
        // Whole cycles along both axes.
        const double kx = c.frequency * std::cos(c.orientation);
        const double ky = c.frequency * std::sin(c.orientation);
        EXPECT_NEAR(kx, std::round(kx), 1e-9);
        EXPECT_NEAR(ky, std::round(ky), 1e-9);
        EXPECT_GT(c.amplitude, 0.0);
    }
    for (double h : f.height) {
        EXPECT_TRUE(std::isfinite(h));
    }
}

TEST(Synth, SlopeScaleIsLinearInGrade) {
    EXPECT_EQ(slope_scale(Grade(5)), 0.0);
    EXPECT_EQ(slope_scale(Grade(1)), kMaxSlope);
    EXPECT_DOUBLE_EQ(slope_scale(Grade(3)), kMaxSlope / 2.0);
}

TEST(Synth, SeamBandIsDarker) {
    const GrayImage img = generate_sample(Grade(5), 1, 128);
    const RowBand band = seam_band(128);
    EXPECT_EQ(band.last - band.first, 2U);
    double seam = 0.0;
    double rest = 0.0;
    for (std::size_t x = 0; x < 128; ++x) {
        seam += img.at(band.first, x);
        rest += img.at(10, x);
    }
    EXPECT_NEAR((rest - seam) / 128.0, kSeamDarkening, 1.0);
}

TEST(Synth, GradientDecreasesWithGrade) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        double prev = INFINITY;
        for (int g = Grade::kMin; g <= Grade::kMax; ++g) {
            const double v = mean_off_band_gradient(generate_sample(Grade(g), seed, 128));
            EXPECT_LT(v, prev) << "seed " << seed << " grade " << g;
            prev = v;
        }
    }
}

TEST(Synth, FromTotalsSpreadsRemainderToLowGrades) {
    const DatasetSpec spec = DatasetSpec::from_totals(5, 21, 42, 32);
    EXPECT_EQ(spec.train_per_grade, (std::array<std::size_t, 5>{1, 1, 1, 1, 1}));
    EXPECT_EQ(spec.test_per_grade, (std::array<std::size_t, 5>{5, 4, 4, 4, 4}));
}

TEST(Synth, DatasetNamesAndDisjointSeeds) {
    const Dataset ds = generate_dataset(DatasetSpec::from_totals(5, 21, 42, 16));
    ASSERT_EQ(ds.train.size(), 5U);
    ASSERT_EQ(ds.test.size(), 21U);
    for (int g = 1; g <= 5; ++g) {
        EXPECT_EQ(ds.train[static_cast<std::size_t>(g - 1)].grade, Grade(g));
        EXPECT_EQ(ds.train[static_cast<std::size_t>(g - 1)].name, "g" + std::to_string(g) + "_train_0.png");
    }
    EXPECT_EQ(ds.test[0].name, "g1_test_0.png");
    std::set<std::uint64_t> seeds;
    for (int g = 1; g <= 5; ++g) {
        for (std::size_t i = 0; i < 5; ++i) {
            seeds.insert(sample_seed(42, Role::Train, Grade(g), i));
            seeds.insert(sample_seed(42, Role::Test, Grade(g), i));
        }
    }
    EXPECT_EQ(seeds.size(), 50U);
}

TEST(Synth, OneTrainPerGrade) {
    DatasetSpec spec;
    spec.train_per_grade = {1, 1, 1, 1, 1};
    spec.size = 8;
    const Dataset ds = generate_dataset(spec);
    EXPECT_EQ(ds.train.size(), 5U);
    EXPECT_TRUE(ds.test.empty());
}

TEST(Synth, WrittenDatasetIsByteReproducible) {
    const auto base = std::filesystem::temp_directory_path() / "puckergrade_synth_test";
    std::filesystem::remove_all(base);
    const Dataset ds = generate_dataset(DatasetSpec::from_totals(5, 6, 3, 16));
    write_dataset(ds, base / "a");
    write_dataset(generate_dataset(DatasetSpec::from_totals(5, 6, 3, 16)), base / "b");
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(base / "a")) {
        EXPECT_EQ(slurp(entry.path()), slurp(base / "b" / entry.path().filename()));
        ++files;
    }
    EXPECT_EQ(files, 11U + 3U);
    EXPECT_EQ(pipeline::read_labels(base / "a" / "labels.tsv").size(), 11U);
    EXPECT_EQ(pipeline::read_labels(base / "a" / "train.tsv").size(), 5U);
    EXPECT_EQ(pipeline::read_labels(base / "a" / "test.tsv").size(), 6U);
    const GrayImage back = load_gray(base / "a" / ds.test[0].name);
    EXPECT_EQ(back, ds.test[0].image);
}

TEST(Synth, TooSmallRejected) {
    EXPECT_THROW((void)generate_sample(Grade(1), 1, 3), Error);
}

TEST(Synth, WorstAndBestAreFurtherApartThanNeighbours) {
    // Mean feature vectors over a seed-42 batch.
    const PipelineConfig cfg;
    auto mean_features = [&](int grade) {
        std::vector<double> mean(cfg.feature_dim(), 0.0);
        for (std::size_t i = 0; i < 4; ++i) {
            const GrayImage img = generate_sample(Grade(grade), sample_seed(42, Role::Train, Grade(grade), i), 256);
            const auto fv = pipeline::extract(img, cfg);
            for (std::size_t j = 0; j < mean.size(); ++j) {
                mean[j] += fv.data[j] / 4.0;
            }
        }
        return mean;
    };
    const auto g1 = mean_features(1);
    const auto g4 = mean_features(4);
    const auto g5 = mean_features(5);
    double d15 = 0.0;
    double d45 = 0.0;
    for (std::size_t j = 0; j < g1.size(); ++j) {
        d15 += (g1[j] - g5[j]) * (g1[j] - g5[j]);
        d45 += (g4[j] - g5[j]) * (g4[j] - g5[j]);
    }
    EXPECT_GT(d15, d45);
}

} // namespace
} // namespace puckergrade::synth

#include "puckergrade/config.hpp"
#include "puckergrade/error.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

namespace puckergrade {
namespace {

ErrorCode parse_error(std::string_view text) {
    try {
        (void)PipelineConfig::parse(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error for: " << text;
    return ErrorCode::Io;
}

TEST(Config, DefaultsRoundTripThroughText) {
    const PipelineConfig cfg;
    EXPECT_EQ(PipelineConfig::parse(cfg.to_text()), cfg);
    EXPECT_EQ(PipelineConfig::parse(""), cfg);
}

TEST(Config, EveryKeyRoundTrips) {
    PipelineConfig cfg;
    cfg.transform_size = 128;
    cfg.feature_side = 64;
    cfg.include_dc = true;
    cfg.binarize = true;
    cfg.som_rows = 7;
    cfg.som_cols = 3;
    cfg.alpha0 = 0.1 + 0.2;
    cfg.d0 = 2.75;
    cfg.iterations = 1234;
    cfg.classify_mode = som::ClassifyMode::DotProduct;
    cfg.seed = 18446744073709551615ULL;
    const PipelineConfig back = PipelineConfig::parse(cfg.to_text());
    EXPECT_EQ(back, cfg);
    EXPECT_EQ(back.to_text(), cfg.to_text());
}

TEST(Config, CommentsAndWhitespace) {
    const PipelineConfig cfg = PipelineConfig::parse("# grading setup\n\n  som_rows =  4   # small map\r\nseed=9\n");
    EXPECT_EQ(cfg.som_rows, 4U);
    EXPECT_EQ(cfg.seed, 9U);
    EXPECT_EQ(cfg.som_cols, 10U);
}

TEST(Config, Rejections) {
    EXPECT_EQ(parse_error("colour = blue"), ErrorCode::InvalidConfig);
    EXPECT_EQ(parse_error("som_rows"), ErrorCode::InvalidConfig);
    EXPECT_EQ(parse_error("som_rows = ten"), ErrorCode::InvalidConfig);
    EXPECT_EQ(parse_error("alpha0 = 0"), ErrorCode::InvalidConfig);
    EXPECT_EQ(parse_error("alpha0 = 1.5"), ErrorCode::InvalidConfig);
    EXPECT_EQ(parse_error("feature_side = 300"), ErrorCode::InvalidConfig);
    EXPECT_EQ(parse_error("include_dc = maybe"), ErrorCode::InvalidConfig);
    EXPECT_EQ(parse_error("classify_mode = vote"), ErrorCode::InvalidConfig);
    EXPECT_EQ(parse_error("d0 = -1"), ErrorCode::InvalidConfig);
    EXPECT_EQ(parse_error("iterations = 0"), ErrorCode::InvalidConfig);
}

TEST(Config, ResolvedFillsScheduleDefaults) {
    const PipelineConfig cfg;
    const PipelineConfig r = cfg.resolved(5);
    EXPECT_EQ(r.d0, 4.0);
    EXPECT_EQ(r.iterations, 1000U);
    const som::TrainingSchedule s = cfg.schedule(5);
    EXPECT_EQ(s.alpha0, 0.35);
    EXPECT_EQ(s.d0, 4.0);
    EXPECT_EQ(s.iterations, 1000U);

    PipelineConfig custom;
    custom.d0 = 1.5;
    custom.iterations = 77;
    EXPECT_EQ(custom.resolved(5).d0, 1.5);
    EXPECT_EQ(custom.resolved(5).iterations, 77U);
}

TEST(Config, ClassifyModeNames) {
    EXPECT_EQ(to_string(som::ClassifyMode::BmuDistance), "bmu-distance");
    EXPECT_EQ(to_string(som::ClassifyMode::DotProduct), "dot-product");
    EXPECT_EQ(parse_classify_mode("dot-product"), som::ClassifyMode::DotProduct);
    EXPECT_EQ(parse_classify_mode("bmu-distance"), som::ClassifyMode::BmuDistance);
}

TEST(Config, SeedFromEnvironment) {
    PipelineConfig cfg;
    ::setenv("PUCKERGRADE_SEED", "1234", 1);
    apply_environment(cfg);
    EXPECT_EQ(cfg.seed, 1234U);
    ::setenv("PUCKERGRADE_SEED", "abc", 1);
    EXPECT_THROW(apply_environment(cfg), Error);
    ::unsetenv("PUCKERGRADE_SEED");
    cfg.seed = 5;
    apply_environment(cfg);
    EXPECT_EQ(cfg.seed, 5U);
}

} // namespace
} // namespace puckergrade

#include "qdba/cost_model.hpp"

#include "gtest/gtest.h"

#include "test_support.hpp"

using namespace qdba;
namespace qt = qdba::testing;

TEST(CostModel, ClosedForms)
{
    for (int m = 2; m <= 12; ++m) EXPECT_DOUBLE_EQ(p_success({Scheme::SingleQudit, m, 0.8}), 0.8);
    EXPECT_NEAR(p_success({Scheme::QkdLists, 4, 0.8}), 0.4096, 1e-12);
    EXPECT_NEAR(p_success({Scheme::EntangledState, 3, 0.8}), 0.4096, 1e-12);
    EXPECT_NEAR(p_success({Scheme::QkdLists, 8, 0.9}), std::pow(0.9, 9), 1e-12);
    EXPECT_THROW(p_success({Scheme::EntangledState, 2, 0.8}), ConfigError);
    EXPECT_THROW(p_success({Scheme::SingleQudit, 3, 1.2}), ConfigError);
}

TEST(CostModel, DetectionAccounting)
{
    EXPECT_EQ(ceil_log2(2), 1);
    EXPECT_EQ(ceil_log2(3), 2);
    EXPECT_EQ(ceil_log2(4), 2);
    EXPECT_EQ(ceil_log2(5), 3);
    const auto qkd = detection_budget(Scheme::QkdLists, 5);
    ASSERT_EQ(qkd.size(), 4u); // one m-ary channel to P1 plus m-2 bit channels
    EXPECT_EQ(qkd[0].detections, 3);
    EXPECT_EQ(detections_per_element(Scheme::QkdLists, 5), 5 - 2 + 3);
    EXPECT_EQ(detections_per_element(Scheme::EntangledState, 5), 4 * 3);
    EXPECT_EQ(detections_per_element(Scheme::SingleQudit, 9), 1);
}

TEST(CostModel, MonteCarlo)
{
    Rng rng(12);
    EXPECT_DOUBLE_EQ(monte_carlo_efficiency(Scheme::SingleQudit, 4, 1.0, 500, rng).rate(), 1.0);
    const std::size_t n = 20000;
    const auto est = monte_carlo_efficiency(Scheme::QkdLists, 4, 0.8, n, rng);
    EXPECT_NEAR(est.rate(), 0.4096, 3 * qt::binomial_sigma(0.4096, n));
    const auto sq = monte_carlo_efficiency(Scheme::SingleQudit, 3, 0.7, n, rng);
    EXPECT_NEAR(sq.rate(), 0.7, 3 * qt::binomial_sigma(0.7, n));
    EXPECT_THROW(monte_carlo_efficiency(Scheme::QkdLists, 4, 0.8, 0, rng), ConfigError);
}

TEST(CostModel, QkdRatesNonincreasingInM)
{
    double prev = 1.0;
    for (int m = 2; m <= 16; ++m) {
        const double p = p_success({Scheme::QkdLists, m, 0.9});
        EXPECT_LE(p, prev);
        prev = p;
    }
}

TEST(CostModel, ListTypes)
{
    EXPECT_EQ(list_type_count(3).correlated_lists, 4u);
    EXPECT_EQ(list_type_count(3).permutation_lists, 6u);
    EXPECT_EQ(list_type_count(2).correlated_lists, 2u);
    EXPECT_EQ(list_type_count(4).correlated_lists, 8u);
    EXPECT_EQ(list_type_count(4).permutation_lists, 24u);
    EXPECT_THROW(list_type_count(1), ConfigError);
}

TEST(CostModel, ParallelTrialsKeepOrder)
{
    const auto out = parallel_trials(100, [](std::size_t i) { return static_cast<int>(i * i); }, 4);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
}

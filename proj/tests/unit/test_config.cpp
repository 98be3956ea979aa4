// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "support/temp_dir.hpp"
#include "winnbeta/config.hpp"
#include "winnbeta/errors.hpp"

using namespace winnbeta;

TEST_CASE("defaults") {
    const RunConfig c;
    CHECK(c.alpha == 0.05);
    CHECK(c.variance_test == VarianceTest::Fligner);
    CHECK_FALSE(c.lags.has_value());
    CHECK(c.max_df == 15);
    CHECK(c.min_batch_size == 20);
    CHECK(c.missing_policy == MissingPolicy::Fail);
    CHECK(c.outlier_sigma == 3.0);
    CHECK_FALSE(c.compat_literal_zm);
}

TEST_CASE("config round-trips through its text form") {
    RunConfig c;
    CHECK(parse_config(to_text(c)) == c);

    c.alpha = 0.01;
    c.variance_test = VarianceTest::LeveneMean;
    c.lags = 7;
    c.max_df = 9;
    c.min_batch_size = 30;
    c.missing_policy = MissingPolicy::PlateMeanImpute;
    c.outlier_sigma = std::numeric_limits<double>::infinity();
    c.workers = 4;
    c.seed = 18446744073709551615ULL;
    c.compat_literal_zm = true;
    c.study_wn_gate = false;
    c.always_phase3 = false;
    CHECK(parse_config(to_text(c)) == c);
}

TEST_CASE("config parsing") {
    const auto c = parse_config("# comment\nalpha = 0.1  # trailing\n\nvariance_test = LEVENE_MEDIAN\nlags=auto\n");
    CHECK(c.alpha == 0.1);
    CHECK(c.variance_test == VarianceTest::LeveneMedian);
    CHECK_THROWS_AS((void)parse_config("alpah = 0.1\n"), ParameterError);
    CHECK_THROWS_AS((void)parse_config("alpha = 1.5\n"), ParameterError);
    CHECK_THROWS_AS((void)parse_config("max_df = many\n"), ParameterError);
    CHECK_THROWS_AS((void)parse_config("just a line\n"), ParameterError);

    testing::TempDir dir;
    const auto path = dir.write("run.cfg", "max_df = 6\n");
    RunConfig base;
    base.alpha = 0.2;
    const auto loaded = load_config(path, base);
    CHECK(loaded.max_df == 6);
    CHECK(loaded.alpha == 0.2);
}

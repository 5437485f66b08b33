#include <doctest.h>

#include <random>

#include "hybridcast/baselines.hpp"
#include "hybridcast/error.hpp"
#include "hybridcast/evaluation.hpp"
#include "hybridcast/granger.hpp"

using namespace hybridcast;

TEST_CASE("AR(1) coefficient is recovered") {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> n;
    std::vector<double> y{0.0};
    for (int t = 1; t < 300; ++t) y.push_back(0.8 * y.back() + n(gen));
    const ArModel m = ar_fit(y, 8, 0, InformationCriterion::aic);
    CHECK(m.p >= 1);
    CHECK(m.p <= 3);
    CHECK(m.coefficients(1) == doctest::Approx(0.8).epsilon(0.125));  // within 0.1
    CHECK(std::abs(m.coefficients(1) - 0.8) < 0.1);
    CHECK(m.sample == 300 - 8);
    CHECK(m.aic.size() == 8);
}

TEST_CASE("AR order is the criterion argmin over a common window") {
    std::mt19937_64 gen(18);
    std::normal_distribution<double> n;
    std::vector<double> y{0.0, 0.0};
    for (int t = 2; t < 200; ++t) y.push_back(0.5 * y[y.size() - 1] - 0.3 * y[y.size() - 2] + n(gen));
    for (auto crit : {InformationCriterion::aic, InformationCriterion::sc}) {
        const ArModel m = ar_fit(y, 6, 0, crit);
        const auto& scores = crit == InformationCriterion::aic ? m.aic : m.sc;
        const auto best = std::min_element(scores.begin(), scores.end()) - scores.begin();
        CHECK(m.p == best + 1);
    }
}

TEST_CASE("AR on white noise forecasts near the mean") {
    std::mt19937_64 gen(19);
    std::normal_distribution<double> n(5.0, 1.0);
    std::vector<double> y;
    for (int t = 0; t < 400; ++t) y.push_back(n(gen));
    const ArModel m = ar_fit(y, 4, 0, InformationCriterion::sc);
    for (Eigen::Index l = 1; l < m.coefficients.size(); ++l) CHECK(std::abs(m.coefficients(l)) < 0.15);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    CHECK(ar_forecast(m, y, 20).back() == doctest::Approx(mean).epsilon(0.05));
}

TEST_CASE("AR with d = 1 continues a linear trend") {
    std::vector<double> y;
    for (int t = 0; t < 40; ++t) y.push_back(3.0 + 0.5 * t + (t % 2 == 0 ? 1e-9 : -1e-9));
    const ArModel m = ar_fit(y, 3, 1);
    const auto f = ar_forecast(m, y, 3);
    CHECK(f[0] == doctest::Approx(3.0 + 0.5 * 40).epsilon(1e-6));
    CHECK(f[2] == doctest::Approx(3.0 + 0.5 * 42).epsilon(1e-6));
}

TEST_CASE("ar_forecast by hand") {
    ArModel zero;
    zero.d = 0;
    zero.p = 2;
    zero.coefficients = Vector{{1.5, 0.0, 0.0}};
    CHECK(ar_forecast(zero, std::vector<double>{9, 9, 9}, 3) == std::vector<double>{1.5, 1.5, 1.5});

    ArModel walk;
    walk.d = 1;
    walk.p = 1;
    walk.coefficients = Vector{{0.0, 0.0}};
    const std::vector<double> history{50.0, 52.0, 57.3};
    CHECK(ar_forecast(walk, history, 3) == naive_forecast(history, 3));

    ArModel one;
    one.d = 0;
    one.p = 1;
    one.coefficients = Vector{{1.0, 0.5}};
    const auto f = ar_forecast(one, std::vector<double>{4.0}, 3);
    CHECK(f[0] == doctest::Approx(3.0));
    CHECK(f[1] == doctest::Approx(2.5));
    CHECK(f[2] == doctest::Approx(2.25));

    CHECK_THROWS_AS(ar_forecast(one, std::vector<double>{}, 1), ValidationError);
    CHECK_THROWS_AS(ar_fit(std::vector<double>{1, 2, 3, 4}, 3, 1), ValidationError);
}

TEST_CASE("naive forecast") {
    CHECK(naive_forecast(std::vector<double>{1.0, 57.3}, 3) == std::vector<double>{57.3, 57.3, 57.3});
    CHECK(naive_forecast(std::vector<double>{1.0}, 0).empty());
    CHECK_THROWS_AS(naive_forecast(std::vector<double>{}, 1), ValidationError);
    const std::vector<double> actual{1, 2, 3, 4};
    std::vector<double> forecast{1};
    for (std::size_t t = 1; t < actual.size(); ++t) forecast.push_back(actual[t - 1]);
    CHECK(da(actual, forecast) == 100.0);
}

TEST_CASE("univariate lag features") {
    const LagPairs p = univariate_lag_features(std::vector<double>{1, 2, 3, 4}, 2);
    REQUIRE(p.inputs.rows() == 2);
    CHECK(p.inputs(0, 0) == 2.0);
    CHECK(p.inputs(0, 1) == 1.0);
    CHECK(p.targets(0) == 3.0);
    CHECK(p.inputs(1, 0) == 3.0);
    CHECK(p.targets(1) == 4.0);
    CHECK(univariate_lag_features(std::vector<double>{1, 2, 3, 4, 5}, 4).inputs.rows() == 1);
    for (int lags = 1; lags < 9; ++lags)
        CHECK(univariate_lag_features(std::vector<double>(10, 1.0), lags).targets.size() == 10 - lags);
    CHECK_THROWS_AS(univariate_lag_features(std::vector<double>{1, 2}, 2), ValidationError);
    CHECK(latest_lags(std::vector<double>{1, 2, 3}, 2) == Vector{{3.0, 2.0}});
}

TEST_CASE("Granger test: planted driver, noise and a redundant candidate") {
    std::mt19937_64 gen(23);
    std::normal_distribution<double> n;
    const int T = 150;
    std::vector<double> x(T), y(T, 0.0);
    for (auto& v : x) v = n(gen);
    for (int t = 1; t < T; ++t) y[t] = 0.9 * x[t - 1] + 0.1 * n(gen);
    const GrangerResult driver = granger_test(y, x, 3, 0.1);
    CHECK(driver.status == GrangerResult::Status::retained);
    CHECK(driver.p_value < 0.01);
    CHECK(driver.df_num == 3);
    CHECK(driver.df_den == T - 3 - 2 * 3 - 1);

    // F statistic against a direct computation from the two SSEs
    const double f = ((driver.sse_restricted - driver.sse_unrestricted) / 3) / (driver.sse_unrestricted / driver.df_den);
    CHECK(driver.f_statistic == doctest::Approx(f).epsilon(1e-12));

    const GrangerResult self = granger_test(y, y, 2, 0.1);
    CHECK(self.status != GrangerResult::Status::retained);
    CHECK(self.f_statistic == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(self.sse_restricted == doctest::Approx(self.sse_unrestricted).epsilon(1e-9));

    int retained = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> noise(T), target(T);
        for (auto& v : noise) v = n(gen);
        for (auto& v : target) v = n(gen);
        retained += granger_test(target, noise, 3, 0.1).status == GrangerResult::Status::retained;
    }
    CHECK(retained <= 30);

    CHECK_THROWS_AS(granger_test(std::vector<double>(7, 1.0), std::vector<double>(7, 1.0), 3), ValidationError);
    CHECK_THROWS_AS(granger_test(y, x, 0), ValidationError);
}

TEST_CASE("Granger filter over a panel") {
    std::mt19937_64 gen(29);
    std::normal_distribution<double> n;
    Panel p;
    Series driver{"driver", Provenance::gsvi, {}}, noise{"noise", Provenance::gsvi, {}}, target{"y", Provenance::target, {}};
    double prev = 0.0;
    for (int t = 0; t < 120; ++t) {
        p.dates.push_back(YearMonth{2005, 1}.plus(t));
        driver.values.push_back(n(gen));
        noise.values.push_back(n(gen));
        target.values.push_back(t == 0 ? 0.0 : 0.9 * prev + 0.1 * n(gen));
        prev = driver.values.back();
    }
    p.columns = {driver, noise, target};
    const std::vector<std::string> candidates{"driver", "noise"};
    const GrangerFilter f = granger_filter(p, candidates, {});
    REQUIRE(f.results.size() == 2);
    CHECK(f.results[0].name == "driver");
    CHECK(std::find(f.retained.begin(), f.retained.end(), "driver") != f.retained.end());
    CHECK_THROWS_AS(granger_filter(p, std::vector<std::string>{"missing"}, {}), ValidationError);
}

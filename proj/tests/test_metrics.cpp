#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "rdtk/metrics.hpp"

using namespace rdtk;
using Catch::Matchers::WithinAbs;

TEST_CASE("identical histograms have zero error") {
    RealHistogram a(8);
    a[1] = 3.0;
    a[8] = 2.0;
    a.cold() = 5.0;
    CHECK(histogram_error(a, a) == 0.0);
}

TEST_CASE("histogram error sums absolute differences over the truth mass") {
    RealHistogram model(8), truth(8);
    truth[1] = 4.0;
    truth[2] = 4.0;
    truth.cold() = 2.0; // total 10
    model[1] = 3.0;     // off by 1
    model[2] = 5.0;     // off by 1
    model.cold() = 2.0;
    CHECK_THAT(histogram_error(model, truth), WithinAbs(0.2, 1e-12));
}

TEST_CASE("cold counters count as one extra bin") {
    RealHistogram model(8), truth(8);
    truth[1] = 5.0;
    model[1] = 5.0;
    model.cold() = 2.0;
    CHECK_THAT(histogram_error(model, truth), WithinAbs(0.4, 1e-12));
}

TEST_CASE("count-histogram overload and cutoff mismatch") {
    CountHistogram truth(8);
    truth.add(1, 5);
    RealHistogram model(8);
    model[1] = 5.0;
    CHECK(histogram_error(model, truth) == 0.0);

    RealHistogram other(16);
    CHECK_THROWS_AS(histogram_error(other, truth), IntegrityError);
}

TEST_CASE("empty truth histograms") {
    RealHistogram model(8), truth(8);
    CHECK(histogram_error(model, truth) == 0.0);
    model[3] = 1.0;
    CHECK(std::isinf(histogram_error(model, truth)));
}

TEST_CASE("comparison report carries both rates and their gap") {
    RealHistogram model(8);
    CountHistogram truth(8);
    model[2] = 1.0;
    truth.add(2);
    const auto rep = compare_prediction(model, truth, 0.25, 0.30);
    CHECK(rep.histogram_error == 0.0);
    CHECK_THAT(rep.miss_rate_error, WithinAbs(0.05, 1e-12));
    CHECK(rep.model_miss_rate == 0.25);
    CHECK(rep.oracle_miss_rate == 0.30);
}

TEST_CASE("sweep error summary averages absolute errors") {
    const auto s = miss_rate_errors({{0.10, 0.12}, {0.50, 0.45}, {0.30, 0.30}});
    REQUIRE(s.per_config.size() == 3);
    CHECK_THAT(s.per_config[0], WithinAbs(0.02, 1e-12));
    CHECK_THAT(s.per_config[1], WithinAbs(0.05, 1e-12));
    CHECK_THAT(s.per_config[2], WithinAbs(0.0, 1e-12));
    CHECK_THAT(s.mean, WithinAbs(0.07 / 3.0, 1e-12));

    CHECK(miss_rate_errors({}).mean == 0.0);
}

TEST_CASE("histogram CSV layout") {
    RealHistogram model(2), truth(2);
    model[0] = 1.5;
    truth[1] = 2.0;
    model.cold() = 3.0;
    std::ostringstream os;
    write_histogram_csv(os, model, truth);
    CHECK(os.str() == "bin,model,truth\n"
                      "0,1.5,0\n"
                      "1,0,2\n"
                      "2,0,0\n"
                      "cold,3,0\n");
}

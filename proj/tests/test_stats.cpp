#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tpi/random.hpp"
#include "tpi/stats.hpp"

using namespace tpi;

TEST_CASE("erf reference values") {
    // reference: scipy.special.erf / erfc
    CHECK(tpi::erf(0.125) == Catch::Approx(0.14031620480133383).epsilon(1e-14));
    CHECK(tpi::erf(0.5) == Catch::Approx(0.5204998778130465).epsilon(1e-14));
    CHECK(tpi::erf(1.0) == Catch::Approx(0.8427007929497148).epsilon(1e-14));
    CHECK(tpi::erf(2.5) == Catch::Approx(0.999593047982555).epsilon(1e-14));
    CHECK(tpi::erf(4.0) == Catch::Approx(0.9999999845827421).epsilon(1e-14));
    CHECK(tpi::erf(-1.5) == Catch::Approx(-0.9661051464753108).epsilon(1e-14));
    CHECK(tpi::erfc(1.0) == Catch::Approx(0.15729920705028516).epsilon(1e-13));
    CHECK(tpi::erfc(2.0) == Catch::Approx(0.004677734981047266).epsilon(1e-13));
    CHECK(tpi::erfc(5.0) == Catch::Approx(1.5374597944280347e-12).epsilon(1e-12));
    CHECK(tpi::erfc(10.0) == Catch::Approx(2.0884875837625446e-45).epsilon(1e-12));
}

TEST_CASE("normal cdf") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_cdf(1.959964) == Catch::Approx(0.975).margin(1e-6));
    CHECK(normal_cdf(1.0) == Catch::Approx(0.8413447460685429).margin(1e-13));
    CHECK(normal_cdf(-3.0) == Catch::Approx(0.0013498980316300933).margin(1e-14));

    SECTION("symmetry identity") {
        RandomStream s = derive_stream({3, "cdfsym", 0});
        for (int i = 0; i < 100; ++i) {
            const double x = s.next_gaussian(2.0);
            CHECK(std::fabs(normal_cdf(-x) - (1.0 - normal_cdf(x))) < 1e-12);
        }
    }
    SECTION("nondecreasing on a grid") {
        double prev = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double x = -8.0 + 16.0 * i / 9999.0;
            const double c = normal_cdf(x);
            if (i > 0) CHECK(c >= prev);
            prev = c;
        }
    }
}

TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.975) == Catch::Approx(1.959963984540054).margin(1e-5));
    CHECK(normal_quantile(0.995) == Catch::Approx(2.5758293035489004).margin(1e-9));
    CHECK(normal_quantile(1e-6) == Catch::Approx(-4.753424308822899).margin(1e-9));
    CHECK_THROWS_AS(normal_quantile(0.0), invalid_parameter_error);
    CHECK_THROWS_AS(normal_quantile(1.0), invalid_parameter_error);
    CHECK_THROWS_AS(normal_quantile(-0.2), invalid_parameter_error);

    SECTION("round trip through the cdf") {
        const std::vector<double> ps = {1e-6, 1e-4, 0.01, 0.1, 0.3, 0.5,
                                        0.7,  0.9,  0.99, 1 - 1e-4, 1 - 1e-6};
        for (double p : ps)
            CHECK(std::fabs(normal_cdf(normal_quantile(p)) - p) <= 1e-10);
    }
}

TEST_CASE("ks distance") {
    auto uniform_cdf = [](double x) { return x < 0 ? 0.0 : (x > 1 ? 1.0 : x); };

    CHECK_THROWS_AS(ks_distance({}, uniform_cdf), invalid_parameter_error);

    std::vector<double> one = {0.5};
    CHECK(ks_distance(one, uniform_cdf) == Catch::Approx(0.5));

    std::vector<double> two = {0.25, 0.75};
    CHECK(ks_distance(two, uniform_cdf) == Catch::Approx(0.25));

    SECTION("permutation invariance") {
        std::vector<double> a = {0.9, 0.1, 0.4, 0.2, 0.7};
        std::vector<double> b = {0.1, 0.2, 0.4, 0.7, 0.9};
        CHECK(ks_distance(a, uniform_cdf) == ks_distance(b, uniform_cdf));
    }
    SECTION("seeded gaussian sample passes the 1% critical value") {
        RandomStream s = derive_stream({77, "ks", 0});
        auto x = gaussian(s, 10000, 1.0);
        CHECK(ks_distance(x, [](double t) { return normal_cdf(t); }) < 0.0163);
    }
}

TEST_CASE("empirical coverage") {
    std::vector<Interval> iv = {{0, 1, 0.95}, {2, 3, 0.95}, {4, 5, 0.95}, {6, 7, 0.95}};
    std::vector<double> all = {0.5, 2.5, 4.5, 6.5};
    std::vector<double> none = {1.5, 3.5, 5.5, 7.5};
    std::vector<double> half = {0.5, 2.5, 5.5, 7.5};
    CHECK(empirical_coverage(iv, all) == 1.0);
    CHECK(empirical_coverage(iv, none) == 0.0);
    CHECK(empirical_coverage(iv, half) == 0.5);
    std::vector<double> bad = {1.0};
    CHECK_THROWS_AS(empirical_coverage(iv, bad), invalid_parameter_error);
}

TEST_CASE("histogram") {
    SECTION("single sample single bin") {
        std::vector<double> s = {0.5};
        std::vector<double> e = {0.0, 1.0};
        auto h = histogram(s, e);
        REQUIRE(h.counts.size() == 1);
        CHECK(h.counts[0] == 1);
        CHECK(h.total == 1);
    }
    SECTION("empty samples give zero counts") {
        std::vector<double> e = {0.0, 1.0, 2.0};
        auto h = histogram({}, e);
        CHECK(h.counts == std::vector<std::int64_t>{0, 0});
        CHECK(h.total == 0);
    }
    SECTION("unsorted edges rejected") {
        std::vector<double> s = {0.5};
        std::vector<double> bad = {1.0, 0.0};
        CHECK_THROWS_AS(histogram(s, bad), invalid_parameter_error);
    }
    SECTION("half-open bins and overflow bookkeeping") {
        std::vector<double> s = {-1.0, 0.0, 1.0, 2.0, 2.5};
        std::vector<double> e = {0.0, 1.0, 2.0};
        auto h = histogram(s, e);
        CHECK(h.counts == std::vector<std::int64_t>{1, 1});
        CHECK(h.underflow == 1);
        CHECK(h.overflow == 2);
        CHECK(h.total == 2);
    }
    SECTION("gaussian bin masses within multinomial bounds") {
        RandomStream st = derive_stream({31, "hist", 0});
        auto x = gaussian(st, 100000, 1.0);
        std::vector<double> edges(41);
        for (int i = 0; i <= 40; ++i) edges[static_cast<std::size_t>(i)] = -4.0 + 8.0 * i / 40.0;
        auto h = histogram(x, edges);
        for (int b = 0; b < 40; ++b) {
            const double p = normal_cdf(edges[static_cast<std::size_t>(b) + 1]) -
                             normal_cdf(edges[static_cast<std::size_t>(b)]);
            const double expect = 100000.0 * p;
            const double sd = std::sqrt(100000.0 * p * (1.0 - p));
            CHECK(std::fabs(static_cast<double>(h.counts[static_cast<std::size_t>(b)]) - expect) <=
                  3.0 * sd + 1.0);
        }
    }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "tracegen/distributions.hpp"
#include "tracegen/errors.hpp"

using namespace tracegen;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Spec with explicit edges for sampler tests.
IrdSpec with_edges(std::vector<double> probs, double p_inf, std::vector<std::uint64_t> edges) {
    return IrdSpec::from_parts(StepwiseSource{probs, p_inf}, std::move(probs), p_inf, std::move(edges));
}

}  // namespace

TEST_CASE("fgen assigns spike and hole mass") {
    SUBCASE("two spikes out of 20") {
        const auto f = fgen(20, {0, 3}, 5e-3);
        REQUIRE(f.k() == 20);
        CHECK(f.bin_probs()[0] == doctest::Approx(0.4975).epsilon(1e-12));
        CHECK(f.bin_probs()[3] == doctest::Approx(0.4975).epsilon(1e-12));
        for (std::size_t j : {1, 2, 4, 10, 19})
            CHECK(f.bin_probs()[j] == doctest::Approx(2.7777777777777778e-4).epsilon(1e-12));
        CHECK(f.p_infinite() == 0.0);
        CHECK_FALSE(f.has_sample_space());
        CHECK(f.t_max() == 0);
    }
    SUBCASE("single spike out of 5") {
        const auto f = fgen(5, {2}, 5e-3);
        const std::vector<double> expected{1.25e-3, 1.25e-3, 0.995, 1.25e-3, 1.25e-3};
        for (std::size_t j = 0; j < 5; ++j) CHECK(f.bin_probs()[j] == doctest::Approx(expected[j]).epsilon(1e-12));
    }
    SUBCASE("every bin a spike") {
        const auto f = fgen(3, {0, 1, 2}, 0.0);
        for (double p : f.bin_probs()) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
    SUBCASE("spike order does not matter") { CHECK(fgen(10, {7, 2}, 0.1) == fgen(10, {2, 7}, 0.1)); }
}

TEST_CASE("fgen rejects bad parameters") {
    CHECK_THROWS_AS(fgen(10, {}, 0.1), ValidationError);
    CHECK_THROWS_AS(fgen(10, {1}, 1.0), ValidationError);
    CHECK_THROWS_AS(fgen(10, {1}, -0.1), ValidationError);
    CHECK_THROWS_AS(fgen(10, {1, 1}, 0.1), ValidationError);
    CHECK_THROWS_AS(fgen(10, {10}, 0.1), ValidationError);
    CHECK_THROWS_AS(fgen(0, {0}, 0.1), ValidationError);
    CHECK_THROWS_AS(fgen(3, {0, 1, 2}, 0.1), ValidationError);
}

TEST_CASE("property: fgen takes exactly two values and sums to 1") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = rng.uniform_int(2, 120);
        const std::size_t count = rng.uniform_int(1, k - 1);
        std::set<std::size_t> picked;
        while (picked.size() < count) picked.insert(rng.uniform_int(0, k - 1));
        const double eps = rng.uniform01() * 0.5;
        const auto f = fgen(k, {picked.begin(), picked.end()}, eps);
        CHECK(std::abs(sum(f.bin_probs()) - 1.0) <= 1e-12);
        const double spike = (1 - eps) / count, hole = eps / (k - count);
        for (std::size_t j = 0; j < k; ++j)
            CHECK(f.bin_probs()[j] == (picked.count(j) ? spike : hole));
    }
}

TEST_CASE("auto_tune_tmax fixes the sample space") {
    // Hand evaluations of t_max = ceil(2 M k / sum (2i - 1) f(i)).
    CHECK(auto_tune_tmax(fgen(5, {2}, 5e-3), 10000).t_max() == 20000);
    CHECK(auto_tune_tmax(stepwise(std::vector<double>(20, 1.0)), 10000).t_max() == 20000);
    CHECK(auto_tune_tmax(stepwise({1.0}), 7).t_max() == 14);

    // Values from tests/oracles/derive.py.
    CHECK(auto_tune_tmax(fgen(20, {0, 3}, 5e-3), 10000).t_max() == 97827);
    CHECK(auto_tune_tmax(fgen(20, {2, 9}, 5e-3), 1000).t_max() == 3322);
    CHECK(auto_tune_tmax(fgen(20, {1}, 5e-3), 1000).t_max() == 12948);

    const auto f = auto_tune_tmax(fgen(5, {2}, 5e-3), 10000);
    CHECK(f.edges() == std::vector<std::uint64_t>{0, 4000, 8000, 12000, 16000, 20000});
    CHECK(f.bin_lo(2) == 8001);
    CHECK(f.bin_hi(2) == 12000);

    // t_max never drops below k.
    CHECK(auto_tune_tmax(fgen(50, {0}, 0.0), 1).t_max() >= 50);

    CHECK_THROWS_AS(auto_tune_tmax(fgen(5, {2}, 5e-3), 0), ValidationError);
    CHECK_THROWS_AS(auto_tune_tmax(stepwise({0.0, 0.0}, 1.0), 10), ValidationError);
}

TEST_CASE("property: tuned bin midpoints average to M") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = rng.uniform_int(1, 80);
        std::vector<double> w(k);
        for (auto& x : w) x = rng.uniform01() < 0.3 ? 0.0 : rng.uniform01();
        w[rng.uniform_int(0, k - 1)] += 0.5;
        const std::uint64_t m = rng.uniform_int(1, 100000);
        const auto f = auto_tune_tmax(stepwise(w), m);
        REQUIRE(f.t_max() >= k);
        // Midpoint of ((i-1) t/k, i t/k] in the real-valued layout.
        double mean = 0.0;
        const double t = static_cast<double>(f.t_max());
        for (std::size_t j = 0; j < k; ++j) mean += f.bin_probs()[j] * (j + 0.5) * t / k;
        if (f.t_max() > k) CHECK(std::abs(mean - m) / m <= static_cast<double>(k) / t + 1e-12);
        for (std::size_t j = 0; j < k; ++j) CHECK(f.bin_hi(j) >= f.bin_lo(j));
    }
}

TEST_CASE("sample_ird") {
    SUBCASE("single bin of width 14") {
        const auto f = auto_tune_tmax(stepwise({1.0}), 7);
        Rng rng(5);
        double total = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const auto t = sample_ird(f, rng);
            REQUIRE(t >= 1);
            REQUIRE(t <= 14);
            total += static_cast<double>(t);
        }
        // Uniform on 1..14: mean 7.5, variance (14^2 - 1) / 12.
        CHECK(std::abs(total / n - 7.5) < 4 * std::sqrt(195.0 / 12.0 / n));
    }
    SUBCASE("all mass at infinity") {
        const auto f = with_edges({0.0}, 1.0, {0, 10});
        Rng rng(5);
        for (int i = 0; i < 100; ++i) CHECK(sample_ird(f, rng) == kInfiniteIrd);
    }
    SUBCASE("untuned spec is rejected") {
        Rng rng(5);
        CHECK_THROWS_AS(sample_ird(fgen(5, {2}, 0.1), rng), ValidationError);
    }
    SUBCASE("bin frequencies match fgen(20, {0,3}, 5e-3)") {
        const auto f = auto_tune_tmax(fgen(20, {0, 3}, 5e-3), 1000);
        Rng rng(17);
        const int n = 1000000;
        std::vector<int> counts(20, 0);
        for (int i = 0; i < n; ++i) {
            const auto t = sample_ird(f, rng);
            const auto it = std::lower_bound(f.edges().begin() + 1, f.edges().end(), t);
            ++counts[static_cast<std::size_t>(it - f.edges().begin()) - 1];
        }
        double tv = 0.0;
        for (std::size_t j = 0; j < 20; ++j) {
            const double p = f.bin_probs()[j], se = std::sqrt(p * (1 - p) / n);
            CHECK(std::abs(counts[j] / double(n) - p) <= 3 * se + 1e-12);
            tv += std::abs(counts[j] / double(n) - p);
        }
        CHECK(0.5 * tv <= 0.005);
    }
    SUBCASE("infinite mass is drawn at its rate") {
        const auto f = auto_tune_tmax(stepwise({1.0, 1.0}, 2.0), 100);
        CHECK(f.p_infinite() == doctest::Approx(0.5));
        Rng rng(8);
        int inf = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) inf += sample_ird(f, rng) == kInfiniteIrd;
        CHECK(std::abs(inf / double(n) - 0.5) < 4 * std::sqrt(0.25 / n));
    }
}

TEST_CASE("empirical IRD histograms") {
    const auto f = empirical_ird({{1, 1, 3.0}, {2, 2, 1.0}}, 0.0);
    REQUIRE(f.k() == 2);
    CHECK(f.bin_probs()[0] == doctest::Approx(0.75));
    CHECK(f.bin_probs()[1] == doctest::Approx(0.25));
    CHECK(f.edges() == std::vector<std::uint64_t>{0, 1, 2});
    // Already absolute: tuning leaves it alone.
    CHECK(auto_tune_tmax(f, 12345) == f);

    const auto g = empirical_ird({{1, 1, 2.0}, {5, 8, 3.0}}, 5.0);
    CHECK(g.p_infinite() == doctest::Approx(0.5));
    // The gap 2..4 becomes an empty bin.
    CHECK(g.edges() == std::vector<std::uint64_t>{0, 1, 4, 8});
    CHECK(g.bin_probs()[1] == 0.0);
    CHECK(std::abs(sum(g.bin_probs()) + g.p_infinite() - 1.0) <= 1e-12);

    CHECK_THROWS_AS(empirical_ird({}, 0.0), ValidationError);
    CHECK_THROWS_AS(empirical_ird({{1, 4, 1.0}, {3, 6, 1.0}}, 0.0), ValidationError);
    CHECK_THROWS_AS(empirical_ird({{0, 4, 1.0}}, 0.0), ValidationError);
    CHECK_THROWS_AS(empirical_ird({{1, 4, -1.0}}, 0.0), ValidationError);
}

TEST_CASE("IRM PMFs match direct normalization") {
    // Expected values from tests/oracles/derive.py.
    SUBCASE("zipf(1.2) over 4") {
        const auto g = build_irm(Zipf{1.2}, 4);
        const double expected[] = {0.5284517432896202, 0.2300219813977988, 0.14140339257440876,
                                   0.10012288273817219};
        for (int i = 0; i < 4; ++i) CHECK(std::abs(g.pmf(i) - expected[i]) <= 1e-12);
    }
    SUBCASE("pareto(2.5, 1) over 5") {
        const auto g = build_irm(Pareto{2.5, 1.0}, 5);
        const double expected[] = {0.7751545786164296, 0.13702926475186952, 0.04972618940308516,
                                   0.024223580581763424, 0.013866386646852332};
        for (int i = 0; i < 5; ++i) CHECK(std::abs(g.pmf(i) - expected[i]) <= 1e-12);
    }
    SUBCASE("pareto(2, 3) has no mass below x_m") {
        const auto g = build_irm(Pareto{2.0, 3.0}, 6);
        const double expected[] = {0.0, 0.0, 0.4602991944764097, 0.25891829689298046, 0.16570771001150747,
                                   0.11507479861910243};
        for (int i = 0; i < 6; ++i) CHECK(std::abs(g.pmf(i) - expected[i]) <= 1e-12);
    }
    SUBCASE("normal(5, 2) truncated to 1..10") {
        const auto g = build_irm(Normal{5.0, 2.0}, 10);
        const double expected[] = {0.02738489915397792, 0.06569295800825811, 0.12273060323069296,
                                   0.17857197401157116, 0.20234855611230135, 0.17857197401157116,
                                   0.12273060323069296, 0.06569295800825811, 0.02738489915397792,
                                   0.008890575078698516};
        for (int i = 0; i < 10; ++i) CHECK(std::abs(g.pmf(i) - expected[i]) <= 1e-12);
    }
    SUBCASE("uniform") {
        const auto g = build_irm(Uniform{}, 250);
        for (int i = 0; i < 250; ++i) CHECK(g.pmf(i) == doctest::Approx(1.0 / 250));
        CHECK(g.pmf(250) == 0.0);
    }
    SUBCASE("empirical counts") {
        const auto g = build_irm(EmpiricalCounts{{3.0, 1.0}}, 999);
        CHECK(g.universe_size() == 2);
        CHECK(g.pmf(0) == doctest::Approx(0.75));
        CHECK(g.pmf(1) == doctest::Approx(0.25));
    }
}

TEST_CASE("property: every IRM PMF sums to 1") {
    const std::vector<IrmFamily> families{Zipf{0.6}, Zipf{1.2}, Zipf{3.0}, Pareto{2.5, 1.0}, Pareto{1.1, 7.5},
                                          Normal{50.0, 10.0}, Normal{-3.0, 40.0}, Uniform{}};
    for (const auto& fam : families) {
        for (std::uint64_t u : {1ULL, 13ULL, 1000ULL, 20000ULL}) {
            if (const auto* p = std::get_if<Pareto>(&fam); p && std::ceil(p->x_m) > u) continue;
            const auto g = build_irm(fam, u);
            double s = 0.0;
            for (std::uint64_t i = 0; i < u; ++i) s += g.pmf(i);
            CHECK(std::abs(s - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("build_irm rejects bad parameters") {
    CHECK_THROWS_AS(build_irm(Zipf{0.0}, 10), ValidationError);
    CHECK_THROWS_AS(build_irm(Zipf{-1.0}, 10), ValidationError);
    CHECK_THROWS_AS(build_irm(Normal{0.0, 0.0}, 10), ValidationError);
    CHECK_THROWS_AS(build_irm(Pareto{1.0, 0.5}, 10), ValidationError);
    CHECK_THROWS_AS(build_irm(Pareto{1.0, 20.0}, 10), ValidationError);
    CHECK_THROWS_AS(build_irm(EmpiricalCounts{{}}, 10), ValidationError);
    CHECK_THROWS_AS(build_irm(EmpiricalCounts{{0.0, 0.0}}, 10), ValidationError);
    CHECK_THROWS_AS(build_irm(Uniform{}, 0), ValidationError);
}

TEST_CASE("sample_item") {
    SUBCASE("uniform over 10") {
        const auto g = build_irm(Uniform{}, 10);
        Rng rng(1);
        const int n = 100000;
        std::vector<int> counts(10, 0);
        for (int i = 0; i < n; ++i) ++counts[sample_item(g, rng)];
        const double se = std::sqrt(0.1 * 0.9 / n);
        for (int c : counts) CHECK(std::abs(c / double(n) - 0.1) <= 3 * se);
    }
    SUBCASE("degenerate empirical") {
        const auto g = build_irm(EmpiricalCounts{{1.0, 0.0, 0.0}}, 3);
        Rng rng(1);
        for (int i = 0; i < 1000; ++i) CHECK(sample_item(g, rng) == 0);
    }
    SUBCASE("zipf(1.2) rank-frequency slope") {
        const auto g = build_irm(Zipf{1.2}, 100);
        Rng rng(4);
        std::vector<double> counts(100, 0.0);
        for (int i = 0; i < 1000000; ++i) ++counts[sample_item(g, rng)];
        // Least-squares slope of log count on log rank over ranks 1..20.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int r = 20;
        for (int i = 0; i < r; ++i) {
            const double x = std::log(i + 1.0), y = std::log(counts[i]);
            sx += x, sy += y, sxx += x * x, sxy += x * y;
        }
        const double slope = (r * sxy - sx * sy) / (r * sxx - sx * sx);
        CHECK(slope == doctest::Approx(-1.2).epsilon(0.1 / 1.2));
    }
    SUBCASE("pareto never samples below x_m") {
        const auto g = build_irm(Pareto{2.0, 3.0}, 6);
        Rng rng(2);
        for (int i = 0; i < 10000; ++i) CHECK(sample_item(g, rng) >= 2);
    }
}

#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "bdgame/core.hpp"
#include "bdgame/function_class.hpp"
#include "bdgame/stats.hpp"

using namespace bdgame;

namespace {

TruthTable random_table(int n, RandomSource& rng) {
    TruthTable t(n);
    for (std::uint32_t i = 0; i < (1u << n); ++i) t.set(i, rng.next_bit());
    return t;
}

// Brute-force disagreement mass, independent of the library's fast paths.
double distance_oracle(const TruthTable& f, const TruthTable& g, const InputDistribution& D) {
    double d = 0.0;
    for (std::uint32_t x = 0; x < (1u << f.dimension()); ++x)
        if (f.get(x) != g.get(x)) d += D.mass(x);
    return d;
}

}  // namespace

TEST_CASE("input points parse and print") {
    InputPoint x = InputPoint::parse("0110");
    CHECK(x.n == 4);
    CHECK(x.bits == 6u);  // x1=0 x2=1 x3=1 x4=0
    CHECK(x.to_string() == "0110");
    CHECK_FALSE(x.bit(0));
    CHECK(x.bit(1));
    CHECK(x.bit(2));
    CHECK_FALSE(x.bit(3));
    CHECK_THROWS_AS(InputPoint::parse("012"), ContractError);
}

TEST_CASE("truth table evaluation is a table lookup") {
    RandomSource rng(7, 0);
    TruthTable t = random_table(3, rng);
    // replayed lookups agree bit for bit
    for (std::uint32_t i = 0; i < 8; ++i) {
        InputPoint x(i, 3);
        bool first = t.evaluate(x);
        CHECK(first == t.get(i));
        CHECK(t.evaluate(x) == first);
    }
    TruthTable zeros(3);
    for (std::uint32_t i = 0; i < 8; ++i) CHECK_FALSE(zeros.evaluate(InputPoint(i, 3)));
    CHECK_THROWS_AS(zeros.evaluate(InputPoint(0, 2)), ContractError);
}

TEST_CASE("truth table hex serialization is little-endian over the index") {
    TruthTable zeros(3);
    CHECK(zeros.to_hex() == "00");
    TruthTable t(3);
    t.set(0, true);  // lowest index sits in the low bit of the first nibble
    CHECK(t.to_hex() == "10");
    t.set(5, true);
    CHECK(t.to_hex() == "12");

    RandomSource rng(11, 0);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 1 + static_cast<int>(rng.next_below(8));
        TruthTable a = random_table(n, rng);
        CHECK(TruthTable::from_hex(n, a.to_hex()) == a);
    }
    CHECK_THROWS_AS(TruthTable::from_hex(3, "0"), ContractError);
    CHECK_THROWS_AS(TruthTable::from_hex(3, "zz"), ContractError);
}

TEST_CASE("distance is exact and matches the brute-force oracle") {
    InputDistribution uniform = InputDistribution::uniform(3);
    RandomSource rng(3, 0);

    SECTION("identity") {
        TruthTable f = random_table(3, rng);
        CHECK(distance(f, f, uniform) == 0.0);
    }

    SECTION("point indicators under the uniform distribution") {
        IndicatorClass ind(4);
        TruthTable a = ind.table_of(3), b = ind.table_of(9);
        CHECK(distance(a, b, InputDistribution::uniform(4)) == 2.0 / 16.0);
    }

    SECTION("random tables against the oracle") {
        for (int rep = 0; rep < 100; ++rep) {
            TruthTable f = random_table(3, rng), g = random_table(3, rng);
            CHECK(distance(f, g, uniform) == static_cast<double>(f.hamming(g)) / 8.0);
            CHECK(distance(f, g, uniform) == distance_oracle(f, g, uniform));
        }
    }

    SECTION("non-uniform masses") {
        std::vector<double> m{0.5, 0.25, 0.125, 0.125, 0, 0, 0, 0};
        InputDistribution d(3, m);
        for (int rep = 0; rep < 50; ++rep) {
            TruthTable f = random_table(3, rng), g = random_table(3, rng);
            CHECK(distance(f, g, d) == Catch::Approx(distance_oracle(f, g, d)).margin(1e-15));
        }
    }
}

TEST_CASE("distance is a pseudometric, exhaustively over an enumerated class") {
    auto cls = all_functions_on(3, first_points(3, 4));
    std::vector<double> masses{0.4, 0.3, 0.2, 0.1, 0, 0, 0, 0};
    for (const InputDistribution& D :
         {InputDistribution::uniform(3), InputDistribution(3, masses)}) {
        for (std::uint64_t i = 0; i < cls->size(); ++i) {
            CHECK(cls->member_distance(i, i, D) == 0.0);
            for (std::uint64_t j = 0; j < cls->size(); ++j) {
                double dij = cls->member_distance(i, j, D);
                CHECK(dij == cls->member_distance(j, i, D));
                for (std::uint64_t k = 0; k < cls->size(); ++k) {
                    double dik = cls->member_distance(i, k, D);
                    double djk = cls->member_distance(j, k, D);
                    CHECK(std::abs(dik - djk) <= dij + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("example oracle sampling") {
    SECTION("point mass always returns the same labeled point") {
        TruthTable f(3);
        f.set(5, true);
        InputPoint x0(5, 3);
        InputDistribution d = InputDistribution::point_mass(3, x0);
        RandomSource rng(1, 1);
        for (int i = 0; i < 100; ++i) {
            LabeledExample ex = sample_example(f, d, rng);
            CHECK(ex.point == x0);
            CHECK(ex.label == true);
        }
    }

    SECTION("uniform draw frequencies within 4 sigma of 2^-n") {
        const int n = 3;
        const std::uint64_t draws = 100000;
        InputDistribution d = InputDistribution::uniform(n);
        TruthTable f(n);
        RandomSource rng(2, 0);
        std::vector<std::uint64_t> counts(8, 0);
        for (std::uint64_t i = 0; i < draws; ++i) ++counts[sample_example(f, d, rng).point.bits];
        double p = 1.0 / 8.0;
        double sigma = std::sqrt(p * (1 - p) * draws);
        for (std::uint64_t c : counts)
            CHECK(std::abs(static_cast<double>(c) - p * draws) <= 4.0 * sigma);
    }

    SECTION("labels always match the generating function") {
        RandomSource rng(5, 0);
        TruthTable f = random_table(4, rng);
        std::vector<double> masses(16, 0.0);
        double total = 0.0;
        for (double& m : masses) {
            m = rng.next_double();
            total += m;
        }
        for (double& m : masses) m /= total;
        masses[15] += 1.0 - std::accumulate(masses.begin(), masses.end(), 0.0);
        InputDistribution d(4, masses);
        for (int i = 0; i < 10000; ++i) {
            LabeledExample ex = sample_example(f, d, rng);
            CHECK(ex.label == f.evaluate(ex.point));
        }
    }

    SECTION("fixed seed replays the identical example sequence") {
        RandomSource table_rng(9, 9);
        TruthTable f = random_table(3, table_rng);
        InputDistribution d = InputDistribution::uniform(3);
        RandomSource a(42, 7), b(42, 7);
        for (int i = 0; i < 200; ++i) {
            LabeledExample ea = sample_example(f, d, a), eb = sample_example(f, d, b);
            CHECK(ea.point == eb.point);
            CHECK(ea.label == eb.label);
        }
    }
}

TEST_CASE("epsilon-validity") {
    InputDistribution uniform = InputDistribution::uniform(3);

    SECTION("no disagreement at the trigger means invalid") {
        TruthTable f(3);
        CHECK_FALSE(is_epsilon_valid(f, f, uniform, 0.5, InputPoint(0, 3)));
    }

    SECTION("indicator swap is 2/2^n-valid") {
        IndicatorClass ind(3);
        TruthTable f = ind.table_of(2), g = ind.table_of(6);
        CHECK(is_epsilon_valid(f, g, uniform, 2.0 / 8.0, InputPoint(2, 3)));
        CHECK_FALSE(is_epsilon_valid(f, g, uniform, 0.2, InputPoint(2, 3)));
        // disagreement clause: the trigger must separate them
        CHECK_FALSE(is_epsilon_valid(f, g, uniform, 0.5, InputPoint(5, 3)));
    }

    SECTION("exhaustive clause check over a 10-function class") {
        RandomSource rng(13, 0);
        std::vector<TruthTable> tables;
        for (int i = 0; i < 10; ++i) tables.push_back(random_table(3, rng));
        double eps = 0.3;
        for (const TruthTable& f : tables)
            for (const TruthTable& g : tables)
                for (std::uint32_t x = 0; x < 8; ++x) {
                    InputPoint xp(x, 3);
                    bool expect = f.get(x) != g.get(x) && distance_oracle(f, g, uniform) <= eps;
                    CHECK(is_epsilon_valid(f, g, uniform, eps, xp) == expect);
                }
    }
}

TEST_CASE("random source streams are deterministic and splittable") {
    RandomSource a(123, 5), b(123, 5);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RandomSource c(123, 6);
    bool any_diff = false;
    RandomSource a2(123, 5);
    for (int i = 0; i < 64; ++i) any_diff = any_diff || (a2.next_u64() != c.next_u64());
    CHECK(any_diff);

    RandomSource root(9, 0);
    RandomSource f1 = root.fork(1), f1b = root.fork(1), f2 = root.fork(2);
    CHECK(f1.next_u64() == f1b.next_u64());
    CHECK(f1.next_u64() != f2.next_u64());

    RandomSource d(77, 0);
    for (int i = 0; i < 1000; ++i) {
        double u = d.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(d.next_below(10) < 10);
    }
}

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(InputDistribution(2, {0.5, 0.5, 0.5, -0.5}), ContractError);
    CHECK_THROWS_AS(InputDistribution(2, {0.5, 0.5, 0.5, 0.5}), ContractError);
    CHECK_THROWS_AS(InputDistribution(2, {1.0}), ContractError);
    InputDistribution u = InputDistribution::uniform(2);
    CHECK(u.is_uniform());
    CHECK(u.support().size() == 4);
}

TEST_CASE("wilson interval brackets the point estimate") {
    for (std::uint64_t wins : {0ull, 1ull, 500ull, 999ull, 1000ull}) {
        WilsonInterval w = wilson95(wins, 1000);
        double p = wins / 1000.0;
        CHECK(w.lo <= p);
        CHECK(w.hi >= p);
        CHECK(w.lo >= 0.0);
        CHECK(w.hi <= 1.0);
    }
}

#include <catch_amalgamated.hpp>

#include <set>
#include <string>

#include "bdgame/function_class.hpp"
#include "bdgame/ggm_prf.hpp"

using namespace bdgame;

TEST_CASE("indicator class members") {
    IndicatorClass ind(3);
    CHECK(ind.size() == 8);
    CHECK(ind.dimension() == 3);
    for (std::uint64_t i = 0; i < 8; ++i)
        for (std::uint32_t x = 0; x < 8; ++x)
            CHECK(ind.evaluate(i, InputPoint(x, 3)) == (x == i));
    CHECK(ind.member_name(6) == "1_011");

    InputDistribution u = InputDistribution::uniform(3);
    for (std::uint64_t i = 0; i < 8; ++i)
        for (std::uint64_t j = 0; j < 8; ++j) {
            double expect = i == j ? 0.0 : 0.25;
            CHECK(ind.member_distance(i, j, u) == expect);
        }
}

TEST_CASE("all_functions_on realizes every labeling of its support") {
    auto cls = all_functions_on(3, first_points(3, 3));
    CHECK(cls->size() == 8);
    std::set<std::uint32_t> labelings;
    for (std::uint64_t i = 0; i < cls->size(); ++i)
        labelings.insert(cls->labeling_over(i, first_points(3, 3)));
    CHECK(labelings.size() == 8);
    // off-support the members vanish
    for (std::uint64_t i = 0; i < cls->size(); ++i)
        for (std::uint32_t x = 3; x < 8; ++x)
            CHECK_FALSE(cls->evaluate(i, InputPoint(x, 3)));
}

TEST_CASE("tree class enumeration is canonical and duplicate-free") {
    TreeSizeClass cls(3, 4);
    // counts by leaf count: 2, 12, 144, 2160
    CHECK(cls.size() == 2 + 12 + 144 + 2160);
    std::set<std::string> reprs;
    for (std::uint64_t i = 0; i < cls.size(); ++i) {
        const DecisionTree* t = cls.tree_of(i);
        REQUIRE(t != nullptr);
        CHECK(t->size() <= 4);
        reprs.insert(t->to_string());
        // cached table matches the tree
        for (std::uint32_t x = 0; x < 8; ++x)
            CHECK(cls.evaluate(i, InputPoint(x, 3)) == t->evaluate(InputPoint(x, 3)));
    }
    CHECK(reprs.size() == cls.size());  // representation-level dedup

    CHECK_THROWS_AS(TreeSizeClass(8, 8), BudgetError);
}

TEST_CASE("special-cased class wraps a base family") {
    auto base = std::make_shared<PrfClass>(4);
    SpecialCasedClass sc(base);
    CHECK(sc.size() == base->size() * 16 * 2);

    for (std::uint64_t b : {0ull, 7ull, 15ull})
        for (std::uint32_t p : {0u, 9u})
            for (bool v : {false, true}) {
                std::uint64_t idx = sc.encode(b, InputPoint(p, 4), v);
                SpecialCasedClass::Triple t = sc.decode(idx);
                CHECK(t.base_index == b);
                CHECK(t.point.bits == p);
                CHECK(t.value == v);
                for (std::uint32_t x = 0; x < 16; ++x) {
                    bool expect = (x == p) ? v : base->evaluate(b, InputPoint(x, 4));
                    CHECK(sc.evaluate(idx, InputPoint(x, 4)) == expect);
                }
            }
}

TEST_CASE("table materialization agrees with evaluation") {
    PrfClass prf(6);
    for (std::uint64_t k : {0ull, 31ull, 63ull}) {
        TruthTable t = prf.table_of(k);
        for (std::uint32_t x = 0; x < 64; ++x)
            CHECK(t.get(x) == prf.evaluate(k, InputPoint(x, 6)));
    }
}

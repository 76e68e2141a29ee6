#include <catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "bdgame/function_class.hpp"
#include "bdgame/vc.hpp"

using namespace bdgame;

namespace {

// Independent shattering check: collect realized labelings into a set.
bool shattered_oracle(const FunctionClass& cls, const std::vector<InputPoint>& pts) {
    std::set<std::uint32_t> seen;
    for (std::uint64_t i = 0; i < cls.size(); ++i) seen.insert(cls.labeling_over(i, pts));
    return seen.size() == (std::uint64_t(1) << pts.size());
}

// Independent VC computation: complete scan over all subsets of the domain,
// no pruning, taking the maximum shattered size.
int vc_oracle(const FunctionClass& cls) {
    int n = cls.dimension();
    std::uint32_t domain = 1u << n;
    int best = 0;
    for (std::uint32_t mask = 1; mask < (1u << domain); ++mask) {
        std::vector<InputPoint> pts;
        for (std::uint32_t x = 0; x < domain; ++x)
            if ((mask >> x) & 1u) pts.emplace_back(x, n);
        if (pts.size() <= 6 && shattered_oracle(cls, pts))
            best = std::max(best, static_cast<int>(pts.size()));
    }
    return best;
}

std::uint64_t binomial(std::uint64_t m, std::uint64_t k) {
    if (k > m) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < k; ++i) r = r * (m - i) / (i + 1);
    return r;
}

}  // namespace

TEST_CASE("shattering of indicator sets") {
    IndicatorClass ind(3);
    // single points are shattered: some indicator is 1 there, another is 0
    for (std::uint32_t x = 0; x < 8; ++x) {
        ShatterResult r = is_shattered(ind, {InputPoint(x, 3)});
        CHECK(r.shattered);
        REQUIRE(r.witness.has_value());
        CHECK(ind.evaluate(r.witness->member_for(0), InputPoint(x, 3)) == false);
        CHECK(ind.evaluate(r.witness->member_for(1), InputPoint(x, 3)) == true);
    }
    // no indicator is 1 at two distinct points
    CHECK_FALSE(is_shattered(ind, {InputPoint(1, 3), InputPoint(4, 3)}).shattered);
}

TEST_CASE("shattering of random point sets matches the exhaustive oracle") {
    TreeSizeClass trees(4, 4);
    RandomSource rng(21, 0);
    for (int rep = 0; rep < 12; ++rep) {
        std::set<std::uint32_t> picked;
        while (picked.size() < 3) picked.insert(static_cast<std::uint32_t>(rng.next_below(16)));
        std::vector<InputPoint> pts;
        for (std::uint32_t x : picked) pts.emplace_back(x, 4);
        CHECK(is_shattered(trees, pts).shattered == shattered_oracle(trees, pts));
    }
}

TEST_CASE("vc dimension of the named classes") {
    IndicatorClass ind(3);
    CHECK(vc_dimension(ind) == 1);

    // all functions on the full domain shatter everything
    std::vector<InputPoint> all4;
    for (std::uint32_t x = 0; x < 4; ++x) all4.emplace_back(x, 2);
    auto full = all_functions_on(2, all4);
    CHECK(vc_dimension(*full) == 4);

    auto cls = all_functions_on(3, first_points(3, 3));
    CHECK(vc_dimension(*cls) == 3);
}

TEST_CASE("vc dimension of small tree classes matches the oracle") {
    TreeSizeClass trees(3, 4);
    int d = vc_dimension(trees);
    CHECK(d == vc_oracle(trees));
    CHECK(d >= 2);
}

TEST_CASE("growth counts") {
    auto cls = all_functions_on(3, first_points(3, 3));
    CHECK(growth_count(*cls, {}) == 1);
    CHECK(growth_count(*cls, first_points(3, 3)) == 8);  // shattered set: 2^d labelings

    // Sauer-Shelah for every point set of a tree class
    TreeSizeClass trees(4, 4);
    int d = vc_dimension(trees);
    RandomSource rng(33, 0);
    for (int rep = 0; rep < 10; ++rep) {
        size_t m = 2 + rng.next_below(5);
        std::set<std::uint32_t> picked;
        while (picked.size() < m) picked.insert(static_cast<std::uint32_t>(rng.next_below(16)));
        std::vector<InputPoint> pts;
        for (std::uint32_t x : picked) pts.emplace_back(x, 4);
        std::uint64_t bound = 0;
        for (int i = 0; i <= d; ++i) bound += binomial(m, static_cast<std::uint64_t>(i));
        CHECK(growth_count(trees, pts) <= bound);
    }
}

TEST_CASE("removing a member never increases the vc dimension") {
    RandomSource rng(55, 0);
    std::vector<TruthTable> tables;
    for (int i = 0; i < 12; ++i) {
        TruthTable t(3);
        for (std::uint32_t x = 0; x < 8; ++x) t.set(x, rng.next_bit());
        tables.push_back(t);
    }
    ExplicitClass full("random12", tables);
    int d_full = vc_dimension(full);
    for (size_t drop = 0; drop < tables.size(); ++drop) {
        std::vector<TruthTable> reduced;
        for (size_t i = 0; i < tables.size(); ++i)
            if (i != drop) reduced.push_back(tables[i]);
        ExplicitClass sub("random11", reduced);
        CHECK(vc_dimension(sub) <= d_full);
    }
}

TEST_CASE("witnesses replay through evaluation") {
    auto cls = all_functions_on(3, first_points(3, 4));
    ShatterResult r = is_shattered(*cls, first_points(3, 4));
    REQUIRE(r.shattered);
    for (std::uint32_t lab = 0; lab < 16; ++lab) {
        std::uint64_t member = r.witness->member_for(lab);
        for (size_t k = 0; k < 4; ++k)
            CHECK(cls->evaluate(member, r.witness->points[k]) == (((lab >> k) & 1u) != 0));
    }
}

TEST_CASE("enumeration budgets are enforced") {
    IndicatorClass ind(3);
    std::vector<InputPoint> too_many(26, InputPoint(0, 3));
    CHECK_THROWS_AS(is_shattered(ind, too_many), BudgetError);
    CHECK_THROWS_AS(growth_count(ind, too_many), BudgetError);
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bdgame/decision_tree.hpp"
#include "bdgame/function_class.hpp"
#include "bdgame/vc.hpp"

namespace bdgame {

struct Fixture {
    std::string name;
    std::string note;
    std::string payload;
    std::uint64_t hash = 0;
};

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Named, deterministic test vectors. Payloads are canonical serializations,
// so the hashes are stable across runs and platforms.
inline std::vector<Fixture> list_fixtures() {
    std::vector<Fixture> out;
    auto add = [&](std::string name, std::string note, std::string payload) {
        Fixture f;
        f.name = std::move(name);
        f.note = std::move(note);
        f.payload = std::move(payload);
        f.hash = fnv1a64(f.payload);
        out.push_back(std::move(f));
    };

    DecisionTree fig = figure_tree();
    add("figure3-tree", "worked tree example; evaluates to 1 at 0110", fig.to_string());

    {
        IndicatorClass ind(3);
        std::string payload = "vc=1;";
        for (std::uint64_t i = 0; i < ind.size(); ++i) payload += ind.table_of(i).to_hex() + ";";
        add("indicator-class-n3", "point indicators over {0,1}^3, VC dimension 1", payload);
    }

    {
        auto cls = all_functions_on(3, first_points(3, 4));
        std::string payload;
        for (std::uint64_t i = 0; i < cls->size(); ++i) payload += cls->table_of(i).to_hex() + ";";
        add("all-functions-4pts-n3", "all 16 labelings of a 4-point support, VC dimension 4",
            payload);
    }

    {
        auto cls = all_functions_on(3, first_points(3, 3));
        ShatterResult r = is_shattered(*cls, first_points(3, 3));
        std::string payload;
        for (std::uint64_t member : r.witness->assignments)
            payload += std::to_string(member) + ";";
        add("shatter-witness-d3-n3", "per-labeling realizing members for a shattered 3-point set",
            payload);
    }

    return out;
}

}  // namespace bdgame

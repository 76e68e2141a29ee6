#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bdgame {

// Error taxonomy. ContractError marks caller bugs (violated preconditions),
// BudgetError marks exceeded enumeration budgets, ConfigError marks bad
// experiment configs, AttackUnavailableError marks (class, eps) combinations
// an attack cannot be mounted against.
struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ContractError : SimError {
    explicit ContractError(const std::string& msg) : SimError(msg) {}
};

struct BudgetError : SimError {
    explicit BudgetError(const std::string& msg) : SimError(msg) {}
};

struct ConfigError : SimError {
    explicit ConfigError(const std::string& msg) : SimError(msg) {}
};

struct AttackUnavailableError : SimError {
    explicit AttackUnavailableError(const std::string& msg) : SimError(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ContractError(msg);
}

inline void require_budget(bool cond, const std::string& msg) {
    if (!cond) throw BudgetError(msg);
}

constexpr int kMaxDimension = 20;           // dense 2^n structures cap out here
constexpr std::uint64_t kMaxClassSize = 1ull << 20;
constexpr int kMaxShatterPoints = 25;

}  // namespace bdgame

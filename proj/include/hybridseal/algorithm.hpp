// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

#include "hybridseal/common.hpp"

namespace hybridseal {

enum class AlgKind { kem, sig };

// Identity of a registered algorithm suite. The name alone determines the
// kind, the NIST security category and all component byte lengths.
struct AlgorithmId {
    std::string_view name;
    AlgKind kind;
    int security_level;
};

inline constexpr std::string_view kDefaultKemAlg = "X25519+ML-KEM-768";
inline constexpr std::string_view kDefaultSigAlg = "Ed25519+ML-DSA-65";

// Classical-only KEM identity; every hybrid operation refuses it unless the
// caller explicitly opts into the downgrade.
inline constexpr std::string_view kClassicalOnlyKemAlg = "X25519-only";

// Looks up a registered algorithm id. Throws unsupported_algorithm with the
// list of registered names for anything unknown.
const AlgorithmId& algorithm(std::string_view name);

std::vector<std::string_view> registered_algorithms();

}  // namespace hybridseal

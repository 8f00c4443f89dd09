#pragma once

#include "fpf/circuit.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace fpf {

struct AuxPair {
    NodeId in;   // Input node
    NodeId out;  // node feeding that slot back
    bool operator==(const AuxPair&) const = default;
};

// Fixed-point annotations carried alongside a circuit file.
struct CircuitAnnotations {
    std::vector<AuxPair> aux;
    std::optional<Box> domain;
    std::optional<std::size_t> primary;
};

constexpr int kCircuitFormatVersion = 1;

std::string to_text(const Circuit& c, const CircuitAnnotations& notes = {});

struct ParsedCircuit {
    Circuit circuit;
    CircuitAnnotations notes;
};

ParsedCircuit parse_circuit_text(std::string_view text);

}  // namespace fpf

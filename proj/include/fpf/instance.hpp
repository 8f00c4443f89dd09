#pragma once

#include "fpf/verify.hpp"

#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace fpf {

constexpr int kInstanceFormatVersion = 1;

struct EpsProperInstance {
    GameNF game;
    Rational eps;
};

struct CPInstance {
    ConvexProgramSpec spec;
    CPParams params;
};

struct RawCircuitInstance {
    FixedPointProblem problem;
};

using InstancePayload = std::variant<GameNF, ConcaveGameSpec, CCCSystem, EpsProperInstance, StochasticGameSpec,
                                     CakeSpec, KKMSpec, BapatSpec, ADMarketSpec, HZSpec, CPInstance,
                                     RawCircuitInstance>;

struct InstanceFile {
    int version = kInstanceFormatVersion;
    std::string kind;
    InstancePayload payload;
    // Canonical JSON of the payload and the embedded circuit texts, kept for serialization.
    std::string payload_json;
    std::map<std::string, std::string> circuits;
};

// Strict: unknown fields are rejected. ParseError carries line/column; SchemaError names the field path.
InstanceFile parse_instance(std::string_view bytes);
// Canonical form: sorted keys, two-space indent, rationals as p/q, circuits as line arrays.
std::string serialize_instance(const InstanceFile& inst);

FixedPointProblem compile_instance(const InstanceFile& inst);
// Length of the point `verify_instance` expects (the primary coordinates, or all of them for raw circuits).
std::size_t instance_point_dim(const InstanceFile& inst);
VerificationReport verify_instance(const InstanceFile& inst, std::span<const double> point, double eps);
// Tolerance each kind is checked at by default.
double default_verify_tolerance(const InstanceFile& inst);

// {"point": [...]} files.
std::vector<double> parse_point(std::string_view bytes);
std::string serialize_point(std::span<const double> point);

}  // namespace fpf

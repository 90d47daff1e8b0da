#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "idemfactor/json_io.hpp"

namespace idemfactor::cli {

/// Thrown for a computed negative outcome: exit 1 with `report` on stdout.
struct Negative
{
    Json report;
    std::string message;
};

/// Inline JSON if the argument starts with '{', otherwise a file path.
Json load_json(const std::string& arg);

struct BlockrepArgs
{
    std::string input;
    std::optional<std::string> k, l;
    bool mirror = false;
};

struct FactorArgs
{
    std::string input;
    std::string method = "auto";
    int samples = 1;
    std::uint64_t seed = 0;
    std::optional<std::string> k, l, b, c, d, j, v;
};

struct ConsistencyArgs
{
    std::string t1, t2, b, c, d;
};

struct DouglasArgs
{
    std::string u, v;
};

Json blockrep(const BlockrepArgs& a);
Json factor(const FactorArgs& a);
Json consistency(const ConsistencyArgs& a);
Json douglas(const DouglasArgs& a);

}  // namespace idemfactor::cli

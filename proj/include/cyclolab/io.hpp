#pragma once

#include "cyclolab/bounds.hpp"
#include "cyclolab/constructions.hpp"
#include "cyclolab/structure.hpp"
#include "cyclolab/symbolic.hpp"
#include "cyclolab/tiling.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cyclo {

using Json = nlohmann::ordered_json;

// Integers travel as decimal strings; readers also accept JSON numbers.
Json modulus_to_json(const CyclicModulus& m);
CyclicModulus modulus_from_json(const Json& j);

Json multiset_to_json(const Multiset& a);
Multiset multiset_from_json(const Json& j);

Json symbolic_to_json(const SymbolicMultiset& s);
SymbolicMultiset symbolic_from_json(const Json& j);

// "dir" is the prime of the fiber direction.
Json decomposition_to_json(const FiberDecomposition& d);
FiberDecomposition decomposition_from_json(const Json& j);

Json min_to_json(const ScaleSet& s, const MinResult& min, const FibResult& fib, const BoundReport& bounds);
Json cm_report_to_json(const CMReport& r);
Json sands_to_json(const SandsReport& r);
Json partition_to_json(const PartitionReport& r);
Json uniformity_to_json(const UniformityReport& r);
Json construction_to_json(const ConstructionReport& r);

// "72", "2^9*3^6" or "2^3*9".
i64 parse_scale(const std::string& text);
// Comma-separated list of parse_scale entries.
std::vector<i64> parse_scale_list(const std::string& text);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
// Multiset file: the symbolic form is materialized.
Multiset read_multiset_file(const std::string& path);

} // namespace cyclo

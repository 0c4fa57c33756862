#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "roughmetrics/embeddings.hpp"
#include "roughmetrics/metric_space.hpp"
#include "roughmetrics/ordered_set.hpp"
#include "roughmetrics/sra.hpp"

namespace roughmetrics {

using nlohmann::json;

/// Space object with a "kind" of matrix, euclidean, taxicab, snowflake or
/// construction. A missing kind is inferred from the keys present.
/// Relative paths (a snowflake "base" given as a string) resolve against `dir`.
FiniteMetricSpace space_from_json(const json& j, const std::filesystem::path& dir = {});
json space_to_json(const FiniteMetricSpace& space);

/// Throws ParseError carrying the path and the parser's line and column.
json read_json_file(const std::filesystem::path& path);

FiniteMetricSpace load_space(const std::filesystem::path& path);
void save_space(const FiniteMetricSpace& space, const std::filesystem::path& path);

/// {"space": <space object or path>, "order": [int...]}; a missing order is
/// the identity. A bare space object is read in its natural order.
OrderedSet ordered_set_from_json(const json& j, const std::filesystem::path& dir = {});
json ordered_set_to_json(const OrderedSet& s);
OrderedSet load_ordered_set(const std::filesystem::path& path);

/// Serialized with shortest round-trip formatting; 2-space indent.
std::string dump(const json& j);

/// i,j,k,required_alpha
void write_triple_table_csv(std::ostream& os, const SraReport& report);

/// "# norm=<tag>" then one row per point.
void write_coords_csv(std::ostream& os, const EmbeddingResult& e);

} // namespace roughmetrics

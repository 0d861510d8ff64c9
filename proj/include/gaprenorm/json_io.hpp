#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaprenorm/decomp.hpp"
#include "gaprenorm/diffeo.hpp"
#include "gaprenorm/gapmap.hpp"
#include "gaprenorm/renorm.hpp"
#include "gaprenorm/search.hpp"
#include "gaprenorm/tangent.hpp"
#include "json.hpp"

namespace gaprenorm {

using ordered_json = nlohmann::ordered_json;

// All serializers write doubles with 17 significant digits through dump_17g,
// enough for exact binary round trips.  Parsers validate shape and throw
// DomainError with the offending key or position in the message.

ordered_json diffeo_to_json(const Diffeo& d);
Diffeo diffeo_from_json(const ordered_json& j);

ordered_json gapmap_to_json(const GapMap& f);
GapMap gapmap_from_json(const ordered_json& j);

ordered_json step_to_json(const RenormStep& s);
// The trajectory file format is a plain array of step objects.
ordered_json trajectory_to_json(const Trajectory& t);

ordered_json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const ordered_json& j);

ordered_json search_result_to_json(const SearchResult& r);
ordered_json block_report_to_json(const BlockReport& b,
                                  const std::vector<double>& eigenvalues);
ordered_json cone_report_to_json(const ConeReport& r, const ConeParams& p,
                                 std::uint64_t seed);

// Fixed-format serialization: two-space indent, objects and arrays one
// element per line, doubles as %.17g.  Byte-identical for identical values.
std::string dump_17g(const ordered_json& j);
std::string format_g17(double x);

// Parse with the source name prepended to any diagnostic.
ordered_json parse_json_text(const std::string& text,
                             const std::string& source_name);
ordered_json load_json_file(const std::string& path);

}  // namespace gaprenorm

#ifndef CULIFT_IO_HPP
#define CULIFT_IO_HPP

#include <filesystem>

#include <json.hpp>

#include "culift/lifting.hpp"
#include "culift/lsc.hpp"
#include "culift/matrix.hpp"
#include "culift/metrics.hpp"
#include "culift/morphism.hpp"
#include "culift/region.hpp"

namespace culift::io {

using nlohmann::json;

// All readers throw std::invalid_argument on malformed input.

json to_json(Complex z);
Complex complex_from_json(const json& j);
/// Reals that may be infinite are written as the string "inf".
json real_to_json(double v);
double real_from_json(const json& j);

json to_json(const Region& region);
RegionPtr region_from_json(const json& j);

json to_json(const Ball& ball);
Ball ball_from_json(const json& j);

/// Sparse {"index": value} map; zeros are omitted, infinity is "inf".
json to_json(const LscFn& f);
LscFn lsc_from_json(const RegionPtr& region, const json& j);

/// {"n", "atoms": [{"z", "m"}]}; the region is embedded when `with_region`.
json to_json(const RankMeasure& alpha, bool with_region = false);
/// Uses the embedded region when present, else `fallback`.
RankMeasure morphism_from_json(const json& j, const RegionPtr& fallback = nullptr);

json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

json to_json(const MatchingResult& r);
json to_json(const DuBracket& b);
json to_json(const DeltaCover& cover, const Region& region);
json to_json(const LiftResult& r);

json read_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; throws std::runtime_error if the
/// path cannot be written.
void write_file(const std::filesystem::path& path, const json& j);

}  // namespace culift::io

#endif  // CULIFT_IO_HPP

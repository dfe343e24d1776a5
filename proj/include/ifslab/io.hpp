#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "ifslab/commensurability.hpp"
#include "ifslab/dimension.hpp"
#include "ifslab/embedding.hpp"
#include "ifslab/measures.hpp"
#include "ifslab/similarity.hpp"

namespace ifslab {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become Error(Parse) naming `source`, line and column.
Json parse_json(std::string_view text, const std::string& source);
Json load_json(const std::filesystem::path& path);

/// {"label": "C13", "maps": [{"r": "1/3", "t": "0"}, {"r": "1/3", "t": "2/3"}]}
Ifs ifs_from_json(const Json& j);
Json to_json(const Ifs& ifs);
Ifs load_ifs(const std::filesystem::path& path);

/// {"scale": ["1/3","1"], "trans": ["0","0"], "grid": [200,1]} with optional
/// row-major "masses"; uniform when masses are absent.
ParamMeasure param_measure_from_json(const Json& j);

Json to_json(const SeparationCertificate& cert);
Json to_json(const EmbeddingVerdict& verdict);
Json to_json(const CommensurabilityResult& result);
Json to_json(const ExponentMatrix& matrix);
Json to_json(const PisotVerdict& verdict);

/// Formats with `digits` significant digits, "%.{digits}g" style.
std::string format_number(long double x, int digits = 17);

}  // namespace ifslab

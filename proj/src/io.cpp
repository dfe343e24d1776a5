#include "ifslab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ifslab/error.hpp"

namespace ifslab {

Json parse_json(std::string_view text, const std::string& source) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, column = 1;
        std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        fail(ErrorKind::Parse, source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON");
    }
}

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Parse, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_json(buffer.str(), path.string());
}

namespace {

Rational rational_field(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(ErrorKind::Parse, where + ": missing \"" + key + "\"");
    const Json& v = j.at(key);
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(Integer(v.dump()));
    fail(ErrorKind::Parse, where + ": \"" + key + "\" must be a rational string such as \"1/3\"");
}

Rational rational_value(const Json& v, const std::string& where) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(Integer(v.dump()));
    if (v.is_number_float()) return parse_rational(v.dump());
    fail(ErrorKind::Parse, where + ": expected a rational");
}

}  // namespace

Ifs ifs_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("maps") || !j.at("maps").is_array()) {
        fail(ErrorKind::Parse, "IFS JSON needs an array field \"maps\"");
    }
    std::vector<Similarity> maps;
    std::size_t k = 0;
    for (const Json& m : j.at("maps")) {
        std::string where = "maps[" + std::to_string(k++) + "]";
        if (!m.is_object()) fail(ErrorKind::Parse, where + " must be an object");
        maps.push_back({rational_field(m, "r", where), rational_field(m, "t", where)});
    }
    std::string label = j.contains("label") && j.at("label").is_string() ? j.at("label").get<std::string>() : "";
    return Ifs(std::move(maps), std::move(label));
}

Json to_json(const Ifs& ifs) {
    Json maps = Json::array();
    for (const auto& m : ifs.maps()) maps.push_back({{"r", to_string(m.ratio)}, {"t", to_string(m.translation)}});
    return {{"label", ifs.label()}, {"maps", std::move(maps)}};
}

Ifs load_ifs(const std::filesystem::path& path) { return ifs_from_json(load_json(path)); }

ParamMeasure param_measure_from_json(const Json& j) {
    auto range = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2) {
            fail(ErrorKind::Parse, std::string("parameter measure needs \"") + key + "\": [lo, hi]");
        }
        return Range{static_cast<double>(to_long_double(rational_value(j.at(key)[0], key))),
                     static_cast<double>(to_long_double(rational_value(j.at(key)[1], key)))};
    };
    Range scale = range("scale");
    Range trans = range("trans");
    if (!j.contains("grid") || !j.at("grid").is_array() || j.at("grid").size() != 2) {
        fail(ErrorKind::Parse, "parameter measure needs \"grid\": [scale_cells, trans_cells]");
    }
    auto scale_cells = j.at("grid")[0].get<std::size_t>();
    auto trans_cells = j.at("grid")[1].get<std::size_t>();
    if (j.contains("masses")) {
        return ParamMeasure(scale, trans, scale_cells, trans_cells, j.at("masses").get<std::vector<double>>());
    }
    return ParamMeasure::uniform(scale, trans, scale_cells, trans_cells);
}

Json to_json(const SeparationCertificate& cert) {
    return {{"kind", to_string(cert.kind)}, {"gap", to_string(cert.gap)}, {"depth", cert.depth}, {"witness", cert.witness}};
}

Json to_json(const EmbeddingVerdict& verdict) {
    Json j = {{"status", to_string(verdict.status)},
              {"resolution", to_string(verdict.resolution)},
              {"checked", verdict.checked},
              {"rejected", verdict.rejected}};
    if (verdict.witness_word) {
        j["witness"] = {{"word", word_to_string(*verdict.witness_word)},
                        {"image", {to_string(verdict.witness_image->lo), to_string(verdict.witness_image->hi)}}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json to_json(const CommensurabilityResult& result) {
    Json j = {{"verdict", to_string(result.verdict)}};
    if (result.verdict == CommensurabilityVerdict::Rational) {
        j["p"] = result.p;
        j["q"] = result.q;
    }
    j["certificate"] = result.certificate;
    return j;
}

Json to_json(const ExponentMatrix& matrix) {
    Json rows = Json::array();
    for (const auto& row : matrix.rows) {
        if (!row.t) {
            rows.push_back({{"t", nullptr}, {"nonnegative", false}});
            continue;
        }
        Json t = Json::array();
        for (const auto& x : *row.t) t.push_back(to_string(x));
        rows.push_back({{"t", std::move(t)}, {"nonnegative", row.nonnegative}});
    }
    return {{"rows", std::move(rows)}};
}

Json to_json(const PisotVerdict& verdict) {
    Json roots = Json::array();
    for (const auto& r : verdict.roots) roots.push_back({format_number(r.real(), 15), format_number(r.imag(), 15)});
    Json moduli = Json::array();
    for (long double m : verdict.conjugate_moduli) moduli.push_back(format_number(m, 15));
    Json j = {{"polynomial", verdict.polynomial},
              {"is_pisot", verdict.is_pisot},
              {"boundary", verdict.boundary},
              {"dominant_root", verdict.dominant_root ? Json(format_number(*verdict.dominant_root, 15)) : Json(nullptr)},
              {"conjugate_moduli", std::move(moduli)},
              {"roots", std::move(roots)},
              {"max_residual", format_number(verdict.max_residual, 3)}};
    return j;
}

std::string format_number(long double x, int digits) {
    if (x == 0) x = 0;  // drop the sign of negative zero
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*Lg", digits, x);
    return buffer;
}

}  // namespace ifslab

#include "ifslab/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"

#include "ifslab/commensurability.hpp"
#include "ifslab/dimension.hpp"
#include "ifslab/embedding.hpp"
#include "ifslab/error.hpp"
#include "ifslab/io.hpp"
#include "ifslab/measures.hpp"
#include "ifslab/suite.hpp"

namespace ifslab::cli {

std::string csv_header(const ExperimentConfig& config) {
    std::string h = std::string("# ") + kToolName + " " + kVersion + "\n# command: " + config.command + "\n";
    for (const auto& in : config.inputs) h += "# input: " + in + "\n";
    for (const auto& [k, v] : config.parameters) h += "# " + k + ": " + v + "\n";
    return h;
}

namespace {

Json json_header(const ExperimentConfig& config) {
    Json params = Json::object();
    for (const auto& [k, v] : config.parameters) params[k] = v;
    return {{"tool", std::string(kToolName) + " " + kVersion},
            {"command", config.command},
            {"inputs", config.inputs},
            {"parameters", std::move(params)}};
}

void emit(const ExperimentConfig& config, const std::string& text, std::ostream& out) {
    if (config.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(config.output, std::ios::binary);
    if (!file) fail(ErrorKind::Parse, "cannot write " + config.output);
    file << text;
}

std::string emit_json(const ExperimentConfig& config, Json body) {
    Json j = {{"config", json_header(config)}};
    for (auto& [k, v] : body.items()) j[k] = std::move(v);
    return j.dump(2) + "\n";
}

Similarity parse_map(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) fail(ErrorKind::Parse, "expected --g \"ratio,translation\", got '" + text + "'");
    Similarity g{parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
    if (g.ratio == 0) fail(ErrorKind::InvalidParameter, "embedding ratio must be nonzero");
    return g;
}

std::vector<double> parse_weights(const std::string& text, const Ifs& ifs) {
    if (text == "maximal") return maximal_weights(ifs);
    std::vector<double> w;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) w.push_back(static_cast<double>(to_long_double(parse_rational(item))));
    return w;
}

std::vector<long long> parse_polynomial(const std::string& text) {
    std::vector<long long> coeffs;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        Rational c = parse_rational(item);
        if (c.get_den() != 1 || !c.get_num().fits_slong_p()) fail(ErrorKind::Parse, "polynomial coefficients must be integers");
        coeffs.push_back(c.get_num().get_si());
    }
    return coeffs;
}

bool check_expectation(const std::optional<std::string>& expect, const std::string& actual, std::ostream& err) {
    if (!expect || *expect == actual) return true;
    err << "expectation failed: expected " << *expect << ", got " << actual << "\n";
    return false;
}

std::string entropy_csv(const ExperimentConfig& config, const EntropyCurve& curve) {
    std::string text = csv_header(config) + "n,H_bits\n";
    for (const auto& [n, h] : curve.points) text += std::to_string(n) + "," + format_number(h) + "\n";
    text += "slope," + format_number(curve.slope) + "\n";
    return text;
}

}  // namespace

int run_experiment(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Self-similar sets, entropy dimension and affine embeddings on the line", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    ExperimentConfig config;
    std::string input_a, input_b, output;
    std::optional<std::string> expect;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-o,--output", output, "Write the artifact to this file instead of standard output");
    };

    auto* dim = app.add_subcommand("dim", "Similarity dimension (Moran equation)");
    dim->add_option("ifs", input_a, "IFS JSON file")->required();
    add_common(dim);

    std::optional<std::size_t> depth;
    auto* separation = app.add_subcommand("separation", "Strong separation / hull open-set certificate");
    separation->add_option("ifs", input_a, "IFS JSON file")->required();
    separation->add_option("--depth", depth, "Refinement depth (default: 4, deepening to 12)");
    separation->add_option("--expect", expect, "Exit 1 unless the kind matches (SSC, OSC-hull, none)");
    add_common(separation);

    int level = 16, out_level = -1, n_min = 1, n_max = 0;
    std::string weights = "maximal";
    auto* entropy = app.add_subcommand("entropy", "Entropy curve of a self-similar measure");
    entropy->add_option("ifs", input_a, "IFS JSON file")->required();
    entropy->add_option("--level", level, "Discretisation level")->required();
    entropy->add_option("--nmin", n_min, "First partition level")->required();
    entropy->add_option("--nmax", n_max, "Last partition level")->required();
    entropy->add_option("--weights", weights, "\"maximal\" or comma-separated probabilities");
    add_common(entropy);

    auto* convolve = app.add_subcommand("convolve", "Entropy curve of nu.mu");
    convolve->add_option("nu", input_a, "Parameter measure JSON file")->required();
    convolve->add_option("ifs", input_b, "IFS JSON file for mu")->required();
    convolve->add_option("--level", level, "Discretisation level of mu")->required();
    convolve->add_option("--out-level", out_level, "Level of nu.mu (default: --level)");
    convolve->add_option("--nmin", n_min, "First partition level")->required();
    convolve->add_option("--nmax", n_max, "Last partition level")->required();
    convolve->add_option("--weights", weights, "\"maximal\" or comma-separated probabilities");
    add_common(convolve);

    std::string g_text = "1,0", res_text = "2^-16";
    auto* embed = app.add_subcommand("embed-check", "Certified check of g(F) inside E at a resolution");
    embed->add_option("F", input_a, "IFS JSON file of F")->required();
    embed->add_option("E", input_b, "IFS JSON file of E")->required();
    embed->add_option("--g", g_text, "Affine map \"ratio,translation\"");
    embed->add_option("--res", res_text, "Resolution, rational or 2^-k");
    embed->add_option("--expect", expect, "Exit 1 unless the status matches (consistent, rejected)");
    add_common(embed);

    std::size_t map_index = 1;
    long renorm_max = 200;
    bool self = false;
    auto* renorm = app.add_subcommand("renorm", "Renormalised embedding family");
    renorm->add_option("F", input_a, "IFS JSON file of F")->required();
    renorm->add_option("E", input_b, "IFS JSON file of E (omit with --self)");
    renorm->add_option("--g", g_text, "Affine map \"ratio,translation\"");
    renorm->add_option("--i", map_index, "One-based index of the map of F to follow");
    renorm->add_option("--nmax", renorm_max, "Largest n");
    renorm->add_option("--res", res_text, "Verification resolution, rational or 2^-k");
    renorm->add_flag("--self", self, "Treat g as a self-embedding of F");
    add_common(renorm);

    std::string x_text;
    std::size_t orbit_count = 1000;
    auto* orbit = app.add_subcommand("orbit", "Fractional parts {n x}, n = 1..N");
    orbit->add_option("--x", x_text, "Rational, decimal, or log(a)/log(b)")->required();
    orbit->add_option("--N", orbit_count, "Orbit length");
    add_common(orbit);

    std::string alpha_text, beta_text;
    long q_max = 64;
    auto* commensurable = app.add_subcommand("commensurable", "Decide log(alpha)/log(beta) in Q");
    commensurable->add_option("--alpha", alpha_text, "Ratio in (0,1)")->required();
    commensurable->add_option("--beta", beta_text, "Ratio in (0,1)")->required();
    commensurable->add_option("--qmax", q_max, "Search bound when factorisation gives up");
    commensurable->add_option("--expect", expect, "Exit 1 unless the verdict matches");
    add_common(commensurable);

    auto* exponents = app.add_subcommand("exponents", "Exponents t_ij with alpha_i = prod beta_j^t_ij");
    exponents->add_option("F", input_a, "IFS JSON file of F")->required();
    exponents->add_option("E", input_b, "IFS JSON file of E")->required();
    add_common(exponents);

    std::string poly_text;
    auto* pisot = app.add_subcommand("pisot", "Pisot root pattern of a monic integer polynomial");
    pisot->add_option("--poly", poly_text, "Coefficients, highest degree first: \"1,-1,-1\" is x^2-x-1")->required();
    pisot->add_option("--expect", expect, "Exit 1 unless is_pisot matches (true, false)");
    add_common(pisot);

    std::uint64_t seed = 1;
    auto* suite = app.add_subcommand("paper-suite", "Run every acceptance experiment");
    suite->add_option("--seed", seed, "Seed for the randomised property checks");
    add_common(suite);

    std::vector<std::string> argv_storage{kToolName};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    config.output = output;
    config.seed = seed;
    try {
        if (dim->parsed()) {
            config.command = "dim";
            config.inputs = {input_a};
            Ifs ifs = load_ifs(input_a);
            std::string value = format_number(similarity_dimension(ifs), 15) + "\n";
            emit(config, config.output.empty() ? value : csv_header(config) + value, out);
            return kSuccess;
        }
        if (separation->parsed()) {
            config.command = "separation";
            config.inputs = {input_a};
            config.parameters = {{"depth", depth ? std::to_string(*depth) : "auto"}};
            Ifs ifs = load_ifs(input_a);
            SeparationCertificate ssc = depth ? ssc_gap(ifs, *depth) : certify_ssc(ifs);
            SeparationCertificate osc = check_osc_hull(ifs);
            const SeparationCertificate& chosen = ssc.kind == SeparationKind::SSC ? ssc : osc;
            Json body = to_json(chosen);
            body["ssc"] = to_json(ssc);
            body["osc_hull"] = to_json(osc);
            emit(config, emit_json(config, body), out);
            return check_expectation(expect, to_string(chosen.kind), err) ? kSuccess : kMismatch;
        }
        if (entropy->parsed()) {
            config.command = "entropy";
            config.inputs = {input_a};
            config.parameters = {{"level", std::to_string(level)}, {"nmin", std::to_string(n_min)},
                                 {"nmax", std::to_string(n_max)}, {"weights", weights}};
            Ifs ifs = load_ifs(input_a);
            auto mu = self_similar_measure(ifs, parse_weights(weights, ifs), level);
            emit(config, entropy_csv(config, entropy_dimension(mu, n_min, n_max)), out);
            return kSuccess;
        }
        if (convolve->parsed()) {
            if (out_level < 0) out_level = level;
            config.command = "convolve";
            config.inputs = {input_a, input_b};
            config.parameters = {{"level", std::to_string(level)}, {"out_level", std::to_string(out_level)},
                                 {"nmin", std::to_string(n_min)}, {"nmax", std::to_string(n_max)}, {"weights", weights}};
            ParamMeasure nu = param_measure_from_json(load_json(input_a));
            Ifs ifs = load_ifs(input_b);
            auto mu = self_similar_measure(ifs, parse_weights(weights, ifs), level);
            emit(config, entropy_csv(config, entropy_dimension(act_convolve(nu, mu, out_level), n_min, n_max)), out);
            return kSuccess;
        }
        if (embed->parsed()) {
            config.command = "embed-check";
            config.inputs = {input_a, input_b};
            config.parameters = {{"g", g_text}, {"res", res_text}};
            auto verdict = verify_embedding(parse_map(g_text), load_ifs(input_a), load_ifs(input_b), parse_resolution(res_text));
            emit(config, emit_json(config, to_json(verdict)), out);
            return check_expectation(expect, to_string(verdict.status), err) ? kSuccess : kMismatch;
        }
        if (renorm->parsed()) {
            config.command = "renorm";
            config.inputs = {input_a};
            if (!self) {
                if (input_b.empty()) fail(ErrorKind::Parse, "renorm needs E unless --self is given");
                config.inputs.push_back(input_b);
            }
            config.parameters = {{"g", g_text}, {"i", std::to_string(map_index)}, {"nmax", std::to_string(renorm_max)},
                                 {"res", res_text}, {"self", self ? "true" : "false"}};
            if (map_index < 1) fail(ErrorKind::InvalidWord, "--i is one-based");
            RenormalizationOptions options;
            options.resolution = parse_resolution(res_text);
            Ifs f = load_ifs(input_a);
            RenormalizationFamily family = self ? self_embedding_family(parse_map(g_text), f, renorm_max, options)
                                                : renormalize_family(parse_map(g_text), f, load_ifs(input_b), map_index - 1,
                                                                     renorm_max, options);
            std::string text = csv_header(config);
            text += "# kappa: " + to_string(family.kappa) + "\n# c: " + to_string(family.c) + "\n# p: " +
                    std::to_string(family.p) + "\n# N: " + std::to_string(family.N) + "\n# eta bracket: [" +
                    to_string(family.scale_bracket.lo) + ", " + to_string(family.scale_bracket.hi) + "]\n# t bounds: [" +
                    to_string(family.t_bounds.lo) + ", " + to_string(family.t_bounds.hi) + "]\n";
            text += "n,l_n,frac_n,eta_n,t_n,verified\n";
            for (const auto& e : family.entries) {
                text += std::to_string(e.n) + "," + std::to_string(e.l_n) + "," + format_number(e.frac) + "," +
                        format_number(to_long_double(e.scale)) + "," + format_number(to_long_double(e.translation)) + "," +
                        (e.verified ? "true" : "false") + "\n";
            }
            emit(config, text, out);
            return family.stopped_early ? kMismatch : kSuccess;
        }
        if (orbit->parsed()) {
            config.command = "orbit";
            config.parameters = {{"x", x_text}, {"N", std::to_string(orbit_count)}};
            static const std::regex log_form(R"(\s*log\(([^()]+)\)\s*/\s*log\(([^()]+)\)\s*)");
            std::smatch m;
            CoverageReport report;
            if (std::regex_match(x_text, m, log_form)) {
                Rational a = parse_rational(m[1].str());
                Rational b = parse_rational(m[2].str());
                if (a <= 0 || b <= 0 || b == 1) fail(ErrorKind::InvalidParameter, "log arguments must be positive, denominator != 1");
                report = fractional_orbit(log_ratio(a, b).convert_to<long double>(), orbit_count);
            } else {
                report = fractional_orbit(parse_rational(x_text), orbit_count);
            }
            std::string text = csv_header(config) + "rank,frac\n";
            for (std::size_t k = 0; k < report.parts.size(); ++k) {
                text += std::to_string(k + 1) + "," + format_number(report.parts[k]) + "\n";
            }
            text += "summary,max_gap=" + format_number(report.max_gap) + ";distinct_gaps=" +
                    std::to_string(report.distinct_gap_lengths) + ";distinct_values=" + std::to_string(report.distinct_values) + "\n";
            emit(config, text, out);
            return kSuccess;
        }
        if (commensurable->parsed()) {
            config.command = "commensurable";
            config.parameters = {{"alpha", alpha_text}, {"beta", beta_text}, {"qmax", std::to_string(q_max)}};
            auto result = log_commensurable(parse_rational(alpha_text), parse_rational(beta_text), q_max);
            emit(config, emit_json(config, to_json(result)), out);
            return check_expectation(expect, to_string(result.verdict), err) ? kSuccess : kMismatch;
        }
        if (exponents->parsed()) {
            config.command = "exponents";
            config.inputs = {input_a, input_b};
            Ifs f = load_ifs(input_a);
            Ifs e = load_ifs(input_b);
            ExponentMatrix matrix = conjecture_exponents(f, e);
            emit(config, emit_json(config, to_json(matrix)), out);
            return kSuccess;
        }
        if (pisot->parsed()) {
            config.command = "pisot";
            config.parameters = {{"poly", poly_text}};
            auto verdict = is_pisot(parse_polynomial(poly_text));
            emit(config, emit_json(config, to_json(verdict)), out);
            return check_expectation(expect, verdict.is_pisot ? "true" : "false", err) ? kSuccess : kMismatch;
        }
        if (suite->parsed()) {
            config.command = "paper-suite";
            config.parameters = {{"seed", std::to_string(seed)}};
            auto results = run_reference_suite(seed);
            bool all = true;
            for (const auto& r : results) {
                all = all && r.pass;
                if (r.time_limit > 0) {
                    err << "criterion " << r.id << ": " << r.seconds << " s (limit " << r.time_limit << " s)\n";
                }
            }
            emit(config, csv_header(config) + format_suite(results), out);
            return all ? kSuccess : kMismatch;
        }
    } catch (const Error& e) {
        err << kToolName << ": " << e.what() << "\n";
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        err << kToolName << ": " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace ifslab::cli

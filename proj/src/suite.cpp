#include "ifslab/suite.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "ifslab/commensurability.hpp"
#include "ifslab/dimension.hpp"
#include "ifslab/embedding.hpp"
#include "ifslab/io.hpp"
#include "ifslab/measures.hpp"
#include "ifslab/parallel.hpp"

namespace ifslab {
namespace {

Ifs central_cantor(const Rational& ratio, const std::string& label) {
    return Ifs({{ratio, 0}, {ratio, 1 - ratio}}, label);
}

std::string num(long double x, int digits = 15) { return format_number(x, digits); }

struct Timed {
    bool pass;
    std::string detail;
};

CriterionResult timed(int id, std::string title, double limit, const std::function<Timed()>& body) {
    auto start = std::chrono::steady_clock::now();
    Timed t = body();
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CriterionResult r{id, std::move(title), t.pass, std::move(t.detail), seconds, limit};
    if (limit > 0 && seconds > limit) r.pass = false;
    return r;
}

// Random probability vector from raw generator bits, so the sample is the same
// on every standard library.
std::vector<double> random_masses(std::mt19937_64& rng, std::size_t count, double zero_fraction) {
    std::vector<double> m(count);
    double sum = 0;
    for (auto& x : m) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x = v < zero_fraction ? 0.0 : u + 1e-3;
        sum += x;
    }
    if (sum == 0) {
        m[0] = 1;
        sum = 1;
    }
    for (auto& x : m) x /= sum;
    return m;
}

std::vector<CriterionResult> core_criteria(std::uint64_t seed) {
    const Ifs c13 = central_cantor(Rational(1, 3), "C13");
    const Ifs c19 = central_cantor(Rational(1, 9), "C19");
    const Ifs c14 = central_cantor(Rational(1, 4), "C14");
    const long double log2_log3 = std::log(2.0L) / std::log(3.0L);

    std::vector<CriterionResult> results;

    results.push_back(timed(1, "similarity dimension", 0.2, [&] {
        double s13 = similarity_dimension(c13);
        double s14 = similarity_dimension(c14);
        bool pass = std::abs(s13 - 0.63092975357145743) <= 1e-12 && std::abs(s14 - 0.5) <= 1e-12;
        return Timed{pass, "dim C13 = " + num(s13) + ", dim C14 = " + num(s14)};
    }));

    results.push_back(timed(2, "entropy dimension of the C13 maximal measure", 10, [&] {
        auto weights = maximal_weights(c13);
        auto mu = self_similar_measure(c13, weights, 22);
        auto curve = entropy_dimension(mu, 8, 20);
        bool pass = std::abs(curve.slope - static_cast<double>(log2_log3)) <= 0.02;
        return Timed{pass, "slope over n in [8,20] = " + num(curve.slope, 6) + " (target " + num(log2_log3, 6) + ")"};
    }));

    results.push_back(timed(3, "Lebesgue calibration", 0, [&] {
        auto leb = DyadicMeasure::lebesgue(12);
        bool exact = true;
        for (int n = 0; n <= 12; ++n) exact = exact && shannon_entropy(leb, n) == n;
        auto curve = entropy_dimension(leb, 4, 12);
        return Timed{exact && curve.slope == 1.0, std::string("H(D_n) = n exactly: ") + (exact ? "yes" : "no") +
                                                       ", slope = " + num(curve.slope, 17)};
    }));

    results.push_back(timed(4, "embedding verification", 5, [&] {
        auto ok = verify_embedding(Similarity::identity(), c19, c13, pow2(-16));
        auto bad = verify_embedding(Similarity::identity(), c14, c13, pow2(-10));
        EmbeddingChecker checker(c13, pow2(-10));
        bool witness_ok = bad.witness_image && !checker.hits(*bad.witness_image);
        bool pass = ok.status == VerdictStatus::Consistent && ok.rejected == 0 && bad.status == VerdictStatus::Rejected &&
                    witness_ok;
        std::string detail = "C19->C13 " + to_string(ok.status) + " (" + std::to_string(ok.rejected) + " rejected of " +
                             std::to_string(ok.checked) + "); C14->C13 " + to_string(bad.status);
        if (bad.witness_word) {
            detail += ", witness " + word_to_string(*bad.witness_word) + " -> [" + to_string(bad.witness_image->lo) + ", " +
                      to_string(bad.witness_image->hi) + "]";
        }
        return Timed{pass, detail};
    }));

    results.push_back(timed(5, "renormalization family, commensurable case", 0, [&] {
        auto family = renormalize_family(Similarity::identity(), c19, c13, 0, 200);
        bool pass = !family.entries.empty() && !family.stopped_early;
        std::set<Rational> fracs;
        for (const auto& e : family.entries) {
            pass = pass && e.verified && e.in_bracket && e.in_t_bounds;
            fracs.insert(pow(Rational(1, 9), e.n) / pow(Rational(1, 3), e.l_n));
        }
        pass = pass && fracs.size() == 1 && family.entries.back().n == 200;
        return Timed{pass, "p = " + std::to_string(family.p) + ", N = " + std::to_string(family.N) + ", " +
                               std::to_string(family.entries.size()) + " entries, " + std::to_string(fracs.size()) +
                               " distinct fractional part(s), all verified: " + (pass ? "yes" : "no")};
    }));

    results.push_back(timed(6, "three-distance and rational orbits", 0, [&] {
        auto orbit = fractional_orbit(log_ratio(Rational(1, 2), Rational(1, 3)).convert_to<long double>(), 1000);
        bool pass = orbit.distinct_gap_lengths <= 3 && orbit.max_gap <= 0.005;
        std::string detail = "x = log(1/2)/log(1/3): " + std::to_string(orbit.distinct_gap_lengths) + " gap lengths, max gap " +
                             num(orbit.max_gap, 6) + "; rationals:";
        std::mt19937_64 rng(seed);
        for (int k = 0; k < 5; ++k) {
            long q = 2 + static_cast<long>(rng() % 40);
            long p = 1 + static_cast<long>(rng() % static_cast<unsigned long>(q - 1));
            Rational x(p, q);
            x.canonicalize();
            auto r = fractional_orbit(x, 200);
            pass = pass && r.distinct_values <= x.get_den().get_ui();
            detail += " " + to_string(x) + "->" + std::to_string(r.distinct_values);
        }
        return Timed{pass, detail};
    }));

    results.push_back(timed(7, "convolution entropy growth", 30, [&] {
        auto mu = self_similar_measure(c13, maximal_weights(c13), 16);
        auto nu = ParamMeasure::uniform({1.0 / 3.0, 1.0}, {0.0, 0.0}, 200, 1);
        auto conv = act_convolve(nu, mu, 16);
        double h_mu = shannon_entropy(mu, 14) / 14;
        double h_conv = shannon_entropy(conv, 14) / 14;
        bool pass = h_conv >= h_mu + 0.05;
        return Timed{pass, "H(mu)/14 = " + num(h_mu, 6) + ", H(nu.mu)/14 = " + num(h_conv, 6) + ", gap " + num(h_conv - h_mu, 6)};
    }));

    results.push_back(timed(8, "entropy monotonicity and mass conservation", 0, [&] {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        int monotone = 0, shifted = 0, conserved = 0;
        const int trials = 100;
        for (int k = 0; k < trials; ++k) {
            const int level = 12;
            std::size_t cells = 1 + rng() % 3000;
            auto origin = static_cast<std::int64_t>(rng() % 4096);
            DyadicMeasure theta(level, origin, random_masses(rng, cells, 0.3));
            bool mono = true;
            for (int n = 0; n < level; ++n) mono = mono && shannon_entropy(theta, n + 1) >= shannon_entropy(theta, n) - 1e-12;
            monotone += mono;

            Rational t(static_cast<long>(rng() % 100000) - 50000, 1 + static_cast<long>(rng() % 99999));
            t.canonicalize();
            auto moved = pushforward({1, t}, theta, level);
            bool close = true;
            for (int n : {2, 6, 10, 12}) close = close && std::abs(shannon_entropy(moved, n) - shannon_entropy(theta, n)) <= 2;
            shifted += close;

            auto nu = ParamMeasure::uniform({0.5, 1.5}, {-0.25, 0.25}, 3, 3);
            auto conv = act_convolve(nu, theta, level);
            conserved += std::abs(moved.total() - 1) <= 1e-9 && std::abs(coarsen(theta, 5).total() - 1) <= 1e-9 &&
                         std::abs(conv.total() - 1) <= 1e-9;
        }
        bool pass = monotone == trials && shifted == trials && conserved == trials;
        return Timed{pass, "refinement monotone " + std::to_string(monotone) + "/100, translation within 2 bits " +
                               std::to_string(shifted) + "/100, mass conserved " + std::to_string(conserved) + "/100"};
    }));

    results.push_back(timed(9, "commensurability", 0.1, [&] {
        auto a = log_commensurable(Rational(1, 9), Rational(1, 3));
        auto b = log_commensurable(Rational(1, 2), Rational(1, 3));
        auto c = log_commensurable(Rational(8, 27), Rational(2, 3));
        Ifs f({{Rational(1, 6), 0}, {Rational(1, 6), Rational(5, 6)}}, "F");
        Ifs e({{Rational(1, 2), 0}, {Rational(1, 3), Rational(2, 3)}}, "E");
        auto m = conjecture_exponents(f, e);
        bool pass = a.verdict == CommensurabilityVerdict::Rational && a.p == 2 && a.q == 1 &&
                    b.verdict == CommensurabilityVerdict::Incommensurable &&
                    c.verdict == CommensurabilityVerdict::Rational && c.p == 3 && c.q == 1 && m.rows[0].t &&
                    *m.rows[0].t == std::vector<Rational>{1, 1};
        std::string row = m.rows[0].t ? "[" + to_string((*m.rows[0].t)[0]) + ", " + to_string((*m.rows[0].t)[1]) + "]" : "none";
        return Timed{pass, "(1/9,1/3) " + to_string(a.verdict) + "(" + std::to_string(a.p) + "," + std::to_string(a.q) +
                               "); (1/2,1/3) " + to_string(b.verdict) + "; (8/27,2/3) " + to_string(c.verdict) + "(" +
                               std::to_string(c.p) + "," + std::to_string(c.q) + "); exponents " + row};
    }));

    results.push_back(timed(10, "Pisot predicate", 0, [&] {
        struct Case {
            std::vector<long long> poly;
            bool expected;
            const char* name;
        };
        std::vector<Case> cases{{{1, -2}, true, "x-2"}, {{1, -1, -1}, true, "x^2-x-1"}, {{1, -2, -1}, true, "x^2-2x-1"},
                                {{1, 0, -3}, false, "x^2-3"}};
        bool pass = true;
        std::string detail;
        for (const auto& c : cases) {
            auto v = is_pisot(c.poly);
            pass = pass && v.is_pisot == c.expected && v.max_residual <= 1e-10;
            detail += std::string(detail.empty() ? "" : "; ") + c.name + " " + (v.is_pisot ? "true" : "false");
        }
        return Timed{pass, detail};
    }));

    return results;
}

}  // namespace

std::vector<CriterionResult> run_reference_suite(std::uint64_t seed) {
    unsigned saved = parallel::thread_count();
    parallel::set_thread_count(1);
    auto single = core_criteria(seed);
    parallel::set_thread_count(8);
    auto multi = core_criteria(seed);
    parallel::set_thread_count(saved);

    bool identical = single.size() == multi.size();
    for (std::size_t k = 0; identical && k < single.size(); ++k) identical = single[k].detail == multi[k].detail;
    single.push_back(CriterionResult{11, "determinism across thread counts", identical,
                                     std::string("outputs at 1 and 8 threads ") + (identical ? "identical" : "differ"), 0, 0});
    return single;
}

std::string format_suite(const std::vector<CriterionResult>& results) {
    std::ostringstream out;
    for (const auto& r : results) {
        out << (r.pass ? "PASS" : "FAIL") << "  " << (r.id < 10 ? " " : "") << r.id << "  " << r.title << ": " << r.detail
            << '\n';
    }
    return out.str();
}

}  // namespace ifslab

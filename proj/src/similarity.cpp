#include "ifslab/similarity.hpp"

#include <algorithm>
#include <utility>

#include "ifslab/error.hpp"

namespace ifslab {

Rational distance(const Interval& a, const Interval& b) {
    if (a.hi < b.lo) return b.lo - a.hi;
    if (b.hi < a.lo) return a.lo - b.hi;
    return 0;
}

Similarity compose(const Similarity& g, const Similarity& h) {
    return {g.ratio * h.ratio, g.ratio * h.translation + g.translation};
}

Similarity invert(const Similarity& g) {
    if (g.ratio == 0) fail(ErrorKind::InvalidParameter, "cannot invert a map with ratio 0");
    Rational inv = 1 / g.ratio;
    return {inv, -g.translation * inv};
}

Interval apply(const Similarity& g, const Interval& x) {
    Rational a = g(x.lo);
    Rational b = g(x.hi);
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

std::string word_to_string(const Word& w) {
    std::string s = "(";
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(w[k] + 1);
    }
    return s + ")";
}

Ifs::Ifs(std::vector<Similarity> maps, std::string label) : maps_(std::move(maps)), label_(std::move(label)) {
    if (maps_.size() < 2) fail(ErrorKind::InvalidParameter, "an IFS needs at least two maps");
    for (auto& m : maps_) {
        m.ratio.canonicalize();
        m.translation.canonicalize();
        if (!(m.ratio > 0 && m.ratio < 1)) {
            fail(ErrorKind::InvalidParameter, "IFS ratio " + to_string(m.ratio) + " is outside (0,1)");
        }
    }
}

bool Ifs::homogeneous() const {
    return std::all_of(maps_.begin(), maps_.end(), [&](const Similarity& m) { return m.ratio == maps_.front().ratio; });
}

Similarity cylinder_map(const Ifs& ifs, const Word& word) {
    Similarity g = Similarity::identity();
    for (std::size_t i : word) {
        if (i >= ifs.size()) {
            fail(ErrorKind::InvalidWord, "word index " + std::to_string(i + 1) + " exceeds IFS size " +
                                             std::to_string(ifs.size()));
        }
        g = compose(g, ifs.map(i));
    }
    return g;
}

Interval attractor_hull(const Ifs& ifs) {
    // With positive ratios the endpoints are the extreme fixed points t/(1-r).
    Rational lo, hi;
    bool first = true;
    for (const auto& m : ifs.maps()) {
        Rational fixed = m.translation / (1 - m.ratio);
        if (first || fixed < lo) lo = fixed;
        if (first || fixed > hi) hi = fixed;
        first = false;
    }
    return {lo, hi};
}

namespace {

void expand(const Ifs& ifs, const Interval& hull, const Rational& delta, Word& word, const Similarity& g,
            std::vector<Cylinder>& out) {
    Interval image = apply(g, hull);
    if (image.diameter() <= delta) {
        out.push_back({word, g, std::move(image)});
        return;
    }
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        word.push_back(i);
        expand(ifs, hull, delta, word, compose(g, ifs.map(i)), out);
        word.pop_back();
    }
}

void expand_depth(const Ifs& ifs, const Interval& hull, std::size_t remaining, Word& word, const Similarity& g,
                  std::vector<Cylinder>& out) {
    if (remaining == 0) {
        out.push_back({word, g, apply(g, hull)});
        return;
    }
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        word.push_back(i);
        expand_depth(ifs, hull, remaining - 1, word, compose(g, ifs.map(i)), out);
        word.pop_back();
    }
}

}  // namespace

std::vector<Cylinder> cylinder_cover(const Ifs& ifs, const Rational& delta) {
    if (delta <= 0) fail(ErrorKind::InvalidParameter, "cover resolution must be positive");
    std::vector<Cylinder> out;
    Word word;
    expand(ifs, attractor_hull(ifs), delta, word, Similarity::identity(), out);
    return out;
}

std::vector<Cylinder> cylinders_at_depth(const Ifs& ifs, std::size_t depth, const Word& prefix) {
    std::vector<Cylinder> out;
    Word word = prefix;
    expand_depth(ifs, attractor_hull(ifs), depth, word, cylinder_map(ifs, prefix), out);
    return out;
}

}  // namespace ifslab

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ifslab/rational.hpp"

namespace ifslab {

/// The affine map x -> ratio * x + translation (ratio != 0).
struct Similarity {
    Rational ratio{1};
    Rational translation{0};

    static Similarity identity() { return {}; }

    Rational operator()(const Rational& x) const { return ratio * x + translation; }

    bool contracting() const { return abs(ratio) < 1 && ratio != 0; }

    friend bool operator==(const Similarity& a, const Similarity& b) {
        return a.ratio == b.ratio && a.translation == b.translation;
    }
};

/// Closed interval [lo, hi] with exact endpoints.
struct Interval {
    Rational lo;
    Rational hi;

    Rational diameter() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
    bool intersects(const Interval& other) const { return !(hi < other.lo || other.hi < lo); }

    friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

/// Gap between two closed intervals; zero when they meet.
Rational distance(const Interval& a, const Interval& b);

/// g(x) = g(h(x)).
Similarity compose(const Similarity& g, const Similarity& h);
Similarity invert(const Similarity& g);
Interval apply(const Similarity& g, const Interval& x);

/// Word over the maps of an IFS. Indices are zero-based here; text and JSON
/// renderings are one-based.
using Word = std::vector<std::size_t>;

std::string word_to_string(const Word& w);

/// A finite family of at least two contracting similarities with ratios in (0,1).
class Ifs {
public:
    Ifs(std::vector<Similarity> maps, std::string label = {});

    const std::vector<Similarity>& maps() const { return maps_; }
    const Similarity& map(std::size_t i) const { return maps_.at(i); }
    std::size_t size() const { return maps_.size(); }
    const std::string& label() const { return label_; }

    bool homogeneous() const;

private:
    std::vector<Similarity> maps_;
    std::string label_;
};

/// phi_{w_1} o ... o phi_{w_k}; identity for the empty word.
Similarity cylinder_map(const Ifs& ifs, const Word& word);

/// Smallest interval J with phi_i(J) inside J for every map; its endpoints lie in the attractor.
Interval attractor_hull(const Ifs& ifs);

struct Cylinder {
    Word word;
    Similarity map;
    Interval hull;
};

/// Depth-first cylinder expansion, each branch stopping once its hull has
/// diameter <= delta. Output is in lexicographic word order.
std::vector<Cylinder> cylinder_cover(const Ifs& ifs, const Rational& delta);

/// All cylinders of exactly `depth` letters below `prefix`, lexicographic order.
std::vector<Cylinder> cylinders_at_depth(const Ifs& ifs, std::size_t depth, const Word& prefix = {});

}  // namespace ifslab

#include "ifslab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace ifslab {

double similarity_dimension(const Ifs& ifs) {
    std::vector<long double> ratios;
    ratios.reserve(ifs.size());
    for (const auto& m : ifs.maps()) ratios.push_back(to_long_double(m.ratio));
    long double max_ratio = *std::max_element(ratios.begin(), ratios.end());

    auto excess = [&](long double s) {
        long double sum = 0;
        for (long double r : ratios) sum += std::pow(r, s);
        return sum - 1;
    };

    // sum r_i^s is strictly decreasing in s; the upper end makes it <= 1.
    long double lo = 0;
    long double hi = 1 + std::log(static_cast<long double>(ratios.size())) / -std::log(max_ratio);
    for (;;) {
        long double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        if (excess(mid) > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return static_cast<double>(std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi);
}

std::string to_string(SeparationKind kind) {
    switch (kind) {
        case SeparationKind::SSC: return "SSC";
        case SeparationKind::OscHull: return "OSC-hull";
        case SeparationKind::None: return "none";
    }
    return "none";
}

namespace {

struct Tagged {
    const Cylinder* cylinder;
    std::size_t tag;
};

}  // namespace

SeparationCertificate ssc_gap(const Ifs& ifs, std::size_t depth) {
    std::vector<Cylinder> pieces = cylinders_at_depth(ifs, depth + 1);
    std::vector<Tagged> order;
    order.reserve(pieces.size());
    for (const auto& c : pieces) order.push_back({&c, c.word.front()});
    std::stable_sort(order.begin(), order.end(),
                     [](const Tagged& a, const Tagged& b) { return a.cylinder->hull.lo < b.cylinder->hull.lo; });

    // Sweep by left endpoint keeping the furthest-reaching interval of the two
    // best distinct first letters; the nearest foreign neighbour on the left
    // is then always one of them.
    std::optional<Tagged> top, second;
    std::optional<Rational> gap;
    const Cylinder* left = nullptr;
    const Cylinder* right = nullptr;
    for (const Tagged& x : order) {
        const std::optional<Tagged>& other = (top && top->tag != x.tag) ? top : second;
        if (other) {
            Rational d = distance(other->cylinder->hull, x.cylinder->hull);
            if (!gap || d < *gap) {
                gap = d;
                left = other->cylinder;
                right = x.cylinder;
            }
        }
        if (top && top->tag == x.tag) {
            if (x.cylinder->hull.hi > top->cylinder->hull.hi) top = x;
        } else if (!top || x.cylinder->hull.hi > top->cylinder->hull.hi) {
            second = top;
            top = x;
        } else if (!second || x.cylinder->hull.hi > second->cylinder->hull.hi) {
            second = x;
        }
    }

    SeparationCertificate cert;
    cert.depth = depth;
    if (!gap) return cert;
    auto describe = [](const Cylinder& c) {
        return word_to_string(c.word) + " [" + to_string(c.hull.lo) + ", " + to_string(c.hull.hi) + "]";
    };
    if (*gap > 0) {
        cert.kind = SeparationKind::SSC;
        cert.gap = *gap;
        cert.witness = "closest pieces " + describe(*left) + " and " + describe(*right);
    } else {
        cert.witness = "pieces " + describe(*left) + " and " + describe(*right) + " meet at depth " +
                       std::to_string(depth);
    }
    return cert;
}

SeparationCertificate certify_ssc(const Ifs& ifs, std::size_t depth, std::size_t max_depth,
                                  std::size_t max_cylinders) {
    SeparationCertificate cert = ssc_gap(ifs, depth);
    while (cert.kind == SeparationKind::None && depth < max_depth) {
        ++depth;
        long double count = std::pow(static_cast<long double>(ifs.size()), static_cast<long double>(depth + 1));
        if (count > static_cast<long double>(max_cylinders)) break;
        cert = ssc_gap(ifs, depth);
    }
    return cert;
}

SeparationCertificate check_osc_hull(const Ifs& ifs) {
    SeparationCertificate cert;
    Interval hull = attractor_hull(ifs);
    if (hull.diameter() == 0) {
        cert.witness = "hull is a single point; its interior is empty";
        return cert;
    }
    std::vector<Interval> images;
    for (const auto& m : ifs.maps()) images.push_back(apply(m, hull));
    std::vector<std::size_t> idx(images.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return images[a].lo < images[b].lo; });
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        const Interval& a = images[idx[k]];
        const Interval& b = images[idx[k + 1]];
        if (a.hi > b.lo) {
            cert.witness = "open images of maps " + std::to_string(idx[k] + 1) + " and " + std::to_string(idx[k + 1] + 1) +
                           " overlap on (" + to_string(b.lo) + ", " + to_string(std::min(a.hi, b.hi)) + ")";
            return cert;
        }
    }
    cert.kind = SeparationKind::OscHull;
    cert.witness = "U = (" + to_string(hull.lo) + ", " + to_string(hull.hi) + ")";
    return cert;
}

}  // namespace ifslab

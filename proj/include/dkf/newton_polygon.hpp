#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace dkf {

struct NewtonPoint {
    std::int64_t x = 0;
    Rational y;
    friend bool operator==(const NewtonPoint&, const NewtonPoint&) = default;
};

struct NewtonSegment {
    Rational slope;
    std::int64_t length = 0;
    friend bool operator==(const NewtonSegment&, const NewtonSegment&) = default;
};

struct NewtonPolygon {
    std::vector<NewtonPoint> points;
    std::vector<NewtonPoint> vertices;
    std::vector<NewtonSegment> segments;

    // Multiset of root valuations: each segment of slope -s and length l
    // contributes l roots of valuation s, listed in increasing order of s.
    std::vector<std::pair<Rational, std::int64_t>> root_valuations() const {
        std::vector<std::pair<Rational, std::int64_t>> out;
        for (auto it = segments.rbegin(); it != segments.rend(); ++it) out.emplace_back(-it->slope, it->length);
        return out;
    }
};

// Lower convex hull of the points (x, v) with finite v. Points with
// std::nullopt valuation (zero coefficients) are skipped.
inline NewtonPolygon newton_polygon(const std::vector<std::pair<std::int64_t, std::optional<Rational>>>& coeff_vals) {
    NewtonPolygon np;
    for (const auto& [x, v] : coeff_vals) {
        if (v) np.points.push_back({x, *v});
    }
    std::sort(np.points.begin(), np.points.end(), [](const NewtonPoint& a, const NewtonPoint& b) { return a.x < b.x; });
    for (std::size_t i = 1; i < np.points.size(); ++i) {
        if (np.points[i].x == np.points[i - 1].x) throw InputError("repeated x-index " + std::to_string(np.points[i].x) + " in Newton polygon input");
    }
    if (np.points.size() < 2) throw DomainError("Newton polygon needs at least two finite points");

    auto cross = [](const NewtonPoint& o, const NewtonPoint& a, const NewtonPoint& b) {
        return Rational(a.x - o.x) * (b.y - o.y) - (a.y - o.y) * Rational(b.x - o.x);
    };
    for (const auto& p : np.points) {
        while (np.vertices.size() >= 2 && cross(np.vertices[np.vertices.size() - 2], np.vertices.back(), p) <= 0) np.vertices.pop_back();
        np.vertices.push_back(p);
    }
    for (std::size_t i = 1; i < np.vertices.size(); ++i) {
        const auto& a = np.vertices[i - 1];
        const auto& b = np.vertices[i];
        np.segments.push_back({(b.y - a.y) / Rational(b.x - a.x), b.x - a.x});
    }
    return np;
}

} // namespace dkf

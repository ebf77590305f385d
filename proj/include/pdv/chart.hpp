#pragma once

/**
 * @file chart.hpp
 * @brief Global polynomial charts: a named list of coordinate functions.
 *
 * Every symbolic object (polynomial, rational function, vector field, form)
 * carries a chart.  Mixing objects from different charts is an error, caught
 * eagerly.  A tangent chart doubles the coordinates of a base chart, appending
 * one fibre velocity per base coordinate.
 */

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdv {

class Chart;
using ChartPtr = std::shared_ptr<const Chart>;

/// A global chart: an ordered list of coordinate names.  Charts compare by
/// content, so structurally identical charts are interchangeable.
class Chart {
public:
    Chart(std::string name, std::vector<std::string> coords)
        : name_(std::move(name)), coords_(std::move(coords)) {
        for (std::size_t i = 0; i < coords_.size(); ++i)
            for (std::size_t j = i + 1; j < coords_.size(); ++j)
                if (coords_[i] == coords_[j])
                    throw std::invalid_argument("duplicate coordinate name: " + coords_[i]);
    }

    const std::string& name() const { return name_; }
    std::size_t dim() const { return coords_.size(); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::string& coord(std::size_t i) const { return coords_.at(i); }

    /// Index of a coordinate by name; throws if absent.
    std::size_t index_of(const std::string& coord) const {
        auto it = std::find(coords_.begin(), coords_.end(), coord);
        if (it == coords_.end())
            throw std::invalid_argument("no coordinate '" + coord + "' in chart " + name_);
        return static_cast<std::size_t>(it - coords_.begin());
    }

    bool operator==(const Chart& other) const { return coords_ == other.coords_; }
    bool operator!=(const Chart& other) const { return !(*this == other); }

private:
    std::string name_;
    std::vector<std::string> coords_;
};

inline ChartPtr make_chart(std::string name, std::vector<std::string> coords) {
    return std::make_shared<Chart>(std::move(name), std::move(coords));
}

/// The tangent chart of a base chart: coordinates (x_1..x_n, v_1..v_n) where
/// v_i is named by prefixing "v_" to the base coordinate name.
inline ChartPtr make_tangent_chart(const ChartPtr& base) {
    std::vector<std::string> coords = base->coords();
    for (const auto& c : base->coords()) coords.push_back("v_" + c);
    return make_chart("T" + base->name(), std::move(coords));
}

/// A product chart; coordinate names are prefixed per factor to stay unique.
inline ChartPtr make_product_chart(const ChartPtr& left, const std::string& left_prefix,
                                   const ChartPtr& right, const std::string& right_prefix) {
    std::vector<std::string> coords;
    for (const auto& c : left->coords()) coords.push_back(left_prefix + c);
    for (const auto& c : right->coords()) coords.push_back(right_prefix + c);
    return make_chart(left->name() + "x" + right->name(), std::move(coords));
}

/// Guard helper: ensure two objects live on the same chart.
inline void require_same_chart(const Chart& a, const Chart& b, const char* what) {
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": chart mismatch (" + a.name() +
                                    " vs " + b.name() + ")");
}

} // namespace pdv

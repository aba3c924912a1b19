#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pollwir/errors.hpp"

namespace pollwir {

/// Row-major 2D sample plane. (x, y) indexes column x of row y;
/// the linear offset is y * width + x.
template <typename T>
class Plane {
public:
    Plane() = default;

    Plane(int width, int height, T fill = T{})
        : width_(width), height_(height), data_(checked_size(width, height), fill) {}

    Plane(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != checked_size(width, height)) {
            throw DimensionError("plane data length " + std::to_string(data_.size()) +
                                 " does not match " + std::to_string(width) + "x" +
                                 std::to_string(height));
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const T& operator()(int x, int y) const {
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    const std::vector<T>& samples() const { return data_; }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    bool same_shape(const Plane& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    static std::size_t checked_size(int width, int height) {
        if (width <= 0 || height <= 0) {
            throw DimensionError("plane dimensions must be positive, got " +
                                 std::to_string(width) + "x" + std::to_string(height));
        }
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using PlaneF = Plane<double>;
using PlaneU8 = Plane<std::uint8_t>;

inline void require_finite_nonnegative(const PlaneF& p, const std::string& name) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i]) || p[i] < 0.0) {
            throw PhysicalityError(name + " has non-finite or negative value " +
                                   std::to_string(p[i]) + " at pixel (" +
                                   std::to_string(i % p.width()) + "," +
                                   std::to_string(i / p.width()) + ")");
        }
    }
}

inline void require_finite(const PlaneF& p, const std::string& name) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i])) {
            throw PhysicalityError(name + " has non-finite value at pixel (" +
                                   std::to_string(i % p.width()) + "," +
                                   std::to_string(i / p.width()) + ")");
        }
    }
}

}  // namespace pollwir

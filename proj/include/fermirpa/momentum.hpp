#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>

namespace fermirpa {

//=============================================================================
// Momentum3: a point of the integer momentum lattice Z^3 on the unit torus.
// All set membership in the geometry layer is decided on norm_sq(), which is
// exact in 64-bit integer arithmetic for every lattice vector we touch.
//=============================================================================
struct Momentum3 {
    int x = 0, y = 0, z = 0;

    constexpr std::int64_t norm_sq() const {
        return static_cast<std::int64_t>(x) * x +
               static_cast<std::int64_t>(y) * y +
               static_cast<std::int64_t>(z) * z;
    }
    double norm() const { return std::sqrt(static_cast<double>(norm_sq())); }
    constexpr bool is_zero() const { return x == 0 && y == 0 && z == 0; }

    friend constexpr Momentum3 operator+(Momentum3 a, Momentum3 b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr Momentum3 operator-(Momentum3 a, Momentum3 b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr Momentum3 operator-(Momentum3 a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr bool operator==(Momentum3 a, Momentum3 b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
    friend constexpr bool operator!=(Momentum3 a, Momentum3 b) { return !(a == b); }
    // Lexicographic order, used for reproducible set enumeration.
    friend constexpr bool operator<(Momentum3 a, Momentum3 b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    }
    friend std::ostream& operator<<(std::ostream& os, Momentum3 k) {
        return os << '(' << k.x << ',' << k.y << ',' << k.z << ')';
    }
};

constexpr double dot(Momentum3 k, const double (&w)[3]) {
    return k.x * w[0] + k.y * w[1] + k.z * w[2];
}

struct Momentum3Hash {
    std::size_t operator()(Momentum3 k) const {
        // Pack the (small) components into one word; good enough for our ranges.
        std::uint64_t h = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.x)) << 42) ^
                          (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.y)) << 21) ^
                          static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.z));
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        return static_cast<std::size_t>(h);
    }
};

} // namespace fermirpa

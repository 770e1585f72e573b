#pragma once

#include <cmath>

namespace hetren {

template <typename S>
struct Vec3 {
    S x{}, y{}, z{};

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(const S& c, const Vec3& a) { return {c * a.x, c * a.y, c * a.z}; }
    friend bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

    S norm() const {
        using std::sqrt;
        return sqrt(x * x + y * y + z * z);
    }
    S norm_inf() const {
        using std::abs;
        S ax = abs(x), ay = abs(y), az = abs(z);
        S m = ax > ay ? ax : ay;
        return m > az ? m : az;
    }
};

using Vec3d = Vec3<double>;

template <typename S, typename T>
Vec3<S> vec_cast(const Vec3<T>& v) {
    return {S(v.x), S(v.y), S(v.z)};
}

}  // namespace hetren

#pragma once

#include <cmath>
#include <random>
#include <string>

#include "thermotomo/config.hpp"
#include "thermotomo/grid.hpp"

namespace support {

// Coarse Example 1: square [-1, 1]^2 on n x n nodes, disk of radius 0.5 at speed 0.5.
inline std::string example1(std::size_t n, double T) {
    return "grid.nx = " + std::to_string(n) + "\ngrid.ny = " + std::to_string(n) + "\ngrid.h = 2/" +
           std::to_string(n - 1) + "\ngrid.ox = -1\ngrid.oy = -1\nlayer.1.radius = 0.5\nlayer.1.speed = 0.5\nT = " +
           std::to_string(T) + "\nkset.kind = disk\nkset.r = 0.2\npgm = false\n";
}

inline thermotomo::ScalarField noise(const thermotomo::Grid& g, std::uint64_t seed, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amp, amp);
    thermotomo::ScalarField f(g);
    for (std::size_t k = 0; k < g.size(); ++k) f[k] = u(rng);
    return f;
}

template <class F>
thermotomo::ScalarField sample(const thermotomo::Grid& g, F&& fn) {
    thermotomo::ScalarField f(g);
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) f.at(i, j) = fn(g.x(i), g.y(j));
    }
    return f;
}

}  // namespace support

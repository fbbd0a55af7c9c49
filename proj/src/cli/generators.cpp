#include "cec/cli/generators.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "cec/error.hpp"
#include "cec/init.hpp"

namespace cec::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct Disc {
    double cx, cy, r;
};

void uniform_in_disc(Rng& rng, const Disc& d, std::span<double> out) {
    const double rad = d.r * std::sqrt(rng.uniform());
    const double ang = 2.0 * kPi * rng.uniform();
    out[0] = d.cx + rad * std::cos(ang);
    out[1] = d.cy + rad * std::sin(ang);
}

// Uniform in an ellipse with semi-axes a (along angle) and b, by scaling a unit-disc sample.
void uniform_in_ellipse(Rng& rng, double cx, double cy, double a, double b, double angle, std::span<double> out) {
    const double rad = std::sqrt(rng.uniform());
    const double t = 2.0 * kPi * rng.uniform();
    const double u = a * rad * std::cos(t);
    const double v = b * rad * std::sin(t);
    out[0] = cx + u * std::cos(angle) - v * std::sin(angle);
    out[1] = cy + u * std::sin(angle) + v * std::cos(angle);
}

GeneratedData mouse(Rng& rng, std::size_t n) {
    const double ear_offset = 1.5;  // head radius + ear radius: the ears touch the head
    const double s = ear_offset * std::sin(kPi / 4.0);
    const std::array<Disc, 3> parts{{{0.0, 0.0, 1.0}, {-s, s, 0.5}, {s, s, 0.5}}};
    const double total = 1.0 + 0.25 + 0.25;
    GeneratedData g{DataMatrix(n, 2), std::vector<int>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform() * total;
        const int part = u < 1.0 ? 0 : (u < 1.25 ? 1 : 2);
        uniform_in_disc(rng, parts[static_cast<std::size_t>(part)], g.data.row(i));
        g.labels[i] = part;
    }
    return g;
}

GeneratedData tset(Rng& rng, std::size_t n) {
    // Bar [0.1, 0.9] x [0.75, 0.95] on top of a stem [0.4, 0.6] x [0.05, 0.75].
    const double bar_area = 0.8 * 0.2;
    const double stem_area = 0.2 * 0.7;
    GeneratedData g{DataMatrix(n, 2), std::vector<int>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        auto row = g.data.row(i);
        if (rng.uniform() * (bar_area + stem_area) < bar_area) {
            row[0] = 0.1 + 0.8 * rng.uniform();
            row[1] = 0.75 + 0.2 * rng.uniform();
            g.labels[i] = 0;
        } else {
            row[0] = 0.4 + 0.2 * rng.uniform();
            row[1] = 0.05 + 0.7 * rng.uniform();
            g.labels[i] = 1;
        }
    }
    return g;
}

GeneratedData fourgauss(Rng& rng, std::size_t n) {
    struct Blob {
        double cx, cy, sd;
    };
    const std::array<Blob, 4> blobs{{{0.25, 0.25, 0.05}, {0.75, 0.3, 0.07}, {0.3, 0.75, 0.04}, {0.75, 0.75, 0.06}}};
    GeneratedData g{DataMatrix(n, 2), std::vector<int>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = rng.below(blobs.size());
        auto row = g.data.row(i);
        row[0] = blobs[b].cx + blobs[b].sd * rng.normal();
        row[1] = blobs[b].cy + blobs[b].sd * rng.normal();
        g.labels[i] = static_cast<int>(b);
    }
    return g;
}

GeneratedData mixshapes(Rng& rng, std::size_t n) {
    // A uniform disc of radius R has per-axis variance R^2 / 4; a uniform
    // ellipse with semi-axis a has variance a^2 / 4 along it.
    const double disc_r = std::sqrt(4.0 * 350.0);
    const double long_axis = std::sqrt(4.0 * 9000.0);
    const double short_axis = std::sqrt(4.0 * 8.0);
    struct Shape {
        double cx, cy, angle;
        bool disc;
    };
    const std::array<Shape, 7> shapes{{
        {150.0, 150.0, 0.0, true},
        {850.0, 850.0, 0.0, true},
        {500.0, 150.0, 0.0, false},
        {150.0, 550.0, kPi / 2.0, false},
        {500.0, 500.0, kPi / 4.0, false},
        {850.0, 400.0, kPi / 2.0, false},
        {500.0, 850.0, 0.0, false},
    }};
    GeneratedData g{DataMatrix(n, 2), std::vector<int>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t s = i * shapes.size() / n;
        const auto& sh = shapes[s];
        if (sh.disc) {
            uniform_in_disc(rng, {sh.cx, sh.cy, disc_r}, g.data.row(i));
        } else {
            uniform_in_ellipse(rng, sh.cx, sh.cy, long_axis, short_axis, sh.angle, g.data.row(i));
        }
        g.labels[i] = static_cast<int>(s);
    }
    return g;
}

}  // namespace

GeneratedData generate(std::string_view name, std::uint64_t seed, std::size_t n) {
    if (n < 100) throw ConfigError("generated data sets need at least 100 points");
    Rng rng(seed);
    if (name == "mouse") return mouse(rng, n);
    if (name == "tset") return tset(rng, n);
    if (name == "fourgauss") return fourgauss(rng, n);
    if (name == "mixshapes") return mixshapes(rng, n);
    throw ConfigError("unknown data set '" + std::string(name) + "'");
}

GeneratedData generate_disc(std::uint64_t seed, std::size_t n, double radius) {
    Rng rng(seed);
    GeneratedData g{DataMatrix(n, 2), std::vector<int>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) uniform_in_disc(rng, {0.0, 0.0, radius}, g.data.row(i));
    return g;
}

}  // namespace cec::cli

#pragma once

#include <cstdint>

#include "abelrad/types.hpp"

namespace abelrad {

struct AnnulusSpec {
    double cx = 0.0, cy = 0.0;  // center; cy defaults to m/5 when zero
    double r_inner = 0.0;       // defaults to m/12 when negative
    double r_outer = 0.0;       // defaults to m/6 when zero
};

struct EllipsesSpec {
    int count = 20;
    std::uint64_t seed = 1;
};

struct PhantomSpec {
    enum class Kind { annulus, ellipses };
    Kind kind = Kind::annulus;
    int m = 129;
    AnnulusSpec annulus{0.0, 0.0, -1.0, 0.0};
    EllipsesSpec ellipses;
};

/// Characteristic-function phantoms supported strictly in {x2 > 0}.
/// Overlapping ellipses sum. Throws if the support would spill below the
/// axis.
Image make_phantom(const PhantomSpec& spec);

/// Normalized least-squares error: both images scaled to max 1, restricted
/// to rows with x2 > 0. Throws if the truth is zero there.
double delta_error(const Image& x_rec, const Image& x_true);

}  // namespace abelrad

#pragma once

#include <cstdint>
#include <string>

#include "fermirpa/interaction.hpp"

namespace fermirpa {

//=============================================================================
// Closed-shell model parameters.
//
// Given the Fermi momentum kF, the particle number is the lattice count
// N = |B_F|, and the semiclassical constants are
//     kappa = kF * N^(-1/3),      hbar = N^(-1/3),
// with kappa -> (3/(4*pi))^(1/3) ~= 0.620350 as N grows.
//
// M is the number of surface patches (even; M/2 per hemisphere) and delta the
// collinearity exponent: patch alignment against a momentum k is measured on
// the scale N^(-delta).  The regime the expansion is built for wants
// N^(2*delta) << M << N^(2/3 - 2*delta); outside that window the parameters
// are accepted but flagged.
//=============================================================================
struct ModelParams {
    double kF = 0.0;
    double R = 0.0;          // interaction support radius
    double delta = 1.0 / 12; // must lie in (0, 1/6)
    int M = 0;               // even patch count, >= 2

    std::int64_t N = 0;      // |B_F|
    double kappa = 0.0;      // kF * N^(-1/3)
    double hbar = 0.0;       // N^(-1/3)
    double n_delta = 0.0;    // N^(-delta), the patch-alignment cutoff
    bool M_in_window = true; // soft flag: M inside (N^(2 delta), N^(2/3 - 2 delta))

    InteractionFourier vhat;
};

// Nearest even integer to N^(1/3) (the default patch count).
int default_patch_count(std::int64_t N);

// Populate the derived fields.  Throws std::invalid_argument when
// delta is outside (0, 1/6), M is odd or < 2, kF <= 0, or R <= 0.
// M == 0 requests the default patch count.
ModelParams closed_shell_params(double kF, double R, double delta, int M,
                                InteractionFourier vhat);

} // namespace fermirpa

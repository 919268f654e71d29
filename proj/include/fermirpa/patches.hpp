#pragma once

#include <optional>
#include <vector>

#include "fermirpa/lattice.hpp"
#include "fermirpa/params.hpp"

namespace fermirpa {

//=============================================================================
// Equal-area patch decomposition of the Fermi surface.
//
// The northern hemisphere of the kF-sphere is split into M/2 cells of equal
// target area 4*pi*kF^2/M: a polar cap plus latitude bands cut into equal
// azimuthal sectors (band counts chosen so cells are roughly square).  Each
// cell is then shrunk by an angular corridor margin on every side that faces
// another patch, and extended radially to the band |p| in [kF - R, kF + R].
// Southern patches are the point reflections p -> -p of the northern ones, so
// patch alpha and its antipode alpha +- M/2 are exact mirrors.
//
// The full corridor margin asin(R/kF) per side guarantees that distinct
// patches are separated by a chordal distance > 2R.  When the cells are too
// small to absorb the full margin (small kF and/or large M), the margin is
// reduced so every cell keeps at least a fixed fraction of its extent; the
// achieved margin and a corridor flag are recorded, and the audit reports the
// true separation.  Construction fails only if no positive margin fits.
//=============================================================================

struct PatchCell {
    int band = 0;              // 0 = polar cap
    double theta_lo = 0.0;     // shrunk colatitude range [theta_lo, theta_hi]
    double theta_hi = 0.0;
    double phi_lo = 0.0;       // shrunk azimuth range; meaningless if full_azimuth
    double phi_hi = 0.0;
    bool full_azimuth = false; // cap or single-sector ring
    // Pre-shrink extents (the equal-area cell):
    double theta_lo0 = 0.0, theta_hi0 = 0.0, phi_lo0 = 0.0, phi_hi0 = 0.0;
};

struct Patch {
    int alpha = 0;             // 1-based index; alpha <= M/2 is northern
    int antipode = 0;          // alpha +- M/2
    double omega[3] = {0, 0, 0};     // patch centre on the kF-sphere
    double omega_hat[3] = {0, 0, 0}; // unit centre direction
    PatchCell cell;            // northern cell; southern patches store the mirror's
    bool southern = false;
    double area_target = 0.0;  // 4*pi*kF^2 / M
    double area_kept = 0.0;    // area of the shrunk cell (radius kF)
    double diameter = 0.0;     // chordal diameter of the shrunk cell, radius kF
};

struct PatchSet {
    int M = 0;
    double kF = 0.0, R = 0.0;
    double radial_lo = 0.0, radial_hi = 0.0; // [kF - R, kF + R]
    double margin_full = 0.0;  // asin(min(1, R/kF)) * (1 + slack)
    double margin_used = 0.0;
    bool corridor_full_margin = false;

    std::vector<Patch> patches;            // size M, patches[alpha - 1]
    std::vector<double> band_theta;        // pre-shrink band boundaries (north)
    std::vector<int> band_cells;           // sectors per band

    const Patch& patch(int alpha) const { return patches[alpha - 1]; }
    int antipode(int alpha) const { return patches[alpha - 1].antipode; }

    // Patch containing a lattice point (1..M), or nullopt when the point lies
    // in a corridor / outside the radial band.
    std::optional<int> patch_of(Momentum3 p) const;
};

PatchSet build_patchset(const ModelParams& mp);

// Index sets of patches aligned with +-k beyond the cutoff N^(-delta):
//   I_k^+ = { alpha : k . omega_hat_alpha >= N^(-delta) }
//   I_k^- = { alpha : k . omega_hat_alpha <= -N^(-delta) }
// Both are sorted ascending; they are exact antipodal mirrors of each other.
struct IndexSets {
    std::vector<int> plus;
    std::vector<int> minus;
};
IndexSets index_sets(Momentum3 k, const PatchSet& ps, const ModelParams& mp);

// Particle-hole pair count of patch alpha at relative momentum k:
//   count = #{ p in B_F^c cap B_alpha : p - s*k in B_F cap B_alpha },
// where the sign s is +1 for alpha in I_k^+ and -1 for alpha in I_k^-.
// count plays the role of n_{alpha,k}^2 in the excitation normalisation.
struct PairData {
    int alpha = 0;
    Momentum3 k;
    int sign = 0;              // +1 / -1
    std::int64_t count = 0;    // n_{alpha,k}^2
    std::vector<std::pair<Momentum3, Momentum3>> pairs; // (p, h), optional
};
PairData pair_count(int alpha, Momentum3 k, const PatchSet& ps,
                    const FermiGeometry& geom, bool want_pairs = false);

// All patch counts for one k in a single pass over the shell: entry [alpha-1]
// is the signed pair count of patch alpha (0 for patches outside I_k).
std::vector<std::int64_t> pair_counts_for_k(Momentum3 k, const PatchSet& ps,
                                            const FermiGeometry& geom,
                                            const IndexSets& idx);

// --- Geometry audits --------------------------------------------------------

struct CorridorAudit {
    double min_separation = 0.0; // chordal, radius kF, over sampled boundary pairs
    int alpha_a = 0, alpha_b = 0;
    bool pass = false;           // min_separation >= 2R
};
CorridorAudit corridor_audit(const PatchSet& ps, int samples_per_edge = 24);

struct DiameterAudit {
    double max_diameter = 0.0;
    double max_constant = 0.0;   // max over patches of diam * sqrt(M) / N^(1/3)
    int alpha = 0;
};
DiameterAudit diameter_audit(const PatchSet& ps, const ModelParams& mp);

} // namespace fermirpa

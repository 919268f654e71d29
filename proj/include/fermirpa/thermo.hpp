#pragma once

#include <functional>

#include "fermirpa/quadrature.hpp"

namespace fermirpa {

//=============================================================================
// Thermodynamic-limit momentum distribution and the Daniel-Vosko comparison.
//
// In the infinite-volume extrapolation the lattice sums become integrals; with
// hbar = 1/kF and kappa0 = (3/(4 pi))^(1/3) the distribution at distance
// R_q = | |q| - kF | from the Fermi surface reads
//
//  n(|q|) = Int_{R_q}^{R} d|k| |k| (3 V(|k|) / (4 pi hbar kF^3 kappa0))
//           Int_0^inf [ 1/(1+mu^2) - (R_q/|k|) / ((R_q/|k|)^2 + mu^2) ]
//                     dmu / (1 + Q0(mu))
//
// with Q0(mu) = 2 pi kappa0 V(|k|) (1 - mu arctan(1/mu)); it vanishes for
// R_q >= R.  The inner bracket is the closed form of the angular integral
// Int_lmin^1 (mu^2 - l^2)/(mu^2 + l^2)^2 dl at lmin = R_q/|k|.
//
// The Daniel-Vosko RPA distribution (alpha = e^2/(pi^2 kF)) is transcribed
// exactly as reprinted, including the source's inconsistent side labelling;
// the side is therefore an explicit parameter here.  Its polarisation factor
// Q_dv tends to Q_sr(mu) = 4 pi (1 - mu arctan(1/mu)) for |k| << kF.  With
// the matched potential V(|k|) = 8 kappa0 e^2 hbar kF^2 / (3 pi |k|^2) the
// short-range-restricted Daniel-Vosko value is comparable to n(|q|) above up
// to a spin factor of one half.
//=============================================================================

struct ThermoParams {
    double kF = 0.0;
    double R = 0.0;                         // short-range cutoff of the potential
    double e_coul = 0.0;                    // Coulomb charge e (alpha = e^2/(pi^2 kF))
    std::function<double(double)> vhat_radial; // V(|k|)

    double hbar() const { return 1.0 / kF; }
    static double kappa0();                 // (3/(4 pi))^(1/3)
};

// Matched Coulomb-type radial potential (zero outside |k| < R).
std::function<double(double)> matched_coulomb_vhat(const ThermoParams& tp);

// Closed angular integral Int_{lmin}^{1} (mu^2 - l^2)/(mu^2 + l^2)^2 dl
//   = 1/(1+mu^2) - lmin/(lmin^2 + mu^2).
double angular_bracket(double mu, double lmin);

// Thermodynamic-limit n(|q|); zero when | |q| - kF | >= R.
double thermo_nq(double q_norm, const ThermoParams& tp,
                 const QuadratureSpec& quad = {1e-12, 1e-10, 1 << 14});

// Daniel-Vosko polarisation factor.
double dv_Q(double mu, double k_norm, const ThermoParams& tp);
// Its small-|k|/kF limit 4 pi (1 - mu arctan(1/mu)).
double dv_Q_sr(double mu);

enum class DvSide { outside, inside };

struct DvReport {
    double value = 0.0;
    double tail_bound = 0.0; // estimate of the truncated |k| > 50 kF tail
};

// Daniel-Vosko n_q.  cutoff_R > 0 restricts the |k| integration to
// |k| <= cutoff_R (the short-range variant); without a cutoff the
// semi-infinite |k| integral is truncated at 50 kF and the tail estimate is
// reported.  q_norm must lie strictly on the requested side of kF.
DvReport dv_nq(double q_norm, DvSide side, const ThermoParams& tp,
               double cutoff_R = 0.0,
               const QuadratureSpec& quad = {1e-12, 1e-10, 1 << 14});

} // namespace fermirpa

#pragma once

#include <cstdint>
#include <vector>

#include "fermirpa/momentum.hpp"

namespace fermirpa {

//=============================================================================
// Discrete Fermi-ball geometry on Z^3.
//
//   fermi_ball : B_F = { k in Z^3 : |k| <= kF }        (closed ball)
//   shell      : { k in Z^3 : | |k| - kF | < R }        (band around the sphere)
//   gamma_nor  : nonzero k in the open ball B_R(0) restricted to the northern
//                half-space (the canonical half of each +-k pair)
//
// Ball membership is an integer comparison |k|^2 <= T.  T is floor(kF^2) when
// kF^2 is (numerically) an exact integer; otherwise a half-ulp guard snaps
// kF^2 to the nearest integer when it is within 1e-9 relative, so that inputs
// like kF = sqrt(2) classify the |k|^2 = 2 sphere consistently.
//=============================================================================

// Northern half-space: k3 > 0, or (k3 == 0 and k2 > 0), or (k3 == k2 == 0 and k1 > 0).
// Exactly one of k, -k is northern for every nonzero k; 0 is in neither.
constexpr bool half_space_member(Momentum3 k) {
    if (k.z != 0) return k.z > 0;
    if (k.y != 0) return k.y > 0;
    return k.x > 0;
}

// Integer threshold for |k|^2 <= kF^2 with the documented half-ulp guard.
std::int64_t ball_threshold(double kF);

// All lattice points of the closed ball |k| <= kF, sorted lexicographically.
std::vector<Momentum3> enumerate_fermi_ball(double kF);

class FermiGeometry {
public:
    FermiGeometry(double kF, double R);

    double kF() const { return m_kF; }
    double R() const { return m_R; }
    std::int64_t ball_thr() const { return m_thr; }

    bool in_ball(Momentum3 k) const { return k.norm_sq() <= m_thr; }
    bool in_shell(Momentum3 k) const {
        double n2 = static_cast<double>(k.norm_sq());
        return n2 > m_shell_lo2 && n2 < m_shell_hi2;
    }

    const std::vector<Momentum3>& fermi_ball() const { return m_ball; }
    const std::vector<Momentum3>& shell() const { return m_shell; }
    const std::vector<Momentum3>& gamma_nor() const { return m_gamma_nor; }
    std::size_t ball_size() const { return m_ball.size(); }

private:
    double m_kF, m_R;
    std::int64_t m_thr;
    double m_shell_lo2, m_shell_hi2; // strict bounds on |k|^2 for the shell
    std::vector<Momentum3> m_ball;
    std::vector<Momentum3> m_shell;
    std::vector<Momentum3> m_gamma_nor;
};

// Angular factor lambda_{q,k} = |k . q| / (|k| |q|), in [0,1].
double lambda_qk(Momentum3 q, Momentum3 k);

// Interaction-momentum set C^q: the nonzero lattice momenta k in the open
// ball B_R(0), in the northern half-space, such that q + k or q - k lies in
// B_F (for q outside the Fermi ball) resp. in its complement (for q inside).
// Sorted lexicographically.
std::vector<Momentum3> momentum_set_Cq(Momentum3 q, const FermiGeometry& geom);

// True iff no nonzero lattice k in the open ball B_R(0) has
// lambda_{q,k} in the open interval (0, eps).  (Exhaustive lattice scan.)
bool in_Q_epsilon(Momentum3 q, double eps, const FermiGeometry& geom);

// Default eps for the scan: half the minimal positive lambda_{q,k} over the
// lattice scan (1 when every lambda vanishes, i.e. q = 0 edge case).
double default_Q_epsilon(Momentum3 q, const FermiGeometry& geom);

} // namespace fermirpa

#include "fermirpa/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fermirpa {

std::int64_t ball_threshold(double kF) {
    if (!(kF > 0.0)) throw std::invalid_argument("ball_threshold: kF must be positive");
    double t = kF * kF;
    double r = std::round(t);
    // Half-ulp guard: snap kF^2 to the integer it was meant to be when the
    // squared value sits within 1e-9 relative of one.
    if (std::abs(t - r) <= 1e-9 * std::max(1.0, t)) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::floor(t));
}

std::vector<Momentum3> enumerate_fermi_ball(double kF) {
    std::int64_t thr = ball_threshold(kF);
    int kmax = static_cast<int>(std::floor(std::sqrt(static_cast<double>(thr)))) + 1;
    std::vector<Momentum3> pts;
    for (int x = -kmax; x <= kmax; ++x)
        for (int y = -kmax; y <= kmax; ++y)
            for (int z = -kmax; z <= kmax; ++z) {
                Momentum3 k{x, y, z};
                if (k.norm_sq() <= thr) pts.push_back(k);
            }
    std::sort(pts.begin(), pts.end());
    return pts;
}

FermiGeometry::FermiGeometry(double kF, double R) : m_kF(kF), m_R(R) {
    if (!(kF > 0.0)) throw std::invalid_argument("FermiGeometry: kF must be positive");
    if (!(R > 0.0)) throw std::invalid_argument("FermiGeometry: R must be positive");
    m_thr = ball_threshold(kF);
    double lo = std::max(0.0, kF - R);
    m_shell_lo2 = lo * lo;
    m_shell_hi2 = (kF + R) * (kF + R);
    m_ball = enumerate_fermi_ball(kF);

    int smax = static_cast<int>(std::floor(kF + R)) + 1;
    for (int x = -smax; x <= smax; ++x)
        for (int y = -smax; y <= smax; ++y)
            for (int z = -smax; z <= smax; ++z) {
                Momentum3 k{x, y, z};
                if (in_shell(k)) m_shell.push_back(k);
            }
    std::sort(m_shell.begin(), m_shell.end());

    int rmax = static_cast<int>(std::floor(R)) + 1;
    double R2 = R * R;
    for (int x = -rmax; x <= rmax; ++x)
        for (int y = -rmax; y <= rmax; ++y)
            for (int z = -rmax; z <= rmax; ++z) {
                Momentum3 k{x, y, z};
                if (k.is_zero()) continue;
                if (static_cast<double>(k.norm_sq()) < R2 && half_space_member(k))
                    m_gamma_nor.push_back(k);
            }
    std::sort(m_gamma_nor.begin(), m_gamma_nor.end());
}

double lambda_qk(Momentum3 q, Momentum3 k) {
    if (q.is_zero() || k.is_zero())
        throw std::invalid_argument("lambda_qk: q and k must be nonzero");
    std::int64_t d = static_cast<std::int64_t>(q.x) * k.x +
                     static_cast<std::int64_t>(q.y) * k.y +
                     static_cast<std::int64_t>(q.z) * k.z;
    return std::abs(static_cast<double>(d)) / (q.norm() * k.norm());
}

std::vector<Momentum3> momentum_set_Cq(Momentum3 q, const FermiGeometry& geom) {
    const bool q_inside = geom.in_ball(q);
    std::vector<Momentum3> out;
    for (Momentum3 k : geom.gamma_nor()) {
        bool plus, minus;
        if (q_inside) { // excitation targets outside the ball
            plus = !geom.in_ball(q + k);
            minus = !geom.in_ball(q - k);
        } else {        // excitation targets inside the ball
            plus = geom.in_ball(q + k);
            minus = geom.in_ball(q - k);
        }
        if (plus || minus) out.push_back(k);
    }
    return out; // gamma_nor is already sorted
}

bool in_Q_epsilon(Momentum3 q, double eps, const FermiGeometry& geom) {
    if (q.is_zero()) return true;
    for (Momentum3 k : geom.gamma_nor()) {
        double l = lambda_qk(q, k);
        if (l > 0.0 && l < eps) return false;
        // gamma_nor holds one of each +-k pair; lambda is even in k.
    }
    return true;
}

double default_Q_epsilon(Momentum3 q, const FermiGeometry& geom) {
    if (q.is_zero()) return 1.0;
    double min_pos = 2.0;
    for (Momentum3 k : geom.gamma_nor()) {
        double l = lambda_qk(q, k);
        if (l > 0.0 && l < min_pos) min_pos = l;
    }
    return min_pos > 1.0 ? 1.0 : 0.5 * min_pos;
}

} // namespace fermirpa

#include "fermirpa/patches.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fermirpa {

namespace {

constexpr double PI = 3.14159265358979323846;

double clamp01(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

struct Vec3 {
    double x, y, z;
};
Vec3 sph(double kF, double theta, double phi) {
    return {kF * std::sin(theta) * std::cos(phi), kF * std::sin(theta) * std::sin(phi),
            kF * std::cos(theta)};
}
double dist(const Vec3& a, const Vec3& b) {
    double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Largest corridor margin a band can absorb while each cell keeps at least
// keep_frac of its polar and azimuthal extent.
double band_margin_capacity(double theta_lo, double theta_hi, int cells, bool is_cap,
                            double keep_frac) {
    const double h = theta_hi - theta_lo;
    const double budget = (1.0 - keep_frac) * h;
    // Polar budget: the cap loses only its lower edge, other bands lose both.
    double m_theta = is_cap ? budget : 0.5 * budget;
    if (cells <= 1) return m_theta;
    // Azimuthal margin w = asin(sin(m)/sin(theta_lo + m)) — the chordal gap
    // 2 kF sin(theta) sin(w) is narrowest at the band's polar edge — must
    // leave keep_frac of the sector width; the feasible m is found by
    // bisection (w grows with m).
    const double dphi = 2.0 * PI / cells;
    const double w_max = 0.5 * (1.0 - keep_frac) * dphi;
    auto feasible = [&](double m) {
        double s = std::sin(std::min(PI / 2, theta_lo + m));
        return std::sin(m) <= std::sin(w_max) * s;
    };
    double lo = 0.0, hi = m_theta;
    if (feasible(hi)) return hi;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

} // namespace

PatchSet build_patchset(const ModelParams& mp) {
    const int M = mp.M;
    const double kF = mp.kF, R = mp.R;
    const int half = M / 2;

    PatchSet ps;
    ps.M = M;
    ps.kF = kF;
    ps.R = R;
    ps.radial_lo = std::max(0.0, kF - R);
    ps.radial_hi = kF + R;
    // asin gives chordal separation exactly 2R at the full margin; the slack
    // turns the audit bound into a strict inequality.
    ps.margin_full = std::asin(std::min(1.0, R / kF)) * 1.005;

    // --- Equal-area layout: polar cap + latitude bands of equal sectors ----
    const double A = 4.0 * PI / M; // per-cell area on the unit sphere
    std::vector<double> theta{0.0};
    std::vector<int> cells;
    if (half == 1) {
        theta.push_back(PI / 2);
        cells.push_back(1);
    } else {
        double th1 = std::acos(clamp01(1.0 - A / (2.0 * PI)));
        theta.push_back(th1);
        cells.push_back(1);
        int n_rem = half - 1;
        int nb = std::max(1, static_cast<int>(std::llround((PI / 2 - th1) / std::sqrt(A))));
        nb = std::min(nb, n_rem);
        // Ideal counts from uniform-theta band areas, integerised by largest
        // remainder, then boundaries recomputed so band areas are exact.
        std::vector<double> ideal(nb);
        std::vector<int> cnt(nb, 0);
        for (int i = 0; i < nb; ++i) {
            double ta = th1 + (PI / 2 - th1) * i / nb;
            double tb = th1 + (PI / 2 - th1) * (i + 1) / nb;
            ideal[i] = 2.0 * PI * (std::cos(ta) - std::cos(tb)) / A;
            cnt[i] = static_cast<int>(std::floor(ideal[i]));
        }
        int assigned = std::accumulate(cnt.begin(), cnt.end(), 0);
        std::vector<int> order(nb);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return (ideal[a] - std::floor(ideal[a])) > (ideal[b] - std::floor(ideal[b]));
        });
        for (int i = 0; assigned < n_rem; ++i, ++assigned) cnt[order[i % nb]] += 1;
        double cos_prev = std::cos(th1);
        for (int i = 0; i < nb; ++i) {
            if (cnt[i] == 0) continue;
            double cos_next = cos_prev - cnt[i] * A / (2.0 * PI);
            if (i == nb - 1) cos_next = 0.0; // land exactly on the equator
            theta.push_back(std::acos(clamp01(cos_next)));
            cells.push_back(cnt[i]);
            cos_prev = cos_next;
        }
    }
    ps.band_theta = theta;
    ps.band_cells = cells;

    // --- Corridor margin: full asin(R/kF) when it fits, else reduced -------
    // Every cell must keep at least half of its polar and azimuthal extent.
    // The same half-size floor applies at every (kF, M), so the kept patch
    // areas scale uniformly with the cell size across an N-sweep; a floor
    // that binds only at some configurations would kink every trend taken
    // along such a sweep.
    const double keep_frac = 0.5;
    double m_used = ps.margin_full;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        bool is_cap = (i == 0 && theta[i] == 0.0);
        m_used = std::min(m_used, band_margin_capacity(theta[i], theta[i + 1], cells[i],
                                                       is_cap, keep_frac));
    }
    if (!(m_used > 0.0)) {
        std::ostringstream os;
        os << "build_patchset: no positive corridor margin fits M = " << M
           << " cells at kF = " << kF << ", R = " << R;
        throw std::invalid_argument(os.str());
    }
    ps.margin_used = m_used;
    ps.corridor_full_margin = m_used >= ps.margin_full * (1.0 - 1e-12);

    // --- Materialise the northern patches, then mirror -----------------------
    ps.patches.resize(M);
    int alpha = 1;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const bool is_cap = (theta[i] == 0.0);
        const int c = cells[i];
        const double lo = theta[i], hi = theta[i + 1];
        const double tlo = is_cap ? 0.0 : lo + m_used;
        const double thi = hi - m_used;
        if (!(thi > tlo)) throw std::logic_error("build_patchset: band collapsed");
        const double dphi = 2.0 * PI / c;
        const double w =
            (c > 1) ? std::asin(std::min(1.0, std::sin(m_used) /
                                                  std::sin(tlo > 0.0 ? tlo : thi)))
                    : 0.0;
        if (c > 1 && !(w < dphi / 2)) throw std::logic_error("build_patchset: sector collapsed");
        for (int j = 0; j < c; ++j) {
            Patch p;
            p.alpha = alpha;
            p.antipode = alpha + half;
            p.cell.band = static_cast<int>(i);
            p.cell.theta_lo = tlo;
            p.cell.theta_hi = thi;
            p.cell.full_azimuth = (c == 1);
            p.cell.phi_lo = j * dphi + w;
            p.cell.phi_hi = (j + 1) * dphi - w;
            p.cell.theta_lo0 = lo;
            p.cell.theta_hi0 = hi;
            p.cell.phi_lo0 = j * dphi;
            p.cell.phi_hi0 = (j + 1) * dphi;
            double thc = is_cap ? 0.0 : 0.5 * (tlo + thi);
            double phc = p.cell.full_azimuth ? PI : 0.5 * (p.cell.phi_lo + p.cell.phi_hi);
            Vec3 om = sph(kF, thc, phc);
            p.omega[0] = om.x; p.omega[1] = om.y; p.omega[2] = om.z;
            double on = std::sqrt(om.x * om.x + om.y * om.y + om.z * om.z);
            p.omega_hat[0] = om.x / on; p.omega_hat[1] = om.y / on; p.omega_hat[2] = om.z / on;
            p.area_target = 4.0 * PI * kF * kF / M;
            double span = p.cell.full_azimuth ? 2.0 * PI : (p.cell.phi_hi - p.cell.phi_lo);
            p.area_kept = (std::cos(tlo) - std::cos(thi)) * span * kF * kF;

            // Chordal diameter of the pre-shrink cell (boundary sampling).
            std::vector<Vec3> pts;
            const int ns = 16;
            double sp0 = p.cell.full_azimuth ? 2.0 * PI : (p.cell.phi_hi0 - p.cell.phi_lo0);
            for (int s = 0; s <= ns; ++s) {
                double f = static_cast<double>(s) / ns;
                double ph = p.cell.phi_lo0 + f * sp0;
                pts.push_back(sph(kF, lo, ph));
                pts.push_back(sph(kF, hi, ph));
                if (!p.cell.full_azimuth) {
                    double th = lo + f * (hi - lo);
                    pts.push_back(sph(kF, th, p.cell.phi_lo0));
                    pts.push_back(sph(kF, th, p.cell.phi_hi0));
                }
            }
            double diam = 0.0;
            for (std::size_t a = 0; a < pts.size(); ++a)
                for (std::size_t b = a + 1; b < pts.size(); ++b)
                    diam = std::max(diam, dist(pts[a], pts[b]));
            p.diameter = diam;

            ps.patches[alpha - 1] = p;
            ++alpha;
        }
    }
    for (int a = 1; a <= half; ++a) {
        Patch p = ps.patches[a - 1];
        p.alpha = a + half;
        p.antipode = a;
        p.southern = true;
        for (int d = 0; d < 3; ++d) { p.omega[d] = -p.omega[d]; p.omega_hat[d] = -p.omega_hat[d]; }
        ps.patches[a + half - 1] = p;
    }
    return ps;
}

std::optional<int> PatchSet::patch_of(Momentum3 p) const {
    if (p.is_zero()) return std::nullopt;
    double n2 = static_cast<double>(p.norm_sq());
    double lo2 = radial_lo * radial_lo, hi2 = radial_hi * radial_hi;
    // Closed radial band with a half-ulp guard on the squared bounds.
    if (n2 < lo2 - 1e-9 * std::max(1.0, lo2) || n2 > hi2 + 1e-9 * std::max(1.0, hi2))
        return std::nullopt;

    const bool south = (p.z < 0) || (p.z == 0 && (p.y < 0 || (p.y == 0 && p.x < 0)));
    const Momentum3 pn = south ? -p : p;
    const double r = pn.norm();
    const double theta = std::acos(clamp01(pn.z / r));
    double phi = std::atan2(static_cast<double>(pn.y), static_cast<double>(pn.x));
    if (phi < 0) phi += 2.0 * PI;

    int base = 1;
    const int half = M / 2;
    for (std::size_t i = 0; i < band_cells.size(); ++i) {
        const int c = band_cells[i];
        const Patch& first = patches[base - 1];
        if (theta >= first.cell.theta_lo && theta <= first.cell.theta_hi) {
            if (first.cell.full_azimuth)
                return south ? base + half : base;
            const double dphi = 2.0 * PI / c;
            int j = std::min(c - 1, static_cast<int>(phi / dphi));
            const Patch& cand = patches[base + j - 1];
            if (phi >= cand.cell.phi_lo && phi <= cand.cell.phi_hi)
                return south ? cand.alpha + half : cand.alpha;
            return std::nullopt;
        }
        base += c;
    }
    return std::nullopt;
}

IndexSets index_sets(Momentum3 k, const PatchSet& ps, const ModelParams& mp) {
    IndexSets out;
    for (const Patch& p : ps.patches) {
        double s = dot(k, p.omega_hat);
        if (s >= mp.n_delta) out.plus.push_back(p.alpha);
        else if (s <= -mp.n_delta) out.minus.push_back(p.alpha);
    }
    return out; // patches iterated in ascending alpha
}

PairData pair_count(int alpha, Momentum3 k, const PatchSet& ps,
                    const FermiGeometry& geom, bool want_pairs) {
    const Patch& pa = ps.patch(alpha);
    double s = dot(k, pa.omega_hat);
    if (s == 0.0) throw std::invalid_argument("pair_count: k orthogonal to patch centre");
    PairData pd;
    pd.alpha = alpha;
    pd.k = k;
    pd.sign = s > 0 ? 1 : -1;
    const Momentum3 step = pd.sign > 0 ? k : -k;
    for (Momentum3 h : geom.shell()) {
        if (!geom.in_ball(h)) continue;
        if (ps.patch_of(h) != std::optional<int>(alpha)) continue;
        Momentum3 p = h + step;
        if (geom.in_ball(p)) continue;
        if (ps.patch_of(p) != std::optional<int>(alpha)) continue;
        ++pd.count;
        if (want_pairs) pd.pairs.emplace_back(p, h);
    }
    return pd;
}

std::vector<std::int64_t> pair_counts_for_k(Momentum3 k, const PatchSet& ps,
                                            const FermiGeometry& geom,
                                            const IndexSets& idx) {
    std::vector<int> side(ps.M + 1, 0);
    for (int a : idx.plus) side[a] = 1;
    for (int a : idx.minus) side[a] = -1;
    std::vector<std::int64_t> counts(ps.M, 0);
    for (Momentum3 h : geom.shell()) {
        if (!geom.in_ball(h)) continue;
        auto a = ps.patch_of(h);
        if (!a || side[*a] == 0) continue;
        Momentum3 p = side[*a] > 0 ? h + k : h - k;
        if (geom.in_ball(p)) continue;
        if (ps.patch_of(p) == a) counts[*a - 1] += 1;
    }
    return counts;
}

namespace {
// Boundary sample points of the shrunk cell of one patch, on the kF-sphere.
std::vector<Vec3> boundary_samples(const PatchSet& ps, int alpha, int ns) {
    const Patch& p = ps.patch(alpha);
    const PatchCell& c = p.cell;
    std::vector<Vec3> pts;
    double span = c.full_azimuth ? 2.0 * PI : (c.phi_hi - c.phi_lo);
    double phi0 = c.full_azimuth ? 0.0 : c.phi_lo;
    for (int s = 0; s <= ns; ++s) {
        double f = static_cast<double>(s) / ns;
        double ph = phi0 + f * span;
        if (c.theta_lo > 0.0) pts.push_back(sph(ps.kF, c.theta_lo, ph));
        pts.push_back(sph(ps.kF, c.theta_hi, ph));
        if (!c.full_azimuth) {
            double th = c.theta_lo + f * (c.theta_hi - c.theta_lo);
            pts.push_back(sph(ps.kF, th, c.phi_lo));
            pts.push_back(sph(ps.kF, th, c.phi_hi));
        }
    }
    if (c.theta_lo == 0.0) pts.push_back(sph(ps.kF, 0.0, 0.0)); // pole
    if (p.southern)
        for (Vec3& v : pts) { v.x = -v.x; v.y = -v.y; v.z = -v.z; }
    return pts;
}
} // namespace

CorridorAudit corridor_audit(const PatchSet& ps, int samples_per_edge) {
    std::vector<std::vector<Vec3>> all(ps.M);
    for (int a = 1; a <= ps.M; ++a) all[a - 1] = boundary_samples(ps, a, samples_per_edge);
    CorridorAudit audit;
    audit.min_separation = std::numeric_limits<double>::infinity();
    for (int a = 1; a <= ps.M; ++a)
        for (int b = a + 1; b <= ps.M; ++b)
            for (const Vec3& u : all[a - 1])
                for (const Vec3& v : all[b - 1]) {
                    double d = dist(u, v);
                    if (d < audit.min_separation) {
                        audit.min_separation = d;
                        audit.alpha_a = a;
                        audit.alpha_b = b;
                    }
                }
    audit.pass = audit.min_separation >= 2.0 * ps.R;
    return audit;
}

DiameterAudit diameter_audit(const PatchSet& ps, const ModelParams& mp) {
    DiameterAudit audit;
    double scale = std::sqrt(static_cast<double>(ps.M)) /
                   std::cbrt(static_cast<double>(mp.N));
    for (const Patch& p : ps.patches) {
        if (p.diameter > audit.max_diameter) {
            audit.max_diameter = p.diameter;
            audit.alpha = p.alpha;
        }
    }
    audit.max_constant = audit.max_diameter * scale;
    return audit;
}

} // namespace fermirpa

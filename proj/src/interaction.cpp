#include "fermirpa/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fermirpa/lattice.hpp"

namespace fermirpa {

void InteractionFourier::insert_checked(Momentum3 k, double v) {
    if (k.is_zero())
        throw std::invalid_argument("InteractionFourier: k = 0 is not part of the support");
    if (v < 0.0)
        throw std::invalid_argument("InteractionFourier: coefficients must be non-negative");
    if (static_cast<double>(k.norm_sq()) >= m_radius * m_radius) {
        std::ostringstream os;
        os << "InteractionFourier: entry " << k << " outside the open support ball |k| < "
           << m_radius;
        throw std::invalid_argument(os.str());
    }
    if (v == 0.0) return; // zero coefficients are represented by absence
    m_values[k] = v;
}

std::vector<std::pair<Momentum3, double>> InteractionFourier::sorted_entries() const {
    std::vector<std::pair<Momentum3, double>> out(m_values.begin(), m_values.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

namespace {
// All nonzero lattice points with |k| < radius.
std::vector<Momentum3> open_ball_points(double radius) {
    std::vector<Momentum3> pts;
    int kmax = static_cast<int>(std::floor(radius)) + 1;
    double r2 = radius * radius;
    for (int x = -kmax; x <= kmax; ++x)
        for (int y = -kmax; y <= kmax; ++y)
            for (int z = -kmax; z <= kmax; ++z) {
                Momentum3 k{x, y, z};
                if (!k.is_zero() && static_cast<double>(k.norm_sq()) < r2) pts.push_back(k);
            }
    return pts;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}
} // namespace

InteractionFourier InteractionFourier::make_constant(double v, double radius) {
    InteractionFourier f;
    f.m_radius = radius;
    for (Momentum3 k : open_ball_points(radius)) f.insert_checked(k, v);
    f.m_preset = "const:" + fmt(v) + "," + fmt(radius);
    return f;
}

InteractionFourier InteractionFourier::make_coulomb(double e2, double radius, double v_pref) {
    InteractionFourier f;
    f.m_radius = radius;
    for (Momentum3 k : open_ball_points(radius))
        f.insert_checked(k, v_pref * e2 / static_cast<double>(k.norm_sq()));
    f.m_preset = "coulomb-sr:" + fmt(e2) + "," + fmt(radius);
    return f;
}

InteractionFourier InteractionFourier::make_radial_table(
    const std::vector<std::pair<std::int64_t, double>>& table, double radius) {
    InteractionFourier f;
    f.m_radius = radius;
    for (Momentum3 k : open_ball_points(radius)) {
        std::int64_t n2 = k.norm_sq();
        for (const auto& [tn2, v] : table)
            if (tn2 == n2) f.insert_checked(k, v);
    }
    std::ostringstream os;
    os << "radial-table:";
    for (std::size_t i = 0; i < table.size(); ++i)
        os << (i ? ";" : "") << table[i].first << ":" << fmt(table[i].second);
    os << "@" << fmt(radius);
    f.m_preset = os.str();
    return f;
}

InteractionFourier InteractionFourier::make_explicit(
    const std::vector<std::pair<Momentum3, double>>& entries, double radius) {
    InteractionFourier f;
    f.m_radius = radius;
    for (const auto& [k, v] : entries) {
        auto it = f.m_values.find(-k);
        if (it != f.m_values.end() && it->second != v)
            throw std::invalid_argument("InteractionFourier: entries must satisfy V(k) = V(-k)");
        f.insert_checked(k, v);
        f.insert_checked(-k, v);
    }
    std::ostringstream os;
    os << "list:";
    bool first = true;
    for (const auto& [k, v] : f.sorted_entries()) {
        if (!half_space_member(k)) continue; // one representative per pair
        os << (first ? "" : ";") << k.x << " " << k.y << " " << k.z << " " << fmt(v);
        first = false;
    }
    os << "@" << fmt(radius);
    f.m_preset = os.str();
    return f;
}

InteractionFourier InteractionFourier::scaled(double s) const {
    if (s < 0.0) throw std::invalid_argument("InteractionFourier::scaled: negative factor");
    InteractionFourier f;
    f.m_radius = m_radius;
    f.m_preset = "scaled:" + fmt(s) + "*(" + m_preset + ")";
    if (s == 0.0) return f;
    f.m_values = m_values;
    for (auto& [k, v] : f.m_values) v *= s;
    return f;
}

} // namespace fermirpa

#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fermirpa/momentum.hpp"

namespace fermirpa {

//=============================================================================
// InteractionFourier: the Fourier coefficients V_hat(k) of a two-body
// potential with compact support |k| < R in momentum space.  Coefficients are
// stored as a finite map on the lattice; lookups outside the support return 0.
// Invariants: V_hat >= 0, V_hat(k) == V_hat(-k), support inside the open ball.
//=============================================================================
class InteractionFourier {
public:
    InteractionFourier() = default;

    double radius() const { return m_radius; }
    const std::string& preset() const { return m_preset; }

    double value(Momentum3 k) const {
        auto it = m_values.find(k);
        return it == m_values.end() ? 0.0 : it->second;
    }
    bool empty() const { return m_values.empty(); }
    std::size_t size() const { return m_values.size(); }

    // Sorted support (for reproducible iteration in reports).
    std::vector<std::pair<Momentum3, double>> sorted_entries() const;

    // V_hat(k) = v for all nonzero lattice k with |k| < radius.
    static InteractionFourier make_constant(double v, double radius);

    // Short-ranged Coulomb-type coefficients v_pref * e^2 / |k|^2 on |k| < radius.
    // The caller supplies the full prefactor (it differs between the lattice
    // model and the thermodynamic-limit comparisons).
    static InteractionFourier make_coulomb(double e2, double radius, double v_pref);

    // Radial table keyed on |k|^2 (exact on the lattice): pairs (|k|^2, value).
    static InteractionFourier make_radial_table(const std::vector<std::pair<std::int64_t, double>>& table,
                                                double radius);

    // Explicit list of (k, value); entries are symmetrized and validated.
    static InteractionFourier make_explicit(const std::vector<std::pair<Momentum3, double>>& entries,
                                            double radius);

    // Uniform rescaling V_hat -> s * V_hat (used by coupling sweeps).
    InteractionFourier scaled(double s) const;

private:
    void insert_checked(Momentum3 k, double v);

    std::unordered_map<Momentum3, double, Momentum3Hash> m_values;
    double m_radius = 0.0;
    std::string m_preset; // round-trippable description, e.g. "const:1,2.5"
};

} // namespace fermirpa

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fermirpa/occupation.hpp"

namespace fermirpa {

//=============================================================================
// Run configuration: a flat key-value text format with [section] headers.
//
// Lines are `key = value`; blank lines and lines starting with '#' are
// ignored.  Unknown sections or keys, duplicate keys, and malformed values
// are errors (reproducibility beats leniency).  serialize_config() emits the
// complete canonical form -- every key, fixed order, 17 significant digits --
// so parse -> serialize -> parse is the identity.
//
// Example:
//   mode = scan
//   [model]
//   kF = 5
//   R = 2.5
//   delta = 0.083333333333333329
//   M = 0                          # 0 -> nearest even N^(1/3)
//   potential = const:1,2.5
//   [output]
//   path = scan.csv
//   format = csv
//=============================================================================

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RunMode { occupation, scan, sweep_n, q_convergence, dv_compare, geometry_audit };

std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& s); // throws ConfigError

enum class OutFormat { csv, json };

//-----------------------------------------------------------------------------
// Interaction coefficients, round-trippable as a single string:
//   const:<v>,<R>                       V_hat = v on 0 < |k| < R
//   coulomb-sr:<e2>,<R>                 matched Coulomb form (prefactor needs kF)
//   radial:<R>:(n,v);(n,v);...          n = |k|^2 (integer), v = V_hat
//   explicit:<R>:(x,y,z,v);...          entries symmetrised under k -> -k
//-----------------------------------------------------------------------------
struct PotentialSpec {
    enum class Kind { constant, coulomb_sr, radial_table, explicit_list };
    Kind kind = Kind::constant;
    double radius = 2.5;
    double v = 1.0;  // constant
    double e2 = 1.0; // coulomb_sr
    std::vector<std::pair<std::int64_t, double>> radial;
    std::vector<std::pair<Momentum3, double>> points;

    std::string to_string() const;
    static PotentialSpec parse(const std::string& text); // throws ConfigError

    friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

// Realise the coefficients.  kF feeds the coulomb-sr prefactor
// 8 kappa e^2 hbar kF^2 / (3 pi |k|^2) with kappa, hbar of the closed shell.
InteractionFourier make_interaction(const PotentialSpec& spec, double kF);

struct RunConfig {
    RunMode mode = RunMode::occupation;

    // [model]
    double kF = 5.0;
    double R = 2.5;
    double delta = 1.0 / 12;
    int M = 0; // 0 -> default patch count
    PotentialSpec potential;

    // [routes]
    RouteFlags routes;
    int series_mmax = 25;
    bool fast_asymptotic = false;

    // [q]
    bool scan_shell = false;
    std::vector<Momentum3> q_list;

    // [output]
    std::string out_path;          // empty -> stdout
    OutFormat format = OutFormat::csv;
    bool timestamp = true;

    // [quadrature]
    QuadratureSpec quad{1e-13, 1e-11, 1 << 14};

    // [sweep]   (mode sweep-n)
    std::vector<double> kF_list{5, 8, 12, 17, 25};

    // [dv]      (mode dv-compare): |q| = kF + q_offset, short-range cutoff R
    double dv_e2 = 1.0;
    std::vector<double> dv_kF_list{50, 100};
    double dv_q_offset = 0.5;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(const std::string& text); // throws ConfigError
RunConfig load_config(const std::string& path);  // throws ConfigError (incl. I/O)
std::string serialize_config(const RunConfig& cfg);

// Mode-specific semantic validation (occupation needs q entries, dv needs
// 0 < q_offset < R, ...).  Throws ConfigError.
void validate_config(const RunConfig& cfg);

} // namespace fermirpa

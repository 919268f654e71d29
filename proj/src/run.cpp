#include "fermirpa/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fermirpa/thermo.hpp"

namespace fermirpa {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_cell(const Json& c) {
    if (c.is_null()) return {};
    if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
    if (c.is_number_integer()) return std::to_string(c.get<long long>());
    if (c.is_number_float()) return fmt17(c.get<double>());
    std::string s = c.get<std::string>();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : s) {
            if (ch == '"') quoted += '"';
            quoted += ch;
        }
        quoted += '"';
        return quoted;
    }
    return s;
}

// The disagreement among the exact evaluation routes for one q.
double route_spread(const OccupationResult& r, const RouteFlags& routes) {
    std::vector<double> vals;
    if (routes.matrix) vals.push_back(r.nq_matrix);
    if (routes.series) vals.push_back(r.nq_series);
    if (routes.integral) vals.push_back(r.nq_integral);
    double spread = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            spread = std::max(spread, std::abs(vals[i] - vals[j]));
    return spread;
}

EvalOptions eval_options(const RunConfig& cfg) {
    EvalOptions opts;
    opts.routes = cfg.routes;
    opts.series_mmax = cfg.series_mmax;
    opts.fast_asymptotic = cfg.fast_asymptotic;
    opts.quad = cfg.quad;
    return opts;
}

Table occupation_table(const RunConfig& cfg, int threads, bool whole_shell) {
    Table t;
    t.columns = {"qx",          "qy",          "qz",          "q_norm",
                 "inside_fermi", "alpha_q",     "in_Q_eps",    "ctilde_size",
                 "mismatched_k", "nq_matrix",   "nq_series",   "nq_integral",
                 "nq_asymptotic", "eii_gap",    "eiii_gap"};
    const InteractionFourier vhat = make_interaction(cfg.potential, cfg.kF);
    const ModelParams mp = closed_shell_params(cfg.kF, cfg.R, cfg.delta, cfg.M, vhat);
    Evaluator ev(mp, threads, cfg.series_mmax, cfg.quad);
    const EvalOptions opts = eval_options(cfg);

    std::vector<OccupationResult> results;
    if (whole_shell) {
        results = ev.evaluate_shell(opts);
    } else {
        results.reserve(cfg.q_list.size());
        for (Momentum3 q : cfg.q_list) results.push_back(ev.evaluate(q, opts));
    }

    const bool gaps = cfg.routes.integral && cfg.routes.asymptotic;
    for (const OccupationResult& r : results) {
        std::vector<Json> row;
        row.push_back(r.q.x);
        row.push_back(r.q.y);
        row.push_back(r.q.z);
        row.push_back(r.q_norm);
        row.push_back(r.inside_fermi);
        row.push_back(r.alpha_q ? Json(*r.alpha_q) : Json(nullptr));
        row.push_back(r.in_Q_eps);
        row.push_back(r.ctilde_size);
        row.push_back(r.mismatched_k);
        row.push_back(cfg.routes.matrix ? Json(r.nq_matrix) : Json(nullptr));
        row.push_back(cfg.routes.series ? Json(r.nq_series) : Json(nullptr));
        row.push_back(cfg.routes.integral ? Json(r.nq_integral) : Json(nullptr));
        row.push_back(cfg.routes.asymptotic ? Json(r.nq_asymptotic) : Json(nullptr));
        row.push_back(gaps ? Json(r.eii_gap) : Json(nullptr));
        row.push_back(gaps ? Json(r.eiii_gap) : Json(nullptr));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table sweep_table(const RunConfig& cfg, int threads) {
    Table t;
    t.columns = {"kF", "N",         "kappa",
                 "sup_nq_inside",   "sup_nq_outside",
                 "Z",  "max_route_disagreement"};
    for (double kF : cfg.kF_list) {
        const InteractionFourier vhat = make_interaction(cfg.potential, kF);
        const ModelParams mp = closed_shell_params(kF, cfg.R, cfg.delta, cfg.M, vhat);
        Evaluator ev(mp, threads, cfg.series_mmax, cfg.quad);
        EvalOptions opts = eval_options(cfg);
        opts.routes.matrix = true; // Z and the suprema are read off this route
        // The disagreement column compares the exact routes; the closed
        // asymptotic integral is undefined for the shell momenta that are
        // orthogonal to an interaction mode, so it is not swept here.
        opts.routes.asymptotic = false;
        const std::vector<OccupationResult> shell = ev.evaluate_shell(opts);
        const QuasiparticleWeight zw = quasiparticle_weight(shell);
        double spread = 0.0;
        for (const OccupationResult& r : shell)
            spread = std::max(spread, route_spread(r, opts.routes));
        t.rows.push_back({Json(kF), Json(mp.N), Json(mp.kappa), Json(zw.sup_inside),
                          Json(zw.sup_outside), Json(zw.Z), Json(spread)});
    }
    return t;
}

Table q_convergence_table(const RunConfig& cfg, int threads) {
    Table t;
    t.columns = {"kx", "ky", "kz", "k_norm", "vhat", "patch_pairs", "max_gap",
                 "mu_at_max"};
    const InteractionFourier vhat = make_interaction(cfg.potential, cfg.kF);
    const ModelParams mp = closed_shell_params(cfg.kF, cfg.R, cfg.delta, cfg.M, vhat);
    Evaluator ev(mp, threads, cfg.series_mmax, cfg.quad);
    std::vector<double> mu_grid;
    for (int j = 0; j <= 200; ++j) mu_grid.push_back(0.05 * j);
    for (const auto& [k, kc] : ev.kernels()) {
        const QGapReport rep = Qk_vs_Q0_report(kc, mp, mu_grid);
        t.rows.push_back({Json(k.x), Json(k.y), Json(k.z), Json(k.norm()),
                          Json(mp.vhat.value(k)), Json(static_cast<long long>(kc.bundle.m())),
                          Json(rep.max_gap), Json(rep.mu_at_max)});
    }
    return t;
}

Table dv_table(const RunConfig& cfg) {
    Table t;
    t.columns = {"kF", "q_norm", "thermo_nq", "dv_sr", "ratio"};
    // Nested double quadratures cannot resolve below the inner integral's
    // noise floor; tighter requests churn on subdivisions without converging.
    QuadratureSpec quad = cfg.quad;
    quad.abs_tol = std::max(quad.abs_tol, 1e-9);
    quad.rel_tol = std::max(quad.rel_tol, 1e-8);
    for (double kF : cfg.dv_kF_list) {
        ThermoParams tp;
        tp.kF = kF;
        tp.R = cfg.R;
        tp.e_coul = std::sqrt(cfg.dv_e2); // the config carries e^2
        tp.vhat_radial = matched_coulomb_vhat(tp);
        const double qn = kF + cfg.dv_q_offset;
        const double th = thermo_nq(qn, tp, quad);
        const double dv = dv_nq(qn, DvSide::outside, tp, cfg.R, quad).value;
        t.rows.push_back({Json(kF), Json(qn), Json(th), Json(dv),
                          th != 0.0 ? Json(dv / th) : Json(nullptr)});
    }
    return t;
}

Table geometry_table(const RunConfig& cfg) {
    Table t;
    t.columns = {"alpha",       "antipode",   "southern", "omega_hat_x",
                 "omega_hat_y", "omega_hat_z", "theta_lo", "theta_hi",
                 "phi_lo",      "phi_hi",     "full_azimuth", "area_target",
                 "area_kept",   "diameter",   "corridor_min_separation",
                 "corridor_pass", "margin_used", "margin_full",
                 "diameter_constant_max"};
    const InteractionFourier vhat = make_interaction(cfg.potential, cfg.kF);
    const ModelParams mp = closed_shell_params(cfg.kF, cfg.R, cfg.delta, cfg.M, vhat);
    const PatchSet ps = build_patchset(mp);
    const CorridorAudit ca = corridor_audit(ps);
    const DiameterAudit da = diameter_audit(ps, mp);
    for (const Patch& p : ps.patches) {
        t.rows.push_back({Json(p.alpha), Json(p.antipode), Json(p.southern),
                          Json(p.omega_hat[0]), Json(p.omega_hat[1]),
                          Json(p.omega_hat[2]), Json(p.cell.theta_lo),
                          Json(p.cell.theta_hi), Json(p.cell.phi_lo),
                          Json(p.cell.phi_hi), Json(p.cell.full_azimuth),
                          Json(p.area_target), Json(p.area_kept), Json(p.diameter),
                          Json(ca.min_separation), Json(ca.pass), Json(ps.margin_used),
                          Json(ps.margin_full), Json(da.max_constant)});
    }
    return t;
}

} // namespace

std::string table_to_csv(const Table& t, bool timestamp) {
    std::ostringstream out;
    if (timestamp) {
        std::time_t now = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[40];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        out << "# generated " << buf << '\n';
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out << ',';
        out << t.columns[i];
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_cell(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string table_to_json(const Table& t) {
    Json arr = Json::array();
    for (const auto& row : t.rows) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

Table build_run_table(const RunConfig& cfg, int threads) {
    switch (cfg.mode) {
    case RunMode::occupation:
        return occupation_table(cfg, threads, cfg.scan_shell);
    case RunMode::scan:
        return occupation_table(cfg, threads, true);
    case RunMode::sweep_n:
        return sweep_table(cfg, threads);
    case RunMode::q_convergence:
        return q_convergence_table(cfg, threads);
    case RunMode::dv_compare:
        return dv_table(cfg);
    case RunMode::geometry_audit:
        return geometry_table(cfg);
    }
    throw std::logic_error("unknown run mode");
}

int execute_run(const RunConfig& cfg, int threads, std::ostream& fallback,
                std::ostream& err) {
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        err << "invalid config: " << e.what() << '\n';
        return 1;
    }

    Table table;
    try {
        table = build_run_table(cfg, threads);
    } catch (const std::exception& e) {
        err << "numeric failure in mode '" << to_string(cfg.mode) << "': " << e.what()
            << '\n';
        return 2;
    }

    const std::string body = cfg.format == OutFormat::csv
                                 ? table_to_csv(table, cfg.timestamp)
                                 : table_to_json(table);
    if (cfg.out_path.empty()) {
        fallback << body;
        return 0;
    }
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) {
        err << "cannot open output path '" << cfg.out_path << "'\n";
        return 2;
    }
    f << body;
    f.flush();
    if (!f) {
        err << "failed writing output path '" << cfg.out_path << "'\n";
        return 2;
    }
    return 0;
}

} // namespace fermirpa

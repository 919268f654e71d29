#include "fermirpa/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fermirpa/lattice.hpp"

namespace fermirpa {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& s, const std::string& where) {
    const std::string t = trim(s);
    if (t.empty()) throw ConfigError(where + ": empty number");
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ConfigError(where + ": bad number '" + t + "'");
    return v;
}

long long parse_int(const std::string& s, const std::string& where) {
    const std::string t = trim(s);
    if (t.empty()) throw ConfigError(where + ": empty integer");
    char* end = nullptr;
    long long v = std::strtoll(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size())
        throw ConfigError(where + ": bad integer '" + t + "'");
    return v;
}

bool parse_bool(const std::string& s, const std::string& where) {
    const std::string t = trim(s);
    if (t == "true") return true;
    if (t == "false") return false;
    throw ConfigError(where + ": expected true/false, got '" + t + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const std::string& part : split(s, ','))
        out.push_back(parse_double(part, where));
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt17(v[i]);
    }
    return out;
}

// "(a,b,...)" -> the comma-separated parts
std::vector<std::string> parse_group(const std::string& s, std::size_t arity,
                                     const std::string& where) {
    const std::string t = trim(s);
    if (t.size() < 2 || t.front() != '(' || t.back() != ')')
        throw ConfigError(where + ": expected (...) group, got '" + t + "'");
    std::vector<std::string> parts = split(t.substr(1, t.size() - 2), ',');
    if (parts.size() != arity)
        throw ConfigError(where + ": group '" + t + "' needs " +
                          std::to_string(arity) + " entries");
    return parts;
}

std::vector<Momentum3> parse_q_list(const std::string& s, const std::string& where) {
    std::vector<Momentum3> out;
    if (trim(s).empty()) return out;
    for (const std::string& grp : split(s, ';')) {
        std::vector<std::string> xyz = parse_group(grp, 3, where);
        out.push_back({static_cast<int>(parse_int(xyz[0], where)),
                       static_cast<int>(parse_int(xyz[1], where)),
                       static_cast<int>(parse_int(xyz[2], where))});
    }
    return out;
}

std::string join_q_list(const std::vector<Momentum3>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += '(' + std::to_string(v[i].x) + ',' + std::to_string(v[i].y) + ',' +
               std::to_string(v[i].z) + ')';
    }
    return out;
}

} // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
    case RunMode::occupation: return "occupation";
    case RunMode::scan: return "scan";
    case RunMode::sweep_n: return "sweep-n";
    case RunMode::q_convergence: return "q-convergence";
    case RunMode::dv_compare: return "dv-compare";
    case RunMode::geometry_audit: return "geometry-audit";
    }
    throw ConfigError("unknown mode enum");
}

RunMode run_mode_from_string(const std::string& s) {
    if (s == "occupation") return RunMode::occupation;
    if (s == "scan") return RunMode::scan;
    if (s == "sweep-n") return RunMode::sweep_n;
    if (s == "q-convergence") return RunMode::q_convergence;
    if (s == "dv-compare") return RunMode::dv_compare;
    if (s == "geometry-audit") return RunMode::geometry_audit;
    throw ConfigError("unknown mode '" + s + "'");
}

std::string PotentialSpec::to_string() const {
    switch (kind) {
    case Kind::constant:
        return "const:" + fmt17(v) + ',' + fmt17(radius);
    case Kind::coulomb_sr:
        return "coulomb-sr:" + fmt17(e2) + ',' + fmt17(radius);
    case Kind::radial_table: {
        std::string out = "radial:" + fmt17(radius) + ':';
        for (std::size_t i = 0; i < radial.size(); ++i) {
            if (i) out += ';';
            out += '(' + std::to_string(radial[i].first) + ',' +
                   fmt17(radial[i].second) + ')';
        }
        return out;
    }
    case Kind::explicit_list: {
        std::string out = "explicit:" + fmt17(radius) + ':';
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i) out += ';';
            const Momentum3 k = points[i].first;
            out += '(' + std::to_string(k.x) + ',' + std::to_string(k.y) + ',' +
                   std::to_string(k.z) + ',' + fmt17(points[i].second) + ')';
        }
        return out;
    }
    }
    throw ConfigError("unknown potential kind");
}

PotentialSpec PotentialSpec::parse(const std::string& text) {
    const std::string where = "potential";
    const std::string t = trim(text);
    std::size_t colon = t.find(':');
    if (colon == std::string::npos)
        throw ConfigError(where + ": expected <kind>:..., got '" + t + "'");
    const std::string kind = t.substr(0, colon);
    const std::string rest = t.substr(colon + 1);

    PotentialSpec spec;
    if (kind == "const" || kind == "coulomb-sr") {
        std::vector<std::string> parts = split(rest, ',');
        if (parts.size() != 2)
            throw ConfigError(where + ": '" + kind + "' needs <value>,<radius>");
        if (kind == "const") {
            spec.kind = Kind::constant;
            spec.v = parse_double(parts[0], where);
        } else {
            spec.kind = Kind::coulomb_sr;
            spec.e2 = parse_double(parts[0], where);
        }
        spec.radius = parse_double(parts[1], where);
        return spec;
    }
    if (kind == "radial" || kind == "explicit") {
        std::size_t colon2 = rest.find(':');
        if (colon2 == std::string::npos)
            throw ConfigError(where + ": '" + kind + "' needs <radius>:<entries>");
        spec.radius = parse_double(rest.substr(0, colon2), where);
        const std::string entries = rest.substr(colon2 + 1);
        if (kind == "radial") {
            spec.kind = Kind::radial_table;
            if (!trim(entries).empty())
                for (const std::string& grp : split(entries, ';')) {
                    std::vector<std::string> nv = parse_group(grp, 2, where);
                    spec.radial.emplace_back(parse_int(nv[0], where),
                                             parse_double(nv[1], where));
                }
        } else {
            spec.kind = Kind::explicit_list;
            if (!trim(entries).empty())
                for (const std::string& grp : split(entries, ';')) {
                    std::vector<std::string> e = parse_group(grp, 4, where);
                    Momentum3 k{static_cast<int>(parse_int(e[0], where)),
                                static_cast<int>(parse_int(e[1], where)),
                                static_cast<int>(parse_int(e[2], where))};
                    spec.points.emplace_back(k, parse_double(e[3], where));
                }
        }
        return spec;
    }
    throw ConfigError(where + ": unknown kind '" + kind + "'");
}

InteractionFourier make_interaction(const PotentialSpec& spec, double kF) {
    switch (spec.kind) {
    case PotentialSpec::Kind::constant:
        return InteractionFourier::make_constant(spec.v, spec.radius);
    case PotentialSpec::Kind::coulomb_sr: {
        // 8 kappa e^2 hbar kF^2 / (3 pi |k|^2) with the closed-shell constants
        const auto ball = enumerate_fermi_ball(kF);
        const double n13 = std::cbrt(static_cast<double>(ball.size()));
        const double kappa = kF / n13, hbar = 1.0 / n13;
        const double v_pref = 8.0 * kappa * hbar * kF * kF / (3.0 * 3.14159265358979323846);
        return InteractionFourier::make_coulomb(spec.e2, spec.radius, v_pref);
    }
    case PotentialSpec::Kind::radial_table:
        return InteractionFourier::make_radial_table(spec.radial, spec.radius);
    case PotentialSpec::Kind::explicit_list:
        return InteractionFourier::make_explicit(spec.points, spec.radius);
    }
    throw ConfigError("unknown potential kind");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::vector<std::string> seen; // section.key duplicates
    std::string section;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const std::string where = "line " + std::to_string(lineno);

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"model", "routes",     "q",  "output",
                                          "quadrature", "sweep", "dv"};
            bool ok = false;
            for (const char* k : known) ok = ok || section == k;
            if (!ok) throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string qual = section.empty() ? key : section + '.' + key;
        for (const std::string& s : seen)
            if (s == qual) throw ConfigError(where + ": duplicate key '" + qual + "'");
        seen.push_back(qual);

        if (section.empty()) {
            if (key == "mode") cfg.mode = run_mode_from_string(val);
            else throw ConfigError(where + ": unknown key '" + key + "'");
        } else if (section == "model") {
            if (key == "kF") cfg.kF = parse_double(val, qual);
            else if (key == "R") cfg.R = parse_double(val, qual);
            else if (key == "delta") cfg.delta = parse_double(val, qual);
            else if (key == "M") cfg.M = static_cast<int>(parse_int(val, qual));
            else if (key == "potential") cfg.potential = PotentialSpec::parse(val);
            else throw ConfigError(where + ": unknown key '" + qual + "'");
        } else if (section == "routes") {
            if (key == "matrix") cfg.routes.matrix = parse_bool(val, qual);
            else if (key == "series") cfg.routes.series = parse_bool(val, qual);
            else if (key == "integral") cfg.routes.integral = parse_bool(val, qual);
            else if (key == "asymptotic") cfg.routes.asymptotic = parse_bool(val, qual);
            else if (key == "series_mmax") cfg.series_mmax = static_cast<int>(parse_int(val, qual));
            else if (key == "fast_asymptotic") cfg.fast_asymptotic = parse_bool(val, qual);
            else throw ConfigError(where + ": unknown key '" + qual + "'");
        } else if (section == "q") {
            if (key == "scan") cfg.scan_shell = parse_bool(val, qual);
            else if (key == "list") cfg.q_list = parse_q_list(val, qual);
            else throw ConfigError(where + ": unknown key '" + qual + "'");
        } else if (section == "output") {
            if (key == "path") cfg.out_path = val;
            else if (key == "format") {
                if (val == "csv") cfg.format = OutFormat::csv;
                else if (val == "json") cfg.format = OutFormat::json;
                else throw ConfigError(where + ": format must be csv or json");
            } else if (key == "timestamp") cfg.timestamp = parse_bool(val, qual);
            else throw ConfigError(where + ": unknown key '" + qual + "'");
        } else if (section == "quadrature") {
            if (key == "abs_tol") cfg.quad.abs_tol = parse_double(val, qual);
            else if (key == "rel_tol") cfg.quad.rel_tol = parse_double(val, qual);
            else if (key == "max_subdivisions")
                cfg.quad.max_subdivisions = static_cast<int>(parse_int(val, qual));
            else throw ConfigError(where + ": unknown key '" + qual + "'");
        } else if (section == "sweep") {
            if (key == "kF_list") cfg.kF_list = parse_double_list(val, qual);
            else throw ConfigError(where + ": unknown key '" + qual + "'");
        } else if (section == "dv") {
            if (key == "e2") cfg.dv_e2 = parse_double(val, qual);
            else if (key == "kF_list") cfg.dv_kF_list = parse_double_list(val, qual);
            else if (key == "q_offset") cfg.dv_q_offset = parse_double(val, qual);
            else throw ConfigError(where + ": unknown key '" + qual + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "mode = " << to_string(cfg.mode) << "\n\n";
    out << "[model]\n";
    out << "kF = " << fmt17(cfg.kF) << '\n';
    out << "R = " << fmt17(cfg.R) << '\n';
    out << "delta = " << fmt17(cfg.delta) << '\n';
    out << "M = " << cfg.M << '\n';
    out << "potential = " << cfg.potential.to_string() << "\n\n";
    out << "[routes]\n";
    out << "matrix = " << (cfg.routes.matrix ? "true" : "false") << '\n';
    out << "series = " << (cfg.routes.series ? "true" : "false") << '\n';
    out << "integral = " << (cfg.routes.integral ? "true" : "false") << '\n';
    out << "asymptotic = " << (cfg.routes.asymptotic ? "true" : "false") << '\n';
    out << "series_mmax = " << cfg.series_mmax << '\n';
    out << "fast_asymptotic = " << (cfg.fast_asymptotic ? "true" : "false") << "\n\n";
    out << "[q]\n";
    out << "scan = " << (cfg.scan_shell ? "true" : "false") << '\n';
    out << "list = " << join_q_list(cfg.q_list) << "\n\n";
    out << "[output]\n";
    out << "path = " << cfg.out_path << '\n';
    out << "format = " << (cfg.format == OutFormat::csv ? "csv" : "json") << '\n';
    out << "timestamp = " << (cfg.timestamp ? "true" : "false") << "\n\n";
    out << "[quadrature]\n";
    out << "abs_tol = " << fmt17(cfg.quad.abs_tol) << '\n';
    out << "rel_tol = " << fmt17(cfg.quad.rel_tol) << '\n';
    out << "max_subdivisions = " << cfg.quad.max_subdivisions << "\n\n";
    out << "[sweep]\n";
    out << "kF_list = " << join_doubles(cfg.kF_list) << "\n\n";
    out << "[dv]\n";
    out << "e2 = " << fmt17(cfg.dv_e2) << '\n';
    out << "kF_list = " << join_doubles(cfg.dv_kF_list) << '\n';
    out << "q_offset = " << fmt17(cfg.dv_q_offset) << '\n';
    return out.str();
}

void validate_config(const RunConfig& cfg) {
    if (!(cfg.kF > 0)) throw ConfigError("model.kF must be positive");
    if (!(cfg.R > 0)) throw ConfigError("model.R must be positive");
    if (!(cfg.delta > 0 && cfg.delta < 1.0 / 6))
        throw ConfigError("model.delta must lie in (0, 1/6)");
    if (cfg.M < 0 || cfg.M % 2 != 0)
        throw ConfigError("model.M must be 0 (default) or a positive even count");
    if (!(cfg.potential.radius > 0))
        throw ConfigError("potential radius must be positive");
    if (cfg.series_mmax < 1) throw ConfigError("routes.series_mmax must be >= 1");
    if (!(cfg.quad.abs_tol > 0) || !(cfg.quad.rel_tol > 0) ||
        cfg.quad.max_subdivisions < 1)
        throw ConfigError("quadrature tolerances must be positive");

    switch (cfg.mode) {
    case RunMode::occupation:
        if (cfg.q_list.empty() && !cfg.scan_shell)
            throw ConfigError("occupation mode needs q.list (or q.scan = true)");
        break;
    case RunMode::sweep_n:
        if (cfg.kF_list.empty()) throw ConfigError("sweep-n needs sweep.kF_list");
        for (double k : cfg.kF_list)
            if (!(k > 0)) throw ConfigError("sweep.kF_list entries must be positive");
        break;
    case RunMode::dv_compare:
        if (cfg.dv_kF_list.empty()) throw ConfigError("dv-compare needs dv.kF_list");
        for (double k : cfg.dv_kF_list)
            if (!(k > 0)) throw ConfigError("dv.kF_list entries must be positive");
        if (!(cfg.dv_e2 > 0)) throw ConfigError("dv.e2 must be positive");
        if (!(cfg.dv_q_offset > 0 && cfg.dv_q_offset < cfg.R))
            throw ConfigError("dv.q_offset must lie in (0, R)");
        break;
    default:
        break;
    }
}

} // namespace fermirpa

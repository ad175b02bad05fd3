#include "thermotomo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "thermotomo/errors.hpp"
#include "thermotomo/io.hpp"

namespace thermotomo {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& v) {
    // accepts plain numbers and a single quotient such as 2/255
    const auto slash = v.find('/');
    if (slash != std::string::npos) {
        const double den = parse_real(trim(v.substr(slash + 1)));
        if (den == 0.0) throw ConfigError("division by zero in '" + v + "'");
        return parse_real(trim(v.substr(0, slash))) / den;
    }
    double out = 0.0;
    const auto* first = v.data();
    const auto* last = v.data() + v.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(out)) {
        throw ConfigError("expected a number, got '" + v + "'");
    }
    return out;
}

std::uint64_t parse_uint(const std::string& v) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("expected a nonnegative integer, got '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigError("expected a boolean, got '" + v + "'");
}

// "layer.3.radius" -> (3, "radius")
bool indexed_key(const std::string& key, const std::string& prefix, std::size_t& index, std::string& field) {
    if (key.rfind(prefix + ".", 0) != 0) return false;
    const std::string rest = key.substr(prefix.size() + 1);
    const auto dot = rest.find('.');
    if (dot == std::string::npos) return false;
    std::size_t idx = 0;
    const auto res = std::from_chars(rest.data(), rest.data() + dot, idx);
    if (res.ec != std::errc() || res.ptr != rest.data() + dot || idx == 0) return false;
    index = idx;
    field = rest.substr(dot + 1);
    return true;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig c;
    std::map<std::size_t, std::map<std::string, double>> layer_entries, bump_entries;

    using Setter = std::function<void(const std::string&)>;
    auto real = [](double& dst) -> Setter { return [&dst](const std::string& v) { dst = parse_real(v); }; };
    auto size = [](std::size_t& dst) -> Setter {
        return [&dst](const std::string& v) { dst = static_cast<std::size_t>(parse_uint(v)); };
    };
    auto opt_size = [](std::optional<std::size_t>& dst) -> Setter {
        return [&dst](const std::string& v) { dst = static_cast<std::size_t>(parse_uint(v)); };
    };
    auto flag = [](bool& dst) -> Setter { return [&dst](const std::string& v) { dst = parse_bool(v); }; };

    const std::map<std::string, Setter> setters = {
        {"grid.nx", size(c.nx)},
        {"grid.ny", size(c.ny)},
        {"grid.h", real(c.h)},
        {"grid.ox", real(c.ox)},
        {"grid.oy", real(c.oy)},
        {"omega.i0", opt_size(c.omega_i0)},
        {"omega.j0", opt_size(c.omega_j0)},
        {"omega.i1", opt_size(c.omega_i1)},
        {"omega.j1", opt_size(c.omega_j1)},
        {"box_margin", [&c](const std::string& v) { c.box_margin = parse_real(v); }},
        {"kset.kind", [&c](const std::string& v) { c.kset_kind = v; }},
        {"kset.cx", real(c.kset_cx)},
        {"kset.cy", real(c.kset_cy)},
        {"kset.r", real(c.kset_r)},
        {"kset.r_inner", real(c.kset_r_inner)},
        {"kset.r_outer", real(c.kset_r_outer)},
        {"kset.x0", real(c.kset_x0)},
        {"kset.y0", real(c.kset_y0)},
        {"kset.x1", real(c.kset_x1)},
        {"kset.y1", real(c.kset_y1)},
        {"T", real(c.T)},
        {"cfl", real(c.cfl)},
        {"m_max", size(c.m_max)},
        {"tol_rel", real(c.tol_rel)},
        {"harmonic_tol", real(c.harmonic_tol)},
        {"seed", [&c](const std::string& v) { c.seed = parse_uint(v); }},
        {"output_dir", [&c](const std::string& v) { c.output_dir = v; }},
        {"phantom.kind",
         [&c](const std::string& v) {
             if (v == "gaussian_bump") {
                 c.phantom_kind = PhantomKind::gaussian_bump;
             } else if (v == "sum_of_bumps") {
                 c.phantom_kind = PhantomKind::sum_of_bumps;
             } else {
                 throw ConfigError("unknown phantom kind '" + v + "'");
             }
         }},
        {"sponge", flag(c.sponge)},
        {"mollify_width", real(c.mollify_width)},
        {"power_iters", size(c.power_iters)},
        {"power_filter", size(c.power_filter)},
        {"n_pos", size(c.n_pos)},
        {"n_dir", size(c.n_dir)},
        {"max_depth", size(c.max_depth)},
        {"min_weight", real(c.min_weight)},
        {"ray.x", real(c.ray_x)},
        {"ray.y", real(c.ray_y)},
        {"ray.dx", real(c.ray_dx)},
        {"ray.dy", real(c.ray_dy)},
        {"pgm", flag(c.pgm)},
    };

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        auto fail = [&](const std::string& msg) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + msg);
        };
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail("expected 'key = value'");
        try {
            std::size_t idx = 0;
            std::string field;
            if (auto it = setters.find(key); it != setters.end()) {
                it->second(value);
            } else if (indexed_key(key, "layer", idx, field) && (field == "radius" || field == "speed")) {
                layer_entries[idx][field] = parse_real(value);
            } else if (indexed_key(key, "phantom", idx, field) && (field == "x" || field == "y" || field == "sigma")) {
                bump_entries[idx][field] = parse_real(value);
            } else {
                fail("unknown key '" + key + "'");
            }
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            if (what.rfind("config line", 0) == 0) throw;
            fail(what);
        }
    }

    std::size_t expect = 1;
    for (const auto& [idx, entries] : layer_entries) {
        if (idx != expect++) throw ConfigError("layer indices must be contiguous from 1");
        if (!entries.contains("radius") || !entries.contains("speed")) {
            throw ConfigError("layer " + std::to_string(idx) + " needs both radius and speed");
        }
        c.layers.push_back({entries.at("radius"), entries.at("speed")});
    }
    expect = 1;
    for (const auto& [idx, entries] : bump_entries) {
        if (idx != expect++) throw ConfigError("phantom bump indices must be contiguous from 1");
        if (!entries.contains("x") || !entries.contains("y") || !entries.contains("sigma")) {
            throw ConfigError("phantom bump " + std::to_string(idx) + " needs x, y and sigma");
        }
        c.bumps.push_back({entries.at("x"), entries.at("y"), entries.at("sigma")});
    }
    if (c.nx < 3 || c.ny < 3) throw ConfigError("grid.nx and grid.ny are required (at least 3)");
    if (!(c.h > 0.0)) throw ConfigError("grid.h is required and must be positive");
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const ConfigError&) {
        throw ConfigError("cannot read config file " + path.string());
    }
    return parse_run_config(text);
}

Problem build_problem(const RunConfig& cfg) {
    double c_max = 1.0;
    for (const Layer& l : cfg.layers) c_max = std::max(c_max, l.speed);
    const double margin = cfg.box_margin.value_or(required_box_margin(cfg.T, c_max));
    if (!(margin >= 0.0)) throw ConfigError("box_margin must be nonnegative");
    // two spare nodes keep omega off the Dirichlet ring even for T = 0
    const auto pad = static_cast<std::size_t>(std::ceil(margin / cfg.h - 1e-9)) + 2;
    const Grid box(cfg.nx + 2 * pad, cfg.ny + 2 * pad, cfg.h, cfg.ox - static_cast<double>(pad) * cfg.h,
                   cfg.oy - static_cast<double>(pad) * cfg.h);
    Medium medium(box, cfg.layers, cfg.mollify_width);

    const std::size_t i0 = cfg.omega_i0.value_or(0), j0 = cfg.omega_j0.value_or(0);
    const std::size_t i1 = cfg.omega_i1.value_or(cfg.nx - 1), j1 = cfg.omega_j1.value_or(cfg.ny - 1);
    if (i1 >= cfg.nx || j1 >= cfg.ny) throw ConfigError("omega index range exceeds the lattice");
    Region omega = Region::rectangle(box, pad + i0, pad + j0, pad + i1, pad + j1);

    Region kset;
    if (cfg.kset_kind == "disk") {
        kset = Region::disk(box, cfg.kset_cx, cfg.kset_cy, cfg.kset_r);
    } else if (cfg.kset_kind == "annulus") {
        kset = Region::annulus(box, cfg.kset_cx, cfg.kset_cy, cfg.kset_r_inner, cfg.kset_r_outer);
    } else if (cfg.kset_kind == "rectangle") {
        auto snap = [&](double v, double o) {
            return static_cast<std::size_t>(std::llround((v - o) / cfg.h));
        };
        kset = Region::rectangle(box, snap(cfg.kset_x0, box.ox), snap(cfg.kset_y0, box.oy), snap(cfg.kset_x1, box.ox),
                                 snap(cfg.kset_y1, box.oy));
    } else {
        throw ConfigError("unknown kset.kind '" + cfg.kset_kind + "'");
    }

    ReconConfig rc;
    rc.omega = std::move(omega);
    rc.kset = std::move(kset);
    rc.T = cfg.T;
    rc.m_max = cfg.m_max;
    rc.tol_rel = cfg.tol_rel;
    rc.harmonic_tol = cfg.harmonic_tol;
    rc.solver.cfl = cfg.cfl;
    rc.solver.sponge = cfg.sponge;
    rc.power_filter_passes = cfg.power_filter;
    validate(rc, medium);
    return {box, std::move(medium), std::move(rc)};
}

ScalarField build_phantom(const RunConfig& cfg, const Problem& p) {
    return make_phantom(cfg.phantom_kind, cfg.bumps, p.box, p.recon.kset);
}

}  // namespace thermotomo

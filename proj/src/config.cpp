#include "nullwave/config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "nullwave/errors.hpp"

namespace nullwave {

namespace {

// Sorted-key rendering of a YAML tree, so that formatting and key order do
// not change the hash.
void canonical(const YAML::Node& node, std::ostringstream& out) {
    switch (node.Type()) {
        case YAML::NodeType::Map: {
            std::map<std::string, YAML::Node> sorted;
            for (const auto& kv : node) sorted.emplace(kv.first.as<std::string>(), kv.second);
            out << '{';
            bool first = true;
            for (const auto& [k, v] : sorted) {
                if (!first) out << ',';
                first = false;
                out << k << ':';
                canonical(v, out);
            }
            out << '}';
            break;
        }
        case YAML::NodeType::Sequence: {
            out << '[';
            for (std::size_t i = 0; i < node.size(); ++i) {
                if (i) out << ',';
                canonical(node[i], out);
            }
            out << ']';
            break;
        }
        case YAML::NodeType::Scalar: out << node.Scalar(); break;
        default: out << "~"; break;
    }
}

template <typename T>
T get(const YAML::Node& node, const std::string& key, const std::string& where) {
    const YAML::Node v = node[key];
    if (!v) throw UsageError("config: missing '" + where + key + "'");
    try {
        return v.as<T>();
    } catch (const YAML::Exception&) {
        throw UsageError("config: bad value for '" + where + key + "'");
    }
}

template <typename T>
T get_or(const YAML::Node& node, const std::string& key, T fallback, const std::string& where) {
    if (!node[key]) return fallback;
    return get<T>(node, key, where);
}

std::vector<double> get_list(const YAML::Node& node, const std::string& key, const std::string& where) {
    const YAML::Node v = node[key];
    if (!v) return {};
    if (!v.IsSequence()) throw UsageError("config: '" + where + key + "' must be a list");
    std::vector<double> out;
    for (const auto& e : v) {
        try {
            out.push_back(e.as<double>());
        } catch (const YAML::Exception&) {
            throw UsageError("config: bad entry in '" + where + key + "'");
        }
    }
    return out;
}

std::array<double, 3> get_vec3(const YAML::Node& node, const std::string& key, std::array<double, 3> fallback,
                               const std::string& where) {
    if (!node[key]) return fallback;
    const auto v = get_list(node, key, where);
    if (v.size() != 3) throw UsageError("config: '" + where + key + "' needs three entries");
    return {v[0], v[1], v[2]};
}

ExampleSystem parse_system(const YAML::Node& n) {
    if (!n || !n.IsMap()) throw UsageError("config: missing 'system' section");
    ExampleSystem ex;
    const auto name = get<std::string>(n, "example", "system.");
    const auto tag = ExampleSystem::parse_tag(name);
    if (!tag) throw UsageError("config: unknown system.example '" + name + "'");
    ex.tag = *tag;
    ex.c0 = get_or<double>(n, "c0", 1.0, "system.");
    ex.c1 = get_or<double>(n, "c1", 1.0, "system.");
    ex.c2 = get_or<double>(n, "c2", 1.0, "system.");
    ex.c_ab = c00_only(1.0);
    if (n["c_ab"]) {
        const YAML::Node m = n["c_ab"];
        IndexMatrix c{};
        if (m.IsSequence()) {
            if (m.size() != 4) throw UsageError("config: system.c_ab must be a 4x4 list");
            for (std::size_t a = 0; a < 4; ++a) {
                if (!m[a].IsSequence() || m[a].size() != 4) throw UsageError("config: system.c_ab must be a 4x4 list");
                for (std::size_t b = 0; b < 4; ++b) c[a][b] = m[a][b].as<double>();
            }
        } else if (m.IsMap()) {
            // sparse form, e.g. {c00: 1, c12: 0.5}
            for (const auto& kv : m) {
                const auto key = kv.first.as<std::string>();
                if (key.size() != 3 || key[0] != 'c' || key[1] < '0' || key[1] > '3' || key[2] < '0' || key[2] > '3') {
                    throw UsageError("config: bad system.c_ab key '" + key + "'");
                }
                c[static_cast<std::size_t>(key[1] - '0')][static_cast<std::size_t>(key[2] - '0')] = kv.second.as<double>();
            }
        } else {
            throw UsageError("config: system.c_ab must be a list or a map");
        }
        ex.c_ab = c;
    }
    return ex;
}

ComponentProfile parse_component(const YAML::Node& n, const YAML::Node& defaults, const std::string& where) {
    auto pick = [&](const std::string& key) -> YAML::Node {
        if (n && n[key]) return n[key];
        if (defaults && defaults[key]) return defaults[key];
        return YAML::Node();
    };
    auto num = [&](const std::string& key, double fallback) {
        const YAML::Node v = pick(key);
        if (!v || v.IsNull()) return fallback;
        try {
            return v.as<double>();
        } catch (const YAML::Exception&) {
            throw UsageError("config: bad value for '" + where + key + "'");
        }
    };
    ComponentProfile p;
    const YAML::Node kind = pick("profile");
    if (!kind || kind.IsNull()) throw UsageError("config: missing '" + where + "profile'");
    p.kind = parse_profile_kind(kind.as<std::string>());
    p.degree = static_cast<int>(num("degree", 4));
    p.radius = num("R", 1.0);
    p.f_amplitude = num("f_amplitude", num("amplitude", 1.0));
    p.g_amplitude = num("g_amplitude", 0.0);
    p.shell_radius = num("r0", 0.0);
    p.shell_width = num("width", 0.0);
    const YAML::Node c = pick("center");
    if (c && !c.IsNull()) {
        if (!c.IsSequence() || c.size() != 3) throw UsageError("config: '" + where + "center' needs three entries");
        p.center = {c[0].as<double>(), c[1].as<double>(), c[2].as<double>()};
    }
    const YAML::Node gc = pick("g_center");
    if (gc && !gc.IsNull()) {
        if (!gc.IsSequence() || gc.size() != 3) throw UsageError("config: '" + where + "g_center' needs three entries");
        p.g_center = std::array<double, 3>{gc[0].as<double>(), gc[1].as<double>(), gc[2].as<double>()};
    }
    return p;
}

InitialData parse_data(const YAML::Node& n, int n_components) {
    InitialData d;
    d.epsilon = get<double>(n, "epsilon", "data.");
    d.user_table = get_or<std::string>(n, "user_table", "", "data.");
    d.user_radius = get_or<double>(n, "R", 0.0, "data.");
    if (n["components"]) {
        const YAML::Node list = n["components"];
        if (!list.IsSequence()) throw UsageError("config: data.components must be a list");
        for (std::size_t i = 0; i < list.size(); ++i) {
            d.components.push_back(parse_component(list[i], n, "data.components[" + std::to_string(i) + "]."));
        }
    } else {
        for (int i = 0; i < n_components; ++i) d.components.push_back(parse_component(YAML::Node(), n, "data."));
    }
    if (static_cast<int>(d.components.size()) != n_components) {
        throw UsageError("config: data has " + std::to_string(d.components.size()) + " components, system has " +
                         std::to_string(n_components));
    }
    return d;
}

std::optional<KernelIsa> parse_isa(const std::string& s) {
    if (s.empty() || s == "auto") return std::nullopt;
    if (s == "scalar") return KernelIsa::Scalar;
    if (s == "avx2") return KernelIsa::Avx2;
    if (s == "neon") return KernelIsa::Neon;
    throw UsageError("config: unknown solver.isa '" + s + "'");
}

}  // namespace

double RunConfig::support_radius() const {
    if (data.user_radius > 0.0) return std::max(data.user_radius, data.support_radius());
    return data.support_radius();
}

std::vector<double> RunConfig::sigma_grid() const {
    const double lo = profile_grid.sigma_min.value_or(-0.5 * t_end);
    const double hi = profile_grid.sigma_max.value_or(support_radius() + 2.0);
    const double step = profile_grid.sigma_step.value_or(grid.dx());
    if (!(step > 0.0) || !(hi > lo)) throw UsageError("config: empty profile_grid sigma range");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = lo + static_cast<double>(i) * step;
    return g;
}

RunConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw UsageError(std::string("config: YAML parse error: ") + e.what());
    }
    if (!root.IsMap()) throw UsageError("config: top level must be a mapping");
    RunConfig cfg;
    std::ostringstream canon;
    canonical(root, canon);
    cfg.canonical = canon.str();

    try {
        cfg.system = parse_system(root["system"]);
        const int N = cfg.system.tensor().n_components();

        if (const YAML::Node g = root["grid"]) {
            cfg.has_grid = true;
            cfg.grid.half_width = get<double>(g, "L", "grid.");
            cfg.grid.points_per_axis = get<int>(g, "n", "grid.");
            cfg.grid.cfl = get_or<double>(g, "cfl", 0.5, "grid.");
            cfg.grid.validate();
        }
        if (const YAML::Node d = root["data"]) {
            cfg.has_data = true;
            cfg.data = parse_data(d, N);
        }
        if (const YAML::Node p = root["probes"]) {
            if (!p.IsSequence()) throw UsageError("config: probes must be a list");
            for (std::size_t i = 0; i < p.size(); ++i) {
                const std::string where = "probes[" + std::to_string(i) + "].";
                Probe pr;
                pr.sigma = get<double>(p[i], "sigma", where);
                const auto w = get_vec3(p[i], "omega", {0.0, 0.0, 1.0}, where);
                pr.omega = SphereDirection::normalized(w[0], w[1], w[2]);
                cfg.probes.push_back(pr);
            }
        }
        if (const YAML::Node t = root["times"]) {
            cfg.t_end = get<double>(t, "t_end", "times.");
            cfg.cadence = get_or<double>(t, "cadence", 0.0, "times.");
            cfg.snapshot_times = get_list(t, "snapshot_times", "times.");
            cfg.checkpoint_times = get_list(t, "checkpoints", "times.");
            if (!(cfg.t_end > 0.0)) throw UsageError("config: times.t_end must be positive");
        }
        if (const YAML::Node pg = root["profile_grid"]) {
            if (pg["sigma_min"]) cfg.profile_grid.sigma_min = get<double>(pg, "sigma_min", "profile_grid.");
            if (pg["sigma_max"]) cfg.profile_grid.sigma_max = get<double>(pg, "sigma_max", "profile_grid.");
            if (pg["sigma_step"]) cfg.profile_grid.sigma_step = get<double>(pg, "sigma_step", "profile_grid.");
            cfg.profile_grid.n_theta = get_or<int>(pg, "n_theta", 6, "profile_grid.");
            if (cfg.profile_grid.n_theta < 1) throw UsageError("config: profile_grid.n_theta must be positive");
        }
        if (const YAML::Node s = root["solver"]) {
            cfg.solver.threads = get_or<int>(s, "threads", 1, "solver.");
            cfg.solver.isa = parse_isa(get_or<std::string>(s, "isa", "auto", "solver."));
            cfg.solver.blowup_factor = get_or<double>(s, "blowup_factor", 10.0, "solver.");
        }
        if (const YAML::Node a = root["analysis"]) {
            cfg.analysis.radiation_check = get_or<bool>(a, "radiation_check", false, "analysis.");
            cfg.analysis.translation_n = get_or<int>(a, "translation_n", 96, "analysis.");
        }
    } catch (const YAML::Exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_hash(const RunConfig& config) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(config.canonical.data(), config.canonical.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw NumericalError("config: SHA-256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

InitialData aligned_data(const ComponentProfile& phi_psi, double c1, double c2, double epsilon) {
    if (c1 == 0.0 || c2 == 0.0) throw UsageError("aligned_data: needs c1 c2 != 0");
    InitialData d;
    d.epsilon = epsilon;
    ComponentProfile a = phi_psi;
    const double s = 1.0 / std::sqrt(std::abs(c1 * c2));
    a.f_amplitude *= s;
    a.g_amplitude *= s;
    ComponentProfile b = phi_psi;
    b.f_amplitude *= -1.0 / c1;
    b.g_amplitude *= -1.0 / c1;
    d.components = {a, b};
    return d;
}

}  // namespace nullwave

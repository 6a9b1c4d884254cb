#include "nullwave/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nullwave/condition_h.hpp"
#include "nullwave/config.hpp"
#include "nullwave/csv.hpp"
#include "nullwave/errors.hpp"
#include "nullwave/profile_iter.hpp"
#include "nullwave/radiation.hpp"
#include "nullwave/reduced_ode.hpp"
#include "nullwave/snapshot_io.hpp"
#include "nullwave/wave_solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace nullwave {

namespace {

struct GlobalFlags {
    int threads = 0;  // 0: take the config value
    bool deterministic = false;
    std::string format = "csv";
};

std::vector<double> parse_list(const std::string& s, std::size_t expect, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(what + ": '" + item + "' is not a number");
        }
    }
    if (expect > 0 && out.size() != expect) {
        throw UsageError(what + ": expected " + std::to_string(expect) + " comma-separated values");
    }
    return out;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot create '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("missing '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception&) {
        throw UsageError("malformed '" + path.string() + "'");
    }
}

json module_versions() {
    json v;
    for (const char* m : {"nonlinearity", "condition_h", "reduced_ode", "profile_iter", "wave_solver", "radiation", "cli"}) {
        v[m] = kVersion;
    }
    return v;
}

// ---- check -------------------------------------------------------------------

int cmd_check(const std::string& config_path, const std::string& out_dir) {
    const RunConfig cfg = load_config(config_path);
    const CoefficientTensor tensor = cfg.system.tensor();
    const auto weight = known_weight(cfg.system);
    const ClassificationReport rep = classify(tensor, weight);
    json j;
    j["system"] = cfg.system.name();
    j["classification"] = to_string(rep.classification);
    j["weight"] = rep.weight_label.empty() ? json(nullptr) : json(rep.weight_label);
    j["null_condition"] = rep.null_report.holds;
    j["null_max_violation"] = rep.null_report.max_violation;
    if (rep.h_report) {
        j["condition_H"] = rep.h_report->holds;
        j["condition_H_max_violation"] = rep.h_report->max_violation;
        j["M0"] = rep.h_report->bounds.M0;
    }
    j["config_hash"] = config_hash(cfg);
    std::cout << j.dump() << '\n';
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_json(fs::path(out_dir) / "check_report.json", j);
    }
    return kExitOk;
}

// ---- reduce ------------------------------------------------------------------

int cmd_reduce(const std::string& config_path, const std::string& omega_s, const std::string& v0_s, double t0,
               double s_end, std::size_t steps, const std::string& out_dir, const GlobalFlags& g) {
    const RunConfig cfg = load_config(config_path);
    const CoefficientTensor tensor = cfg.system.tensor();
    const auto w = parse_list(omega_s, 3, "--omega");
    const auto dir = SphereDirection::normalized(w[0], w[1], w[2]);
    const auto v0 = parse_list(v0_s, static_cast<std::size_t>(tensor.n_components()), "--v0");
    if (!(t0 > 0.0) || !(s_end > 0.0) || steps == 0) throw UsageError("reduce: need t0 > 0, s-end > 0, steps > 0");
    const double t_end = t0 * std::exp(s_end);
    const ReducedTrajectory traj = integrate_reduced(tensor, dir, v0, t0, t_end, steps);
    const auto weight = known_weight(cfg.system);
    std::vector<double> q(traj.s.size(), std::numeric_limits<double>::quiet_NaN());
    if (weight) q = conserved_form(traj, *weight);

    const TableFormat fmt = parse_table_format(g.format);
    fs::create_directories(out_dir);
    std::vector<std::string> header{"s", "t"};
    for (int c = 0; c < tensor.n_components(); ++c) header.push_back("V" + std::to_string(c + 1));
    header.push_back("quad_form");
    TableWriter tw((fs::path(out_dir) / ("reduce" + table_extension(fmt))).string(), header, fmt);
    for (std::size_t i = 0; i < traj.s.size(); ++i) {
        std::vector<double> row{traj.s[i] - std::log(t0), traj.t[i]};
        row.insert(row.end(), traj.V[i].begin(), traj.V[i].end());
        row.push_back(q[i]);
        tw.row(row);
    }
    return kExitOk;
}

// ---- profile -----------------------------------------------------------------

struct ProfileArgs {
    std::string phi = "manufactured";
    double c0 = 0.0, e0 = 0.0, lambda = 0.5, t0 = 1.0;
    std::string z0 = "0,0";
    double c = 1.0, rho = 0.05, phase = 0.7;
    std::string w = "0.0477668,0.0147760";  // 0.05 e^{0.3i}
    double t_end = 1e6;
    std::size_t steps = 4000;
    std::size_t n_max = 60;
};

int cmd_profile(const ProfileArgs& a, const std::string& out_dir, const GlobalFlags& g) {
    ForcedODEProblem problem;
    std::optional<ManufacturedForced> mf;
    if (a.phi == "manufactured") {
        const auto w = parse_list(a.w, 2, "--w");
        mf = make_manufactured_forced(a.c, a.rho, a.phase, cplx(w[0], w[1]), a.lambda, a.t0);
        problem = mf->problem;
    } else {
        const auto colon = a.phi.find(':');
        const std::string kind = a.phi.substr(0, colon);
        const double k = colon == std::string::npos ? 1.0 : parse_list(a.phi.substr(colon + 1), 1, "--phi")[0];
        if (kind == "re") {
            problem.phi = [k](cplx z) { return 0.5 * k * z.real(); };
        } else if (kind == "const") {
            problem.phi = [k](cplx) { return k; };
        } else {
            throw UsageError("--phi: expected manufactured, re:<c> or const:<a>");
        }
        const auto z0 = parse_list(a.z0, 2, "--z0");
        problem.C0 = a.c0;
        problem.E0 = a.e0;
        problem.lambda = a.lambda;
        problem.t0 = a.t0;
        problem.z_t0 = cplx(z0[0], z0[1]);
    }
    const ZTable z = solve_forced(problem, a.t_end, a.steps);
    const ProfileIterationResult res = iterate_profile(problem, z, a.n_max);

    const TableFormat fmt = parse_table_format(g.format);
    fs::create_directories(out_dir);
    TableWriter tw((fs::path(out_dir) / ("profile" + table_extension(fmt))).string(),
                   {"s", "re_z", "im_z", "re_p", "im_p", "bound_rhs"}, fmt);
    for (std::size_t i = 0; i < z.size(); ++i) {
        tw.row({z.s[i], z.z[i].real(), z.z[i].imag(), res.p.z[i].real(), res.p.z[i].imag(), res.bound_rhs[i]});
    }
    json j;
    j["K"] = res.K;
    j["iterations"] = res.iterations;
    j["increments"] = res.increments;
    j["ratios"] = res.ratios;
    j["tail_bound"] = res.tail_bound;
    write_json(fs::path(out_dir) / "profile_report.json", j);
    std::cout << j.dump() << '\n';
    return kExitOk;
}

// ---- simulate ----------------------------------------------------------------

std::optional<double> weighted_c0(const ExampleSystem& s) {
    if (s.tag == ExampleTag::TypicalExample) return s.c0;
    return std::nullopt;
}

fs::path default_out_dir(const std::string& config_path, const RunConfig& cfg) {
    const char* root = std::getenv(kOutRootEnv);
    const fs::path base = root && *root ? fs::path(root) : fs::path("runs");
    return base / (fs::path(config_path).stem().string() + "-" + config_hash(cfg).substr(0, 12));
}

int cmd_simulate(const std::string& config_path, std::string out_dir, const GlobalFlags& g) {
    const auto wall0 = std::chrono::steady_clock::now();
    const RunConfig cfg = load_config(config_path);
    if (!cfg.has_grid || !cfg.has_data || !(cfg.t_end > 0.0)) {
        throw UsageError("simulate: config needs grid, data and times.t_end");
    }
    if (out_dir.empty()) out_dir = default_out_dir(config_path, cfg).string();
    const fs::path out(out_dir);
    fs::create_directories(out);
    const TableFormat fmt = parse_table_format(g.format);
    const std::string ext = table_extension(fmt);

    SolverOptions opts = cfg.solver;
    if (g.threads > 0) opts.threads = g.threads;
    const CoefficientTensor tensor = cfg.system.tensor();
    const int N = tensor.n_components();

    RunRequest req;
    req.t_end = cfg.t_end;
    req.probes = cfg.probes;
    req.cadence = cfg.cadence;
    req.snapshot_times = cfg.snapshot_times;
    req.checkpoint_times = cfg.checkpoint_times;
    const std::vector<double> sigma = cfg.sigma_grid();
    const SphereQuadrature quad = SphereQuadrature::product_gauss(cfg.profile_grid.n_theta);
    if (!req.checkpoint_times.empty()) req.profile_grid = profile_grid_for(sigma, quad);
    req.c0 = weighted_c0(cfg.system);
    req.support_radius = cfg.support_radius();

    RunResult res = run(tensor, cfg.data, cfg.grid, req, opts);
    for (auto& ray : res.rays) profile_residual(ray, tensor);

    std::vector<std::string> outputs;
    fs::copy_file(config_path, out / "config.yaml", fs::copy_options::overwrite_existing);
    outputs.push_back("config.yaml");

    {
        std::vector<std::string> header{"t"};
        for (int c = 0; c < N; ++c) header.push_back("E" + std::to_string(c + 1));
        header.push_back("E_tilde");
        TableWriter tw((out / ("energies" + ext)).string(), header, fmt);
        for (const auto& e : res.energies) {
            std::vector<double> row{e.t};
            row.insert(row.end(), e.E.begin(), e.E.end());
            row.push_back(e.E_tilde.value_or(std::numeric_limits<double>::quiet_NaN()));
            tw.row(row);
        }
        outputs.push_back("energies" + ext);
    }
    {
        TableWriter idx((out / ("rays" + ext)).string(), {"k", "sigma", "omega_x", "omega_y", "omega_z"}, fmt);
        for (std::size_t k = 0; k < res.rays.size(); ++k) {
            const auto& ray = res.rays[k];
            idx.row({static_cast<double>(k), ray.sigma, ray.omega[0], ray.omega[1], ray.omega[2]});
            std::vector<std::string> header{"t"};
            for (int c = 0; c < N; ++c) header.push_back("V" + std::to_string(c + 1));
            header.push_back("residual");
            header.push_back("residual_scaled");
            const std::string name = "ray_" + std::to_string(k) + ext;
            TableWriter tw((out / name).string(), header, fmt);
            for (std::size_t i = 0; i < ray.t.size(); ++i) {
                std::vector<double> row{ray.t[i]};
                row.insert(row.end(), ray.V[i].begin(), ray.V[i].end());
                row.push_back(ray.residual[i]);
                row.push_back(ray.residual[i] * std::pow(ray.t[i], 2.0 - 2.0 * kDiagnosticMu));
                tw.row(row);
            }
            outputs.push_back(name);
        }
        outputs.push_back("rays" + ext);
    }
    if (!res.checkpoints.empty()) {
        TableWriter pg((out / ("profile_grid" + ext)).string(), {"omega_index", "omega_x", "omega_y", "omega_z", "weight"}, fmt);
        for (std::size_t w = 0; w < quad.size(); ++w) {
            pg.row({static_cast<double>(w), quad.nodes[w][0], quad.nodes[w][1], quad.nodes[w][2], quad.weights[w]});
        }
        outputs.push_back("profile_grid" + ext);
        TableWriter ck((out / ("checkpoints" + ext)).string(), {"k", "t"}, fmt);
        for (std::size_t k = 0; k < res.checkpoints.size(); ++k) {
            const auto& cp = res.checkpoints[k];
            ck.row({static_cast<double>(k), cp.t});
            std::vector<std::string> header{"sigma", "omega_index"};
            for (int c = 0; c < N; ++c) header.push_back("V" + std::to_string(c + 1));
            const std::string name = "profile_" + std::to_string(k) + ext;
            TableWriter tw((out / name).string(), header, fmt);
            const std::size_t ns = sigma.size();
            for (std::size_t w = 0; w < quad.size(); ++w) {
                for (std::size_t s = 0; s < ns; ++s) {
                    std::vector<double> row{sigma[s], static_cast<double>(w)};
                    for (int c = 0; c < N; ++c) row.push_back(cp.values[static_cast<std::size_t>(c)][w * ns + s]);
                    tw.row(row);
                }
            }
            outputs.push_back(name);
        }
        outputs.push_back("checkpoints" + ext);
    }
    json snaps = json::array();
    for (const auto& snap : res.snapshots) {
        const std::string name = snapshot_file_name(snap.t);
        write_snapshot((out / name).string(), snap);
        outputs.push_back(name);
        snaps.push_back({{"t", snap.t}, {"file", name}});
    }

    json m;
    m["tool"] = "nullwave";
    m["command"] = "simulate";
    m["version"] = kVersion;
    m["module_versions"] = module_versions();
    m["config_file"] = "config.yaml";
    m["config_hash"] = config_hash(cfg);
    m["system"] = cfg.system.name();
    m["deterministic"] = g.deterministic;
    m["seed"] = nullptr;  // no random numbers are drawn
    m["threads"] = opts.threads;
    m["isa"] = to_string(res.isa);
    m["format"] = g.format;
    m["status"] = res.blew_up ? "blowup" : "ok";
    m["t_end"] = cfg.t_end;
    m["t_reached"] = res.t_reached;
    m["dt"] = res.dt;
    m["steps"] = res.steps;
    m["initial_max_ut"] = res.initial_max_ut;
    m["max_outside_ratio_2dx"] = res.max_outside_ratio;
    m["max_outside_ratio_16dx"] = res.max_outside_ratio_far;
    if (res.blew_up) m["blowup"] = {{"t", res.blowup_t}, {"max_ut", res.blowup_max_ut}};
    m["snapshots"] = snaps;
    m["report_header"] = "desk-scale run: asymptotics are logarithmic in time; trends and scaling are checked, not limits";
    if (!g.deterministic) {
        m["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    }
    outputs.push_back("manifest.json");
    m["outputs"] = outputs;
    write_json(out / "manifest.json", m);

    if (res.blew_up) {
        std::cerr << "blow-up: t = " << res.blowup_t << ", max|u_t| = " << res.blowup_max_ut << " (initial "
                  << res.initial_max_ut << ")\n";
        return kExitBlowUp;
    }
    std::cout << "simulate: " << res.steps << " steps to t = " << res.t_reached << ", outputs in " << out.string() << '\n';
    return kExitOk;
}

// ---- analyze -----------------------------------------------------------------

int cmd_analyze(const std::string& run_dir, const GlobalFlags& g) {
    const fs::path dir(run_dir);
    const json m = read_json(dir / "manifest.json");
    if (!m.contains("outputs")) throw UsageError("analyze: manifest lists no outputs");
    for (const auto& f : m["outputs"]) {
        if (!fs::exists(dir / f.get<std::string>())) {
            throw UsageError("analyze: run directory is missing '" + f.get<std::string>() + "'");
        }
    }
    const RunConfig cfg = load_config((dir / "config.yaml").string());
    if (m.value("config_hash", std::string()) != config_hash(cfg)) {
        throw UsageError("analyze: config.yaml does not match the manifest hash");
    }
    const std::string ext = table_extension(parse_table_format(m.value("format", std::string("csv"))));
    const TableFormat out_fmt = parse_table_format(g.format);
    const CoefficientTensor tensor = cfg.system.tensor();
    const int N = tensor.n_components();
    std::vector<std::string> written;

    // AsympProfile ratio
    const Table energies = read_table((dir / ("energies" + ext)).string());
    if (energies.rows.empty()) throw UsageError("analyze: energies table is empty");
    const auto c0 = weighted_c0(cfg.system);
    if (N == 2 && c0) {
        InitialData unit = cfg.data;
        unit.epsilon = 1.0;
        const SampledData d = sample(unit, cfg.grid);
        const double h1 = data_norm_sq(d.u[0], d.ut[0], cfg.grid.dx());
        const double h2 = data_norm_sq(d.u[1], d.ut[1], cfg.grid.dx());
        const double denom = cfg.data.epsilon * std::sqrt(h1 / *c0 + h2);
        const double E2 = energies.rows.back()[energies.column("E2")];
        json a;
        a["t"] = energies.rows.back()[0];
        a["epsilon"] = cfg.data.epsilon;
        a["E2"] = E2;
        a["denominator"] = denom;
        a["ratio"] = E2 / denom;
        write_json(dir / "asymp_ratio.json", a);
        written.push_back("asymp_ratio.json");
        std::cout << "asymp_ratio " << format_number(E2 / denom) << '\n';
    }

    // late-time profiles
    const bool have_checkpoints = fs::exists(dir / ("checkpoints" + ext));
    if (have_checkpoints) {
        const Table ck = read_table((dir / ("checkpoints" + ext)).string());
        const Table pg = read_table((dir / ("profile_grid" + ext)).string());
        const SphereQuadrature quad = SphereQuadrature::product_gauss(cfg.profile_grid.n_theta);
        if (pg.rows.size() != quad.size()) throw UsageError("analyze: profile grid does not match the config");
        const std::vector<double> sigma = cfg.sigma_grid();
        std::vector<ProfileGridSample> samples;
        for (std::size_t k = 0; k < ck.rows.size(); ++k) {
            const Table p = read_table((dir / ("profile_" + std::to_string(k) + ext)).string());
            if (p.rows.size() != sigma.size() * quad.size()) throw UsageError("analyze: profile table has the wrong size");
            ProfileGridSample s;
            s.t = ck.rows[k][1];
            s.values.assign(static_cast<std::size_t>(N), std::vector<double>(p.rows.size()));
            for (int c = 0; c < N; ++c) {
                const std::size_t col = p.column("V" + std::to_string(c + 1));
                for (std::size_t i = 0; i < p.rows.size(); ++i) s.values[static_cast<std::size_t>(c)][i] = p.rows[i][col];
            }
            samples.push_back(std::move(s));
        }
        const ProfileGridSample& last = samples.back();
        for (int c = 0; c < N; ++c) {
            const TranslationData td = profile_as_translation(last, c, sigma, quad);
            const std::string name = "translation_" + std::to_string(c + 1) + table_extension(out_fmt);
            TableWriter tw((dir / name).string(), {"sigma", "omega_index", "value"}, out_fmt);
            for (std::size_t w = 0; w < quad.size(); ++w) {
                for (std::size_t s = 0; s < sigma.size(); ++s) tw.row({sigma[s], static_cast<double>(w), td.at(w, s)});
            }
            written.push_back(name);
        }

        json rel;
        rel["t"] = last.t;
        rel["sigma_min"] = sigma.front();
        rel["sigma_max"] = sigma.back();
        rel["n_sigma"] = sigma.size();
        rel["n_theta"] = quad.n_theta;
        rel["n_omega"] = quad.size();
        const auto weight = N == 2 ? known_weight(cfg.system) : std::nullopt;
        if (N != 2 || !weight) {
            rel["applicable"] = false;
            rel["reason"] = N != 2 ? "relation is defined for two components" : "no known weight for this system";
        } else {
            const RelationCoefficients c12 = relation_coefficients(tensor, *weight);
            const std::string source = "diagonalize_2x2 with weight " + weight->label();
            json by_t = json::array();
            RelationReport final_rep;
            for (const auto& s : samples) {
                const TranslationData v1 = profile_as_translation(s, 0, sigma, quad);
                const TranslationData v2 = profile_as_translation(s, 1, sigma, quad);
                const RelationReport r = scattering_relation_check(v1, v2, c12, source);
                by_t.push_back({{"t", s.t},
                                {"residual", r.applicable ? json(r.residual) : json(nullptr)},
                                {"V1_over_V2", v1.l2_norm() / v2.l2_norm()}});
                final_rep = r;
            }
            rel["applicable"] = final_rep.applicable;
            if (!final_rep.applicable) rel["reason"] = "c1 = c2 = 0 at every node (null-form branch)";
            rel["residual"] = final_rep.applicable ? json(final_rep.residual) : json(nullptr);
            rel["c1c2_source"] = final_rep.c1c2_source;
            rel["ill_conditioned_nodes"] = final_rep.ill_conditioned_nodes;
            rel["weighting"] = "nodes weighted by |c1| + |c2| in both norms";
            rel["checkpoints"] = by_t;
        }
        write_json(dir / "relation_report.json", rel);
        written.push_back("relation_report.json");

        if (cfg.analysis.radiation_check) {
            // translation representation of the data on a grid fitted to its support
            const double R = cfg.support_radius();
            const int nt = cfg.analysis.translation_n;
            const GridSpec gt{R + 0.5, nt, 0.5};
            json rad = json::array();
            for (int c = 0; c < N; ++c) {
                PaddedField f0(nt);
                PaddedField f1(nt);
                const auto& p = cfg.data.components[static_cast<std::size_t>(c)];
                for (int k = 1; k <= nt; ++k)
                    for (int j = 1; j <= nt; ++j)
                        for (int i = 1; i <= nt; ++i) {
                            const std::array<double, 3> x{gt.coord(i - 1), gt.coord(j - 1), gt.coord(k - 1)};
                            f0.at(i, j, k) = cfg.data.epsilon * p.f(x);
                            f1.at(i, j, k) = cfg.data.epsilon * p.g(x);
                        }
                RadonOptions ro;
                ro.support_radius = R;
                ro.threads = cfg.solver.threads;
                const TranslationData T = translation_representation(f0, f1, gt, sigma, quad, ro);
                const TranslationData V = profile_as_translation(last, c, sigma, quad);
                const RadiationDiscrepancy d = radiation_field_check(V, T);
                rad.push_back({{"component", c + 1},
                               {"t", last.t},
                               {"discrepancy", d.discrepancy},
                               {"profile_l2", d.profile_l2},
                               {"translation_l2", d.translation_l2}});
                const std::string name = "translation_data_" + std::to_string(c + 1) + table_extension(out_fmt);
                TableWriter tw((dir / name).string(), {"sigma", "omega_index", "value"}, out_fmt);
                for (std::size_t w = 0; w < quad.size(); ++w) {
                    for (std::size_t s = 0; s < sigma.size(); ++s) tw.row({sigma[s], static_cast<double>(w), T.at(w, s)});
                }
                written.push_back(name);
            }
            write_json(dir / "radiation_report.json", rad);
            written.push_back("radiation_report.json");
        }
    }

    // free-evolution comparison between the first and last snapshots
    if (m.contains("snapshots") && m["snapshots"].size() >= 2) {
        const auto s1 = read_snapshot((dir / m["snapshots"].front()["file"].get<std::string>()).string());
        const auto s2 = read_snapshot((dir / m["snapshots"].back()["file"].get<std::string>()).string());
        SolverOptions so = cfg.solver;
        if (g.threads > 0) so.threads = g.threads;
        const ScatteringComparison sc = scattering_snapshot(s1, s2, cfg.grid.cfl, so);
        json j;
        j["T1"] = sc.T1;
        j["T2"] = sc.T2;
        j["difference"] = sc.difference;
        j["energy"] = sc.energy;
        write_json(dir / "scattering_report.json", j);
        written.push_back("scattering_report.json");
    }

    json am;
    am["command"] = "analyze";
    am["version"] = kVersion;
    am["config_hash"] = config_hash(cfg);
    am["outputs"] = written;
    write_json(dir / "analysis_manifest.json", am);
    std::cout << "analyze: wrote " << written.size() << " reports to " << dir.string() << '\n';
    return kExitOk;
}

int guarded(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << " at t = " << e.time() << '\n';
        return kExitBlowUp;
    } catch (const DivergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << " (last finite t = " << e.last_valid_t() << ")\n";
        return kExitNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"nullwave: null-condition and condition (H) wave systems"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--threads", g.threads, "cap on solver threads")->check(CLI::NonNegativeNumber);
    app.add_flag("--deterministic", g.deterministic, "reproducible outputs (manifest omits wall-clock)");
    app.add_option("--format", g.format, "table format: csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    app.set_version_flag("--version", kVersion);

    std::string config;
    std::string out;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", g.threads)->check(CLI::NonNegativeNumber);
        sub->add_flag("--deterministic", g.deterministic);
        sub->add_option("--format", g.format)->check(CLI::IsMember({"csv", "jsonl"}));
    };

    CLI::App* check = app.add_subcommand("check", "classify the configured system");
    check->add_option("--config", config, "run config (YAML)")->required();
    check->add_option("--out", out, "directory for check_report.json");
    add_common(check);

    std::string omega = "0,0,1", v0;
    double t0 = 1.0, s_end = 10.0;
    std::size_t steps = 1000;
    CLI::App* reduce = app.add_subcommand("reduce", "integrate the reduced system along one ray");
    reduce->add_option("--system,--config", config, "config with a system section")->required();
    reduce->add_option("--omega", omega, "direction a,b,c");
    reduce->add_option("--v0", v0, "initial V, comma-separated")->required();
    reduce->add_option("--t0", t0);
    reduce->add_option("--s-end", s_end, "length in s = log(t / t0)");
    reduce->add_option("--steps", steps);
    reduce->add_option("--out", out)->required();
    add_common(reduce);

    ProfileArgs pa;
    CLI::App* profile = app.add_subcommand("profile", "profile iteration for the forced profile equation");
    profile->add_option("--phi", pa.phi, "manufactured | re:<c> | const:<a>");
    profile->add_option("--c0", pa.c0, "Lipschitz constant of Phi");
    profile->add_option("--e0", pa.e0);
    profile->add_option("--lambda", pa.lambda);
    profile->add_option("--t0", pa.t0);
    profile->add_option("--z0", pa.z0, "re,im");
    profile->add_option("--c", pa.c, "manufactured: c");
    profile->add_option("--rho", pa.rho, "manufactured: rho");
    profile->add_option("--phase", pa.phase, "manufactured: phase");
    profile->add_option("--w", pa.w, "manufactured: w = re,im");
    profile->add_option("--t-end", pa.t_end);
    profile->add_option("--steps", pa.steps);
    profile->add_option("--n-max", pa.n_max);
    profile->add_option("--out", out)->required();
    add_common(profile);

    CLI::App* simulate = app.add_subcommand("simulate", "run the wave solver");
    simulate->add_option("--config", config, "run config (YAML)")->required();
    simulate->add_option("--out", out, "output directory");
    add_common(simulate);

    std::string run_dir;
    CLI::App* analyze = app.add_subcommand("analyze", "derived reports for a run directory");
    analyze->add_option("run_dir,--run-dir", run_dir, "output directory of simulate")->required();
    add_common(analyze);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*check) return guarded([&] { return cmd_check(config, out); });
    if (*reduce) return guarded([&] { return cmd_reduce(config, omega, v0, t0, s_end, steps, out, g); });
    if (*profile) return guarded([&] { return cmd_profile(pa, out, g); });
    if (*simulate) return guarded([&] { return cmd_simulate(config, out, g); });
    if (*analyze) return guarded([&] { return cmd_analyze(run_dir, g); });
    return kExitUsage;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> copy = args;
    std::vector<char*> argv;
    for (auto& a : copy) argv.push_back(a.data());
    argv.push_back(nullptr);
    return run_cli(static_cast<int>(copy.size()), argv.data());
}

}  // namespace nullwave

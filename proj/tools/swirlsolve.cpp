// swirlsolve: command-line front end.
//
// Exit codes: 0 success, 1 domain/solver/io failure, 2 usage error,
// 3 jump-scan found an admissible or inconclusive discontinuity.

#include "swirl/swirl.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#ifndef SWIRL_VERSION
#define SWIRL_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace swirl;

namespace {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
    const char* env = std::getenv("SWIRLSOLVE_LOG");
    const std::string s = env ? env : "warn";
    if (s == "error") return Level::Error;
    if (s == "info") return Level::Info;
    if (s == "debug") return Level::Debug;
    return Level::Warn;
}

void log(Level l, const std::string& msg) {
    static const Level current = log_level();
    if (l > current) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::cerr << "swirlsolve [" << names[static_cast<int>(l)] << "] " << msg << "\n";
}

constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;
constexpr int kTheoremFinding = 3;

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// One manifest per run. Everything that varies between identical runs sits
/// on the single "timestamp" line.
struct Manifest {
    std::string subcommand;
    json params = json::object();
    json config = json::object();
    json outputs = json::array();
    json result = json::object();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    std::string render(const std::string& status) const {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json body{{"subcommand", subcommand}, {"version", SWIRL_VERSION}, {"status", status},
                  {"params", params},         {"config", config},         {"outputs", outputs},
                  {"result", result}};
        std::string text = body.dump(1);
        char line[128];
        std::snprintf(line, sizeof line, "\n \"timestamp\": {\"utc\": \"%s\", \"wall_seconds\": %.3f},",
                      utc_now().c_str(), wall);
        text.insert(1, line);
        return text + "\n";
    }
};

fs::path manifest_path(const std::optional<std::string>& flag, const std::string& out, const std::string& sub) {
    if (flag) return *flag;
    if (!out.empty()) return out + ".manifest.json";
    return "swirlsolve_" + sub + ".manifest.json";
}

json config_json(const SolverConfig& c) {
    return json{{"x_max", c.x_max},         {"n_grid", c.n_grid},          {"picard_tol", c.picard_tol},
                {"max_iters", c.max_iters}, {"damping", c.damping},        {"ode_tol", c.ode_tol},
                {"blowup_bound", c.blowup_bound}, {"v_origin", c.v_origin}};
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
    cmd->add_option("--x-max", cfg.x_max, "truncation point in the compact coordinate x")->capture_default_str();
    cmd->add_option("--n", cfg.n_grid, "number of grid nodes")->capture_default_str();
    cmd->add_option("--tol", cfg.picard_tol, "fixed-point tolerance on theta")->capture_default_str();
    cmd->add_option("--max-iters", cfg.max_iters, "fixed-point sweep cap")->capture_default_str();
    cmd->add_option("--damping", cfg.damping, "under-relaxation factor in (0, 1]")->capture_default_str();
    cmd->add_option("--ode-tol", cfg.ode_tol, "local error tolerance of the theta integrator")->capture_default_str();
    cmd->add_option("--v0-bc", cfg.v_origin, "swirl value V(0) at the axis (0 = no slip)")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-similar swirling flow solver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SWIRL_VERSION);
    std::optional<std::string> manifest_flag;
    app.add_option("--manifest", manifest_flag, "manifest path (default: <out>.manifest.json)");

    // euler
    auto* euler = app.add_subcommand("euler", "closed-form inviscid profile (half-space or cone)");
    double e_v0 = 0.0, e_e0 = 0.0, e_xi0 = 0.0, e_xi_max = 100.0;
    std::optional<double> e_xi_min;
    std::string e_branch;
    std::size_t e_n = 2000;
    std::string e_out = "euler_profile.json";
    euler->add_option("--v0", e_v0, "swirl V0")->required();
    euler->add_option("--e0", e_e0, "pressure parameter E0")->required();
    euler->add_option("--branch", e_branch, "sign of theta")->required()->check(CLI::IsMember({"pos", "neg"}));
    euler->add_option("--xi0", e_xi0, "cone parameter (0 = half-space)")->capture_default_str();
    euler->add_option("--xi-min", e_xi_min, "first grid point (default xi0 + 1e-4)");
    euler->add_option("--xi-max", e_xi_max, "last grid point")->capture_default_str();
    euler->add_option("--n", e_n, "grid size")->capture_default_str();
    euler->add_option("--out", e_out, "profile JSON")->capture_default_str();

    // viscous
    auto* visc = app.add_subcommand("viscous", "viscous profile by damped fixed-point iteration");
    FlowParameters v_params;
    SolverConfig v_cfg;
    std::string v_out = "viscous_profile.json";
    visc->add_option("--nu", v_params.nu, "viscosity")->required();
    visc->add_option("--vinf", v_params.v_swirl, "far-field swirl V_inf")->required();
    visc->add_option("--e0", v_params.e0, "pressure parameter E0")->required();
    add_solver_flags(visc, v_cfg);
    visc->add_option("--out", v_out, "profile JSON")->capture_default_str();

    // jump-scan
    auto* scan = app.add_subcommand("jump-scan", "scan candidate discontinuity locations");
    std::string s_domain = "half";
    double s_xi0 = 0.0, s_min = 0.01, s_max = 50.0;
    std::size_t s_n = 1000;
    std::string s_out = "jump_scan.json";
    scan->add_option("--domain", s_domain, "half or cone")->check(CLI::IsMember({"half", "cone"}))->capture_default_str();
    scan->add_option("--xi0", s_xi0, "cone parameter")->capture_default_str();
    scan->add_option("--sigma-min", s_min)->capture_default_str();
    scan->add_option("--sigma-max", s_max)->capture_default_str();
    scan->add_option("--n", s_n, "number of sigma values")->capture_default_str();
    scan->add_option("--out", s_out, "certification JSON")->capture_default_str();

    // field
    auto* field = app.add_subcommand("field", "physical field on an (r, z) window");
    std::string f_in, f_out = "field.csv", f_format = "csv";
    double f_r0 = 0.1, f_r1 = 2.0, f_z0 = 0.0, f_z1 = 2.0;
    std::size_t f_nr = 20, f_nz = 20;
    field->add_option("--in", f_in, "profile JSON")->required();
    field->add_option("--r0", f_r0)->capture_default_str();
    field->add_option("--r1", f_r1)->capture_default_str();
    field->add_option("--z0", f_z0)->capture_default_str();
    field->add_option("--z1", f_z1)->capture_default_str();
    field->add_option("--nr", f_nr)->capture_default_str();
    field->add_option("--nz", f_nz)->capture_default_str();
    field->add_option("--format", f_format)->check(CLI::IsMember({"csv", "vtk"}))->capture_default_str();
    field->add_option("--out", f_out)->capture_default_str();

    // classify
    auto* classify = app.add_subcommand("classify", "regime label of a profile");
    std::string c_in;
    classify->add_option("--in", c_in, "profile JSON")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "solve a parameter grid and tabulate regimes");
    std::vector<double> w_nu, w_vinf, w_e0;
    SolverConfig w_cfg;
    unsigned w_jobs = 1;
    std::string w_out = "sweep.csv";
    sweep->add_option("--nu-list", w_nu)->required()->delimiter(',');
    sweep->add_option("--vinf-list", w_vinf)->required()->delimiter(',');
    sweep->add_option("--e0-list", w_e0)->required()->delimiter(',');
    sweep->add_option("--jobs", w_jobs, "concurrent solves")->capture_default_str()->check(CLI::PositiveNumber);
    add_solver_flags(sweep, w_cfg);
    sweep->add_option("--out", w_out, "sweep CSV")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    Manifest m;
    std::string out_path;
    int exit_code = 0;
    auto fail = [&](const std::string& msg) {
        log(Level::Error, msg);
        m.result["error"] = msg;
        exit_code = kDomainFailure;
    };
    try {
        if (*euler) {
            m.subcommand = "euler";
            out_path = e_out;
            FlowParameters p;
            p.v_swirl = e_v0;
            p.e0 = e_e0;
            p.xi0 = e_xi0;
            p.branch = e_branch == "pos" ? 1 : -1;
            m.params = to_json(p);
            const double lo = e_xi_min.value_or(e_xi0 + 1e-4);
            m.config = json{{"xi_min", lo}, {"xi_max", e_xi_max}, {"n", e_n}};
            const EulerSolution sol(p);
            const auto grid = asinh_grid(lo, e_xi_max, e_n);
            const auto prof = e_xi0 == 0.0 ? euler_continuous(p, grid) : euler_conical(p, grid);
            write_file_atomic(e_out, dump_profile(to_json(prof)));
            m.outputs.push_back(e_out);
            m.result = json{{"k0", sol.k0()}};
            std::printf("k0 %.17g\n", sol.k0());
            if (e_xi_max >= 1.0 && e_xi0 <= 1.0) std::printf("theta_sq_at_1 %.17g\n", sol.theta_sq(1.0));
        } else if (*visc) {
            m.subcommand = "viscous";
            out_path = v_out;
            m.params = to_json(v_params);
            m.config = config_json(v_cfg);
            log(Level::Info, "solving nu=" + std::to_string(v_params.nu));
            try {
                const auto res = picard_solve(v_params, v_cfg);
                auto doc = to_json(res.profile);
                doc["convergence"] = to_json(res.convergence);
                write_file_atomic(v_out, dump_profile(doc));
                m.outputs.push_back(v_out);
                m.result = doc["convergence"];
                std::printf("converged iterations %d residual_2_5a %.3e residual_2_5b %.3e\n",
                            res.convergence.iterations, res.convergence.residual_a, res.convergence.residual_b);
            } catch (const BlowUpError& e) {
                m.result = json{{"failure", "blow-up"}, {"blowup", {{"x_escape", e.x_escape()}}}};
                throw;
            } catch (const MaxItersError& e) {
                m.result = json{{"failure", "max-iters"}, {"history", e.history()}};
                throw;
            } catch (const StiffnessError& e) {
                m.result = json{{"failure", "stiff"}, {"x_stop", e.x_stop()}};
                throw;
            }
        } else if (*scan) {
            m.subcommand = "jump-scan";
            out_path = s_out;
            const Domain dom = s_domain == "half" ? Domain::half_space() : Domain::cone(s_xi0);
            m.params = json{{"domain", s_domain}, {"xi0", s_xi0}};
            m.config = json{{"sigma_min", s_min}, {"sigma_max", s_max}, {"n", s_n}};
            const auto rep = certify_nonexistence(dom, sigma_grid(dom, s_min, s_max, s_n));
            const auto doc = to_json(rep);
            write_file_atomic(s_out, doc.dump(1) + "\n");
            m.outputs.push_back(s_out);
            m.result = doc["summary"];
            std::printf("%zu admissible discontinuities / %zu tested\n", rep.n_admissible, rep.n_tested);
            std::printf("inconclusive %zu\n", rep.n_inconclusive);
            std::printf("ratio_negative_k_minus_positive %zu\n", rep.count_type("ratio_negative_k_minus_positive"));
            std::printf("ratio_positive_k_minus_negative %zu\n", rep.count_type("ratio_positive_k_minus_negative"));
            if (rep.n_admissible > 0 || rep.n_inconclusive > 0) {
                log(Level::Error, "scan found admissible or inconclusive locations; inspect " + s_out);
                exit_code = kTheoremFinding;
            }
        } else if (*field) {
            m.subcommand = "field";
            out_path = f_out;
            m.params = json{{"in", f_in}};
            m.config = json{{"r0", f_r0}, {"r1", f_r1}, {"z0", f_z0}, {"z1", f_z1},
                            {"nr", f_nr}, {"nz", f_nz}, {"format", f_format}};
            const auto prof = load_profile(f_in);
            const auto f = reconstruct(prof, cell_centres(f_r0, f_r1, f_nr), cell_centres(f_z0, f_z1, f_nz));
            if (f_format == "csv") {
                export_csv(f, f_out);
            } else {
                export_vtk(f, f_out);
            }
            m.outputs.push_back(f_out);
            std::printf("points %zu\n", f.u.size());
        } else if (*classify) {
            m.subcommand = "classify";
            m.params = json{{"in", c_in}};
            const auto prof = load_profile(c_in);
            const auto s = regime_signs(prof);
            m.result = json{{"regime", to_string(s.regime)},
                            {"mean_u_inner", s.mean_u_inner},
                            {"mean_w_outer", s.mean_w_outer}};
            std::printf("%s\n", to_string(s.regime));
        } else if (*sweep) {
            m.subcommand = "sweep";
            out_path = w_out;
            m.params = json{{"nu", w_nu}, {"v_inf", w_vinf}, {"e0", w_e0}};
            m.config = config_json(w_cfg);
            m.config["jobs"] = w_jobs;
            w_cfg.validate();
            const auto table = parameter_sweep(w_nu, w_vinf, w_e0, w_cfg, w_jobs);
            write_file_atomic(w_out, sweep_csv(table));
            m.outputs.push_back(w_out);
            std::size_t ok = 0;
            json labels = json::object();
            for (const auto& r : table) {
                if (r.converged) {
                    ++ok;
                    labels[to_string(r.regime)] = labels.value(to_string(r.regime), 0) + 1;
                } else {
                    log(Level::Warn, r.failure);
                }
            }
            m.result = json{{"points", table.size()}, {"converged", ok}, {"regimes", labels}};
            std::printf("converged %zu / %zu\n", ok, table.size());
            for (const auto& [k, v] : labels.items()) std::printf("%s %d\n", k.c_str(), v.get<int>());
        }
    } catch (const BlowUpError& e) {
        fail(std::string("blow-up: ") + e.what());
    } catch (const MaxItersError& e) {
        fail(std::string("max-iters: ") + e.what());
    } catch (const StiffnessError& e) {
        fail(std::string("stiff: ") + e.what());
    } catch (const std::exception& e) {
        fail(e.what());
    }

    try {
        const std::string status = exit_code == 0 ? "ok" : (exit_code == kTheoremFinding ? "finding" : "failed");
        write_file_atomic(manifest_path(manifest_flag, out_path, m.subcommand), m.render(status));
    } catch (const std::exception& e) {
        log(Level::Error, std::string("manifest: ") + e.what());
        if (exit_code == 0) exit_code = kDomainFailure;
    }
    return exit_code;
}

#include "grpdal/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "grpdal/error.hpp"
#include "grpdal/pgm.hpp"
#include "grpdal/problems.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace grpdal {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InvalidArgument("config: key '" + key + "' has a bad numeric value '" + v + "'");
    }
}

long to_long(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const long d = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InvalidArgument("config: key '" + key + "' has a bad integer value '" + v + "'");
    }
}

const std::vector<std::string> kKnownSolvers = {"pda",           "pdal",
                                                "grpdal",        "ip-grpdal",
                                                "agrpdal-partial", "agrpdal-full"};

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("config: cannot open '" + path + "'");
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw InvalidArgument("config: line " + std::to_string(lineno) +
                                  " has an empty key or value");
        cfg.raw[key] = val;
    }

    auto get = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = cfg.raw.find(key);
        if (it == cfg.raw.end()) return std::nullopt;
        return it->second;
    };

    if (auto v = get("experiment")) {
        if (*v == "lasso")
            cfg.kind = ExperimentKind::lasso;
        else if (*v == "tv-deblur")
            cfg.kind = ExperimentKind::tv_deblur;
        else if (*v == "synthetic-strongly-convex")
            cfg.kind = ExperimentKind::synthetic_strongly_convex;
        else
            throw InvalidArgument("config: unknown experiment '" + *v + "'");
    }
    if (auto v = get("seed")) cfg.seeds = {static_cast<std::uint64_t>(to_long(*v, "seed"))};
    if (auto v = get("seeds")) {
        cfg.seeds.clear();
        for (const auto& tok : split_list(*v))
            cfg.seeds.push_back(static_cast<std::uint64_t>(to_long(tok, "seeds")));
        if (cfg.seeds.empty()) throw InvalidArgument("config: empty seeds list");
    }
    if (auto v = get("out")) cfg.out_dir = *v;
    if (auto v = get("solvers")) cfg.solvers = split_list(*v);
    if (cfg.solvers.empty()) throw InvalidArgument("config: at least one solver is required");
    for (const auto& s : cfg.solvers) {
        bool known = false;
        for (const auto& k : kKnownSolvers) known = known || k == s;
        if (!known) throw InvalidArgument("config: unknown solver '" + s + "'");
    }

    if (auto v = get("n")) cfg.n = static_cast<std::size_t>(to_long(*v, "n"));
    if (auto v = get("p")) cfg.p = static_cast<std::size_t>(to_long(*v, "p"));
    if (auto v = get("s")) cfg.s = static_cast<std::size_t>(to_long(*v, "s"));
    if (auto v = get("zeta")) cfg.zeta = to_double(*v, "zeta");
    if (auto v = get("height")) cfg.height = static_cast<std::size_t>(to_long(*v, "height"));
    if (auto v = get("width")) cfg.width = static_cast<std::size_t>(to_long(*v, "width"));
    if (auto v = get("nu")) cfg.nu = to_double(*v, "nu");
    if (auto v = get("density")) cfg.density = to_double(*v, "density");
    if (auto v = get("window")) cfg.window = static_cast<int>(to_long(*v, "window"));
    if (auto v = get("kappa-split")) cfg.kappa_split = to_double(*v, "kappa-split");
    if (auto v = get("dim")) cfg.dim = static_cast<std::size_t>(to_long(*v, "dim"));
    if (auto v = get("coupling")) cfg.coupling = to_double(*v, "coupling");
    if (auto v = get("rho")) cfg.rho_target = to_double(*v, "rho");
    if (auto v = get("max-iters")) cfg.max_iters = static_cast<int>(to_long(*v, "max-iters"));
    if (auto v = get("reference")) {
        if (*v == "load")
            cfg.reference_load_only = true;
        else if (*v != "compute")
            throw InvalidArgument("config: reference must be 'compute' or 'load'");
    }
    if (auto v = get("reference-budget"))
        cfg.reference_budget = static_cast<int>(to_long(*v, "reference-budget"));
    if (auto v = get("stop")) {
        if (*v == "objective")
            cfg.stop.kind = StopRule::Kind::objective_residual;
        else if (*v == "gap")
            cfg.stop.kind = StopRule::Kind::gap_threshold;
        else if (*v == "budget")
            cfg.stop.kind = StopRule::Kind::iteration_budget;
        else
            throw InvalidArgument("config: stop must be objective | gap | budget");
    }
    if (auto v = get("stop-threshold")) cfg.stop.threshold = to_double(*v, "stop-threshold");
    return cfg;
}

SolverConfig solver_config_for(const ExperimentConfig& cfg, const std::string& solver,
                               std::uint64_t seed) {
    SolverConfig sc;
    sc.seed = seed;
    sc.max_outer = cfg.max_iters;
    sc.stop = cfg.stop;
    // section-4 defaults per experiment
    if (cfg.kind == ExperimentKind::lasso) {
        sc.phi = 1.618;
        sc.eta = 0.99;
        sc.mu = 0.7;
        sc.beta0 = 100.0;
        if (solver == "ip-grpdal") {
            sc.delta_sched = ErrorSchedule::none();
            sc.eps_sched = ErrorSchedule::power(0.01, 2.0);
        }
    } else if (cfg.kind == ExperimentKind::tv_deblur) {
        sc.phi = 1.618;
        sc.eta = 0.99;
        sc.mu = 0.7;
        sc.beta0 = 1.0;
        sc.tau0 = 0.1;
        if (solver == "ip-grpdal") {
            sc.delta_sched = ErrorSchedule::power(1.0, 2.0);
            sc.eps_sched = ErrorSchedule::none();
        }
    } else {
        sc.phi = 1.5;
        sc.mu = 0.7;
        sc.eta = 0.99;
        sc.beta0 = 1.0;
    }
    if (solver == "agrpdal-partial" || solver == "agrpdal-full") {
        sc.phi = 1.5;
        sc.s = Metric::uniform(0, 0.0);  // placeholder, resolved by the runner
    }

    auto over = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = cfg.raw.find(solver + "." + key);
        if (it == cfg.raw.end()) return std::nullopt;
        return it->second;
    };
    if (auto v = over("beta")) sc.beta0 = to_double(*v, solver + ".beta");
    if (auto v = over("phi")) sc.phi = to_double(*v, solver + ".phi");
    if (auto v = over("eta")) sc.eta = to_double(*v, solver + ".eta");
    if (auto v = over("mu")) sc.mu = to_double(*v, solver + ".mu");
    if (auto v = over("tau0")) sc.tau0 = to_double(*v, solver + ".tau0");
    if (auto v = over("tau")) sc.fixed_tau = to_double(*v, solver + ".tau");
    if (auto v = over("pda-tau")) sc.pda_tau = to_double(*v, solver + ".pda-tau");
    if (auto v = over("pda-sigma")) sc.pda_sigma = to_double(*v, solver + ".pda-sigma");
    if (auto v = over("trial"))
        sc.trial = (*v == "conservative") ? TrialPolicy::conservative : TrialPolicy::aggressive;
    const double alpha = over("alpha") ? to_double(*over("alpha"), "alpha") : 2.0;
    if (auto v = over("c-delta"))
        sc.delta_sched = ErrorSchedule::power(to_double(*v, solver + ".c-delta"), alpha);
    if (auto v = over("c-eps"))
        sc.eps_sched = ErrorSchedule::power(to_double(*v, solver + ".c-eps"), alpha);
    return sc;
}

namespace {

fs::path cache_dir(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("GRPDAL_CACHE_DIR")) return fs::path(env);
    return fs::path(cfg.out_dir) / "cache";
}

std::string cache_key(const ExperimentConfig& cfg, std::uint64_t seed) {
    std::ostringstream ss;
    switch (cfg.kind) {
        case ExperimentKind::lasso:
            ss << "lasso-n" << cfg.n << "-p" << cfg.p << "-s" << cfg.s << "-z" << cfg.zeta
               << "-seed" << seed;
            break;
        case ExperimentKind::tv_deblur:
            ss << "tv-h" << cfg.height << "-w" << cfg.width << "-nu" << cfg.nu << "-d"
               << cfg.density << "-win" << cfg.window << "-ks" << cfg.kappa_split << "-seed"
               << seed << "-budget" << cfg.reference_budget;
            break;
        case ExperimentKind::synthetic_strongly_convex:
            ss << "quad-d" << cfg.dim << "-c" << cfg.coupling << "-seed" << seed;
            break;
    }
    return ss.str();
}

struct Reference {
    double star = 0.0;  // optimal objective value
    Vec xbar, ybar;     // empty for tv-deblur
};

std::optional<Reference> load_reference(const fs::path& file) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    json j;
    in >> j;
    Reference ref;
    ref.star = j.at("star").get<double>();
    if (j.contains("xbar")) ref.xbar = j.at("xbar").get<Vec>();
    if (j.contains("ybar")) ref.ybar = j.at("ybar").get<Vec>();
    return ref;
}

void store_reference(const fs::path& file, const std::string& key, const Reference& ref) {
    json j;
    j["key"] = key;
    j["star"] = ref.star;
    if (!ref.xbar.empty()) j["xbar"] = ref.xbar;
    if (!ref.ybar.empty()) j["ybar"] = ref.ybar;
    std::ofstream out(file);
    if (!out) throw IoError("cannot write reference cache " + file.string());
    out << j.dump();
}

Reference ensure_reference(const ExperimentConfig& cfg, std::uint64_t seed,
                           SaddleProblem& problem, const void* inst_ptr) {
    const fs::path dir = cache_dir(cfg);
    fs::create_directories(dir);
    const std::string key = cache_key(cfg, seed);
    const fs::path file = dir / (key + ".json");
    if (auto ref = load_reference(file)) {
        std::cout << "[grpdal-kit] reference cache hit: " << key << "\n";
        if (!ref->xbar.empty()) problem.install_reference(ref->xbar, ref->ybar);
        problem.objective_star = ref->star;
        return *ref;
    }
    if (cfg.reference_load_only)
        throw InvalidArgument("reference = load but no cached reference for key " + key);
    std::cout << "[grpdal-kit] computing reference for " << key << "\n";
    Reference ref;
    if (cfg.kind == ExperimentKind::lasso) {
        const auto* inst = static_cast<const SparseRecoveryInstance*>(inst_ptr);
        ref.star = install_lasso_reference(problem, *inst, cfg.reference_budget);
        ref.xbar = problem.xbar;
        ref.ybar = problem.ybar;
    } else if (cfg.kind == ExperimentKind::synthetic_strongly_convex) {
        const auto* inst = static_cast<const QuadraticSaddleInstance*>(inst_ptr);
        auto [xb, yb] = quadratic_saddle_solution(*inst);
        problem.install_reference(xb, yb);
        ref.star = problem.objective(xb);
        problem.objective_star = ref.star;
        ref.xbar = std::move(xb);
        ref.ybar = std::move(yb);
    } else {
        const auto* inst = static_cast<const TVDeblurInstance*>(inst_ptr);
        SolverConfig sc = solver_config_for(cfg, "ip-grpdal", seed);
        sc.max_outer = cfg.reference_budget;
        sc.stop = StopRule{StopRule::Kind::iteration_budget, 0.0};
        RunReport rep = ip_grpdal(problem, sc);
        double best = tv_objective(*inst, rep.x);
        for (const auto& row : rep.rows) best = std::min(best, row.objective);
        ref.star = best;
        problem.objective_star = ref.star;
    }
    store_reference(file, key, ref);
    return ref;
}

void write_csv(const fs::path& file, const std::string& solver, const RunReport& rep,
               double wall_time_s, bool no_timing) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot write " + file.string());
    out << "solver,k,objective,gap,tau,beta,ls_trials,inner_iters,wall_time\n";
    out.precision(17);
    // per-row wall time is the mean share; the run is timed as a whole
    const double share =
        no_timing || rep.rows.empty() ? 0.0 : wall_time_s / static_cast<double>(rep.rows.size());
    for (const auto& r : rep.rows) {
        out << solver << ',' << r.k << ',' << r.objective << ',' << r.g << ',' << r.tau << ','
            << r.beta << ',' << r.ls_trials << ',' << r.inner_iters << ','
            << share * static_cast<double>(r.k) << "\n";
    }
    if (!out) throw IoError("write failed: " + file.string());
}

RunReport dispatch_solver(const std::string& name, const SaddleProblem& pr,
                          const SolverConfig& sc) {
    if (name == "pda") return pda_baseline(pr, sc);
    if (name == "pdal") return pdal_baseline(pr, sc);
    if (name == "grpdal") return grpdal_baseline(pr, sc);
    if (name == "ip-grpdal") return ip_grpdal(pr, sc);
    if (name == "agrpdal-partial") return ip_grpdal_accelerated_partial(pr, sc);
    if (name == "agrpdal-full") return ip_grpdal_accelerated_full(pr, sc);
    throw InvalidArgument("unknown solver '" + name + "'");
}

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::budget_exhausted: return "budget-exhausted";
        case SolveStatus::inexact_solve_failed: return "inexact-solve-failed";
    }
    return "unknown";
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    ExperimentOutcome outcome;
    fs::create_directories(cfg.out_dir);
    json summary;
    summary["experiment"] = cfg.kind == ExperimentKind::lasso ? "lasso"
                            : cfg.kind == ExperimentKind::tv_deblur
                                ? "tv-deblur"
                                : "synthetic-strongly-convex";
    summary["seeds"] = cfg.seeds;
    json cells = json::array();

    std::map<std::string, std::vector<double>> iter_counts;

    for (const std::uint64_t seed : cfg.seeds) {
        // build the instance for this seed
        std::optional<SparseRecoveryInstance> lasso_inst;
        std::optional<TVDeblurInstance> tv_inst;
        std::optional<QuadraticSaddleInstance> quad_inst;
        std::optional<SaddleProblem> problem;
        const void* inst_ptr = nullptr;
        if (cfg.kind == ExperimentKind::lasso) {
            lasso_inst = gen_sparse_recovery(cfg.n, cfg.p, cfg.s, cfg.zeta, seed);
            problem.emplace(lasso_saddle(*lasso_inst));
            inst_ptr = &*lasso_inst;
        } else if (cfg.kind == ExperimentKind::tv_deblur) {
            tv_inst = gen_tv_deblur(cfg.height, cfg.width, cfg.nu, cfg.density, seed,
                                    cfg.window, cfg.kappa_split);
            problem.emplace(tv_l1_saddle(*tv_inst));
            inst_ptr = &*tv_inst;
        } else {
            quad_inst = gen_quadratic_saddle(cfg.dim, cfg.coupling, seed);
            problem.emplace(quadratic_saddle_problem(*quad_inst));
            inst_ptr = &*quad_inst;
        }
        const Reference ref = ensure_reference(cfg, seed, *problem, inst_ptr);

        for (const auto& solver : cfg.solvers) {
            SolverConfig sc = solver_config_for(cfg, solver, seed);
            if (cfg.kind == ExperimentKind::lasso) {
                sc.y0 = lasso_inst->b;
            } else if (cfg.kind == ExperimentKind::synthetic_strongly_convex &&
                       (solver == "agrpdal-partial" || solver == "agrpdal-full")) {
                sc.s = Metric::uniform(cfg.dim, 1.5);
                sc.t = Metric::uniform(cfg.dim, 1.5);
                if (solver == "agrpdal-full" && sc.fixed_tau == 0.0)
                    sc.fixed_tau = 1.5 * (1.0 / cfg.rho_target - 1.0);
            }

            CellResult cell;
            cell.solver = solver;
            cell.seed = seed;
            RunReport rep;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                rep = dispatch_solver(solver, *problem, sc);
            } catch (const Error& e) {
                cell.failed = true;
                cell.error = e.what();
                outcome.any_solver_failed = true;
            }
            cell.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            json jc;
            jc["solver"] = solver;
            jc["seed"] = seed;
            if (!cell.failed) {
                cell.iterations = rep.iterations;
                cell.ls_trials = rep.total_ls_trials;
                cell.extra_ls_trials = rep.total_extra_ls_trials;
                cell.inner_iters = rep.total_inner_iters;
                cell.final_objective = rep.rows.empty() ? 0.0 : rep.rows.back().objective;
                cell.final_gap = rep.rows.empty() ? 0.0 : rep.rows.back().g;
                const fs::path csv = fs::path(cfg.out_dir) / (solver + "_s" +
                                                              std::to_string(seed) + ".csv");
                write_csv(csv, solver, rep, cfg.no_timing ? 0.0 : cell.wall_time_s,
                          cfg.no_timing);
                iter_counts[solver].push_back(static_cast<double>(rep.iterations));
                double adsum = 0.0, aesum = 0.0;
                for (const auto& r : rep.rows) {
                    adsum += r.achieved_delta;
                    aesum += r.achieved_eps;
                }
                jc["status"] = status_name(rep.status);
                jc["iterations"] = rep.iterations;
                jc["dual_prox_evaluations"] = rep.total_ls_trials;
                jc["extra_linesearch_trials"] = rep.total_extra_ls_trials;
                jc["inner_prox_iterations"] = rep.total_inner_iters;
                jc["achieved_delta_sum"] = adsum;
                jc["achieved_eps_sum"] = aesum;
                jc["certificate_recompute_failures"] = rep.cert_recompute_failures;
                jc["operator_norm"] = rep.op_norm;
                jc["tau_floor"] = rep.tau_floor;
                jc["final_objective"] = cell.final_objective;
                if (std::isfinite(cell.final_gap)) jc["final_gap"] = cell.final_gap;
                if (cfg.kind == ExperimentKind::tv_deblur) {
                    Image img{cfg.height, cfg.width, rep.x};
                    write_pgm((fs::path(cfg.out_dir) /
                               ("restored_" + solver + "_s" + std::to_string(seed) + ".pgm"))
                                  .string(),
                              img);
                }
            } else {
                jc["status"] = "failed";
                jc["error"] = cell.error;
            }
            if (!cfg.no_timing) jc["wall_time_s"] = cell.wall_time_s;
            cells.push_back(jc);
            outcome.cells.push_back(cell);
        }
        if (cfg.kind == ExperimentKind::tv_deblur) {
            write_pgm((fs::path(cfg.out_dir) / ("observed_s" + std::to_string(seed) + ".pgm"))
                          .string(),
                      Image{cfg.height, cfg.width, tv_inst->observed});
            write_pgm((fs::path(cfg.out_dir) / "clean.pgm").string(),
                      Image{cfg.height, cfg.width, tv_inst->clean});
        }
        summary["reference_star_seed_" + std::to_string(seed)] = ref.star;
    }

    // seed-sweep statistics: mean and standard deviation of iteration counts
    json stats;
    for (const auto& [solver, counts] : iter_counts) {
        double mean = 0.0;
        for (double c : counts) mean += c;
        mean /= static_cast<double>(counts.size());
        double var = 0.0;
        for (double c : counts) var += (c - mean) * (c - mean);
        var = counts.size() > 1 ? var / static_cast<double>(counts.size() - 1) : 0.0;
        stats[solver] = {{"iterations_mean", mean}, {"iterations_std", std::sqrt(var)}};
    }
    summary["stats"] = stats;
    summary["cells"] = cells;
    std::ofstream out(fs::path(cfg.out_dir) / "summary.json");
    if (!out) throw IoError("cannot write summary.json in " + cfg.out_dir);
    out << summary.dump(2) << "\n";
    return outcome;
}

void prepare_references(const ExperimentConfig& cfg) {
    for (const std::uint64_t seed : cfg.seeds) {
        if (cfg.kind == ExperimentKind::lasso) {
            auto inst = gen_sparse_recovery(cfg.n, cfg.p, cfg.s, cfg.zeta, seed);
            SaddleProblem pr = lasso_saddle(inst);
            ensure_reference(cfg, seed, pr, &inst);
        } else if (cfg.kind == ExperimentKind::tv_deblur) {
            auto inst = gen_tv_deblur(cfg.height, cfg.width, cfg.nu, cfg.density, seed,
                                      cfg.window, cfg.kappa_split);
            SaddleProblem pr = tv_l1_saddle(inst);
            ensure_reference(cfg, seed, pr, &inst);
        } else {
            auto inst = gen_quadratic_saddle(cfg.dim, cfg.coupling, seed);
            SaddleProblem pr = quadratic_saddle_problem(inst);
            ensure_reference(cfg, seed, pr, &inst);
        }
    }
}

int run_selfcheck() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    // adjoint identities across operator kinds
    {
        std::mt19937_64 rng(99);
        std::normal_distribution<double> gauss(0.0, 1.0);
        auto randv = [&](std::size_t n) {
            Vec v(n);
            for (double& e : v) e = gauss(rng);
            return v;
        };
        Vec entries(12);
        for (double& e : entries) e = gauss(rng);
        std::vector<LinearOperator> ops;
        ops.push_back(LinearOperator::dense(3, 4, entries));
        ops.push_back(make_blur_operator(8, 8, 3));
        ops.push_back(make_gradient_operator(8, 8));
        ops.push_back(LinearOperator::stack(
            {{1.0, make_blur_operator(8, 8, 3)}, {0.05, make_gradient_operator(8, 8)}}));
        bool ok = true;
        for (const auto& op : ops) {
            for (int trial = 0; trial < 25; ++trial) {
                Vec x = randv(op.input_dim());
                Vec y = randv(op.output_dim());
                const double lhs = dot(op.apply(x), y);
                const double rhs = dot(x, op.adjoint_apply(y));
                ok = ok && std::fabs(lhs - rhs) <= 1e-10 * (1.0 + std::fabs(lhs));
            }
        }
        check("adjoint identity over operator kinds", ok);
    }

    // metric sandwich
    {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vec d(16);
        for (double& e : d) e = 0.5 + std::fabs(gauss(rng));
        Metric m(d);
        bool ok = true;
        for (int t = 0; t < 50; ++t) {
            Vec v(16);
            for (double& e : v) e = gauss(rng);
            const double wn = m.norm(v), en = nrm2(v);
            ok = ok && wn >= std::sqrt(m.lambda_min()) * en * (1 - 1e-12) &&
                 wn <= std::sqrt(m.lambda_max()) * en * (1 + 1e-12);
        }
        check("metric norm sandwich", ok);
    }

    // exact prox passes all three certificates
    {
        std::mt19937_64 rng(17);
        std::normal_distribution<double> gauss(0.0, 1.0);
        bool ok = true;
        for (int t = 0; t < 50; ++t) {
            Vec anchor(6), diag(6);
            for (double& e : anchor) e = 2.0 * gauss(rng);
            for (double& e : diag) e = 0.5 + std::fabs(gauss(rng));
            Metric m(diag);
            ConvexFunction f = ConvexFunction::scaled_l1(6, 0.7);
            ProxRequest req{f, anchor, 0.8, m, 1e-10};
            Vec z = prox_exact(req);
            ok = ok && certify_type2(req, z).ok && certify_type0(req, z).ok &&
                 certify_type1(req, z).ok;
        }
        check("exact prox passes type-0/1/2 certificates at 1e-10", ok);
    }

    // small solver run: determinism and the stepsize floor
    {
        auto inst = gen_sparse_recovery(30, 30, 5, 0.1, 3);
        SaddleProblem pr = lasso_saddle(inst);
        SolverConfig sc;
        sc.beta0 = 100.0;
        sc.phi = 1.618;
        sc.max_outer = 300;
        sc.y0 = inst.b;
        RunReport r1 = ip_grpdal(pr, sc);
        RunReport r2 = ip_grpdal(pr, sc);
        bool same = r1.rows.size() == r2.rows.size();
        bool floor_ok = true;
        for (std::size_t i = 0; same && i < r1.rows.size(); ++i) {
            same = r1.rows[i].tau == r2.rows[i].tau &&
                   r1.rows[i].objective == r2.rows[i].objective;
            floor_ok = floor_ok && r1.rows[i].tau >= r1.tau_floor;
        }
        check("solver determinism (bitwise taus and objectives)", same);
        check("accepted stepsizes respect the floor", floor_ok);
        check("certificates recompute bit-for-bit", r1.cert_recompute_failures == 0);
    }
    return failures;
}

}  // namespace grpdal

#include "fpf/instance.hpp"
#include "fpf/report.hpp"

#include "acceptance_suite.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fpf;

namespace {

enum Exit { kOk = 0, kUsage = 1, kVerifyFailed = 2, kNotConverged = 3 };

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

struct SolverFlags {
    std::optional<double> tol, alpha;
    std::optional<std::size_t> restarts, max_iters, anderson, grid;
    std::optional<std::uint64_t> seed;
    std::string config;

    void attach(CLI::App* app) {
        app->add_option("--tol", tol, "residual tolerance");
        app->add_option("--alpha", alpha, "damping factor in (0, 1]");
        app->add_option("--restarts", restarts, "multistart restarts");
        app->add_option("--seed", seed, "restart seed");
        app->add_option("--max-iters", max_iters, "iteration budget per restart");
        app->add_option("--anderson", anderson, "Anderson memory (0 disables)");
        app->add_option("--grid", grid, "grid oracle resolution per axis");
        app->add_option("--config", config, "JSON solver config file");
    }

    SolverConfig resolve() const {
        SolverConfig c;
        if (!config.empty()) c = parse_solver_config(slurp(config));
        if (tol) c.tol = *tol;
        if (alpha) c.alpha = *alpha;
        if (restarts) c.restarts = *restarts;
        if (max_iters) c.max_iters = *max_iters;
        if (anderson) c.anderson = *anderson;
        if (grid) c.grid = *grid;
        if (seed) c.seed = *seed;
        c.validate();
        return c;
    }
};

int run_solve(const std::string& instance_path, const std::string& circuit_path, const SolverFlags& flags,
              std::optional<double> eps, const std::string& out, bool quiet) {
    RunReport rep;
    rep.config = flags.resolve();
    std::optional<InstanceFile> inst;
    FixedPointProblem problem = [&] {
        if (!circuit_path.empty()) {
            const std::string bytes = slurp(circuit_path);
            rep.digest = content_digest(bytes);
            rep.kind = "circuit";
            ParsedCircuit pc = parse_circuit_text(bytes);
            if (!pc.notes.domain) throw SchemaError("circuit file has no BOX domain annotation");
            return FixedPointProblem{pc.circuit, *pc.notes.domain,
                                     pc.notes.primary.value_or(pc.circuit.input_arity()), pc.notes.aux};
        }
        const std::string bytes = slurp(instance_path);
        rep.digest = content_digest(bytes);
        inst = parse_instance(bytes);
        rep.kind = inst->kind;
        return compile_instance(*inst);
    }();
    auto t0 = std::chrono::steady_clock::now();
    rep.fixed_point = multistart(problem, rep.config);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::size_t take = inst ? instance_point_dim(*inst) : problem.primary;
    rep.primary.assign(rep.fixed_point.point.begin(), rep.fixed_point.point.begin() + static_cast<std::ptrdiff_t>(take));
    if (rep.fixed_point.converged) {
        if (inst) {
            std::span<const double> pt = inst->kind == "raw_circuit" ? std::span<const double>(rep.fixed_point.point)
                                                                      : std::span<const double>(rep.primary);
            rep.verification = verify_instance(*inst, pt, eps.value_or(default_verify_tolerance(*inst)));
        } else {
            VerificationReport v;
            v.record("fixed-point residual", fixed_point_residual(problem.circuit, rep.fixed_point.point),
                     eps.value_or(rep.config.tol));
            rep.verification = v;
        }
    }
    emit(out, to_json(rep));
    if (!quiet) std::cerr << summarize(rep);
    if (!rep.fixed_point.converged) return kNotConverged;
    return rep.verification->pass ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-point circuits for equilibrium problems"};
    app.require_subcommand(1);

    std::string instance, out, circuit, point, report;
    std::optional<double> eps;
    bool quiet = false;
    SolverFlags flags;

    auto* compile = app.add_subcommand("compile", "instance -> standalone circuit file");
    compile->add_option("instance", instance, "instance file")->required();
    compile->add_option("-o", out, "output circuit file (stdout if omitted)");

    auto* solve = app.add_subcommand("solve", "instance -> run report");
    solve->add_option("instance", instance, "instance file");
    solve->add_option("--circuit", circuit, "solve a standalone circuit file instead");
    solve->add_option("--eps", eps, "verification tolerance");
    solve->add_option("-o", out, "output run report (stdout if omitted)");
    solve->add_flag("-q,--quiet", quiet, "no summary on stderr");
    flags.attach(solve);

    auto* verify = app.add_subcommand("verify", "instance + point -> verification report");
    verify->add_option("instance", instance, "instance file")->required();
    verify->add_option("point", point, "point file")->required();
    verify->add_option("--eps", eps, "verification tolerance");
    verify->add_option("-o", out, "output report (stdout if omitted)");

    auto* summary = app.add_subcommand("report", "run report -> human-readable summary");
    summary->add_option("report", report, "run report file")->required();

    std::vector<int> only;
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->add_option("--only", only, "criterion numbers to run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*compile) {
            InstanceFile inst = parse_instance(slurp(instance));
            FixedPointProblem p = compile_instance(inst);
            emit(out, to_text(p.circuit, p.annotations()));
            return kOk;
        }
        if (*solve) {
            if (instance.empty() == circuit.empty()) {
                std::cerr << "solve: give exactly one of an instance file or --circuit\n";
                return kUsage;
            }
            return run_solve(instance, circuit, flags, eps, out, quiet);
        }
        if (*verify) {
            InstanceFile inst = parse_instance(slurp(instance));
            std::vector<double> x = parse_point(slurp(point));
            VerificationReport rep = verify_instance(inst, x, eps.value_or(default_verify_tolerance(inst)));
            emit(out, to_json(rep));
            if (const Violation* v = rep.first_failure())
                std::cerr << "verification failed: " << v->condition << " = " << v->value << " > " << v->tolerance
                          << (v->witness.empty() ? "" : " [" + v->witness + "]") << "\n";
            return rep.pass ? kOk : kVerifyFailed;
        }
        if (*summary) {
            std::cout << summarize(parse_run_report(slurp(report)));
            return kOk;
        }
        if (*selftest) return run_acceptance(std::cout, only) == 0 ? kOk : kVerifyFailed;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

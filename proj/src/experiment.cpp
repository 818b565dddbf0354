#include "paseig/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "paseig/errors.hpp"

namespace fs = std::filesystem;

namespace paseig {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

// Tracks every file this run creates so a failure can take them all back.
class OutputSet {
  public:
    explicit OutputSet(const fs::path& dir) : dir_(dir) { fs::create_directories(dir_); }

    std::ofstream open(const std::string& name) {
        const fs::path p = dir_ / name;
        written_.push_back(p);
        std::ofstream os(p);
        if (!os) throw Error("cannot write " + p.string());
        return os;
    }

    void discard_all() {
        for (const fs::path& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        written_.clear();
    }

  private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

struct SweepRun {
    int sweep_value = 0;
    SolverConfig cfg;
    RunReport report;
    std::vector<double> reference; // per sorted pair; empty if none
    std::optional<GammaEstimate> gamma;
    std::vector<int> interior_dofs;
};

SweepRun execute_one(const ExperimentSpec& spec, int sweep_value, OutputSet& out) {
    SweepRun run;
    run.sweep_value = sweep_value;
    run.cfg = spec.solver;
    if (spec.sweep == SweepMode::levels) run.cfg.levels = sweep_value;
    if (spec.sweep == SweepMode::finest_corrections) run.cfg.finest_corrections = sweep_value;

    const ProblemSetup setup = build_setup(run.cfg);
    for (int k = 0; k < setup.hierarchy.num_levels(); ++k)
        run.interior_dofs.push_back(setup.ops.dofs(k));

    run.report = solve(run.cfg);

    const int m = run.cfg.eigenpairs;
    if (spec.reference == ReferenceMode::analytic) {
        run.reference = analytic_spectrum(run.cfg.problem, resolved_dimension(run.cfg),
                                          resolved_box(run.cfg), m);
    } else if (spec.reference == ReferenceMode::oracle) {
        const int finest = run.cfg.levels - 1;
        const DenseEigenResult oracle =
            oracle_fine_solve(setup.ops, finest, m, run.cfg.dense_cap);
        run.reference.assign(oracle.eigenvalues.begin(), oracle.eigenvalues.end());
        if (spec.sweep == SweepMode::none)
            run.gamma = measure_gamma(run.cfg, 0, 6, &oracle);
    }

    if (spec.dump_meshes) {
        for (int k = 0; k < setup.hierarchy.num_levels(); ++k) {
            std::ofstream os = out.open("mesh_level_" + std::to_string(k) + ".txt");
            write_mesh_text(setup.hierarchy.levels[k], os);
        }
    }
    return run;
}

void write_outputs(const ExperimentSpec& spec, const std::vector<SweepRun>& runs, OutputSet& out) {
    {
        std::ofstream os = out.open("eigenvalues.csv");
        os << "sweep,index,status,lambda,reference,abs_error\n";
        for (const SweepRun& run : runs)
            for (std::size_t i = 0; i < run.report.pairs.size(); ++i) {
                const PairResult& pr = run.report.pairs[i];
                os << run.sweep_value << ',' << (i + 1) << ','
                   << (pr.state.failed ? "failed" : "ok") << ',';
                if (!pr.state.failed) {
                    os << fmt_g17(pr.state.lambda);
                    if (i < run.reference.size()) {
                        const double ref = run.reference[i];
                        os << ',' << fmt_g17(ref) << ','
                           << fmt_g17(std::abs(pr.state.lambda - ref));
                    } else {
                        os << ",,";
                    }
                } else {
                    os << ",,";
                }
                os << '\n';
            }
    }
    {
        std::ofstream os = out.open("convergence.csv");
        os << "sweep,index,level,iteration,lambda,residual\n";
        for (const SweepRun& run : runs)
            for (std::size_t i = 0; i < run.report.pairs.size(); ++i)
                for (const HistoryEntry& h : run.report.pairs[i].state.history)
                    os << run.sweep_value << ',' << (i + 1) << ',' << h.level << ','
                       << h.iteration << ',' << fmt_g17(h.lambda) << ',' << fmt_g17(h.residual)
                       << '\n';
    }
    {
        std::ofstream os = out.open("orthogonality.csv");
        os << "sweep,max_normalized_b_offdiagonal\n";
        for (const SweepRun& run : runs)
            os << run.sweep_value << ',' << fmt_g17(run.report.orthogonality_max) << '\n';
    }
    {
        std::ofstream os = out.open("timing.csv");
        os << "sweep,index,wall_seconds,matvec_calls,matvec_work,cg_iterations\n";
        for (const SweepRun& run : runs)
            for (std::size_t i = 0; i < run.report.pairs.size(); ++i) {
                const PairResult& pr = run.report.pairs[i];
                os << run.sweep_value << ',' << (i + 1) << ',' << fmt_g17(pr.wall_seconds) << ','
                   << pr.state.counters.matvec_calls << ',' << pr.state.counters.matvec_work
                   << ',' << pr.state.counters.cg_iterations << '\n';
            }
    }
    {
        nlohmann::json j;
        const SolverConfig& cfg = spec.solver;
        const Box box = resolved_box(cfg);
        j["problem"] = problem_name(cfg.problem);
        j["dimension"] = resolved_dimension(cfg);
        j["box_lo"] = box.lo[0];
        j["box_hi"] = box.hi[0];
        j["coarse_divisions"] = cfg.coarse_divisions;
        j["levels"] = cfg.levels;
        j["eigenpairs"] = cfg.eigenpairs;
        j["corrections"] = cfg.corrections;
        j["finest_corrections"] = cfg.finest_corrections;
        j["pre_smooth"] = cfg.mg.pre_smooth_steps;
        j["post_smooth"] = cfg.mg.post_smooth_steps;
        j["mg_cycles"] = cfg.mg.cycles_per_solve;
        j["coarsest_tol"] = cfg.mg.coarsest_rel_tol;
        j["reference"] = reference_name(spec.reference);
        j["sweep"] = sweep_name(spec.sweep);

        nlohmann::json jruns = nlohmann::json::array();
        for (const SweepRun& run : runs) {
            nlohmann::json r;
            r["sweep"] = run.sweep_value;
            r["levels"] = run.cfg.levels;
            r["interior_dofs"] = run.interior_dofs;
            r["orthogonality_max"] = run.report.orthogonality_max;
            r["theta_hat"] = run.report.theta_hat;
            if (run.gamma) {
                r["gamma_hat"] = run.gamma->gamma;
                r["gamma_condition_ok"] = run.gamma->condition_ok;
            } else {
                r["gamma_hat"] = nullptr;
            }
            int failed = 0;
            for (const PairResult& pr : run.report.pairs)
                if (pr.state.failed) ++failed;
            r["failed_pairs"] = failed;
            jruns.push_back(std::move(r));
        }
        j["runs"] = std::move(jruns);

        std::ofstream os = out.open("report.json");
        os << j.dump(2) << '\n';
    }
}

} // namespace

int run_experiment(const ExperimentSpec& spec, const std::string& output_dir, std::ostream& log) {
    OutputSet out{fs::path(output_dir)};
    try {
        std::vector<int> sweep_values;
        if (spec.sweep == SweepMode::none)
            sweep_values.push_back(0);
        else
            for (int v = spec.sweep_from; v <= spec.sweep_to; ++v) sweep_values.push_back(v);

        std::vector<SweepRun> runs;
        for (int v : sweep_values) {
            runs.push_back(execute_one(spec, v, out));
            const SweepRun& run = runs.back();
            int failed = 0;
            for (const PairResult& pr : run.report.pairs)
                if (pr.state.failed) ++failed;
            if (failed == static_cast<int>(run.report.pairs.size()))
                throw NumericalError("every eigenpair failed: " +
                                     run.report.pairs.front().state.failure_reason);
            log << "sweep " << v << ": " << run.report.pairs.size() - failed << "/"
                << run.report.pairs.size() << " eigenpairs";
            if (failed > 0) log << " (" << failed << " failed)";
            if (!run.report.pairs.empty() && !run.report.pairs.front().state.failed)
                log << ", lambda_1 = " << fmt_g17(run.report.pairs.front().state.lambda);
            log << "\n";
        }

        write_outputs(spec, runs, out);
        return 0;
    } catch (const ConfigError& e) {
        out.discard_all();
        log << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        out.discard_all();
        log << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace paseig

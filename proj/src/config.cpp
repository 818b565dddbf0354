#include "paseig/config.hpp"

#include <charconv>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <vector>

#include "paseig/errors.hpp"

namespace paseig {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct LineErrors {
    std::vector<std::string> messages;
    void add(int line, const std::string& msg) {
        messages.push_back("line " + std::to_string(line) + ": " + msg);
    }
    void raise_if_any() const {
        if (messages.empty()) return;
        std::string all;
        for (const auto& m : messages) {
            if (!all.empty()) all += "\n";
            all += m;
        }
        throw ConfigError(all);
    }
};

bool parse_int(const std::string& v, long long& out) {
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && p == last;
}

bool parse_double(const std::string& v, double& out) {
    char* end = nullptr;
    out = std::strtod(v.c_str(), &end);
    return end == v.c_str() + v.size() && !v.empty();
}

bool parse_bool(const std::string& v, bool& out) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") {
        out = true;
        return true;
    }
    if (v == "false" || v == "0" || v == "off" || v == "no") {
        out = false;
        return true;
    }
    return false;
}

} // namespace

const char* reference_name(ReferenceMode m) {
    switch (m) {
    case ReferenceMode::analytic: return "analytic";
    case ReferenceMode::oracle: return "oracle";
    case ReferenceMode::none: return "none";
    }
    return "?";
}

const char* sweep_name(SweepMode m) {
    switch (m) {
    case SweepMode::none: return "none";
    case SweepMode::levels: return "levels";
    case SweepMode::finest_corrections: return "finest_corrections";
    }
    return "?";
}

ExperimentSpec parse_config(const std::string& text) {
    ExperimentSpec spec;
    SolverConfig& cfg = spec.solver;
    LineErrors errors;

    double box_lo = 0.0, box_hi = 0.0;
    bool box_lo_set = false, box_hi_set = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.add(lineno, "expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            errors.add(lineno, "expected 'key = value', got '" + line + "'");
            continue;
        }

        auto int_for = [&](int& dst, long long lo, long long hi) {
            long long v;
            if (!parse_int(value, v))
                errors.add(lineno, "invalid value '" + value + "' for key '" + key + "'");
            else if (v < lo)
                errors.add(lineno, "'" + key + "' must be >= " + std::to_string(lo) + ", got " + value);
            else if (v > hi)
                errors.add(lineno, "'" + key + "' must be <= " + std::to_string(hi) + ", got " + value);
            else
                dst = static_cast<int>(v);
        };
        auto double_for = [&](double& dst) {
            double v;
            if (!parse_double(value, v))
                errors.add(lineno, "invalid value '" + value + "' for key '" + key + "'");
            else
                dst = v;
        };
        auto bool_for = [&](bool& dst) {
            bool v;
            if (!parse_bool(value, v))
                errors.add(lineno, "invalid value '" + value + "' for key '" + key + "'");
            else
                dst = v;
        };

        if (key == "problem") {
            try {
                cfg.problem = parse_problem(value);
            } catch (const ConfigError& e) {
                errors.add(lineno, e.what());
            }
        } else if (key == "dimension") {
            int_for(cfg.dimension, 2, 3);
        } else if (key == "box_lo") {
            double_for(box_lo);
            box_lo_set = true;
        } else if (key == "box_hi") {
            double_for(box_hi);
            box_hi_set = true;
        } else if (key == "coarse_divisions") {
            int_for(cfg.coarse_divisions, 1, 1 << 20);
        } else if (key == "levels") {
            int_for(cfg.levels, 1, 32);
        } else if (key == "eigenpairs") {
            int_for(cfg.eigenpairs, 1, 1 << 20);
        } else if (key == "corrections") {
            int_for(cfg.corrections, 1, 1000);
        } else if (key == "finest_corrections") {
            int_for(cfg.finest_corrections, 1, 1000);
        } else if (key == "pre_smooth") {
            int_for(cfg.mg.pre_smooth_steps, 0, 1000);
        } else if (key == "post_smooth") {
            int_for(cfg.mg.post_smooth_steps, 0, 1000);
        } else if (key == "mg_cycles") {
            int_for(cfg.mg.cycles_per_solve, 1, 1000);
        } else if (key == "coarsest_tol") {
            double_for(cfg.mg.coarsest_rel_tol);
        } else if (key == "workers") {
            int_for(cfg.workers, 0, 4096);
        } else if (key == "max_interior_dofs") {
            long long v;
            if (!parse_int(value, v) || v < 1)
                errors.add(lineno, "invalid value '" + value + "' for key '" + key + "'");
            else
                cfg.max_interior_dofs = v;
        } else if (key == "dense_cap") {
            int_for(cfg.dense_cap, 1, 1 << 20);
        } else if (key == "seed_on_coarse") {
            bool_for(cfg.seed_on_coarse);
        } else if (key == "contraction_trials") {
            int_for(cfg.contraction_trials, 0, 1000);
        } else if (key == "reference") {
            spec.reference_set = true;
            if (value == "analytic")
                spec.reference = ReferenceMode::analytic;
            else if (value == "oracle")
                spec.reference = ReferenceMode::oracle;
            else if (value == "none")
                spec.reference = ReferenceMode::none;
            else
                errors.add(lineno, "reference must be analytic, oracle or none");
        } else if (key == "sweep") {
            if (value == "none")
                spec.sweep = SweepMode::none;
            else if (value == "levels")
                spec.sweep = SweepMode::levels;
            else if (value == "finest_corrections")
                spec.sweep = SweepMode::finest_corrections;
            else
                errors.add(lineno, "sweep must be none, levels or finest_corrections");
        } else if (key == "sweep_from") {
            int_for(spec.sweep_from, 1, 1 << 20);
        } else if (key == "sweep_to") {
            int_for(spec.sweep_to, 1, 1 << 20);
        } else if (key == "dump_meshes") {
            bool_for(spec.dump_meshes);
        } else {
            errors.add(lineno, "unknown key '" + key + "'");
        }
    }

    errors.raise_if_any();

    if (box_lo_set != box_hi_set) throw ConfigError("box_lo and box_hi must be given together");
    if (box_lo_set) {
        Box b;
        b.dim = cfg.dimension != 0 ? cfg.dimension : default_dimension(cfg.problem);
        for (int d = 0; d < b.dim; ++d) {
            b.lo[d] = box_lo;
            b.hi[d] = box_hi;
        }
        cfg.box = b;
    }

    if (!spec.reference_set && !has_analytic_spectrum(cfg.problem))
        spec.reference = ReferenceMode::none;
    if (spec.reference == ReferenceMode::analytic && !has_analytic_spectrum(cfg.problem))
        throw ConfigError("problem '" + std::string(problem_name(cfg.problem)) +
                          "' has no closed-form spectrum; use reference = oracle or none");
    if (spec.sweep != SweepMode::none && spec.sweep_to < spec.sweep_from)
        throw ConfigError("sweep_to must be >= sweep_from");

    validate(cfg);
    return spec;
}

ExperimentSpec quick_preset() {
    ExperimentSpec spec;
    spec.solver.problem = ProblemId::laplace2d;
    spec.solver.coarse_divisions = 4;
    spec.solver.levels = 4;
    spec.solver.eigenpairs = 10;
    spec.reference = ReferenceMode::analytic;
    return spec;
}

void print_config(const ExperimentSpec& spec, std::ostream& os) {
    const SolverConfig& cfg = spec.solver;
    const Box box = resolved_box(cfg);
    os << "problem             " << problem_name(cfg.problem) << "\n"
       << "dimension           " << resolved_dimension(cfg) << "\n"
       << "box                 [" << box.lo[0] << ", " << box.hi[0] << "]^" << box.dim << "\n"
       << "coarse_divisions    " << cfg.coarse_divisions << "\n"
       << "levels              " << cfg.levels << "\n"
       << "eigenpairs          " << cfg.eigenpairs << "\n"
       << "corrections         " << cfg.corrections << "\n"
       << "finest_corrections  " << cfg.finest_corrections << "\n"
       << "smoothing           " << cfg.mg.pre_smooth_steps << "+" << cfg.mg.post_smooth_steps
       << " cg steps, " << cfg.mg.cycles_per_solve << " cycle(s), coarsest tol "
       << cfg.mg.coarsest_rel_tol << "\n"
       << "workers             " << cfg.workers << " (resolved " << resolved_workers(cfg) << ")\n"
       << "dense_cap           " << cfg.dense_cap << "\n"
       << "max_interior_dofs   " << cfg.max_interior_dofs << "\n"
       << "seed_on_coarse      " << (cfg.seed_on_coarse ? "true" : "false") << "\n"
       << "contraction_trials  " << cfg.contraction_trials << "\n"
       << "reference           " << reference_name(spec.reference) << "\n"
       << "sweep               " << sweep_name(spec.sweep);
    if (spec.sweep != SweepMode::none) os << " " << spec.sweep_from << ".." << spec.sweep_to;
    os << "\n";
}

const char* const kConfigKeyHelp = R"(Config file: one "key = value" per line, '#' starts a comment.

  problem             laplace2d | laplace3d | variable_coeff | harmonic_box
  dimension           2 | 3 (harmonic_box only; others are fixed)
  box_lo, box_hi      uniform box bounds per axis (default: problem specific)
  coarse_divisions    segments per axis of the coarsest mesh (default 4)
  levels              number of mesh levels, coarsest included (default 4)
  eigenpairs          how many eigenpairs to compute (default 10)
  corrections         correction steps per intermediate level (default 1)
  finest_corrections  correction steps on the finest level (default 1)
  pre_smooth          CG smoothing steps before coarse correction (default 2)
  post_smooth         CG smoothing steps after coarse correction (default 2)
  mg_cycles           V-cycles per inexact solve (default 1)
  coarsest_tol        relative tolerance of the level-0 direct solve (default 1e-12)
  workers             worker threads; 0 = min(eigenpairs, hardware) (default 0)
  max_interior_dofs   reject hierarchies finer than this (default 2000000)
  dense_cap           largest dense eigensolve dimension (default 4000,
                      override with the PASEIG_DENSE_CAP environment variable)
  seed_on_coarse      true: first eigensolve on level 0 itself (default false)
  contraction_trials  random trials per level for the theta estimate,
                      0 disables it (default 3)
  reference           analytic | oracle | none (default analytic when the
                      problem has a closed-form spectrum, else none)
  sweep               none | levels | finest_corrections (default none)
  sweep_from, sweep_to  inclusive sweep range
  dump_meshes         true: write one mesh_level_<k>.txt per level

Output files (written into --output):
  eigenvalues.csv     sweep,index,status,lambda,reference,abs_error
  convergence.csv     sweep,index,level,iteration,lambda,residual
  orthogonality.csv   sweep,max_normalized_b_offdiagonal
  timing.csv          sweep,index,wall_seconds,matvec_calls,matvec_work,cg_iterations
  report.json         configuration echo plus diagnostics (per-level DOF
                      counts, theta per level, gamma when measured)

Floats are written with 17 significant digits; rerunning a config
reproduces every file byte for byte (timing.csv excepted).
)";

} // namespace paseig

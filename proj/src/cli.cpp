#include "vsi/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "vsi/errors.hpp"
#include "vsi/observables.hpp"

namespace vsi {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

std::string join_tags(const std::vector<std::string>& tags) {
    std::string s;
    for (const auto& t : tags) s += (s.empty() ? "" : "+") + t;
    return s.empty() ? "none" : s;
}

struct Output {
    json diagnostics = json::object();
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool ok{true}; // validate: all checks green
};

json manifest(const std::string& command, const RunConfig& c, const json& diagnostics) {
    return {{"tool", kToolName},
            {"version", kToolVersion},
            {"command", command},
            {"config", to_json(c)},
            {"diagnostics", diagnostics}};
}

std::string render(const std::string& command, const RunConfig& c, const Output& o) {
    std::ostringstream s;
    s << "# tool: " << kToolName << "\n";
    s << "# version: " << kToolVersion << "\n";
    s << "# command: " << command << "\n";
    s << "# config: " << to_json(c).dump() << "\n";
    s << "# diagnostics: " << o.diagnostics.dump() << "\n";
    for (size_t i = 0; i < o.header.size(); ++i) s << (i ? "," : "") << o.header[i];
    s << "\n";
    for (const auto& r : o.rows) {
        for (size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << csv_field(r[i]);
        s << "\n";
    }
    return s.str();
}

json sweep_diagnostics(const SweepResult& r) {
    return {{"points", r.x.size()},
            {"max_residual_inf", r.max_residual},
            {"min_eigenvalue", r.min_eigenvalue},
            {"positivity_warnings", r.positivity_warnings},
            {"max_conserved_constraints", r.max_constraints}};
}

Output field_output(const SweepResult& r, const RunConfig& c) {
    const auto catalog = lc_catalog(c.system);
    Output o;
    o.diagnostics = sweep_diagnostics(r);
    o.header = {"field_mT", r.quantity, "normalized_" + normalization_name(r.spec.normalization),
                "nearest_lc", "lc_distance_mT"};
    for (size_t i = 0; i < r.x.size(); ++i) {
        const NearestLc n = nearest_lc(catalog, r.x[i]);
        o.rows.push_back({format_double(r.x[i]), format_double(r.raw[i]), format_double(r.value[i]),
                          n.name, format_double(n.distance_mT)});
    }
    return o;
}

Output frequency_output(const SweepResult& r, const RunConfig& c) {
    const auto lines = rf_lines(c.system, c.sweep.b_mT);
    Output o;
    o.diagnostics = sweep_diagnostics(r);
    o.header = {"rf_frequency_MHz", r.quantity, "normalized_" + normalization_name(r.spec.normalization),
                "nearest_line", "line_distance_MHz"};
    for (size_t i = 0; i < r.x.size(); ++i) {
        const RfLine* best = nullptr;
        for (const auto& l : lines)
            if (!best || std::abs(r.x[i] - l.frequency_MHz) < std::abs(r.x[i] - best->frequency_MHz))
                best = &l;
        o.rows.push_back({format_double(r.x[i]), format_double(r.raw[i]), format_double(r.value[i]),
                          best->name, format_double(r.x[i] - best->frequency_MHz)});
    }
    return o;
}

// Window for the numeric gap search around a catalogued crossing.
std::pair<double, double> gap_window(const LcCatalogEntry& e, const SpinSystem& sys) {
    if (e.family == LcFamily::LC1 || e.family == LcFamily::LC2)
        return {0.6 * e.b_cross_mT, 1.4 * e.b_cross_mT};
    const double w = 0.02 + 2.0 * sys.hfc_mT(e.block).cwiseAbs().maxCoeff();
    return {std::max(0.0, e.b_cross_mT - w), e.b_cross_mT + w};
}

Output atlas_output(const RunConfig& c) {
    const auto& sys = c.system;
    const double ge = sys.gamma_e();
    Output o;
    o.header = {"block", "family", "pair", "b_cross_mT", "nuclear_flip", "first_order_abs_mT",
                "first_order_abs_MHz", "second_order_printed_mT", "second_order_corrected_mT",
                "lifted_by", "numeric_with_tilt", "numeric_b_min_mT", "numeric_gap_mT"};
    int no_crossing = 0;
    for (const auto& e : lc_catalog(sys)) {
        // hyperfine crossings are probed with the tilt terms off, electron-only
        // crossings with them on: each row isolates its own mechanism
        const bool electron_only = e.family == LcFamily::LC1 || e.family == LcFamily::LC2;
        std::string bmin = "nan", gap = "nan";
        if (e.b_cross_mT > 0.0) {
            const auto [lo, hi] = gap_window(e, sys);
            try {
                const GapResult g = numeric_lac_gap(sys, e.block, e.state_a, e.state_b, lo, hi, electron_only);
                bmin = format_double(g.b_min_mT);
                gap = format_double(g.gap / ge);
            } catch (const NoCrossingInWindow&) {
                ++no_crossing;
            }
        }
        const double v = std::abs(e.first_order);
        o.rows.push_back({e.block == State::GS ? "GS" : "ES", family_name(e.family), e.pair_label,
                          format_double(e.b_cross_mT), e.nuclear_flip ? "1" : "0", format_double(v / ge),
                          format_double(rad_ns_to_mhz(v)), format_double(e.second_order_printed / ge),
                          format_double(e.second_order_corrected / ge), join_tags(e.lifted_by), electron_only ? "1" : "0", bmin, gap});
    }
    o.diagnostics = {{"entries", o.rows.size()}, {"gaps_without_crossing", no_crossing}};
    return o;
}

Output validate_output(const RunConfig& c) {
    Output o;
    o.header = {"check", "value", "tolerance", "status"};
    int failed = 0;
    for (const auto& r : validation_checks(c)) {
        failed += r.pass ? 0 : 1;
        o.rows.push_back({r.check, format_double(r.value), format_double(r.tolerance), r.pass ? "PASS" : "FAIL"});
    }
    o.ok = failed == 0;
    o.diagnostics = {{"checks", o.rows.size()}, {"failed", failed}};
    return o;
}

double herm_err(const CMat& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

} // namespace

std::vector<RfLine> rf_lines(const SpinSystem& sys, double b) {
    std::vector<RfLine> out;
    const char* spin[] = {"3/2", "1/2", "-1/2", "-3/2"};
    for (State s : {State::GS, State::ES}) {
        const auto e = analytic_energies(sys.d_mT(s), b, sys.hfc_mT(s)(2, 2), sys.gamma_n_over_gamma_e,
                                         sys.gamma_e());
        for (int k = 0; k < 3; ++k)
            for (int nuc = 0; nuc < 2; ++nuc) {
                const double de = e[static_cast<size_t>(2 * k + nuc)] - e[static_cast<size_t>(2 * k + 2 + nuc)];
                out.push_back({std::string(s == State::GS ? "GS " : "ES ") + spin[k] + "<->" + spin[k + 1] +
                                   (nuc ? " b" : " a"),
                               std::abs(rad_ns_to_mhz(de))});
            }
    }
    return out;
}

std::vector<CheckRow> validation_checks(const RunConfig& c) {
    std::vector<CheckRow> rows;
    auto add = [&](const std::string& name, double v, double tol) {
        rows.push_back({name, v, tol, std::isfinite(v) && v <= tol});
    };
    const auto& sys = c.system;

    for (double s : {0.5, 1.5}) {
        const auto op = build_spin_operators(s);
        const CMat id = CMat::Identity(op.dim(), op.dim());
        const CMat comm = op.sx * op.sy - op.sy * op.sx - cplx(0, 1) * op.sz;
        const CMat s2 = op.sx * op.sx + op.sy * op.sy + op.sz * op.sz - s * (s + 1) * id;
        const std::string tag = s == 0.5 ? "spin_1/2" : "spin_3/2";
        add(tag + "_commutator", comm.cwiseAbs().maxCoeff(), 1e-12);
        add(tag + "_casimir", s2.cwiseAbs().maxCoeff(), 1e-12);
    }

    const double b_lo = c.sweep.field_start_mT, b_hi = c.sweep.field_stop_mT;
    const std::pair<const char*, double> fields[] = {
        {"start", b_lo}, {"mid", 0.5 * (b_lo + b_hi)}, {"stop", b_hi}};
    const auto jumps = build_jump_operators(c.rates, c.model.isc);
    for (const auto& [where, b] : fields) {
        const std::string at = std::string("@") + where;
        const BlockHamiltonian h = lab_block_hamiltonian(sys, b, true);
        add("lab_hamiltonian_hermitian" + at, herm_err(h.full()), 1e-12);
        FieldConfig f{b, c.sweep.b1_mT, mhz_to_rad_ns(c.sweep.rf_frequency_MHz), c.sweep.b1_mT > 0.0};
        add("rotating_hamiltonian_hermitian" + at,
            herm_err(rotating_block_hamiltonian(sys, f, c.model.perturbations_in_odmr).full()), 1e-12);
        const CMat l = assemble_liouvillian(h, jumps);
        // trace preservation: vec(1)^dag L = 0
        const CVec one = vectorize(CMat::Identity(kFullDim, kFullDim));
        add("trace_preservation" + at, (one.adjoint() * l).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, l.cwiseAbs().maxCoeff()));

        const SteadyState st = solve_cycle(h, jumps);
        add("steady_residual" + at, st.diag.residual_inf, 1e-10);
        add("steady_trace" + at, std::abs(st.rho.trace() - cplx(1.0, 0.0)), 1e-10);
        add("steady_hermitian" + at, herm_err(st.rho), 1e-10);
        add("steady_negative_eigenvalue" + at, std::max(0.0, -st.diag.min_eigenvalue), 1e-8);
        SolveOptions alt;
        alt.replaced_row = 0;
        const SteadyState st2 = solve_cycle(h, jumps, alt);
        add("steady_gauge_independence" + at, (st.rho - st2.rho).cwiseAbs().maxCoeff(), 1e-10);
    }

    {
        const double b = 0.5 * (b_lo + b_hi);
        const CMat l = assemble_liouvillian(lab_block_hamiltonian(sys, b, true), jumps);
        const CMat rho0 = CMat::Identity(kFullDim, kFullDim) / double(kFullDim);
        const SteadyState st = solve_cycle(lab_block_hamiltonian(sys, b, true), jumps);
        const PropagationResult p = propagate(l, rho0, 1e16, max_stable_step(l));
        add("propagation_agreement@mid", (p.rho - st.rho).cwiseAbs().maxCoeff(), 1e-6);
    }

    for (State s : {State::GS, State::ES}) {
        const double d = sys.d_mT(s), a = sys.hfc_mT(s)(2, 2), r = sys.gamma_n_over_gamma_e;
        const auto pos = lc_positions(d, a, r);
        const auto pairs = lc_pairs();
        double worst = 0.0;
        for (size_t k = 0; k < 8; ++k) {
            const auto e = analytic_energies(d, pos[k], a, r, sys.gamma_e());
            worst = std::max(worst, std::abs(e[static_cast<size_t>(pairs[k].first - 1)] -
                                             e[static_cast<size_t>(pairs[k].second - 1)]));
        }
        add(std::string(s == State::GS ? "GS" : "ES") + "_lc_positions_degenerate", worst, 1e-12);
    }
    return rows;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady-state spin simulator for spin-3/2 silicon vacancies in SiC", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string config_path, out_path, manifest_path, normalize;
    int threads = 1;
    const std::pair<const char*, const char*> commands[] = {
        {"pl-sweep", "PL intensity versus field"},
        {"pl-derivative", "dPL/dB versus field (central difference)"},
        {"odmr-freq", "ODMR (PL rf on - rf off) versus RF frequency"},
        {"odmr-field", "field-swept ODMR signal"},
        {"lc-atlas", "level-crossing catalog with mixing elements and numeric gaps"},
        {"validate", "invariant checks on the configured system"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--config", config_path, "JSON config (or a run manifest)")->check(CLI::ExistingFile);
        s->add_option("--out", out_path, "CSV output path (stdout if absent)");
        s->add_option("--manifest", manifest_path, "also write the run manifest as JSON here");
        s->add_option("--threads", threads, "worker threads; output does not depend on it")
            ->check(CLI::Range(1, 1024));
        s->add_option("--normalize", normalize, "none | max_abs | per_transition");
        subs.push_back(s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    std::string command;
    for (auto* s : subs)
        if (s->parsed()) command = s->get_name();

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!normalize.empty()) cfg.sweep.normalization = parse_normalization(normalize);
    } catch (const ConfigError& e) {
        err << kToolName << ": config error: " << e.what() << "\n";
        return 1;
    }
    cfg.model.threads = threads;

    Output o;
    try {
        if (command == "pl-sweep")
            o = field_output(pl_field_sweep(cfg.system, cfg.rates, field_sweep_spec(cfg), cfg.model), cfg);
        else if (command == "pl-derivative")
            o = field_output(pl_derivative_sweep(cfg.system, cfg.rates, field_sweep_spec(cfg), cfg.model), cfg);
        else if (command == "odmr-freq")
            o = frequency_output(odmr_frequency_sweep(cfg.system, cfg.rates, frequency_sweep_spec(cfg), cfg.model), cfg);
        else if (command == "odmr-field")
            o = field_output(odmr_field_sweep(cfg.system, cfg.rates, field_sweep_spec(cfg), cfg.model), cfg);
        else if (command == "lc-atlas")
            o = atlas_output(cfg);
        else
            o = validate_output(cfg);
    } catch (const SingularSystem& e) {
        err << kToolName << ": numerical failure: " << e.what();
        if (!std::isnan(e.abscissa)) err << " (at abscissa " << format_double(e.abscissa) << ")";
        err << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << kToolName << ": config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << kToolName << ": numerical failure: " << e.what() << "\n";
        return 2;
    }

    const std::string csv = render(command, cfg, o);
    const json man = manifest(command, cfg, o.diagnostics);
    if (out_path.empty()) {
        out << csv;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!(f << csv)) {
            err << kToolName << ": cannot write '" << out_path << "'\n";
            return 1;
        }
        out << man.dump(2) << "\n";
    }
    if (!manifest_path.empty()) {
        std::ofstream f(manifest_path, std::ios::binary);
        if (!(f << man.dump(2) << "\n")) {
            err << kToolName << ": cannot write '" << manifest_path << "'\n";
            return 1;
        }
    }
    if (!o.ok) {
        err << kToolName << ": validation failed\n";
        return 2;
    }
    return 0;
}

} // namespace vsi

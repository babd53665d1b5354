#include "vsi/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parallel.hpp"
#include "vsi/errors.hpp"

namespace vsi {

namespace {

struct PointValue {
    double value{0.0};
    double residual{0.0};
    double min_eig{0.0};
    int warnings{0};
    int constraints{1};
};

void absorb(PointValue& p, const SteadyState& s) {
    p.residual = std::max(p.residual, s.diag.residual_inf);
    p.min_eig = std::min(p.min_eig, s.diag.min_eigenvalue);
    p.warnings += s.diag.positivity_warning ? 1 : 0;
    p.constraints = std::max(p.constraints, s.diag.constraints);
}

template <class F>
SweepResult run_sweep(const SweepSpec& spec, const ModelOptions& opt, std::string quantity, F&& point,
                      const std::vector<std::pair<double, double>>& windows = {}) {
    validate(spec);
    SweepResult r;
    r.quantity = std::move(quantity);
    r.abscissa_name = spec.variable == SweepVariable::FieldMT ? "field_mT" : "rf_frequency_MHz";
    r.spec = spec;
    r.x = abscissas(spec);
    const auto pts = detail::parallel_map<PointValue>(spec.points, opt.threads, [&](int i) {
        try {
            return point(r.x[static_cast<size_t>(i)]);
        } catch (const SingularSystem& e) {
            throw SingularSystem(e.what(), r.x[static_cast<size_t>(i)]);
        }
    });
    r.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        r.raw.push_back(p.value);
        r.max_residual = std::max(r.max_residual, p.residual);
        r.min_eigenvalue = std::min(r.min_eigenvalue, p.min_eig);
        r.positivity_warnings += p.warnings;
        r.max_constraints = std::max(r.max_constraints, p.constraints);
    }
    r.value = normalize(r.x, r.raw, spec.normalization, windows);
    return r;
}

PointValue fresh() {
    PointValue p;
    p.min_eig = std::numeric_limits<double>::infinity();
    return p;
}

} // namespace

void validate(const SweepSpec& s) {
    if (!(s.start < s.stop)) throw std::invalid_argument("sweep needs start < stop");
    if (s.points < 2) throw std::invalid_argument("sweep needs at least two points");
    if (!(s.derivative_step_mT > 0.0)) throw std::invalid_argument("derivative step must be > 0");
    if (s.fixed.b_mT < 0.0 || s.fixed.b1_mT < 0.0) throw std::invalid_argument("fields must be >= 0");
    for (const auto& w : s.windows_MHz)
        if (!(w.first < w.second)) throw std::invalid_argument("window needs lo < hi");
}

std::vector<double> abscissas(const SweepSpec& s) {
    std::vector<double> x(static_cast<size_t>(s.points));
    const double step = (s.stop - s.start) / (s.points - 1);
    for (int i = 0; i < s.points; ++i) x[static_cast<size_t>(i)] = s.start + i * step;
    x.back() = s.stop;
    return x;
}

double pl_intensity(const CMat& rho, const RateScheme& rates) {
    double half = 0.0, three = 0.0;
    for (int nuc = 0; nuc < 2; ++nuc) {
        half += rho(basis_index(Block::ES, 0.5, nuc), basis_index(Block::ES, 0.5, nuc)).real() +
                rho(basis_index(Block::ES, -0.5, nuc), basis_index(Block::ES, -0.5, nuc)).real();
        three += rho(basis_index(Block::ES, 1.5, nuc), basis_index(Block::ES, 1.5, nuc)).real() +
                 rho(basis_index(Block::ES, -1.5, nuc), basis_index(Block::ES, -1.5, nuc)).real();
    }
    return rates.k1_fl * half + rates.k2_fl * three;
}

RelativeOdmr relative_odmr(const CMat& rho) {
    auto pop = [&](double sz) {
        double p = 0.0;
        for (int nuc = 0; nuc < 2; ++nuc) {
            const int i = basis_index(Block::GS, sz, nuc);
            p += rho(i, i).real();
        }
        return p;
    };
    RelativeOdmr r;
    r.s1 = pop(-1.5) - pop(-0.5);
    r.s2 = pop(1.5) - pop(0.5);
    r.degenerate = std::abs(r.s2) < 1e-14;
    r.ratio = r.degenerate ? std::numeric_limits<double>::quiet_NaN() : r.s1 / r.s2;
    return r;
}

SteadyState lab_steady_state(const SpinSystem& sys, const RateScheme& rates, double b_mT,
                             const ModelOptions& opt) {
    return solve_cycle(lab_block_hamiltonian(sys, b_mT, true), build_jump_operators(rates, opt.isc));
}

SteadyState rotating_steady_state(const SpinSystem& sys, const RateScheme& rates,
                                  const FieldConfig& field, const ModelOptions& opt) {
    return solve_cycle(rotating_block_hamiltonian(sys, field, opt.perturbations_in_odmr),
                       build_jump_operators(rates, opt.isc));
}

double pl_at_field(const SpinSystem& sys, const RateScheme& rates, double b_mT,
                   const ModelOptions& opt) {
    return pl_intensity(lab_steady_state(sys, rates, b_mT, opt).rho, rates);
}

namespace {

PointValue odmr_point(const SpinSystem& sys, const RateScheme& rates, const FieldConfig& field,
                      const ModelOptions& opt) {
    PointValue p = fresh();
    FieldConfig off = field;
    off.rf_on = false;
    off.b1_mT = 0.0;
    const SteadyState s_off = rotating_steady_state(sys, rates, off, opt);
    absorb(p, s_off);
    if (!(field.b1_mT > 0.0)) return p; // nothing is driven: exactly zero
    FieldConfig on = field;
    on.rf_on = true;
    const SteadyState s_on = rotating_steady_state(sys, rates, on, opt);
    absorb(p, s_on);
    p.value = pl_intensity(s_on.rho, rates) - pl_intensity(s_off.rho, rates);
    return p;
}

} // namespace

double odmr_signal(const SpinSystem& sys, const RateScheme& rates, const FieldConfig& field,
                   const ModelOptions& opt) {
    return odmr_point(sys, rates, field, opt).value;
}

SweepResult pl_field_sweep(const SpinSystem& sys, const RateScheme& rates, const SweepSpec& spec,
                           const ModelOptions& opt) {
    if (spec.variable != SweepVariable::FieldMT)
        throw std::invalid_argument("pl_field_sweep sweeps the field");
    return run_sweep(spec, opt, "pl_per_ns", [&](double b) {
        PointValue p = fresh();
        const SteadyState s = lab_steady_state(sys, rates, b, opt);
        absorb(p, s);
        p.value = pl_intensity(s.rho, rates);
        return p;
    });
}

SweepResult pl_derivative_sweep(const SpinSystem& sys, const RateScheme& rates,
                                const SweepSpec& spec, const ModelOptions& opt) {
    if (spec.variable != SweepVariable::FieldMT)
        throw std::invalid_argument("pl_derivative_sweep sweeps the field");
    const double db = spec.derivative_step_mT;
    return run_sweep(spec, opt, "dpl_db_per_ns_mT", [&](double b) {
        PointValue p = fresh();
        const SteadyState up = lab_steady_state(sys, rates, b + db, opt);
        const SteadyState dn = lab_steady_state(sys, rates, b - db, opt);
        absorb(p, up);
        absorb(p, dn);
        p.value = (pl_intensity(up.rho, rates) - pl_intensity(dn.rho, rates)) / (2.0 * db);
        return p;
    });
}

SweepResult odmr_frequency_sweep(const SpinSystem& sys, const RateScheme& rates,
                                 const SweepSpec& spec, const ModelOptions& opt) {
    if (spec.variable != SweepVariable::RfFrequencyMHz)
        throw std::invalid_argument("odmr_frequency_sweep sweeps the RF frequency");
    auto windows = spec.windows_MHz;
    if (windows.empty() && spec.normalization == Normalization::PerTransition)
        windows = default_windows_MHz(sys, spec);
    return run_sweep(
        spec, opt, "odmr_pl_difference_per_ns",
        [&](double f) {
            FieldConfig field = spec.fixed;
            field.omega_rf = mhz_to_rad_ns(f);
            return odmr_point(sys, rates, field, opt);
        },
        windows);
}

SweepResult odmr_field_sweep(const SpinSystem& sys, const RateScheme& rates,
                             const SweepSpec& spec, const ModelOptions& opt) {
    if (spec.variable != SweepVariable::FieldMT)
        throw std::invalid_argument("odmr_field_sweep sweeps the field");
    if (opt.odmr_field_method == OdmrFieldMethod::PopulationRatio) {
        return run_sweep(spec, opt, "population_ratio_s1_over_s2", [&](double b) {
            PointValue p = fresh();
            const SteadyState s = lab_steady_state(sys, rates, b, opt);
            absorb(p, s);
            const RelativeOdmr r = relative_odmr(s.rho);
            if (r.degenerate)
                throw std::runtime_error("population ratio undefined: |S2| < 1e-14 at B = " +
                                         std::to_string(b) + " mT");
            p.value = r.ratio;
            return p;
        });
    }
    return run_sweep(spec, opt, "odmr_pl_difference_per_ns", [&](double b) {
        FieldConfig field = spec.fixed;
        field.b_mT = b;
        return odmr_point(sys, rates, field, opt);
    });
}

std::vector<std::pair<double, double>> default_windows_MHz(const SpinSystem& sys,
                                                           const SweepSpec& spec) {
    const double fg = rad_ns_to_mhz(2.0 * sys.to_rad_ns(sys.d_gs_mT));
    const double fe = rad_ns_to_mhz(2.0 * sys.to_rad_ns(sys.d_es_mT));
    const double split = std::sqrt(std::abs(fg * fe));
    return {{spec.start, split}, {split, spec.stop}};
}

std::vector<double> normalize(const std::vector<double>& x, const std::vector<double>& raw,
                              Normalization mode,
                              const std::vector<std::pair<double, double>>& windows) {
    auto max_abs = [&](double lo, double hi) {
        double m = 0.0;
        for (size_t i = 0; i < raw.size(); ++i)
            if (x[i] >= lo && x[i] <= hi) m = std::max(m, std::abs(raw[i]));
        return m;
    };
    const double inf = std::numeric_limits<double>::infinity();
    const double global = max_abs(-inf, inf);
    std::vector<double> out = raw;
    if (mode == Normalization::None) return out;
    for (size_t i = 0; i < raw.size(); ++i) {
        double scale = global;
        if (mode == Normalization::PerTransition) {
            for (const auto& w : windows)
                if (x[i] >= w.first && x[i] <= w.second) {
                    scale = max_abs(w.first, w.second);
                    break;
                }
        }
        if (scale > 0.0) out[i] = raw[i] / scale;
    }
    return out;
}

} // namespace vsi

#include "vsi/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "vsi/errors.hpp"

namespace vsi {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where, std::set<std::string> allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(where + ": not finite");
    return v;
}

void read(const json& o, const char* key, double& out, const std::string& where) {
    if (o.contains(key)) out = number(o.at(key), where + "." + key);
}

void read(const json& o, const char* key, bool& out, const std::string& where) {
    if (!o.contains(key)) return;
    if (!o.at(key).is_boolean()) throw ConfigError(where + "." + key + ": expected true/false");
    out = o.at(key).get<bool>();
}

std::string text(const json& o, const char* key, const std::string& where) {
    if (!o.at(key).is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return o.at(key).get<std::string>();
}

std::array<double, 3> triple(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected 3 numbers");
    return {number(j[0], where + "[0]"), number(j[1], where + "[1]"), number(j[2], where + "[2]")};
}

// number -> isotropic, [3] -> principal values, [[3],[3],[3]] -> full tensor
Eigen::Matrix3d hfc_tensor(const json& j, const std::string& where) {
    if (j.is_number()) return Eigen::Matrix3d::Identity() * number(j, where);
    if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected number, [3] or 3x3");
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    if (j[0].is_array()) {
        for (int r = 0; r < 3; ++r) {
            const auto row = triple(j[static_cast<size_t>(r)], where + "[" + std::to_string(r) + "]");
            for (int c = 0; c < 3; ++c) a(r, c) = row[static_cast<size_t>(c)];
        }
        if ((a - a.transpose()).cwiseAbs().maxCoeff() > 0.0)
            throw ConfigError(where + ": hyperfine tensor must be symmetric");
    } else {
        const auto d = triple(j, where);
        for (int k = 0; k < 3; ++k) a(k, k) = d[static_cast<size_t>(k)];
    }
    return a;
}

json tensor_json(const Eigen::Matrix3d& a) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({a(r, 0), a(r, 1), a(r, 2)});
    return rows;
}

const char* isc_name(IscAssignment i) { return i == IscAssignment::ByGroup ? "by_spin_group" : "swapped"; }

const char* method_name(OdmrFieldMethod m) {
    return m == OdmrFieldMethod::PopulationRatio ? "population_ratio" : "pl_difference";
}

} // namespace

std::string normalization_name(Normalization n) {
    switch (n) {
    case Normalization::None: return "none";
    case Normalization::MaxAbs: return "max_abs";
    case Normalization::PerTransition: return "per_transition";
    }
    return "?";
}

Normalization parse_normalization(const std::string& s) {
    if (s == "none") return Normalization::None;
    if (s == "max_abs") return Normalization::MaxAbs;
    if (s == "per_transition") return Normalization::PerTransition;
    throw ConfigError("normalization must be none, max_abs or per_transition, got '" + s + "'");
}

RunConfig parse_config(const json& root) {
    if (root.is_object() && root.contains("config")) return parse_config(root.at("config"));

    RunConfig c;
    require_object(root, "config", {"system", "rates_per_ns", "sweep", "model"});

    if (root.contains("system")) {
        const json& s = root.at("system");
        const std::string w = "system";
        require_object(s, w,
                       {"d_gs_mT", "d_es_mT", "g_par", "g_perp", "hfc_gs_mT", "hfc_es_mT",
                        "gamma_n_over_gamma_e", "theta_deg"});
        auto& sys = c.system;
        read(s, "d_gs_mT", sys.d_gs_mT, w);
        read(s, "d_es_mT", sys.d_es_mT, w);
        if (s.contains("g_par")) {
            const auto g = triple(s.at("g_par"), w + ".g_par");
            sys.g_par_1 = g[0], sys.g_par_2 = g[1], sys.g_par_3 = g[2];
        }
        if (s.contains("g_perp")) {
            const auto g = triple(s.at("g_perp"), w + ".g_perp");
            sys.g_perp_1 = g[0], sys.g_perp_2 = g[1], sys.g_perp_3 = g[2];
        }
        if (s.contains("hfc_gs_mT")) sys.hfc_gs_mT = hfc_tensor(s.at("hfc_gs_mT"), w + ".hfc_gs_mT");
        if (s.contains("hfc_es_mT")) sys.hfc_es_mT = hfc_tensor(s.at("hfc_es_mT"), w + ".hfc_es_mT");
        read(s, "gamma_n_over_gamma_e", sys.gamma_n_over_gamma_e, w);
        read(s, "theta_deg", c.theta_deg, w);
        if (sys.g_par_1 == 0.0) throw ConfigError("system.g_par[0] must be nonzero");
    }
    c.system.theta_rad = c.theta_deg * std::numbers::pi / 180.0;

    if (root.contains("rates_per_ns")) {
        const json& r = root.at("rates_per_ns");
        const std::string w = "rates_per_ns";
        require_object(r, w, {"pump_i", "k1_fl", "k2_fl", "k1_isc", "k2_isc", "kprime_isc"});
        read(r, "pump_i", c.rates.pump_i, w);
        read(r, "k1_fl", c.rates.k1_fl, w);
        read(r, "k2_fl", c.rates.k2_fl, w);
        read(r, "k1_isc", c.rates.k1_isc, w);
        read(r, "k2_isc", c.rates.k2_isc, w);
        read(r, "kprime_isc", c.rates.kprime_isc, w);
    }
    try {
        validate(c.rates);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("rates_per_ns: ") + e.what());
    }

    if (root.contains("sweep")) {
        const json& s = root.at("sweep");
        const std::string w = "sweep";
        require_object(s, w,
                       {"field_start_mT", "field_stop_mT", "freq_start_MHz", "freq_stop_MHz", "points",
                        "b_mT", "b1_mT", "rf_frequency_MHz", "derivative_step_mT", "normalization",
                        "windows_MHz"});
        auto& sw = c.sweep;
        read(s, "field_start_mT", sw.field_start_mT, w);
        read(s, "field_stop_mT", sw.field_stop_mT, w);
        read(s, "freq_start_MHz", sw.freq_start_MHz, w);
        read(s, "freq_stop_MHz", sw.freq_stop_MHz, w);
        if (s.contains("points")) {
            if (!s.at("points").is_number_integer()) throw ConfigError("sweep.points: expected an integer");
            sw.points = s.at("points").get<int>();
        }
        read(s, "b_mT", sw.b_mT, w);
        read(s, "b1_mT", sw.b1_mT, w);
        read(s, "rf_frequency_MHz", sw.rf_frequency_MHz, w);
        read(s, "derivative_step_mT", sw.derivative_step_mT, w);
        if (s.contains("normalization")) sw.normalization = parse_normalization(text(s, "normalization", w));
        if (s.contains("windows_MHz")) {
            const json& ws = s.at("windows_MHz");
            if (!ws.is_array()) throw ConfigError("sweep.windows_MHz: expected a list of [lo, hi]");
            for (size_t i = 0; i < ws.size(); ++i) {
                const std::string wi = "sweep.windows_MHz[" + std::to_string(i) + "]";
                if (!ws[i].is_array() || ws[i].size() != 2) throw ConfigError(wi + ": expected [lo, hi]");
                sw.windows_MHz.emplace_back(number(ws[i][0], wi), number(ws[i][1], wi));
            }
        }
    }
    {
        const auto& sw = c.sweep;
        if (sw.points < 2) throw ConfigError("sweep.points must be >= 2");
        if (!(sw.field_start_mT < sw.field_stop_mT)) throw ConfigError("sweep: field_start_mT < field_stop_mT required");
        if (!(sw.freq_start_MHz < sw.freq_stop_MHz)) throw ConfigError("sweep: freq_start_MHz < freq_stop_MHz required");
        if (!(sw.derivative_step_mT > 0.0)) throw ConfigError("sweep.derivative_step_mT must be > 0");
        if (sw.b_mT < 0.0 || sw.b1_mT < 0.0) throw ConfigError("sweep: b_mT and b1_mT must be >= 0");
        for (const auto& wnd : sw.windows_MHz)
            if (!(wnd.first < wnd.second)) throw ConfigError("sweep.windows_MHz: lo < hi required");
    }

    if (root.contains("model")) {
        const json& m = root.at("model");
        const std::string w = "model";
        require_object(m, w, {"isc_assignment", "perturbations_in_odmr", "odmr_field_method"});
        if (m.contains("isc_assignment")) {
            const auto v = text(m, "isc_assignment", w);
            if (v == "by_spin_group") c.model.isc = IscAssignment::ByGroup;
            else if (v == "swapped") c.model.isc = IscAssignment::Swapped;
            else throw ConfigError("model.isc_assignment must be by_spin_group or swapped");
        }
        read(m, "perturbations_in_odmr", c.model.perturbations_in_odmr, w);
        if (m.contains("odmr_field_method")) {
            const auto v = text(m, "odmr_field_method", w);
            if (v == "population_ratio") c.model.odmr_field_method = OdmrFieldMethod::PopulationRatio;
            else if (v == "pl_difference") c.model.odmr_field_method = OdmrFieldMethod::PlDifference;
            else throw ConfigError("model.odmr_field_method must be population_ratio or pl_difference");
        }
    }
    return c;
}

RunConfig parse_config_text(const std::string& t) {
    json j;
    try {
        j = json::parse(t);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json to_json(const RunConfig& c) {
    const auto& s = c.system;
    const auto& r = c.rates;
    const auto& w = c.sweep;
    json windows = json::array();
    for (const auto& [lo, hi] : w.windows_MHz) windows.push_back({lo, hi});
    return {
        {"system",
         {{"d_gs_mT", s.d_gs_mT},
          {"d_es_mT", s.d_es_mT},
          {"g_par", {s.g_par_1, s.g_par_2, s.g_par_3}},
          {"g_perp", {s.g_perp_1, s.g_perp_2, s.g_perp_3}},
          {"hfc_gs_mT", tensor_json(s.hfc_gs_mT)},
          {"hfc_es_mT", tensor_json(s.hfc_es_mT)},
          {"gamma_n_over_gamma_e", s.gamma_n_over_gamma_e},
          {"theta_deg", c.theta_deg}}},
        {"rates_per_ns",
         {{"pump_i", r.pump_i},
          {"k1_fl", r.k1_fl},
          {"k2_fl", r.k2_fl},
          {"k1_isc", r.k1_isc},
          {"k2_isc", r.k2_isc},
          {"kprime_isc", r.kprime_isc}}},
        {"sweep",
         {{"field_start_mT", w.field_start_mT},
          {"field_stop_mT", w.field_stop_mT},
          {"freq_start_MHz", w.freq_start_MHz},
          {"freq_stop_MHz", w.freq_stop_MHz},
          {"points", w.points},
          {"b_mT", w.b_mT},
          {"b1_mT", w.b1_mT},
          {"rf_frequency_MHz", w.rf_frequency_MHz},
          {"derivative_step_mT", w.derivative_step_mT},
          {"normalization", normalization_name(w.normalization)},
          {"windows_MHz", windows}}},
        {"model",
         {{"isc_assignment", isc_name(c.model.isc)},
          {"perturbations_in_odmr", c.model.perturbations_in_odmr},
          {"odmr_field_method", method_name(c.model.odmr_field_method)}}},
    };
}

SweepSpec field_sweep_spec(const RunConfig& c) {
    SweepSpec s;
    s.variable = SweepVariable::FieldMT;
    s.start = c.sweep.field_start_mT;
    s.stop = c.sweep.field_stop_mT;
    s.points = c.sweep.points;
    s.fixed = {0.0, c.sweep.b1_mT, mhz_to_rad_ns(c.sweep.rf_frequency_MHz), true};
    s.derivative_step_mT = c.sweep.derivative_step_mT;
    s.normalization = c.sweep.normalization;
    return s;
}

SweepSpec frequency_sweep_spec(const RunConfig& c) {
    SweepSpec s;
    s.variable = SweepVariable::RfFrequencyMHz;
    s.start = c.sweep.freq_start_MHz;
    s.stop = c.sweep.freq_stop_MHz;
    s.points = c.sweep.points;
    s.fixed = {c.sweep.b_mT, c.sweep.b1_mT, 0.0, true};
    s.derivative_step_mT = c.sweep.derivative_step_mT;
    s.normalization = c.sweep.normalization;
    s.windows_MHz = c.sweep.windows_MHz;
    return s;
}

} // namespace vsi

#include "floerlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace floerlab {

namespace {

using nlohmann::json;

// narrow typed getters with path-carrying errors
template <typename T>
T get_or(const json& j, const std::string& key, const std::string& path, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(path.empty() ? key : path + "." + key, "wrong type");
    }
}

CouplingSpec coupling_from_json(const json& j, const std::string& path) {
    CouplingSpec c;
    c.kappa = get_or<double>(j, "kappa", path, 1.0);
    c.atan_amp = get_or<double>(j, "atan_amp", path, 0.0);
    if (j.contains("poly")) {
        if (!j.at("poly").is_array()) throw ValidationError(path + ".poly", "must be an array");
        std::size_t idx = 0;
        for (const auto& pj : j.at("poly")) {
            std::string p = path + ".poly[" + std::to_string(idx++) + "]";
            FourierCoeff fc;
            fc.c0 = get_or<double>(pj, "c0", p, 0.0);
            if (pj.contains("harm")) {
                for (const auto& hj : pj.at("harm")) {
                    if (!hj.is_array() || hj.size() != 2)
                        throw ValidationError(p + ".harm", "entries must be [cos_amp, sin_amp]");
                    fc.harm.emplace_back(hj[0].get<double>(), hj[1].get<double>());
                }
            }
            c.poly.push_back(std::move(fc));
        }
    } else {
        c.poly.resize(2);
        c.poly[1].c0 = 1.0;  // default f(r) = kappa * r
    }
    if (j.contains("external")) {
        std::size_t idx = 0;
        for (const auto& ej : j.at("external")) {
            std::string p = path + ".external[" + std::to_string(idx++) + "]";
            CouplingSpec::ExtTerm e;
            if (!ej.contains("n") || !ej.at("n").is_array() || ej.at("n").empty() ||
                ej.at("n").size() > 4)
                throw ValidationError(p + ".n", "lattice vector of length 1..4 required");
            for (std::size_t i = 0; i < ej.at("n").size(); ++i)
                e.n[i] = ej.at("n")[i].get<int>();
            e.m = get_or<int>(ej, "m", p, 0);
            e.amp = get_or<double>(ej, "amp", p, 0.0);
            e.cos_x = get_or<bool>(ej, "cos_x", p, true);
            e.cos_t = get_or<bool>(ej, "cos_t", p, true);
            c.external.push_back(e);
        }
    }
    return c;
}

json coupling_to_json(const CouplingSpec& c) {
    json j;
    j["kappa"] = c.kappa;
    j["atan_amp"] = c.atan_amp;
    j["poly"] = json::array();
    for (const auto& fc : c.poly) {
        json pj;
        pj["c0"] = fc.c0;
        pj["harm"] = json::array();
        for (const auto& h : fc.harm) pj["harm"].push_back({h.first, h.second});
        j["poly"].push_back(pj);
    }
    j["external"] = json::array();
    for (const auto& e : c.external) {
        json ej;
        ej["n"] = {e.n[0], e.n[1], e.n[2], e.n[3]};
        ej["m"] = e.m;
        ej["amp"] = e.amp;
        ej["cos_x"] = e.cos_x;
        ej["cos_t"] = e.cos_t;
        j["external"].push_back(ej);
    }
    return j;
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    std::string model = get_or<std::string>(j, "model", "", "wave");
    if (model == "wave")
        c.spec.kind = ModelKind::wave;
    else if (model == "schrodinger")
        c.spec.kind = ModelKind::schrodinger;
    else
        throw ValidationError("model", "must be \"wave\" or \"schrodinger\"");
    c.spec.N = get_or<int>(j, "N", "", 1);
    c.spec.a = get_or<int>(j, "a", "", 1);
    // default period: 2*pi*(golden - 1), an irrational multiple of 2*pi
    c.spec.T = get_or<double>(j, "T", "", 2.0 * kPi * 0.6180339887498949);
    c.spec.h = get_or<double>(j, "h", "", 6.0);
    c.spec.k = get_or<int>(j, "k", "", 2);
    c.n_max = get_or<int>(j, "n_max", "", 8);
    if (c.n_max < 1) throw ValidationError("n_max", "must be >= 1");
    c.m_max = get_or<int>(j, "m_max", "", -1);
    if (j.contains("h_prime")) {
        c.spec.h_prime = j.at("h_prime").get<double>();
    } else {
        // default h' = (h0_est + h)/2 from the fitted decay on this lattice
        ModelSpec probe = c.spec;
        probe.h_prime = c.spec.h / 2.0;  // placeholder to pass validate() below
        ModeSet modes = build_lattice(probe, c.n_max);
        SpectrumReport rep = admissibility_profile(probe, modes, {});
        c.spec.h_prime = 0.5 * (rep.h0_floor + c.spec.h);
        if (!(c.spec.h_prime < c.spec.h)) c.spec.h_prime = 0.75 * c.spec.h;
    }
    try {
        c.spec.validate();
    } catch (const ValidationError&) {
        throw;  // already carries the field name
    }
    if (get_or<bool>(j, "include_zero_mode", "", false) && c.spec.zero_mean())
        throw ValidationError("include_zero_mode",
                              "model is posed on zero-mean data; the zero mode is excluded");
    if (c.m_max < 0) c.m_max = 4 * int(std::lround(std::pow(double(c.n_max), c.spec.d())));
    if (c.m_max < 1) throw ValidationError("m_max", "must be >= 1");
    c.coupling =
        j.contains("coupling") ? coupling_from_json(j.at("coupling"), "coupling") : CouplingSpec::linear(1.0);
    c.sigma = get_or<double>(j, "sigma", "", 0.5);
    if (c.sigma <= 0.0) throw ValidationError("sigma", "must be positive");
    c.tol = get_or<double>(j, "tol", "", 1e-10);
    c.max_iter = get_or<int>(j, "max_iter", "", 30);
    c.ell = get_or<int>(j, "ell", "", -1);
    if (c.ell < 0) c.ell = c.n_max;
    if (j.contains("ell_sweep"))
        for (const auto& e : j.at("ell_sweep")) c.ell_sweep.push_back(e.get<int>());
    else
        for (int e = 1; e <= c.n_max; e *= 2) c.ell_sweep.push_back(e);
    c.s_half_width = get_or<double>(j, "s_half_width", "", 8.0);
    c.ds = get_or<double>(j, "ds", "", 0.25);
    if (c.ds <= 0.0 || c.s_half_width <= 0.0)
        throw ValidationError(c.ds <= 0.0 ? "ds" : "s_half_width", "must be positive");
    if (j.contains("h_values"))
        for (const auto& e : j.at("h_values")) c.h_values.push_back(e.get<double>());
    else
        c.h_values = {c.spec.h_prime, c.spec.h};
    c.seed = get_or<unsigned long long>(j, "seed", "", 12345);
    c.out_dir = get_or<std::string>(j, "out", "", "runs");

    json r = model_to_json(c.spec, c.n_max, c.m_max);
    r["coupling"] = coupling_to_json(c.coupling);
    r["sigma"] = c.sigma;
    r["tol"] = c.tol;
    r["max_iter"] = c.max_iter;
    r["ell"] = c.ell;
    r["ell_sweep"] = c.ell_sweep;
    r["s_half_width"] = c.s_half_width;
    r["ds"] = c.ds;
    r["h_values"] = c.h_values;
    r["seed"] = c.seed;
    r["out"] = c.out_dir;
    c.resolved = std::move(r);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);  // parse_error propagates
    return config_from_json(j);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const RunConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(c.resolved.dump())));
    return buf;
}

nlohmann::json meta_json(const RunConfig& c) {
    nlohmann::json m;
    m["version"] = FLOERLAB_VERSION;
    m["config_hash"] = config_hash(c);
    return m;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("output", "cannot write " + path);
    out << j.dump(2) << "\n";
}

void write_container(const std::string& path, const nlohmann::json& header,
                     const std::vector<double>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("output", "cannot write " + path);
    std::string h = header.dump();
    std::uint64_t len = h.size();
    unsigned char lb[8];
    for (int i = 0; i < 8; ++i) lb[i] = (len >> (8 * i)) & 0xff;  // little endian
    out.write(reinterpret_cast<const char*>(lb), 8);
    out.write(h.data(), std::streamsize(h.size()));
    // doubles written as-is; this toolkit targets little-endian hosts
    out.write(reinterpret_cast<const char*>(data.data()),
              std::streamsize(data.size() * sizeof(double)));
}

std::pair<nlohmann::json, std::vector<double>> read_container(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("input", "cannot open " + path);
    unsigned char lb[8];
    in.read(reinterpret_cast<char*>(lb), 8);
    if (!in) throw ValidationError("input", "truncated container " + path);
    std::uint64_t len = 0;
    for (int i = 0; i < 8; ++i) len |= std::uint64_t(lb[i]) << (8 * i);
    std::string h(len, '\0');
    in.read(h.data(), std::streamsize(len));
    if (!in) throw ValidationError("input", "truncated container header " + path);
    nlohmann::json header = nlohmann::json::parse(h);
    std::vector<double> data;
    double v;
    while (in.read(reinterpret_cast<char*>(&v), sizeof(double))) data.push_back(v);
    return {header, data};
}

namespace {
std::string meta_comment(const nlohmann::json& meta) {
    std::ostringstream os;
    os << "# version=" << meta.value("version", "?")
       << " config_hash=" << meta.value("config_hash", "?");
    return os.str();
}
}  // namespace

void write_spectrum_csv(const std::string& path, const SpectrumReport& rep, double h_used,
                        const nlohmann::json& meta) {
    std::ofstream out(path);
    if (!out) throw ValidationError("output", "cannot write " + path);
    out << meta_comment(meta) << "\n";
    out << "shell,theta_min,eps_min,eps_min_times_theta_pow_h\n";
    out.precision(17);
    for (const auto& s : rep.shells) {
        if (s.empty) continue;
        out << s.j << "," << s.theta_at_min << "," << s.eps_min << ","
            << s.eps_min * std::pow(s.theta_at_min, h_used) << "\n";
    }
}

void write_loop_csv(const std::string& path, const LoopBasis& b, const Eigen::VectorXd& xi,
                    const nlohmann::json& meta) {
    std::ofstream out(path);
    if (!out) throw ValidationError("output", "cannot write " + path);
    out << meta_comment(meta) << "\n";
    const int N = b.spec.N;
    for (int c = 0; c < N; ++c) out << "n" << c << ",";
    out << "m,re,im\n";
    out.precision(17);
    for (std::size_t i = 0; i < b.modes.size(); ++i)
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            for (int c = 0; c < N; ++c) out << b.modes.lattice[i][std::size_t(c)] << ",";
            out << m << "," << xi[b.fidx(int(i), m, 0)] << "," << xi[b.fidx(int(i), m, 1)]
                << "\n";
        }
}

nlohmann::json verification_to_json(const VerificationReport& rep, const nlohmann::json& meta) {
    nlohmann::json j = meta;
    j["suite"] = rep.suite;
    j["norm_pair"] = rep.norm_pair;
    j["pass"] = rep.pass;
    j["cases"] = nlohmann::json::array();
    for (const auto& c : rep.cases) {
        nlohmann::json cj;
        cj["label"] = c.label;
        cj["value"] = c.value;
        cj["bound"] = c.bound;
        cj["margin"] = c.margin;
        cj["pass"] = c.pass;
        j["cases"].push_back(cj);
    }
    j["metrics"] = nlohmann::json::object();
    for (const auto& m : rep.metrics) j["metrics"][m.first] = m.second;
    if (rep.trend.valid) {
        j["trend"]["slope"] = rep.trend.slope;
        j["trend"]["r2"] = rep.trend.r2;
    }
    return j;
}

void write_trend_csv(const std::string& path, const VerificationReport& rep,
                     const nlohmann::json& meta) {
    std::ofstream out(path);
    if (!out) throw ValidationError("output", "cannot write " + path);
    out << meta_comment(meta) << "\n";
    out << "label,value,bound,margin,pass\n";
    out.precision(17);
    for (const auto& c : rep.cases)
        out << c.label << "," << c.value << "," << c.bound << "," << c.margin << ","
            << (c.pass ? 1 : 0) << "\n";
}

nlohmann::json spectrum_to_json(const SpectrumReport& rep, const nlohmann::json& meta) {
    nlohmann::json j = meta;
    j["theta_normalization"] = rep.theta_normalization;
    j["marker"] = rep.marker;
    j["fitted_h0"] = rep.fitted_h0;
    j["fitted_h0_stderr"] = rep.fitted_h0_stderr;
    j["fitted_c"] = rep.fitted_c;
    j["fit_r2"] = rep.fit_r2;
    j["h0_floor"] = rep.h0_floor;
    j["resonant"] = rep.resonant;
    j["admissible"] = rep.admissible;
    j["h_values"] = rep.h_values;
    j["overall_min_eps_theta_pow_h"] = rep.overall_min_eps_theta_pow_h;
    j["shells"] = nlohmann::json::array();
    for (const auto& s : rep.shells) {
        if (s.empty) continue;
        nlohmann::json sj;
        sj["j"] = s.j;
        sj["theta_at_min"] = s.theta_at_min;
        sj["eps_min"] = s.eps_min;
        j["shells"].push_back(sj);
    }
    return j;
}

nlohmann::json model_to_json(const ModelSpec& spec, int n_max, int m_max) {
    nlohmann::json j;
    j["model"] = to_string(spec.kind);
    j["N"] = spec.N;
    j["a"] = spec.a;
    j["T"] = spec.T;
    j["d"] = spec.d();
    j["h"] = spec.h;
    j["h_prime"] = spec.h_prime;
    j["k"] = spec.k;
    j["n_max"] = n_max;
    j["m_max"] = m_max;
    return j;
}

}  // namespace floerlab

#include "hem/params.hpp"

#include <cmath>
#include <sstream>

#include "hem/toml_lite.hpp"

namespace hem {

void Params::validate() const {
    if (!(gamma > 0.0) || !(gamma < 2.0))
        throw ConfigError("gamma must lie in (0, 2), got " + std::to_string(gamma));
    if (!(mu >= 0.0)) throw ConfigError("mu must be >= 0, got " + std::to_string(mu));
    if (!(mu_l >= 0.0)) throw ConfigError("mu_l must be >= 0, got " + std::to_string(mu_l));
    if (!(mu_r >= 0.0)) throw ConfigError("mu_r must be >= 0, got " + std::to_string(mu_r));
    if (!std::isfinite(gamma) || !std::isfinite(mu) || !std::isfinite(mu_l) || !std::isfinite(mu_r))
        throw ConfigError("couplings must be finite");
}

KacLabel KacLabel::parse(const std::string& text) {
    // accepted forms: "r,s" (primary branch) or "r,s,+" / "r,s,-"
    KacLabel out;
    std::string t;
    for (char c : text)
        if (c != ' ' && c != '\t') t += c;
    std::istringstream is(t);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(is, part, ',')) parts.push_back(part);
    if (parts.size() != 2 && parts.size() != 3)
        throw ConfigError("kac label must be 'r,s' or 'r,s,sign', got '" + text + "'");
    try {
        size_t used = 0;
        out.r = std::stoi(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("trailing");
        out.s = std::stoi(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ConfigError("kac label indices must be integers, got '" + text + "'");
    }
    if (out.r < 1 || out.s < 1)
        throw ConfigError("kac label indices must be positive, got '" + text + "'");
    out.sign = -1;
    if (parts.size() == 3) {
        if (parts[2] == "+")
            out.sign = +1;
        else if (parts[2] == "-")
            out.sign = -1;
        else
            throw ConfigError("kac label sign must be '+' or '-', got '" + parts[2] + "'");
    }
    return out;
}

std::string KacLabel::str() const {
    std::ostringstream os;
    os << r << "," << s << "," << (sign > 0 ? '+' : '-');
    return os.str();
}

double kac_alpha_rs(double gamma, int r, int s) {
    return (1 - r) * gamma / 2.0 + (1 - s) * 2.0 / gamma;
}

double kac_alpha(const Params& p, const KacLabel& label) {
    double a = kac_alpha_rs(p.gamma, label.r, label.s);
    if (label.sign > 0) return 2.0 * p.Q() - a;  // reflected branch, same conformal weight
    return a;
}

std::complex<double> delta_weight(const Params& p, std::complex<double> alpha) {
    return (alpha / 2.0) * (p.Q() - alpha / 2.0);
}

Phase classify_phase(double gamma) {
    const double thr = std::sqrt(2.0);
    if (std::abs(gamma - thr) <= eps_phase) return Phase::critical;
    return gamma < thr ? Phase::subcritical : Phase::supercritical;
}

const char* phase_name(Phase ph) {
    switch (ph) {
        case Phase::subcritical: return "subcritical";
        case Phase::critical: return "critical";
        case Phase::supercritical: return "supercritical";
    }
    return "?";
}

Params params_from_toml_text(const std::string& text) {
    toml::Table t = toml::parse(text);
    Params p;
    auto it = t.find("params");
    if (it == t.end()) {
        // also accept a bare top-level table for convenience
        it = t.find("");
        if (it == t.end()) throw ConfigError("config must contain a [params] section");
    }
    auto get = [&](const char* key, double& dst) {
        auto kt = it->second.find(key);
        if (kt == it->second.end()) return;
        const toml::Value& v = kt->second;
        if (v.kind == toml::Value::Kind::real)
            dst = v.d;
        else if (v.kind == toml::Value::Kind::integer)
            dst = static_cast<double>(v.i);
        else
            throw ConfigError(std::string("params.") + key + " must be a number");
    };
    get("gamma", p.gamma);
    get("mu", p.mu);
    get("mu_l", p.mu_l);
    get("mu_r", p.mu_r);
    for (auto& [key, v] : it->second) {
        (void)v;
        if (key != "gamma" && key != "mu" && key != "mu_l" && key != "mu_r")
            throw ConfigError("unknown key params." + key);
    }
    p.validate();
    return p;
}

std::string params_to_toml_text(const Params& p) {
    toml::Table t;
    t["params"]["gamma"] = toml::Value::of(p.gamma);
    t["params"]["mu"] = toml::Value::of(p.mu);
    t["params"]["mu_l"] = toml::Value::of(p.mu_l);
    t["params"]["mu_r"] = toml::Value::of(p.mu_r);
    return toml::serialize(t);
}

}  // namespace hem

#include "hetren/cycle_model.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace hetren {

namespace {

using nlohmann::json;

QuadForms forms_from_json(const json& j, const char* key) {
    if (!j.contains(key)) return kZeroForms;
    QuadForms f = kZeroForms;
    const json& arr = j.at(key);
    if (!arr.is_array() || arr.size() != 3)
        throw ConfigError(std::string(key) + " must be a 3x3x3 nested array");
    for (int i = 0; i < 3; ++i) {
        const json& block = arr.at(i);
        if (!block.is_array() || block.size() != 3)
            throw ConfigError(std::string(key) + " must be a 3x3x3 nested array");
        for (int r = 0; r < 3; ++r) {
            const json& row = block.at(r);
            if (!row.is_array() || row.size() != 3)
                throw ConfigError(std::string(key) + " must be a 3x3x3 nested array");
            for (int c = 0; c < 3; ++c) f[i][r][c] = row.at(c).get<double>();
        }
    }
    return f;
}

json forms_to_json(const QuadForms& f) {
    json arr = json::array();
    for (int i = 0; i < 3; ++i) {
        json block = json::array();
        for (int r = 0; r < 3; ++r) block.push_back({f[i][r][0], f[i][r][1], f[i][r][2]});
        arr.push_back(block);
    }
    return arr;
}

double req(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("config missing field '") + key + "'");
    return j.at(key).get<double>();
}

}  // namespace

ModelConfig model_config_from_json(const std::string& text, bool run_validate) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
    ModelConfig cfg;
    try {
        cfg.spectrum.lambda_P = req(j, "lambda_P");
        cfg.spectrum.sigma_P = req(j, "sigma_P");
        cfg.spectrum.phi_P = req(j, "phi_P");
        cfg.spectrum.lambda_Q = req(j, "lambda_Q");
        cfg.spectrum.sigma_Q = req(j, "sigma_Q");
        cfg.spectrum.phi_Q = req(j, "phi_Q");
        cfg.qp.alpha1 = req(j, "alpha1");
        cfg.qp.alpha2 = req(j, "alpha2");
        cfg.qp.alpha3 = req(j, "alpha3");
        cfg.qp.beta2 = req(j, "beta2");
        cfg.qp.gamma3 = req(j, "gamma3");
        cfg.qp.hqp = forms_from_json(j, "hqp");
        cfg.pq.a1 = req(j, "a1");
        cfg.pq.a2 = req(j, "a2");
        cfg.pq.a3 = req(j, "a3");
        cfg.pq.b1 = req(j, "b1");
        cfg.pq.b2 = req(j, "b2");
        cfg.pq.b3 = req(j, "b3");
        cfg.pq.b4 = req(j, "b4");
        cfg.pq.c1 = req(j, "c1");
        cfg.pq.c2 = req(j, "c2");
        cfg.pq.hpq = forms_from_json(j, "hpq");
        if (j.contains("rho")) cfg.rho = j.at("rho").get<double>();
        if (j.contains("trans_halfwidth")) cfg.trans_halfwidth = j.at("trans_halfwidth").get<double>();
        if (j.contains("r")) cfg.r = j.at("r").get<int>();
        if (j.contains("precision"))
            cfg.precision = precision_from_string(j.at("precision").get<std::string>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config JSON field error: ") + e.what());
    }
    if (run_validate) cfg.validate();
    return cfg;
}

std::string model_config_to_json(const ModelConfig& cfg) {
    json j;
    j["lambda_P"] = cfg.spectrum.lambda_P;
    j["sigma_P"] = cfg.spectrum.sigma_P;
    j["phi_P"] = cfg.spectrum.phi_P;
    j["lambda_Q"] = cfg.spectrum.lambda_Q;
    j["sigma_Q"] = cfg.spectrum.sigma_Q;
    j["phi_Q"] = cfg.spectrum.phi_Q;
    j["alpha1"] = cfg.qp.alpha1;
    j["alpha2"] = cfg.qp.alpha2;
    j["alpha3"] = cfg.qp.alpha3;
    j["beta2"] = cfg.qp.beta2;
    j["gamma3"] = cfg.qp.gamma3;
    j["hqp"] = forms_to_json(cfg.qp.hqp);
    j["a1"] = cfg.pq.a1;
    j["a2"] = cfg.pq.a2;
    j["a3"] = cfg.pq.a3;
    j["b1"] = cfg.pq.b1;
    j["b2"] = cfg.pq.b2;
    j["b3"] = cfg.pq.b3;
    j["b4"] = cfg.pq.b4;
    j["c1"] = cfg.pq.c1;
    j["c2"] = cfg.pq.c2;
    j["hpq"] = forms_to_json(cfg.pq.hpq);
    j["rho"] = cfg.rho;
    j["trans_halfwidth"] = cfg.trans_halfwidth;
    j["r"] = cfg.r;
    j["precision"] = to_string(cfg.precision);
    return j.dump(2) + "\n";
}

ModelConfig load_model_config(const std::string& path, bool run_validate) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_config_from_json(ss.str(), run_validate);
}

}  // namespace hetren

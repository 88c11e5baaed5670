#include "latspec/config.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace latspec {

namespace {

/** Throws unless j holds only the listed keys (typo guard with field paths). */
void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigError(path + "." + key, "unknown field");
    }
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected a boolean");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> get_number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<Vec3> get_vec3_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of 3-vectors");
    std::vector<Vec3> out;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 3)
            throw ConfigError(p, "expected a 3-vector");
        out.emplace_back(get_number(j[i][0], p), get_number(j[i][1], p),
                         get_number(j[i][2], p));
    }
    return out;
}

json vec3_list_json(const std::vector<Vec3>& v) {
    json arr = json::array();
    for (const Vec3& k : v) arr.push_back({k[0], k[1], k[2]});
    return arr;
}

} // namespace

LatticePotential PotentialConfig::shape() const {
    if (type == "zero_range") return LatticePotential::zero_range(1.0);
    if (type == "nearest_neighbor") return LatticePotential::nearest_neighbor(a, b, 1.0);
    if (type == "table") {
        try {
            return LatticePotential::table(coefficients, 1.0);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("potential.coefficients", e.what());
        }
    }
    throw ConfigError("potential.type",
                      "must be zero_range, nearest_neighbor, or table");
}

RunConfig RunConfig::defaults() {
    RunConfig c;
    for (int j = 0; j <= 8; ++j) c.sweeps.k_list.emplace_back(j * M_PI / 8.0, 0.0, 0.0);
    c.sweeps.K_list = {Vec3(0, 0, 0), Vec3(0.5, 0, 0), Vec3(1.0, 0.5, 0)};
    c.sweeps.z_list = {0.5, 1.0, 2.0, 4.0, 8.0};
    for (int j = 0; j <= 12; ++j) c.sweeps.rho_list.push_back(std::pow(10.0, -6 - 2 * j));
    c.sweeps.r_list = {50.0, 100.0, 150.0, 200.0};
    return c;
}

void RunConfig::validate() const {
    potential.shape();  // validates type/coefficients
    if (potential.mu < 0) throw ConfigError("potential.mu", "must be >= 0");
    if (potential.type == "nearest_neighbor" && (potential.a < 0 || potential.b < 0))
        throw ConfigError("potential.a", "coefficients must be >= 0");
    if (grid.n < 1) throw ConfigError("grid.n", "must be >= 1");
    if (grid.tiny_n < 1 || grid.tiny_n > 4)
        throw ConfigError("grid.tiny_n", "must be in 1..4 (dense dimension is n^6)");
    if (grid.eval_n < 1) throw ConfigError("grid.eval_n", "must be >= 1");
    if (grid.cap < grid.n) throw ConfigError("grid.cap", "must be >= grid.n");
    if (grid.cap > 64) throw ConfigError("grid.cap", "documented cap is 64");
    if (sweeps.k_list.empty()) throw ConfigError("sweeps.k_list", "must be nonempty");
    if (sweeps.K_list.empty()) throw ConfigError("sweeps.K_list", "must be nonempty");
    if (sweeps.z_list.empty()) throw ConfigError("sweeps.z_list", "must be nonempty");
    if (sweeps.rho_list.empty()) throw ConfigError("sweeps.rho_list", "must be nonempty");
    if (sweeps.r_list.empty()) throw ConfigError("sweeps.r_list", "must be nonempty");
    for (double off : sweeps.z_list)
        if (off <= 0)
            throw ConfigError("sweeps.z_list",
                              "entries are offsets below the channel threshold; must be > 0");
    for (size_t i = 0; i + 1 < sweeps.rho_list.size(); ++i)
        if (!(sweeps.rho_list[i + 1] < sweeps.rho_list[i]))
            throw ConfigError("sweeps.rho_list", "must be strictly decreasing");
    for (double rho : sweeps.rho_list)
        if (rho <= 0) throw ConfigError("sweeps.rho_list", "entries must be > 0");
    for (double r : sweeps.r_list)
        if (r <= 0) throw ConfigError("sweeps.r_list", "entries must be > 0");
    if (model.delta <= 0) throw ConfigError("model.delta", "must be > 0");
    if (model.l_max < 0) throw ConfigError("model.l_max", "must be >= 0");
    if (model.radial_per_decade < 1)
        throw ConfigError("model.radial_per_decade", "must be >= 1");
    if (model.angular_n < 2) throw ConfigError("model.angular_n", "must be >= 2");
    if (model.x_spacing <= 0 || model.x_spacing > 0.05)
        throw ConfigError("model.x_spacing", "must be in (0, 0.05]");
    if (model.lambda_window <= 0) throw ConfigError("model.lambda_window", "must be > 0");
    if (tolerances.refine_rel <= 0)
        throw ConfigError("tolerances.refine_rel", "must be > 0");
    if (tolerances.calib_residual <= 0)
        throw ConfigError("tolerances.calib_residual", "must be > 0");
    if (output.dir.empty()) throw ConfigError("output.dir", "must be nonempty");
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<config>", std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("<config>", "top level must be an object");
    check_keys(j, "<config>",
               {"potential", "grid", "sweeps", "model", "tolerances", "output"});

    RunConfig c = defaults();
    if (j.contains("potential")) {
        const json& p = j["potential"];
        check_keys(p, "potential", {"type", "mu", "calibrate", "a", "b", "coefficients"});
        if (p.contains("type")) c.potential.type = get_string(p["type"], "potential.type");
        if (p.contains("mu")) c.potential.mu = get_number(p["mu"], "potential.mu");
        if (p.contains("calibrate"))
            c.potential.calibrate = get_bool(p["calibrate"], "potential.calibrate");
        if (p.contains("a")) c.potential.a = get_number(p["a"], "potential.a");
        if (p.contains("b")) c.potential.b = get_number(p["b"], "potential.b");
        if (p.contains("coefficients")) {
            const json& rows = p["coefficients"];
            if (!rows.is_array())
                throw ConfigError("potential.coefficients", "expected an array of rows");
            c.potential.coefficients.clear();
            for (size_t i = 0; i < rows.size(); ++i) {
                const std::string path =
                    "potential.coefficients[" + std::to_string(i) + "]";
                if (!rows[i].is_array() || rows[i].size() != 4)
                    throw ConfigError(path, "expected [sx, sy, sz, value]");
                std::array<double, 4> row;
                for (int q = 0; q < 4; ++q) row[q] = get_number(rows[i][q], path);
                c.potential.coefficients.push_back(row);
            }
        }
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, "grid", {"n", "tiny_n", "eval_n", "cap"});
        if (g.contains("n")) c.grid.n = get_int(g["n"], "grid.n");
        if (g.contains("tiny_n")) c.grid.tiny_n = get_int(g["tiny_n"], "grid.tiny_n");
        if (g.contains("eval_n")) c.grid.eval_n = get_int(g["eval_n"], "grid.eval_n");
        if (g.contains("cap")) c.grid.cap = get_int(g["cap"], "grid.cap");
    }
    if (j.contains("sweeps")) {
        const json& s = j["sweeps"];
        check_keys(s, "sweeps", {"k_list", "K_list", "z_list", "rho_list", "r_list"});
        if (s.contains("k_list")) c.sweeps.k_list = get_vec3_list(s["k_list"], "sweeps.k_list");
        if (s.contains("K_list")) c.sweeps.K_list = get_vec3_list(s["K_list"], "sweeps.K_list");
        if (s.contains("z_list")) c.sweeps.z_list = get_number_list(s["z_list"], "sweeps.z_list");
        if (s.contains("rho_list"))
            c.sweeps.rho_list = get_number_list(s["rho_list"], "sweeps.rho_list");
        if (s.contains("r_list")) c.sweeps.r_list = get_number_list(s["r_list"], "sweeps.r_list");
    }
    if (j.contains("model")) {
        const json& m = j["model"];
        check_keys(m, "model", {"delta", "l_max", "radial_per_decade", "angular_n",
                                "x_spacing", "lambda_window"});
        if (m.contains("delta")) c.model.delta = get_number(m["delta"], "model.delta");
        if (m.contains("l_max")) c.model.l_max = get_int(m["l_max"], "model.l_max");
        if (m.contains("radial_per_decade"))
            c.model.radial_per_decade =
                get_int(m["radial_per_decade"], "model.radial_per_decade");
        if (m.contains("angular_n"))
            c.model.angular_n = get_int(m["angular_n"], "model.angular_n");
        if (m.contains("x_spacing"))
            c.model.x_spacing = get_number(m["x_spacing"], "model.x_spacing");
        if (m.contains("lambda_window"))
            c.model.lambda_window = get_number(m["lambda_window"], "model.lambda_window");
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        check_keys(t, "tolerances", {"refine_rel", "calib_residual"});
        if (t.contains("refine_rel"))
            c.tolerances.refine_rel = get_number(t["refine_rel"], "tolerances.refine_rel");
        if (t.contains("calib_residual"))
            c.tolerances.calib_residual =
                get_number(t["calib_residual"], "tolerances.calib_residual");
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, "output", {"dir"});
        if (o.contains("dir")) c.output.dir = get_string(o["dir"], "output.dir");
    }
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<config>", "cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string RunConfig::canonical_json() const {
    json j;
    j["potential"] = {{"type", potential.type},
                      {"mu", potential.mu},
                      {"calibrate", potential.calibrate},
                      {"a", potential.a},
                      {"b", potential.b},
                      {"coefficients", potential.coefficients}};
    j["grid"] = {{"n", grid.n},
                 {"tiny_n", grid.tiny_n},
                 {"eval_n", grid.eval_n},
                 {"cap", grid.cap}};
    j["sweeps"] = {{"k_list", vec3_list_json(sweeps.k_list)},
                   {"K_list", vec3_list_json(sweeps.K_list)},
                   {"z_list", sweeps.z_list},
                   {"rho_list", sweeps.rho_list},
                   {"r_list", sweeps.r_list}};
    j["model"] = {{"delta", model.delta},
                  {"l_max", model.l_max},
                  {"radial_per_decade", model.radial_per_decade},
                  {"angular_n", model.angular_n},
                  {"x_spacing", model.x_spacing},
                  {"lambda_window", model.lambda_window}};
    j["tolerances"] = {{"refine_rel", tolerances.refine_rel},
                       {"calib_residual", tolerances.calib_residual}};
    j["output"] = {{"dir", output.dir}};
    return j.dump();  // nlohmann objects iterate in sorted key order
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string RunConfig::hash() const {
    char buf[20];
    std::snprintf(buf, sizeof buf, "0x%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_json())));
    return buf;
}

} // namespace latspec

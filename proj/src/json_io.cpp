#include "gaprenorm/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gaprenorm/errors.hpp"

namespace gaprenorm {

namespace {

const ordered_json& need(const ordered_json& j, const char* key,
                         const char* what) {
    if (!j.is_object())
        throw DomainError(std::string(what) + ": expected a JSON object");
    auto it = j.find(key);
    if (it == j.end())
        throw DomainError(std::string(what) + ": missing key \"" + key + "\"");
    return *it;
}

double need_number(const ordered_json& j, const char* key, const char* what) {
    const ordered_json& v = need(j, key, what);
    if (!v.is_number())
        throw DomainError(std::string(what) + ": key \"" + key +
                          "\" must be a number");
    double x = v.get<double>();
    if (!std::isfinite(x))
        throw DomainError(std::string(what) + ": key \"" + key +
                          "\" is not finite");
    return x;
}

long need_integer(const ordered_json& j, const char* key, const char* what) {
    const ordered_json& v = need(j, key, what);
    if (!v.is_number_integer())
        throw DomainError(std::string(what) + ": key \"" + key +
                          "\" must be an integer");
    return v.get<long>();
}

std::vector<double> need_number_array(const ordered_json& v, const char* what) {
    if (!v.is_array())
        throw DomainError(std::string(what) + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number())
            throw DomainError(std::string(what) +
                              ": array element is not a number");
        double x = e.get<double>();
        if (!std::isfinite(x))
            throw DomainError(std::string(what) + ": array element not finite");
        out.push_back(x);
    }
    return out;
}

const char* sigma_text(Sign s) { return s == Sign::minus ? "-" : "+"; }

void dump_rec(const ordered_json& j, std::string& out, int indent) {
    auto pad = [&out](int n) { out.append(static_cast<std::size_t>(n), ' '); };
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            pad(indent + 2);
            out += ordered_json(key).dump();
            out += ": ";
            dump_rec(value, out, indent + 2);
        }
        out += "\n";
        pad(indent);
        out += "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        bool first = true;
        for (const auto& value : j) {
            if (!first) out += ",\n";
            first = false;
            pad(indent + 2);
            dump_rec(value, out, indent + 2);
        }
        out += "\n";
        pad(indent);
        out += "]";
    } else if (j.is_number_float()) {
        out += format_g17(j.get<double>());
    } else {
        out += j.dump();
    }
}

}  // namespace

std::string format_g17(double x) {
    if (!std::isfinite(x))
        throw DomainError("JSON export: value is not finite");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ordered_json diffeo_to_json(const Diffeo& d) {
    ordered_json j;
    j["basis"] = "cheb01";
    j["m"] = d.basis_size();
    j["coeffs"] = d.coeffs();
    return j;
}

Diffeo diffeo_from_json(const ordered_json& j) {
    const ordered_json& basis = need(j, "basis", "Diffeo");
    if (!basis.is_string() || basis.get<std::string>() != "cheb01")
        throw DomainError("Diffeo: key \"basis\" must be the string \"cheb01\"");
    long m = need_integer(j, "m", "Diffeo");
    std::vector<double> coeffs =
        need_number_array(need(j, "coeffs", "Diffeo"), "Diffeo coeffs");
    if (m < 1 || static_cast<std::size_t>(m) != coeffs.size())
        throw DomainError("Diffeo: \"m\" must equal the length of \"coeffs\"");
    return Diffeo::from_coeffs(std::move(coeffs));
}

ordered_json gapmap_to_json(const GapMap& f) {
    ordered_json j;
    j["alpha"] = f.alpha();
    j["beta"] = f.beta();
    j["b"] = f.b();
    j["phi_L"] = diffeo_to_json(f.phi_left());
    j["phi_R"] = diffeo_to_json(f.phi_right());
    return j;
}

GapMap gapmap_from_json(const ordered_json& j) {
    double alpha = need_number(j, "alpha", "GapMap");
    double beta = need_number(j, "beta", "GapMap");
    double b = need_number(j, "b", "GapMap");
    Diffeo phi_l = diffeo_from_json(need(j, "phi_L", "GapMap"));
    Diffeo phi_r = diffeo_from_json(need(j, "phi_R", "GapMap"));
    return GapMap(alpha, beta, b, std::move(phi_l), std::move(phi_r));
}

ordered_json step_to_json(const RenormStep& s) {
    ordered_json j;
    j["k"] = s.k;
    j["sigma"] = sigma_text(s.sigma);
    j["I_prime"] = {s.i_prime.lo, s.i_prime.hi};
    j["map"] = gapmap_to_json(s.renormalized);
    return j;
}

ordered_json trajectory_to_json(const Trajectory& t) {
    ordered_json arr = ordered_json::array();
    for (const RenormStep& s : t.steps) arr.push_back(step_to_json(s));
    return arr;
}

ordered_json decomposition_to_json(const Decomposition& d) {
    ordered_json arr = ordered_json::array();
    for (const DecompositionItem& item : d.items()) {
        ordered_json e;
        e["label"] = {item.label.generation, item.label.index};
        e["diffeo"] = diffeo_to_json(item.diffeo);
        arr.push_back(std::move(e));
    }
    return arr;
}

Decomposition decomposition_from_json(const ordered_json& j) {
    if (!j.is_array())
        throw DomainError("Decomposition: expected a JSON array");
    std::vector<DecompositionItem> items;
    items.reserve(j.size());
    for (const auto& e : j) {
        const ordered_json& label = need(e, "label", "Decomposition item");
        if (!label.is_array() || label.size() != 2 ||
            !label[0].is_number_integer() || !label[1].is_number_integer())
            throw DomainError(
                "Decomposition item: \"label\" must be a pair of integers");
        TimesetLabel tl{label[0].get<long>(), label[1].get<long>()};
        items.push_back(
            {tl, diffeo_from_json(need(e, "diffeo", "Decomposition item"))});
    }
    return Decomposition(std::move(items));
}

ordered_json search_result_to_json(const SearchResult& r) {
    ordered_json j;
    j["b_star"] = r.b_star;
    j["achieved_depth"] = r.achieved_depth;
    j["gamma"] = combinatorics_to_string(r.gamma);
    j["bracket"] = {r.bracket_lo, r.bracket_hi};
    j["bracket_width"] = r.bracket_width;
    return j;
}

ordered_json block_report_to_json(const BlockReport& b,
                                  const std::vector<double>& eigenvalues) {
    ordered_json j;
    j["K1"] = b.K1;
    j["K2"] = b.K2;
    j["K3"] = b.K3;
    j["K4"] = b.K4;
    j["M1"] = b.M1;
    j["M2"] = b.M2;
    j["eps_max"] = b.eps_max;
    j["spectrum"] = eigenvalues;
    return j;
}

ordered_json cone_report_to_json(const ConeReport& r, const ConeParams& p,
                                 std::uint64_t seed) {
    ordered_json j;
    j["r"] = p.r;
    j["delta"] = p.delta;
    j["samples"] = r.samples;
    j["seed"] = seed;
    j["contained_fraction"] = r.contained_fraction;
    j["min_expansion"] = r.min_expansion;
    j["max_expansion"] = r.max_expansion;
    return j;
}

std::string dump_17g(const ordered_json& j) {
    std::string out;
    dump_rec(j, out, 0);
    out += "\n";
    return out;
}

ordered_json parse_json_text(const std::string& text,
                             const std::string& source_name) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // e.what() already carries line and column.
        throw DomainError(source_name + ": " + e.what());
    }
}

ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

}  // namespace gaprenorm

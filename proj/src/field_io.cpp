#include "horolab/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace horolab::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary field payloads are little-endian float64");

void write_csv(const std::filesystem::path& path, const NamedField& f) {
    std::FILE* fp = std::fopen(path.string().c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open for writing: " + path.string());
    const std::size_t rows = f.values.size() / f.components;
    for (std::size_t r = 0; r < rows; ++r) {
        for (int c = 0; c < f.components; ++c)
            std::fprintf(fp, c ? ",%.17g" : "%.17g", f.values[r * f.components + c]);
        std::fputc('\n', fp);
    }
    std::fclose(fp);
}

void read_csv(const std::filesystem::path& path, NamedField& f, std::size_t expect) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    f.values.clear();
    f.values.reserve(expect);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.values.push_back(std::stod(tok));
    }
    if (f.values.size() != expect)
        throw DimensionError("csv payload size mismatch in " + path.string());
}

void write_f64(const std::filesystem::path& path, const NamedField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

void read_f64(const std::filesystem::path& path, NamedField& f, std::size_t expect) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    f.values.assign(expect, 0.0);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(expect * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != expect * sizeof(double))
        throw DimensionError("binary payload size mismatch in " + path.string());
}

}  // namespace

const NamedField& FieldSet::get(const std::string& name) const {
    for (const auto& f : fields)
        if (f.name == name) return f;
    throw DimensionError("field set has no field named '" + name + "'");
}

bool FieldSet::has(const std::string& name) const {
    return std::any_of(fields.begin(), fields.end(),
                       [&](const NamedField& f) { return f.name == name; });
}

std::filesystem::path write_fields(const std::filesystem::path& base, const FieldSet& fs,
                                   bool binary) {
    json header;
    header["format"] = "horolab-fields";
    header["version"] = 1;
    header["domain"] = domain_to_json(fs.domain);
    header["payload"] = binary ? "f64" : "csv";
    json flist = json::array();
    for (const auto& f : fs.fields) {
        if (f.values.size() != fs.domain.n * static_cast<std::size_t>(f.components))
            throw DimensionError("write_fields: field '" + f.name + "' has the wrong size");
        const std::string fname =
            base.filename().string() + "." + f.name + (binary ? ".f64" : ".csv");
        json fj;
        fj["name"] = f.name;
        fj["components"] = f.components;
        fj["file"] = fname;
        flist.push_back(fj);
        const std::filesystem::path payload = base.parent_path() / fname;
        if (binary)
            write_f64(payload, f);
        else
            write_csv(payload, f);
    }
    header["fields"] = flist;
    header["provenance"] = fs.provenance.is_null() ? json::object() : fs.provenance;
    const std::filesystem::path hpath =
        base.parent_path() / (base.filename().string() + ".fields.json");
    std::ofstream out(hpath);
    if (!out) throw std::runtime_error("cannot open for writing: " + hpath.string());
    out << header.dump(2) << "\n";
    return hpath;
}

FieldSet read_fields(const std::filesystem::path& header_path) {
    std::ifstream in(header_path);
    if (!in) throw std::runtime_error("cannot open: " + header_path.string());
    json header = json::parse(in);
    if (require_string(header, "format") != "horolab-fields")
        throw DimensionError("not a horolab field header: " + header_path.string());
    FieldSet fs;
    fs.domain = domain_from_json(require_member(header, "domain"));
    fs.provenance = header.contains("provenance") ? header["provenance"] : json::object();
    const std::string payload = require_string(header, "payload");
    if (payload != "f64" && payload != "csv")
        throw DimensionError("unknown payload kind '" + payload + "'");
    for (const auto& fj : require_member(header, "fields")) {
        NamedField f;
        f.name = require_string(fj, "name");
        f.components = static_cast<int>(require_number(fj, "components"));
        if (f.components < 1) throw DimensionError("field components must be >= 1");
        const std::filesystem::path p =
            header_path.parent_path() / require_string(fj, "file");
        const std::size_t expect = fs.domain.n * static_cast<std::size_t>(f.components);
        if (payload == "f64")
            read_f64(p, f, expect);
        else
            read_csv(p, f, expect);
        fs.fields.push_back(std::move(f));
    }
    return fs;
}

GridDomain domain_from_json(const json& j) {
    if (j.contains("half_extent")) {
        const int m = static_cast<int>(require_number(j, "m"));
        return GridDomain::centered(require_number(j, "half_extent"),
                                    static_cast<int>(require_number(j, "nodes")), m);
    }
    std::vector<double> origin;
    for (const auto& v : require_member(j, "origin")) origin.push_back(v.get<double>());
    std::vector<int> shape;
    for (const auto& v : require_member(j, "shape")) shape.push_back(v.get<int>());
    return GridDomain::make(std::move(origin), require_number(j, "spacing"), std::move(shape));
}

json domain_to_json(const GridDomain& dom) {
    json j;
    j["m"] = dom.m;
    j["origin"] = dom.origin;
    j["spacing"] = dom.spacing;
    j["shape"] = dom.shape;
    return j;
}

solver::FieldGenerator generator_from_json(const json& j, int m) {
    const std::string name = require_string(j, "name");
    const json params = j.contains("params") ? j["params"] : json::object();
    auto vec_param = [&](const std::string& key, double def) {
        std::vector<double> v(m, def);
        if (params.contains(key)) {
            v.clear();
            for (const auto& x : params[key]) v.push_back(x.get<double>());
            if (static_cast<int>(v.size()) != m)
                throw DimensionError("generator parameter '" + key + "' has the wrong length");
        }
        return v;
    };
    auto num_param = [&](const std::string& key, double def) {
        return params.contains(key) ? params[key].get<double>() : def;
    };
    if (name == "hyperboloid")
        return solver::exact_hyperboloid(num_param("H", 1.0), vec_param("center", 0.0),
                                         num_param("shift", 0.0));
    if (name == "plane") return solver::exact_plane(vec_param("a", 0.0), num_param("b", 0.0));
    if (name == "affine") {
        // unconstrained affine data (for scalar Dirichlet problems, not graphs)
        auto a = vec_param("a", 0.0);
        const double b = num_param("b", 0.0);
        return solver::FieldGenerator{[a = std::move(a), b](const double* x) {
            double v = b;
            for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * x[i];
            return v;
        }};
    }
    if (name == "tilted_plane_bump")
        return estimate::tilted_plane_bump(num_param("tilt", 0.3), num_param("amp", 0.25),
                                           num_param("width", 1.0), m);
    throw DimensionError("unknown closed form '" + name + "'");
}

solver::DirichletProblem problem_from_json(const json& j,
                                           const std::filesystem::path& base_dir) {
    solver::DirichletProblem pb;
    pb.domain = domain_from_json(require_member(j, "domain"));
    pb.H = require_number(j, "H");
    const json& b = require_member(j, "boundary");
    if (b.contains("closed_form")) {
        pb.boundary = generator_from_json(b["closed_form"], pb.domain.m).sample(pb.domain);
    } else if (b.contains("values_file")) {
        const FieldSet fs = read_fields(base_dir / b["values_file"].get<std::string>());
        if (!fs.domain.same_layout(pb.domain))
            throw DimensionError("boundary values file is on a different grid");
        const std::string fname = b.contains("field") ? b["field"].get<std::string>() : "u";
        pb.boundary = fs.get(fname).values;
    } else if (b.contains("values")) {
        for (const auto& v : b["values"]) pb.boundary.push_back(v.get<double>());
        if (pb.boundary.size() != pb.domain.n)
            throw DimensionError("inline boundary values must cover the full grid");
    } else {
        throw DimensionError("boundary needs one of closed_form / values_file / values");
    }
    return pb;
}

solver::SolverConfig solver_config_from_json(const json& j) {
    solver::SolverConfig cfg;
    if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
    if (j.contains("max_newton")) cfg.max_newton = j["max_newton"].get<int>();
    if (j.contains("damping")) cfg.damping = j["damping"].get<double>();
    if (j.contains("gradient_cap")) cfg.gradient_cap = j["gradient_cap"].get<double>();
    if (j.contains("linear_tol")) cfg.linear_tol = j["linear_tol"].get<double>();
    if (j.contains("linear_max_iter")) cfg.linear_max_iter = j["linear_max_iter"].get<int>();
    if (j.contains("deterministic")) cfg.deterministic = j["deterministic"].get<bool>();
    return cfg;
}

estimate::ComparisonFn comparison_from_json(const json& j, const GridDomain& dom,
                                            const std::filesystem::path& base_dir) {
    if (j.is_number()) return estimate::ComparisonFn::constant(j.get<double>());
    if (j.contains("constant"))
        return estimate::ComparisonFn::constant(j["constant"].get<double>());
    if (j.contains("values_file")) {
        const FieldSet fs = read_fields(base_dir / j["values_file"].get<std::string>());
        if (!fs.domain.same_layout(dom))
            throw DimensionError("comparison function field is on a different grid");
        const std::string fname = j.contains("field") ? j["field"].get<std::string>() : "g";
        return estimate::ComparisonFn::field(fs.get(fname).values);
    }
    throw DimensionError("comparison function needs 'constant' or 'values_file'");
}

json to_json(const solver::SolveReport& rep) {
    json j;
    j["converged"] = rep.converged;
    j["iterations"] = rep.iterations;
    j["final_residual"] = rep.final_residual;
    j["max_grad"] = rep.max_grad;
    j["cap_stalled"] = rep.cap_stalled;
    j["cg_iterations"] = rep.cg_iterations;
    j["residual_history"] = rep.residual_history;
    j["message"] = rep.message;
    return j;
}

json to_json(const solver::ConvergenceReport& rep) {
    json j;
    j["sizes"] = rep.sizes;
    j["spacings"] = rep.spacings;
    j["residual_sup"] = rep.residual_sup;
    j["solve_error"] = rep.solve_error;
    j["converged"] = rep.converged;
    j["order_residual"] = rep.order_residual;
    j["order_solve"] = rep.order_solve;
    j["exact_family"] = rep.exact_family;
    j["all_converged"] = rep.all_converged;
    return j;
}

json to_json(const estimate::SuperharmonicReport& rep) {
    json j;
    j["max_certificate"] = rep.max_certificate;
    j["tolerance"] = rep.tolerance;
    j["pass"] = rep.pass;
    return j;
}

json to_json(const estimate::EstimateReport& rep) {
    json j;
    j["a"] = rep.a;
    j["k"] = rep.k;
    j["k_bound"] = rep.k_bound;
    j["sup_phi"] = rep.sup_phi;
    j["implied_constant"] = rep.implied_constant;
    j["min_gap"] = rep.min_gap;
    j["min_gap_before"] = rep.min_gap_before;
    j["shift"] = rep.shift;
    j["ball_nodes"] = rep.ball_nodes;
    j["half_ball_nodes"] = rep.half_ball_nodes;
    return j;
}

json to_json(const estimate::BochnerReport& rep) {
    json j;
    j["epsilon"] = rep.epsilon;
    j["k_sq"] = rep.k_sq;
    j["samples"] = rep.samples.size();
    j["viol_bochner"] = rep.viol_bochner;
    j["viol_kato"] = rep.viol_kato;
    j["viol_combined"] = rep.viol_combined;
    j["tol_bochner"] = rep.tol_bochner;
    j["tol_kato"] = rep.tol_kato;
    j["tol_combined"] = rep.tol_combined;
    j["pass"] = rep.pass;
    return j;
}

json to_json(const estimate::KeyInequalityReport& rep) {
    json j;
    j["epsilon"] = rep.epsilon;
    j["samples"] = rep.samples.size();
    j["viol_key"] = rep.viol_key;
    j["viol_concavity"] = rep.viol_concavity;
    j["tol_key"] = rep.tol_key;
    j["tol_concavity"] = rep.tol_concavity;
    j["shift"] = rep.shift;
    j["pass"] = rep.pass;
    return j;
}

json to_json(const estimate::VanishingReport& rep) {
    json j;
    j["samples"] = rep.samples.size();
    j["viol_energy"] = rep.viol_energy;
    j["viol_mean"] = rep.viol_mean;
    j["tol"] = rep.tol;
    j["shift"] = rep.shift;
    j["pass"] = rep.pass;
    return j;
}

json to_json(const estimate::ScalarLiouvilleReport& rep) {
    json j;
    j["sup_ratio"] = rep.sup_ratio;
    j["implied_constant"] = rep.implied_constant;
    j["k"] = rep.k;
    j["min_gap"] = rep.min_gap;
    j["shift"] = rep.shift;
    j["cg_iterations"] = rep.cg_iterations;
    return j;
}

json to_json(const estimate::RigidityTrendReport& rep) {
    json j;
    json entries = json::array();
    for (const auto& e : rep.entries) {
        json ej;
        ej["a"] = e.a;
        ej["nodes"] = e.nodes;
        ej["solved"] = e.solved;
        ej["horoball_ok"] = e.horoball_ok;
        ej["min_height"] = e.min_height;
        ej["sup_h"] = e.sup_h;
        entries.push_back(ej);
    }
    j["entries"] = entries;
    j["ratios"] = rep.ratios;
    j["strictly_decreasing"] = rep.strictly_decreasing;
    j["partial"] = rep.partial;
    j["horoball_violation"] = rep.horoball_violation;
    return j;
}

json to_json(const codim2::EquivalenceReport& rep) {
    json j;
    j["max_discrepancy"] = rep.max_discrepancy;
    j["det_combination"] = rep.det_combination;
    j["pass"] = rep.pass;
    return j;
}

namespace {
void render_rec(const json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() || (v.is_array() && !v.empty() && v.front().is_object())) {
                out += prefix + k + ":\n";
                render_rec(v, prefix + "  ", out);
            } else {
                out += prefix + k + " = " + v.dump() + "\n";
            }
        }
    } else if (j.is_array()) {
        int i = 0;
        for (const auto& v : j) {
            out += prefix + "[" + std::to_string(i++) + "]\n";
            render_rec(v, prefix + "  ", out);
        }
    } else {
        out += prefix + j.dump() + "\n";
    }
}
}  // namespace

std::string render_text(const json& j) {
    std::string out;
    render_rec(j, "", out);
    return out;
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number())
        throw DimensionError("config: missing or non-numeric key '" + key + "'");
    return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_string())
        throw DimensionError("config: missing or non-string key '" + key + "'");
    return j[key].get<std::string>();
}

const json& require_member(const json& j, const std::string& key) {
    if (!j.contains(key)) throw DimensionError("config: missing key '" + key + "'");
    return j[key];
}

}  // namespace horolab::io

#include "hkit/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hkit/errors.hpp"
#include "hkit/hardy.hpp"
#include "hkit/matrix.hpp"
#include "hkit/numeric.hpp"
#include "hkit/operator.hpp"

namespace hkit {

namespace {

using json = nlohmann::ordered_json;

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigInvalid(msg);
}

std::vector<double> doubles(const json& j, const std::string& what) {
    require(j.is_array(), what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : j) {
        require(e.is_number(), what + " must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Box parse_box(const json& j, const std::string& what) {
    require(j.is_object() && j.contains("lo") && j.contains("hi"), what + " needs lo and hi arrays");
    return Box(doubles(j["lo"], what + ".lo"), doubles(j["hi"], what + ".hi"));
}

KernelSpec parse_kernel(const json& j) {
    require(j.is_object() && j.contains("family"), "kernel needs a family");
    const std::string fam = j["family"].get<std::string>();
    const double amp = j.value("amplitude", 1.0);
    if (fam == "indicator") return KernelSpec::indicator(parse_box(j.at("box"), "kernel.box"), amp);
    if (fam == "gaussian")
        return KernelSpec::gaussian(doubles(j.at("center"), "kernel.center"), j.value("sigma", 1.0), amp,
                                    j.value("truncation_sigmas", 8.0));
    if (fam == "radial-bump")
        return KernelSpec::radial_bump(doubles(j.at("center"), "kernel.center"), j.value("radius", 1.0), amp);
    if (fam == "product-power") {
        return KernelSpec::product_power(parse_box(j.at("box"), "kernel.box"),
                                         doubles(j.at("exponents"), "kernel.exponents"), amp);
    }
    throw ConfigInvalid("unknown kernel family: " + fam);
}

MatrixFamily parse_matrix(const json& j) {
    require(j.is_object() && j.contains("family"), "matrix needs a family");
    const std::string fam = j["family"].get<std::string>();
    if (fam == "scalar-dilation") return MatrixFamily::scalar_dilation(j.value("dim", 1));
    if (fam == "diagonal") return MatrixFamily::diagonal(j.value("dim", 1));
    if (fam == "rotation-scale")
        return MatrixFamily::rotation_scale(j.value("theta0", 0.0), j.value("theta1", 0.0),
                                            j.value("rho0", 0.0), j.value("rho1", 1.0));
    if (fam == "shear")
        return MatrixFamily::shear(j.value("shear0", 0.0), j.value("shear1", 0.0), j.value("scale0", 1.0),
                                   j.value("scale1", 0.0));
    if (fam == "constant") {
        require(j.contains("entries"), "constant matrix family needs entries");
        const json& rows = j["entries"];
        require(rows.is_array() && !rows.empty(), "matrix entries must be a nonempty array of rows");
        const int n = static_cast<int>(rows.size());
        std::vector<double> e;
        for (const auto& row : rows) {
            const auto r = doubles(row, "matrix entries row");
            require(static_cast<int>(r.size()) == n, "matrix entries must be square");
            e.insert(e.end(), r.begin(), r.end());
        }
        return MatrixFamily::constant(SquareMatrix(n, std::move(e)));
    }
    throw ConfigInvalid("unknown matrix family: " + fam);
}

AtomShape parse_shape(const json& j) {
    const std::string s = j.value("profile", "sign-split");
    if (s == "sign-split") return AtomShape::SignSplit;
    if (s == "shell-difference") return AtomShape::ShellDifference;
    throw ConfigInvalid("unknown atom profile: " + s);
}

FunctionSpec parse_function(const json& j) {
    require(j.is_object() && j.contains("family"), "function needs a family");
    const std::string fam = j["family"].get<std::string>();
    const double amp = j.value("amplitude", 1.0);
    if (fam == "constant") {
        require(j.contains("dim"), "constant function needs dim");
        return FunctionSpec::constant(j["dim"].get<int>(), amp);
    }
    if (fam == "gaussian")
        return FunctionSpec::gaussian(doubles(j.at("center"), "function.center"), j.value("sigma", 1.0), amp);
    if (fam == "indicator") return FunctionSpec::indicator(parse_box(j.at("box"), "function.box"), amp);
    if (fam == "atom") {
        FunctionSpec s = FunctionSpec::atom_profile(doubles(j.at("center"), "function.center"),
                                                    j.value("radius", 1.0), parse_shape(j));
        s.amplitude = amp;
        return s;
    }
    if (fam == "poly-bump") {
        std::vector<int> powers;
        for (const auto& p : j.at("powers")) powers.push_back(p.get<int>());
        return FunctionSpec::poly_bump(doubles(j.at("center"), "function.center"), j.value("radius", 1.0),
                                       std::move(powers), amp);
    }
    throw ConfigInvalid("unknown function family: " + fam);
}

QuadratureSpec parse_quadrature(const json& j) {
    QuadratureSpec q;
    if (j.is_null()) return q;
    require(j.is_object(), "quadrature must be an object");
    const std::string rule = j.value("rule", "gauss-legendre");
    if (rule == "gauss-legendre")
        q.rule = QuadRule::GaussLegendre;
    else if (rule == "midpoint")
        q.rule = QuadRule::Midpoint;
    else
        throw ConfigInvalid("unknown quadrature rule: " + rule);
    q.nodes_per_axis = j.value("nodes_per_axis", 64);
    q.refine = j.value("refine", 2);
    if (j.contains("box")) q.box = parse_box(j["box"], "quadrature.box");
    q.validate();
    return q;
}

json norm_json(const NormReport& r) {
    return json{{"value", r.value},
                {"convergence", r.convergence},
                {"skipped_mass", r.skipped_mass},
                {"nodes_used", r.nodes_used},
                {"nodes_skipped", r.nodes_skipped}};
}

json check_json(const VerificationReport& c) {
    json d = json::object();
    for (const auto& e : c.diagnostics) d[e.name] = e.value;
    return json{{"name", c.name}, {"lhs", c.lhs},        {"rhs", c.rhs},          {"ratio", c.ratio},
                {"tolerance", c.tolerance}, {"pass", c.pass}, {"diagnostics", d}};
}

json matrix_json(const SquareMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (int j2 = 0; j2 < m.dim(); ++j2) row.push_back(m(i, j2));
        rows.push_back(row);
    }
    return rows;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

GridFunction materialize_function(const RunConfig& cfg) {
    require(cfg.function.has_value(), cfg.kind + " needs a function");
    require(cfg.grid_box.has_value() && !cfg.grid_resolution.empty(), cfg.kind + " needs a grid");
    const FunctionSpec& fs = *cfg.function;
    if (fs.family == FunctionFamily::AtomProfile) {
        const Atom spec{fs.dim(), fs.center, fs.radius, fs.shape};
        GridFunction g = make_atom(spec, *cfg.grid_box, cfg.grid_resolution);
        return fs.amplitude == 1.0 ? g : g.scaled(fs.amplitude);
    }
    return sample(fs, *cfg.grid_box, cfg.grid_resolution);
}

void set_family_parameter(MatrixFamily& f, const std::string& name, double v) {
    if (name == "theta0")
        f.theta0 = v;
    else if (name == "theta1")
        f.theta1 = v;
    else if (name == "rho0")
        f.rho0 = v;
    else if (name == "rho1")
        f.rho1 = v;
    else if (name == "shear0")
        f.shear0 = v;
    else if (name == "shear1")
        f.shear1 = v;
    else if (name == "scale0")
        f.scale0 = v;
    else if (name == "scale1")
        f.scale1 = v;
    else
        throw ConfigInvalid("unknown sweep parameter: " + name);
}

} // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigInvalid(std::string("config is not valid json: ") + e.what());
    }
    return from_json(j);
}

RunConfig RunConfig::from_json(const nlohmann::ordered_json& j) {
    RunConfig cfg;
    try {
        require(j.is_object(), "config must be a json object");
        cfg.raw = j;
        cfg.kind = j.value("kind", "");
        cfg.seed = j.value("seed", static_cast<std::uint64_t>(0));
        if (j.contains("threads")) {
            const int t = j["threads"].get<int>();
            require(t >= 0, "threads must be nonnegative");
            cfg.threads = t;
        }
        if (j.contains("kernel")) cfg.kernel = parse_kernel(j["kernel"]);
        if (j.contains("matrix")) cfg.matrix = parse_matrix(j["matrix"]);
        if (j.contains("function")) cfg.function = parse_function(j["function"]);
        if (j.contains("grid")) {
            const json& g = j["grid"];
            require(g.is_object() && g.contains("box") && g.contains("resolution"),
                    "grid needs box and resolution");
            cfg.grid_box = parse_box(g["box"], "grid.box");
            for (const auto& r : g["resolution"]) cfg.grid_resolution.push_back(r.get<int>());
        }
        cfg.quadrature = parse_quadrature(j.value("quadrature", json()));
        if (j.contains("tolerances")) {
            const json& t = j["tolerances"];
            cfg.slack = t.value("slack", cfg.slack);
            cfg.c_h1 = t.value("c_h1", cfg.c_h1);
            cfg.c_dil = t.value("c_dil", cfg.c_dil);
            if (t.contains("atom_tol")) cfg.atom_tol = t["atom_tol"].get<double>();
            cfg.norm_options.rtol_quad = t.value("rtol_quad", cfg.norm_options.rtol_quad);
            cfg.norm_options.max_skipped_mass = t.value("max_skipped_mass", cfg.norm_options.max_skipped_mass);
            require(cfg.slack > 0.0 && cfg.c_h1 > 0.0 && cfg.c_dil > 0.0, "tolerances must be positive");
            require(cfg.norm_options.rtol_quad > 0.0 && cfg.norm_options.max_skipped_mass > 0.0,
                    "tolerances must be positive");
            require(!cfg.atom_tol.has_value() || *cfg.atom_tol > 0.0, "tolerances must be positive");
        }
        if (j.contains("output")) cfg.save_grids = j["output"].value("save_grids", true);
        if (j.contains("sweep")) {
            const json& s = j["sweep"];
            require(s.is_object() && s.contains("parameter") && s.contains("values"),
                    "sweep needs parameter and values");
            cfg.sweep_parameter = s["parameter"].get<std::string>();
            cfg.sweep_values = doubles(s["values"], "sweep.values");
        }
        if (j.contains("search")) {
            const json& s = j["search"];
            cfg.search_count = s.value("count", 1000);
            cfg.search_dim = s.value("dim", 2);
            cfg.symmetric_only = s.value("symmetric_only", false);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigInvalid(std::string("config field has the wrong type: ") + e.what());
    }
    return cfg;
}

namespace {

void run_norms(const RunConfig& cfg, json& results) {
    require(cfg.kernel.has_value() && cfg.matrix.has_value(), "norms needs kernel and matrix");
    const ConditionComparison cmp =
        compare_conditions(*cfg.kernel, *cfg.matrix, cfg.quadrature, cfg.norm_options);
    results["l_a"] = norm_json(cmp.l_a);
    results["lstar"] = norm_json(cmp.lstar);
    results["l2"] = norm_json(cmp.l2);
    results["ratio_l2_lstar"] = cmp.ratio_l2_lstar;
    results["ratio_la_l2"] = cmp.ratio_la_l2;
    results["smallest"] = cmp.smallest;
}

void run_apply(const RunConfig& cfg, json& results, const std::string& out_dir, ReportBundle& bundle) {
    require(cfg.kernel.has_value() && cfg.matrix.has_value(), "apply needs kernel and matrix");
    const GridFunction f = materialize_function(cfg);
    const HausdorffApplication app = apply_hausdorff(*cfg.kernel, *cfg.matrix, f, cfg.quadrature);
    results["f_l1"] = f.l1_norm();
    results["hf_l1"] = app.value.l1_norm();
    results["hf_max_abs"] = app.value.max_abs();
    results["out_of_box_mass"] = app.out_of_box_mass;
    results["skipped_mass"] = app.skipped_mass;
    results["nodes_used"] = app.nodes_used;
    results["nodes_skipped"] = app.nodes_skipped;
    if (cfg.save_grids) {
        results["grids"] = json::array({"f.grid.csv", "hf.grid.csv"});
        if (!out_dir.empty()) {
            const auto dir = std::filesystem::path(out_dir);
            f.save_csv((dir / "f.grid.csv").string());
            app.value.save_csv((dir / "hf.grid.csv").string());
            bundle.files_written.push_back((dir / "f.grid.csv").string());
            bundle.files_written.push_back((dir / "hf.grid.csv").string());
        }
    }
}

void run_verify_l1(const RunConfig& cfg, std::vector<VerificationReport>& checks) {
    require(cfg.kernel.has_value() && cfg.matrix.has_value(), "verify-l1 needs kernel and matrix");
    const GridFunction f = materialize_function(cfg);
    checks.push_back(verify_l1_bound(*cfg.kernel, *cfg.matrix, f, cfg.quadrature, cfg.slack, cfg.norm_options));
}

void run_verify_h1(const RunConfig& cfg, std::vector<VerificationReport>& checks) {
    require(cfg.kernel.has_value() && cfg.matrix.has_value(), "verify-h1 needs kernel and matrix");
    const GridFunction f = materialize_function(cfg);
    checks.push_back(verify_h1_bound(*cfg.kernel, *cfg.matrix, f, cfg.quadrature, cfg.c_h1, cfg.norm_options));
}

void run_atom_check(const RunConfig& cfg, json& results, std::vector<VerificationReport>& checks,
                    const std::string& out_dir, ReportBundle& bundle) {
    require(cfg.function.has_value(), "atom-check needs a function");
    require(cfg.function->family == FunctionFamily::AtomProfile, "atom-check needs an atom function");
    const FunctionSpec& fs = *cfg.function;
    const int n = fs.dim();
    const Atom spec{n, fs.center, fs.radius, fs.shape};
    require(cfg.grid_box.has_value() && !cfg.grid_resolution.empty(), "atom-check needs a grid");
    GridFunction a = make_atom(spec, *cfg.grid_box, cfg.grid_resolution);
    if (fs.amplitude != 1.0) a = a.scaled(fs.amplitude);

    double h_in = 0.0;
    for (int ax = 0; ax < n; ++ax) h_in = std::max(h_in, a.spacing(ax));
    const double tol =
        cfg.atom_tol.value_or(atom_check_tolerance(fs.shape, n, fs.radius, std::sqrt(double(n)) * h_in));
    checks.push_back(check_atom(a, spec.center, spec.radius, tol));
    results["tolerance_used"] = tol;
    results["grids"] = json::array({"atom.grid.csv"});

    if (cfg.matrix.has_value()) {
        require(cfg.matrix->kind() == MatrixFamilyKind::Constant,
                "atom-check transform needs a constant matrix family");
        const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
        const SquareMatrix m = cfg.matrix->matrix_at(origin);
        const TransformedAtom t = transform_atom(a, spec, m);
        double h_out = 0.0;
        for (int ax = 0; ax < n; ++ax) h_out = std::max(h_out, t.value.spacing(ax));
        const double w = std::sqrt(double(n)) * (h_out + h_in * spectral_norm(inverse(m)));
        const double tol2 = cfg.atom_tol.value_or(atom_check_tolerance(fs.shape, n, t.radius, w));
        VerificationReport c = check_atom(t.value, t.center, t.radius, tol2);
        c.name = "atom-check-transformed";
        c.add("l1", t.l1);
        c.add("transformed_radius", t.radius);
        checks.push_back(std::move(c));
        results["transformed_tolerance_used"] = tol2;
        results["grids"].push_back("transformed_atom.grid.csv");
        if (cfg.save_grids && !out_dir.empty()) {
            const auto p = (std::filesystem::path(out_dir) / "transformed_atom.grid.csv").string();
            t.value.save_csv(p);
            bundle.files_written.push_back(p);
        }
    }
    if (cfg.save_grids && !out_dir.empty()) {
        const auto p = (std::filesystem::path(out_dir) / "atom.grid.csv").string();
        a.save_csv(p);
        bundle.files_written.push_back(p);
    }
}

void run_sweep(const RunConfig& cfg, json& results, const std::string& out_dir, ReportBundle& bundle) {
    require(cfg.kernel.has_value() && cfg.matrix.has_value(), "sweep needs kernel and matrix");
    require(!cfg.sweep_parameter.empty(), "sweep needs a parameter");

    json rows = json::array();
    std::string csv = "parameter,value,l_a,lstar,l2,ratio_l2_lstar,ratio_la_l2,smallest\n";
    for (double v : cfg.sweep_values) {
        MatrixFamily fam = *cfg.matrix;
        set_family_parameter(fam, cfg.sweep_parameter, v);
        const ConditionComparison cmp = compare_conditions(*cfg.kernel, fam, cfg.quadrature, cfg.norm_options);
        rows.push_back(json{{"value", v},
                            {"l_a", cmp.l_a.value},
                            {"lstar", cmp.lstar.value},
                            {"l2", cmp.l2.value},
                            {"ratio_l2_lstar", cmp.ratio_l2_lstar},
                            {"ratio_la_l2", cmp.ratio_la_l2},
                            {"smallest", cmp.smallest}});
        csv += cfg.sweep_parameter + "," + format_double(v) + "," + format_double(cmp.l_a.value) + "," +
               format_double(cmp.lstar.value) + "," + format_double(cmp.l2.value) + "," +
               format_double(cmp.ratio_l2_lstar) + "," + format_double(cmp.ratio_la_l2) + "," + cmp.smallest +
               "\n";
    }
    results["parameter"] = cfg.sweep_parameter;
    results["rows"] = rows;
    if (!out_dir.empty()) {
        const auto p = (std::filesystem::path(out_dir) / "sweep.csv").string();
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error("cannot open " + p + " for writing");
        out << csv;
        bundle.files_written.push_back(p);
    }
}

void run_search(const RunConfig& cfg, json& results) {
    require(cfg.search_count >= 1, "search count must be >= 1");
    require(cfg.search_dim >= 2 && cfg.search_dim <= 5, "search dimension must be in 2..5");
    const int n = cfg.search_dim;

    // the witness occupies sample slot 0; random matrices fill the rest
    SquareMatrix witness(n);
    witness(0, 0) = 1.0;
    witness(0, 1) = 1.0;
    const double w_ell = ell_norm(witness);
    const double w_spec = spectral_norm(witness);
    results["witness"] = json{{"entries", matrix_json(witness)},
                              {"ell_norm", w_ell},
                              {"spectral_norm", w_spec},
                              {"ratio", w_spec / w_ell}};

    struct Hit {
        std::int64_t index;
        double ratio;
        SquareMatrix m;
        double ell, spec;
    };
    std::vector<Hit> hits;
    for (std::int64_t i = 1; i < cfg.search_count; ++i) {
        SplitMix64 rng = substream(cfg.seed, static_cast<std::uint64_t>(i));
        SquareMatrix m(n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m(r, c) = rng.uniform(-1.0, 1.0);
        if (cfg.symmetric_only) m = (m + m.transposed()).scaled(0.5);
        const double ell = ell_norm(m);
        if (ell == 0.0) continue;
        const double spec = spectral_norm(m);
        if (spec > ell * (1.0 + 1e-12)) hits.push_back({i, spec / ell, m, ell, spec});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.ratio != b.ratio) return a.ratio > b.ratio;
        return a.index < b.index;
    });

    json findings = json::array();
    const std::size_t listed = std::min<std::size_t>(hits.size(), 100);
    for (std::size_t i = 0; i < listed; ++i) {
        findings.push_back(json{{"sample", hits[i].index},
                                {"ratio", hits[i].ratio},
                                {"ell_norm", hits[i].ell},
                                {"spectral_norm", hits[i].spec},
                                {"entries", matrix_json(hits[i].m)}});
    }
    results["findings"] = findings;
    results["hits"] = static_cast<std::int64_t>(hits.size());
    results["samples"] = cfg.search_count;
    results["dim"] = n;
    results["symmetric_only"] = cfg.symmetric_only;
}

} // namespace

ReportBundle run(const RunConfig& cfg, const std::string& out_dir) {
    static const std::vector<std::string> kinds{"norms",      "apply", "verify-l1",
                                                "verify-h1",  "atom-check",
                                                "sweep",      "counterexample-search"};
    require(std::find(kinds.begin(), kinds.end(), cfg.kind) != kinds.end(),
            "unknown experiment kind: " + cfg.kind);
    if (cfg.threads.has_value()) set_thread_count(*cfg.threads);

    ReportBundle bundle;
    json& rep = bundle.report;
    rep["schema_version"] = 1;
    rep["kind"] = cfg.kind;
    rep["seed"] = cfg.seed;
    rep["config"] = cfg.raw;

    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    json results = json::object();
    std::vector<VerificationReport> checks;
    if (cfg.kind == "norms")
        run_norms(cfg, results);
    else if (cfg.kind == "apply")
        run_apply(cfg, results, out_dir, bundle);
    else if (cfg.kind == "verify-l1")
        run_verify_l1(cfg, checks);
    else if (cfg.kind == "verify-h1")
        run_verify_h1(cfg, checks);
    else if (cfg.kind == "atom-check")
        run_atom_check(cfg, results, checks, out_dir, bundle);
    else if (cfg.kind == "sweep")
        run_sweep(cfg, results, out_dir, bundle);
    else
        run_search(cfg, results);

    rep["results"] = results;
    json jchecks = json::array();
    for (const auto& c : checks) {
        jchecks.push_back(check_json(c));
        bundle.all_pass = bundle.all_pass && c.pass;
    }
    rep["checks"] = jchecks;
    rep["pass"] = bundle.all_pass;

    if (!out_dir.empty()) {
        const auto p = (std::filesystem::path(out_dir) / "report.json").string();
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error("cannot open " + p + " for writing");
        out << rep.dump(2) << "\n";
        bundle.files_written.push_back(p);
    }
    return bundle;
}

} // namespace hkit

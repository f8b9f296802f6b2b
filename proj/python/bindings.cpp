#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "hkit/config.hpp"
#include "hkit/errors.hpp"
#include "hkit/hardy.hpp"
#include "hkit/kernels.hpp"
#include "hkit/matrix.hpp"
#include "hkit/numeric.hpp"
#include "hkit/operator.hpp"

namespace py = pybind11;
using namespace hkit;

namespace {

SquareMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<double> entries;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n) throw InvalidArgument("matrix rows must form a square");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return SquareMatrix(n, std::move(entries));
}

std::vector<std::vector<double>> matrix_rows(const SquareMatrix& m) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < m.dim(); ++i) {
        std::vector<double> row;
        for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

py::dict report_dict(const VerificationReport& r) {
    py::dict diag;
    for (const auto& d : r.diagnostics) diag[py::str(d.name)] = d.value;
    using namespace py::literals;
    return py::dict("name"_a = r.name, "lhs"_a = r.lhs, "rhs"_a = r.rhs, "ratio"_a = r.ratio,
                    "tolerance"_a = r.tolerance, "pass"_a = r.pass, "diagnostics"_a = diag);
}

} // namespace

PYBIND11_MODULE(_hkit, m) {
    m.doc() = "numerical toolkit for multidimensional Hausdorff operators";

    py::register_exception<Error>(m, "HkitError");

    // --- geometry and matrices ------------------------------------------
    py::class_<Box>(m, "Box")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("lo"), py::arg("hi"))
        .def_static("cube", &Box::cube, py::arg("dim"), py::arg("lo"), py::arg("hi"))
        .def_static("ball_bounds",
                    [](const std::vector<double>& c, double r) { return Box::ball_bounds(c, r); },
                    py::arg("center"), py::arg("radius"))
        .def_readonly("lo", &Box::lo)
        .def_readonly("hi", &Box::hi)
        .def_property_readonly("dim", &Box::dim)
        .def("volume", &Box::volume)
        .def("length", &Box::length, py::arg("axis"))
        .def("contains", [](const Box& b, const std::vector<double>& x) { return b.contains(x); },
             py::arg("point"))
        .def("scaled", &Box::scaled, py::arg("factor"));

    py::class_<SquareMatrix>(m, "SquareMatrix")
        .def(py::init(&matrix_from_rows), py::arg("rows"))
        .def_static("identity", &SquareMatrix::identity, py::arg("dim"))
        .def_static("diagonal",
                    [](const std::vector<double>& d) { return SquareMatrix::diagonal(d); },
                    py::arg("entries"))
        .def_static("rotation2", &SquareMatrix::rotation2, py::arg("theta"))
        .def_property_readonly("dim", &SquareMatrix::dim)
        .def("rows", &matrix_rows)
        .def("transposed", &SquareMatrix::transposed)
        .def("scaled", &SquareMatrix::scaled, py::arg("factor"))
        .def("__getitem__",
             [](const SquareMatrix& m_, std::pair<int, int> ij) {
                 if (ij.first < 0 || ij.first >= m_.dim() || ij.second < 0 || ij.second >= m_.dim())
                     throw py::index_error();
                 return m_(ij.first, ij.second);
             })
        .def("__mul__", [](const SquareMatrix& a, const SquareMatrix& b) { return a * b; })
        .def("__add__", [](const SquareMatrix& a, const SquareMatrix& b) { return a + b; })
        .def("__repr__", [](const SquareMatrix& m_) {
            return "SquareMatrix(dim=" + std::to_string(m_.dim()) + ")";
        });

    m.def("ell_norm", &ell_norm, py::arg("matrix"));
    m.def("spectral_norm", &spectral_norm, py::arg("matrix"));
    m.def("symmetric_eigenvalues",
          [](const SquareMatrix& s) { return symmetric_eigenvalues(s).eigenvalues; }, py::arg("matrix"));
    m.def("min_eigenvalue_gram", &min_eigenvalue_gram, py::arg("matrix"));
    m.def("det", &det, py::arg("matrix"));
    m.def("inverse", &inverse, py::arg("matrix"));
    m.def("is_numerically_singular", &is_numerically_singular, py::arg("matrix"));
    m.def("verify_spectral_identity",
          [](const SquareMatrix& m_) { return report_dict(verify_spectral_identity(m_)); },
          py::arg("matrix"));

    // --- kernels and matrix families ------------------------------------
    py::class_<KernelSpec>(m, "KernelSpec")
        .def_static("indicator", &KernelSpec::indicator, py::arg("support"), py::arg("amplitude") = 1.0)
        .def_static("gaussian", &KernelSpec::gaussian, py::arg("center"), py::arg("sigma"),
                    py::arg("amplitude") = 1.0, py::arg("truncation_sigmas") = 8.0)
        .def_static("radial_bump", &KernelSpec::radial_bump, py::arg("center"), py::arg("radius"),
                    py::arg("amplitude") = 1.0)
        .def_static("product_power", &KernelSpec::product_power, py::arg("support"), py::arg("exponents"),
                    py::arg("amplitude") = 1.0)
        .def_readwrite("amplitude", &KernelSpec::amplitude)
        .def_property_readonly("dim", [](const KernelSpec& k) { return k.dim; })
        .def("support", &KernelSpec::support)
        .def("__call__", [](const KernelSpec& k, const std::vector<double>& u) { return k(u); },
             py::arg("u"));

    py::class_<MatrixFamily>(m, "MatrixFamily")
        .def_static("scalar_dilation", &MatrixFamily::scalar_dilation, py::arg("dim"))
        .def_static("diagonal", &MatrixFamily::diagonal, py::arg("dim"))
        .def_static("rotation_scale", &MatrixFamily::rotation_scale, py::arg("theta0"), py::arg("theta1"),
                    py::arg("rho0"), py::arg("rho1"))
        .def_static("shear", &MatrixFamily::shear, py::arg("shear0"), py::arg("shear1"),
                    py::arg("scale0") = 1.0, py::arg("scale1") = 0.0)
        .def_static("constant", &MatrixFamily::constant, py::arg("matrix"))
        .def("inverted", &MatrixFamily::inverted)
        .def_property_readonly("dim", &MatrixFamily::dim)
        .def_property_readonly("family_name", &MatrixFamily::family_name)
        .def("matrix_at", [](const MatrixFamily& f, const std::vector<double>& u) { return f.matrix_at(u); },
             py::arg("u"))
        .def("det_at", [](const MatrixFamily& f, const std::vector<double>& u) { return f.det_at(u); },
             py::arg("u"));

    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init([](int nodes_per_axis, const std::string& rule, int refine, std::optional<Box> box) {
                 QuadratureSpec q;
                 q.nodes_per_axis = nodes_per_axis;
                 if (rule == "gauss-legendre")
                     q.rule = QuadRule::GaussLegendre;
                 else if (rule == "midpoint")
                     q.rule = QuadRule::Midpoint;
                 else
                     throw ConfigInvalid("unknown quadrature rule: " + rule);
                 q.refine = refine;
                 q.box = std::move(box);
                 q.validate();
                 return q;
             }),
             py::arg("nodes_per_axis") = 64, py::arg("rule") = "gauss-legendre", py::arg("refine") = 2,
             py::arg("box") = py::none())
        .def_readonly("nodes_per_axis", &QuadratureSpec::nodes_per_axis)
        .def_readonly("refine", &QuadratureSpec::refine);

    py::class_<NormOptions>(m, "NormOptions")
        .def(py::init<>())
        .def_readwrite("rtol_quad", &NormOptions::rtol_quad)
        .def_readwrite("max_skipped_mass", &NormOptions::max_skipped_mass);

    py::class_<NormReport>(m, "NormReport")
        .def_readonly("value", &NormReport::value)
        .def_readonly("convergence", &NormReport::convergence)
        .def_readonly("skipped_mass", &NormReport::skipped_mass)
        .def_readonly("nodes_used", &NormReport::nodes_used)
        .def_readonly("nodes_skipped", &NormReport::nodes_skipped)
        .def("__repr__", [](const NormReport& r) {
            return "NormReport(value=" + std::to_string(r.value) + ")";
        });

    m.def("norm_l_a", &norm_l_a, py::arg("kernel"), py::arg("family"), py::arg("quadrature"),
          py::arg("options") = NormOptions{});
    m.def("norm_lstar", &norm_lstar, py::arg("kernel"), py::arg("family"), py::arg("quadrature"),
          py::arg("options") = NormOptions{});
    m.def("norm_l2", &norm_l2, py::arg("kernel"), py::arg("family"), py::arg("quadrature"),
          py::arg("options") = NormOptions{});
    m.def("kernel_abs_mass", &kernel_abs_mass, py::arg("kernel"), py::arg("quadrature"),
          py::arg("options") = NormOptions{});

    py::class_<ConditionComparison>(m, "ConditionComparison")
        .def_readonly("l_a", &ConditionComparison::l_a)
        .def_readonly("lstar", &ConditionComparison::lstar)
        .def_readonly("l2", &ConditionComparison::l2)
        .def_readonly("ratio_l2_lstar", &ConditionComparison::ratio_l2_lstar)
        .def_readonly("ratio_la_l2", &ConditionComparison::ratio_la_l2)
        .def_readonly("smallest", &ConditionComparison::smallest);

    m.def("compare_conditions", &compare_conditions, py::arg("kernel"), py::arg("family"),
          py::arg("quadrature"), py::arg("options") = NormOptions{});

    // --- grid functions ---------------------------------------------------
    py::enum_<AtomShape>(m, "AtomShape")
        .value("SignSplit", AtomShape::SignSplit)
        .value("ShellDifference", AtomShape::ShellDifference);

    py::class_<FunctionSpec>(m, "FunctionSpec")
        .def_static("constant", &FunctionSpec::constant, py::arg("dim"), py::arg("value"))
        .def_static("gaussian", &FunctionSpec::gaussian, py::arg("center"), py::arg("sigma") = 1.0,
                    py::arg("amplitude") = 1.0)
        .def_static("indicator", &FunctionSpec::indicator, py::arg("support"), py::arg("amplitude") = 1.0)
        .def_static("atom_profile", &FunctionSpec::atom_profile, py::arg("center"), py::arg("radius"),
                    py::arg("shape"))
        .def_static("poly_bump", &FunctionSpec::poly_bump, py::arg("center"), py::arg("radius"),
                    py::arg("powers"), py::arg("amplitude") = 1.0)
        .def("__call__", [](const FunctionSpec& f, const std::vector<double>& x) { return f(x); },
             py::arg("x"));

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<Box, std::vector<int>>(), py::arg("box"), py::arg("resolution"))
        .def(py::init<Box, std::vector<int>, std::vector<double>>(), py::arg("box"), py::arg("resolution"),
             py::arg("values"))
        .def_property_readonly("box", &GridFunction::box)
        .def_property_readonly("resolution", &GridFunction::resolution)
        .def_property_readonly("dim", &GridFunction::dim)
        .def_property_readonly("size", &GridFunction::size)
        .def("spacing", &GridFunction::spacing, py::arg("axis"))
        .def("cell_volume", &GridFunction::cell_volume)
        .def("values",
             [](const GridFunction& g) {
                 const auto v = g.values();
                 return std::vector<double>(v.begin(), v.end());
             })
        .def("point",
             [](const GridFunction& g, std::int64_t flat) {
                 if (flat < 0 || flat >= g.size()) throw py::index_error();
                 std::vector<double> x(static_cast<std::size_t>(g.dim()));
                 g.point(flat, x);
                 return x;
             },
             py::arg("flat"))
        .def("__getitem__", [](const GridFunction& g, std::int64_t i) {
                 if (i < 0 || i >= g.size()) throw py::index_error();
                 return g[i];
             })
        .def("__setitem__", [](GridFunction& g, std::int64_t i, double v) {
                 if (i < 0 || i >= g.size()) throw py::index_error();
                 g[i] = v;
             })
        .def("__len__", &GridFunction::size)
        .def("eval_interp",
             [](const GridFunction& g, const std::vector<double>& x) { return g.eval_interp(x); },
             py::arg("x"))
        .def("l1_norm", &GridFunction::l1_norm)
        .def("l2_norm", &GridFunction::l2_norm)
        .def("integral", &GridFunction::integral)
        .def("mean_value", &GridFunction::mean_value)
        .def("max_abs", &GridFunction::max_abs)
        .def("scaled", &GridFunction::scaled, py::arg("factor"))
        .def("__add__", [](const GridFunction& a, const GridFunction& b) { return a + b; })
        .def("__sub__", [](const GridFunction& a, const GridFunction& b) { return a - b; })
        .def("save_csv", &GridFunction::save_csv, py::arg("path"))
        .def_static("load_csv", &GridFunction::load_csv, py::arg("path"));

    m.def("sample", &sample, py::arg("spec"), py::arg("box"), py::arg("resolution"));

    // --- the operator -----------------------------------------------------
    py::class_<HausdorffApplication>(m, "HausdorffApplication")
        .def_readonly("value", &HausdorffApplication::value)
        .def_readonly("out_of_box_mass", &HausdorffApplication::out_of_box_mass)
        .def_readonly("skipped_mass", &HausdorffApplication::skipped_mass)
        .def_readonly("nodes_used", &HausdorffApplication::nodes_used)
        .def_readonly("nodes_skipped", &HausdorffApplication::nodes_skipped);

    m.def("apply_hausdorff", &apply_hausdorff, py::arg("kernel"), py::arg("family"), py::arg("f"),
          py::arg("quadrature"));
    m.def("verify_l1_bound",
          [](const KernelSpec& phi, const MatrixFamily& a, const GridFunction& f, const QuadratureSpec& q,
             double slack, const NormOptions& opts) {
              return report_dict(verify_l1_bound(phi, a, f, q, slack, opts));
          },
          py::arg("kernel"), py::arg("family"), py::arg("f"), py::arg("quadrature"),
          py::arg("slack") = 0.05, py::arg("options") = NormOptions{});
    m.def("compose_with_matrix", &compose_with_matrix, py::arg("f"), py::arg("matrix"), py::arg("out_box"),
          py::arg("out_resolution"));

    // --- atoms, Riesz transforms, the H1 surrogate -------------------------
    m.def("ball_volume", &ball_volume, py::arg("dim"), py::arg("radius"));

    py::class_<Atom>(m, "Atom")
        .def(py::init([](int dim, std::vector<double> center, double radius, AtomShape profile) {
                 return Atom{dim, std::move(center), radius, profile};
             }),
             py::arg("dim"), py::arg("center"), py::arg("radius"),
             py::arg("profile") = AtomShape::SignSplit)
        .def_readonly("dim", &Atom::dim)
        .def_readonly("center", &Atom::center)
        .def_readonly("radius", &Atom::radius)
        .def_readonly("profile", &Atom::profile);

    m.def("make_atom", &make_atom, py::arg("spec"), py::arg("box"), py::arg("resolution"));
    m.def("check_atom",
          [](const GridFunction& g, const std::vector<double>& center, double radius, double tol) {
              return report_dict(check_atom(g, center, radius, tol));
          },
          py::arg("g"), py::arg("center"), py::arg("radius"), py::arg("tol"));
    m.def("atom_profile_constant", &atom_profile_constant, py::arg("profile"), py::arg("dim"));
    m.def("atom_check_tolerance", &atom_check_tolerance, py::arg("profile"), py::arg("dim"),
          py::arg("radius"), py::arg("effective_spacing"));

    py::class_<TransformedAtom>(m, "TransformedAtom")
        .def_readonly("value", &TransformedAtom::value)
        .def_readonly("center", &TransformedAtom::center)
        .def_readonly("radius", &TransformedAtom::radius)
        .def_readonly("l1", &TransformedAtom::l1);

    m.def("transform_atom",
          [](const GridFunction& a, const Atom& spec, const SquareMatrix& m_) {
              return transform_atom(a, spec, m_);
          },
          py::arg("a"), py::arg("spec"), py::arg("matrix"));
    m.def("verify_ellipsoid_containment",
          [](const SquareMatrix& m_, double r, int samples, std::uint64_t seed) {
              return report_dict(verify_ellipsoid_containment(m_, r, samples, seed));
          },
          py::arg("matrix"), py::arg("radius"), py::arg("num_samples"), py::arg("seed") = 0);

    m.def("riesz_transform", &riesz_transform, py::arg("f"), py::arg("p"));

    py::class_<H1Report>(m, "H1Report")
        .def_readonly("total", &H1Report::total)
        .def_readonly("terms", &H1Report::terms)
        .def_readonly("mean", &H1Report::mean);

    m.def("h1_surrogate", &h1_surrogate, py::arg("f"));
    m.def("h1_surrogate_norm", &h1_surrogate_norm, py::arg("f"));
    m.def("embed_zero_padded", &embed_zero_padded, py::arg("f"));
    m.def("wraparound_estimate", &wraparound_estimate, py::arg("f"));
    m.def("verify_dilation_h1",
          [](const GridFunction& f, const SquareMatrix& m_, double c_dil) {
              return report_dict(verify_dilation_h1(f, m_, c_dil));
          },
          py::arg("f"), py::arg("matrix"), py::arg("c_dil") = 10.0);
    m.def("verify_h1_bound",
          [](const KernelSpec& phi, const MatrixFamily& a, const GridFunction& f, const QuadratureSpec& q,
             double c_h1, const NormOptions& opts) {
              return report_dict(verify_h1_bound(phi, a, f, q, c_h1, opts));
          },
          py::arg("kernel"), py::arg("family"), py::arg("f"), py::arg("quadrature"), py::arg("c_h1") = 10.0,
          py::arg("options") = NormOptions{});

    // --- experiment configs ------------------------------------------------
    m.def("run_config",
          [](const std::string& config_json, const std::string& out_dir) {
              nlohmann::ordered_json j;
              try {
                  j = nlohmann::ordered_json::parse(config_json);
              } catch (const nlohmann::json::exception& e) {
                  throw ConfigInvalid(std::string("config is not valid json: ") + e.what());
              }
              const ReportBundle bundle = run(RunConfig::from_json(j), out_dir);
              return py::make_tuple(bundle.report.dump(2), bundle.all_pass);
          },
          py::arg("config_json"), py::arg("out_dir") = "",
          "Run an experiment config; returns (report_json, all_pass).");

    m.def("set_thread_count", &set_thread_count, py::arg("count"));
    m.def("thread_count", &thread_count);
}

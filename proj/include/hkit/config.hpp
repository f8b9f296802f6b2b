#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkit/grid.hpp"
#include "hkit/kernels.hpp"
#include "hkit/quadrature.hpp"

namespace hkit {

// A fully parsed experiment description. Every run with the same config and
// seed produces byte-identical outputs regardless of thread count.
struct RunConfig {
    std::string kind; // norms | apply | verify-l1 | verify-h1 | atom-check | sweep | counterexample-search
    std::uint64_t seed = 0;
    std::optional<int> threads;

    std::optional<KernelSpec> kernel;
    std::optional<MatrixFamily> matrix;
    std::optional<FunctionSpec> function;

    std::optional<Box> grid_box;
    std::vector<int> grid_resolution;
    QuadratureSpec quadrature;

    double slack = 0.05;            // verify-l1
    double c_h1 = 10.0;             // verify-h1
    double c_dil = 10.0;            // dilation checks
    std::optional<double> atom_tol; // atom-check; defaults to the profile formula
    NormOptions norm_options;

    bool save_grids = true;

    std::string sweep_parameter;
    std::vector<double> sweep_values;

    int search_count = 1000;
    int search_dim = 2;
    bool symmetric_only = false;

    nlohmann::ordered_json raw; // config echo for the report

    static RunConfig from_json(const nlohmann::ordered_json& j);
    static RunConfig from_file(const std::string& path);
};

struct ReportBundle {
    nlohmann::ordered_json report;
    bool all_pass = true;
    std::vector<std::string> files_written;
};

// Dispatches the config to the module operations, writes report.json plus
// any grid/sweep CSVs into out_dir (skipped when out_dir is empty).
ReportBundle run(const RunConfig& cfg, const std::string& out_dir);

} // namespace hkit

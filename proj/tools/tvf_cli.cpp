// SPDX-License-Identifier: Apache-2.0
// Experiment driver. Each subcommand writes CSV/PLY artifacts and a JSON
// report into --out. Exit codes: 0 success, 2 invalid input or failed
// precondition, 3 eigensolver non-convergence, 1 anything else.
#include "experiments.hpp"

#include <tvf/io.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
namespace ex = tvf::experiments;
using nlohmann::json;
using namespace tvf;

namespace {

constexpr int kCsvSchema = 1;

class Report
{
public:
    Report(std::string name, fs::path dir) : name_(std::move(name)), dir_(std::move(dir)) {}

    json& parameters() { return parameters_; }
    void metric(const std::string& key, double value)
    {
        if (!std::isfinite(value)) throw Error("metric '" + key + "' is not finite");
        metrics_[key] = value;
    }
    fs::path artifact(const std::string& file)
    {
        artifacts_.push_back(file);
        return dir_ / file;
    }

    void write() const
    {
        const json doc = {{"experiment", name_}, {"csv_schema", kCsvSchema}, {"parameters", parameters_}, {"metrics", metrics_},
                          {"artifacts", artifacts_}};
        std::ofstream out(dir_ / (name_ + ".json"));
        out << std::setw(2) << doc << '\n';
        if (!out) throw Error("cannot write report into '" + dir_.string() + "'");
        std::cout << doc["metrics"].dump() << '\n';
    }

private:
    std::string name_;
    fs::path dir_;
    json parameters_ = json::object();
    json metrics_ = json::object();
    std::vector<std::string> artifacts_;
};

void write_csv(const fs::path& path, const std::vector<std::string>& header, const Eigen::MatrixXd& rows)
{
    std::ofstream out(path);
    for (size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n' << std::setprecision(17);
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        for (Eigen::Index c = 0; c < rows.cols(); ++c) out << (c ? "," : "") << rows(r, c);
        out << '\n';
    }
    if (!out) throw Error("cannot write '" + path.string() + "'");
}

// Mesh input shared by several subcommands: an OBJ file or a generator.
struct MeshSource
{
    std::string path;
    std::string shape = "torus";
    int n = 10000;
    int passes = 4;
    std::uint64_t seed = 1;
    bool aniso = false;
    bool recompute_normals = false;
    bool unit_area = false;

    void add_to(CLI::App* app)
    {
        app->add_option("--mesh", path, "OBJ file (overrides --shape)");
        app->add_option("--shape", shape, "generated surface")->check(CLI::IsMember({"sphere", "icosphere", "torus"}));
        app->add_option("--n", n, "vertex count for sphere/torus")->check(CLI::PositiveNumber);
        app->add_option("--passes", passes, "icosphere subdivision passes")->check(CLI::NonNegativeNumber);
        app->add_option("--seed", seed, "generator seed");
        app->add_flag("--aniso", aniso, "anisotropic random sphere");
        app->add_flag("--recompute-normals", recompute_normals, "replace OBJ normals by Loop-limit normals");
        app->add_flag("--unit-area", unit_area, "rescale to unit total area");
    }

    OrientedMesh load() const
    {
        OrientedMesh m;
        if (!path.empty())
            m = load_obj(path, {recompute_normals});
        else if (shape == "sphere")
            m = gen_sphere_random(n, seed, aniso);
        else if (shape == "icosphere")
            m = gen_icosphere(passes);
        else
            m = gen_torus(n, seed).oriented;
        return unit_area ? rescale_unit_area(m) : m;
    }

    json describe() const
    {
        if (!path.empty()) return {{"mesh", path}, {"recompute_normals", recompute_normals}, {"unit_area", unit_area}};
        return {{"shape", shape}, {"n", n}, {"passes", passes}, {"seed", seed}, {"aniso", aniso}, {"unit_area", unit_area}};
    }
};

EnergySpec parse_energy(const std::string& name)
{
    const auto spec = energy_from_name(name);
    if (!spec) throw Error("unknown energy '" + name + "'");
    return *spec;
}

// "v,a,b" -> vertex and frame coefficients.
std::map<int, Vec2<double>> parse_vertex_vectors(const std::vector<std::string>& items, int num_vertices, const char* what)
{
    std::map<int, Vec2<double>> out;
    for (const auto& item : items) {
        std::istringstream ss(item);
        int v;
        double a, b;
        char c1, c2;
        if (!(ss >> v >> c1 >> a >> c2 >> b) || c1 != ',' || c2 != ',')
            throw Error(std::string(what) + " '" + item + "': expected vertex,a,b");
        if (v < 0 || v >= num_vertices) throw Error(std::string(what) + " vertex " + std::to_string(v) + " out of range");
        out[v] = {a, b};
    }
    return out;
}

EigenResult lumped_eigenfields(const FramedMesh& mesh, const EnergySpec& spec, int k, const EigenOptions& options)
{
    return smallest_generalized_eigs(vector_stiffness(mesh, spec), lump(vector_mass(mesh)), k, options);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tangent vector field finite elements: experiment driver"};
    app.require_subcommand(1);
    fs::path out_dir = ".";
    EigenOptions eig_options;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--max-restarts", eig_options.max_restarts, "eigensolver restart limit")->capture_default_str();
    app.add_option("--eig-tol", eig_options.tolerance, "eigensolver relative residual")->capture_default_str();

    // spectrum-sphere
    auto* spectrum = app.add_subcommand("spectrum-sphere", "connection spectrum of random or icosahedral unit spheres");
    int sp_n = 10000, sp_seeds = 10, sp_count = 30, sp_passes = -1;
    bool sp_aniso = false, sp_lump = false;
    spectrum->add_option("--n", sp_n, "vertices per random sphere")->check(CLI::PositiveNumber);
    spectrum->add_option("--seeds", sp_seeds, "number of random tessellations")->check(CLI::PositiveNumber);
    spectrum->add_option("--count", sp_count, "eigenvalues")->check(CLI::PositiveNumber);
    spectrum->add_option("--icosphere", sp_passes, "use the icosphere with this many passes instead");
    spectrum->add_flag("--aniso", sp_aniso, "anisotropic sampling");
    spectrum->add_flag("--lump", sp_lump, "lumped mass matrix");

    // hodge-compare
    auto* hodge = app.add_subcommand("hodge-compare", "Hodge eigenvalue pairs against cotangent eigenvalues");
    MeshSource hodge_mesh;
    int hodge_count = 20;
    hodge_mesh.add_to(hodge);
    hodge->add_option("--count", hodge_count, "number of cotangent eigenvalues paired")->check(CLI::PositiveNumber);

    // rotation-invariance
    auto* rotation = app.add_subcommand("rotation-invariance", "quarter-turn invariance of mass and stiffness");
    MeshSource rotation_mesh;
    rotation_mesh.add_to(rotation);

    // bracket-sphere
    auto* bsphere = app.add_subcommand("bracket-sphere", "Lie bracket error on the unit sphere");
    std::string bs_tess = "icosa", bs_mode = "projected";
    int bs_b = 2, bs_n = 10000, bs_passes = 5;
    std::uint64_t bs_seed = 1;
    bsphere->add_option("--tess", bs_tess, "tessellation")->check(CLI::IsMember({"icosa", "hull"}));
    bsphere->add_option("--b", bs_b, "bandwidth")->check(CLI::NonNegativeNumber);
    bsphere->add_option("--n", bs_n, "vertices for the random hull")->check(CLI::PositiveNumber);
    bsphere->add_option("--passes", bs_passes, "icosphere passes")->check(CLI::NonNegativeNumber);
    bsphere->add_option("--seed", bs_seed, "seed for fields and hull");
    bsphere->add_option("--mode", bs_mode, "bracket evaluation")->check(CLI::IsMember({"projected", "direct"}));

    // bracket-torus
    auto* btorus = app.add_subcommand("bracket-torus", "Lie bracket error on the generated torus");
    int bt_n = 10000, bt_b = 5, bt_seeds = 10;
    std::string bt_mode = "projected";
    btorus->add_option("--n", bt_n, "vertices")->check(CLI::PositiveNumber);
    btorus->add_option("--b", bt_b, "bandwidth")->check(CLI::NonNegativeNumber);
    btorus->add_option("--seeds", bt_seeds, "meshes and field pairs averaged")->check(CLI::PositiveNumber);
    btorus->add_option("--mode", bt_mode, "bracket evaluation")->check(CLI::IsMember({"projected", "direct"}));

    // interpolate
    auto* interp = app.add_subcommand("interpolate", "smoothest field through vertex constraints");
    MeshSource interp_mesh;
    std::vector<std::string> interp_constraints;
    std::string interp_energy = "connection";
    interp_mesh.add_to(interp);
    interp->add_option("--constraint", interp_constraints, "vertex,a,b in frame coordinates (repeatable)")->required();
    interp->add_option("--energy", interp_energy, "energy name")->capture_default_str();

    // vector-heat
    auto* heat = app.add_subcommand("vector-heat", "parallel transport of source vectors by heat flow");
    MeshSource heat_mesh;
    std::vector<std::string> heat_sources;
    double heat_time = 0.0;
    bool heat_consistent = false;
    heat_mesh.add_to(heat);
    heat->add_option("--source", heat_sources, "vertex,a,b in frame coordinates (repeatable)")->required();
    heat->add_option("--time", heat_time, "diffusion time (default: squared mean edge length)")->check(CLI::PositiveNumber);
    heat->add_flag("--consistent-mass", heat_consistent, "use the consistent mass in the heat steps");

    // eigenfields
    auto* eigen = app.add_subcommand("eigenfields", "smallest eigenfields of an energy");
    MeshSource eigen_mesh;
    std::string eigen_energy = "connection";
    int eigen_k = 10;
    bool eigen_lump = false, eigen_grade = false;
    eigen_mesh.add_to(eigen);
    eigen->add_option("--energy", eigen_energy, "energy name")->capture_default_str();
    eigen->add_option("--k", eigen_k, "number of fields")->check(CLI::PositiveNumber);
    eigen->add_flag("--lump", eigen_lump, "lumped mass matrix");
    eigen->add_flag("--grade", eigen_grade, "grade the computed space by divergence (needs even k)");

    // generate
    auto* generate = app.add_subcommand("generate", "write a generated surface as OBJ");
    MeshSource gen_mesh;
    std::string gen_file = "mesh.obj";
    gen_mesh.add_to(generate);
    generate->add_option("--file", gen_file, "output OBJ name inside --out")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        fs::create_directories(out_dir);
        const json eig_json = {{"tolerance", eig_options.tolerance}, {"max_restarts", eig_options.max_restarts}, {"seed", eig_options.seed}};

        if (*spectrum) {
            Report report("spectrum-sphere", out_dir);
            report.parameters() = {{"n", sp_n},         {"seeds", sp_seeds}, {"count", sp_count}, {"icosphere", sp_passes},
                                   {"aniso", sp_aniso}, {"lump", sp_lump},   {"eigensolver", eig_json}};
            const int runs = sp_passes >= 0 ? 1 : sp_seeds;
            const Eigen::VectorXd reference = sphere_connection_values(sp_count);
            Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(sp_count, 4);
            for (int s = 1; s <= runs; ++s) {
                const auto mesh = sp_passes >= 0 ? gen_icosphere(sp_passes) : gen_sphere_random(sp_n, static_cast<std::uint64_t>(s), sp_aniso);
                const auto framed = make_framed(mesh);
                const Eigen::VectorXd values = sp_lump ? lumped_eigenfields(framed, EnergySpec::connection(), sp_count, eig_options).values
                                                       : eigenfields(framed, EnergySpec::connection(), sp_count, quadrature_3pt(), eig_options).values;
                Eigen::MatrixXd rows(sp_count, 4);
                for (int i = 0; i < sp_count; ++i) rows.row(i) << i, values[i], reference[i], ex::relative_gap(values[i], reference[i]);
                write_csv(report.artifact("spectrum_seed" + std::to_string(s) + ".csv"), {"index", "eigenvalue", "reference", "ratio"}, rows);
                mean += rows / runs;
            }
            write_csv(report.artifact("spectrum_mean.csv"), {"index", "eigenvalue", "reference", "ratio"}, mean);
            report.metric("mean_ratio", mean.col(3).mean());
            report.metric("max_ratio", mean.col(3).maxCoeff());
            report.write();
        } else if (*hodge) {
            Report report("hodge-compare", out_dir);
            report.parameters() = {{"mesh", hodge_mesh.describe()}, {"count", hodge_count}, {"eigensolver", eig_json}};
            const auto cmp = ex::hodge_compare(hodge_mesh.load(), hodge_count, eig_options);
            Eigen::MatrixXd rows(hodge_count, 6);
            for (int i = 0; i < hodge_count; ++i)
                rows.row(i) << i, cmp.cotangent[i + 1], cmp.hodge[2 * (cmp.genus + i)], cmp.hodge[2 * (cmp.genus + i) + 1], cmp.ratio(i, 0), cmp.ratio(i, 1);
            write_csv(report.artifact("hodge_pairs.csv"), {"index", "cotangent", "hodge_even", "hodge_odd", "ratio_even", "ratio_odd"}, rows);
            Eigen::MatrixXd spectrum(cmp.hodge.size(), 2);
            spectrum << Eigen::VectorXd::LinSpaced(cmp.hodge.size(), 0, static_cast<double>(cmp.hodge.size() - 1)), cmp.hodge;
            write_csv(report.artifact("hodge_spectrum.csv"), {"index", "eigenvalue"}, spectrum);
            report.metric("genus", cmp.genus);
            report.metric("rho", cmp.rho);
            report.metric("max_ratio", cmp.ratio.maxCoeff());
            report.metric("mean_ratio", cmp.ratio.mean());
            report.write();
        } else if (*rotation) {
            Report report("rotation-invariance", out_dir);
            report.parameters() = {{"mesh", rotation_mesh.describe()}};
            const auto r = ex::rotation_invariance(make_framed(rotation_mesh.load()));
            report.metric("mass", r.mass);
            report.metric("traceless", r.traceless);
            report.metric("div_curl", r.div_curl);
            report.write();
        } else if (*bsphere) {
            Report report("bracket-sphere", out_dir);
            report.parameters() = {{"tess", bs_tess}, {"b", bs_b}, {"n", bs_n}, {"passes", bs_passes}, {"seed", bs_seed}, {"mode", bs_mode}};
            const auto mesh = make_framed(bs_tess == "icosa" ? gen_icosphere(bs_passes) : gen_sphere_random(bs_n, bs_seed));
            const auto mode = bs_mode == "direct" ? BracketMode::Direct : BracketMode::Projected;
            report.metric("vertices", mesh.num_vertices());
            report.metric("E", ex::sphere_bracket_error(mesh, bs_b, bs_seed, mode));
            report.write();
        } else if (*btorus) {
            Report report("bracket-torus", out_dir);
            report.parameters() = {{"n", bt_n}, {"b", bt_b}, {"seeds", bt_seeds}, {"mode", bt_mode}};
            const auto mode = bt_mode == "direct" ? BracketMode::Direct : BracketMode::Projected;
            Eigen::MatrixXd rows(bt_seeds, 2);
            for (int s = 1; s <= bt_seeds; ++s) {
                const auto seed = static_cast<std::uint64_t>(s);
                rows.row(s - 1) << s, ex::torus_bracket_error(gen_torus(bt_n, seed), bt_b, seed, mode);
            }
            write_csv(report.artifact("bracket_torus.csv"), {"seed", "E"}, rows);
            report.metric("mean_E", rows.col(1).mean());
            report.metric("max_E", rows.col(1).maxCoeff());
            report.write();
        } else if (*interp) {
            Report report("interpolate", out_dir);
            report.parameters() = {{"mesh", interp_mesh.describe()}, {"constraints", interp_constraints}, {"energy", interp_energy}};
            const auto framed = make_framed(interp_mesh.load());
            const auto constraints = parse_vertex_vectors(interp_constraints, framed.num_vertices(), "constraint");
            const auto field = interpolate_sparse(framed, constraints, parse_energy(interp_energy));
            save_field_csv(report.artifact("field.csv"), field.coeffs);
            save_ply(report.artifact("field.ply"), framed.oriented, vertex_vectors(framed, field));
            report.metric("energy", field.coeffs.dot(vector_stiffness(framed, parse_energy(interp_energy)) * field.coeffs));
            report.write();
        } else if (*heat) {
            Report report("vector-heat", out_dir);
            report.parameters() = {{"mesh", heat_mesh.describe()}, {"sources", heat_sources}, {"time", heat_time}, {"consistent_mass", heat_consistent}};
            const auto framed = make_framed(heat_mesh.load());
            const auto sources = parse_vertex_vectors(heat_sources, framed.num_vertices(), "source");
            const auto result = vector_heat(framed, sources, heat_time > 0 ? std::optional<double>(heat_time) : std::nullopt, quadrature_3pt(),
                                            heat_consistent ? HeatMass::Consistent : HeatMass::Lumped);
            save_field_csv(report.artifact("field.csv"), result.field.coeffs);
            save_ply(report.artifact("field.ply"), framed.oriented, vertex_vectors(framed, result.field));
            Eigen::MatrixXd rows(framed.num_vertices(), 4);
            for (int v = 0; v < framed.num_vertices(); ++v) rows.row(v) << v, result.magnitude[v], result.indicator[v], result.nearest_source[v];
            write_csv(report.artifact("scalars.csv"), {"vertex", "magnitude", "indicator", "nearest_source"}, rows);
            report.metric("time", result.time);
            report.write();
        } else if (*eigen) {
            Report report("eigenfields", out_dir);
            report.parameters() = {{"mesh", eigen_mesh.describe()}, {"energy", eigen_energy}, {"k", eigen_k},
                                   {"lump", eigen_lump},         {"grade", eigen_grade},  {"eigensolver", eig_json}};
            if (eigen_grade && eigen_k % 2 != 0) throw Error("--grade needs an even --k");
            const auto framed = make_framed(eigen_mesh.load());
            const auto spec = parse_energy(eigen_energy);
            auto result = eigen_lump ? lumped_eigenfields(framed, spec, eigen_k, eig_options)
                                     : eigenfields(framed, spec, eigen_k, quadrature_3pt(), eig_options);
            if (eigen_grade)
                result.vectors = grade_eigenspace(vector_mass(framed), vector_stiffness(framed, EnergySpec::divergence()),
                                                  build_J(framed.num_vertices()), result.vectors);
            Eigen::MatrixXd rows(eigen_k, 3);
            for (int i = 0; i < eigen_k; ++i) rows.row(i) << i, result.values[i], result.residuals[i];
            write_csv(report.artifact("eigenvalues.csv"), {"index", "eigenvalue", "residual"}, rows);
            for (int i = 0; i < eigen_k; ++i) {
                const VertexField f{result.vectors.col(i)};
                save_field_csv(report.artifact("field_" + std::to_string(i) + ".csv"), f.coeffs);
                save_ply(report.artifact("field_" + std::to_string(i) + ".ply"), framed.oriented, vertex_vectors(framed, f));
            }
            report.metric("smallest", result.values[0]);
            report.metric("largest", result.values[eigen_k - 1]);
            report.metric("restarts", result.restarts);
            report.write();
        } else if (*generate) {
            Report report("generate", out_dir);
            report.parameters() = {{"mesh", gen_mesh.describe()}};
            const auto mesh = gen_mesh.load();
            save_obj(report.artifact(gen_file), mesh);
            report.metric("vertices", mesh.num_vertices());
            report.metric("triangles", mesh.num_triangles());
            report.metric("genus", genus(mesh.mesh));
            report.write();
        }
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

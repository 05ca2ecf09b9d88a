#include "weylforge/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "weylforge/composer.hpp"
#include "weylforge/errors.hpp"
#include "weylforge/verifier.hpp"

namespace weylforge {

namespace {

using nlohmann::json;

constexpr double pi = std::numbers::pi;

// --- angle / gate-spec token parsing -------------------------------------

double parse_angle_token(const std::string& token) {
    if (token == "pi") {
        return pi;
    }
    if (token.rfind("pi/", 0) == 0) {
        const std::string den = token.substr(3);
        size_t pos = 0;
        unsigned long d = 0;
        try {
            d = std::stoul(den, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad angle token '" + token + "'");
        }
        if (pos != den.size() || d == 0) {
            throw std::invalid_argument("bad angle token '" + token + "'");
        }
        return pi / static_cast<double>(d);
    }
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad angle token '" + token + "'");
    }
    if (pos != token.size()) {
        throw std::invalid_argument("bad angle token '" + token + "'");
    }
    return v;
}

gate_spec parse_gate_token(const std::string& token) {
    if (token == "cnot") {
        return gate_spec::cnot();
    }
    if (token == "dcnot") {
        return gate_spec::dcnot();
    }
    if (token.rfind("cu:", 0) == 0) {
        const double g = parse_angle_token(token.substr(3));
        (void)gate_strength(g); // validate range now, for a clean input error
        return gate_spec::controlled_u(g);
    }
    throw std::invalid_argument("gate spec must be 'cnot', 'dcnot', or 'cu:GAMMA'");
}

// --- JSON (de)serialization ------------------------------------------------

json complex_json(const complexd& z) { return json::array({z.real(), z.imag()}); }

complexd complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument("complex entries must be [re, im] number pairs");
    }
    return complexd(j[0].get<double>(), j[1].get<double>());
}

template <typename Matrix>
json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) {
            row.push_back(complex_json(m(i, j)));
        }
        rows.push_back(row);
    }
    return rows;
}

template <typename Matrix>
Matrix matrix_from_json(const json& j) {
    Matrix m;
    if (!j.is_array() || static_cast<int>(j.size()) != m.rows()) {
        throw std::invalid_argument("matrix has wrong shape");
    }
    for (int i = 0; i < m.rows(); ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != m.cols()) {
            throw std::invalid_argument("matrix has wrong shape");
        }
        for (int c = 0; c < m.cols(); ++c) {
            m(i, c) = complex_from_json(row[c]);
        }
    }
    return m;
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw std::invalid_argument("cannot open file: " + path);
    }
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::invalid_argument("cannot open file for writing: " + path);
    }
    f << text;
    if (!f.good()) {
        throw std::invalid_argument("failed writing file: " + path);
    }
}

unitary4 load_unitary_file(const std::string& path) {
    const json j = load_json_file(path);
    if (!j.is_object() || !j.contains("matrix")) {
        throw std::invalid_argument(path + ": expected an object with a \"matrix\" field");
    }
    const unitary4 u = matrix_from_json<unitary4>(j.at("matrix"));
    if (!is_unitary(u)) {
        throw std::invalid_argument(path + ": matrix is not unitary within tolerance");
    }
    return u;
}

std::string unitary_file_text(const unitary4& u) {
    json j;
    j["matrix"] = matrix_json(u);
    return j.dump(2) + "\n";
}

json gate_spec_json(const gate_spec& spec) {
    switch (spec.kind) {
    case gate_spec::kind_t::cnot:
        return json{{"kind", "cnot"}};
    case gate_spec::kind_t::dcnot:
        return json{{"kind", "dcnot"}};
    case gate_spec::kind_t::controlled_u:
        break;
    }
    return json{{"kind", "cu"}, {"gamma", spec.gamma}};
}

json circuit_json(const circuit_ir& circuit, const gate_spec& spec) {
    json items = json::array();
    for (const auto& item : circuit.items) {
        if (const auto* ia = std::get_if<interaction_item>(&item)) {
            json e{{"type", "interaction"}};
            e["kind"] = ia->kind == interaction_item::kind_t::zz ? "zz" : "xxyy";
            e["gamma"] = ia->gamma;
            items.push_back(e);
        } else {
            const auto& loc = std::get<local_item>(item);
            items.push_back(json{{"type", "local"},
                                 {"q1", matrix_json(loc.q1)},
                                 {"q2", matrix_json(loc.q2)}});
        }
    }
    return json{{"gate_spec", gate_spec_json(spec)},
                {"global_phase", circuit.global_phase},
                {"items", items}};
}

circuit_ir circuit_from_json(const json& j) {
    if (!j.is_object() || !j.contains("items")) {
        throw malformed_circuit("circuit file must be an object with an \"items\" array");
    }
    circuit_ir circuit;
    circuit.global_phase = j.value("global_phase", 0.0);
    const json& items = j.at("items");
    if (!items.is_array()) {
        throw malformed_circuit("\"items\" must be an array");
    }
    for (const json& e : items) {
        const std::string type = e.value("type", "");
        if (type == "interaction") {
            const std::string kind = e.value("kind", "");
            interaction_item ia;
            if (kind == "zz") {
                if (!e.contains("gamma") || !e.at("gamma").is_number()) {
                    throw malformed_circuit("zz interaction requires a numeric \"gamma\"");
                }
                ia.kind = interaction_item::kind_t::zz;
                ia.gamma = e.at("gamma").get<double>();
            } else if (kind == "xxyy") {
                ia.kind = interaction_item::kind_t::xxyy;
                ia.gamma = pi / 2;
            } else {
                throw malformed_circuit("unknown interaction kind '" + kind + "'");
            }
            circuit.items.push_back(ia);
        } else if (type == "local") {
            if (!e.contains("q1") || !e.contains("q2")) {
                throw malformed_circuit("local item requires \"q1\" and \"q2\" blocks");
            }
            local_item loc;
            try {
                loc.q1 = matrix_from_json<unitary2>(e.at("q1"));
                loc.q2 = matrix_from_json<unitary2>(e.at("q2"));
            } catch (const std::invalid_argument& ex) {
                throw malformed_circuit(std::string("bad local block: ") + ex.what());
            }
            circuit.items.push_back(loc);
        } else {
            throw malformed_circuit("unknown item type '" + type + "'");
        }
    }
    return circuit;
}

json class_json(const canonical_class& c) { return json::array({c.c1, c.c2, c.c3}); }

json report_json(const synthesis_report& report) {
    return json{{"applications", report.applications},
                {"min_bound", report.min_bound},
                {"constructive_bound", report.constructive_bound},
                {"target_class", class_json(report.target_class)},
                {"residual", report.residual}};
}

std::string format_gamma(double g) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", g);
    return buf;
}

// --- subcommand bodies ------------------------------------------------------

int cmd_synthesize(const std::string& target_path, const std::string& gate_token,
                   const std::string& out_path, const std::string& report_path,
                   std::ostream& out) {
    const unitary4 target = load_unitary_file(target_path);
    const gate_spec spec = parse_gate_token(gate_token);
    const synthesis_report report = full_synthesize(target, spec);

    if (!out_path.empty()) {
        write_text_file(out_path, circuit_json(report.circuit, spec).dump(2) + "\n");
    }
    if (!report_path.empty()) {
        write_text_file(report_path, report_json(report).dump(2) + "\n");
    }
    out << report_json(report).dump(2) << "\n";
    return report.residual < tol_class() ? 0 : 2;
}

int cmd_bounds(const std::string& gmin_token, const std::string& gmax_token, int steps,
               const std::string& csv_path, std::ostream& out) {
    const double gmin = parse_angle_token(gmin_token);
    const double gmax = parse_angle_token(gmax_token.empty() ? gmin_token : gmax_token);
    if (steps < 1) {
        throw std::invalid_argument("steps must be at least 1");
    }
    if (!(gmin > 0 && gmin <= gmax)) {
        throw std::invalid_argument("need 0 < gamma-min <= gamma-max");
    }
    (void)gate_strength(gmin);
    (void)gate_strength(gmax); // validates gmax <= pi/2

    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        grid.push_back(steps == 1 ? gmin : gmin + (gmax - gmin) * i / (steps - 1));
    }
    const std::vector<bounds_row> rows = bounds_table(grid);

    std::ostringstream csv;
    csv << "gamma,min,constructive,old\n";
    for (const auto& r : rows) {
        csv << format_gamma(r.gamma) << "," << r.minimum << "," << r.constructive << ","
            << r.old_bound << "\n";
    }
    if (csv_path.empty()) {
        out << csv.str();
    } else {
        write_text_file(csv_path, csv.str());
        out << "wrote " << rows.size() << " rows to " << csv_path << "\n";
    }
    return 0;
}

int cmd_invariants(const std::string& target_path, std::ostream& out) {
    const unitary4 u = load_unitary_file(target_path);
    const canonical_class c = class_from_unitary(u);
    const local_invariants g = invariants_from_unitary(u);
    out << json{{"c", class_json(c)}, {"g", json::array({g.g1, g.g2, g.g3})}}.dump(2) << "\n";
    return 0;
}

int cmd_coverage(int n, const std::string& gamma_token, const std::string& mesh_path,
                 long long samples, std::uint64_t seed, bool samples_given, std::ostream& out) {
    const gate_strength gamma(parse_angle_token(gamma_token));
    if (n < 3) {
        throw std::invalid_argument(
            "coverage output needs n >= 3: the two-tetrahedron coverage region is "
            "established only for three or more applications");
    }
    const coverage_region region = coverage_vertices(n, gamma);

    json doc{{"n", region.n}, {"gamma", region.gamma}};
    json vb = json::array(), vc = json::array();
    for (int i = 0; i < 3; ++i) {
        vb.push_back(class_json(region.vertices_b[static_cast<size_t>(i)]));
        vc.push_back(class_json(region.vertices_c[static_cast<size_t>(i)]));
    }
    doc["vertices_b"] = vb;
    doc["vertices_c"] = vc;

    if (!mesh_path.empty()) {
        // Barycentric grids over the two boundary faces.
        std::ostringstream csv;
        csv << "face,c1,c2,c3\n";
        constexpr int res = 24;
        const auto emit = [&](char face, const std::array<canonical_class, 3>& v) {
            for (int i = 0; i <= res; ++i) {
                for (int j = 0; j <= res - i; ++j) {
                    const int k = res - i - j;
                    const double w1 = static_cast<double>(i) / res;
                    const double w2 = static_cast<double>(j) / res;
                    const double w3 = static_cast<double>(k) / res;
                    csv << face << "," << format_gamma(w1 * v[0].c1 + w2 * v[1].c1 + w3 * v[2].c1)
                        << "," << format_gamma(w1 * v[0].c2 + w2 * v[1].c2 + w3 * v[2].c2) << ","
                        << format_gamma(w1 * v[0].c3 + w2 * v[1].c3 + w3 * v[2].c3) << "\n";
                }
            }
        };
        emit('B', region.vertices_b);
        emit('C', region.vertices_c);
        write_text_file(mesh_path, csv.str());
        doc["mesh_file"] = mesh_path;
    }

    int code = 0;
    if (samples_given) {
        if (samples < 0) {
            throw std::invalid_argument("samples must be non-negative");
        }
        const coverage_sample_report rep = coverage_monte_carlo(n, gamma, samples, seed);
        doc["sampling"] = json{{"samples", rep.samples},
                               {"violations", rep.violations},
                               {"max_boundary_excess", rep.max_boundary_excess}};
        if (rep.violations > 0) {
            code = 2;
        }
    }
    out << doc.dump(2) << "\n";
    return code;
}

int cmd_verify(const std::string& circuit_path, const std::string& target_path,
               std::ostream& out) {
    const json cj = load_json_file(circuit_path);
    const circuit_ir circuit = circuit_from_json(cj);
    const unitary4 produced = simulate(circuit);
    const unitary4 target = load_unitary_file(target_path);
    const equivalence_verdict v = check_equivalence(produced, target);
    out << json{{"exact_up_to_phase", v.exact_up_to_phase},
                {"locally_equivalent", v.locally_equivalent},
                {"class_circuit", class_json(v.class_a)},
                {"class_target", class_json(v.class_b)},
                {"phase_residual", v.phase_residual},
                {"invariant_residual", v.invariant_residual}}
                .dump(2)
        << "\n";
    return v.exact_up_to_phase ? 0 : 2;
}

int cmd_random(std::uint64_t seed, int count, const std::string& out_dir, std::ostream& out) {
    if (count < 0) {
        throw std::invalid_argument("count must be non-negative");
    }
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw std::invalid_argument("cannot create directory " + out_dir + ": " + ec.message());
    }
    json files = json::array();
    for (int k = 0; k < count; ++k) {
        char name[48];
        std::snprintf(name, sizeof(name), "unitary_%04d.json", k);
        const unitary4 u = haar_random_su4(rng::derive(seed, static_cast<std::uint64_t>(k)));
        write_text_file((fs::path(out_dir) / name).string(), unitary_file_text(u));
        files.push_back(name);
    }
    const json manifest{{"seed", seed}, {"count", count}, {"files", files}};
    write_text_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    out << "wrote " << count << " unitaries and manifest.json to " << out_dir << "\n";
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    // Tolerance override: picked up fresh on every invocation.
    if (const char* tol_env = std::getenv("WEYLFORGE_TOL")) {
        try {
            size_t pos = 0;
            const std::string text(tol_env);
            const double v = std::stod(text, &pos);
            if (pos != text.size()) {
                throw std::invalid_argument("trailing characters");
            }
            set_tol_class(v);
        } catch (const std::exception& e) {
            err << "invalid WEYLFORGE_TOL: " << e.what() << "\n";
            return 1;
        }
    } else {
        set_tol_class(1e-9);
    }

    CLI::App app{"two-qubit circuit synthesis from controlled-U resources", "weylforge"};
    app.require_subcommand(1);

    std::string target_path, gate_token, out_path, report_path;
    auto* syn = app.add_subcommand("synthesize",
                                   "compile a unitary into interactions plus local gates");
    syn->add_option("--target", target_path, "unitary JSON file")->required();
    syn->add_option("--gate", gate_token, "entangling resource: cu:GAMMA | cnot | dcnot")
        ->required();
    syn->add_option("--out", out_path, "write the circuit JSON here");
    syn->add_option("--report", report_path, "write the synthesis report JSON here");

    std::string gmin_token, gmax_token, csv_path;
    int steps = 1;
    auto* bounds = app.add_subcommand("bounds", "emit application-count bounds over a gamma grid");
    bounds->add_option("--gamma-min", gmin_token, "grid start (decimal or pi/N)")->required();
    bounds->add_option("--gamma-max", gmax_token, "grid end (defaults to gamma-min)");
    bounds->add_option("--steps", steps, "number of grid points");
    bounds->add_option("--csv", csv_path, "write CSV here instead of stdout");

    std::string inv_target;
    auto* inv = app.add_subcommand("invariants", "print canonical class and local invariants");
    inv->add_option("--target", inv_target, "unitary JSON file")->required();

    int cov_n = 0;
    std::string cov_gamma, mesh_path;
    long long cov_samples = 0;
    std::uint64_t cov_seed = 0;
    auto* cov = app.add_subcommand("coverage", "coverage-region vertices, meshes, and sampling");
    cov->add_option("--n", cov_n, "number of applications")->required();
    cov->add_option("--gamma", cov_gamma, "interaction strength (decimal or pi/N)")->required();
    cov->add_option("--mesh", mesh_path, "write boundary-face mesh CSV here");
    auto* samples_opt = cov->add_option("--samples", cov_samples, "Monte-Carlo sample count");
    cov->add_option("--seed", cov_seed, "Monte-Carlo seed");

    std::string ver_circuit, ver_target;
    auto* ver = app.add_subcommand("verify", "check a circuit file against a target unitary");
    ver->add_option("--circuit", ver_circuit, "circuit JSON file")->required();
    ver->add_option("--target", ver_target, "unitary JSON file")->required();

    std::uint64_t rnd_seed = 0;
    int rnd_count = 0;
    std::string rnd_dir;
    auto* rnd = app.add_subcommand("random", "write seeded Haar-random unitary files");
    rnd->add_option("--seed", rnd_seed, "stream seed")->required();
    rnd->add_option("--count", rnd_count, "number of unitaries")->required();
    rnd->add_option("--out-dir", rnd_dir, "output directory")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("weylforge");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand(syn)) {
            return cmd_synthesize(target_path, gate_token, out_path, report_path, out);
        }
        if (app.got_subcommand(bounds)) {
            return cmd_bounds(gmin_token, gmax_token, steps, csv_path, out);
        }
        if (app.got_subcommand(inv)) {
            return cmd_invariants(inv_target, out);
        }
        if (app.got_subcommand(cov)) {
            return cmd_coverage(cov_n, cov_gamma, mesh_path, cov_samples, cov_seed,
                                samples_opt->count() > 0, out);
        }
        if (app.got_subcommand(ver)) {
            return cmd_verify(ver_circuit, ver_target, out);
        }
        if (app.got_subcommand(rnd)) {
            return cmd_random(rnd_seed, rnd_count, rnd_dir, out);
        }
    } catch (const malformed_circuit& e) {
        err << "malformed circuit: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const out_of_reach& e) {
        err << "out of reach: " << e.what() << "\n";
        return 2;
    } catch (const not_entangling& e) {
        err << "not entangling: " << e.what() << "\n";
        return 2;
    } catch (const not_locally_equivalent& e) {
        err << "not locally equivalent: " << e.what() << "\n";
        return 2;
    } catch (const decomposition_failure& e) {
        err << "decomposition failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "no subcommand selected\n";
    return 1;
}

} // namespace weylforge

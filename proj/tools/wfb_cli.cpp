// wfb: command-line front end for the surface toolkit.

#include "wfb/wfb.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using wfb::json;

struct Globals {
    double tol_constraint = 1e-8;
    double tol_spectral = 1e-10;
    std::uint64_t seed = 20240611;
    std::string out;
};

struct SurfaceSource {
    std::string id;
    std::string file;
    std::size_t nx = 129, ny = 65;
    double param = 0;
    std::string scheme = "auto";

    void add_to(CLI::App* cmd) {
        auto* g = cmd->add_option("--id", id, "gallery surface id");
        auto* f = cmd->add_option("--surface", file, "surface JSON file");
        g->excludes(f);
        cmd->add_option("--nx", nx, "nodes in x")->check(CLI::Range(5, 1 << 16));
        cmd->add_option("--ny", ny, "nodes in y")->check(CLI::Range(5, 1 << 16));
        cmd->add_option("--param", param, "surface parameter (spherical_cap radius)");
        cmd->add_option("--scheme", scheme, "derivatives: analytic, fd or auto")
            ->check(CLI::IsMember({"auto", "analytic", "fd"}));
    }

    [[nodiscard]] wfb::Immersion load() const {
        if (!file.empty()) return wfb::read_surface(file);
        return wfb::sample(id.empty() ? "mercator_sphere" : id, nx, ny, param);
    }

    [[nodiscard]] wfb::DerivativeScheme scheme_for(const wfb::Immersion& f) const {
        if (scheme == "fd") return wfb::DerivativeScheme::central_fd;
        if (scheme == "analytic") return wfb::DerivativeScheme::analytic_jet;
        return f.has_jets() ? wfb::DerivativeScheme::analytic_jet : wfb::DerivativeScheme::central_fd;
    }

    [[nodiscard]] json describe(const wfb::Immersion& f, wfb::DerivativeScheme s) const {
        return {{"name", f.name},
                {"nx", f.grid.nx()},
                {"ny", f.grid.ny()},
                {"scheme", s == wfb::DerivativeScheme::analytic_jet ? "analytic" : "fd"}};
    }
};

void emit(const Globals& g, const json& j) {
    if (g.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        wfb::write_text_file(g.out, j.dump(2) + "\n");
    }
}

void emit_csv(const std::string& path, const wfb::CsvTable& t) {
    if (!path.empty()) wfb::write_text_file(path, t.str());
}

json trace_json(const wfb::TraceReport& r) {
    return {{"kind", r.kind == wfb::ReflectionKind::plane ? "plane" : "line"},
            {"position_residual", r.position_resid},
            {"normal_residual", r.normal_resid},
            {"odd_traces", r.odd_traces},
            {"conformal_diag", r.conformal_diag},
            {"conformal_offdiag", r.conformal_offdiag},
            {"jacobian_floor", r.jacobian_floor},
            {"scale", r.scale}};
}

json error_json(const wfb::Error& e) {
    json j{{"error", wfb::to_string(e.kind())}, {"message", e.what()}};
    if (e.node()) j["node"] = *e.node();
    if (const auto* cv = dynamic_cast<const wfb::ConstraintViolated*>(&e)) j["report"] = trace_json(cv->report());
    return j;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_ladder(const std::string& s) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto x = item.find('x');
        if (x == std::string::npos) throw CLI::ValidationError("--ladder", "expected NXxNY entries, got '" + item + "'");
        out.emplace_back(std::stoul(item.substr(0, x)), std::stoul(item.substr(x + 1)));
    }
    return out;
}

std::vector<double> read_samples(const std::string& path) {
    const json j = wfb::read_json_file(path);
    const json& v = j.is_object() ? j.at("values") : j;
    return v.get<std::vector<double>>();
}

// ---------------------------------------------------------------------------

int cmd_energy(const Globals& g, const SurfaceSource& src) {
    const auto f = src.load();
    const auto scheme = src.scheme_for(f);
    const auto geom = wfb::compute_geometry(f, scheme);
    const auto e = wfb::energies(geom);
    const double resid = e.E - e.T - e.W;
    const bool pass = std::abs(resid) <= 1e-12 * std::max(1.0, std::abs(e.E));
    emit(g, {{"surface", src.describe(f, scheme)},
             {"W", e.W},
             {"E", e.E},
             {"T", e.T},
             {"area", e.area},
             {"E_minus_T_minus_W", resid},
             {"pass", pass}});
    return pass ? 0 : 1;
}

int cmd_variation(const Globals& g, const SurfaceSource& src, std::size_t count, double eps, double step) {
    const auto base = src.load();
    if (!base.chart) throw wfb::Error(wfb::ErrorKind::invalid_argument, "variation needs a gallery surface");
    std::mt19937_64 rng(g.seed);
    const auto& grid = base.grid;
    json cases = json::array();
    bool all = true;
    for (std::size_t c = 0; c < count; ++c) {
        const auto surf = wfb::perturb_with(base, wfb::random_trig_field(rng, grid.x_range(), grid.y_range()), eps);
        const auto field = wfb::random_trig_field(rng, grid.x_range(), grid.y_range());
        std::vector<wfb::Vec3> v(grid.size());
        std::vector<wfb::Jet> jv(grid.size());
        for (std::size_t j = 0; j < grid.ny(); ++j)
            for (std::size_t i = 0; i < grid.nx(); ++i) {
                jv[grid.index(i, j)] = field(grid.x(i), grid.y(j));
                v[grid.index(i, j)] = jv[grid.index(i, j)].f;
            }
        const auto scheme = wfb::DerivativeScheme::analytic_jet;
        const auto geom = wfb::compute_geometry(surf, scheme);
        const auto phi = wfb::make_variation(geom, v, jv, false);
        const double dw = wfb::first_variation_willmore(geom, phi).total;
        const double wp = wfb::willmore_energy(wfb::compute_geometry(wfb::perturbed(surf, v, &jv, step), scheme));
        const double wm = wfb::willmore_energy(wfb::compute_geometry(wfb::perturbed(surf, v, &jv, -step), scheme));
        const double fd = (wp - wm) / (2.0 * step);
        const bool pass = std::abs(dw - fd) <= 1e-6 + 1e-3 * std::abs(fd);
        all = all && pass;
        cases.push_back({{"weak_form", dw}, {"central_difference", fd}, {"difference", dw - fd}, {"pass", pass}});
    }
    emit(g, {{"surface", base.name}, {"seed", g.seed}, {"cases", cases}, {"pass", all}});
    return all ? 0 : 1;
}

int cmd_reflect(const Globals& g, const SurfaceSource& src, const std::string& kind_s) {
    const auto f = src.load();
    const auto kind = kind_s == "plane" ? wfb::ReflectionKind::plane : wfb::ReflectionKind::line;
    const auto full = wfb::reflect(f, kind, {g.tol_constraint});
    const auto scheme = f.has_jets() ? wfb::DerivativeScheme::analytic_jet : wfb::DerivativeScheme::central_fd;
    const auto trace = wfb::check_constraints(wfb::compute_geometry(f, scheme), kind);
    const auto parity = wfb::parity_audit(full, kind, wfb::DerivativeScheme::central_fd);
    const auto conf = wfb::conformality_preserved(wfb::compute_geometry(full, wfb::DerivativeScheme::central_fd));
    json summary{{"trace", trace_json(trace)},
                 {"parity", {{"f", parity.f},
                             {"fx", parity.fx},
                             {"fy", parity.fy},
                             {"fxx", parity.fxx},
                             {"fxy", parity.fxy},
                             {"fyy", parity.fyy}}},
                 {"conformality", {{"full", conf.full}, {"upper", conf.upper}}},
                 {"nx", full.grid.nx()},
                 {"ny", full.grid.ny()}};
    if (g.out.empty()) {
        summary["surface"] = wfb::to_json(full);
        std::cout << summary.dump() << '\n';
    } else {
        wfb::write_surface(g.out, full);
        std::cout << summary.dump(2) << '\n';
    }
    return 0;
}

int cmd_residuals(const Globals& g, const SurfaceSource& src, const std::string& support, const std::string& csv,
                  double tol) {
    const auto S = wfb::parse_support(support);
    const auto f = src.load();
    const auto scheme = src.scheme_for(f);
    const auto geom = wfb::compute_geometry(f, scheme);
    const auto r = wfb::free_bc_residuals(geom, S);
    wfb::CsvTable t{{"x", "dH_deta", "willmore", "navier", "l2", "thomsen"}, {}};
    for (std::size_t i = 0; i < r.x.size(); ++i)
        t.rows.push_back({r.x[i], r.dH_deta[i], r.willmore[i], r.navier[i], r.l2[i], r.thomsen[i]});
    emit_csv(csv, t);
    // the condition asserted: Navier on the line, the Willmore condition otherwise
    const bool line = S.kind == wfb::SupportSurface::Kind::line;
    const double asserted = line ? r.sup_navier : r.sup_willmore;
    const bool pass = asserted < tol;
    emit(g, {{"surface", src.describe(f, scheme)},
             {"support", S.describe()},
             {"sup", {{"dH_deta", wfb::sup_abs(r.dH_deta)},
                      {"willmore", r.sup_willmore},
                      {"navier", r.sup_navier},
                      {"l2", r.sup_l2},
                      {"thomsen", r.sup_thomsen}}},
             {"asserted", line ? "navier" : "willmore"},
             {"tolerance", tol},
             {"pass", pass}});
    return pass ? 0 : 1;
}

int cmd_extend(const Globals& g, const std::string& phi_file, const std::string& psi_file, std::size_t modes,
               std::size_t ny, double y_max, const std::string& csv) {
    const auto phi = read_samples(phi_file);
    const auto psi = psi_file.empty() ? std::vector<double>(phi.size(), 0.0) : read_samples(psi_file);
    if (psi.size() != phi.size())
        throw wfb::Error(wfb::ErrorKind::invalid_argument, "phi and psi sample counts differ");
    const auto fp = wfb::fourier_decompose(phi, modes, g.tol_spectral);
    const auto fq = wfb::fourier_decompose(psi, modes, g.tol_spectral);
    const wfb::ParamGrid grid(phi.size(), ny, wfb::default_x_range, {0.0, y_max});
    const auto u = wfb::biharmonic_extension(fp, fq, grid);
    wfb::CsvTable t{{"x", "y", "u"}, {}};
    for (std::size_t j = 0; j < grid.ny(); ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i) t.rows.push_back({grid.x(i), grid.y(j), u.values[grid.index(i, j)]});
    emit_csv(csv, t);
    emit(g, {{"grid",
              {{"nx", grid.nx()},
               {"ny", grid.ny()},
               {"x_range", {grid.x_range().lo, grid.x_range().hi}},
               {"y_range", {grid.y_range().lo, grid.y_range().hi}}}},
             {"modes", modes},
             {"alias_warning", fp.alias_warning || fq.alias_warning},
             {"values", u.values}});
    return 0;
}

int cmd_gallery_list(const Globals& g) {
    emit(g, wfb::gallery_ids());
    return 0;
}

int cmd_gallery_sample(const Globals& g, const SurfaceSource& src, double tilt) {
    auto f = src.load();
    if (tilt != 0) {
        f = wfb::rigid_motion(f, wfb::rotation_about_e1(tilt));
        f.name += " tilted";
    }
    if (g.out.empty()) {
        std::cout << wfb::to_json(f).dump() << '\n';
    } else {
        wfb::write_surface(g.out, f);
    }
    return 0;
}

int cmd_converge(const Globals& g, const std::string& quantity, const std::string& ladder_s, const std::string& csv) {
    const auto ladder = parse_ladder(ladder_s);
    wfb::ConvergenceTable table;
    using wfb::DerivativeScheme;
    if (quantity == "hemisphere-W" || quantity == "hemisphere-E") {
        const bool w = quantity == "hemisphere-W";
        table = wfb::convergence_study(
            quantity, ladder,
            [w](std::size_t nx, std::size_t ny) {
                const auto e = wfb::energies(
                    wfb::compute_geometry(wfb::sample("hemisphere", nx, ny), DerivativeScheme::central_fd));
                return w ? e.W : e.E;
            },
            2.0 * wfb::pi);
    } else if (quantity == "sphere-operator") {
        table = wfb::convergence_study(
            quantity, ladder,
            [](std::size_t nx, std::size_t ny) {
                return wfb::willmore_operator(
                           wfb::compute_geometry(wfb::sample("mercator_sphere", nx, ny), DerivativeScheme::central_fd))
                    .sup_interior;
            },
            0.0);
    } else if (quantity == "parity") {
        table = wfb::convergence_study(
            quantity, ladder,
            [](std::size_t nx, std::size_t ny) {
                const auto full = wfb::reflect(wfb::sample("mercator_sphere", nx, ny), wfb::ReflectionKind::plane);
                return wfb::parity_audit(full, wfb::ReflectionKind::plane, DerivativeScheme::central_fd).max();
            },
            0.0);
    } else if (quantity == "density-identity") {
        table = wfb::convergence_study(
            quantity, ladder,
            [](std::size_t nx, std::size_t ny) {
                const wfb::ParamGrid grid(nx, ny, wfb::default_x_range, {-0.8, 0.8});
                const auto c = wfb::make_immersion(grid, wfb::charts::catenoid, "catenoid");
                return wfb::inversion_density_identity(c, wfb::invert(c)).sup_residual;
            },
            0.0);
    } else {
        throw CLI::ValidationError("--quantity", "unknown quantity '" + quantity + "'");
    }
    if (table.non_monotone) std::cerr << "warning: NonMonotone errors in " << quantity << '\n';
    emit_csv(csv, table.to_csv());
    emit(g, table.to_json());
    return 0;
}

int cmd_audit(const Globals& g, std::size_t modes) {
    const std::size_t nx = 2 * modes + 3;
    auto bump = [](double x) { return std::abs(x) < wfb::pi / 2 ? std::pow(std::cos(x), 8) : 0.0; };
    std::vector<wfb::EstimateCase> cases{
        {"cos x", wfb::fourier_decompose([](double x) { return std::cos(x); }, nx, modes),
         wfb::FourierData::zero(modes)},
        {"cos 4x, sin x", wfb::fourier_decompose([](double x) { return std::cos(4 * x); }, nx, modes),
         wfb::fourier_decompose([](double x) { return std::sin(x); }, nx, modes)},
        {"bump, bump sin 2x", wfb::fourier_decompose(bump, nx, modes),
         wfb::fourier_decompose([&](double x) { return bump(x) * std::sin(2 * x); }, nx, modes)},
    };
    const auto a = wfb::estimate_audit(cases);
    json rows = json::array();
    for (const auto& r : a.rows)
        rows.push_back({{"case", r.name},
                        {"c1_ratio", r.c1_ratio},
                        {"cauchy_ratio", r.cauchy_ratio},
                        {"boundary_ratio", r.boundary_ratio},
                        {"dirichlet_ratio", r.dirichlet_ratio}});
    emit(g, {{"rows", rows},
             {"max",
              {{"c1_ratio", a.max.c1_ratio},
               {"cauchy_ratio", a.max.cauchy_ratio},
               {"boundary_ratio", a.max.boundary_ratio},
               {"dirichlet_ratio", a.max.dirichlet_ratio}}}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Willmore free-boundary surface toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--tol-constraint", g.tol_constraint, "relative tolerance of the reflection constraints")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-spectral", g.tol_spectral, "aliasing threshold of the Fourier tail")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "seed of the random batteries");
    app.add_option("--out", g.out, "output file (default: stdout)");

    SurfaceSource energy_src, var_src, refl_src, res_src, sample_src;

    auto* energy = app.add_subcommand("energy", "W, E, T and area of a surface");
    energy_src.add_to(energy);

    auto* variation = app.add_subcommand("variation", "weak first variation against central differences");
    var_src.add_to(variation);
    std::size_t var_count = 20;
    double var_eps = 0.1, var_step = 1e-4;
    variation->add_option("--count", var_count, "random (surface, field) pairs")->check(CLI::PositiveNumber);
    variation->add_option("--perturbation", var_eps, "amplitude of the surface perturbation");
    variation->add_option("--step", var_step, "central-difference step")->check(CLI::PositiveNumber);

    auto* reflect = app.add_subcommand("reflect", "reflect a surface over Q+ to Q");
    refl_src.add_to(reflect);
    std::string kind = "plane";
    reflect->add_option("--kind", kind, "plane or line")->check(CLI::IsMember({"plane", "line"}));

    auto* residuals = app.add_subcommand("residuals", "free boundary residuals along I");
    res_src.add_to(residuals);
    std::string support = "plane", res_csv;
    double res_tol = 1e-6;
    residuals->add_option("--support", support, "plane, line or sphere:R")
        ->check(CLI::Validator(
            [](std::string& s) {
                try {
                    wfb::parse_support(s);
                    return std::string{};
                } catch (const wfb::Error& e) {
                    return std::string(e.what());
                }
            },
            "SUPPORT"));
    residuals->add_option("--csv", res_csv, "per-node CSV output");
    residuals->add_option("--tol", res_tol, "tolerance of the asserted condition")->check(CLI::PositiveNumber);

    auto* extend = app.add_subcommand("extend", "biharmonic extension of boundary data");
    std::string phi_file, psi_file, ext_csv;
    std::size_t modes = 128, ext_ny = 65;
    double y_max = 1.0;
    extend->add_option("--phi", phi_file, "JSON samples of phi on [-pi, pi]")->required();
    extend->add_option("--psi", psi_file, "JSON samples of psi (default 0)");
    extend->add_option("--modes", modes, "Fourier modes")->check(CLI::PositiveNumber);
    extend->add_option("--ny", ext_ny, "nodes in y")->check(CLI::Range(5, 1 << 16));
    extend->add_option("--y-max", y_max, "height of the output grid")->check(CLI::PositiveNumber);
    extend->add_option("--csv", ext_csv, "CSV output");

    auto* gallery = app.add_subcommand("gallery", "analytic example surfaces");
    gallery->require_subcommand(1);
    auto* glist = gallery->add_subcommand("list", "list surface ids");
    auto* gsample = gallery->add_subcommand("sample", "sample a surface to the JSON format");
    sample_src.add_to(gsample);
    double tilt = 0;
    gsample->add_option("--tilt", tilt, "rotation about e1 applied after sampling (radians)");

    auto* converge = app.add_subcommand("converge", "convergence study over a refinement ladder");
    std::string quantity = "hemisphere-W", ladder = "65x33,129x65,257x129", conv_csv;
    converge->add_option("--quantity", quantity, "hemisphere-W, hemisphere-E, sphere-operator, parity, density-identity");
    converge->add_option("--ladder", ladder, "comma separated NXxNY rungs");
    converge->add_option("--csv", conv_csv, "CSV output");

    auto* audit = app.add_subcommand("audit", "empirical ratios of the extension estimates");
    std::size_t audit_modes = 64;
    audit->add_option("--modes", audit_modes, "Fourier modes")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*energy) return cmd_energy(g, energy_src);
        if (*variation) return cmd_variation(g, var_src, var_count, var_eps, var_step);
        if (*reflect) return cmd_reflect(g, refl_src, kind);
        if (*residuals) return cmd_residuals(g, res_src, support, res_csv, res_tol);
        if (*extend) return cmd_extend(g, phi_file, psi_file, modes, ext_ny, y_max, ext_csv);
        if (*glist) return cmd_gallery_list(g);
        if (*gsample) return cmd_gallery_sample(g, sample_src, tilt);
        if (*converge) return cmd_converge(g, quantity, ladder, conv_csv);
        if (*audit) return cmd_audit(g, audit_modes);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const wfb::Error& e) {
        std::cout << error_json(e).dump() << '\n';
        return 1;
    }
    return 2;
}

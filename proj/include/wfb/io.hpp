#pragma once

#include "geometry.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace wfb {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Surface file:
//   {grid: {nx, ny, x_range, y_range, ys?}, positions: [[x,y,z], ...] row-major,
//    meta: {name, analytic_id?, collapsed_far_edge?}}
// Doubles are written in shortest round-trip form.
// ---------------------------------------------------------------------------

inline json to_json(const Immersion& f) {
    const ParamGrid& g = f.grid;
    json grid{{"nx", g.nx()},
              {"ny", g.ny()},
              {"x_range", {g.x_range().lo, g.x_range().hi}},
              {"y_range", {g.y_range().lo, g.y_range().hi}}};
    // y nodes are stored when they do not follow the uniform layout (reflected grids)
    const ParamGrid uniform(g.nx(), g.ny(), g.x_range(), g.y_range());
    if (uniform.ys() != g.ys()) grid["ys"] = g.ys();
    json pos = json::array();
    for (const auto& p : f.positions) pos.push_back({p.x, p.y, p.z});
    json meta{{"name", f.name}};
    if (!f.analytic_id.empty()) meta["analytic_id"] = f.analytic_id;
    if (f.collapsed_far_edge) meta["collapsed_far_edge"] = true;
    return {{"grid", grid}, {"positions", pos}, {"meta", meta}};
}

inline Immersion immersion_from_json(const json& j) {
    try {
        const auto& gj = j.at("grid");
        const auto nx = gj.at("nx").get<std::size_t>(), ny = gj.at("ny").get<std::size_t>();
        const auto xr = gj.at("x_range").get<std::array<double, 2>>();
        const auto yr = gj.at("y_range").get<std::array<double, 2>>();
        ParamGrid grid = gj.contains("ys")
                             ? ParamGrid::with_y_coordinates(nx, {xr[0], xr[1]}, gj.at("ys").get<std::vector<double>>())
                             : ParamGrid(nx, ny, {xr[0], xr[1]}, {yr[0], yr[1]});
        std::vector<Vec3> pos;
        pos.reserve(grid.size());
        for (const auto& p : j.at("positions")) {
            const auto a = p.get<std::array<double, 3>>();
            pos.push_back({a[0], a[1], a[2]});
        }
        Immersion f = make_immersion(grid, std::move(pos));
        if (j.contains("meta")) {
            const auto& m = j.at("meta");
            f.name = m.value("name", std::string{});
            f.analytic_id = m.value("analytic_id", std::string{});
            f.collapsed_far_edge = m.value("collapsed_far_edge", false);
        }
        return f;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::invalid_argument, std::string("malformed surface file: ") + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::invalid_argument, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::invalid_argument, "cannot parse '" + path + "': " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path + "'");
    out << text;
}

inline Immersion read_surface(const std::string& path) { return immersion_from_json(read_json_file(path)); }

inline void write_surface(const std::string& path, const Immersion& f) { write_text_file(path, to_json(f).dump()); }

// ---------------------------------------------------------------------------
// CSV tables
// ---------------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void write(std::ostream& os) const {
        for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
        os << '\n';
        std::ostringstream cell;
        cell.precision(17);
        for (const auto& r : rows) {
            for (std::size_t k = 0; k < r.size(); ++k) {
                cell.str({});
                cell << r[k];
                os << (k ? "," : "") << cell.str();
            }
            os << '\n';
        }
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }
};

// ---------------------------------------------------------------------------
// Convergence studies
// ---------------------------------------------------------------------------

struct ConvergenceRow {
    double h = 0;
    double value = 0;
    std::optional<double> error;
    std::optional<double> order; // from this rung and the previous one
};

struct ConvergenceTable {
    std::string quantity;
    std::optional<double> target;
    std::vector<ConvergenceRow> rows;
    bool non_monotone = false;

    // Order measured on the finest rungs that have one.
    [[nodiscard]] std::optional<double> final_order() const {
        for (auto it = rows.rbegin(); it != rows.rend(); ++it)
            if (it->order) return it->order;
        return std::nullopt;
    }

    [[nodiscard]] json to_json() const {
        json r = json::array();
        for (const auto& row : rows) {
            json e{{"h", row.h}, {"value", row.value}};
            e["error"] = row.error ? json(*row.error) : json(nullptr);
            e["order"] = row.order ? json(*row.order) : json(nullptr);
            r.push_back(e);
        }
        json out{{"quantity", quantity}, {"rows", r}, {"non_monotone", non_monotone}};
        out["target"] = target ? json(*target) : json(nullptr);
        return out;
    }

    [[nodiscard]] CsvTable to_csv() const {
        CsvTable t{{"h", "value", "error", "order"}, {}};
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (const auto& row : rows) t.rows.push_back({row.h, row.value, row.error.value_or(nan), row.order.value_or(nan)});
        return t;
    }
};

// Errors against `target` when given; otherwise differences of successive values stand in
// for the error of the coarser rung (Richardson), so orders need three rungs either way.
inline ConvergenceTable convergence_table(std::string quantity, std::span<const double> h, std::span<const double> values,
                                          std::optional<double> target = std::nullopt) {
    if (h.size() != values.size()) throw Error(ErrorKind::invalid_argument, "ladder and values differ in length");
    if (h.size() < 3) throw Error(ErrorKind::insufficient_grid, "a convergence study needs at least 3 rungs");
    for (std::size_t k = 1; k < h.size(); ++k)
        if (!(h[k] < h[k - 1])) throw Error(ErrorKind::invalid_argument, "ladder must refine strictly");
    ConvergenceTable t;
    t.quantity = std::move(quantity);
    t.target = target;
    const std::size_t n = h.size();
    std::vector<std::optional<double>> err(n);
    if (target) {
        for (std::size_t k = 0; k < n; ++k) err[k] = std::abs(values[k] - *target);
    } else {
        for (std::size_t k = 0; k + 1 < n; ++k) err[k] = std::abs(values[k + 1] - values[k]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        ConvergenceRow row{h[k], values[k], err[k], std::nullopt};
        if (k > 0 && err[k] && err[k - 1]) {
            if (*err[k] > 0 && *err[k - 1] > 0) row.order = std::log(*err[k - 1] / *err[k]) / std::log(h[k - 1] / h[k]);
            if (*err[k] > *err[k - 1]) t.non_monotone = true;
        }
        t.rows.push_back(row);
    }
    return t;
}

template <class Fn>
ConvergenceTable convergence_study(std::string quantity, const std::vector<std::pair<std::size_t, std::size_t>>& ladder,
                                   Fn&& measure, std::optional<double> target = std::nullopt) {
    std::vector<double> h, v;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        if (k > 0 && (ladder[k].first <= ladder[k - 1].first || ladder[k].second <= ladder[k - 1].second))
            throw Error(ErrorKind::invalid_argument, "ladder must be strictly increasing");
        h.push_back(1.0 / static_cast<double>(ladder[k].first - 1));
        v.push_back(measure(ladder[k].first, ladder[k].second));
    }
    return convergence_table(std::move(quantity), h, v, target);
}

} // namespace wfb

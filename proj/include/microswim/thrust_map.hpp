#pragma once

// Calibrated mean-thrust surrogate.
//
// The map is built from a measured speed table: for each (tail, frequency,
// duty, mean speed) row the fitted thrust is the one that balances
// longitudinal drag at that steady speed, thrust = c_long * v^2. Entries are
// stored as thrust per unit duty; a query scales linearly with the requested
// duty. Lookups bilinearly interpolate over (length, frequency) inside one
// tail family and refuse to extrapolate outside the calibrated hull.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "microswim/hydro.hpp"

namespace microswim {

// One row of the calibration speed table (CSV units: mm, Hz, mm/s).
struct SpeedTableRow {
    TailGeometry tail;
    double freq_hz = 0.0;
    double duty = 0.0;
    double mean_speed_m_s = 0.0;
};

class ExtrapolationError : public std::domain_error {
  public:
    explicit ExtrapolationError(const std::string& what) : std::domain_error(what) {}
};

class ThrustMap {
  public:
    struct Entry {
        TailGeometry tail;
        double freq_hz = 0.0;
        double duty = 0.0;      // calibration duty
        double thrust_n = 0.0;  // fitted thrust at the calibration duty
    };

    static constexpr const char* kInterpolation = "bilinear";

    void add_entry(const Entry& e) {
        require(e.thrust_n >= 0.0, "ThrustMap: thrust must be >= 0");
        require(e.duty > 0.0, "ThrustMap: calibration duty must be > 0");
        require(e.freq_hz > 0.0, "ThrustMap: frequency must be > 0");
        entries_.push_back(e);
        grids_valid_ = false;
    }

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    // Mean thrust for a tail at excitation frequency f and duty cycle.
    // Thrust per unit duty is bilinearly interpolated over (length, freq)
    // within the tail's family, then scaled by the query duty (clamped at 0).
    double mean_thrust(const TailGeometry& tail, double freq_hz, double duty) const {
        const Grid& g = family_grid(tail);
        const double unit = g.interpolate_unit_thrust(tail.length_m, freq_hz);
        return unit * std::max(duty, 0.0);
    }

    // True when (tail, freq) lies inside the calibrated hull of its family.
    bool covers(const TailGeometry& tail, double freq_hz) const {
        try {
            const Grid& g = family_grid(tail);
            return g.in_hull(tail.length_m, freq_hz);
        } catch (const ExtrapolationError&) {
            return false;
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json entries = nlohmann::json::array();
        for (const Entry& e : entries_) {
            nlohmann::json row;
            row["family"] = to_string(e.tail.family);
            row["length_mm"] = e.tail.length_m * 1e3;
            row["height_mm"] = e.tail.height_m() * 1e3;
            row["aspect_ratio"] = e.tail.family == TailFamily::Parabolic
                                      ? e.tail.aspect_ratio
                                      : e.tail.height_rect_m / e.tail.length_m;
            row["freq_hz"] = e.freq_hz;
            row["duty"] = e.duty;
            row["thrust_n"] = e.thrust_n;
            entries.push_back(row);
        }
        return {{"interpolation", kInterpolation}, {"entries", entries}};
    }

    static ThrustMap from_json(const nlohmann::json& j) {
        if (j.at("interpolation").get<std::string>() != kInterpolation)
            throw std::invalid_argument("ThrustMap: unsupported interpolation mode");
        ThrustMap map;
        for (const auto& row : j.at("entries")) {
            Entry e;
            const TailFamily family = tail_family_from_string(row.at("family").get<std::string>());
            const double length_m = row.at("length_mm").get<double>() * 1e-3;
            if (family == TailFamily::Parabolic) {
                e.tail = TailGeometry::parabolic(length_m, row.at("aspect_ratio").get<double>());
            } else {
                e.tail = TailGeometry::rectangular(length_m, row.at("height_mm").get<double>() * 1e-3);
            }
            e.freq_hz = row.at("freq_hz").get<double>();
            e.duty = row.at("duty").get<double>();
            e.thrust_n = row.at("thrust_n").get<double>();
            map.add_entry(e);
        }
        return map;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("ThrustMap: cannot write " + path);
        out << to_json().dump(2) << "\n";
    }

    static ThrustMap load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("ThrustMap: cannot read " + path);
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }

  private:
    // Rectangular (length x frequency) grid of unit-duty thrusts for one
    // tail family. Built lazily from the flat entry list.
    struct Grid {
        TailFamily family = TailFamily::Parabolic;
        double shape_param = 0.0;  // aspect ratio (parabolic) or height (rectangular)
        std::vector<double> lengths;  // ascending, m
        std::vector<double> freqs;    // ascending, Hz
        std::vector<double> unit_thrust;  // [li * freqs.size() + fi], N per unit duty

        double at(std::size_t li, std::size_t fi) const { return unit_thrust[li * freqs.size() + fi]; }

        bool in_hull(double length_m, double freq_hz) const {
            return length_m >= lengths.front() - 1e-12 && length_m <= lengths.back() + 1e-12 &&
                   freq_hz >= freqs.front() - 1e-12 && freq_hz <= freqs.back() + 1e-12;
        }

        double interpolate_unit_thrust(double length_m, double freq_hz) const {
            if (!in_hull(length_m, freq_hz))
                throw ExtrapolationError("ThrustMap: query outside calibrated hull (" +
                                         std::string(to_string(family)) + ", length " +
                                         std::to_string(length_m * 1e3) + " mm, " +
                                         std::to_string(freq_hz) + " Hz)");
            const auto [li, tl] = bracket(lengths, length_m);
            const auto [fi, tf] = bracket(freqs, freq_hz);
            const double v00 = at(li, fi);
            const double v10 = at(std::min(li + 1, lengths.size() - 1), fi);
            const double v01 = at(li, std::min(fi + 1, freqs.size() - 1));
            const double v11 = at(std::min(li + 1, lengths.size() - 1), std::min(fi + 1, freqs.size() - 1));
            const double a = v00 * (1.0 - tl) + v10 * tl;
            const double b = v01 * (1.0 - tl) + v11 * tl;
            return a * (1.0 - tf) + b * tf;
        }

        // Index of the cell containing x plus the fractional position in it.
        static std::pair<std::size_t, double> bracket(const std::vector<double>& knots, double x) {
            if (knots.size() == 1) return {0, 0.0};
            auto it = std::upper_bound(knots.begin(), knots.end(), x);
            std::size_t hi = static_cast<std::size_t>(it - knots.begin());
            hi = std::clamp<std::size_t>(hi, 1, knots.size() - 1);
            const std::size_t lo = hi - 1;
            const double t = (x - knots[lo]) / (knots[hi] - knots[lo]);
            return {lo, std::clamp(t, 0.0, 1.0)};
        }
    };

    const Grid& family_grid(const TailGeometry& tail) const {
        build_grids();
        for (const Grid& g : grids_) {
            if (g.family != tail.family) continue;
            const double shape = tail.family == TailFamily::Parabolic ? tail.aspect_ratio
                                                                      : tail.height_rect_m;
            if (std::abs(shape - g.shape_param) <= 1e-9 * std::max(1.0, std::abs(g.shape_param)))
                return g;
        }
        throw ExtrapolationError("ThrustMap: no calibrated family matches the queried tail");
    }

    void build_grids() const {
        if (grids_valid_) return;
        if (entries_.empty()) throw std::invalid_argument("ThrustMap: empty map");
        grids_.clear();
        for (const Entry& e : entries_) {
            const double shape = e.tail.family == TailFamily::Parabolic ? e.tail.aspect_ratio
                                                                        : e.tail.height_rect_m;
            Grid* grid = nullptr;
            for (Grid& g : grids_) {
                if (g.family == e.tail.family && std::abs(g.shape_param - shape) <= 1e-9) grid = &g;
            }
            if (!grid) {
                grids_.push_back(Grid{e.tail.family, shape, {}, {}, {}});
                grid = &grids_.back();
            }
            insert_sorted(grid->lengths, e.tail.length_m);
            insert_sorted(grid->freqs, e.freq_hz);
        }
        for (Grid& g : grids_) {
            g.unit_thrust.assign(g.lengths.size() * g.freqs.size(),
                                 std::numeric_limits<double>::quiet_NaN());
        }
        for (const Entry& e : entries_) {
            const double shape = e.tail.family == TailFamily::Parabolic ? e.tail.aspect_ratio
                                                                        : e.tail.height_rect_m;
            for (Grid& g : grids_) {
                if (g.family != e.tail.family || std::abs(g.shape_param - shape) > 1e-9) continue;
                const std::size_t li = index_of(g.lengths, e.tail.length_m);
                const std::size_t fi = index_of(g.freqs, e.freq_hz);
                g.unit_thrust[li * g.freqs.size() + fi] = e.thrust_n / e.duty;
            }
        }
        for (const Grid& g : grids_) {
            for (double v : g.unit_thrust) {
                if (std::isnan(v))
                    throw std::invalid_argument(
                        "ThrustMap: incomplete (length x frequency) grid for family " +
                        std::string(to_string(g.family)));
            }
        }
        grids_valid_ = true;
    }

    static void insert_sorted(std::vector<double>& v, double x) {
        auto it = std::lower_bound(v.begin(), v.end(), x - 1e-12);
        if (it != v.end() && std::abs(*it - x) <= 1e-12) return;
        v.insert(std::upper_bound(v.begin(), v.end(), x), x);
    }

    static std::size_t index_of(const std::vector<double>& v, double x) {
        auto it = std::lower_bound(v.begin(), v.end(), x - 1e-12);
        return static_cast<std::size_t>(it - v.begin());
    }

    std::vector<Entry> entries_;
    mutable std::vector<Grid> grids_;
    mutable bool grids_valid_ = false;
};

// Fit a thrust map from a measured speed table: each row's thrust balances
// longitudinal drag at the observed steady speed, so simulated steady-state
// speed reproduces the table by construction.
inline ThrustMap calibrate_thrust_map(const std::vector<SpeedTableRow>& table, const DragModel& drag) {
    drag.validate();
    if (table.empty()) throw std::invalid_argument("calibrate_thrust_map: empty speed table");
    ThrustMap map;
    for (const SpeedTableRow& row : table) {
        require(row.mean_speed_m_s >= 0.0, "calibrate_thrust_map: speeds must be >= 0");
        ThrustMap::Entry e;
        e.tail = row.tail;
        e.freq_hz = row.freq_hz;
        e.duty = row.duty;
        e.thrust_n = drag.c_long * row.mean_speed_m_s * row.mean_speed_m_s;
        map.add_entry(e);
    }
    return map;
}

// Parse the calibration speed table CSV. Expected header:
//   family,length_mm,height_mm,aspect_ratio,freq_hz,duty,mean_speed_mm_s
inline std::vector<SpeedTableRow> load_speed_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_speed_table: cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_speed_table: empty file " + path);
    const std::string expected = "family,length_mm,height_mm,aspect_ratio,freq_hz,duty,mean_speed_mm_s";
    // tolerate a UTF-8 BOM and trailing CR
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected)
        throw std::runtime_error("load_speed_table: unexpected header '" + line + "'");

    std::vector<SpeedTableRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7)
            throw std::runtime_error("load_speed_table: line " + std::to_string(lineno) +
                                     ": expected 7 fields");
        SpeedTableRow row;
        const TailFamily family = tail_family_from_string(fields[0]);
        const double length_m = std::stod(fields[1]) * 1e-3;
        if (family == TailFamily::Parabolic) {
            row.tail = TailGeometry::parabolic(length_m, std::stod(fields[3]));
        } else {
            row.tail = TailGeometry::rectangular(length_m, std::stod(fields[2]) * 1e-3);
        }
        row.freq_hz = std::stod(fields[4]);
        row.duty = std::stod(fields[5]);
        row.mean_speed_m_s = std::stod(fields[6]) * 1e-3;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace microswim

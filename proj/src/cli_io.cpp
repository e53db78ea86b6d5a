#include "photonlab/cli_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace photonlab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& parts,
                 const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Parser {
    std::vector<std::string> issues;

    bool to_double(const std::string& where, const std::string& v,
                   double* out) {
        try {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            *out = x;
            return true;
        } catch (const std::exception&) {
            issues.push_back(where + ": not a number: '" + v + "'");
            return false;
        }
    }

    bool to_int(const std::string& where, const std::string& v, int* out) {
        try {
            std::size_t used = 0;
            const long x = std::stol(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            *out = static_cast<int>(x);
            return true;
        } catch (const std::exception&) {
            issues.push_back(where + ": not an integer: '" + v + "'");
            return false;
        }
    }

    bool to_bool(const std::string& where, const std::string& v, bool* out) {
        if (v == "true" || v == "1") {
            *out = true;
            return true;
        }
        if (v == "false" || v == "0") {
            *out = false;
            return true;
        }
        issues.push_back(where + ": not a boolean: '" + v + "'");
        return false;
    }
};

const std::vector<std::string> kExperiments = {
    "maxvel", "prop-estimate", "dyadic", "inequality-suite", "baselines"};
const std::vector<std::string> kVariants = {"f_prime", "f", "bump"};

// ---------------------------------------------------------------------
// Checkpoint format. 64-byte header:
//   offset  0: magic "PHMV1"
//   offset  5: u8 version (currently 1)
//   offset  6: u8 representation (0 position, 1 momentum)
//   offset  7: u8 precision (0 = complex double)
//   offset  8: u32 dim          (little-endian)
//   offset 12: u32 points per axis
//   offset 16: f64 half-length
//   offset 24: f64 time
//   offset 32: zero padding
// followed by points^dim complex samples, little-endian interleaved
// re/im doubles.
// ---------------------------------------------------------------------

constexpr char kMagic[5] = {'P', 'H', 'M', 'V', '1'};
constexpr std::size_t kHeaderSize = 64;

void store_u32(unsigned char* p, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) p[i] = (v >> (8 * i)) & 0xff;
}

std::uint32_t read_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
    return v;
}

void store_f64(unsigned char* p, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    for (int i = 0; i < 8; ++i) p[i] = (bits >> (8 * i)) & 0xff;
}

double read_f64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(p[i]) << (8 * i);
    double x;
    std::memcpy(&x, &bits, 8);
    return x;
}

// ---------------------------------------------------------------------
// Artifact writers.
// ---------------------------------------------------------------------

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream csv(path, std::ios::binary);
    csv << join(columns, ",") << "\n";
    for (const auto& row : rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double v : row) cells.push_back(num17(v));
        csv << join(cells, ",") << "\n";
    }
    if (!csv) throw std::runtime_error("cannot write " + path.string());
    std::ofstream schema(path.string() + ".schema", std::ios::binary);
    for (const auto& c : columns) schema << c << "\n";
}

std::vector<std::vector<double>> time_series_rows(const TimeSeries& ts,
                                                  int shells) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < ts.times.size(); ++i) {
        std::vector<double> row{ts.times[i], ts.tail_norm[i]};
        for (int n = 0; n <= shells; ++n) row.push_back(ts.shells[i][n]);
        row.push_back(0.0);  // no commutator term in this run
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json verdict_record(const InequalityReport& r,
                            const std::string& eq) {
    ordered_json rec;
    rec["name"] = r.name;
    rec["eq"] = eq;
    rec["verdict"] = to_string(r.verdict);
    rec["coarse_value"] = r.coarse_value;
    rec["fine_value"] = r.fine_value;
    rec["bound"] = r.bound;
    rec["hypothesis"] = r.hypothesis;
    for (const auto& [k, v] : r.constants) rec["constants"][k] = v;
    if (!r.detail.empty()) rec["detail"] = r.detail;
    return rec;
}

// "eq" anchor of each inequality report, by report name.
const std::map<std::string, std::string> kInequalityAnchors = {
    {"radial-laplacian-identity", "2.2(i)"},
    {"hardy", "2.2(v)"},
    {"energy-shell-momentum", "0.11"},
    {"domination-h-over-p", "2.3"},
    {"domination-p-over-h", "2.6"},
    {"support-separation", "0.14"},
    {"cross-localization", "2.2(b)"},
    {"resolvent-momentum", "2.1"},
    {"dilation-weight-conjugation", "2.2(iii)"},
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error("invalid config: " + join(issues, "; ")),
      issues_(std::move(issues)) {}

Config parse_config(const std::string& text) {
    Config cfg;
    Parser p;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                p.issues.push_back("line " + std::to_string(lineno) +
                                   ": malformed section header '" + line +
                                   "'");
                continue;
            }
            section = line.substr(1, line.size() - 2);
            if (section != "grid" && section != "potential" &&
                section != "run" && section != "state" &&
                section != "inequalities") {
                p.issues.push_back("unknown section [" + section + "]");
                section.clear();
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            p.issues.push_back("line " + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line +
                               "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            p.issues.push_back("key '" + key +
                               "' appears before any [section]");
            continue;
        }
        const std::string where = "[" + section + "] " + key;

        bool known = true;
        if (section == "grid") {
            if (key == "dim")
                p.to_int(where, value, &cfg.dim);
            else if (key == "points")
                p.to_int(where, value, &cfg.points);
            else if (key == "half_length")
                p.to_double(where, value, &cfg.half_length);
            else
                known = false;
        } else if (section == "potential") {
            if (key == "depth")
                p.to_double(where, value, &cfg.depth);
            else if (key == "width")
                p.to_double(where, value, &cfg.well_width);
            else
                known = false;
        } else if (section == "run") {
            if (key == "experiment")
                cfg.experiment = value;
            else if (key == "output")
                cfg.output = value;
            else if (key == "shell")
                p.to_int(where, value, &cfg.shell);
            else if (key == "variant")
                cfg.variant = value;
            else if (key == "R")
                p.to_double(where, value, &cfg.run.R);
            else if (key == "a")
                p.to_double(where, value, &cfg.run.a);
            else if (key == "eps")
                p.to_double(where, value, &cfg.run.eps);
            else if (key == "n_max")
                p.to_int(where, value, &cfg.run.n_max);
            else if (key == "t_start")
                p.to_double(where, value, &cfg.run.t_start);
            else if (key == "T")
                p.to_double(where, value, &cfg.run.T);
            else if (key == "dt")
                p.to_double(where, value, &cfg.run.dt);
            else if (key == "samples_per_octave")
                p.to_int(where, value, &cfg.run.samples_per_octave);
            else if (key == "theta")
                p.to_double(where, value, &cfg.run.theta);
            else if (key == "quad_tolerance")
                p.to_double(where, value, &cfg.run.quad_tolerance);
            else if (key == "seed") {
                int s = 0;
                if (p.to_int(where, value, &s))
                    cfg.run.seed = static_cast<std::uint64_t>(s);
            } else
                known = false;
        } else if (section == "state") {
            if (key == "profile") {
                if (value == "gaussian")
                    cfg.run.state.profile = StateProfile::gaussian;
                else if (value == "power_law")
                    cfg.run.state.profile = StateProfile::power_law;
                else
                    p.issues.push_back(where + ": unknown profile '" +
                                       value +
                                       "' (gaussian | power_law)");
            } else if (key == "tail_power")
                p.to_double(where, value, &cfg.run.state.tail_power);
            else if (key == "energy_filter")
                p.to_bool(where, value, &cfg.run.state.energy_filter);
            else if (key == "energy_lo")
                p.to_double(where, value, &cfg.run.state.energy_lo);
            else if (key == "energy_hi")
                p.to_double(where, value, &cfg.run.state.energy_hi);
            else if (key == "filter_theta")
                p.to_double(where, value, &cfg.run.state.filter_theta);
            else if (key == "center")
                p.to_double(where, value, &cfg.run.state.center);
            else if (key == "width")
                p.to_double(where, value, &cfg.run.state.width);
            else if (key == "wavevector")
                p.to_double(where, value, &cfg.run.state.wavevector);
            else
                known = false;
        } else if (section == "inequalities") {
            if (key == "radial_points")
                p.to_int(where, value, &cfg.inequalities.radial_points);
            else if (key == "rmax")
                p.to_double(where, value, &cfg.inequalities.rmax);
            else if (key == "shell_points")
                p.to_int(where, value, &cfg.inequalities.shell_points);
            else if (key == "shell_rmax")
                p.to_double(where, value, &cfg.inequalities.shell_rmax);
            else if (key == "trials")
                p.to_int(where, value, &cfg.inequalities.trials);
            else if (key == "theta")
                p.to_double(where, value, &cfg.inequalities.theta);
            else if (key == "seed") {
                int s = 0;
                if (p.to_int(where, value, &s))
                    cfg.inequalities.seed = static_cast<std::uint64_t>(s);
            } else
                known = false;
        }
        if (!known)
            p.issues.push_back("[" + section + "] unknown key '" + key +
                               "'");
    }

    // Cross-field validation, aggregated with the syntax issues.
    if (cfg.dim < 1 || cfg.dim > 3)
        p.issues.push_back("[grid] dim must be 1, 2, or 3");
    if (cfg.points < 8)
        p.issues.push_back("[grid] points must be at least 8");
    if (!(cfg.half_length > 0.0))
        p.issues.push_back("[grid] half_length must be positive");
    if (cfg.depth < 0.0)
        p.issues.push_back(
            "[potential] depth must be non-negative (attractive well)");
    if (!(cfg.well_width > 0.0))
        p.issues.push_back("[potential] width must be positive");
    if (std::find(kExperiments.begin(), kExperiments.end(),
                  cfg.experiment) == kExperiments.end())
        p.issues.push_back("[run] unknown experiment '" + cfg.experiment +
                           "' (" + join(kExperiments, " | ") + ")");
    if (std::find(kVariants.begin(), kVariants.end(), cfg.variant) ==
        kVariants.end())
        p.issues.push_back("[run] unknown variant '" + cfg.variant + "' (" +
                           join(kVariants, " | ") + ")");
    if (cfg.shell < 0 || cfg.shell > cfg.run.n_max)
        p.issues.push_back("[run] shell must lie in 0..n_max");
    if (cfg.output.empty() ||
        cfg.output.find("..") != std::string::npos)
        p.issues.push_back("[run] output must be a plain directory name");
    try {
        cfg.run.validate();
    } catch (const std::invalid_argument& e) {
        p.issues.push_back(e.what());
    }

    if (!p.issues.empty()) throw ConfigError(std::move(p.issues));
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

void save_checkpoint(const Field& f, double time, const std::string& path) {
    unsigned char header[kHeaderSize] = {};
    std::memcpy(header, kMagic, 5);
    header[5] = 1;
    header[6] = f.rep == Representation::position ? 0 : 1;
    header[7] = 0;
    store_u32(header + 8, static_cast<std::uint32_t>(f.grid->dim()));
    store_u32(header + 12,
              static_cast<std::uint32_t>(f.grid->points_per_axis()));
    store_f64(header + 16, f.grid->half_length());
    store_f64(header + 24, time);

    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(header), kHeaderSize);
    std::vector<unsigned char> cell(16);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        store_f64(cell.data(), f.values[i].real());
        store_f64(cell.data() + 8, f.values[i].imag());
        out.write(reinterpret_cast<const char*>(cell.data()), 16);
    }
    if (!out)
        throw std::runtime_error("cannot write checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path, const GridPtr& expect) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read checkpoint '" + path + "'");
    unsigned char header[kHeaderSize];
    in.read(reinterpret_cast<char*>(header), kHeaderSize);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderSize))
        throw std::runtime_error("truncated checkpoint '" + path +
                                 "': header shorter than 64 bytes");
    if (std::memcmp(header, kMagic, 5) != 0)
        throw std::runtime_error("checkpoint '" + path +
                                 "': bad magic (not a PHMV1 file)");
    if (header[5] != 1)
        throw std::runtime_error("checkpoint '" + path +
                                 "': unsupported version " +
                                 std::to_string(int(header[5])));
    if (header[6] > 1 || header[7] != 0)
        throw std::runtime_error("checkpoint '" + path +
                                 "': unsupported layout tags");
    const int dim = static_cast<int>(read_u32(header + 8));
    const int points = static_cast<int>(read_u32(header + 12));
    const double half_length = read_f64(header + 16);

    Checkpoint ck;
    ck.time = read_f64(header + 24);
    GridPtr grid;
    if (expect) {
        if (expect->dim() != dim || expect->points_per_axis() != points ||
            expect->half_length() != half_length)
            throw std::runtime_error(
                "checkpoint '" + path + "': grid mismatch (stored " +
                std::to_string(dim) + "d, N = " + std::to_string(points) +
                ", L = " + num17(half_length) + ")");
        grid = expect;
    } else {
        grid = make_grid(dim, points, half_length);
    }

    ck.field = Field(grid, header[6] == 0 ? Representation::position
                                          : Representation::momentum);
    std::vector<unsigned char> cell(16);
    for (Eigen::Index i = 0; i < ck.field.values.size(); ++i) {
        in.read(reinterpret_cast<char*>(cell.data()), 16);
        if (in.gcount() != 16)
            throw std::runtime_error(
                "truncated checkpoint '" + path + "': payload ends at "
                "sample " + std::to_string(i) + " of " +
                std::to_string(ck.field.values.size()));
        ck.field.values[i] = Complex(read_f64(cell.data()),
                                     read_f64(cell.data() + 8));
    }
    return ck;
}

int execute(const Config& cfg) {
    namespace fs = std::filesystem;
    fs::path root = ".";
    if (const char* env = std::getenv("PHOTONLAB_OUTPUT_ROOT"))
        if (*env) root = env;
    const fs::path dir = root / cfg.output;
    fs::create_directories(dir);

    ordered_json summary;
    summary["experiment"] = cfg.experiment;
    summary["records"] = ordered_json::array();
    auto finish = [&](int code) {
        summary["exit_code"] = code;
        std::ofstream out(dir / "summary.json", std::ios::binary);
        out << summary.dump(2) << "\n";
        return code;
    };

    try {
        // `baselines` is the free-speed reference: the same maximal
        // velocity run with the potential switched off.
        const double depth = cfg.experiment == "baselines" ? 0.0 : cfg.depth;
        const HamiltonianSpec h =
            make_hamiltonian(make_grid(cfg.dim, cfg.points, cfg.half_length),
                             gaussian_well(depth, cfg.well_width));

        if (cfg.experiment == "inequality-suite") {
            const auto reports =
                run_inequality_suite(gaussian_well(depth, cfg.well_width),
                                     cfg.inequalities);
            bool violated = false;
            for (const auto& r : reports) {
                summary["records"].push_back(
                    verdict_record(r, kInequalityAnchors.at(r.name)));
                violated = violated || r.verdict == Verdict::violated;
            }
            std::vector<std::vector<double>> rows;
            for (const auto& r : reports)
                rows.push_back({r.coarse_value, r.fine_value, r.bound});
            write_csv(dir / "inequalities.csv",
                      {"coarse_value", "fine_value", "bound"}, rows);
            return finish(violated ? 4 : 0);
        }

        const PreparedState prep = prepare_initial_state(cfg.run, h);
        save_checkpoint(prep.psi, 0.0, (dir / "psi0.ckpt").string());

        if (cfg.experiment == "maxvel" || cfg.experiment == "baselines") {
            const TimeSeries ts = run_maxvel(cfg.run, h);
            std::vector<std::string> cols{"t", "tail_norm"};
            for (int n = 0; n <= cfg.run.n_max; ++n)
                cols.push_back("shell" + std::to_string(n));
            cols.push_back("Q");
            write_csv(dir / "maxvel.csv", cols,
                      time_series_rows(ts, cfg.run.n_max));

            ordered_json rec;
            rec["name"] = "cone-tail-norm";
            rec["eq"] = "0.2";
            rec["energy_mean"] = prep.energy_mean;
            rec["weighted_norm_x"] = prep.weighted_norm_x;
            rec["tail_initial"] = ts.tail_norm.front();
            rec["tail_final"] = ts.tail_norm.back();
            rec["norm_drift"] = ts.norm_drift;
            rec["partial"] = ts.truncated;
            if (!ts.note.empty()) rec["note"] = ts.note;
            summary["records"].push_back(rec);

            ordered_json shells;
            shells["name"] = "shell-decomposition";
            shells["eq"] = "3.2";
            shells["shells_final"] = ts.shells.back();
            shells["outgoing_final"] = ts.shells_out.back();
            shells["incoming_final"] = ts.shells_in.back();
            shells["partial"] = ts.truncated;
            summary["records"].push_back(shells);
            return finish(0);
        }

        if (cfg.experiment == "prop-estimate") {
            const PropagationVariant variant =
                cfg.variant == "f_prime" ? PropagationVariant::f_prime
                : cfg.variant == "f"     ? PropagationVariant::f
                                         : PropagationVariant::bump;
            const TimeSeries ts =
                run_propagation_estimate(cfg.run, h, cfg.shell, variant);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < ts.times.size(); ++i)
                rows.push_back(
                    {ts.times[i], ts.integrand[i], ts.cumulative[i]});
            write_csv(dir / "prop_estimate.csv",
                      {"t", "integrand", "cumulative"}, rows);

            ordered_json rec;
            rec["name"] = "propagation-estimate-" + cfg.variant;
            rec["eq"] = cfg.variant == "f_prime" ? "1.7a"
                        : cfg.variant == "f"     ? "1.7b"
                                                 : "1.18";
            rec["shell"] = cfg.shell;
            rec["normalizer"] = ts.normalizer;
            rec["cumulative_final"] = ts.cumulative.back();
            rec["bounded_ratio"] = ts.cumulative.back() / ts.normalizer;
            rec["partial"] = ts.truncated;
            if (!ts.note.empty()) rec["note"] = ts.note;
            summary["records"].push_back(rec);

            if (ts.split_time > 0.0) {
                ordered_json split;
                split["name"] = "time-split-integral";
                split["eq"] = "1.19";
                split["split_time"] = ts.split_time;
                split["cumulative_at_split"] = ts.cumulative_at_split;
                split["cumulative_after_split"] =
                    ts.cumulative.back() - ts.cumulative_at_split;
                summary["records"].push_back(split);
            }
            return finish(0);
        }

        // dyadic
        const DyadicReport rep = run_dyadic_assembly(cfg.run, h);
        std::vector<std::string> cols{"t", "direct"};
        for (int n = 0; n <= cfg.run.n_max; ++n)
            cols.push_back("fn" + std::to_string(n));
        for (int n = 0; n <= cfg.run.n_max; ++n)
            cols.push_back("fbar" + std::to_string(n));
        cols.insert(cols.end(), {"rest", "q_re", "q_im", "closure"});
        std::vector<std::vector<double>> rows;
        double max_closure = 0.0;
        for (const DyadicSample& s : rep.samples) {
            std::vector<double> row{s.t, s.direct};
            for (double v : s.fn_terms) row.push_back(v);
            for (double v : s.fbar_terms) row.push_back(v);
            row.insert(row.end(),
                       {s.rest, s.q.real(), s.q.imag(), s.closure});
            rows.push_back(std::move(row));
            max_closure = std::max(max_closure, s.closure);
        }
        write_csv(dir / "dyadic.csv", cols, rows);

        ordered_json rec;
        rec["name"] = "dyadic-assembly";
        rec["eq"] = "3.15";
        rec["neglected_mass"] = rep.neglected_mass;
        rec["max_closure"] = max_closure;
        rec["norm_drift"] = rep.norm_drift;
        rec["partial"] = rep.truncated;
        if (!rep.note.empty()) rec["note"] = rep.note;
        summary["records"].push_back(rec);

        ordered_json q;
        q["name"] = "commutator-term";
        q["eq"] = "3.19";
        std::vector<double> qabs;
        for (const DyadicSample& s : rep.samples)
            qabs.push_back(std::abs(s.q));
        q["abs_q"] = qabs;
        if (rep.samples.size() >= 2) {
            const std::size_t n = rep.samples.size();
            q["final_doubling_ratio"] =
                qabs[n - 2] / std::max(qabs[n - 1], 1e-300);
        }
        q["partial"] = rep.truncated;
        summary["records"].push_back(q);
        return finish(0);
    } catch (const std::invalid_argument& e) {
        ordered_json err;
        err["name"] = "error";
        err["eq"] = "none";
        err["message"] = e.what();
        summary["records"].push_back(err);
        return finish(2);
    } catch (const std::exception& e) {
        ordered_json err;
        err["name"] = "error";
        err["eq"] = "none";
        err["message"] = e.what();
        summary["records"].push_back(err);
        return finish(3);
    }
}

}  // namespace photonlab

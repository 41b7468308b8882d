// quarter-green: command-line front end for the quarter-plane Green
// function library. Subcommands cover validation, uniformization, contour
// and oracle Green values, asymptotics, Martin diagnostics and family
// sweeps; output is versioned CSV or JSON with the resolved configuration
// echoed into every run.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qg/asymptotics.hpp"
#include "qg/curve.hpp"
#include "qg/errors.hpp"
#include "qg/green_integral.hpp"
#include "qg/martin.hpp"
#include "qg/oracle.hpp"
#include "qg/uniformization.hpp"
#include "qg/walk_model.hpp"
#include "qg/walk_spec.hpp"

namespace {

using qg::cplx;

// ---------------------------------------------------------------- formatting

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string json_str(const std::string& s) { return "\"" + json_escape(s) + "\""; }

// JSON has no inf/nan literals; fall back to strings for those.
std::string json_num(double v) {
    if (std::isfinite(v)) return fmt17(v);
    return json_str(fmt17(v));
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

// One resolved-config entry; `value` is already a JSON literal.
struct ConfigItem {
    std::string key;
    std::string value;
};

ConfigItem cfg_str(const std::string& k, const std::string& v) { return {k, json_str(v)}; }
ConfigItem cfg_num(const std::string& k, double v) { return {k, json_num(v)}; }
ConfigItem cfg_int(const std::string& k, long long v) { return {k, std::to_string(v)}; }
ConfigItem cfg_raw(const std::string& k, const std::string& literal) { return {k, literal}; }

// ---------------------------------------------------------------- run context

struct RunContext {
    std::string command;
    std::string spec_path;  // empty for sweep
    std::string out_path;
    std::string format = "csv";
    int threads = 1;
    unsigned long long seed = 1;
    std::vector<ConfigItem> options;  // command-specific resolved options

    bool json() const { return format == "json"; }

    std::vector<ConfigItem> config() const {
        std::vector<ConfigItem> all;
        all.push_back(cfg_str("command", command));
        if (!spec_path.empty()) all.push_back(cfg_str("spec", spec_path));
        all.push_back(cfg_str("format", format));
        all.push_back(cfg_int("threads", threads));
        all.push_back(cfg_int("seed", static_cast<long long>(seed)));
        for (const auto& item : options) all.push_back(item);
        return all;
    }
};

class Output {
  public:
    explicit Output(const RunContext& ctx) {
        if (!ctx.out_path.empty()) {
            file_.open(ctx.out_path, std::ios::trunc);
            if (!file_) throw qg::io_error("cannot open output file: " + ctx.out_path);
            os_ = &file_;
        } else {
            os_ = &std::cout;
        }
    }
    std::ostream& os() { return *os_; }
    void finish() {
        os_->flush();
        if (file_.is_open() && !file_) throw qg::io_error("error writing output file");
    }

  private:
    std::ofstream file_;
    std::ostream* os_ = nullptr;
};

void write_csv_preamble(std::ostream& os, const RunContext& ctx) {
    os << "# quarter-green v1\n";
    for (const auto& item : ctx.config()) os << "# " << item.key << ": " << item.value << "\n";
}

void write_json_head(std::ostream& os, const RunContext& ctx) {
    os << "{\n  \"version\": \"quarter-green v1\",\n  \"config\": {";
    bool first = true;
    for (const auto& item : ctx.config()) {
        os << (first ? "\n" : ",\n") << "    " << json_str(item.key) << ": " << item.value;
        first = false;
    }
    os << "\n  }";
}

// ---------------------------------------------------------------- arg parsing

qg::LatticePoint parse_point(const std::string& text, const std::string& what) {
    int i = 0, j = 0;
    char extra;
    if (std::sscanf(text.c_str(), "%d,%d %c", &i, &j, &extra) != 2)
        throw qg::io_error(what + ": expected \"i,j\", got \"" + text + "\"");
    return {i, j};
}

std::vector<double> parse_directions(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "inf") {
            out.push_back(std::numeric_limits<double>::infinity());
        } else {
            try {
                std::size_t pos = 0;
                double v = std::stod(item, &pos);
                if (pos != item.size() || v < 0) throw std::invalid_argument(item);
                out.push_back(v);
            } catch (const std::exception&) {
                throw qg::io_error("bad direction \"" + item + "\" (need a slope >= 0 or inf)");
            }
        }
    }
    if (out.empty()) throw qg::io_error("empty direction list");
    return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            int v = std::stoi(item, &pos);
            if (pos != item.size() || v < 1) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw qg::io_error(what + ": bad entry \"" + item + "\"");
        }
    }
    if (out.empty()) throw qg::io_error(what + ": empty list");
    return out;
}

struct Range {
    double lo = 0, hi = 0;
    int count = 1;
};

Range parse_range(const std::string& text, const std::string& what) {
    Range r;
    char extra;
    int got = std::sscanf(text.c_str(), "%lf:%lf:%d %c", &r.lo, &r.hi, &r.count, &extra);
    if (got == 3 && r.count >= 1 && r.hi >= r.lo) return r;
    if (std::sscanf(text.c_str(), "%lf %c", &r.lo, &extra) == 1) {
        r.hi = r.lo;
        r.count = 1;
        return r;
    }
    throw qg::io_error(what + ": expected \"lo:hi:count\" or a single value, got \"" + text + "\"");
}

double range_at(const Range& r, int idx) {
    if (r.count == 1) return r.lo;
    return r.lo + (r.hi - r.lo) * double(idx) / double(r.count - 1);
}

std::string range_echo(const Range& r) {
    std::ostringstream os;
    os << "[" << fmt17(r.lo) << ", " << fmt17(r.hi) << ", " << r.count << "]";
    return os.str();
}

// Family parameters for commands that need the cubic.
std::pair<double, double> require_family(const qg::WalkSpec& ws) {
    if (ws.family) return {ws.family->alpha, ws.family->beta};
    if (auto ab = qg::infer_cubic_params(ws.kernel)) return *ab;
    throw qg::infeasible_error(
        "this command needs the cubic parameters (alpha, beta): use a family spec or a "
        "kernel admitting the cubic harmonic");
}

// ---------------------------------------------------------------- validate

int cmd_validate(RunContext& ctx) {
    qg::WalkSpec ws = qg::load_walk_spec(ctx.spec_path);
    qg::ValidationReport rep = qg::validate_kernel(ws.kernel);

    double alpha = 0, beta = 0, residual = 0;
    std::string harmonic_source = "none";
    bool have_cubic = false;
    if (ws.family) {
        alpha = ws.family->alpha;
        beta = ws.family->beta;
        harmonic_source = "family";
        have_cubic = true;
    } else if (auto ab = qg::infer_cubic_params(ws.kernel)) {
        alpha = ab->first;
        beta = ab->second;
        harmonic_source = "inferred";
        have_cubic = true;
    }
    if (have_cubic) residual = qg::harmonicity_residual(ws.kernel, alpha, beta);

    Output out(ctx);
    std::ostream& os = out.os();
    if (ctx.json()) {
        write_json_head(os, ctx);
        os << ",\n  \"valid\": " << (rep.valid() ? "true" : "false");
        auto issue_list = [&os](const std::vector<qg::ValidationIssue>& issues) {
            bool first = true;
            os << "[";
            for (const auto& is : issues) {
                os << (first ? "" : ", ") << "{\"code\": " << json_str(is.code)
                   << ", \"magnitude\": " << json_num(is.magnitude)
                   << ", \"message\": " << json_str(is.message) << "}";
                first = false;
            }
            os << "]";
        };
        os << ",\n  \"errors\": ";
        issue_list(rep.errors);
        os << ",\n  \"warnings\": ";
        issue_list(rep.warnings);
        os << ",\n  \"harmonicity\": ";
        if (have_cubic) {
            os << "{\"source\": " << json_str(harmonic_source)
               << ", \"alpha\": " << json_num(alpha) << ", \"beta\": " << json_num(beta)
               << ", \"residual\": " << json_num(residual) << "}";
        } else {
            os << "null";
        }
        os << "\n}\n";
    } else {
        write_csv_preamble(os, ctx);
        os << "kind,code,magnitude,message\n";
        for (const auto& is : rep.errors)
            os << "error," << is.code << "," << fmt17(is.magnitude) << ","
               << csv_quote(is.message) << "\n";
        for (const auto& is : rep.warnings)
            os << "warning," << is.code << "," << fmt17(is.magnitude) << ","
               << csv_quote(is.message) << "\n";
        if (have_cubic) {
            os << "info,harmonic_alpha," << fmt17(alpha) << "," << csv_quote(harmonic_source)
               << "\n";
            os << "info,harmonic_beta," << fmt17(beta) << "," << csv_quote(harmonic_source)
               << "\n";
            os << "info,harmonicity_residual," << fmt17(residual) << ",\"\"\n";
        } else {
            os << "info,no_cubic_harmonic,nan,\"no (alpha, beta) fit the harmonicity relation\"\n";
        }
    }
    out.finish();
    return rep.valid() ? 0 : 1;
}

// ---------------------------------------------------------------- uniformize

void emit_complex_json(std::ostream& os, const char* name, cplx v, bool last = false) {
    os << "    " << json_str(name) << ": {\"re\": " << json_num(v.real())
       << ", \"im\": " << json_num(v.imag()) << "}" << (last ? "\n" : ",\n");
}

int cmd_uniformize(RunContext& ctx) {
    qg::WalkSpec ws = qg::load_walk_spec(ctx.spec_path);
    qg::UniformizationData u = qg::uniformize(ws.kernel);
    double residual = qg::verify_on_curve(ws.kernel, u, 1000, ctx.seed);

    double x4 = u.bp.x4.is_inf ? std::numeric_limits<double>::infinity() : u.bp.x4.value;
    double y4 = u.bp.y4.is_inf ? std::numeric_limits<double>::infinity() : u.bp.y4.value;

    Output out(ctx);
    std::ostream& os = out.os();
    if (ctx.json()) {
        write_json_head(os, ctx);
        os << ",\n  \"branch_points\": {\"x1\": " << json_num(u.bp.x1)
           << ", \"x4\": " << json_num(x4) << ", \"y1\": " << json_num(u.bp.y1)
           << ", \"y4\": " << json_num(y4) << ", \"disc_x\": " << json_num(u.bp.disc_x)
           << ", \"disc_y\": " << json_num(u.bp.disc_y) << "},\n";
        os << "  \"sums\": {\"s0\": " << json_num(u.s0) << ", \"s1\": " << json_num(u.s1)
           << ", \"s2\": " << json_num(u.s2) << ", \"s3\": " << json_num(u.s3) << "},\n";
        os << "  \"points\": {\n";
        emit_complex_json(os, "z0", u.z0);
        emit_complex_json(os, "z1", u.z1);
        emit_complex_json(os, "z2", u.z2);
        emit_complex_json(os, "z3", u.z3);
        emit_complex_json(os, "K", u.K, true);
        os << "  },\n";
        os << "  \"omega_x\": " << json_num(u.omega_x)
           << ",\n  \"omega_y\": " << json_num(u.omega_y)
           << ",\n  \"alpha_ratio\": " << json_num(u.alpha_ratio)
           << ",\n  \"on_curve_residual\": " << json_num(residual) << "\n}\n";
    } else {
        write_csv_preamble(os, ctx);
        os << "key,re,im\n";
        auto real_row = [&os](const char* key, double v) {
            os << key << "," << fmt17(v) << ",\n";
        };
        auto cplx_row = [&os](const char* key, cplx v) {
            os << key << "," << fmt17(v.real()) << "," << fmt17(v.imag()) << "\n";
        };
        real_row("x1", u.bp.x1);
        real_row("x4", x4);
        real_row("y1", u.bp.y1);
        real_row("y4", y4);
        real_row("disc_x", u.bp.disc_x);
        real_row("disc_y", u.bp.disc_y);
        real_row("s0", u.s0);
        real_row("s1", u.s1);
        real_row("s2", u.s2);
        real_row("s3", u.s3);
        cplx_row("z0", u.z0);
        cplx_row("z1", u.z1);
        cplx_row("z2", u.z2);
        cplx_row("z3", u.z3);
        cplx_row("K", u.K);
        real_row("omega_x", u.omega_x);
        real_row("omega_y", u.omega_y);
        real_row("alpha_ratio", u.alpha_ratio);
        real_row("on_curve_residual", residual);
    }
    out.finish();
    return 0;
}

// ---------------------------------------------------------------- green

int cmd_green(RunContext& ctx, int i0, int j0, std::vector<std::string> target_args,
              double theta) {
    qg::WalkSpec ws = qg::load_walk_spec(ctx.spec_path);
    qg::UniformizationData u = qg::uniformize(ws.kernel);

    std::vector<qg::LatticePoint> targets;
    for (const auto& t : target_args) targets.push_back(parse_point(t, "--target"));
    std::sort(targets.begin(), targets.end(), [](qg::LatticePoint a, qg::LatticePoint b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });

    qg::RayContour contour;
    if (!std::isnan(theta)) contour.theta = theta;
    std::vector<qg::GreenEstimate> values =
        qg::green_grid(ws.kernel, u, i0, j0, targets, contour, ctx.threads);

    Output out(ctx);
    std::ostream& os = out.os();
    if (ctx.json()) {
        write_json_head(os, ctx);
        os << ",\n  \"data\": [";
        for (std::size_t m = 0; m < targets.size(); ++m) {
            const auto& g = values[m];
            os << (m ? ",\n" : "\n") << "    {\"i\": " << targets[m].i
               << ", \"j\": " << targets[m].j << ", \"value\": " << json_num(g.value)
               << ", \"abs_error\": " << json_num(g.abs_error)
               << ", \"theta\": " << json_num(g.theta) << ", \"evaluations\": " << g.evaluations
               << "}";
        }
        os << "\n  ]\n}\n";
    } else {
        write_csv_preamble(os, ctx);
        os << "i,j,value,abs_error,theta,evaluations\n";
        for (std::size_t m = 0; m < targets.size(); ++m) {
            const auto& g = values[m];
            os << targets[m].i << "," << targets[m].j << "," << fmt17(g.value) << ","
               << fmt17(g.abs_error) << "," << fmt17(g.theta) << "," << g.evaluations << "\n";
        }
    }
    out.finish();
    return 0;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(RunContext& ctx, int i0, int j0, int n, bool no_extrapolate, int window,
               int absorption_max) {
    qg::WalkSpec ws = qg::load_walk_spec(ctx.spec_path);
    qg::TruncationConfig cfg;
    cfg.n = n;
    cfg.extrapolate = !no_extrapolate;
    qg::OracleSolution sol = qg::green_truncated(ws.kernel, i0, j0, cfg);
    qg::AbsorptionData ab = qg::absorption_truncated(ws.kernel, sol);

    int w = std::min(window, sol.n);
    int bmax = std::min(absorption_max, sol.n);

    Output out(ctx);
    std::ostream& os = out.os();
    if (ctx.json()) {
        write_json_head(os, ctx);
        os << ",\n  \"n\": " << sol.n
           << ",\n  \"extrapolated\": " << (sol.extrapolated ? "true" : "false")
           << ",\n  \"solver_residual\": " << json_num(sol.solver_residual)
           << ",\n  \"cycles\": " << sol.cycles << ",\n  \"green\": [";
        bool first = true;
        for (int j = 1; j <= w; ++j) {
            for (int i = 1; i <= w; ++i) {
                os << (first ? "\n" : ",\n") << "    {\"i\": " << i << ", \"j\": " << j
                   << ", \"value\": " << json_num(sol.at(i, j))
                   << ", \"abs_err\": " << json_num(sol.err_at(i, j)) << "}";
                first = false;
            }
        }
        os << "\n  ],\n  \"h\": [";
        for (int i = 1; i <= bmax; ++i) os << (i > 1 ? ", " : "") << json_num(ab.h[i - 1]);
        os << "],\n  \"h_tilde\": [";
        for (int j = 1; j <= bmax; ++j) os << (j > 1 ? ", " : "") << json_num(ab.h_tilde[j - 1]);
        os << "],\n  \"h00\": " << json_num(ab.h00)
           << ",\n  \"mass_defect\": " << json_num(ab.mass_defect) << "\n}\n";
    } else {
        write_csv_preamble(os, ctx);
        os << "# n: " << sol.n << "\n# extrapolated: " << (sol.extrapolated ? "true" : "false")
           << "\n# solver_residual: " << fmt17(sol.solver_residual) << "\n# cycles: " << sol.cycles
           << "\n# mass_defect: " << fmt17(ab.mass_defect) << "\n";
        os << "kind,i,j,value,abs_err\n";
        for (int j = 1; j <= w; ++j)
            for (int i = 1; i <= w; ++i)
                os << "G," << i << "," << j << "," << fmt17(sol.at(i, j)) << ","
                   << fmt17(sol.err_at(i, j)) << "\n";
        for (int i = 1; i <= bmax; ++i)
            os << "h," << i << ",0," << fmt17(ab.h[i - 1]) << ",0\n";
        for (int j = 1; j <= bmax; ++j)
            os << "h_tilde,0," << j << "," << fmt17(ab.h_tilde[j - 1]) << ",0\n";
        os << "h00,0,0," << fmt17(ab.h00) << ",0\n";
    }
    out.finish();
    return 0;
}

// ---------------------------------------------------------------- asymptotic

int cmd_asymptotic(RunContext& ctx, int i0, int j0, const std::string& directions_arg,
                   const std::string& radii_arg) {
    qg::WalkSpec ws = qg::load_walk_spec(ctx.spec_path);
    auto [alpha, beta] = require_family(ws);
    qg::UniformizationData u = qg::uniformize(ws.kernel);
    qg::AsymptoticModel model = qg::make_asymptotic_model(ws.kernel, u, alpha, beta);

    std::vector<double> directions = parse_directions(directions_arg);
    std::vector<int> radii = parse_ints(radii_arg, "--radii");

    std::vector<qg::LatticePoint> points;
    for (double slope : directions)
        for (int r : radii) points.push_back(qg::direction_point(slope, r));
    std::vector<qg::GreenEstimate> exact =
        qg::green_grid(ws.kernel, u, i0, j0, points, {}, ctx.threads);

    Output out(ctx);
    std::ostream& os = out.os();
    if (ctx.json()) {
        write_json_head(os, ctx);
        os << ",\n  \"C\": " << json_num(model.C)
           << ",\n  \"sign_flipped\": " << (model.sign_flipped ? "true" : "false")
           << ",\n  \"data\": [";
        for (std::size_t m = 0; m < points.size(); ++m) {
            double asym = qg::green_asymptotic(model, i0, j0, points[m].i, points[m].j);
            os << (m ? ",\n" : "\n") << "    {\"i\": " << points[m].i
               << ", \"j\": " << points[m].j << ", \"exact\": " << json_num(exact[m].value)
               << ", \"asymptotic\": " << json_num(asym)
               << ", \"ratio\": " << json_num(exact[m].value / asym) << "}";
        }
        os << "\n  ]\n}\n";
    } else {
        write_csv_preamble(os, ctx);
        os << "# C: " << fmt17(model.C) << "\n";
        os << "i,j,exact,asymptotic,ratio\n";
        for (std::size_t m = 0; m < points.size(); ++m) {
            double asym = qg::green_asymptotic(model, i0, j0, points[m].i, points[m].j);
            os << points[m].i << "," << points[m].j << "," << fmt17(exact[m].value) << ","
               << fmt17(asym) << "," << fmt17(exact[m].value / asym) << "\n";
        }
    }
    out.finish();
    return 0;
}

// ---------------------------------------------------------------- martin

int cmd_martin(RunContext& ctx, int i0, int j0, const std::string& ref_arg,
               const std::string& directions_arg, const std::string& radii_arg,
               const std::string& method_arg, int n) {
    qg::WalkSpec ws = qg::load_walk_spec(ctx.spec_path);
    auto [alpha, beta] = require_family(ws);
    qg::UniformizationData u = qg::uniformize(ws.kernel);

    qg::MartinConfig cfg;
    cfg.ref = parse_point(ref_arg, "--ref");
    cfg.directions = parse_directions(directions_arg);
    cfg.radii = parse_ints(radii_arg, "--radii");
    cfg.threads = ctx.threads;
    cfg.truncation.n = n;
    if (method_arg == "oracle") {
        cfg.method = qg::MartinMethod::oracle;
    } else if (method_arg != "contour") {
        throw qg::io_error("--method must be contour or oracle");
    }

    qg::MartinDiagnostic diag = qg::martin_limit_diagnostic(ws.kernel, u, alpha, beta, i0, j0, cfg);

    auto dir_label = [](double slope) {
        return std::isinf(slope) ? std::string("inf") : fmt17(slope);
    };

    Output out(ctx);
    std::ostream& os = out.os();
    if (ctx.json()) {
        write_json_head(os, ctx);
        os << ",\n  \"limit_prediction\": " << json_num(diag.limit_prediction)
           << ",\n  \"max_rel_deviation\": [";
        for (std::size_t r = 0; r < diag.radii.size(); ++r)
            os << (r ? ", " : "") << json_num(diag.max_rel_deviation[r]);
        os << "],\n  \"data\": [";
        bool first = true;
        for (std::size_t d = 0; d < diag.directions.size(); ++d) {
            for (std::size_t r = 0; r < diag.radii.size(); ++r) {
                double kernel = diag.table[d][r];
                os << (first ? "\n" : ",\n") << "    {\"direction\": "
                   << json_num(diag.directions[d]) << ", \"radius\": " << diag.radii[r]
                   << ", \"kernel\": " << json_num(kernel)
                   << ", \"prediction\": " << json_num(diag.limit_prediction)
                   << ", \"deviation\": " << json_num(std::abs(kernel / diag.limit_prediction - 1.0))
                   << "}";
                first = false;
            }
        }
        os << "\n  ]\n}\n";
    } else {
        write_csv_preamble(os, ctx);
        os << "direction,radius,kernel,prediction,deviation\n";
        for (std::size_t d = 0; d < diag.directions.size(); ++d)
            for (std::size_t r = 0; r < diag.radii.size(); ++r)
                os << dir_label(diag.directions[d]) << "," << diag.radii[r] << ","
                   << fmt17(diag.table[d][r]) << "," << fmt17(diag.limit_prediction) << ","
                   << fmt17(std::abs(diag.table[d][r] / diag.limit_prediction - 1.0)) << "\n";
    }
    out.finish();
    return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepRow {
    double alpha = 0, beta = 0, p11 = 0, p10 = 0;
    bool feasible = false;
    bool analyzed = false;  // uniformization + C succeeded
    double C = 0, omega_x = 0;
    cplx K;
};

int cmd_sweep(RunContext& ctx, const Range& alpha_range, const Range& beta_range, double p11,
              double p10) {
    std::vector<SweepRow> rows(std::size_t(alpha_range.count) * beta_range.count);
    for (int a = 0; a < alpha_range.count; ++a) {
        for (int b = 0; b < beta_range.count; ++b) {
            SweepRow& row = rows[std::size_t(a) * beta_range.count + b];
            row.alpha = range_at(alpha_range, a);
            row.beta = range_at(beta_range, b);
            row.p11 = p11;
            row.p10 = p10;
        }
    }

    auto analyze = [](SweepRow& row) {
        qg::CubicFamilyParams f;
        f.alpha = row.alpha;
        f.beta = row.beta;
        f.p11 = row.p11;
        f.p10 = row.p10;
        std::optional<qg::JumpKernel> k = qg::try_kernel_from_cubic_family(f);
        if (!k) return;
        row.feasible = true;
        try {
            qg::UniformizationData u = qg::uniformize(*k);
            row.C = qg::constant_C(*k, u, row.alpha);
            row.omega_x = u.omega_x;
            row.K = u.K;
            row.analyzed = true;
        } catch (const qg::error&) {
            // feasible but degenerate for the analysis; row keeps empty cells
        }
    };

    int workers = std::max(1, ctx.threads);
    if (workers == 1 || rows.size() < 2) {
        for (auto& row : rows) analyze(row);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&rows, w, workers, &analyze] {
                for (std::size_t m = w; m < rows.size(); m += std::size_t(workers)) analyze(rows[m]);
            });
        }
        for (auto& t : pool) t.join();
    }

    Output out(ctx);
    std::ostream& os = out.os();
    if (ctx.json()) {
        write_json_head(os, ctx);
        os << ",\n  \"data\": [";
        for (std::size_t m = 0; m < rows.size(); ++m) {
            const SweepRow& r = rows[m];
            os << (m ? ",\n" : "\n") << "    {\"alpha\": " << json_num(r.alpha)
               << ", \"beta\": " << json_num(r.beta) << ", \"p11\": " << json_num(r.p11)
               << ", \"p10\": " << json_num(r.p10)
               << ", \"feasible\": " << (r.feasible ? "true" : "false");
            if (r.analyzed) {
                os << ", \"C\": " << json_num(r.C) << ", \"omega_x\": " << json_num(r.omega_x)
                   << ", \"K_re\": " << json_num(r.K.real())
                   << ", \"K_im\": " << json_num(r.K.imag());
            } else {
                os << ", \"C\": null, \"omega_x\": null, \"K_re\": null, \"K_im\": null";
            }
            os << "}";
        }
        os << "\n  ]\n}\n";
    } else {
        write_csv_preamble(os, ctx);
        os << "alpha,beta,p11,p10,feasible,C,omega_x,K_re,K_im\n";
        for (const SweepRow& r : rows) {
            os << fmt17(r.alpha) << "," << fmt17(r.beta) << "," << fmt17(r.p11) << ","
               << fmt17(r.p10) << "," << (r.feasible ? 1 : 0) << ",";
            if (r.analyzed) {
                os << fmt17(r.C) << "," << fmt17(r.omega_x) << "," << fmt17(r.K.real()) << ","
                   << fmt17(r.K.imag());
            } else {
                os << ",,,";
            }
            os << "\n";
        }
    }
    out.finish();
    return 0;
}

// ---------------------------------------------------------------- error paths

std::string error_type(const std::exception& e) {
    if (dynamic_cast<const qg::infeasible_error*>(&e)) return "infeasible_error";
    if (dynamic_cast<const qg::degenerate_curve_error*>(&e)) return "degenerate_curve_error";
    if (dynamic_cast<const qg::branch_error*>(&e)) return "branch_error";
    if (dynamic_cast<const qg::pole_error*>(&e)) return "pole_error";
    if (dynamic_cast<const qg::nonconvergence_error*>(&e)) return "nonconvergence_error";
    if (dynamic_cast<const qg::nonreal_error*>(&e)) return "nonreal_error";
    if (dynamic_cast<const qg::instability_error*>(&e)) return "instability_error";
    if (dynamic_cast<const qg::gate_error*>(&e)) return "gate_error";
    if (dynamic_cast<const qg::io_error*>(&e)) return "io_error";
    if (dynamic_cast<const qg::error*>(&e)) return "error";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_argument";
    return "internal_error";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green functions, absorption probabilities and Martin kernels for "
                 "zero-drift walks killed at the quarter-plane boundary"};
    app.require_subcommand(1);

    RunContext ctx;
    double theta = std::numeric_limits<double>::quiet_NaN();
    int i0 = 1, j0 = 1, n = 600, window = 20, absorption_max = 50;
    bool no_extrapolate = false;
    std::vector<std::string> target_args;
    std::string ref_arg = "1,1";
    std::string directions_arg = "0,0.5,1,2,inf";
    std::string radii_arg = "25,50,100";
    std::string method_arg = "contour";
    std::string alpha_arg = "0.5:2:31";
    std::string beta_arg = "0";
    double p11 = 0.0, p10 = 0.0;

    auto add_common = [&](CLI::App* cmd, bool needs_spec) {
        if (needs_spec)
            cmd->add_option("--spec", ctx.spec_path, "walk specification JSON")->required();
        cmd->add_option("--out", ctx.out_path, "output path (default stdout)");
        cmd->add_option("--format", ctx.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--threads", ctx.threads, "worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", ctx.seed, "seed for randomized checks");
    };

    CLI::App* validate = app.add_subcommand("validate", "check a walk specification");
    add_common(validate, true);

    CLI::App* uniformize = app.add_subcommand("uniformize", "branch points, z points, K");
    add_common(uniformize, true);

    CLI::App* green = app.add_subcommand("green", "contour-integral Green values");
    add_common(green, true);
    green->add_option("--i0", i0, "start row");
    green->add_option("--j0", j0, "start column");
    green->add_option("--target", target_args, "target i,j (repeatable)")->required();
    green->add_option("--theta", theta, "fixed contour angle in (2pi/3, pi)");

    CLI::App* oracle = app.add_subcommand("oracle", "truncated-lattice solve");
    add_common(oracle, true);
    oracle->add_option("--i0", i0, "start row");
    oracle->add_option("--j0", j0, "start column");
    oracle->add_option("--n", n, "truncation box size")->check(CLI::PositiveNumber);
    oracle->add_flag("--no-extrapolate", no_extrapolate, "skip the doubled-box solve");
    oracle->add_option("--window", window, "emit the Green grid on [1,window]^2");
    oracle->add_option("--absorption-max", absorption_max, "emit h_i, h~_j up to this index");

    CLI::App* asymptotic = app.add_subcommand("asymptotic", "closed-form asymptotics vs exact");
    add_common(asymptotic, true);
    asymptotic->add_option("--i0", i0, "start row");
    asymptotic->add_option("--j0", j0, "start column");
    asymptotic->add_option("--directions", directions_arg, "comma list of slopes (inf allowed)");
    asymptotic->add_option("--radii", radii_arg, "comma list of radii");

    CLI::App* martin = app.add_subcommand("martin", "Martin kernel diagnostics");
    add_common(martin, true);
    martin->add_option("--i0", i0, "start row");
    martin->add_option("--j0", j0, "start column");
    martin->add_option("--ref", ref_arg, "reference start i,j");
    martin->add_option("--directions", directions_arg, "comma list of slopes (inf allowed)");
    martin->add_option("--radii", radii_arg, "comma list of radii");
    martin->add_option("--method", method_arg, "contour or oracle");
    martin->add_option("--n", n, "truncation box for the oracle method");

    CLI::App* sweep = app.add_subcommand("sweep", "family feasibility and constants");
    add_common(sweep, false);
    sweep->add_option("--alpha", alpha_arg, "alpha range lo:hi:count");
    sweep->add_option("--beta", beta_arg, "beta range lo:hi:count");
    sweep->add_option("--p11", p11, "fixed p_{1,1}");
    sweep->add_option("--p10", p10, "fixed p_{1,0}");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) {
            ctx.command = "validate";
            return cmd_validate(ctx);
        }
        if (app.got_subcommand(uniformize)) {
            ctx.command = "uniformize";
            return cmd_uniformize(ctx);
        }
        if (app.got_subcommand(green)) {
            ctx.command = "green";
            ctx.options = {cfg_int("i0", i0), cfg_int("j0", j0),
                           cfg_int("targets", static_cast<long long>(target_args.size()))};
            if (!std::isnan(theta)) ctx.options.push_back(cfg_num("theta", theta));
            return cmd_green(ctx, i0, j0, target_args, theta);
        }
        if (app.got_subcommand(oracle)) {
            ctx.command = "oracle";
            ctx.options = {cfg_int("i0", i0), cfg_int("j0", j0), cfg_int("n", n),
                           cfg_raw("extrapolate", no_extrapolate ? "false" : "true"),
                           cfg_int("window", window), cfg_int("absorption_max", absorption_max)};
            return cmd_oracle(ctx, i0, j0, n, no_extrapolate, window, absorption_max);
        }
        if (app.got_subcommand(asymptotic)) {
            ctx.command = "asymptotic";
            ctx.options = {cfg_int("i0", i0), cfg_int("j0", j0),
                           cfg_str("directions", directions_arg), cfg_str("radii", radii_arg)};
            return cmd_asymptotic(ctx, i0, j0, directions_arg, radii_arg);
        }
        if (app.got_subcommand(martin)) {
            ctx.command = "martin";
            ctx.options = {cfg_int("i0", i0),       cfg_int("j0", j0),
                           cfg_str("ref", ref_arg), cfg_str("directions", directions_arg),
                           cfg_str("radii", radii_arg), cfg_str("method", method_arg)};
            if (method_arg == "oracle") ctx.options.push_back(cfg_int("n", n));
            return cmd_martin(ctx, i0, j0, ref_arg, directions_arg, radii_arg, method_arg, n);
        }
        if (app.got_subcommand(sweep)) {
            ctx.command = "sweep";
            Range ar = parse_range(alpha_arg, "--alpha");
            Range br = parse_range(beta_arg, "--beta");
            ctx.options = {cfg_raw("alpha_range", range_echo(ar)),
                           cfg_raw("beta_range", range_echo(br)), cfg_num("p11", p11),
                           cfg_num("p10", p10)};
            return cmd_sweep(ctx, ar, br, p11, p10);
        }
    } catch (const std::exception& e) {
        std::cout << "{\"error\": {\"type\": " << json_str(error_type(e))
                  << ", \"message\": " << json_str(e.what()) << "}}\n";
        return 1;
    }
    return 2;  // unreachable: require_subcommand(1)
}

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "panto/analysis.hpp"
#include "panto/errors.hpp"
#include "panto/linear.hpp"
#include "panto/reconstruct.hpp"
#include "panto/stepper.hpp"

namespace panto::cli {

namespace {

constexpr int kMaxPolyDegree = 16;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_finite(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v))
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("cannot parse " + what + " from '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_coeffs(const std::string& body, const std::string& what) {
    std::vector<double> coeffs;
    for (const std::string& piece : split(body, ','))
        coeffs.push_back(parse_finite(piece, what + " coefficient"));
    if (coeffs.size() > kMaxPolyDegree + 1)
        throw ValidationError(what + " degree exceeds " + std::to_string(kMaxPolyDegree));
    return coeffs;
}

// Default tolerance, overridable through PANTO_SEED_TOL.
double default_tol(double fallback) {
    if (const char* env = std::getenv("PANTO_SEED_TOL"))
        return parse_finite(env, "PANTO_SEED_TOL");
    return fallback;
}

} // namespace

Field parse_field(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ValidationError("field spec '" + spec +
                              "' lacks a kind prefix (linear:/affine:/poly:)");
    const std::string kind = spec.substr(0, colon);
    const std::string body = spec.substr(colon + 1);
    if (kind == "linear")
        return Field::linear(parse_finite(body, "linear coefficient"));
    if (kind == "affine") {
        auto parts = split(body, ',');
        if (parts.size() != 2)
            throw ValidationError("affine field needs exactly <lambda>,<c>");
        return Field::affine(parse_finite(parts[0], "affine lambda"),
                             parse_finite(parts[1], "affine offset"));
    }
    if (kind == "poly")
        return Field::polynomial(parse_coeffs(body, "field polynomial"));
    throw ValidationError("unknown field kind '" + kind + "'");
}

std::string canonical_field_spec(const std::string& spec) {
    return parse_field(spec).describe();
}

ParsedProfile parse_profile(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ValidationError("profile spec '" + spec +
                              "' lacks a kind prefix (poly:/const:)");
    const std::string kind = spec.substr(0, colon);
    const std::string body = spec.substr(colon + 1);
    if (kind == "const") {
        const double v = parse_finite(body, "profile constant");
        Profile p{[v](double) { return v; },
                  std::function<double(double)>([](double) { return 0.0; }),
                  kMaxPolyDegree};
        return {std::move(p), "const:" + fmt17(v)};
    }
    if (kind == "poly") {
        auto coeffs = parse_coeffs(body, "profile polynomial");
        auto eval = [coeffs](double t) {
            double acc = 0.0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
                acc = acc * t + *it;
            return acc;
        };
        auto deriv = [coeffs](double t) {
            double acc = 0.0;
            for (size_t i = coeffs.size(); i-- > 1;)
                acc = acc * t + coeffs[i] * static_cast<double>(i);
            return acc;
        };
        Profile p{eval, std::function<double(double)>(deriv), kMaxPolyDegree};
        std::string canonical = "poly:";
        for (size_t i = 0; i < coeffs.size(); ++i)
            canonical += (i ? "," : "") + fmt17(coeffs[i]);
        return {std::move(p), canonical};
    }
    throw ValidationError("unknown profile kind '" + kind + "'");
}

namespace {

// ---------------------------------------------------------------------------
// Deterministic JSON emission (17 significant digits everywhere).
// ---------------------------------------------------------------------------

std::string json_str(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string json_numbers(const std::vector<double>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + fmt17(v[i]);
    return out + "]";
}

std::string json_pairs(const std::vector<TimeValue>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        out += i ? "," : "";
        out += "{\"t\":" + fmt17(v[i].t) + ",\"value\":" + fmt17(v[i].value) + "}";
    }
    return out + "]";
}

std::string json_extrema(const std::vector<Extremum>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        out += i ? "," : "";
        out += "{\"t\":" + fmt17(v[i].t) + ",\"value\":" + fmt17(v[i].value) +
               ",\"kind\":" +
               json_str(v[i].kind == ExtremumKind::Minimum ? "min" : "max") + "}";
    }
    return out + "]";
}

std::string json_meta(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string out = "{";
    for (size_t i = 0; i < kv.size(); ++i) {
        out += i ? "," : "";
        out += json_str(kv[i].first) + ":" + kv[i].second;
    }
    return out + "}";
}

// The stable six-key analysis report.
std::string json_report(const std::vector<double>& roots,
                        const std::vector<Extremum>& extrema,
                        const std::vector<TimeValue>& lyapunov,
                        const std::vector<TimeValue>& ratio,
                        const std::vector<RegularityEntry>& regularity,
                        const std::string& meta) {
    std::string reg = "[";
    for (size_t i = 0; i < regularity.size(); ++i) {
        reg += i ? "," : "";
        reg += "{\"breakpoint\":" + fmt17(regularity[i].breakpoint) +
               ",\"continuous_derivatives\":" +
               std::to_string(regularity[i].continuous_derivatives) +
               ",\"measured_jump\":" + fmt17(regularity[i].measured_jump) + "}";
    }
    reg += "]";
    return "{\"roots\":" + json_numbers(roots) +
           ",\"extrema\":" + json_extrema(extrema) +
           ",\"lyapunov\":" + json_pairs(lyapunov) +
           ",\"ratio\":" + json_pairs(ratio) + ",\"regularity\":" + reg +
           ",\"meta\":" + meta + "}";
}

void write_output(const std::string& text, const std::string& out_file,
                  std::ostream& out) {
    if (out_file.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_file, std::ios::binary);
    if (!f)
        throw ValidationError("cannot open output file '" + out_file + "'");
    f << text;
}

struct ProblemFlags {
    double q = 0.5;
    double a = 0.0;
    double x0 = 1.0;
    std::string field_spec = "linear:1";
    std::string profile_spec;
    std::string profile_canonical;

    Problem build() const {
        Field field = parse_field(field_spec);
        if (a == 0.0) {
            if (!profile_spec.empty())
                throw ValidationError("a = 0 takes --x0, not --profile");
            return Problem(q, a, std::move(field), Degenerate{x0});
        }
        if (profile_spec.empty())
            throw ValidationError("a > 0 requires --profile");
        return Problem(q, a, std::move(field), parse_profile(profile_spec).profile);
    }

    void add_flags(CLI::App* cmd, bool with_profile = true) {
        cmd->add_option("--q", q, "delay ratio in (0,1)")->required();
        cmd->add_option("--a", a, "base point (0 for a degenerate condition)");
        cmd->add_option("--x0", x0, "initial value when a = 0");
        cmd->add_option("--field", field_spec,
                        "field spec: linear:<l> | affine:<l>,<c> | poly:<c0>,...");
        if (with_profile)
            cmd->add_option("--profile", profile_spec,
                            "profile spec when a > 0: poly:<c0>,... | const:<v>");
    }

    std::vector<std::pair<std::string, std::string>> meta(const char* sub) const {
        std::vector<std::pair<std::string, std::string>> kv;
        kv.emplace_back("subcommand", json_str(sub));
        kv.emplace_back("q", fmt17(q));
        kv.emplace_back("a", fmt17(a));
        kv.emplace_back("field", json_str(canonical_field_spec(field_spec)));
        if (a == 0.0)
            kv.emplace_back("x0", fmt17(x0));
        else
            kv.emplace_back("profile",
                            json_str(parse_profile(profile_spec).canonical));
        return kv;
    }
};

std::vector<double> geometric_samples(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int cmd_solve(const ProblemFlags& pf, double t_end, int steps, bool json,
              const std::string& out_file, std::ostream& out) {
    SolveConfig cfg;
    cfg.steps_per_segment = steps;
    cfg.residual_tol = default_tol(cfg.residual_tol);
    Trajectory traj = solve(pf.build(), t_end, cfg);

    std::string text;
    if (!json) {
        text = "t,x,dx\n";
        const Step& first = traj.steps().front();
        text += fmt17(first.t_lo) + "," + fmt17(first.x_lo) + "," +
                fmt17(first.d_lo) + "\n";
        for (const Step& s : traj.steps())
            text += fmt17(s.t_hi) + "," + fmt17(s.x_hi) + "," + fmt17(s.d_hi) + "\n";
    } else {
        auto kv = pf.meta("solve");
        kv.emplace_back("t_end", fmt17(t_end));
        kv.emplace_back("steps_per_segment", std::to_string(steps));
        text = "{\"meta\":" + json_meta(kv) + ",\"samples\":[";
        const Step& first = traj.steps().front();
        text += "[" + fmt17(first.t_lo) + "," + fmt17(first.x_lo) + "," +
                fmt17(first.d_lo) + "]";
        for (const Step& s : traj.steps())
            text += ",[" + fmt17(s.t_hi) + "," + fmt17(s.x_hi) + "," +
                    fmt17(s.d_hi) + "]";
        text += "]}\n";
    }
    write_output(text, out_file, out);
    return 0;
}

int cmd_series(double q, double lambda, double t, double x0, double tol,
               const std::string& out_file, std::ostream& out) {
    const double v = linear_solution({lambda, q, x0}, t, tol);
    write_output(fmt17(v) + "\n", out_file, out);
    return 0;
}

int cmd_roots(const ProblemFlags& pf, double t_end, int steps, bool json,
              const std::string& out_file, std::ostream& out) {
    SolveConfig cfg;
    cfg.steps_per_segment = steps;
    Trajectory traj = solve(pf.build(), t_end, cfg);
    auto roots = find_roots(traj, traj.t_start(), t_end);
    auto extrema = local_extrema(traj);

    std::string text;
    if (json) {
        auto kv = pf.meta("roots");
        kv.emplace_back("t_end", fmt17(t_end));
        text = json_report(roots, extrema, {}, {}, {}, json_meta(kv)) + "\n";
    } else {
        text = "root\n";
        for (double r : roots)
            text += fmt17(r) + "\n";
    }
    write_output(text, out_file, out);
    return 0;
}

int cmd_lyapunov(const ProblemFlags& pf, double t_end, double t_from, int n,
                 int steps, bool json, const std::string& out_file,
                 std::ostream& out) {
    if (!(t_from > 0.0 && t_end > t_from))
        throw ValidationError("need 0 < t-from < t-end");
    SolveConfig cfg;
    cfg.steps_per_segment = steps;
    Trajectory traj = solve(pf.build(), t_end, cfg);
    auto samples = geometric_samples(t_from, t_end, n);
    auto lyap = lyapunov_curve(traj, samples);
    auto ratio = ratio_curve(traj, samples);

    std::string text;
    if (json) {
        auto kv = pf.meta("lyapunov");
        kv.emplace_back("t_end", fmt17(t_end));
        kv.emplace_back("t_from", fmt17(t_from));
        kv.emplace_back("samples", std::to_string(n));
        text = json_report({}, {}, lyap, ratio, {}, json_meta(kv)) + "\n";
    } else {
        text = "t,lyapunov,ratio\n";
        for (size_t i = 0; i < lyap.size() && i < ratio.size(); ++i)
            text += fmt17(lyap[i].t) + "," + fmt17(lyap[i].value) + "," +
                    fmt17(ratio[i].value) + "\n";
    }
    write_output(text, out_file, out);
    return 0;
}

int cmd_reconstruct(const ProblemFlags& pf, int levels, double tol, bool json,
                    const std::string& out_file, std::ostream& out,
                    std::ostream& err) {
    ReconstructOptions opts;
    opts.tol = tol;
    auto result = reconstruct_iterated(pf.build(), levels, opts);
    for (const auto& w : result.warnings)
        err << "warning: " << w.message << "\n";

    std::string text;
    if (json) {
        auto kv = pf.meta("reconstruct");
        kv.emplace_back("levels_requested", std::to_string(levels));
        kv.emplace_back("levels_completed", std::to_string(result.levels_completed));
        kv.emplace_back("tol", fmt17(tol));
        text = "{\"meta\":" + json_meta(kv) + ",\"warnings\":[";
        for (size_t i = 0; i < result.warnings.size(); ++i) {
            text += i ? "," : "";
            text += "{\"level\":" + std::to_string(result.warnings[i].level) +
                    ",\"junction_residual\":" +
                    fmt17(result.warnings[i].junction_residual) +
                    ",\"numerically_amplified\":" +
                    (result.warnings[i].numerically_amplified ? "true" : "false") +
                    ",\"message\":" + json_str(result.warnings[i].message) + "}";
        }
        text += "],\"samples\":[";
        bool first = true;
        for (const DenseProfile& seg : result.segments) {
            for (const Step& s : seg.steps()) {
                if (first) {
                    text += "[" + fmt17(s.t_lo) + "," + fmt17(s.x_lo) + "]";
                    first = false;
                }
                text += ",[" + fmt17(s.t_hi) + "," + fmt17(s.x_hi) + "]";
            }
        }
        text += "]}\n";
    } else {
        text = "t,x\n";
        bool first = true;
        for (const DenseProfile& seg : result.segments) {
            for (const Step& s : seg.steps()) {
                if (first) {
                    text += fmt17(s.t_lo) + "," + fmt17(s.x_lo) + "\n";
                    first = false;
                }
                text += fmt17(s.t_hi) + "," + fmt17(s.x_hi) + "\n";
            }
        }
    }
    write_output(text, out_file, out);
    return 0;
}

int cmd_oscillate(double lambda_abs, double q, double x0, double t_end, int steps,
                  const std::string& out_file, std::ostream& out) {
    SolveConfig cfg;
    cfg.steps_per_segment = steps;
    AnalysisReport report = oscillation_experiment(lambda_abs, q, x0, t_end, cfg);

    std::vector<TimeValue> ratios;
    for (size_t i = 0; i < report.extremum_magnitude_ratios.size(); ++i)
        ratios.push_back({static_cast<double>(i + 1),
                          report.extremum_magnitude_ratios[i]});

    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("subcommand", json_str("oscillate"));
    kv.emplace_back("q", fmt17(q));
    kv.emplace_back("lambda", fmt17(lambda_abs));
    kv.emplace_back("x0", fmt17(x0));
    kv.emplace_back("t_end", fmt17(t_end));
    kv.emplace_back("ratio_meaning",
                    json_str("consecutive extremum magnitude ratios by index"));
    write_output(json_report(report.roots, report.extrema, {}, ratios, {},
                             json_meta(kv)) +
                     "\n",
                 out_file, out);
    return 0;
}

int cmd_regularity(double q, double a, int l, double t,
                   const std::string& out_file, std::ostream& out) {
    write_output(std::to_string(regularity_count(l, a, q, t)) + "\n", out_file, out);
    return 0;
}

int cmd_sweep(const std::vector<std::string>& grid_specs, double x0, double t_end,
              int steps, const std::string& out_file, std::ostream& out) {
    std::vector<double> qs, lambdas;
    for (const std::string& spec : grid_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw ValidationError("grid entry '" + spec + "' is not name=v1,v2,...");
        const std::string name = spec.substr(0, eq);
        auto vals = parse_coeffs(spec.substr(eq + 1), "grid");
        if (name == "q")
            qs = vals;
        else if (name == "lambda")
            lambdas = vals;
        else
            throw ValidationError("unknown grid parameter '" + name + "'");
    }
    if (qs.empty() || lambdas.empty())
        throw ValidationError("sweep needs both q=... and lambda=... grids");

    SolveConfig cfg;
    cfg.steps_per_segment = steps;
    std::string text;
    int index = 0;
    for (double q : qs) {
        for (double lambda : lambdas) {
            Problem problem(q, 0.0, Field::linear(lambda), Degenerate{x0});
            Trajectory traj = solve(problem, t_end, cfg);
            auto roots = find_roots(traj, 0.0, t_end);
            auto extrema = local_extrema(traj);
            std::vector<TimeValue> ratios;
            for (size_t i = 0; i + 1 < extrema.size(); ++i) {
                const double lo = std::abs(extrema[i].value);
                if (lo > 0.0)
                    ratios.push_back({static_cast<double>(i + 1),
                                      std::abs(extrema[i + 1].value) / lo});
            }
            std::vector<std::pair<std::string, std::string>> kv;
            kv.emplace_back("subcommand", json_str("sweep"));
            kv.emplace_back("index", std::to_string(index));
            kv.emplace_back("q", fmt17(q));
            kv.emplace_back("lambda", fmt17(lambda));
            kv.emplace_back("x0", fmt17(x0));
            kv.emplace_back("t_end", fmt17(t_end));
            text += json_report(roots, extrema, {}, ratios, {}, json_meta(kv)) + "\n";
            ++index;
        }
    }
    write_output(text, out_file, out);
    return 0;
}

} // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"pantograph-equation solver: x'(t) = F(x(qt))"};
    app.require_subcommand(1);

    std::string format = "csv";
    std::string out_file;
    ProblemFlags pf;
    double t_end = 10.0, t = 1.0, t_from = 1.0, lambda = 1.0, x0 = 1.0;
    double tol = default_tol(1e-15);
    double rec_tol = default_tol(1e-8);
    int steps = 64, levels = 1, l = 0, n_samples = 32;
    std::vector<std::string> grid_specs;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_file, "write output to FILE instead of stdout");
    };

    auto* solve_cmd = app.add_subcommand("solve", "forward solve by the method of steps");
    pf.add_flags(solve_cmd);
    solve_cmd->add_option("--t-end", t_end, "solve horizon")->required();
    solve_cmd->add_option("--steps-per-segment", steps, "discretization density");
    add_common(solve_cmd);

    auto* series_cmd = app.add_subcommand("series", "linear-case Taylor series value");
    series_cmd->add_option("--q", pf.q, "delay ratio")->required();
    series_cmd->add_option("--lambda", lambda, "linear coefficient")->required();
    series_cmd->add_option("--t", t, "evaluation time")->required();
    series_cmd->add_option("--x0", x0, "initial value scaling");
    series_cmd->add_option("--tol", tol, "series truncation tolerance");
    add_common(series_cmd);

    auto* roots_cmd = app.add_subcommand("roots", "zero crossings and extrema");
    pf.add_flags(roots_cmd);
    roots_cmd->add_option("--t-end", t_end, "solve horizon")->required();
    roots_cmd->add_option("--steps-per-segment", steps, "discretization density");
    add_common(roots_cmd);

    auto* lyap_cmd = app.add_subcommand("lyapunov", "Lyapunov and ratio curves");
    pf.add_flags(lyap_cmd);
    lyap_cmd->add_option("--t-end", t_end, "solve horizon")->required();
    lyap_cmd->add_option("--t-from", t_from, "first sample time");
    lyap_cmd->add_option("--samples", n_samples, "number of geometric samples");
    lyap_cmd->add_option("--steps-per-segment", steps, "discretization density");
    add_common(lyap_cmd);

    auto* rec_cmd = app.add_subcommand("reconstruct", "backward extension below qa");
    pf.add_flags(rec_cmd);
    rec_cmd->add_option("--levels", levels, "number of backward segments");
    rec_cmd->add_option("--tol", rec_tol, "junction compatibility tolerance");
    add_common(rec_cmd);

    auto* reg_cmd = app.add_subcommand("regularity", "continuous-derivative count");
    reg_cmd->add_option("--q", pf.q, "delay ratio")->required();
    reg_cmd->add_option("--a", pf.a, "base point")->required();
    reg_cmd->add_option("--l", l, "profile smoothness class");
    reg_cmd->add_option("--t", t, "query time")->required();
    add_common(reg_cmd);

    auto* osc_cmd = app.add_subcommand("oscillate", "oscillation evidence for x' = -lambda x(qt)");
    osc_cmd->add_option("--lambda", lambda, "positive coefficient magnitude")->required();
    osc_cmd->add_option("--q", pf.q, "delay ratio")->required();
    osc_cmd->add_option("--x0", x0, "initial value");
    osc_cmd->add_option("--t-end", t_end, "solve horizon")->required();
    osc_cmd->add_option("--steps-per-segment", steps, "discretization density");
    add_common(osc_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "parameter grid study (JSON lines)");
    sweep_cmd->add_option("--grid", grid_specs, "grid entries: q=...,... lambda=...,...")
        ->required()
        ->expected(-1);
    sweep_cmd->add_option("--x0", x0, "initial value");
    sweep_cmd->add_option("--t-end", t_end, "solve horizon");
    sweep_cmd->add_option("--steps-per-segment", steps, "discretization density");
    add_common(sweep_cmd);

    try {
        std::vector<std::string> reversed(argv.rbegin(), argv.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    const bool json = format == "json";
    try {
        if (solve_cmd->parsed())
            return cmd_solve(pf, t_end, steps, json, out_file, out);
        if (series_cmd->parsed())
            return cmd_series(pf.q, lambda, t, x0, tol, out_file, out);
        if (roots_cmd->parsed())
            return cmd_roots(pf, t_end, steps, json, out_file, out);
        if (lyap_cmd->parsed())
            return cmd_lyapunov(pf, t_end, t_from, n_samples, steps, json, out_file, out);
        if (rec_cmd->parsed())
            return cmd_reconstruct(pf, levels, rec_tol, json, out_file, out, err);
        if (reg_cmd->parsed())
            return cmd_regularity(pf.q, pf.a, l, t, out_file, out);
        if (osc_cmd->parsed())
            return cmd_oscillate(lambda, pf.q, x0, t_end, steps, out_file, out);
        if (sweep_cmd->parsed())
            return cmd_sweep(grid_specs, x0, t_end, steps, out_file, out);
        err << app.help();
        return 2;
    } catch (const OverflowError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const CompatibilityError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const NotInvertibleError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace panto::cli

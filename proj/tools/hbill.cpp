// hbill: billiards in confocal H-ellipses on the one-sheeted hyperboloid.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hbill/billiard.hpp"
#include "hbill/cayley.hpp"
#include "hbill/confocal.hpp"
#include "hbill/error.hpp"
#include "hbill/geodesic.hpp"
#include "hbill/io.hpp"
#include "hbill/mink.hpp"

using namespace hbill;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitStop = 3;

struct Globals {
    std::string tol;
    std::string format;
    std::string out;
    std::string config;
};

// Command line values first, config file second.
struct Args {
    std::map<std::string, std::string> cli;
    RunConfig cfg;
    std::vector<double> table;

    std::optional<std::string> get(const std::string& key) const
    {
        if (auto it = cli.find(key); it != cli.end() && !it->second.empty())
            return it->second;
        if (auto it = cfg.options.find(key); it != cfg.options.end())
            return it->second;
        return std::nullopt;
    }

    std::string require(const std::string& key) const
    {
        if (auto v = get(key))
            return *v;
        throw Error(ErrorCode::InvalidArgument, "missing --" + key);
    }
};

std::string fmt(double v)
{
    if (!std::isfinite(v))
        return format_double(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(const MVec& v)
{
    return "(" + fmt(v.x0) + ", " + fmt(v.x1) + ", " + fmt(v.x2) + ")";
}

MVec parse_vec(const std::string& s)
{
    std::vector<double> xs;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        xs.push_back(parse_double(item));
    if (xs.size() != 3)
        throw Error(ErrorCode::ParseError, "expected three comma-separated numbers, got '" + s + "'");
    return {xs[0], xs[1], xs[2]};
}

int parse_int(const std::string& s)
{
    const double v = parse_double(s);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw Error(ErrorCode::ParseError, "expected an integer, got '" + s + "'");
    return static_cast<int>(v);
}

json jnum(double v)
{
    if (std::isfinite(v))
        return v;
    return format_double(v);
}

json jvec(const MVec& v)
{
    return json::array({v.x0, v.x1, v.x2});
}

TableParams table_of(const Args& a)
{
    std::array<double, 3> p{};
    if (a.table.size() == 3)
        p = {a.table[0], a.table[1], a.table[2]};
    else if (a.cfg.table)
        p = *a.cfg.table;
    else
        throw Error(ErrorCode::InvalidArgument, "table parameters a0 a1 a2 are required");
    return classify_table(p[0], p[1], p[2]);
}

void emit(const Globals& g, const std::string& text)
{
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f)
        throw Error(ErrorCode::InvalidArgument, "cannot write " + g.out);
    f << text;
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string render_trajectory(const Trajectory& traj, const std::string& format)
{
    if (format.empty() || format == "json")
        return write_trajectory_json(traj);
    if (format == "csv")
        return klein_csv(traj);
    if (format == "svg")
        return trajectory_svg(traj);
    throw Error(ErrorCode::InvalidArgument, "trajectory format must be json, csv or svg");
}

bool want_json(const Globals& g)
{
    if (g.format.empty() || g.format == "text")
        return false;
    if (g.format == "json")
        return true;
    throw Error(ErrorCode::InvalidArgument, "report format must be text or json");
}

void check_on_boundary(const TableParams& t, const MVec& p)
{
    if (!on_hyperboloid(p, 1e-9))
        throw Error(ErrorCode::InvalidArgument, "point " + fmt(p) + " is not on the hyperboloid");
    if (std::abs(boundary_eval(t, p)) > 1e-9)
        throw Error(ErrorCode::InvalidArgument, "point " + fmt(p) + " is not on the boundary");
}

// Start points tried when the user does not pin one down.
std::vector<MVec> default_starts(const TableParams& t)
{
    std::vector<MVec> out;
    for (double ang : {0.3, 0.9, 1.4, 2.1, 2.6, 3.5, 4.4, 5.3})
        for (int comp : {1, -1}) {
            if (comp < 0 && t.kind != TableKind::Collared)
                continue;
            out.push_back(boundary_point(t, ang, comp));
        }
    return out;
}

std::optional<MVec> start_point(const Args& a, const TableParams& t)
{
    if (auto p = a.get("point")) {
        const MVec x = parse_vec(*p);
        check_on_boundary(t, x);
        return x;
    }
    if (auto ang = a.get("angle")) {
        const int comp = a.get("component") ? parse_int(*a.get("component")) : 1;
        return boundary_point(t, parse_double(*ang), comp);
    }
    return std::nullopt;
}

void apply_tol(const Globals& g, const RunConfig& cfg, Trajectory& traj)
{
    const double tol = !g.tol.empty() ? parse_double(g.tol) : cfg.tol;
    if (tol != kClosureTol)
        traj.closure = detect_closure(traj, tol);
}

int cmd_classify(const Args& a, const Globals& g)
{
    const TableParams t = table_of(a);
    const auto k = klein_boundary_coeffs(t);
    if (want_json(g)) {
        json j;
        j["a"] = json::array({t.a0, t.a1, t.a2});
        j["kind"] = std::string(to_string(t.kind));
        j["klein"] = json::array({k[0], k[1]});
        json f = json::object();
        for (int axis = 0; axis < 3; ++axis) {
            const auto fs = foci(t, axis);
            json list = nullptr;
            if (fs) {
                list = json::array();
                for (const MVec& p : *fs)
                    list.push_back(jvec(p));
            }
            f["axis" + std::to_string(axis)] = list;
        }
        j["foci"] = f;
        emit(g, j.dump(2) + "\n");
        return kExitOk;
    }
    std::string s = "kind=" + std::string(to_string(t.kind)) + "\n";
    s += "klein=(" + fmt(k[0]) + "," + fmt(k[1]) + ")\n";
    for (int axis = 0; axis < 3; ++axis) {
        s += "foci axis" + std::to_string(axis) + ":";
        if (const auto fs = foci(t, axis)) {
            for (const MVec& p : *fs)
                s += " " + fmt(p);
        }
        else {
            s += " none";
        }
        s += "\n";
    }
    emit(g, s);
    return kExitOk;
}

int cmd_jacobi(const Args& a, const Globals& g)
{
    const TableParams t = table_of(a);
    const MVec x = parse_vec(a.require("point"));
    if (!on_hyperboloid(x, 1e-9))
        throw Error(ErrorCode::InvalidArgument, "point " + fmt(x) + " is not on the hyperboloid");
    const JacobiCoords jc = jacobi_coordinates(t, x);
    const char* kind = jc.kind == JacobiCoords::Kind::TwoRoots     ? "two-roots"
                       : jc.kind == JacobiCoords::Kind::DoubleRoot ? "double-root"
                                                                   : "no-real-roots";
    std::optional<Region> region;
    if (t.kind == TableKind::Transverse)
        region = region_classify(t, x);
    if (want_json(g)) {
        json j;
        j["kind"] = kind;
        j["case"] = std::string(to_string(jc.tag));
        j["discriminant"] = jc.discriminant;
        if (jc.kind != JacobiCoords::Kind::NoRealRoots)
            j["roots"] = json::array({jc.lo, jc.hi});
        if (region)
            j["region"] = std::string(to_string(*region));
        emit(g, j.dump(2) + "\n");
        return kExitOk;
    }
    std::string s = "kind=" + std::string(kind) + "\ncase=" + std::string(to_string(jc.tag)) + "\n";
    if (jc.kind != JacobiCoords::Kind::NoRealRoots)
        s += "roots=" + fmt(jc.lo) + " " + fmt(jc.hi) + "\n";
    s += "discriminant=" + fmt(jc.discriminant) + "\n";
    if (region)
        s += "region=" + std::string(to_string(*region)) + "\n";
    emit(g, s);
    return kExitOk;
}

int cmd_simulate(const Args& a, const Globals& g)
{
    const TableParams t = table_of(a);
    const auto x = start_point(a, t);
    if (!x)
        throw Error(ErrorCode::InvalidArgument, "give --point or --angle for the start");
    const Side side = a.get("side") ? side_from_string(*a.get("side")) : Side::Interior;
    const int bounces = a.get("bounces") ? parse_int(*a.get("bounces")) : 10;

    MVec dir;
    if (auto d = a.get("dir")) {
        dir = parse_vec(*d);
        if (std::abs(inner(*x, dir)) > 1e-8 * euclid_norm(dir))
            throw Error(ErrorCode::NotTangent, "--dir is not tangent to the hyperboloid at the start point");
        dir = normalize_direction(dir);
    }
    else if (auto q = a.get("toward")) {
        dir = direction_toward(*x, parse_vec(*q));
    }
    else if (auto nu = a.get("nu")) {
        const auto dirs = direction_for_caustic(t, *x, parse_double(*nu), side);
        const int branch = a.get("branch") ? parse_int(*a.get("branch")) : 0;
        if (dirs.empty())
            throw Error(ErrorCode::NoTangentDirection, "no direction at the start point is tangent to C_nu");
        if (branch < 0 || branch >= static_cast<int>(dirs.size()))
            throw Error(ErrorCode::InvalidArgument, "--branch must be below " + std::to_string(dirs.size()));
        dir = dirs[branch];
    }
    else if (auto cls = a.get("class")) {
        const double rapidity = a.get("rapidity") ? parse_double(*a.get("rapidity")) : 0.5;
        const int branch = a.get("branch") ? parse_int(*a.get("branch")) : 1;
        dir = make_direction(t, *x, causal_class_from_string(*cls), rapidity, side, branch);
    }
    else {
        throw Error(ErrorCode::InvalidArgument, "give one of --dir, --toward, --nu or --class");
    }

    Trajectory traj = simulate(t, {*x, dir}, bounces, side);
    apply_tol(g, a.cfg, traj);
    emit(g, render_trajectory(traj, g.format));
    if (traj.status != StopStatus::Completed) {
        std::cerr << "stopped after " << traj.bounces() << " bounces: " << to_string(traj.status) << "\n";
        return kExitStop;
    }
    return kExitOk;
}

int cmd_caustic(const Args& a, const Globals& g)
{
    const TableParams t = table_of(a);
    const MVec x = parse_vec(a.require("x"));
    const MVec y = parse_vec(a.require("y"));
    const double nu = caustic_nu(t, x, y);
    const Integrals f = integrals(t, x, y);
    const auto r = projective_ratios(f);
    const double w2 = wedge_norm2(x, y);
    if (want_json(g)) {
        json j;
        j["nu"] = jnum(nu);
        j["F"] = json::array({f[0], f[1], f[2]});
        j["f_ratios"] = json::array({r[0], r[1], r[2]});
        j["wedge_norm2"] = w2;
        emit(g, j.dump(2) + "\n");
        return kExitOk;
    }
    std::string s = "nu=" + fmt(nu) + "\n";
    s += "F=(" + fmt(f[0]) + ", " + fmt(f[1]) + ", " + fmt(f[2]) + ")\n";
    s += "f_ratios=(" + fmt(r[0]) + ", " + fmt(r[1]) + ", " + fmt(r[2]) + ")\n";
    s += "wedge_norm2=" + fmt(w2) + "\n";
    emit(g, s);
    return kExitOk;
}

std::optional<VerifyReport> verify_any(const TableParams& t, double nu, int n, const std::vector<MVec>& starts)
{
    std::optional<VerifyReport> best;
    for (const MVec& x : starts) {
        try {
            VerifyReport r = verify_periodic(t, nu, n, x);
            const bool take = !best || (r.period > 0 && best->period == 0) ||
                              ((r.period > 0) == (best->period > 0) && r.residual < best->residual);
            if (take)
                best = std::move(r);
            if (best->period > 0)
                break;
        }
        catch (const Error& e) {
            if (e.code() != ErrorCode::NoTangentDirection && e.code() != ErrorCode::SingularPoint)
                throw;
        }
    }
    return best;
}

int cmd_cayley(const Args& a, const Globals& g)
{
    const TableParams t = table_of(a);
    const int n = parse_int(a.require("period"));
    const CayleySolution sol = find_periodic_caustics(t, n);
    const auto starts = default_starts(t);

    struct Row {
        CayleyRoot root;
        std::optional<VerifyReport> check;
    };
    std::vector<Row> rows;
    for (const CayleyRoot& r : sol.roots)
        rows.push_back({r, verify_any(t, r.nu, n, starts)});

    if (want_json(g)) {
        json j;
        j["period"] = n;
        j["method"] = std::string(to_string(sol.method));
        json roots = json::array();
        for (const Row& row : rows) {
            json r = {{"nu", row.root.nu}, {"residual", row.root.residual}};
            if (row.check)
                r["verify"] = {{"period", row.check->period},
                               {"residual", jnum(row.check->residual)},
                               {"side", std::string(to_string(row.check->side))}};
            else
                r["verify"] = nullptr;
            roots.push_back(r);
        }
        j["roots"] = roots;
        j["degenerate"] = sol.degenerate;
        j["closed_form"] = sol.closed_form;
        emit(g, j.dump(2) + "\n");
        return kExitOk;
    }
    std::string s = "period=" + std::to_string(n) + " method=" + std::string(to_string(sol.method)) + "\n";
    s += "nu                  det_residual  verify_period  verify_residual  side\n";
    for (const Row& row : rows) {
        char buf[160];
        if (row.check)
            std::snprintf(buf, sizeof buf, "%-19.12g %-13.2e %-14d %-16.2e %s\n", row.root.nu, row.root.residual,
                          row.check->period, row.check->residual, std::string(to_string(row.check->side)).c_str());
        else
            std::snprintf(buf, sizeof buf, "%-19.12g %-13.2e %-14s %-16s %s\n", row.root.nu, row.root.residual, "-",
                          "-", "no tangent start");
        s += buf;
    }
    s += "degenerate:";
    for (double d : sol.degenerate)
        s += " " + fmt(d);
    s += sol.degenerate.empty() ? " none\n" : "\n";
    s += "closed form:";
    for (double c : sol.closed_form)
        s += " " + fmt(c);
    s += sol.closed_form.empty() ? " none\n" : "\n";
    emit(g, s);
    return kExitOk;
}

int cmd_verify(const Args& a, const Globals& g)
{
    const TableParams t = table_of(a);
    const double nu = parse_double(a.require("nu"));
    const int n = parse_int(a.require("period"));
    std::vector<MVec> starts;
    if (auto x = start_point(a, t))
        starts.push_back(*x);
    else
        starts = default_starts(t);
    const auto r = verify_any(t, nu, n, starts);
    if (!r)
        throw Error(ErrorCode::NoTangentDirection, "no start point admits a direction tangent to C_nu");
    if (want_json(g)) {
        json j = {{"period", r->period},
                  {"residual", jnum(r->residual)},
                  {"best_k", r->best_k},
                  {"side", std::string(to_string(r->side))},
                  {"start", jvec(r->trajectory.states.front().point)},
                  {"dir", jvec(r->dir)},
                  {"nu_drift", jnum(r->nu_drift)}};
        emit(g, j.dump(2) + "\n");
        return kExitOk;
    }
    std::string s = "period=" + std::to_string(r->period) + "\nresidual=" + fmt(r->residual) +
                    "\nbest_k=" + std::to_string(r->best_k) + "\nside=" + std::string(to_string(r->side)) +
                    "\nstart=" + fmt(r->trajectory.states.front().point) + "\ndir=" + fmt(r->dir) +
                    "\nnu_drift=" + fmt(r->nu_drift) + "\n";
    emit(g, s);
    return kExitOk;
}

int cmd_aa(const Args& a, const Globals& g)
{
    Trajectory traj = read_trajectory_json(read_file(a.require("in")));
    Trajectory img = aa_map(traj);
    apply_tol(g, a.cfg, img);
    emit(g, render_trajectory(img, g.format));
    return kExitOk;
}

int cmd_export(const Args& a, const Globals& g)
{
    Trajectory traj = read_trajectory_json(read_file(a.require("in")));
    apply_tol(g, a.cfg, traj);
    emit(g, render_trajectory(traj, g.format));
    return kExitOk;
}

bool is_input_error(ErrorCode c)
{
    return c != ErrorCode::DegenerateReflection && c != ErrorCode::DegenerateTangency;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Billiards inside confocal H-ellipses on the hyperboloid of one sheet"};
    app.require_subcommand(1);

    Globals g;
    Args args;
    auto add_globals = [&](CLI::App* sub) {
        sub->add_option("--tol", g.tol, "closure tolerance");
        sub->add_option("--format", g.format, "text|json for reports, json|csv|svg for trajectories");
        sub->add_option("--out", g.out, "output file (default stdout)");
        sub->add_option("--config", g.config, "key=value config file");
    };
    add_globals(&app);

    auto opt = [&](CLI::App* sub, const std::string& name, const std::string& help) {
        sub->add_option("--" + name, args.cli[name], help);
    };
    auto table_pos = [&](CLI::App* sub) {
        sub->add_option("table", args.table, "a0 a1 a2")->expected(3);
    };

    struct Verb {
        CLI::App* app;
        int (*run)(const Args&, const Globals&);
    };
    std::vector<Verb> verbs;

    auto* classify = app.add_subcommand("classify", "boundary kind, Klein equation and foci");
    table_pos(classify);
    verbs.push_back({classify, cmd_classify});

    auto* jacobi = app.add_subcommand("jacobi", "Jacobi coordinates of a point");
    table_pos(jacobi);
    opt(jacobi, "point", "x0,x1,x2 on the hyperboloid");
    verbs.push_back({jacobi, cmd_jacobi});

    auto* sim = app.add_subcommand("simulate", "run the billiard from a boundary point");
    table_pos(sim);
    opt(sim, "point", "start x0,x1,x2 on the boundary");
    opt(sim, "angle", "start by boundary angle instead of --point");
    opt(sim, "component", "collared boundary component for --angle (+1/-1)");
    opt(sim, "dir", "initial direction v0,v1,v2");
    opt(sim, "toward", "initial direction toward this point of H");
    opt(sim, "nu", "initial direction tangent to the caustic C_nu");
    opt(sim, "class", "space-like|time-like|light-like direction from the boundary frame");
    opt(sim, "rapidity", "boost parameter for --class");
    opt(sim, "branch", "which solution for --nu (0/1) or light-like family for --class (+1/-1)");
    opt(sim, "bounces", "number of bounces (default 10)");
    opt(sim, "side", "interior|exterior");
    verbs.push_back({sim, cmd_simulate});

    auto* caustic = app.add_subcommand("caustic", "caustic parameter and integrals of a chord");
    table_pos(caustic);
    opt(caustic, "x", "first point");
    opt(caustic, "y", "second point");
    verbs.push_back({caustic, cmd_caustic});

    auto* cayley = app.add_subcommand("cayley", "caustics of n-periodic trajectories");
    table_pos(cayley);
    opt(cayley, "period", "period n >= 3");
    verbs.push_back({cayley, cmd_cayley});

    auto* verify = app.add_subcommand("verify", "simulate a claimed periodic caustic");
    table_pos(verify);
    opt(verify, "nu", "caustic parameter");
    opt(verify, "period", "claimed period");
    opt(verify, "point", "start point on the boundary");
    opt(verify, "angle", "start by boundary angle");
    opt(verify, "component", "collared boundary component for --angle");
    verbs.push_back({verify, cmd_verify});

    auto* aa = app.add_subcommand("aa", "alternating antipodal image of a trajectory file");
    opt(aa, "in", "trajectory JSON");
    verbs.push_back({aa, cmd_aa});

    auto* exp = app.add_subcommand("export", "re-render a trajectory file as json, csv or svg");
    opt(exp, "in", "trajectory JSON");
    verbs.push_back({exp, cmd_export});

    for (const Verb& v : verbs)
        add_globals(v.app);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (!g.config.empty()) {
            args.cfg = parse_config(read_file(g.config));
            if (g.format.empty())
                g.format = args.cfg.format;
            if (g.out.empty())
                g.out = args.cfg.out;
        }
        for (const Verb& v : verbs)
            if (v.app->parsed())
                return v.run(args, g);
    }
    catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_input_error(e.code()) ? kExitInput : kExitStop;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}

#include "hbill/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "hbill/error.hpp"

namespace hbill {

namespace {

using nlohmann::json;

json num(double v)
{
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return "nan";
    return v > 0 ? "inf" : "-inf";
}

double num_from(const json& j)
{
    if (j.is_number())
        return j.get<double>();
    if (j.is_string())
        return parse_double(j.get<std::string>());
    if (j.is_null())
        return std::numeric_limits<double>::quiet_NaN();
    throw Error(ErrorCode::ParseError, "expected a number, got " + j.dump());
}

json vec(const MVec& v)
{
    return json::array({num(v.x0), num(v.x1), num(v.x2)});
}

MVec vec_from(const json& j)
{
    if (!j.is_array() || j.size() != 3)
        throw Error(ErrorCode::ParseError, "expected a 3-vector, got " + j.dump());
    return {num_from(j[0]), num_from(j[1]), num_from(j[2])};
}

json triple(const std::array<double, 3>& a)
{
    return json::array({num(a[0]), num(a[1]), num(a[2])});
}

std::string svg_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Box {
    double x0, x1, y0, y1;

    bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

// Where the ray p + s d (s > 0) leaves the box.
std::array<double, 2> ray_exit(const Box& b, double px, double py, double dx, double dy)
{
    double s = std::numeric_limits<double>::infinity();
    if (dx > 0) s = std::min(s, (b.x1 - px) / dx);
    if (dx < 0) s = std::min(s, (b.x0 - px) / dx);
    if (dy > 0) s = std::min(s, (b.y1 - py) / dy);
    if (dy < 0) s = std::min(s, (b.y0 - py) / dy);
    if (!std::isfinite(s) || s < 0)
        s = 0;
    return {px + s * dx, py + s * dy};
}

using Polyline = std::vector<std::array<double, 2>>;

std::vector<Polyline> conic_polylines(double c1, double c2, const Box& b)
{
    std::vector<Polyline> out;
    constexpr int kSamples = 256;
    const double reach =
        2.0 * std::max({std::abs(b.x0), std::abs(b.x1), std::abs(b.y0), std::abs(b.y1), 1.0});
    if (c1 > 0 && c2 > 0) {
        Polyline p;
        for (int i = 0; i <= kSamples; ++i) {
            const double th = 2.0 * M_PI * i / kSamples;
            p.push_back({std::sqrt(c1) * std::cos(th), std::sqrt(c2) * std::sin(th)});
        }
        out.push_back(std::move(p));
    }
    else if ((c1 > 0) != (c2 > 0)) {
        // The real axis is the one with the positive coefficient.
        const bool along1 = c1 > 0;
        const double r = std::sqrt(along1 ? c1 : c2);
        const double q = std::sqrt(-(along1 ? c2 : c1));
        const double u_max = std::max(std::acosh(std::max(1.0, reach / r)), std::asinh(reach / q));
        for (double branch : {1.0, -1.0}) {
            Polyline p;
            for (int i = 0; i <= kSamples; ++i) {
                const double u = -u_max + 2.0 * u_max * i / kSamples;
                const double a = branch * r * std::cosh(u);
                const double c = q * std::sinh(u);
                p.push_back(along1 ? std::array{a, c} : std::array{c, a});
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::string polyline_svg(const Polyline& p, std::string_view cls)
{
    std::string s = "<polyline class=\"" + std::string(cls) + "\" points=\"";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i)
            s += ' ';
        s += svg_num(p[i][0]) + ',' + svg_num(-p[i][1]);
    }
    return s + "\"/>\n";
}

} // namespace

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(std::string_view s)
{
    s = trim(s);
    if (s == "inf" || s == "+inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty())
        throw Error(ErrorCode::ParseError, "not a number: '" + std::string(s) + "'");
    return v;
}

json trajectory_to_json(const Trajectory& traj)
{
    json j;
    j["table"] = {{"a", json::array({traj.table.a0, traj.table.a1, traj.table.a2})},
                  {"kind", std::string(to_string(traj.table.kind))}};
    j["side"] = std::string(to_string(traj.side));
    j["status"] = std::string(to_string(traj.status));

    json states = json::array();
    json klein = json::array();
    for (const BilliardState& s : traj.states) {
        states.push_back({{"point", vec(s.point)}, {"dir", vec(s.dir)},
                          {"class", std::string(to_string(causal_class(s.dir)))}});
        try {
            const KleinPoint k = klein_project(s.point);
            klein.push_back(json::array({num(k.xi1), num(k.xi2)}));
        }
        catch (const Error&) {
            klein.push_back(nullptr);
        }
    }
    j["states"] = std::move(states);
    j["klein"] = std::move(klein);

    json segs = json::array();
    for (std::size_t k = 0; k < traj.segment_nu.size(); ++k)
        segs.push_back({{"class", std::string(to_string(traj.segment_class[k]))},
                        {"nu", num(traj.segment_nu[k])},
                        {"f_ratios", triple(traj.segment_f_ratios[k])}});
    j["segments"] = std::move(segs);
    j["nu"] = num(traj.nu);
    j["f_ratios"] = triple(traj.f_ratios);
    j["closure"] = {{"period", traj.closure.period},
                    {"residual", num(traj.closure.residual)},
                    {"best_k", traj.closure.best_k}};
    return j;
}

Trajectory trajectory_from_json(const json& j)
{
    try {
        const json& a = j.at("table").at("a");
        if (!a.is_array() || a.size() != 3)
            throw Error(ErrorCode::ParseError, "table.a must hold three numbers");
        Trajectory traj;
        traj.table = classify_table(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
        traj.side = j.contains("side") ? side_from_string(j["side"].get<std::string>()) : Side::Interior;
        traj.status = j.contains("status") ? stop_status_from_string(j["status"].get<std::string>())
                                           : StopStatus::Completed;
        for (const json& s : j.at("states"))
            traj.states.push_back({vec_from(s.at("point")), vec_from(s.at("dir"))});
        annotate(traj);
        return traj;
    }
    catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

std::string write_trajectory_json(const Trajectory& traj)
{
    return trajectory_to_json(traj).dump(2) + "\n";
}

Trajectory read_trajectory_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    }
    catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return trajectory_from_json(j);
}

std::string klein_csv(const Trajectory& traj)
{
    std::string s = "k,x0,x1,x2,xi1,xi2\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const MVec& p = traj.states[k].point;
        s += std::to_string(k) + ',' + format_double(p.x0) + ',' + format_double(p.x1) + ',' + format_double(p.x2);
        try {
            const KleinPoint kp = klein_project(p);
            s += ',' + format_double(kp.xi1) + ',' + format_double(kp.xi2);
        }
        catch (const Error&) {
            s += ",,";
        }
        s += '\n';
    }
    return s;
}

std::string trajectory_svg(const Trajectory& traj)
{
    const TableParams& t = traj.table;
    const auto bc = klein_boundary_coeffs(t);

    // Viewport: finite bounce points plus the boundary vertices.
    std::vector<std::array<double, 2>> anchors;
    for (const BilliardState& s : traj.states) {
        try {
            const KleinPoint k = klein_project(s.point);
            anchors.push_back({k.xi1, k.xi2});
        }
        catch (const Error&) {
        }
    }
    if (bc[0] > 0) {
        anchors.push_back({std::sqrt(bc[0]), 0});
        anchors.push_back({-std::sqrt(bc[0]), 0});
    }
    if (bc[1] > 0) {
        anchors.push_back({0, std::sqrt(bc[1])});
        anchors.push_back({0, -std::sqrt(bc[1])});
    }
    Box box{0, 0, 0, 0};
    if (!anchors.empty()) {
        box = {anchors[0][0], anchors[0][0], anchors[0][1], anchors[0][1]};
        for (const auto& p : anchors) {
            box.x0 = std::min(box.x0, p[0]);
            box.x1 = std::max(box.x1, p[0]);
            box.y0 = std::min(box.y0, p[1]);
            box.y1 = std::max(box.y1, p[1]);
        }
    }
    const double extent = std::max({box.x1 - box.x0, box.y1 - box.y0, 1.0});
    for (auto [lo, hi] : {std::pair{&box.x0, &box.x1}, std::pair{&box.y0, &box.y1}}) {
        const double grow = std::max(0.0, 0.6 * extent - (*hi - *lo)) / 2 + 0.05 * extent;
        *lo -= grow;
        *hi += grow;
    }
    const double w = box.x1 - box.x0;
    const double h = box.y1 - box.y0;
    const double stroke = std::max(w, h) / 400;

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"" + svg_num(std::round(800 * h / w)) +
         "\" viewBox=\"" + svg_num(box.x0) + ' ' + svg_num(-box.y1) + ' ' + svg_num(w) + ' ' + svg_num(h) + "\">\n";
    s += "<defs>\n<clipPath id=\"view\"><rect x=\"" + svg_num(box.x0) + "\" y=\"" + svg_num(-box.y1) +
         "\" width=\"" + svg_num(w) + "\" height=\"" + svg_num(h) + "\"/></clipPath>\n";
    s += "<marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" "
         "orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker>\n</defs>\n";
    s += "<style>polyline,line{fill:none;stroke-width:" + svg_num(stroke) +
         "}.boundary{stroke:#000}.caustic{stroke:#2e86c1;stroke-dasharray:" + svg_num(4 * stroke) +
         "}.chord,.tail{stroke:#c0392b}</style>\n";
    s += "<g clip-path=\"url(#view)\">\n";

    for (const Polyline& p : conic_polylines(bc[0], bc[1], box))
        s += polyline_svg(p, "boundary");
    if (!std::isnan(traj.nu)) {
        try {
            const auto cc = projected_caustic_coeffs(t, traj.nu);
            for (const Polyline& p : conic_polylines(cc[0], cc[1], box))
                s += polyline_svg(p, "caustic");
        }
        catch (const Error&) {
        }
    }

    auto tail = [&](const std::array<double, 2>& from, double dx, double dy) {
        const auto end = ray_exit(box, from[0], from[1], dx, dy);
        s += "<line class=\"tail\" x1=\"" + svg_num(from[0]) + "\" y1=\"" + svg_num(-from[1]) + "\" x2=\"" +
             svg_num(end[0]) + "\" y2=\"" + svg_num(-end[1]) + "\" marker-end=\"url(#arrow)\"/>\n";
    };

    constexpr int kChordSamples = 64;
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
        const MVec& x = traj.states[k].point;
        const MVec& v = traj.states[k].dir;
        double t_end = 0.0;
        try {
            const auto hit = next_boundary_hit(t, x, v, traj.side);
            if (hit)
                t_end = hit->t_hit;
        }
        catch (const Error&) {
        }
        if (t_end <= 0.0)
            continue;

        std::vector<MVec> pts;
        for (int i = 0; i <= kChordSamples; ++i)
            pts.push_back(flow(x, v, t_end * i / kChordSamples));
        pts.back() = traj.states[k + 1].point;

        auto side_of = [](const MVec& p) {
            return std::abs(p.x0) <= 1e-9 * euclid_norm(p) ? 0 : (p.x0 > 0 ? 1 : -1);
        };
        Polyline piece;
        int piece_sign = 0;
        auto flush = [&] {
            if (piece.size() >= 2)
                s += polyline_svg(piece, "chord");
            piece.clear();
        };
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const int sg = side_of(pts[i]);
            if (sg != 0 && sg == piece_sign) {
                piece.push_back({pts[i].x1 / pts[i].x0, pts[i].x2 / pts[i].x0});
                continue;
            }
            // Crossing x0 = 0: the chord passes through infinity of the Klein chart.
            if (piece_sign != 0 && !piece.empty()) {
                MVec at_inf = pts[i];
                if (sg != 0) {
                    const MVec& a = pts[i - 1];
                    const double f = a.x0 / (a.x0 - pts[i].x0);
                    at_inf = a + f * (pts[i] - a);
                }
                tail(piece.back(), piece_sign * at_inf.x1, piece_sign * at_inf.x2);
                flush();
            }
            piece_sign = sg;
            if (sg != 0) {
                const std::array<double, 2> xi{pts[i].x1 / pts[i].x0, pts[i].x2 / pts[i].x0};
                if (i > 0) {
                    MVec at_inf = pts[i - 1];
                    if (side_of(at_inf) != 0) {
                        const MVec& a = pts[i - 1];
                        const double f = a.x0 / (a.x0 - pts[i].x0);
                        at_inf = a + f * (pts[i] - a);
                    }
                    tail(xi, sg * at_inf.x1, sg * at_inf.x2);
                }
                piece.push_back(xi);
            }
        }
        flush();
    }

    for (const BilliardState& st : traj.states) {
        try {
            const KleinPoint kp = klein_project(st.point);
            s += "<circle cx=\"" + svg_num(kp.xi1) + "\" cy=\"" + svg_num(-kp.xi2) + "\" r=\"" + svg_num(3 * stroke) +
                 "\" fill=\"#c0392b\"/>\n";
        }
        catch (const Error&) {
        }
    }
    s += "</g>\n</svg>\n";
    return s;
}

RunConfig parse_config(std::string_view text)
{
    RunConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key=value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty key");
        if (key == "table") {
            std::array<double, 3> a{};
            std::string_view rest = value;
            for (int i = 0; i < 3; ++i) {
                const auto comma = rest.find(',');
                if ((i < 2) == (comma == std::string_view::npos))
                    throw Error(ErrorCode::ParseError, "table needs three comma-separated numbers");
                a[i] = parse_double(rest.substr(0, comma));
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            }
            cfg.table = a;
        }
        else if (key == "format") {
            cfg.format = value;
        }
        else if (key == "out") {
            cfg.out = value;
        }
        else if (key == "tol") {
            cfg.tol = parse_double(value);
        }
        else {
            cfg.options[key] = value;
        }
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg)
{
    std::string s;
    if (cfg.table)
        s += "table=" + format_double((*cfg.table)[0]) + ',' + format_double((*cfg.table)[1]) + ',' +
             format_double((*cfg.table)[2]) + '\n';
    if (!cfg.format.empty())
        s += "format=" + cfg.format + '\n';
    if (!cfg.out.empty())
        s += "out=" + cfg.out + '\n';
    s += "tol=" + format_double(cfg.tol) + '\n';
    for (const auto& [k, v] : cfg.options)
        s += k + '=' + v + '\n';
    return s;
}

} // namespace hbill

#include "nev/io.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace nev::io {

using nlohmann::json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    return j;
}

void save(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << j.dump(2) << "\n";
}

std::vector<Complex> complex_list(const json& j, const std::string& key) {
    std::vector<Complex> out;
    for (const auto& e : j.at(key)) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return out;
}

json complex_list_json(const std::vector<Complex>& v) {
    json out = json::array();
    for (const auto& c : v) out.push_back({c.real(), c.imag()});
    return out;
}

}  // namespace

geom::BoundaryCurve read_domain(const std::string& path) {
    const json j = load(path);
    try {
        auto cx = complex_list(j, "coeff_x");
        auto cy = complex_list(j, "coeff_y");
        const int K = j.at("K").get<int>();
        if (static_cast<int>(cx.size()) != 2 * K + 1)
            throw Error(ErrorCode::ParseError, path + ": coeff length != 2K+1");
        return geom::make_curve(cx, cy);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

void write_domain(const std::string& path, const geom::BoundaryCurve& curve) {
    json j;
    j["K"] = curve.order();
    j["coeff_x"] = complex_list_json(curve.coeff_x());
    j["coeff_y"] = complex_list_json(curve.coeff_y());
    save(path, j);
}

pot::PotentialGrid read_potential(const std::string& path) {
    const json j = load(path);
    try {
        pot::PotentialGrid g;
        g.origin = {j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>()};
        g.h = j.at("h").get<double>();
        g.nx = j.at("nx").get<int>();
        g.ny = j.at("ny").get<int>();
        g.values = j.at("values").get<std::vector<double>>();
        if (static_cast<int>(g.values.size()) != g.nx * g.ny)
            throw Error(ErrorCode::ParseError, path + ": values length != nx*ny");
        return g;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

void write_potential(const std::string& path, const pot::PotentialGrid& grid) {
    json j;
    j["origin"] = {grid.origin.x, grid.origin.y};
    j["h"] = grid.h;
    j["nx"] = grid.nx;
    j["ny"] = grid.ny;
    j["values"] = grid.values;
    save(path, j);
}

geom::DeformationField read_field(const std::string& path) {
    const json j = load(path);
    try {
        geom::DeformationField f;
        f.fx = complex_list(j, "field_x");
        f.fy = complex_list(j, "field_y");
        if (f.fx.size() != f.fy.size() || f.fx.size() % 2 == 0)
            throw Error(ErrorCode::ParseError, path + ": field coefficient lists invalid");
        if (j.contains("sigma_arc")) {
            f.sigma0 = j["sigma_arc"].at(0).get<double>();
            f.sigma1 = j["sigma_arc"].at(1).get<double>();
        }
        if (j.contains("v_margin")) f.r_margin = j["v_margin"].get<double>();
        if (j.contains("tau")) f.tau = j["tau"].get<double>();
        return f;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

void write_field(const std::string& path, const geom::DeformationField& field) {
    json j;
    j["field_x"] = complex_list_json(field.fx);
    j["field_y"] = complex_list_json(field.fy);
    j["sigma_arc"] = {field.sigma0, field.sigma1};
    j["v_margin"] = field.r_margin;
    j["tau"] = field.tau;
    save(path, j);
}

dodge::DodgePlan read_plan(const std::string& path) {
    const json j = load(path);
    try {
        dodge::DodgePlan p;
        p.target = j.at("target").get<double>();
        p.delta = j.at("delta").get<double>();
        p.sigma0 = j.at("sigma_arc").at(0).get<double>();
        p.sigma1 = j.at("sigma_arc").at(1).get<double>();
        p.v_margin = j.at("v_margin").get<double>();
        p.max_iter = j.at("max_iter").get<int>();
        p.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("N")) p.N = j["N"].get<int>();
        if (j.contains("t_schedule")) p.t_schedule = j["t_schedule"].get<std::vector<double>>();
        return p;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

layer::BoundaryDensity read_bc(const std::string& path) {
    const json j = load(path);
    try {
        const auto v = complex_list(j, "f2");
        layer::BoundaryDensity f(v.size());
        for (size_t i = 0; i < v.size(); ++i) f(static_cast<int>(i)) = v[i];
        return f;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

void write_scan_csv(const std::string& path, const scan::ScanReport& rep) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << "lambda,sigma_min\n";
    for (size_t i = 0; i < rep.lambdas.size(); ++i)
        out << fmt(rep.lambdas[i]) << "," << fmt(rep.sigmas[i]) << "\n";
}

void write_scan_json(const std::string& path, const scan::ScanReport& rep) {
    json j;
    j["median_sigma"] = rep.median_sigma;
    j["eps_eig"] = rep.eps_eig;
    json evs = json::array();
    for (const auto& e : rep.eigenvalues)
        evs.push_back({{"lambda", e.lambda}, {"multiplicity", e.multiplicity}});
    j["eigenvalues"] = evs;
    save(path, j);
}

namespace {

struct SvgCanvas {
    std::ostringstream body;
    double w = 720, hgt = 480;

    std::string finish() {
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
            << hgt << "\" viewBox=\"0 0 " << w << " " << hgt << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << body.str() << "</svg>\n";
        return out.str();
    }
};

void polyline(SvgCanvas& c, const std::vector<std::pair<double, double>>& pts,
              const std::string& stroke, double width, bool closed = false) {
    c.body << (closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << stroke
           << "\" stroke-width=\"" << width << "\" points=\"";
    for (const auto& [x, y] : pts) c.body << x << "," << y << " ";
    c.body << "\"/>\n";
}

}  // namespace

void write_scan_svg(const std::string& path, const scan::ScanReport& rep) {
    SvgCanvas c;
    if (rep.lambdas.size() < 2) throw Error(ErrorCode::DomainError, "scan too short to plot");
    double smin = 1e300, smax = 0.0;
    for (double s : rep.sigmas) {
        smin = std::min(smin, std::max(s, 1e-16));
        smax = std::max(smax, s);
    }
    const double l0 = rep.lambdas.front(), l1 = rep.lambdas.back();
    auto X = [&](double lam) { return 60.0 + (lam - l0) / (l1 - l0) * (c.w - 80.0); };
    auto Y = [&](double s) {
        const double t = (std::log10(std::max(s, 1e-16)) - std::log10(smin)) /
                         (std::log10(smax) - std::log10(smin) + 1e-30);
        return (c.hgt - 40.0) - t * (c.hgt - 80.0);
    };
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < rep.lambdas.size(); ++i)
        pts.emplace_back(X(rep.lambdas[i]), Y(rep.sigmas[i]));
    polyline(c, pts, "#1f77b4", 1.5);
    for (const auto& e : rep.eigenvalues) {
        const double x = X(e.lambda);
        c.body << "<line x1=\"" << x << "\" y1=\"40\" x2=\"" << x << "\" y2=\"" << c.hgt - 40
               << "\" stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
        c.body << "<text x=\"" << x + 3 << "\" y=\"52\" font-size=\"11\">" << e.lambda << " (m="
               << e.multiplicity << ")</text>\n";
    }
    c.body << "<text x=\"20\" y=\"20\" font-size=\"12\">sigma_min vs lambda (log scale)</text>\n";
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << c.finish();
}

void write_overlay_svg(const std::string& path, const geom::BoundaryCurve& before,
                       const geom::BoundaryCurve& after, double sigma0, double sigma1) {
    SvgCanvas c;
    c.w = 560;
    c.hgt = 560;
    const int M = 512;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto bound = [&](const geom::BoundaryCurve& cv) {
        for (int i = 0; i < M; ++i) {
            const Vec2 p = cv.point(2.0 * pi * i / M);
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    };
    bound(before);
    bound(after);
    const double pad = 0.08 * std::max(xmax - xmin, ymax - ymin);
    xmin -= pad; xmax += pad; ymin -= pad; ymax += pad;
    const double sc = std::min((c.w - 20) / (xmax - xmin), (c.hgt - 20) / (ymax - ymin));
    auto XY = [&](Vec2 p) {
        return std::make_pair(10 + (p.x - xmin) * sc, c.hgt - 10 - (p.y - ymin) * sc);
    };
    auto draw = [&](const geom::BoundaryCurve& cv, const std::string& col, double wdt) {
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < M; ++i) pts.push_back(XY(cv.point(2.0 * pi * i / M)));
        polyline(c, pts, col, wdt, true);
    };
    draw(before, "#888888", 1.0);
    draw(after, "#1f77b4", 1.6);
    if (sigma1 > sigma0) {
        std::vector<std::pair<double, double>> arc;
        for (int i = 0; i <= 64; ++i)
            arc.push_back(XY(after.point(sigma0 + (sigma1 - sigma0) * i / 64.0)));
        polyline(c, arc, "#d62728", 3.0);
    }
    c.body << "<text x=\"14\" y=\"20\" font-size=\"12\">before (grey), after (blue), frozen arc"
              " (red)</text>\n";
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << c.finish();
}

}  // namespace nev::io

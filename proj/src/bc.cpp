#include "dcm/bc.hpp"

#include <cmath>
#include <sstream>

namespace dcm {

double LoadProgram::value(double t) const {
    switch (shape) {
        case Shape::Ramp:
            return a * t;
        case Shape::Step:
            return a;
        case Shape::SinePulse:
            return (t >= 0.0 && t <= b) ? a * std::sin(M_PI * t / b) : 0.0;
        case Shape::Table: {
            if (table_t.empty()) return 0.0;
            if (t <= table_t.front()) return table_v.front();
            if (t >= table_t.back()) return table_v.back();
            for (std::size_t i = 1; i < table_t.size(); ++i) {
                if (t <= table_t[i]) {
                    const double w = (t - table_t[i - 1]) / (table_t[i] - table_t[i - 1]);
                    return table_v[i - 1] + w * (table_v[i] - table_v[i - 1]);
                }
            }
            return table_v.back();
        }
    }
    return 0.0;
}

bool LoadProgram::active(double t) const {
    return shape != Shape::SinePulse || t <= b;
}

std::vector<int> select_nodes(const DualComplex& dc, const NodeSelector& sel) {
    std::vector<int> out;
    for (std::size_t i = 0; i < dc.nodes.size(); ++i)
        if (!dc.nodes[i].orphan && sel(dc.nodes[i].pos)) out.push_back(static_cast<int>(i));
    return out;
}

Eigen::VectorXd edge_traction_forces(const DualComplex& dc, const NodeSelector& where,
                                     const std::function<Vec2(const Vec2&)>& traction) {
    // 5-point Gauss-Legendre on [0, 1].
    static const double gp[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                                 0.76923465505284155, 0.95308992296933200};
    static const double gw[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                 0.23931433524968324, 0.11846344252809454};
    Eigen::VectorXd F = Eigen::VectorXd::Zero(dc.dof_count());
    int matched = 0;
    for (const VoronoiCell& cell : dc.cells) {
        const Vec2 xn = dc.nodes[cell.node].pos;
        const auto& dof = dc.nodes[cell.node].dof;
        for (const CellBoundarySegment& seg : cell.boundary) {
            if (!(where(seg.a) && where(seg.b))) continue;
            ++matched;
            const double len = (seg.b - seg.a).norm();
            for (int g = 0; g < 5; ++g) {
                const Vec2 x = seg.a + gp[g] * (seg.b - seg.a);
                const Vec2 t = traction(x) * (gw[g] * len * dc.thickness);
                F(dof[0]) += t.x();
                F(dof[1]) += t.y();
                F(dof[2]) += cross2(x - xn, t);
            }
        }
    }
    if (matched == 0)
        throw Error("edge traction selector '" + where.spec + "' matches no boundary segment");
    return F;
}

namespace {

NodeSelector parse_one(const std::string& token) {
    std::istringstream ss(token);
    std::string kind;
    ss >> kind;
    auto need = [&](int n) {
        std::vector<double> v(n);
        for (double& x : v)
            if (!(ss >> x)) throw Error("selector '" + token + "': expected numeric argument");
        return v;
    };
    NodeSelector sel;
    sel.spec = token;
    if (kind == "all") {
        sel.pred = [](const Vec2&) { return true; };
    } else if (kind == "x" || kind == "y") {
        std::string op;
        ss >> op;
        double v;
        if (!(ss >> v)) throw Error("selector '" + token + "': expected numeric bound");
        const bool on_x = (kind == "x");
        if (op == "<")
            sel.pred = [on_x, v](const Vec2& p) { return (on_x ? p.x() : p.y()) < v; };
        else if (op == ">")
            sel.pred = [on_x, v](const Vec2& p) { return (on_x ? p.x() : p.y()) > v; };
        else
            throw Error("selector '" + token + "': operator must be < or >");
    } else if (kind == "box") {
        const auto v = need(4);
        sel.pred = [v](const Vec2& p) {
            return p.x() >= v[0] && p.y() >= v[1] && p.x() <= v[2] && p.y() <= v[3];
        };
    } else if (kind == "circle") {
        const auto v = need(3);
        sel.pred = [v](const Vec2& p) { return (p - Vec2(v[0], v[1])).norm() <= v[2]; };
    } else if (kind == "near") {
        const auto v = need(3);
        sel.pred = [v](const Vec2& p) { return (p - Vec2(v[0], v[1])).norm() <= v[2]; };
    } else {
        throw Error("unknown selector kind '" + kind + "'");
    }
    return sel;
}

}  // namespace

NodeSelector parse_selector(const std::string& spec) {
    std::vector<NodeSelector> parts;
    std::string token;
    std::istringstream ss(spec);
    std::string piece;
    while (std::getline(ss, piece, '&')) {
        // trim
        const auto b = piece.find_first_not_of(" \t");
        const auto e = piece.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        parts.push_back(parse_one(piece.substr(b, e - b + 1)));
    }
    if (parts.empty()) throw Error("empty selector");
    NodeSelector sel;
    sel.spec = spec;
    sel.pred = [parts](const Vec2& p) {
        for (const auto& s : parts)
            if (!s.pred(p)) return false;
        return true;
    };
    return sel;
}

}  // namespace dcm

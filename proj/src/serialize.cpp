#include "ccm/serialize.hpp"

#include <sstream>

namespace ccm {

json to_json(const cplx& z) {
    return json::array({z.real(), z.imag()});
}

cplx cplx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

namespace {

json complex_list(const std::vector<cplx>& v) {
    json out = json::array();
    for (const cplx& z : v) out.push_back(to_json(z));
    return out;
}

std::vector<cplx> complex_list_from_json(const json& j) {
    std::vector<cplx> out;
    for (const json& e : j) out.push_back(cplx_from_json(e));
    return out;
}

} // namespace

json to_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

CMatrix cmatrix_from_json(const json& j) {
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    CMatrix m(rows, cols);
    const json& data = j.at("data");
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) m.at(i, c) = cplx_from_json(data[i][c]);
    return m;
}

json to_json(const Coupling& c) {
    return json{{"m", c.m}, {"g", complex_list(c.g)}, {"c", complex_list(c.c)},
                {"abs_g", to_json(c.abs_g)}};
}

Coupling coupling_from_json(const json& j) {
    return derived_constants(j.at("m").get<int>(), complex_list_from_json(j.at("g")));
}

json to_json(const SpectralPoint& p) {
    return json{{"m", p.m}, {"n", p.n}, {"lambda", complex_list(p.lambda)},
                {"phi", complex_list(p.phi)}};
}

SpectralPoint spectral_point_from_json(const json& j) {
    SpectralPoint p;
    p.m = j.at("m").get<int>();
    p.n = j.at("n").get<int>();
    p.lambda = complex_list_from_json(j.at("lambda"));
    p.phi = complex_list_from_json(j.at("phi"));
    return p;
}

json to_json(const SpinFraming& f) {
    json V = json::array(), W = json::array();
    for (const CMatrix& b : f.V) V.push_back(to_json(b));
    for (const CMatrix& b : f.W) W.push_back(to_json(b));
    return json{{"d", f.d}, {"V", std::move(V)}, {"W", std::move(W)}};
}

SpinFraming spin_framing_from_json(const json& j) {
    SpinFraming f;
    f.d = j.at("d").get<int>();
    for (const json& b : j.at("V")) f.V.push_back(cmatrix_from_json(b));
    for (const json& b : j.at("W")) f.W.push_back(cmatrix_from_json(b));
    return f;
}

json to_json(const QModelPoint& p) {
    return json{{"m", p.m}, {"n", p.n}, {"p", complex_list(p.p)}, {"q", complex_list(p.q)}};
}

QModelPoint qmodel_point_from_json(const json& j) {
    QModelPoint p;
    p.m = j.at("m").get<int>();
    p.n = j.at("n").get<int>();
    p.p = complex_list_from_json(j.at("p"));
    p.q = complex_list_from_json(j.at("q"));
    return p;
}

json to_json(const Quadruple& q) {
    return json{{"m", q.m},
                {"n", q.n},
                {"f", q.f},
                {"model", q.model == QuadrupleModel::dual ? "dual" : "qmodel"},
                {"coupling_sign", q.coupling_sign},
                {"blocks_intact", q.blocks_intact},
                {"X", to_json(q.X)},
                {"P", to_json(q.P)},
                {"v", to_json(q.v)},
                {"w", to_json(q.w)}};
}

Quadruple quadruple_from_json(const json& j) {
    Quadruple q;
    q.m = j.at("m").get<int>();
    q.n = j.at("n").get<int>();
    q.f = j.at("f").get<int>();
    q.model = j.at("model").get<std::string>() == "dual" ? QuadrupleModel::dual
                                                         : QuadrupleModel::qmodel;
    q.coupling_sign = j.at("coupling_sign").get<int>();
    q.blocks_intact = j.at("blocks_intact").get<bool>();
    q.X = cmatrix_from_json(j.at("X"));
    q.P = cmatrix_from_json(j.at("P"));
    q.v = cmatrix_from_json(j.at("v"));
    q.w = cmatrix_from_json(j.at("w"));
    return q;
}

json to_json(const CurvePolys& c) {
    return json{{"delta", c.delta}, {"m", c.m},          {"n", c.n},
                {"p", complex_list(c.p.coeffs())},        {"q", complex_list(c.q.coeffs())},
                {"nodes", complex_list(c.nodes)},         {"gamma", complex_list(c.gamma)}};
}

CurvePolys curve_polys_from_json(const json& j) {
    CurvePolys c;
    c.delta = j.at("delta").get<int>();
    c.m = j.at("m").get<int>();
    c.n = j.at("n").get<int>();
    c.p = DensePoly{complex_list_from_json(j.at("p")), 0.0};
    c.q = DensePoly{complex_list_from_json(j.at("q")), 0.0};
    c.nodes = complex_list_from_json(j.at("nodes"));
    c.gamma = complex_list_from_json(j.at("gamma"));
    return c;
}

std::string dump(const json& j) {
    return j.dump(2);
}

} // namespace ccm

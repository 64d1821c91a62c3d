#include "rifscope/fixtures.hpp"

#include <json.hpp>

#include "rifscope/errors.hpp"

namespace rifscope {

namespace {

BiPoly real_poly(std::vector<std::vector<double>> rows) {
    std::vector<std::vector<Complex>> c(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (double v : rows[i]) c[i].push_back(Complex{v, 0.0});
    return BiPoly(c);
}

Rif build(const std::string& name, const BiPoly& p, double eta) {
    Rif f = make_rif(p, Complex{eta, 0.0});
    f.name = name;
    return f;
}

std::vector<Rif> build_catalog() {
    std::vector<Rif> out;

    // phi = -(2 z1 z2 - z1 - z2) / (2 - z1 - z2); one singularity at (1,1)
    out.push_back(build("faveform",
                        real_poly({{2, -1},
                                   {-1, 0}}),
                        -1.0));

    // phi = -(3 z1 z2 - z1 - z2) / (3 - z1 - z2); strictly stable, smooth
    out.push_back(build("smooth3",
                        real_poly({{3, -1},
                                   {-1, 0}}),
                        -1.0));

    // bidegree (2,1), singularity (1,1) with fourth-order tangency
    out.push_back(build("amy",
                        real_poly({{4, -1},
                                   {-3, -1},
                                   {1, 0}}),
                        -1.0));

    // bidegree (4,2), singularities (1,1) and (-1,1) with branch orders
    // {4, 8} and {2}
    out.push_back(build("mbm",
                        real_poly({{-32, 38, -10},
                                   {34, -32, 2},
                                   {-30, 36, -2},
                                   {10, -8, -6},
                                   {-6, 14, -8}}),
                        1.0));

    // embedded from r = (1-z1)(1-z2)(1-z1 z2); intersection multiplicity 6
    // exceeds contact order 2 at (1,1)
    out.push_back(build("minimal-co",
                        real_poly({{4, -3, 0},
                                   {-3, 0, 1},
                                   {0, 1, 0}}),
                        -1.0));

    // glued from r = p^2 + ptilde^2 over the faveform denominator; value
    // curve has two tangent components at (1,1)
    out.push_back(build("glued-fave",
                        real_poly({{4, -3, 1},
                                   {-3, 2, -1},
                                   {1, -1, 0}}),
                        -1.0));

    // product of glued-fave and faveform; exceptional curve differs from
    // the value curve
    out.push_back(build("exceptional",
                        real_poly({{8, -10, 5, -1},
                                   {-10, 10, -5, 1},
                                   {5, -5, 2, 0},
                                   {-1, 1, 0, 0}}),
                        1.0));

    // bidegree (3,1) transfer-function realization with singularities
    // (1,-1) and (-1,-1) of different contact orders
    out.push_back(build("bickel-pascoe",
                        real_poly({{4, 1},
                                   {0, -1},
                                   {0, 3},
                                   {0, 1}}),
                        -1.0));

    return out;
}

} // namespace

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names{
        "faveform", "smooth3", "amy", "mbm", "minimal-co", "glued-fave", "exceptional",
        "bickel-pascoe"};
    return names;
}

const std::vector<Rif>& catalog() {
    static const std::vector<Rif> all = build_catalog();
    return all;
}

Rif get_fixture(const std::string& name) {
    for (const auto& f : catalog())
        if (f.name == name) return f;
    throw UnknownFixture("unknown fixture: " + name);
}

std::string fixture_to_json(const Rif& f) {
    nlohmann::json j;
    j["name"] = f.name;
    j["eta"] = {f.eta.real(), f.eta.imag()};
    j["M"] = f.M;
    j["N"] = f.N;
    j["p"] = nlohmann::json::parse(f.p.to_json());
    return j.dump(2) + "\n";
}

Rif fixture_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("fixture json: ") + e.what());
    }
    try {
        BiPoly p = BiPoly::from_json(j.at("p").dump());
        Complex eta{j.at("eta").at(0).get<double>(), j.at("eta").at(1).get<double>()};
        Rif f = make_rif(p, eta, j.value("M", 0), j.value("N", 0));
        f.name = j.value("name", "");
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("fixture json: ") + e.what());
    }
}

} // namespace rifscope

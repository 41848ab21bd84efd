#include "vortex/systems.hpp"

#include <stdexcept>

namespace vortex {

namespace {

std::vector<std::string> default_names(const std::vector<std::string>& given, int count,
                                       const std::string& stem) {
    if (!given.empty()) {
        if (static_cast<int>(given.size()) != count)
            throw std::invalid_argument("coordinate name list has wrong length");
        return given;
    }
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) names.push_back(stem + std::to_string(i));
    return names;
}

}  // namespace

SpaceSpec HamiltonianSpec::space() const {
    if (m < 1) throw std::invalid_argument("HamiltonianSpec: m must be >= 1");
    std::vector<std::string> names = default_names(q_names, m, "q");
    std::vector<std::string> ps = default_names(p_names, m, "p");
    names.insert(names.end(), ps.begin(), ps.end());
    return SpaceSpec(names);  // validates distinctness
}

Form hamiltonian_sigma(const HamiltonianSpec& spec) {
    const SpaceSpec space = spec.space();
    const Expression H = parse_expression(spec.hamiltonian, space);
    Form sigma(space, 1);
    for (int a = 1; a <= spec.m; ++a) {
        // p_a dq^a: q^a has index a, p_a has index m+a.
        sigma = sigma + Form::term(space, Expression::variable(space, spec.m + a), {a});
    }
    return sigma + Form::term(space, -H, {0});
}

SpaceSpec NambuSpec::space() const {
    if (n < 2) throw std::invalid_argument("NambuSpec: n must be >= 2");
    return SpaceSpec(default_names(coordinates, n, "x"));
}

Form nambu_sigma(const NambuSpec& spec) {
    const SpaceSpec space = spec.space();
    if (static_cast<int>(spec.hamiltonians.size()) != spec.n - 1)
        throw std::invalid_argument("NambuSpec: need exactly n-1 Hamiltonians");

    std::vector<Expression> hs;
    hs.reserve(spec.hamiltonians.size());
    for (const std::string& text : spec.hamiltonians)
        hs.push_back(parse_expression(text, space));

    // x^1 dx^2 ∧ … ∧ dx^n
    IndexTuple rest;
    for (int i = 2; i <= spec.n; ++i) rest.push_back(i);
    Form r_term = Form::term(space, Expression::variable(space, 1), std::move(rest));

    // H_1 d̂H_2 ∧ … ∧ d̂H_{n−1} ∧ dt (spatial derivative suffices: the ∂_t
    // parts of dH_i die against the trailing dt).
    Form product = Form::scalar(space, hs[0]);
    for (std::size_t i = 1; i < hs.size(); ++i)
        product = wedge(product,
                        exterior_derivative(Form::scalar(space, hs[i]), DerivativeMode::Spatial));
    Form dt_term = wedge(product, Form::differential(space, 0));

    return r_term - dt_term;
}

Form example4_sigma(const std::string& hamiltonian) {
    const SpaceSpec space(std::vector<std::string>{"q", "p", "z"});
    const Expression H = parse_expression(hamiltonian, space);
    // p dq − H dt: indices q=1, p=2 (z never appears in σ).
    return Form::term(space, Expression::variable(space, 2), {1}) +
           Form::term(space, -H, {0});
}

}  // namespace vortex

#pragma once

#include <string>
#include <vector>

#include "vortex/form.hpp"

namespace vortex {

// Canonical Hamiltonian data: σ = Σ_a p_a dq^a − H dt on the (2m+1)-dim
// extended space (t, q^1..q^m, p_1..p_m).
struct HamiltonianSpec {
    int m = 1;
    std::vector<std::string> q_names;  // empty → q1..qm
    std::vector<std::string> p_names;  // empty → p1..pm
    std::string hamiltonian = "0";     // expression over t and the coordinates

    // Coordinate order: q^1..q^m then p_1..p_m (so index of q^a is a and of
    // p_a is m+a, with t at 0).
    SpaceSpec space() const;
};

Form hamiltonian_sigma(const HamiltonianSpec& spec);

// Nambu-type data: σ = x^1 dx^2 ∧…∧ dx^n − H_1 dH_2 ∧…∧ dH_{n−1} ∧ dt on
// the (n+1)-dim extended space.  Exactly n−1 Hamiltonians.
struct NambuSpec {
    int n = 3;
    std::vector<std::string> coordinates;   // empty → x1..xn
    std::vector<std::string> hamiltonians;  // expression texts, size n−1

    SpaceSpec space() const;
};

Form nambu_sigma(const NambuSpec& spec);

// Ill-posed fixture: σ = p dq − H dt on the 4-dim extended space (t,q,p,z).
// The z direction never enters dσ, so the rank of R̂ is stuck at 2 < 3.
Form example4_sigma(const std::string& hamiltonian = "q^2 + p^2 + z");

}  // namespace vortex

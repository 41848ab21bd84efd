#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "vortex/expr.hpp"
#include "vortex/space.hpp"

namespace vortex {

// Strictly increasing list of coordinate indices (0 = t, 1..n spatial).
using IndexTuple = std::vector<int>;

// Sparse differential form of fixed degree on extended phase space.
// Terms map strictly increasing index tuples of length `degree` to
// Expression coefficients; an absent tuple means a zero coefficient.
// Immutable after construction; all operations below are pure.
class Form {
public:
    // The zero form of the given degree.
    Form(SpaceSpec space, int degree);

    // A single term coeff * dx_{indices}.  Indices may come in any order;
    // the permutation sign is folded into the stored coefficient, and a
    // repeated index yields the zero form.
    static Form term(const SpaceSpec& space, Expression coeff, std::vector<int> indices);

    // Degree-0 form (a scalar field).
    static Form scalar(const SpaceSpec& space, Expression value);

    // Coordinate differential dx^index (index 0 gives dt).
    static Form differential(const SpaceSpec& space, int index);

    const SpaceSpec& space() const { return space_; }
    int degree() const { return degree_; }
    const std::map<IndexTuple, Expression>& terms() const { return terms_; }

    // True when no term is stored (identically-zero coefficients are pruned
    // on insertion, so structurally zero forms report true; forms that merely
    // vanish at every point of some region may not).
    bool is_zero() const { return terms_.empty(); }

    // A form is spatial when no stored tuple contains the time index 0.
    bool is_spatial() const;

    // Coefficient of a given increasing tuple (zero Expression if absent).
    Expression coefficient(const IndexTuple& key) const;

    // All coefficients evaluated at a point (coordinates ordered t, x1..xn).
    std::map<IndexTuple, double> evaluate(std::span<const double> point) const;

    // Human-readable rendering like "p*dq^(1) - H*dt"; for diagnostics.
    std::string print() const;

    Form operator-() const;
    friend Form operator+(const Form& a, const Form& b);
    friend Form operator-(const Form& a, const Form& b);
    friend Form operator*(const Expression& c, const Form& a);
    friend Form operator*(double c, const Form& a);

    friend Form wedge(const Form& a, const Form& b);

private:
    // Accumulate coeff into the (already strictly increasing) key, pruning
    // terms whose coefficient folds to the constant zero.
    void accumulate(IndexTuple key, const Expression& coeff);

    SpaceSpec space_;
    int degree_;
    std::map<IndexTuple, Expression> terms_;

    friend class FormBuilder;
};

// Spatial vector field v = v^1 ∂_1 + ... + v^n ∂_n (no time component).
// Pairs with the normalized tangent γ̇ = ∂_t + v of solution curves.
struct SpatialVector {
    SpatialVector(SpaceSpec space, std::vector<Expression> components);
    static SpatialVector constant(const SpaceSpec& space, std::span<const double> values);

    std::vector<double> evaluate(std::span<const double> point) const;

    SpaceSpec space;
    std::vector<Expression> components;  // size n, index a-1 holds v^a
};

// Wedge product; graded-commutative, associative.  When the degrees sum past
// n+1 every candidate index tuple repeats an index, so the result is the
// zero form (stored with degree capped at n+1).
Form wedge(const Form& a, const Form& b);

enum class DerivativeMode {
    Full,     // d on extended space (t and x)
    Spatial,  // d̂: differentiate w.r.t. x1..xn only; argument must be spatial
    Time,     // ∂_t: same degree, coefficients differentiated by t; spatial only
};

Form exterior_derivative(const Form& a, DerivativeMode mode = DerivativeMode::Full);

// Interior product i_v a with contraction on the first index slot.
Form interior_product(const SpatialVector& v, const Form& a);

// σ = dt ∧ s_hat + r_hat with both parts spatial; unique.
struct FormSplit {
    Form s_hat;  // degree p-1
    Form r_hat;  // degree p
};

FormSplit decompose(const Form& sigma);

// Inverse of decompose: dt ∧ s_hat + r_hat.
Form compose(const Form& s_hat, const Form& r_hat);

// Rank of the linear map v ↦ i_v a at a point: the C(n, p-1) × n matrix of
// the contraction in the increasing-index basis, rank decided by LU with
// relative pivot tolerance 1e-9.  `a` must be spatial of degree ≥ 1; the
// point supplies all coordinates (t first).
int form_rank_at(const Form& a, std::span<const double> point);

namespace detail {
// All strictly increasing k-tuples drawn from [first, last].
std::vector<IndexTuple> increasing_tuples(int first, int last, int k);
// Sign of sorting `indices` into increasing order; 0 if any index repeats.
int sort_sign(std::vector<int>& indices);
}  // namespace detail

}  // namespace vortex

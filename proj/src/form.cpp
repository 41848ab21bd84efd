#include "vortex/form.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <utility>

namespace vortex {

namespace detail {

int sort_sign(std::vector<int>& indices) {
    int sign = 1;
    // Bubble sort so the swap count is exact; tuples are tiny.
    for (std::size_t i = 0; i + 1 < indices.size(); ++i) {
        for (std::size_t j = 0; j + 1 < indices.size() - i; ++j) {
            if (indices[j] > indices[j + 1]) {
                std::swap(indices[j], indices[j + 1]);
                sign = -sign;
            }
        }
    }
    for (std::size_t i = 0; i + 1 < indices.size(); ++i)
        if (indices[i] == indices[i + 1]) return 0;
    return sign;
}

std::vector<IndexTuple> increasing_tuples(int first, int last, int k) {
    std::vector<IndexTuple> out;
    if (k < 0 || first + k - 1 > last) return out;
    IndexTuple current;
    current.reserve(static_cast<std::size_t>(k));
    // Depth-first enumeration in lexicographic order.
    struct Rec {
        int last, k;
        std::vector<IndexTuple>& out;
        IndexTuple& current;
        void run(int next) {
            if (static_cast<int>(current.size()) == k) {
                out.push_back(current);
                return;
            }
            const int remaining = k - static_cast<int>(current.size());
            for (int i = next; i <= last - remaining + 1; ++i) {
                current.push_back(i);
                run(i + 1);
                current.pop_back();
            }
        }
    };
    Rec rec{last, k, out, current};
    rec.run(first);
    return out;
}

}  // namespace detail

// Internal mutable access used by the pure free operations below.
class FormBuilder {
public:
    FormBuilder(SpaceSpec space, int degree) : form_(std::move(space), degree) {}
    void add(IndexTuple key, const Expression& coeff) {
        form_.accumulate(std::move(key), coeff);
    }
    Form take() { return std::move(form_); }

private:
    Form form_;
};

Form::Form(SpaceSpec space, int degree) : space_(std::move(space)), degree_(degree) {
    if (degree < 0 || degree > space_.extended_dim())
        throw std::invalid_argument("Form: degree must lie in 0..n+1");
}

void Form::accumulate(IndexTuple key, const Expression& coeff) {
    if (static_cast<int>(key.size()) != degree_)
        throw std::invalid_argument("Form: key length does not match degree");
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        if (!coeff.is_zero()) terms_.emplace(std::move(key), coeff);
        return;
    }
    Expression sum = it->second + coeff;
    if (sum.is_zero())
        terms_.erase(it);
    else
        it->second = std::move(sum);
}

Form Form::term(const SpaceSpec& space, Expression coeff, std::vector<int> indices) {
    Form f(space, static_cast<int>(indices.size()));
    for (int i : indices)
        if (i < 0 || i > space.dim())
            throw std::invalid_argument("Form::term: index out of range");
    const int sign = detail::sort_sign(indices);
    if (sign == 0) return f;  // repeated index: the zero form
    Expression c = sign == 1 ? std::move(coeff) : -coeff;
    f.accumulate(std::move(indices), c);
    return f;
}

Form Form::scalar(const SpaceSpec& space, Expression value) {
    Form f(space, 0);
    f.accumulate(IndexTuple{}, value);
    return f;
}

Form Form::differential(const SpaceSpec& space, int index) {
    return term(space, Expression::constant(1.0), {index});
}

bool Form::is_spatial() const {
    for (const auto& [key, coeff] : terms_)
        if (!key.empty() && key.front() == 0) return false;
    return true;
}

Expression Form::coefficient(const IndexTuple& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Expression() : it->second;
}

std::map<IndexTuple, double> Form::evaluate(std::span<const double> point) const {
    std::map<IndexTuple, double> out;
    for (const auto& [key, coeff] : terms_) out.emplace(key, coeff.evaluate(point));
    return out;
}

std::string Form::print() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [key, coeff] : terms_) {
        if (!out.empty()) out += " + ";
        out += "(" + coeff.print() + ")";
        for (int i : key) {
            out += " d";
            out += space_.name(i);
        }
    }
    return out;
}

Form Form::operator-() const {
    Form out(space_, degree_);
    for (const auto& [key, coeff] : terms_) out.terms_.emplace(key, -coeff);
    return out;
}

Form operator+(const Form& a, const Form& b) {
    if (a.space() != b.space()) throw std::invalid_argument("Form +: space mismatch");
    if (a.degree() != b.degree()) throw std::invalid_argument("Form +: degree mismatch");
    Form out = a;
    for (const auto& [key, coeff] : b.terms_) out.accumulate(key, coeff);
    return out;
}

Form operator-(const Form& a, const Form& b) { return a + (-b); }

Form operator*(const Expression& c, const Form& a) {
    Form out(a.space(), a.degree());
    for (const auto& [key, coeff] : a.terms_) out.accumulate(key, c * coeff);
    return out;
}

Form operator*(double c, const Form& a) { return Expression::constant(c) * a; }

Form wedge(const Form& a, const Form& b) {
    if (a.space() != b.space()) throw std::invalid_argument("wedge: space mismatch");
    const int max_degree = a.space().extended_dim();
    const int degree = a.degree() + b.degree();
    if (degree > max_degree) return Form(a.space(), max_degree);  // zero form
    Form out(a.space(), degree);
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            IndexTuple merged;
            merged.reserve(ka.size() + kb.size());
            merged.insert(merged.end(), ka.begin(), ka.end());
            merged.insert(merged.end(), kb.begin(), kb.end());
            const int sign = detail::sort_sign(merged);
            if (sign == 0) continue;
            Expression c = ca * cb;
            out.accumulate(std::move(merged), sign == 1 ? c : -c);
        }
    }
    return out;
}

Form exterior_derivative(const Form& a, DerivativeMode mode) {
    const int n = a.space().dim();
    if (mode == DerivativeMode::Time) {
        if (!a.is_spatial())
            throw std::invalid_argument("exterior_derivative: time mode requires a spatial form");
        FormBuilder out(a.space(), a.degree());
        for (const auto& [key, coeff] : a.terms()) out.add(key, coeff.differentiate(0));
        return out.take();
    }
    if (mode == DerivativeMode::Spatial && !a.is_spatial())
        throw std::invalid_argument("exterior_derivative: spatial mode requires a spatial form");
    if (a.degree() + 1 > a.space().extended_dim())
        return Form(a.space(), a.space().extended_dim());  // top degree: d a = 0
    const int lo = mode == DerivativeMode::Spatial ? 1 : 0;
    FormBuilder out(a.space(), a.degree() + 1);
    for (const auto& [key, coeff] : a.terms()) {
        for (int i = lo; i <= n; ++i) {
            if (std::binary_search(key.begin(), key.end(), i)) continue;
            Expression di = coeff.differentiate(i);
            if (di.is_zero()) continue;
            // dx_i ∧ dx_key: moving dx_i past the entries smaller than i.
            const auto pos = std::lower_bound(key.begin(), key.end(), i) - key.begin();
            IndexTuple merged = key;
            merged.insert(merged.begin() + pos, i);
            out.add(std::move(merged), pos % 2 == 0 ? di : -di);
        }
    }
    return out.take();
}

SpatialVector::SpatialVector(SpaceSpec space_in, std::vector<Expression> components_in)
    : space(std::move(space_in)), components(std::move(components_in)) {
    if (static_cast<int>(components.size()) != space.dim())
        throw std::invalid_argument("SpatialVector: need exactly n components");
}

SpatialVector SpatialVector::constant(const SpaceSpec& space, std::span<const double> values) {
    std::vector<Expression> comps;
    comps.reserve(values.size());
    for (double v : values) comps.push_back(Expression::constant(v));
    return SpatialVector(space, std::move(comps));
}

std::vector<double> SpatialVector::evaluate(std::span<const double> point) const {
    std::vector<double> out;
    out.reserve(components.size());
    for (const Expression& c : components) out.push_back(c.evaluate(point));
    return out;
}

Form interior_product(const SpatialVector& v, const Form& a) {
    if (v.space != a.space()) throw std::invalid_argument("interior_product: space mismatch");
    if (a.degree() < 1)
        throw std::invalid_argument("interior_product: form must have degree >= 1");
    FormBuilder out(a.space(), a.degree() - 1);
    for (const auto& [key, coeff] : a.terms()) {
        for (std::size_t r = 0; r < key.size(); ++r) {
            const int idx = key[r];
            if (idx == 0) continue;  // v has no time component
            IndexTuple rest;
            rest.reserve(key.size() - 1);
            rest.insert(rest.end(), key.begin(), key.begin() + static_cast<long>(r));
            rest.insert(rest.end(), key.begin() + static_cast<long>(r) + 1, key.end());
            Expression c = v.components[static_cast<std::size_t>(idx - 1)] * coeff;
            out.add(std::move(rest), r % 2 == 0 ? c : -c);
        }
    }
    return out.take();
}

FormSplit decompose(const Form& sigma) {
    FormBuilder s_hat(sigma.space(), sigma.degree() - 1 >= 0 ? sigma.degree() - 1 : 0);
    FormBuilder r_hat(sigma.space(), sigma.degree());
    for (const auto& [key, coeff] : sigma.terms()) {
        if (!key.empty() && key.front() == 0) {
            IndexTuple rest(key.begin() + 1, key.end());
            s_hat.add(std::move(rest), coeff);
        } else {
            r_hat.add(key, coeff);
        }
    }
    return FormSplit{s_hat.take(), r_hat.take()};
}

Form compose(const Form& s_hat, const Form& r_hat) {
    if (s_hat.space() != r_hat.space()) throw std::invalid_argument("compose: space mismatch");
    if (!s_hat.is_spatial() || !r_hat.is_spatial())
        throw std::invalid_argument("compose: both parts must be spatial");
    if (r_hat.degree() != s_hat.degree() + 1)
        throw std::invalid_argument("compose: need deg r_hat = deg s_hat + 1");
    return wedge(Form::differential(s_hat.space(), 0), s_hat) + r_hat;
}

int form_rank_at(const Form& a, std::span<const double> point) {
    if (!a.is_spatial()) throw std::invalid_argument("form_rank_at: form must be spatial");
    if (a.degree() < 1) throw std::invalid_argument("form_rank_at: form must have degree >= 1");
    const int n = a.space().dim();
    if (static_cast<int>(point.size()) != n + 1)
        throw std::invalid_argument("form_rank_at: point must supply t and all coordinates");

    const std::map<IndexTuple, double> values = a.evaluate(point);
    const std::vector<IndexTuple> rows = detail::increasing_tuples(1, n, a.degree() - 1);

    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), n);
    m.setZero();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const IndexTuple& row = rows[r];
        for (int j = 1; j <= n; ++j) {
            if (std::binary_search(row.begin(), row.end(), j)) continue;
            const auto pos = std::lower_bound(row.begin(), row.end(), j) - row.begin();
            IndexTuple key = row;
            key.insert(key.begin() + pos, j);
            auto it = values.find(key);
            if (it == values.end()) continue;
            m(static_cast<Eigen::Index>(r), j - 1) = (pos % 2 == 0) ? it->second : -it->second;
        }
    }
    if (m.size() == 0) return 0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-9);  // relative to the largest pivot
    return static_cast<int>(lu.rank());
}

}  // namespace vortex

#include "vortex/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace vortex {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path, message);
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "/" + key, "required field is missing");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) fail(path, "expected a boolean");
    return v.get<bool>();
}

std::vector<std::string> as_string_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_string(v[i], path + "/" + std::to_string(i)));
    return out;
}

std::vector<double> as_number_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_number(v[i], path + "/" + std::to_string(i)));
    return out;
}

Expression parse_checked(const std::string& text, const SpaceSpec& space,
                         const std::string& path) {
    try {
        return parse_expression(text, space);
    } catch (const ParseError& e) {
        fail(path, std::string("expression parse error at offset ") +
                       std::to_string(e.offset()) + ": " + e.what());
    }
}

// Builds (space, sigma, kind) from the exactly-one sigma source.
struct SigmaSource {
    SpaceSpec space;
    Form sigma;
    std::string kind;
};

SigmaSource load_sigma(const json& root) {
    const json& sigma = require(root, "", "sigma");
    if (!sigma.is_object()) fail("/sigma", "expected an object");

    std::vector<std::string> present;
    for (const char* key : {"hamiltonian", "nambu", "raw"})
        if (sigma.contains(key)) present.push_back(key);
    if (present.size() != 1)
        fail("/sigma", "exactly one sigma source (hamiltonian | nambu | raw) is required");

    if (present[0] == "hamiltonian") {
        const json& h = sigma["hamiltonian"];
        const std::string path = "/sigma/hamiltonian";
        HamiltonianSpec spec;
        spec.m = as_int(require(h, path, "m"), path + "/m");
        if (spec.m < 1) fail(path + "/m", "m must be >= 1");
        spec.hamiltonian = as_string(require(h, path, "hamiltonian"), path + "/hamiltonian");
        if (h.contains("q_names")) spec.q_names = as_string_list(h["q_names"], path + "/q_names");
        if (h.contains("p_names")) spec.p_names = as_string_list(h["p_names"], path + "/p_names");
        try {
            SpaceSpec space = spec.space();
            parse_checked(spec.hamiltonian, space, path + "/hamiltonian");
            return SigmaSource{space, hamiltonian_sigma(spec), "hamiltonian"};
        } catch (const std::invalid_argument& e) {
            fail(path, e.what());
        }
    }
    if (present[0] == "nambu") {
        const json& nj = sigma["nambu"];
        const std::string path = "/sigma/nambu";
        NambuSpec spec;
        spec.n = as_int(require(nj, path, "n"), path + "/n");
        if (spec.n < 2) fail(path + "/n", "n must be >= 2");
        spec.hamiltonians =
            as_string_list(require(nj, path, "hamiltonians"), path + "/hamiltonians");
        if (static_cast<int>(spec.hamiltonians.size()) != spec.n - 1)
            fail(path + "/hamiltonians", "need exactly n-1 Hamiltonians");
        if (nj.contains("coordinates"))
            spec.coordinates = as_string_list(nj["coordinates"], path + "/coordinates");
        try {
            SpaceSpec space = spec.space();
            for (std::size_t i = 0; i < spec.hamiltonians.size(); ++i)
                parse_checked(spec.hamiltonians[i], space,
                              path + "/hamiltonians/" + std::to_string(i));
            return SigmaSource{space, nambu_sigma(spec), "nambu"};
        } catch (const std::invalid_argument& e) {
            fail(path, e.what());
        }
    }

    // raw: explicit term list over declared coordinates.
    const json& raw = sigma["raw"];
    const std::string path = "/sigma/raw";
    const std::vector<std::string> coords =
        as_string_list(require(raw, path, "coordinates"), path + "/coordinates");
    SpaceSpec space = [&]() {
        try {
            return SpaceSpec(coords);
        } catch (const std::invalid_argument& e) {
            fail(path + "/coordinates", e.what());
        }
    }();

    const json& terms = require(raw, path, "terms");
    if (!terms.is_array() || terms.empty()) fail(path + "/terms", "expected a non-empty array");

    std::optional<Form> form;
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
        const std::string tpath = path + "/terms/" + std::to_string(ti);
        const json& term = terms[ti];
        if (!term.is_object()) fail(tpath, "expected an object {indices, coefficient}");
        const std::vector<std::string> names =
            as_string_list(require(term, tpath, "indices"), tpath + "/indices");
        std::vector<int> indices;
        std::set<int> seen;
        for (std::size_t i = 0; i < names.size(); ++i) {
            const std::string& name = names[i];
            int idx = 0;
            if (name == "t") {
                idx = 0;
            } else if (auto found = space.index_of(name)) {
                idx = *found;
            } else {
                fail(tpath + "/indices/" + std::to_string(i),
                     "undeclared coordinate \"" + name + "\"");
            }
            if (!seen.insert(idx).second)
                fail(tpath + "/indices/" + std::to_string(i),
                     "repeated coordinate \"" + name + "\" in one term");
            indices.push_back(idx);
        }
        const Expression coeff = parse_checked(
            as_string(require(term, tpath, "coefficient"), tpath + "/coefficient"), space,
            tpath + "/coefficient");
        Form t = Form::term(space, coeff, indices);
        if (!form) {
            form.emplace(std::move(t));
        } else {
            if (t.degree() != form->degree())
                fail(tpath + "/indices", "all terms must share one degree (found " +
                                             std::to_string(t.degree()) + ", expected " +
                                             std::to_string(form->degree()) + ")");
            form = *form + t;
        }
    }
    return SigmaSource{space, std::move(*form), "raw"};
}

}  // namespace

RunConfig load_config_text(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("", "top-level value must be an object");

    SigmaSource source = load_sigma(root);
    RunConfig config(std::move(source.space), std::move(source.sigma));
    config.sigma_kind = std::move(source.kind);
    const int n = config.space.dim();

    if (root.contains("initial")) {
        const json& init = root["initial"];
        std::vector<double> x0(static_cast<std::size_t>(n), 0.0);
        if (init.is_array()) {
            const std::vector<double> values = as_number_list(init, "/initial");
            if (static_cast<int>(values.size()) != n)
                fail("/initial", "expected " + std::to_string(n) + " values");
            x0 = values;
        } else if (init.is_object()) {
            std::set<std::string> assigned;
            for (auto it = init.begin(); it != init.end(); ++it) {
                const auto idx = config.space.index_of(it.key());
                if (!idx || *idx == 0)
                    fail("/initial/" + it.key(), "undeclared coordinate \"" + it.key() + "\"");
                x0[static_cast<std::size_t>(*idx - 1)] =
                    as_number(it.value(), "/initial/" + it.key());
                assigned.insert(it.key());
            }
            if (static_cast<int>(assigned.size()) != n)
                fail("/initial", "every spatial coordinate needs a value");
        } else {
            fail("/initial", "expected an array or a name map");
        }
        config.initial = std::move(x0);
    }

    if (root.contains("time")) {
        const json& time = root["time"];
        if (!time.is_object()) fail("/time", "expected an object");
        if (time.contains("t0")) config.t0 = as_number(time["t0"], "/time/t0");
        if (time.contains("t1")) config.t1 = as_number(time["t1"], "/time/t1");
    }

    if (root.contains("integrator")) {
        const json& integ = root["integrator"];
        if (!integ.is_object()) fail("/integrator", "expected an object");
        if (integ.contains("abs_tol"))
            config.integrator.abs_tol = as_number(integ["abs_tol"], "/integrator/abs_tol");
        if (integ.contains("rel_tol"))
            config.integrator.rel_tol = as_number(integ["rel_tol"], "/integrator/rel_tol");
        if (integ.contains("method")) {
            const std::string m = as_string(integ["method"], "/integrator/method");
            if (m == "rkf45")
                config.integrator.method = IntegrationMethod::RKF45;
            else if (m == "rk4")
                config.integrator.method = IntegrationMethod::RK4Fixed;
            else
                fail("/integrator/method", "expected \"rkf45\" or \"rk4\"");
        }
        if (integ.contains("fixed_step"))
            config.integrator.fixed_step = as_number(integ["fixed_step"], "/integrator/fixed_step");
        if (integ.contains("samples")) {
            config.integrator.sample_count = as_int(integ["samples"], "/integrator/samples");
            if (config.integrator.sample_count < 1)
                fail("/integrator/samples", "expected a positive sample count");
        }
        if (integ.contains("max_steps")) {
            config.integrator.max_steps = as_int(integ["max_steps"], "/integrator/max_steps");
            if (config.integrator.max_steps < 1) fail("/integrator/max_steps", "must be positive");
        }
    }

    if (root.contains("sampling")) {
        const json& s = root["sampling"];
        if (!s.is_object()) fail("/sampling", "expected an object");
        if (s.contains("seed")) {
            const json& seed = s["seed"];
            if (seed.is_number_unsigned())
                config.sampling.seed = seed.get<std::uint64_t>();
            else if (seed.is_number_integer() && seed.get<long long>() >= 0)
                config.sampling.seed = static_cast<std::uint64_t>(seed.get<long long>());
            else
                fail("/sampling/seed", "expected a non-negative integer");
        }
        if (s.contains("count")) {
            config.sampling.count = as_int(s["count"], "/sampling/count");
            if (config.sampling.count < 1) fail("/sampling/count", "must be positive");
        }
        if (s.contains("box")) {
            const json& box = s["box"];
            if (!box.is_object() || !box.contains("lo") || !box.contains("hi"))
                fail("/sampling/box", "expected {lo, hi}");
            config.sampling.box_lo = as_number(box["lo"], "/sampling/box/lo");
            config.sampling.box_hi = as_number(box["hi"], "/sampling/box/hi");
            if (!(config.sampling.box_lo < config.sampling.box_hi))
                fail("/sampling/box", "need lo < hi");
        }
        if (s.contains("t_values"))
            config.sampling.t_values = as_number_list(s["t_values"], "/sampling/t_values");
    }

    if (root.contains("invariants")) {
        const json& tasks = root["invariants"];
        if (!tasks.is_array()) fail("/invariants", "expected an array of tasks");
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const std::string tpath = "/invariants/" + std::to_string(i);
            const json& tj = tasks[i];
            if (!tj.is_object()) fail(tpath, "expected an object");
            InvariantTask task;
            const std::string kind = as_string(require(tj, tpath, "kind"), tpath + "/kind");
            if (kind == "relative")
                task.kind = InvariantKind::Relative;
            else if (kind == "absolute")
                task.kind = InvariantKind::Absolute;
            else
                fail(tpath + "/kind", "expected \"relative\" or \"absolute\"");
            if (tj.contains("k")) {
                task.k = as_int(tj["k"], tpath + "/k");
                if (task.k < 0) fail(tpath + "/k", "k must be >= 0");
            }
            const json& cy = require(tj, tpath, "cycle");
            if (!cy.is_object()) fail(tpath + "/cycle", "expected an object");
            task.dimension = as_int(require(cy, tpath + "/cycle", "dimension"),
                                    tpath + "/cycle/dimension");
            if (task.dimension < 1) fail(tpath + "/cycle/dimension", "must be >= 1");
            const std::vector<std::string> maps = as_string_list(
                require(cy, tpath + "/cycle", "maps"), tpath + "/cycle/maps");
            if (static_cast<int>(maps.size()) != n)
                fail(tpath + "/cycle/maps",
                     "need one map per spatial coordinate (" + std::to_string(n) + ")");
            std::vector<std::string> params;
            for (int d = 1; d <= task.dimension; ++d) params.push_back("u" + std::to_string(d));
            for (std::size_t mi = 0; mi < maps.size(); ++mi) {
                try {
                    task.maps.push_back(parse_expression(maps[mi], params));
                } catch (const ParseError& e) {
                    fail(tpath + "/cycle/maps/" + std::to_string(mi),
                         std::string("expression parse error at offset ") +
                             std::to_string(e.offset()) + ": " + e.what());
                }
            }
            if (cy.contains("closed")) task.closed = as_bool(cy["closed"], tpath + "/cycle/closed");
            if (tj.contains("t0")) task.t0 = as_number(tj["t0"], tpath + "/t0");
            if (tj.contains("t1")) task.t1 = as_number(tj["t1"], tpath + "/t1");
            if (tj.contains("order")) {
                task.order = as_int(tj["order"], tpath + "/order");
                if (task.order < 1) fail(tpath + "/order", "must be >= 1");
            }
            config.invariant_tasks.push_back(std::move(task));
        }
    }

    if (root.contains("liouville")) {
        const json& lj = root["liouville"];
        if (!lj.is_object()) fail("/liouville", "expected an object");
        LiouvilleTask task;
        task.box_lo = as_number_list(require(lj, "/liouville", "box_lo"), "/liouville/box_lo");
        task.box_hi = as_number_list(require(lj, "/liouville", "box_hi"), "/liouville/box_hi");
        if (static_cast<int>(task.box_lo.size()) != n ||
            static_cast<int>(task.box_hi.size()) != n)
            fail("/liouville", "box bounds need one entry per spatial coordinate");
        for (int i = 0; i < n; ++i)
            if (!(task.box_lo[static_cast<std::size_t>(i)] <
                  task.box_hi[static_cast<std::size_t>(i)]))
                fail("/liouville/box_lo/" + std::to_string(i), "need lo < hi");
        if (lj.contains("count")) {
            task.count = as_int(lj["count"], "/liouville/count");
            if (task.count < 1) fail("/liouville/count", "must be positive");
        }
        if (lj.contains("t0")) task.t0 = as_number(lj["t0"], "/liouville/t0");
        if (lj.contains("t1")) task.t1 = as_number(lj["t1"], "/liouville/t1");
        if (lj.contains("fd_step")) {
            task.fd_step = as_number(lj["fd_step"], "/liouville/fd_step");
            if (!(task.fd_step > 0)) fail("/liouville/fd_step", "must be positive");
        }
        config.liouville = std::move(task);
    }

    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_config_text(text);
}

}  // namespace vortex

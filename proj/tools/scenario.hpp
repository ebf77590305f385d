#pragma once

/**
 * @file scenario.hpp
 * @brief JSON scenario loading and verification orchestration for the CLI.
 *
 * A scenario declares named charts, quadratic Lie algebras, Courant backends
 * and pseudo-connections, a pool of rational sample points, and an ordered
 * list of checks.  The schema carries an explicit integer version and is
 * strict: unknown fields are rejected, all references must resolve, and
 * rationals are "p/q" strings.  Polynomials are arrays of terms
 * ["coeff", e_1, ..., e_n]; scalars are polynomials or {"num": .., "den": ..};
 * k-forms are arrays of {"indices": [..], "value": scalar}.
 *
 * Reports carry one verdict per check (pass / fail / error); every fail entry
 * has at least one witness string.  Output is deterministic for fixed input
 * bytes, seed and sample count, modulo the timing fields.
 */

#include <pdv/constructions.hpp>
#include <pdv/relations.hpp>

#include <json.hpp>

#include <chrono>
#include <functional>
#include <map>
#include <random>

namespace pdvcli {

using json = nlohmann::ordered_json;

/// Schema violations, unresolved references, and other pre-run errors.
struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& m) : std::runtime_error(m) {}
};

[[noreturn]] inline void fail_at(const std::string& path, const std::string& msg) {
    throw ScenarioError(path + ": " + msg);
}

inline void check_keys(const json& o, const std::string& path,
                       std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional = {}) {
    if (!o.is_object()) fail_at(path, "expected an object");
    for (const char* k : required)
        if (!o.contains(k)) fail_at(path, std::string("missing required field '") + k + "'");
    for (auto it = o.begin(); it != o.end(); ++it) {
        bool known = false;
        for (const char* k : required)
            if (it.key() == k) known = true;
        for (const char* k : optional)
            if (it.key() == k) known = true;
        if (!known) fail_at(path, "unknown field '" + it.key() + "'");
    }
}

inline pdv::Rational parse_rational(const json& j, const std::string& path) {
    if (!j.is_string()) fail_at(path, "expected a \"p/q\" rational string");
    const std::string s = j.get<std::string>();
    std::size_t i = 0;
    auto digits = [&]() {
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        return i > start;
    };
    if (i < s.size() && s[i] == '-') ++i;
    if (!digits()) fail_at(path, "malformed rational '" + s + "'");
    if (i < s.size()) {
        if (s[i] != '/') fail_at(path, "malformed rational '" + s + "'");
        ++i;
        if (!digits() || i != s.size()) fail_at(path, "malformed rational '" + s + "'");
    }
    pdv::Rational r(s);
    return r;
}

inline pdv::Poly parse_poly(const json& j, const pdv::ChartPtr& c, const std::string& path) {
    if (!j.is_array()) fail_at(path, "expected a polynomial (array of terms)");
    pdv::Poly p(c);
    for (std::size_t t = 0; t < j.size(); ++t) {
        const json& term = j[t];
        const std::string tp = path + ".term[" + std::to_string(t) + "]";
        if (!term.is_array() || term.size() != 1 + c->dim())
            fail_at(tp, "expected [\"coeff\", e_1, ..., e_" + std::to_string(c->dim()) + "]");
        pdv::Exponents e(c->dim());
        for (std::size_t i = 0; i < c->dim(); ++i) {
            if (!term[1 + i].is_number_unsigned()) fail_at(tp, "exponents must be integers >= 0");
            e[i] = term[1 + i].get<unsigned>();
        }
        p.add_term(e, parse_rational(term[0], tp));
    }
    return p;
}

inline pdv::Scalar parse_scalar(const json& j, const pdv::ChartPtr& c, const std::string& path) {
    if (j.is_array()) return pdv::Scalar(parse_poly(j, c, path));
    check_keys(j, path, {"num", "den"});
    return pdv::Scalar(parse_poly(j["num"], c, path + ".num"),
                       parse_poly(j["den"], c, path + ".den"));
}

inline pdv::KForm parse_form(const json& j, const pdv::ChartPtr& c, std::size_t degree,
                             const std::string& path) {
    if (!j.is_array()) fail_at(path, "expected an array of form terms");
    pdv::KForm f(c, degree);
    for (std::size_t t = 0; t < j.size(); ++t) {
        const std::string tp = path + "[" + std::to_string(t) + "]";
        check_keys(j[t], tp, {"indices", "value"});
        const json& idx = j[t]["indices"];
        if (!idx.is_array() || idx.size() != degree) fail_at(tp, "wrong index count");
        pdv::KForm::Indices indices;
        for (const auto& v : idx) {
            if (!v.is_number_unsigned() || v.get<std::size_t>() >= c->dim())
                fail_at(tp, "form index out of range");
            indices.push_back(v.get<std::size_t>());
        }
        f.set(indices, parse_scalar(j[t]["value"], c, tp + ".value"));
    }
    return f;
}

inline pdv::VectorField parse_vf(const json& j, const pdv::ChartPtr& c, const std::string& path) {
    if (!j.is_array() || j.size() != c->dim())
        fail_at(path, "expected one scalar component per coordinate");
    pdv::VectorField x(c);
    for (std::size_t i = 0; i < c->dim(); ++i)
        x.comp(i) = parse_scalar(j[i], c, path + "[" + std::to_string(i) + "]");
    return x;
}

inline pdv::Matrix<pdv::Rational> parse_rows(const json& j, std::size_t cols,
                                             const std::string& path) {
    if (!j.is_array()) fail_at(path, "expected an array of rows");
    pdv::Matrix<pdv::Rational> m(j.size(), cols, pdv::Rational(0), pdv::Rational(1));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            fail_at(path, "row " + std::to_string(r) + " has the wrong length");
        for (std::size_t k = 0; k < cols; ++k)
            m.at(r, k) = parse_rational(j[r][k], path + "[" + std::to_string(r) + "]");
    }
    return m;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    std::string verdict;  ///< "pass" | "fail" | "error"
    std::vector<std::string> witnesses;
    long long ms = 0;
};

struct Report {
    std::string scenario;
    std::vector<CheckResult> checks;

    std::string verdict() const {
        bool failed = false;
        for (const auto& c : checks) {
            if (c.verdict == "error") return "error";
            if (c.verdict == "fail") failed = true;
        }
        return failed ? "fail" : "pass";
    }

    /// 0 = all pass, 1 = at least one fail/error among the checks.
    int exit_code() const { return verdict() == "pass" ? 0 : 1; }

    json to_json() const {
        json j;
        j["schema_version"] = 1;
        j["scenario"] = scenario;
        j["verdict"] = verdict();
        j["checks"] = json::array();
        for (const auto& c : checks) {
            json e;
            e["name"] = c.name;
            e["verdict"] = c.verdict;
            e["witnesses"] = c.witnesses;
            e["ms"] = c.ms;
            j["checks"].push_back(std::move(e));
        }
        return j;
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "scenario: " << scenario << "\n";
        for (const auto& c : checks) {
            os << "  [" << c.verdict << "] " << c.name;
            os << " (" << c.ms << " ms)\n";
            for (const auto& w : c.witnesses) os << "      witness: " << w << "\n";
        }
        os << "verdict: " << verdict() << "\n";
        return os.str();
    }
};

struct Options {
    std::size_t samples = 0;  ///< 0 = use every declared sample point
    unsigned seed = 1234;
};

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

class Scenario {
public:
    static Scenario load(const json& j) {
        Scenario s;
        check_keys(j, "$", {"schema_version", "name", "checks"},
                   {"charts", "algebras", "backends", "connections", "samples"});
        if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != 1)
            fail_at("$.schema_version", "unsupported schema version (expected 1)");
        if (!j["name"].is_string()) fail_at("$.name", "expected a string");
        s.name_ = j["name"].get<std::string>();

        for (std::size_t i = 0; i < j.value("charts", json::array()).size(); ++i) {
            const json& cj = j["charts"][i];
            const std::string path = "$.charts[" + std::to_string(i) + "]";
            check_keys(cj, path, {"name", "coords"});
            std::vector<std::string> coords;
            for (const auto& c : cj["coords"]) coords.push_back(c.get<std::string>());
            s.charts_.emplace(cj["name"].get<std::string>(),
                              pdv::make_chart(cj["name"].get<std::string>(), coords));
        }
        for (std::size_t i = 0; i < j.value("algebras", json::array()).size(); ++i)
            s.load_algebra(j["algebras"][i], "$.algebras[" + std::to_string(i) + "]");
        for (std::size_t i = 0; i < j.value("backends", json::array()).size(); ++i)
            s.load_backend(j["backends"][i], "$.backends[" + std::to_string(i) + "]");
        for (std::size_t i = 0; i < j.value("connections", json::array()).size(); ++i)
            s.load_connection(j["connections"][i], "$.connections[" + std::to_string(i) + "]");
        for (std::size_t i = 0; i < j.value("samples", json::array()).size(); ++i) {
            const json& pj = j["samples"][i];
            const std::string path = "$.samples[" + std::to_string(i) + "]";
            if (!pj.is_array()) fail_at(path, "expected an array of rationals");
            std::vector<pdv::Rational> p;
            for (const auto& v : pj) p.push_back(parse_rational(v, path));
            s.samples_.push_back(std::move(p));
        }
        if (!j["checks"].is_array() || j["checks"].empty())
            fail_at("$.checks", "expected a nonempty array");
        for (std::size_t i = 0; i < j["checks"].size(); ++i)
            s.load_check(j["checks"][i], "$.checks[" + std::to_string(i) + "]");
        return s;
    }

    const std::string& name() const { return name_; }

    Report run(const Options& opts) const {
        Report rep;
        rep.scenario = name_;
        for (const auto& [label, fn] : checks_) {
            CheckResult res;
            res.name = label;
            const auto start = std::chrono::steady_clock::now();
            try {
                pdv::CheckReport r = fn(opts);
                res.verdict = r.ok() ? "pass" : "fail";
                res.witnesses = r.failures;
            } catch (const std::exception& e) {
                res.verdict = "error";
                res.witnesses = {e.what()};
            }
            res.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
            rep.checks.push_back(std::move(res));
        }
        return rep;
    }

private:
    using CheckFn = std::function<pdv::CheckReport(const Options&)>;

    std::string name_;
    std::map<std::string, pdv::ChartPtr> charts_;
    std::map<std::string, pdv::QuadLieAlgebra> algebras_;
    std::map<std::string, pdv::BackendPtr> backends_;
    std::map<std::string, pdv::PseudoConnection> conns_;
    std::vector<std::vector<pdv::Rational>> samples_;
    std::vector<std::pair<std::string, CheckFn>> checks_;

    template <class M>
    const typename M::mapped_type& resolve(const M& m, const json& j, const char* what,
                                           const std::string& path) const {
        if (!j.is_string()) fail_at(path, std::string("expected a ") + what + " name");
        auto it = m.find(j.get<std::string>());
        if (it == m.end())
            fail_at(path, std::string("unresolved ") + what + " reference '" +
                              j.get<std::string>() + "'");
        return it->second;
    }

    static std::vector<std::vector<pdv::Rational>> points_for(
        const std::vector<std::vector<pdv::Rational>>& pool, const pdv::ChartPtr& c,
        const Options& opts) {
        std::vector<std::vector<pdv::Rational>> out;
        for (const auto& p : pool)
            if (p.size() == c->dim()) out.push_back(p);
        if (opts.samples > 0 && out.size() > opts.samples) out.resize(opts.samples);
        return out;
    }

    /// Samples must avoid every denominator of the referenced scalars; a hit
    /// is reported as a check error rather than being skipped quietly.
    static void require_no_poles(const pdv::PseudoConnection& c,
                                 const std::vector<std::vector<pdv::Rational>>& pts) {
        const std::size_t dim = c.backend()->chart()->dim();
        for (const auto& p : pts) {
            try {
                for (std::size_t i = 0; i < c.size(); ++i) {
                    for (const auto& s : c.w().section(i).coeffs) s.eval(p);
                    for (std::size_t j = 0; j < c.size(); ++j)
                        for (std::size_t k = 0; k < dim; ++k) c.a(i, j).coeff({k}).eval(p);
                }
            } catch (const std::domain_error&) {
                std::ostringstream os;
                os << "denominator hit at sample point (";
                for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
                os << ")";
                throw ScenarioError(os.str());
            }
        }
    }

    static pdv::Scalar random_scalar(const pdv::ChartPtr& c, std::mt19937& rng,
                                     unsigned max_deg = 1) {
        std::uniform_int_distribution<int> coeff(-2, 2);
        std::uniform_int_distribution<unsigned> deg(0, max_deg);
        pdv::Poly p(c);
        for (unsigned t = 0; t < 2; ++t) {
            pdv::Exponents e(c->dim());
            for (auto& x : e) x = deg(rng);
            p.add_term(e, pdv::Rational(coeff(rng)));
        }
        return pdv::Scalar(p);
    }

    static std::vector<pdv::Section> random_probes(const pdv::CourantBackend& e,
                                                   std::size_t count, std::mt19937& rng) {
        std::vector<pdv::Section> probes;
        for (std::size_t i = 0; i < count; ++i) {
            pdv::Section s = e.zero_section();
            for (auto& c : s.coeffs) c = random_scalar(e.chart(), rng);
            probes.push_back(std::move(s));
        }
        return probes;
    }

    void load_algebra(const json& aj, const std::string& path) {
        check_keys(aj, path, {"name", "kind"}, {"of", "labels", "c", "metric"});
        const std::string name = aj["name"].get<std::string>();
        const std::string kind = aj["kind"].get<std::string>();
        if (kind == "sl2") {
            algebras_.emplace(name, pdv::sl2());
        } else if (kind == "aff1_double") {
            algebras_.emplace(name, pdv::aff1_double());
        } else if (kind == "direct_sum_conjugate") {
            if (!aj.contains("of")) fail_at(path, "missing required field 'of'");
            algebras_.emplace(name,
                              pdv::direct_sum_conjugate(resolve(algebras_, aj["of"], "algebra",
                                                                path + ".of")));
        } else if (kind == "custom") {
            for (const char* k : {"labels", "c", "metric"})
                if (!aj.contains(k)) fail_at(path, std::string("missing required field '") + k + "'");
            std::vector<std::string> labels;
            for (const auto& l : aj["labels"]) labels.push_back(l.get<std::string>());
            const std::size_t n = labels.size();
            std::vector<std::vector<std::vector<pdv::Rational>>> c(
                n, std::vector<std::vector<pdv::Rational>>(n, std::vector<pdv::Rational>(n, 0)));
            for (const auto& entry : aj["c"]) {
                if (!entry.is_array() || entry.size() != 4)
                    fail_at(path + ".c", "expected entries [i, j, k, \"p/q\"]");
                c[entry[0].get<std::size_t>()][entry[1].get<std::size_t>()]
                 [entry[2].get<std::size_t>()] = parse_rational(entry[3], path + ".c");
            }
            pdv::Matrix<pdv::Rational> g = parse_rows(aj["metric"], n, path + ".metric");
            if (g.rows() != n) fail_at(path + ".metric", "metric must be square");
            algebras_.emplace(name, pdv::QuadLieAlgebra(labels, c, g));
        } else {
            fail_at(path + ".kind", "unknown algebra kind '" + kind + "'");
        }
    }

    void load_backend(const json& bj, const std::string& path) {
        check_keys(bj, path, {"name", "kind"}, {"chart", "algebra", "twist", "rho"});
        const std::string name = bj["name"].get<std::string>();
        const std::string kind = bj["kind"].get<std::string>();
        if (kind == "exact") {
            if (!bj.contains("chart")) fail_at(path, "missing required field 'chart'");
            const pdv::ChartPtr& c = resolve(charts_, bj["chart"], "chart", path + ".chart");
            pdv::KForm twist(c, 3);
            if (bj.contains("twist")) twist = parse_form(bj["twist"], c, 3, path + ".twist");
            backends_.emplace(name, pdv::ExactBackend::make(c, std::move(twist)));
        } else if (kind == "action") {
            for (const char* k : {"chart", "algebra", "rho"})
                if (!bj.contains(k)) fail_at(path, std::string("missing required field '") + k + "'");
            const pdv::ChartPtr& c = resolve(charts_, bj["chart"], "chart", path + ".chart");
            const pdv::QuadLieAlgebra& d =
                resolve(algebras_, bj["algebra"], "algebra", path + ".algebra");
            if (!bj["rho"].is_array() || bj["rho"].size() != d.dim())
                fail_at(path + ".rho", "expected one vector field per algebra basis element");
            std::vector<pdv::VectorField> rho;
            for (std::size_t i = 0; i < d.dim(); ++i)
                rho.push_back(parse_vf(bj["rho"][i], c,
                                       path + ".rho[" + std::to_string(i) + "]"));
            backends_.emplace(name, pdv::ActionBackend::make(c, d, std::move(rho)));
        } else if (kind == "point") {
            if (!bj.contains("algebra")) fail_at(path, "missing required field 'algebra'");
            backends_.emplace(name, pdv::make_point_backend(resolve(algebras_, bj["algebra"],
                                                                    "algebra", path + ".algebra")));
        } else {
            fail_at(path + ".kind", "unknown backend kind '" + kind + "'");
        }
    }

    std::shared_ptr<const pdv::ExactBackend> exact_backend(const json& j,
                                                           const std::string& path) const {
        auto e = std::dynamic_pointer_cast<const pdv::ExactBackend>(
            resolve(backends_, j, "backend", path));
        if (!e) fail_at(path, "backend must be of kind 'exact'");
        return e;
    }

    void load_connection(const json& cj, const std::string& path) {
        check_keys(cj, path, {"name", "kind"},
                   {"backend", "entries", "omega", "eta", "algebra", "sections", "a"});
        const std::string name = cj["name"].get<std::string>();
        const std::string kind = cj["kind"].get<std::string>();
        if (kind == "cotangent_bivector") {
            for (const char* k : {"backend", "entries"})
                if (!cj.contains(k)) fail_at(path, std::string("missing required field '") + k + "'");
            auto e = exact_backend(cj["backend"], path + ".backend");
            std::vector<std::tuple<std::size_t, std::size_t, pdv::Scalar>> entries;
            for (const auto& entry : cj["entries"]) {
                if (!entry.is_array() || entry.size() != 3)
                    fail_at(path + ".entries", "expected entries [i, j, scalar]");
                entries.emplace_back(entry[0].get<std::size_t>(), entry[1].get<std::size_t>(),
                                     parse_scalar(entry[2], e->chart(), path + ".entries"));
            }
            conns_.emplace(name, pdv::cotangent_connection(
                                     pdv::bivector_algebroid(
                                         e->chart(), pdv::bivector_matrix(e->chart(), entries)),
                                     e));
        } else if (kind == "metric_omega") {
            for (const char* k : {"backend", "omega"})
                if (!cj.contains(k)) fail_at(path, std::string("missing required field '") + k + "'");
            auto e = exact_backend(cj["backend"], path + ".backend");
            const pdv::KForm omega = parse_form(cj["omega"], e->chart(), 2, path + ".omega");
            pdv::PseudoConnection conn = pdv::metric_connection(e, omega);
            if (cj.value("eta", "domega") == std::string("zero")) {
                const std::size_t n = conn.size();
                conn = pdv::PseudoConnection(
                    conn.w(), std::vector<std::vector<pdv::KForm>>(
                                  n, std::vector<pdv::KForm>(n, pdv::KForm(e->chart(), 1))));
            } else if (cj.value("eta", "domega") != std::string("domega")) {
                fail_at(path + ".eta", "expected \"domega\" or \"zero\"");
            }
            conns_.emplace(name, std::move(conn));
        } else if (kind == "bundle_of_algebras") {
            for (const char* k : {"backend", "algebra"})
                if (!cj.contains(k)) fail_at(path, std::string("missing required field '") + k + "'");
            auto e = exact_backend(cj["backend"], path + ".backend");
            const pdv::QuadLieAlgebra& d =
                resolve(algebras_, cj["algebra"], "algebra", path + ".algebra");
            if (d.dim() != e->chart()->dim())
                fail_at(path, "algebra dimension must match the chart dimension");
            std::vector<std::vector<std::vector<pdv::Rational>>> cc(
                d.dim(), std::vector<std::vector<pdv::Rational>>(
                             d.dim(), std::vector<pdv::Rational>(d.dim(), 0)));
            for (std::size_t i = 0; i < d.dim(); ++i)
                for (std::size_t j = 0; j < d.dim(); ++j)
                    for (std::size_t k = 0; k < d.dim(); ++k) cc[i][j][k] = d.c(i, j, k);
            conns_.emplace(name, pdv::bundle_of_algebras(e, cc));
        } else if (kind == "frame") {
            for (const char* k : {"backend", "sections", "a"})
                if (!cj.contains(k)) fail_at(path, std::string("missing required field '") + k + "'");
            const pdv::BackendPtr& b = resolve(backends_, cj["backend"], "backend",
                                               path + ".backend");
            std::vector<pdv::Section> sections;
            for (std::size_t i = 0; i < cj["sections"].size(); ++i) {
                const json& sj = cj["sections"][i];
                if (!sj.is_array() || sj.size() != b->rank())
                    fail_at(path + ".sections", "each section needs one scalar per frame slot");
                pdv::Section s = b->zero_section();
                for (std::size_t k = 0; k < b->rank(); ++k)
                    s.coeffs[k] = parse_scalar(sj[k], b->chart(),
                                               path + ".sections[" + std::to_string(i) + "]");
                sections.push_back(std::move(s));
            }
            const std::size_t n = sections.size();
            std::vector<std::vector<pdv::KForm>> a(
                n, std::vector<pdv::KForm>(n, pdv::KForm(b->chart(), 1)));
            if (!cj["a"].is_array() || cj["a"].size() != n)
                fail_at(path + ".a", "expected an n x n matrix of 1-forms");
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    a[i][k] = parse_form(cj["a"][i][k], b->chart(), 1,
                                         path + ".a[" + std::to_string(i) + "]");
            conns_.emplace(name, pdv::PseudoConnection(pdv::SubbundleFrame(b, std::move(sections)),
                                                       std::move(a)));
        } else {
            fail_at(path + ".kind", "unknown connection kind '" + kind + "'");
        }
    }

    void load_check(const json& kj, const std::string& path) {
        if (!kj.is_object() || !kj.contains("check"))
            fail_at(path, "expected an object with a 'check' field");
        const std::string kind = kj["check"].get<std::string>();

        if (kind == "quadlie_verify") {
            check_keys(kj, path, {"check", "algebra"});
            const pdv::QuadLieAlgebra d =
                resolve(algebras_, kj["algebra"], "algebra", path + ".algebra");
            checks_.emplace_back(kind, [d](const Options&) { return d.verify(); });
        } else if (kind == "courant_axioms") {
            check_keys(kj, path, {"check", "backend"}, {"probes", "functions"});
            const pdv::BackendPtr b = resolve(backends_, kj["backend"], "backend",
                                              path + ".backend");
            const std::size_t probes = kj.value("probes", 3);
            const std::size_t fns = kj.value("functions", 1);
            checks_.emplace_back(kind, [b, probes, fns](const Options& o) {
                std::mt19937 rng(o.seed);
                std::vector<pdv::Scalar> probe_fns;
                for (std::size_t i = 0; i < fns; ++i)
                    probe_fns.push_back(random_scalar(b->chart(), rng, 2));
                return pdv::verify_axioms(*b, random_probes(*b, probes, rng), probe_fns);
            });
        } else if (kind == "pseudo_dirac") {
            check_keys(kj, path, {"check", "connection"});
            const pdv::PseudoConnection c =
                resolve(conns_, kj["connection"], "connection", path + ".connection");
            checks_.emplace_back(kind, [pool = samples_, c](const Options& o) {
                const auto pts = points_for(pool, c.backend()->chart(), o);
                require_no_poles(c, pts);
                return c.is_pseudo_dirac(pts);
            });
        } else if (kind == "lie_algebroid") {
            check_keys(kj, path, {"check", "connection"});
            const pdv::PseudoConnection c =
                resolve(conns_, kj["connection"], "connection", path + ".connection");
            checks_.emplace_back(kind, [c](const Options&) {
                return c.induced_lie_algebroid().verify();
            });
        } else if (kind == "torsion_equals") {
            check_keys(kj, path, {"check", "connection", "triple", "value"});
            const pdv::PseudoConnection c =
                resolve(conns_, kj["connection"], "connection", path + ".connection");
            const json& tr = kj["triple"];
            if (!tr.is_array() || tr.size() != 3) fail_at(path + ".triple", "expected [i, j, k]");
            const std::size_t i = tr[0].get<std::size_t>(), j = tr[1].get<std::size_t>(),
                              k = tr[2].get<std::size_t>();
            const pdv::Scalar value =
                parse_scalar(kj["value"], c.backend()->chart(), path + ".value");
            checks_.emplace_back(kind, [c, i, j, k, value](const Options&) {
                pdv::CheckReport rep;
                const pdv::Scalar t = c.torsion(i, j, k);
                if (!(t == value))
                    rep.fail("torsion(" + std::to_string(i) + "," + std::to_string(j) + "," +
                             std::to_string(k) + ") = " + t.str() + ", expected " + value.str());
                return rep;
            });
        } else if (kind == "action_decomposition" || kind == "transverse_constant") {
            check_keys(kj, path, {"check", "backend", "e", "f"},
                       {"nabla_zero", "vector_parts_zero"});
            const pdv::BackendPtr b = resolve(backends_, kj["backend"], "backend",
                                              path + ".backend");
            const pdv::Matrix<pdv::Rational> e_rows =
                parse_rows(kj["e"], b->rank(), path + ".e");
            const pdv::Matrix<pdv::Rational> f_rows =
                parse_rows(kj["f"], b->rank(), path + ".f");
            const bool want_action = (kind == "action_decomposition");
            const bool nabla_zero = kj.value("nabla_zero", false);
            const bool has_nabla_claim = kj.contains("nabla_zero");
            const bool vparts_zero = kj.value("vector_parts_zero", false);
            checks_.emplace_back(kind, [pool = samples_, b, e_rows, f_rows, want_action,
                                        nabla_zero, has_nabla_claim,
                                        vparts_zero](const Options& o) {
                const auto pts = points_for(pool, b->chart(), o);
                pdv::TransversePair tp = [&] {
                    if (want_action) {
                        auto act = std::dynamic_pointer_cast<const pdv::ActionBackend>(b);
                        if (!act) throw ScenarioError("backend must be of kind 'action'");
                        return pdv::action_decomposition(act, e_rows, f_rows, pts);
                    }
                    auto flat = [&](const pdv::Matrix<pdv::Rational>& rows) {
                        std::vector<pdv::Section> frame;
                        for (std::size_t r = 0; r < rows.rows(); ++r) {
                            pdv::Section s = b->zero_section();
                            for (std::size_t k = 0; k < b->rank(); ++k)
                                s.coeffs[k] = pdv::Scalar(b->chart(), rows.at(r, k));
                            frame.push_back(std::move(s));
                        }
                        const std::size_t n = frame.size();
                        return pdv::PseudoConnection(
                            pdv::SubbundleFrame(b, std::move(frame)),
                            std::vector<std::vector<pdv::KForm>>(
                                n, std::vector<pdv::KForm>(n, pdv::KForm(b->chart(), 1))));
                    };
                    return pdv::transverse_pair(flat(e_rows), flat(f_rows), pts);
                }();
                pdv::CheckReport rep = tp.report;
                auto pd = tp.conn.is_pseudo_dirac(pts);
                rep.failures.insert(rep.failures.end(), pd.failures.begin(), pd.failures.end());
                bool all_zero = true;
                for (std::size_t i = 0; i < tp.conn.size(); ++i)
                    for (std::size_t j = 0; j < tp.conn.size(); ++j)
                        if (!tp.conn.a(i, j).is_zero()) all_zero = false;
                if (has_nabla_claim && all_zero != nabla_zero)
                    rep.fail(std::string("expected nabla to be ") +
                             (nabla_zero ? "zero" : "nonzero"));
                if (vparts_zero) {
                    auto ex = std::dynamic_pointer_cast<const pdv::ExactBackend>(
                        tp.conn.backend());
                    for (std::size_t i = 0; i < tp.conn.size(); ++i)
                        if (!ex->vector_part(tp.conn.w().section(i)).is_zero())
                            rep.fail("expected W to have zero vector parts");
                }
                return rep;
            });
        } else if (kind == "vb_correspondence") {
            check_keys(kj, path, {"check", "connection"});
            const pdv::PseudoConnection c =
                resolve(conns_, kj["connection"], "connection", path + ".connection");
            checks_.emplace_back(kind, [pool = samples_, c](const Options& o) {
                pdv::CheckReport rep;
                pdv::TangentProlongation pro = [&] {
                    if (auto e = std::dynamic_pointer_cast<const pdv::ExactBackend>(c.backend()))
                        return pdv::tangent_prolongation(e);
                    if (auto a = std::dynamic_pointer_cast<const pdv::ActionBackend>(c.backend()))
                        return pdv::tangent_prolongation(a);
                    throw ScenarioError("vb_correspondence needs an exact or action backend");
                }();
                const auto vb = pdv::build_vb_dirac(pro, c);
                auto lag = pdv::check_lagrangian(vb.frame);
                rep.failures.insert(rep.failures.end(), lag.failures.begin(), lag.failures.end());
                const bool invol = pdv::check_involutive(vb.frame).ok();
                const auto pts = points_for(pool, c.backend()->chart(), o);
                require_no_poles(c, pts);
                const bool pd = c.is_pseudo_dirac(pts).ok();
                if (invol != pd)
                    rep.fail(std::string("involutivity (") + (invol ? "yes" : "no") +
                             ") disagrees with the pseudo-Dirac verdict (" + (pd ? "yes" : "no") +
                             ")");
                const auto rec = pdv::extract_connection(pro, c.w(), vb);
                for (std::size_t i = 0; i < c.size(); ++i)
                    for (std::size_t j = 0; j < c.size(); ++j)
                        if (!(rec[i][j] == c.a(i, j)))
                            rep.fail("extracted connection differs at (" + std::to_string(i) +
                                     "," + std::to_string(j) + ")");
                return rep;
            });
        } else if (kind == "lift_calculus") {
            check_keys(kj, path, {"check", "backend"}, {"probes"});
            const pdv::BackendPtr b = resolve(backends_, kj["backend"], "backend",
                                              path + ".backend");
            const std::size_t probes = kj.value("probes", 3);
            checks_.emplace_back(kind, [b, probes](const Options& o) {
                pdv::TangentProlongation pro = [&] {
                    if (auto e = std::dynamic_pointer_cast<const pdv::ExactBackend>(b))
                        return pdv::tangent_prolongation(e);
                    if (auto a = std::dynamic_pointer_cast<const pdv::ActionBackend>(b))
                        return pdv::tangent_prolongation(a);
                    throw ScenarioError("lift_calculus needs an exact or action backend");
                }();
                std::mt19937 rng(o.seed);
                return pdv::verify_lift_calculus(pro, random_probes(*b, probes, rng));
            });
        } else if (kind == "ann_fuzz") {
            check_keys(kj, path, {"check"}, {"trials", "max_dim"});
            const int trials = kj.value("trials", 100);
            const std::size_t max_dim = kj.value("max_dim", 6);
            checks_.emplace_back(kind, [trials, max_dim](const Options& o) {
                pdv::CheckReport rep;
                std::mt19937 rng(o.seed);
                std::uniform_int_distribution<std::size_t> dims(1, max_dim);
                std::uniform_int_distribution<int> coeff(-3, 3);
                auto random_rel = [&](std::size_t dst, std::size_t src) {
                    std::uniform_int_distribution<std::size_t> gens(1, dst + src);
                    pdv::Matrix<pdv::Rational> m(gens(rng), dst + src, pdv::Rational(0),
                                                 pdv::Rational(1));
                    for (std::size_t i = 0; i < m.rows(); ++i)
                        for (std::size_t j = 0; j < m.cols(); ++j)
                            m.at(i, j) = pdv::Rational(coeff(rng));
                    return pdv::LinearRelation<pdv::Rational>(
                        dst, src, pdv::Subspace<pdv::Rational>::span(std::move(m)));
                };
                for (int t = 0; t < trials; ++t) {
                    const std::size_t d3 = dims(rng), d2 = dims(rng), d1 = dims(rng);
                    const auto a = random_rel(d3, d2), b = random_rel(d2, d1);
                    if (!(pdv::ann_natural(pdv::compose(a, b)) ==
                          pdv::compose(pdv::ann_natural(a), pdv::ann_natural(b))))
                        rep.fail("ann-naturality fails at trial " + std::to_string(t) +
                                 " (dims " + std::to_string(d3) + "," + std::to_string(d2) + "," +
                                 std::to_string(d1) + ")");
                }
                return rep;
            });
        } else if (kind == "flat_sections") {
            check_keys(kj, path, {"check", "connection", "s", "t"});
            const pdv::PseudoConnection c =
                resolve(conns_, kj["connection"], "connection", path + ".connection");
            std::vector<pdv::Scalar> s, t;
            if (kj["s"].size() != c.size() || kj["t"].size() != c.size())
                fail_at(path, "s and t need one coefficient per frame section");
            for (std::size_t i = 0; i < c.size(); ++i) {
                s.push_back(parse_scalar(kj["s"][i], c.backend()->chart(), path + ".s"));
                t.push_back(parse_scalar(kj["t"][i], c.backend()->chart(), path + ".t"));
            }
            checks_.emplace_back(kind, [c, s, t](const Options&) {
                return pdv::flat_sections_check(c, s, t);
            });
        } else {
            fail_at(path + ".check", "unknown check kind '" + kind + "'");
        }
    }
};

inline Report run_scenario_text(const std::string& text, const Options& opts) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("JSON parse error: ") + e.what());
    }
    return Scenario::load(j).run(opts);
}

} // namespace pdvcli

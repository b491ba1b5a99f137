#pragma once

// JSON / CSV serialization. Inputs are parsed with nlohmann::json; artifacts
// are emitted through a small ordered writer that prints every number with
// 17 significant digits, so identical runs produce byte-identical files.

#include <cctype>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "garding/common.hpp"
#include "garding/dirichlet.hpp"
#include "garding/matrix_models.hpp"
#include "garding/monomial.hpp"
#include "garding/spectra.hpp"
#include "garding/universal_sets.hpp"

namespace garding::io {

inline std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Minimal ordered JSON writer (objects keep insertion order).
class JsonWriter {
   public:
    JsonWriter& begin_object() {
        sep();
        out_ << '{';
        fresh_ = true;
        return *this;
    }
    JsonWriter& end_object() {
        out_ << '}';
        fresh_ = false;
        return *this;
    }
    JsonWriter& begin_array() {
        sep();
        out_ << '[';
        fresh_ = true;
        return *this;
    }
    JsonWriter& end_array() {
        out_ << ']';
        fresh_ = false;
        return *this;
    }
    JsonWriter& key(const std::string& k) {
        sep();
        out_ << '"' << k << "\":";
        fresh_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        sep();
        out_ << fmt(v);
        fresh_ = false;
        return *this;
    }
    JsonWriter& value(int v) {
        sep();
        out_ << v;
        fresh_ = false;
        return *this;
    }
    JsonWriter& value(bool v) {
        sep();
        out_ << (v ? "true" : "false");
        fresh_ = false;
        return *this;
    }
    JsonWriter& value(const std::string& s) {
        sep();
        out_ << '"';
        for (char c : s) {
            if (c == '"' || c == '\\') out_ << '\\';
            out_ << c;
        }
        out_ << '"';
        fresh_ = false;
        return *this;
    }
    JsonWriter& value(std::span<const double> v) {
        begin_array();
        for (double x : v) value(x);
        return end_array();
    }
    std::string str() const { return out_.str(); }

   private:
    void sep() {
        if (!fresh_) out_ << ',';
        fresh_ = true;
    }
    std::ostringstream out_;
    bool fresh_ = true;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ----- polynomial JSON: {"dim": d, "degree": m, "terms": [{"exp": [...], "coeff": c}]}

inline MonomialPoly poly_from_json(const nlohmann::json& j) {
    if (!j.contains("dim") || !j.contains("degree") || !j.contains("terms"))
        throw SchemaError("polynomial: need dim, degree, terms");
    const int d = j["dim"].get<int>();
    const int m = j["degree"].get<int>();
    MonomialPoly::TermMap terms;
    int index = 0;
    for (const auto& t : j["terms"]) {
        if (!t.contains("exp") || !t.contains("coeff"))
            throw SchemaError("term " + std::to_string(index) +
                              ": need exp and coeff");
        MonomialPoly::Exponent e = t["exp"].get<std::vector<int>>();
        if (static_cast<int>(e.size()) != d)
            throw SchemaError("term " + std::to_string(index) +
                              ": exp length != dim");
        int sum = 0;
        for (int v : e) {
            if (v < 0)
                throw SchemaError("term " + std::to_string(index) +
                                  ": negative exponent");
            sum += v;
        }
        if (sum != m)
            throw SchemaError("term " + std::to_string(index) +
                              ": exponents sum to " + std::to_string(sum) +
                              ", expected degree " + std::to_string(m));
        terms[e] += t["coeff"].get<double>();
        ++index;
    }
    return MonomialPoly(d, m, std::move(terms));
}

inline std::string poly_to_json(const MonomialPoly& p) {
    JsonWriter w;
    w.begin_object();
    w.key("dim").value(p.dim());
    w.key("degree").value(p.degree());
    w.key("terms").begin_array();
    for (const auto& [e, c] : p.terms()) {
        w.begin_object();
        w.key("exp").begin_array();
        for (int v : e) w.value(v);
        w.end_array();
        w.key("coeff").value(c);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

// ----- model JSON: {"kind": ..., "n": n, "p": p?}

inline SpectralModel model_from_json(const nlohmann::json& j) {
    if (!j.contains("kind") || !j.contains("n"))
        throw SchemaError("model: need kind and n");
    return make_model(j["kind"].get<std::string>(), j["n"].get<int>(),
                      j.value("p", 0));
}

inline std::string model_to_json(const SpectralModel& m) {
    JsonWriter w;
    w.begin_object();
    w.key("kind").value(m.kind);
    w.key("n").value(m.n);
    if (m.kind == "isotropic") w.key("p").value(m.p);
    w.end_object();
    return w.str();
}

// ----- universal set JSON: {"variant": ..., "m": ..., "params": {...}}

inline UniversalSet set_from_json(const nlohmann::json& j) {
    if (!j.contains("variant") || !j.contains("m"))
        throw SchemaError("universal set: need variant and m");
    const std::string variant = j["variant"].get<std::string>();
    const int m = j["m"].get<int>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    if (variant == "branch") return branch_set(m, params.at("k").get<int>());
    if (variant == "elem_symmetric_branch")
        return elem_symmetric_set(m, params.at("p").get<int>(),
                                  params.at("k").get<int>());
    if (variant == "pconvex_branch")
        return pconvex_set(m, params.at("p").get<int>(), params.at("r").get<int>());
    if (variant == "delta_branch")
        return delta_set(m, params.at("delta").get<double>(),
                         params.at("k").get<int>());
    if (variant == "special_lagrangian")
        return special_lagrangian_set(m, params.at("c").get<double>());
    if (variant == "halfspace")
        return halfspace_set(params.at("w").get<std::vector<double>>(),
                             params.at("c").get<double>());
    throw SchemaError("unknown universal set variant: " + variant);
}

inline std::string set_to_json(const UniversalSet& e) {
    JsonWriter w;
    w.begin_object();
    w.key("variant").value(e.variant);
    w.key("m").value(e.m);
    w.key("params").begin_object();
    if (e.variant == "branch") w.key("k").value(e.k);
    if (e.variant == "elem_symmetric_branch") {
        w.key("p").value(e.p);
        w.key("k").value(e.k);
    }
    if (e.variant == "pconvex_branch") {
        w.key("p").value(e.p);
        w.key("r").value(e.r);
    }
    if (e.variant == "delta_branch") {
        w.key("delta").value(e.delta);
        w.key("k").value(e.k);
    }
    if (e.variant == "special_lagrangian") w.key("c").value(e.c);
    if (e.variant == "halfspace") {
        w.key("w").value(std::span<const double>(e.w));
        w.key("c").value(e.c);
    }
    w.end_object();
    w.end_object();
    return w.str();
}

// ----- reports -----

inline std::string classification_report_json(std::span<const double> x,
                                              std::span<const double> lambda,
                                              std::span<const double> sigma,
                                              int var,
                                              const std::vector<Classification>& branches) {
    JsonWriter w;
    w.begin_object();
    w.key("x").value(x);
    w.key("lambda").value(lambda);
    w.key("sigma").value(sigma);
    w.key("var").value(var);
    w.key("branches").begin_array();
    for (auto c : branches) w.value(std::string(to_string(c)));
    w.end_array();
    w.end_object();
    return w.str();
}

inline std::string curves_to_csv(const CurveBundle& cb) {
    std::ostringstream out;
    out << "t";
    for (std::size_t k = 0; k < cb.curves.size(); ++k) out << ",lambda_" << k + 1;
    out << "\n";
    for (std::size_t i = 0; i < cb.t_samples.size(); ++i) {
        out << fmt(cb.t_samples[i]);
        for (const auto& c : cb.curves) out << ',' << fmt(c[i]);
        out << "\n";
    }
    return out.str();
}

inline std::string grid_to_csv(const Grid2D& g) {
    std::ostringstream out;
    out << "x,y,u\n";
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            if (g.mask[g.idx(i, j)] == NodeType::Exterior) continue;
            out << fmt(g.x_of(i)) << ',' << fmt(g.y_of(j)) << ','
                << fmt(g.u[g.idx(i, j)]) << "\n";
        }
    return out.str();
}

inline std::string history_to_csv(const SolveReport& rep) {
    std::ostringstream out;
    out << "iter,residual\n";
    for (const auto& [it, r] : rep.history) out << it << ',' << fmt(r) << "\n";
    return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Tiny polynomial-expression parser for Dirichlet data in x and y:
// sums of terms like "2.5*x^2*y", "-x^3", "0.5". Whitespace is ignored.
inline std::function<double(double, double)> parse_xy_expression(
    const std::string& expr) {
    struct Term {
        double c;
        int px, py;
    };
    std::vector<Term> terms;
    std::string s;
    for (char c : expr)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    std::size_t i = 0;
    while (i < s.size()) {
        double sign = 1.0;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        Term t{sign, 0, 0};
        bool have_coeff = false;
        bool expect_factor = true;
        while (i < s.size() && expect_factor) {
            if (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.') {
                std::size_t used = 0;
                t.c *= std::stod(s.substr(i), &used);
                i += used;
                have_coeff = true;
            } else if (s[i] == 'x' || s[i] == 'y') {
                const char var = s[i];
                ++i;
                int pow = 1;
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    std::size_t used = 0;
                    pow = std::stoi(s.substr(i), &used);
                    i += used;
                }
                (var == 'x' ? t.px : t.py) += pow;
                have_coeff = true;
            } else {
                throw SchemaError("cannot parse data expression near '" +
                                  s.substr(i, 8) + "'");
            }
            expect_factor = i < s.size() && s[i] == '*';
            if (expect_factor) ++i;
        }
        if (!have_coeff) throw SchemaError("empty term in data expression");
        terms.push_back(t);
    }
    return [terms](double x, double y) {
        double v = 0.0;
        for (const auto& t : terms) {
            double p = t.c;
            for (int k = 0; k < t.px; ++k) p *= x;
            for (int k = 0; k < t.py; ++k) p *= y;
            v += p;
        }
        return v;
    };
}

}  // namespace garding::io

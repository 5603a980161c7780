#include <fracspec/problem.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace fracspec {
namespace {

std::string fmt_double(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

bool strict_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size()) return false;
    if (!std::isfinite(v)) return false;
    out = v;
    return true;
}

bool strict_int(const std::string& s, long& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end != begin + s.size()) return false;
    out = v;
    return true;
}

bool strict_bool(const std::string& s, bool& out) {
    const std::string v = lower(s);
    if (v == "true" || v == "1" || v == "yes" || v == "on") { out = true; return true; }
    if (v == "false" || v == "0" || v == "no" || v == "off") { out = false; return true; }
    return false;
}

bool strict_double_list(const std::string& s, std::vector<double>& out) {
    out.clear();
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::string item =
            trim(s.substr(start, comma == std::string::npos ? std::string::npos
                                                            : comma - start));
        double v = 0.0;
        if (!strict_double(item, v)) return false;
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return !out.empty();
}

}  // namespace

// ---------------------------------------------------------------------------
// TimeSignal
// ---------------------------------------------------------------------------

TimeSignal::TimeSignal() = default;

TimeSignal TimeSignal::closed_form(const std::string& expr_text) {
    TimeSignal s;
    s.kind_ = Kind::closed_form;
    s.expr_ = parse_expression(expr_text, "t");
    s.dexpr_[0] = s.expr_.derivative('t');
    s.dexpr_[1] = s.dexpr_[0].derivative('t');
    s.dexpr_[2] = s.dexpr_[1].derivative('t');
    return s;
}

TimeSignal TimeSignal::from_samples(std::vector<double> values, double horizon,
                                    int interp_order, bool smooth) {
    if (values.size() < 2)
        throw std::invalid_argument("time signal: at least two samples required");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("time signal: samples must be finite");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("time signal: horizon must be positive");
    if (interp_order != 0 && interp_order != 1)
        throw std::invalid_argument("time signal: interpolation order must be 0 or 1");
    TimeSignal s;
    s.kind_ = Kind::samples;
    s.samples_ = std::move(values);
    s.horizon_ = horizon;
    s.interp_ = interp_order;
    s.smooth_ = smooth;
    return s;
}

double TimeSignal::operator()(double t) const {
    if (kind_ == Kind::closed_form) return expr_(EvalPoint{t, 0.0, 0.0});

    const double tol = 1e-9 * horizon_;
    if (t < -tol || t > horizon_ + tol)
        throw std::domain_error("time signal: t outside the sampled range [0, T]");
    const double s = std::clamp(t, 0.0, horizon_);
    const std::size_t n = samples_.size();
    const double h = horizon_ / static_cast<double>(n - 1);
    if (interp_ == 0) {
        // Piecewise constant: value on [t_j, t_{j+1}) is sample j.
        auto idx = static_cast<std::size_t>(std::floor(s / h + 1e-9));
        if (idx >= n) idx = n - 1;
        return samples_[idx];
    }
    const double u = s / h;
    auto j = static_cast<std::size_t>(u);
    if (j > n - 2) j = n - 2;
    const double w = u - static_cast<double>(j);
    return samples_[j] * (1.0 - w) + samples_[j + 1] * w;
}

bool TimeSignal::derivatives_available() const {
    return kind_ == Kind::closed_form || smooth_;
}

double TimeSignal::derivative(int order, double t) const {
    if (order < 1 || order > 3)
        throw std::invalid_argument("time signal: derivative order must be 1, 2, or 3");
    if (kind_ == Kind::closed_form) return dexpr_[order - 1](EvalPoint{t, 0.0, 0.0});

    if (!smooth_)
        throw std::invalid_argument(
            "time signal: derivative not available (sampled data without "
            "declared smoothness)");
    const std::size_t n = samples_.size();
    const std::size_t m = static_cast<std::size_t>(order) + 2;  // stencil size
    if (n < m)
        throw std::invalid_argument(
            "time signal: too few samples for a derivative of order " +
            std::to_string(order));
    const double tol = 1e-9 * horizon_;
    if (t < -tol || t > horizon_ + tol)
        throw std::domain_error("time signal: t outside the sampled range [0, T]");
    const double s = std::clamp(t, 0.0, horizon_);
    const double h = horizon_ / static_cast<double>(n - 1);

    // Window of the m nodes nearest to t.
    long i0 = std::lround(s / h) - static_cast<long>(m) / 2;
    i0 = std::clamp(i0, 0L, static_cast<long>(n - m));

    // Newton divided differences on nodes shifted by s, so the polynomial is
    // expanded around the query point and the derivative is read off a single
    // coefficient. Exact for polynomial samples up to degree m-1 = order+1.
    std::array<double, 5> u{}, c{};
    for (std::size_t j = 0; j < m; ++j) {
        u[j] = static_cast<double>(i0 + static_cast<long>(j)) * h - s;
        c[j] = samples_[static_cast<std::size_t>(i0) + j];
    }
    for (std::size_t lvl = 1; lvl < m; ++lvl)
        for (std::size_t j = m - 1; j >= lvl; --j)
            c[j] = (c[j] - c[j - 1]) / (u[j] - u[j - lvl]);

    // Expand the Newton form to monomial coefficients in (t' - t).
    std::array<double, 5> a{};
    a[0] = c[m - 1];
    std::size_t deg = 0;
    for (std::size_t jj = m - 1; jj-- > 0;) {
        ++deg;
        a[deg] = a[deg - 1];
        for (std::size_t i = deg - 1; i >= 1; --i) a[i] = a[i - 1] - u[jj] * a[i];
        a[0] = c[jj] - u[jj] * a[0];
    }
    double fact = 1.0;
    for (int i = 2; i <= order; ++i) fact *= static_cast<double>(i);
    return fact * a[static_cast<std::size_t>(order)];
}

bool TimeSignal::is_zero() const {
    if (kind_ == Kind::closed_form)
        return expr_.is_constant() && expr_.constant_value() == 0.0;
    return std::all_of(samples_.begin(), samples_.end(),
                       [](double v) { return v == 0.0; });
}

bool TimeSignal::time_constant() const {
    if (kind_ == Kind::closed_form) return !expr_.depends_on('t');
    const auto [lo, hi] = std::minmax_element(samples_.begin(), samples_.end());
    return *lo == *hi;
}

const Expression& TimeSignal::expression() const {
    if (kind_ != Kind::closed_form)
        throw std::logic_error("time signal: expression() requires a closed form");
    return expr_;
}

double signal_derivative(const TimeSignal& sig, int order, double t) {
    return sig.derivative(order, t);
}

// ---------------------------------------------------------------------------
// SpatialField
// ---------------------------------------------------------------------------

SpatialField::SpatialField() = default;

SpatialField SpatialField::closed_form(const std::string& expr_text, int dim) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("spatial field: dim must be 1 or 2");
    SpatialField f;
    f.kind_ = Kind::closed_form;
    f.expr_ = parse_expression(expr_text, dim == 1 ? "x" : "xy");
    return f;
}

SpatialField SpatialField::from_samples(std::vector<double> nodal_values) {
    if (nodal_values.size() < 2)
        throw std::invalid_argument("spatial field: at least two nodal values required");
    for (double v : nodal_values)
        if (!std::isfinite(v))
            throw std::invalid_argument("spatial field: samples must be finite");
    SpatialField f;
    f.kind_ = Kind::samples;
    f.values_ = std::move(nodal_values);
    return f;
}

SpatialField SpatialField::from_modes(std::vector<double> coefficients) {
    if (coefficients.empty())
        throw std::invalid_argument("spatial field: at least one modal coefficient required");
    for (double v : coefficients)
        if (!std::isfinite(v))
            throw std::invalid_argument("spatial field: modal coefficients must be finite");
    SpatialField f;
    f.kind_ = Kind::modal;
    f.values_ = std::move(coefficients);
    return f;
}

bool SpatialField::is_zero() const {
    if (kind_ == Kind::closed_form)
        return expr_.is_constant() && expr_.constant_value() == 0.0;
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return v == 0.0; });
}

double SpatialField::operator()(double x, double y) const {
    if (kind_ != Kind::closed_form)
        throw std::invalid_argument(
            "spatial field: pointwise evaluation requires a closed form");
    return expr_(EvalPoint{0.0, x, y});
}

std::vector<double> SpatialField::on_mesh(const std::vector<double>& nodes,
                                          std::vector<std::string>* warnings) const {
    if (nodes.size() < 2)
        throw std::invalid_argument("spatial field: mesh needs at least two nodes");
    switch (kind_) {
        case Kind::closed_form: {
            std::vector<double> out(nodes.size());
            for (std::size_t i = 0; i < nodes.size(); ++i)
                out[i] = expr_(EvalPoint{0.0, nodes[i], 0.0});
            return out;
        }
        case Kind::samples: {
            if (values_.size() == nodes.size()) return values_;
            const std::string msg =
                "spatial field: " + std::to_string(values_.size()) +
                " samples interpolated linearly onto a mesh of " +
                std::to_string(nodes.size()) + " nodes";
            if (warnings)
                warnings->push_back(msg);
            else
                std::cerr << "warning: " << msg << '\n';
            const double a = nodes.front();
            const double b = nodes.back();
            const std::size_t m = values_.size();
            std::vector<double> out(nodes.size());
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                const double u =
                    (nodes[i] - a) / (b - a) * static_cast<double>(m - 1);
                auto j = static_cast<std::size_t>(std::clamp(
                    std::floor(u), 0.0, static_cast<double>(m - 2)));
                const double w = std::clamp(u - static_cast<double>(j), 0.0, 1.0);
                out[i] = values_[j] * (1.0 - w) + values_[j + 1] * w;
            }
            return out;
        }
        case Kind::modal:
            throw std::invalid_argument(
                "spatial field: modal coefficient data has no pointwise values");
    }
    return {};  // unreachable
}

const std::vector<double>& SpatialField::modes() const {
    if (kind_ != Kind::modal)
        throw std::logic_error("spatial field: modes() requires modal data");
    return values_;
}

const Expression& SpatialField::expression() const {
    if (kind_ != Kind::closed_form)
        throw std::logic_error("spatial field: expression() requires a closed form");
    return expr_;
}

// ---------------------------------------------------------------------------
// SourceTerm
// ---------------------------------------------------------------------------

SourceTerm::SourceTerm() = default;

SourceTerm SourceTerm::separable(TimeSignal g, SpatialField G) {
    if (g.is_zero() || G.is_zero()) return SourceTerm{};
    SourceTerm s;
    s.kind_ = Kind::separable;
    s.g_ = std::move(g);
    s.G_ = std::move(G);
    return s;
}

SourceTerm SourceTerm::general(const std::string& expr_text, int dim) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("source term: dim must be 1 or 2");
    Expression e = parse_expression(expr_text, dim == 1 ? "tx" : "txy");
    if (e.is_constant() && e.constant_value() == 0.0) return SourceTerm{};
    SourceTerm s;
    s.kind_ = Kind::general;
    s.expr_ = std::move(e);
    s.dexpr_[0] = s.expr_.derivative('t');
    s.dexpr_[1] = s.dexpr_[0].derivative('t');
    s.dexpr_[2] = s.dexpr_[1].derivative('t');
    return s;
}

bool SourceTerm::is_zero() const { return kind_ == Kind::zero; }

bool SourceTerm::time_constant() const {
    switch (kind_) {
        case Kind::zero: return true;
        case Kind::separable: return g_.time_constant();
        case Kind::general: return !expr_.depends_on('t');
    }
    return true;
}

bool SourceTerm::derivatives_available() const {
    return kind_ != Kind::separable || g_.derivatives_available();
}

double SourceTerm::operator()(double t, double x, double y) const {
    switch (kind_) {
        case Kind::zero: return 0.0;
        case Kind::separable: return g_(t) * G_(x, y);
        case Kind::general: return expr_(EvalPoint{t, x, y});
    }
    return 0.0;  // unreachable
}

double SourceTerm::time_derivative(int order, double t, double x, double y) const {
    if (order < 1 || order > 3)
        throw std::invalid_argument("source term: derivative order must be 1, 2, or 3");
    switch (kind_) {
        case Kind::zero: return 0.0;
        case Kind::separable: return g_.derivative(order, t) * G_(x, y);
        case Kind::general: return dexpr_[order - 1](EvalPoint{t, x, y});
    }
    return 0.0;  // unreachable
}

const TimeSignal& SourceTerm::time_factor() const { return g_; }
const SpatialField& SourceTerm::space_factor() const { return G_; }

const Expression& SourceTerm::expression() const {
    if (kind_ != Kind::general)
        throw std::logic_error("source term: expression() requires the general form");
    return expr_;
}

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

std::vector<std::string> validate_coefficients(const Domain& domain,
                                               Coefficients& coeffs) {
    std::vector<std::string> errs;
    if (!(domain.x1 > domain.x0) ||
        (domain.dim == 2 && !(domain.y1 > domain.y0))) {
        errs.push_back("[coefficients] (domain is degenerate; positivity scan skipped)");
        return errs;
    }

    struct Scan {
        const char* name;
        const Expression* e;
        double min = std::numeric_limits<double>::infinity();
        double max = -std::numeric_limits<double>::infinity();
        bool finite = true;
    };
    std::array<Scan, 3> scans{Scan{"rho", &coeffs.rho}, Scan{"a", &coeffs.a},
                              Scan{"q", &coeffs.q}};

    const int nx = domain.dim == 1 ? 4096 : 256;
    const int ny = domain.dim == 1 ? 0 : 256;
    for (auto& s : scans) {
        for (int i = 0; i <= nx; ++i) {
            const double x =
                domain.x0 + (domain.x1 - domain.x0) * static_cast<double>(i) /
                                static_cast<double>(nx);
            for (int j = 0; j <= ny; ++j) {
                const double y =
                    domain.dim == 1
                        ? 0.0
                        : domain.y0 + (domain.y1 - domain.y0) *
                                          static_cast<double>(j) /
                                          static_cast<double>(ny);
                const double v = (*s.e)(EvalPoint{0.0, x, y});
                if (!std::isfinite(v)) {
                    s.finite = false;
                    break;
                }
                s.min = std::min(s.min, v);
                s.max = std::max(s.max, v);
            }
            if (!s.finite) break;
        }
    }

    auto field_err = [&errs](const char* name, const std::string& msg) {
        errs.push_back(std::string("[coefficients] ") + name + ": " + msg);
    };
    for (const auto& s : scans)
        if (!s.finite) field_err(s.name, "must be finite on the domain");

    if (scans[0].finite) {
        coeffs.rho_min = scans[0].min;
        coeffs.rho_max = scans[0].max;
        if (!(scans[0].min > 0.0))
            field_err("rho",
                      "density must be bounded below by a positive constant "
                      "(sampled min " + fmt_double(scans[0].min) + ")");
    }
    if (scans[1].finite) {
        coeffs.a_min = scans[1].min;
        if (!(scans[1].min > 0.0))
            field_err("a",
                      "ellipticity violated: the diffusivity must satisfy "
                      "a >= c > 0 on the domain (sampled min " +
                          fmt_double(scans[1].min) + ")");
    }
    if (scans[2].finite) {
        coeffs.q_min = scans[2].min;
        if (!(scans[2].min > 0.0))
            field_err("q",
                      "positivity violated: the potential must be bounded "
                      "below by a constant q0 > 0 on the domain (sampled min " +
                          fmt_double(scans[2].min) + ")");
    }
    return errs;
}

// ---------------------------------------------------------------------------
// Config scanning
// ---------------------------------------------------------------------------

namespace {

struct RawEntry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
    bool used = false;
};

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

std::vector<RawEntry> scan_config(const std::string& text) {
    std::vector<RawEntry> entries;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                parse_fail(lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!is_identifier(section))
                parse_fail(lineno, "invalid section name '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            parse_fail(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!is_identifier(key))
            parse_fail(lineno, "invalid key '" + key + "'");
        if (section.empty())
            parse_fail(lineno, "key '" + key + "' appears outside any [section]");
        for (const auto& e : entries)
            if (e.section == section && e.key == key)
                parse_fail(lineno, "duplicate key '" + key + "' in [" + section + "]");
        entries.push_back({section, key, value, lineno, false});
    }
    return entries;
}

struct Loader {
    std::vector<RawEntry> entries;
    std::vector<std::string> errs;

    RawEntry* take(const std::string& sec, const std::string& key) {
        for (auto& e : entries)
            if (e.section == sec && e.key == key) {
                e.used = true;
                return &e;
            }
        return nullptr;
    }

    void err(const std::string& sec, const std::string& key, const std::string& msg) {
        errs.push_back("[" + sec + "] " + key + ": " + msg);
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// load_problem
// ---------------------------------------------------------------------------

Problem load_problem(const std::string& config_text) {
    Loader L{scan_config(config_text), {}};
    Problem p;

    // --- [problem] ---------------------------------------------------------
    bool alpha_ok = false;
    if (RawEntry* e = L.take("problem", "alpha")) {
        double v = 0.0;
        if (!strict_double(e->value, v)) {
            L.err("problem", "alpha", "expected a number, got '" + e->value + "'");
        } else if (v == 1.0) {
            L.err("problem", "alpha",
                  "alpha=1 excluded; admissible orders lie in (0,1) and (1,2)");
        } else if (v <= 0.0 || v >= 2.0) {
            L.err("problem", "alpha",
                  "must lie in (0,1) or (1,2), got " + fmt_double(v));
        } else {
            p.alpha = v;
            alpha_ok = true;
        }
    } else {
        L.err("problem", "alpha", "required");
    }

    if (RawEntry* e = L.take("problem", "chi")) {
        const std::string v = lower(e->value);
        if (v == "0" || v == "dirichlet") p.chi = 0;
        else if (v == "1" || v == "neumann") p.chi = 1;
        else L.err("problem", "chi", "must be 0 (dirichlet) or 1 (neumann)");
    }

    bool T_ok = true;
    if (RawEntry* e = L.take("problem", "T")) {
        double v = 0.0;
        if (!strict_double(e->value, v)) {
            L.err("problem", "T", "expected a number, got '" + e->value + "'");
            T_ok = false;
        } else if (!(v > 0.0)) {
            L.err("problem", "T", "horizon must be > 0");
            T_ok = false;
        } else {
            p.T = v;
        }
    }

    // --- [domain] -----------------------------------------------------------
    bool domain_ok = true;
    if (RawEntry* e = L.take("domain", "dim")) {
        long v = 0;
        if (!strict_int(e->value, v) || (v != 1 && v != 2)) {
            L.err("domain", "dim", "must be 1 or 2");
            domain_ok = false;
        } else {
            p.domain.dim = static_cast<int>(v);
        }
    }
    if (RawEntry* e = L.take("domain", "x")) {
        std::vector<double> v;
        if (!strict_double_list(e->value, v) || v.size() != 2 || !(v[0] < v[1])) {
            L.err("domain", "x", "expected two values a, b with a < b");
            domain_ok = false;
        } else {
            p.domain.x0 = v[0];
            p.domain.x1 = v[1];
        }
    }
    if (RawEntry* e = L.take("domain", "y")) {
        if (p.domain.dim == 1) {
            L.err("domain", "y", "only valid for dim = 2");
        } else {
            std::vector<double> v;
            if (!strict_double_list(e->value, v) || v.size() != 2 || !(v[0] < v[1])) {
                L.err("domain", "y", "expected two values a, b with a < b");
                domain_ok = false;
            } else {
                p.domain.y0 = v[0];
                p.domain.y1 = v[1];
            }
        }
    }

    const int dim = p.domain.dim;
    const std::string space_vars = dim == 1 ? "x" : "xy";

    // --- [coefficients] -----------------------------------------------------
    bool coeffs_ok = true;
    for (const char* name : {"rho", "a", "q"}) {
        RawEntry* e = L.take("coefficients", name);
        if (!e) continue;
        try {
            Expression expr = parse_expression(e->value, space_vars);
            if (std::string(name) == "rho") p.coeffs.rho = expr;
            else if (std::string(name) == "a") p.coeffs.a = expr;
            else p.coeffs.q = expr;
        } catch (const std::invalid_argument& ex) {
            L.err("coefficients", name, ex.what());
            coeffs_ok = false;
        }
    }
    if (domain_ok && coeffs_ok) {
        auto cerrs = validate_coefficients(p.domain, p.coeffs);
        L.errs.insert(L.errs.end(), cerrs.begin(), cerrs.end());
    }

    // --- helpers for signals and fields -------------------------------------

    // Closed-form-or-samples time signal under keys  <base>, <base>_samples,
    // <base>_interp, <base>_smooth.  Returns nullopt when no key is present
    // or construction failed; `present` reports whether any key appeared.
    auto load_signal = [&](const std::string& sec, const std::string& base,
                           bool& present) -> std::optional<TimeSignal> {
        RawEntry* e_expr = L.take(sec, base);
        RawEntry* e_samp = L.take(sec, base + "_samples");
        RawEntry* e_intp = L.take(sec, base + "_interp");
        RawEntry* e_smth = L.take(sec, base + "_smooth");
        present = e_expr || e_samp || e_intp || e_smth;
        if (e_expr && e_samp) {
            L.err(sec, base, "give either a closed form or samples, not both");
            return std::nullopt;
        }
        if ((e_intp || e_smth) && !e_samp) {
            L.err(sec, base + "_interp",
                  "sampling options require " + base + "_samples");
            return std::nullopt;
        }
        if (e_expr) {
            try {
                TimeSignal s = TimeSignal::closed_form(e_expr->value);
                if (T_ok) {
                    for (int i = 0; i <= 640; ++i) {
                        const double t = p.T * static_cast<double>(i) / 640.0;
                        if (!std::isfinite(s(t))) {
                            L.err(sec, base,
                                  "not finite on [0, T] (value at t = " +
                                      fmt_double(t) + ")");
                            return std::nullopt;
                        }
                    }
                }
                return s;
            } catch (const std::invalid_argument& ex) {
                L.err(sec, base, ex.what());
                return std::nullopt;
            }
        }
        if (e_samp) {
            std::vector<double> vals;
            if (!strict_double_list(e_samp->value, vals)) {
                L.err(sec, base + "_samples", "expected a comma-separated list of finite numbers");
                return std::nullopt;
            }
            long interp = 1;
            if (e_intp && (!strict_int(e_intp->value, interp) ||
                           (interp != 0 && interp != 1))) {
                L.err(sec, base + "_interp", "must be 0 or 1");
                return std::nullopt;
            }
            bool smooth = false;
            if (e_smth && !strict_bool(e_smth->value, smooth)) {
                L.err(sec, base + "_smooth", "must be a boolean");
                return std::nullopt;
            }
            if (!T_ok) return std::nullopt;
            try {
                return TimeSignal::from_samples(std::move(vals), p.T,
                                                static_cast<int>(interp), smooth);
            } catch (const std::invalid_argument& ex) {
                L.err(sec, base + "_samples", ex.what());
                return std::nullopt;
            }
        }
        return std::nullopt;
    };

    // Spatial field under keys <base>, <base>_samples, <base>_modes.
    auto load_field = [&](const std::string& sec, const std::string& base,
                          bool& present) -> std::optional<SpatialField> {
        RawEntry* e_expr = L.take(sec, base);
        RawEntry* e_samp = L.take(sec, base + "_samples");
        RawEntry* e_mode = L.take(sec, base + "_modes");
        present = e_expr || e_samp || e_mode;
        const int forms = (e_expr ? 1 : 0) + (e_samp ? 1 : 0) + (e_mode ? 1 : 0);
        if (forms > 1) {
            L.err(sec, base,
                  "give exactly one of " + base + ", " + base + "_samples, " +
                      base + "_modes");
            return std::nullopt;
        }
        if (e_expr) {
            try {
                SpatialField f = SpatialField::closed_form(e_expr->value, dim);
                if (domain_ok) {
                    const int nx = dim == 1 ? 256 : 64;
                    const int ny = dim == 1 ? 0 : 64;
                    for (int i = 0; i <= nx; ++i) {
                        const double x = p.domain.x0 +
                                         (p.domain.x1 - p.domain.x0) *
                                             static_cast<double>(i) /
                                             static_cast<double>(nx);
                        for (int j = 0; j <= ny; ++j) {
                            const double y =
                                dim == 1 ? 0.0
                                         : p.domain.y0 +
                                               (p.domain.y1 - p.domain.y0) *
                                                   static_cast<double>(j) /
                                                   static_cast<double>(ny);
                            if (!std::isfinite(f(x, y))) {
                                L.err(sec, base, "not finite on the domain");
                                return std::nullopt;
                            }
                        }
                    }
                }
                return f;
            } catch (const std::invalid_argument& ex) {
                L.err(sec, base, ex.what());
                return std::nullopt;
            }
        }
        if (e_samp) {
            if (dim == 2) {
                L.err(sec, base + "_samples",
                      "sampled spatial fields are supported on intervals only");
                return std::nullopt;
            }
            std::vector<double> vals;
            if (!strict_double_list(e_samp->value, vals)) {
                L.err(sec, base + "_samples", "expected a comma-separated list of finite numbers");
                return std::nullopt;
            }
            try {
                return SpatialField::from_samples(std::move(vals));
            } catch (const std::invalid_argument& ex) {
                L.err(sec, base + "_samples", ex.what());
                return std::nullopt;
            }
        }
        if (e_mode) {
            std::vector<double> vals;
            if (!strict_double_list(e_mode->value, vals)) {
                L.err(sec, base + "_modes", "expected a comma-separated list of finite numbers");
                return std::nullopt;
            }
            try {
                return SpatialField::from_modes(std::move(vals));
            } catch (const std::invalid_argument& ex) {
                L.err(sec, base + "_modes", ex.what());
                return std::nullopt;
            }
        }
        return std::nullopt;
    };

    // --- [boundary] ---------------------------------------------------------
    static const char* kEdgeNames[4] = {"left", "right", "bottom", "top"};
    const int edges = p.domain.boundary_count();
    p.f.assign(static_cast<std::size_t>(edges), TimeSignal{});
    for (int i = 0; i < 4; ++i) {
        const std::string name = kEdgeNames[i];
        if (i >= edges) {
            // Reject rectangle-only edges on intervals.
            for (const std::string suffix : {"", "_samples", "_interp", "_smooth"})
                if (L.take("boundary", name + suffix))
                    L.err("boundary", name + suffix,
                          "only valid on rectangle domains (dim = 2)");
            continue;
        }
        bool present = false;
        if (auto s = load_signal("boundary", name, present))
            p.f[static_cast<std::size_t>(i)] = std::move(*s);
    }

    // --- [source] ------------------------------------------------------------
    {
        RawEntry* e_F = L.take("source", "F");
        const bool sep_any = [&] {
            for (const char* k :
                 {"g", "g_samples", "g_interp", "g_smooth", "G", "G_samples", "G_modes"})
                for (const auto& e : L.entries)
                    if (e.section == "source" && e.key == k) return true;
            return false;
        }();
        if (e_F && sep_any) {
            L.err("source", "F", "the general form F and the separable g/G form are mutually exclusive");
            for (const char* k :
                 {"g", "g_samples", "g_interp", "g_smooth", "G", "G_samples", "G_modes"})
                L.take("source", k);  // consume so they are not re-reported
        } else if (e_F) {
            try {
                SourceTerm F = SourceTerm::general(e_F->value, dim);
                bool finite = true;
                if (T_ok && domain_ok && !F.is_zero()) {
                    const int nt = 64, nx = 64, ny = dim == 1 ? 0 : 32;
                    for (int it = 0; it <= nt && finite; ++it) {
                        const double t = p.T * static_cast<double>(it) / nt;
                        for (int ix = 0; ix <= nx && finite; ++ix) {
                            const double x = p.domain.x0 +
                                             (p.domain.x1 - p.domain.x0) *
                                                 static_cast<double>(ix) / nx;
                            for (int iy = 0; iy <= ny && finite; ++iy) {
                                const double y =
                                    dim == 1 ? 0.0
                                             : p.domain.y0 +
                                                   (p.domain.y1 - p.domain.y0) *
                                                       static_cast<double>(iy) / ny;
                                if (!std::isfinite(F(t, x, y))) finite = false;
                            }
                        }
                    }
                }
                if (!finite)
                    L.err("source", "F", "not finite on [0, T] x domain");
                else
                    p.F = std::move(F);
            } catch (const std::invalid_argument& ex) {
                L.err("source", "F", ex.what());
            }
        } else if (sep_any) {
            bool g_present = false, G_present = false;
            auto g = load_signal("source", "g", g_present);
            auto G = load_field("source", "G", G_present);
            if (!g_present)
                L.err("source", "g", "separable source requires both g and G");
            if (!G_present)
                L.err("source", "G", "separable source requires both g and G");
            if (g && G) p.F = SourceTerm::separable(std::move(*g), std::move(*G));
        }
    }

    // --- [initial] ------------------------------------------------------------
    {
        bool u0_present = false;
        if (auto f = load_field("initial", "u0", u0_present))
            p.u0 = std::move(*f);

        bool u1_present = false;
        auto u1 = load_field("initial", "u1", u1_present);
        if (alpha_ok && p.alpha > 1.0 && !u1_present)
            L.err("initial", "u1",
                  "u1 required (second initial condition missing for alpha > 1)");
        if (alpha_ok && p.alpha < 1.0 && u1_present)
            L.err("initial", "u1",
                  "must be absent for alpha in (0,1) (only one initial condition)");
        if (u1 && (!alpha_ok || p.alpha > 1.0)) p.u1 = std::move(*u1);
    }

    // --- unknown keys / sections ----------------------------------------------
    static const char* kSections[6] = {"problem", "domain", "coefficients",
                                       "boundary", "source", "initial"};
    for (const auto& e : L.entries) {
        if (e.used) continue;
        const bool known_section =
            std::any_of(std::begin(kSections), std::end(kSections),
                        [&](const char* s) { return e.section == s; });
        L.err(e.section, e.key,
              known_section ? "unknown key"
                            : "unknown section '" + e.section + "'");
    }

    if (!L.errs.empty()) {
        std::string msg = "invalid problem config:";
        for (const auto& m : L.errs) msg += "\n  " + m;
        throw std::invalid_argument(msg);
    }
    return p;
}

Problem load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open problem config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_problem(ss.str());
}

// ---------------------------------------------------------------------------
// serialize
// ---------------------------------------------------------------------------

namespace {

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(v[i]);
    }
    return out;
}

void emit_signal(std::string& out, const std::string& name, const TimeSignal& s) {
    if (s.kind() == TimeSignal::Kind::closed_form) {
        out += name + " = " + s.expression().source() + "\n";
        return;
    }
    out += name + "_samples = " + join_doubles(s.samples()) + "\n";
    out += name + "_interp = " + std::to_string(s.interp_order()) + "\n";
    out += name + "_smooth = " + (s.declared_smooth() ? "true" : "false") + "\n";
}

void emit_field(std::string& out, const std::string& name, const SpatialField& f) {
    switch (f.kind()) {
        case SpatialField::Kind::closed_form:
            out += name + " = " + f.expression().source() + "\n";
            return;
        case SpatialField::Kind::samples:
            out += name + "_samples = " + join_doubles(f.samples()) + "\n";
            return;
        case SpatialField::Kind::modal:
            out += name + "_modes = " + join_doubles(f.modes()) + "\n";
            return;
    }
}

}  // namespace

std::string serialize(const Problem& p) {
    std::string out;
    out += "[problem]\n";
    out += "alpha = " + fmt_double(p.alpha) + "\n";
    out += "chi = " + std::to_string(p.chi) + "\n";
    out += "T = " + fmt_double(p.T) + "\n\n";

    out += "[domain]\n";
    out += "dim = " + std::to_string(p.domain.dim) + "\n";
    out += "x = " + fmt_double(p.domain.x0) + ", " + fmt_double(p.domain.x1) + "\n";
    if (p.domain.dim == 2)
        out += "y = " + fmt_double(p.domain.y0) + ", " + fmt_double(p.domain.y1) + "\n";
    out += "\n[coefficients]\n";
    out += "rho = " + p.coeffs.rho.source() + "\n";
    out += "a = " + p.coeffs.a.source() + "\n";
    out += "q = " + p.coeffs.q.source() + "\n";

    out += "\n[boundary]\n";
    static const char* kEdgeNames[4] = {"left", "right", "bottom", "top"};
    for (std::size_t i = 0; i < p.f.size(); ++i)
        emit_signal(out, kEdgeNames[i], p.f[i]);

    out += "\n[source]\n";
    switch (p.F.kind()) {
        case SourceTerm::Kind::zero:
            out += "F = 0\n";
            break;
        case SourceTerm::Kind::general:
            out += "F = " + p.F.expression().source() + "\n";
            break;
        case SourceTerm::Kind::separable:
            emit_signal(out, "g", p.F.time_factor());
            emit_field(out, "G", p.F.space_factor());
            break;
    }

    out += "\n[initial]\n";
    emit_field(out, "u0", p.u0);
    if (p.u1) emit_field(out, "u1", *p.u1);
    return out;
}

}  // namespace fracspec

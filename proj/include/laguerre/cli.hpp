#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ensembles.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "identities.hpp"
#include "moments.hpp"
#include "polynomial.hpp"
#include "rates.hpp"
#include "spectral.hpp"

namespace laguerre::cli {

/// Bad command line or config file; maps to exit status 2.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Output could not be written; maps to exit status 2.
class IoError : public Error {
public:
    using Error::Error;
};

enum class Format { Csv, Json };

/// 17 significant digits; non-finite values print as nan / inf / -inf.
inline std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Flag value parsers

namespace detail {

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : s_(text) {}

    Polynomial parse() {
        skip();
        if (pos_ == s_.size()) fail("empty polynomial");
        std::vector<double> coeffs;
        bool first = true;
        while (pos_ < s_.size()) {
            double sign = 1.0;
            if (peek() == '+' || peek() == '-') {
                sign = get() == '-' ? -1.0 : 1.0;
                skip();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            const auto [c, power] = term();
            if (coeffs.size() <= power) coeffs.resize(power + 1, 0.0);
            coeffs[power] += sign * c;
            first = false;
            skip();
        }
        return Polynomial(std::move(coeffs));
    }

private:
    std::pair<double, std::size_t> term() {
        double c = 1.0;
        bool have_number = false;
        if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
            c = number();
            have_number = true;
            skip();
            if (peek() == '*') {
                get();
                skip();
                if (peek() != 'x') fail("expected 'x' after '*'");
            }
        }
        if (peek() != 'x') {
            if (!have_number) fail("expected a number or 'x'");
            return {c, 0};
        }
        get();
        skip();
        std::size_t power = 1;
        if (peek() == '^') {
            get();
            skip();
            const std::size_t begin = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (begin == pos_) fail("expected an exponent after '^'");
            const auto res = std::from_chars(s_.data() + begin, s_.data() + pos_, power);
            if (res.ec != std::errc() || power > 64) fail("exponent out of range");
        }
        return {c, power};
    }

    double number() {
        double v = 0.0;
        const auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (res.ec != std::errc() || !std::isfinite(v)) fail("malformed number");
        pos_ = static_cast<std::size_t>(res.ptr - s_.data());
        return v;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return s_[pos_++]; }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw UsageError("cannot parse polynomial '" + std::string(s_) + "' at offset " + std::to_string(pos_) +
                         ": " + what);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline double parse_real(std::string_view text, const std::string& what) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw UsageError("malformed " + what + " '" + std::string(text) + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t at = text.find(sep, start);
        parts.push_back(text.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
        if (at == std::string_view::npos) break;
        start = at + 1;
    }
    return parts;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Polynomial such as "x^3" or "1+2x-0.5x^2"; "3*x" is also accepted.
inline Polynomial parse_polynomial(std::string_view text) { return detail::PolyParser(text).parse(); }

/// "pow:<a>:<c>" or "lin:<tau>".
inline GammaRule parse_gamma_rule(std::string_view text) {
    const auto parts = detail::split(text, ':');
    if (parts[0] == "pow" && parts.size() == 3)
        return PowerLaw{detail::parse_real(parts[1], "exponent"), detail::parse_real(parts[2], "coefficient")};
    if (parts[0] == "lin" && parts.size() == 2) return Linear{detail::parse_real(parts[1], "tau")};
    throw UsageError("gamma rule must be pow:<a>:<c> or lin:<tau>, got '" + std::string(text) + "'");
}

/// "<location>:<mass>".
inline Atom parse_atom(std::string_view text) {
    const auto parts = detail::split(text, ':');
    if (parts.size() != 2) throw UsageError("atom must be <location>:<mass>, got '" + std::string(text) + "'");
    return {detail::parse_real(parts[0], "atom location"), detail::parse_real(parts[1], "atom mass")};
}

/// Comma-separated reals "m1,m2,...".
inline MomentSequence parse_moments(std::string_view text) {
    std::vector<double> v;
    for (auto part : detail::split(text, ',')) v.push_back(detail::parse_real(detail::trim(part), "moment"));
    try {
        return MomentSequence(std::move(v));
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

// ---------------------------------------------------------------------------
// Config file

/// Flat "key = value" lines; '#' starts a comment; keys are flag names with
/// or without the leading "--".
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(std::string_view(body).substr(0, eq));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
        entries.emplace_back(std::move(key), detail::trim(std::string_view(body).substr(eq + 1)));
    }
    return entries;
}

/// Removes "--config <path>" from args and appends config entries whose flag
/// is not already on the command line.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a path");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!path) return args;
    auto given = [&](const std::string& key) {
        const std::string flag = "--" + key;
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    for (const auto& [key, value] : read_config(*path)) {
        if (given(key)) continue;
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

// ---------------------------------------------------------------------------
// Output

inline const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> columns{
        "statistic",      "n",           "beta",    "gamma",         "zeta_or_xi", "replicates", "predicted_mean",
        "sample_mean",    "se_mean",     "z_score", "predicted_var", "sample_var", "verdict"};
    return columns;
}

inline std::string report_csv(const ExperimentReport& r) {
    std::string out;
    for (std::size_t i = 0; i < report_columns().size(); ++i) {
        if (i) out += ',';
        out += report_columns()[i];
    }
    out += '\n';
    out += r.statistic + ',' + std::to_string(r.n) + ',' + format17(r.beta) + ',' + format17(r.gamma) + ',' +
           format17(r.zeta_or_xi) + ',' + std::to_string(r.replicates) + ',' + format17(r.predicted_mean) + ',' +
           format17(r.sample_mean) + ',' + format17(r.se_mean) + ',' + format17(r.z_score) + ',' +
           format17(r.predicted_var) + ',' + format17(r.sample_var) + ',' + (r.verdict ? "pass" : "fail") + '\n';
    return out;
}

/// Same fields as the CSV plus verdict_rule and diagnostics. Non-finite reals
/// become null.
inline nlohmann::ordered_json report_json(const ExperimentReport& r) {
    auto real = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(); };
    nlohmann::ordered_json j;
    j["statistic"] = r.statistic;
    j["n"] = r.n;
    j["beta"] = real(r.beta);
    j["gamma"] = real(r.gamma);
    j["zeta_or_xi"] = real(r.zeta_or_xi);
    j["replicates"] = r.replicates;
    j["predicted_mean"] = real(r.predicted_mean);
    j["sample_mean"] = real(r.sample_mean);
    j["se_mean"] = real(r.se_mean);
    j["z_score"] = real(r.z_score);
    j["predicted_var"] = real(r.predicted_var);
    j["sample_var"] = real(r.sample_var);
    j["verdict"] = r.verdict ? "pass" : "fail";
    j["verdict_rule"] = r.verdict_rule;
    auto diag = nlohmann::ordered_json::object();
    for (const auto& [name, value] : r.diagnostics) diag[name] = real(value);
    j["diagnostics"] = diag;
    return j;
}

inline std::string render_report(const ExperimentReport& r, Format format) {
    if (format == Format::Csv) return report_csv(r);
    return report_json(r).dump(2) + '\n';
}

/// Writes `payload` to `path`, or to `out` when path is empty or "-".
inline void write_payload(const std::string& payload, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << payload;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    file << payload;
    file.flush();
    if (!file) throw IoError("failed writing '" + path + "'");
}

inline void emit_report(const ExperimentReport& r, Format format, const std::string& path, std::ostream& out) {
    write_payload(render_report(r, format), path, out);
}

/// Equal-width bin counts over [min, max]; the maximum falls in the last bin.
/// Constant samples collapse to a single bin.
inline std::vector<std::pair<double, std::size_t>> histogram(const std::vector<double>& samples, long long bins) {
    if (bins < 1) throw UsageError("histogram needs at least one bin");
    if (samples.empty()) throw InvalidInput("histogram of an empty sample");
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidInput("histogram of non-finite samples");
    if (lo == hi) return {{lo, samples.size()}};
    const auto count = static_cast<std::size_t>(bins);
    const double width = (hi - lo) / static_cast<double>(count);
    std::vector<std::pair<double, std::size_t>> h(count);
    for (std::size_t b = 0; b < count; ++b) h[b] = {lo + (static_cast<double>(b) + 0.5) * width, 0};
    for (double x : samples) {
        auto b = static_cast<std::size_t>((x - lo) / width);
        h[std::min(b, count - 1)].second += 1;
    }
    return h;
}

inline std::string render_histogram(const std::vector<double>& samples, long long bins) {
    std::string out;
    for (const auto& [center, n] : histogram(samples, bins)) out += format17(center) + ' ' + std::to_string(n) + '\n';
    return out;
}

inline void emit_histogram(const std::vector<double>& samples, long long bins, const std::string& path,
                           std::ostream& out) {
    write_payload(render_histogram(samples, bins), path, out);
}

// ---------------------------------------------------------------------------
// Dispatch

namespace detail {

struct CommonFlags {
    long long n = 100;
    double beta = 2.0;
    std::string gamma_rule;
    std::optional<double> gamma;
    std::optional<std::uint64_t> seed;
    long long replicates = 1000;
    unsigned workers = 1;
    std::string mode = "standard";
    std::string route = "operator";
    std::string format = "csv";
    std::string output;
    std::string histogram;
    long long bins = 20;
    std::optional<std::string> poly;
    std::optional<long long> moment;
    std::optional<double> bn;
    VerdictThresholds thresholds;
};

inline RescalingMode parse_mode(const std::string& s) {
    if (s == "standard") return RescalingMode::Standard;
    if (s == "shifted") return RescalingMode::Shifted;
    return RescalingMode::None;
}

inline std::size_t positive(long long v, const std::string& what) {
    if (v < 1) throw InvalidParameter(what + " must be a positive integer, got " + std::to_string(v));
    return static_cast<std::size_t>(v);
}

inline void add_ensemble_flags(CLI::App* app, CommonFlags& f, bool with_rule_default) {
    app->add_option("--n", f.n, "matrix size")->capture_default_str();
    app->add_option("--beta", f.beta, "Dyson index beta > 0")->capture_default_str();
    auto* rule = app->add_option("--gamma-rule", f.gamma_rule, "pow:<a>:<c> or lin:<tau>");
    if (with_rule_default) rule->default_str("pow:2:1");
    app->add_option("--seed", f.seed, "master seed (required)")->required();
    app->add_option("--mode", f.mode, "centering")
        ->check(CLI::IsMember({"standard", "shifted", "none"}))
        ->capture_default_str();
    app->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app->add_option("--output", f.output, "output path (default: standard output)");
}

inline void add_experiment_flags(CLI::App* app, CommonFlags& f) {
    add_ensemble_flags(app, f, true);
    app->add_option("--replicates", f.replicates, "Monte Carlo replicates")->capture_default_str();
    app->add_option("--workers", f.workers, "worker threads")->capture_default_str();
    app->add_option("--route", f.route, "moment route")
        ->check(CLI::IsMember({"operator", "eigen"}))
        ->capture_default_str();
    app->add_option("--histogram", f.histogram, "write a histogram of the replicate statistic here");
    app->add_option("--bins", f.bins, "histogram bins")->capture_default_str();
    app->add_option("--mean-band", f.thresholds.mean_band_se, "mean band in standard errors")->capture_default_str();
    app->add_option("--var-low", f.thresholds.variance_ratio_low, "lower variance ratio")->capture_default_str();
    app->add_option("--var-high", f.thresholds.variance_ratio_high, "upper variance ratio")->capture_default_str();
    app->add_option("--bias-allowance", f.thresholds.bias_allowance, "allowance c in c/sqrt(n)")
        ->capture_default_str();
    app->add_option("--rel-tol", f.thresholds.relative_tolerance, "relative tolerance")->capture_default_str();
}

inline ExperimentConfig make_config(const CommonFlags& f, const std::string& default_rule) {
    ExperimentConfig c;
    c.n = positive(f.n, "n");
    c.beta = f.beta;
    c.gamma_rule = parse_gamma_rule(f.gamma_rule.empty() ? default_rule : f.gamma_rule);
    c.replicates = positive(f.replicates, "replicates");
    c.master_seed = *f.seed;
    c.mode = parse_mode(f.mode);
    c.workers = std::max(1u, f.workers);
    c.route = f.route == "eigen" ? MomentRoute::Eigen : MomentRoute::Operator;
    c.thresholds = f.thresholds;
    c.b_n = f.bn;
    if (f.poly && f.moment) throw UsageError("give either --poly or --moment, not both");
    if (f.poly) {
        c.statistic = parse_polynomial(*f.poly);
    } else if (f.moment) {
        c.statistic = MomentIndex{positive(*f.moment, "moment")};
    } else {
        throw UsageError("a statistic is required (--poly or --moment)");
    }
    // Validates beta and gamma early so parameter errors surface before sampling.
    (void)c.params();
    return c;
}

inline std::string sample_csv(const JacobiCoefficients& j) {
    std::string out = "k,diag,offdiag\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
        out += std::to_string(k + 1) + ',' + format17(j.diag()[k]) + ',';
        if (k < j.offdiag().size()) out += format17(j.offdiag()[k]);
        out += '\n';
    }
    return out;
}

inline std::string measure_csv(const SpectralMeasure& mu) {
    std::string out = "i,atom,weight\n";
    for (std::size_t i = 0; i < mu.atoms().size(); ++i)
        out += std::to_string(i + 1) + ',' + format17(mu.atoms()[i]) + ',' + format17(mu.weights()[i]) + '\n';
    return out;
}

inline std::string rate_payload(const std::string& kind, const RateValue& v, Format format) {
    if (format == Format::Json) {
        nlohmann::ordered_json j;
        j["kind"] = kind;
        j["value"] = v.is_infinite() ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(v.value());
        return j.dump(2) + '\n';
    }
    return "kind,value\n" + kind + ',' + (v.is_infinite() ? std::string("inf") : format17(v.value())) + '\n';
}

inline std::function<double(double)> named_density(const std::string& name) {
    if (name == "semicircle") return semicircle_density;
    if (name == "arcsine") return arcsine_density;
    throw UsageError("unknown density '" + name + "' (semicircle or arcsine)");
}

}  // namespace detail

/// Runs one invocation. `args` excludes the program name. Payloads go to
/// `out`, diagnostics to `err`. Returns 0 on success, 1 when a statistical
/// verdict or identity check fails, 2 on usage, parameter or I/O errors.
inline int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Laguerre ensemble spectral-measure experiments", "laguerre"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "show help for all subcommands");

    detail::CommonFlags f;

    auto* sample = app.add_subcommand("sample", "sample one rescaled Jacobi matrix or its spectral measure");
    detail::add_ensemble_flags(sample, f, false);
    sample->add_option("--gamma", f.gamma, "explicit gamma (overrides --gamma-rule)");
    std::string what = "jacobi";
    sample->add_option("--what", what, "jacobi or measure")
        ->check(CLI::IsMember({"jacobi", "measure"}))
        ->capture_default_str();

    auto* moments = app.add_subcommand("moments", "average m_k of the spectral measure against the semicircle");
    detail::add_experiment_flags(moments, f);
    moments->add_option("--moment", f.moment, "moment index k");
    moments->add_option("--poly", f.poly, "monomial statistic x^k");

    auto* clt = app.add_subcommand("clt", "Monte Carlo check of the polynomial CLT");
    detail::add_experiment_flags(clt, f);
    clt->add_option("--poly", f.poly, "test polynomial, e.g. 1+2x-0.5x^2");
    clt->add_option("--moment", f.moment, "shorthand for --poly x^k");

    auto* mdp = app.add_subcommand("mdp", "moderate-deviation centering check");
    detail::add_experiment_flags(mdp, f);
    mdp->add_option("--moment", f.moment, "moment index k");
    mdp->add_option("--poly", f.poly, "monomial statistic x^k");
    mdp->add_option("--bn", f.bn, "speed b_n with 1 < b_n < n")->required();

    auto* mp = app.add_subcommand("mp-sanity", "Marchenko-Pastur law in the linear regime");
    detail::add_experiment_flags(mp, f);
    mp->add_option("--moment", f.moment, "moment index k");
    mp->add_option("--poly", f.poly, "monomial statistic x^k");

    auto* rate = app.add_subcommand("rate", "evaluate F, the LDP rate or the MDP rate");
    std::string kind;
    double x = 0.0;
    std::string density = "semicircle";
    std::vector<std::string> atoms;
    std::string moment_list;
    std::optional<std::string> density_poly;
    double xi = 0.0;
    std::string variant = "standard";
    std::string form = "series";
    long long truncation = static_cast<long long>(default_mdp_truncation);
    std::string rate_format = "csv";
    std::string rate_output;
    rate->add_option("--kind", kind, "f, ldp or mdp")->required()->check(CLI::IsMember({"f", "ldp", "mdp"}));
    rate->add_option("--x", x, "argument of F, |x| >= 2");
    rate->add_option("--density", density, "bulk density: semicircle or arcsine")->capture_default_str();
    rate->add_option("--atom", atoms, "atom <location>:<mass>, repeatable");
    rate->add_option("--moments", moment_list, "comma-separated moments m_1,...,m_K of the signed measure");
    rate->add_option("--poly", density_poly, "density g with respect to mu_sc (density form)");
    rate->add_option("--xi", xi, "xi >= 0")->capture_default_str();
    rate->add_option("--variant", variant, "standard or shifted")
        ->check(CLI::IsMember({"standard", "shifted"}))
        ->capture_default_str();
    rate->add_option("--form", form, "series, dinv or density")
        ->check(CLI::IsMember({"series", "dinv", "density"}))
        ->capture_default_str();
    rate->add_option("--truncation", truncation, "series truncation K")->capture_default_str();
    rate->add_option("--format", rate_format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    rate->add_option("--output", rate_output, "output path");

    auto* ident = app.add_subcommand("identities", "exact integer identities of the D matrix");
    long long order = 12;
    std::string ident_output;
    ident->add_option("--order", order, "truncation order K")->capture_default_str();
    ident->add_option("--output", ident_output, "output path");

    try {
        std::vector<std::string> merged = merge_config(args);
        std::reverse(merged.begin(), merged.end());
        app.parse(merged);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        const Format format = f.format == "json" ? Format::Json : Format::Csv;
        auto run_experiment = [&](auto runner, const std::string& default_rule) {
            const ExperimentConfig config = detail::make_config(f, default_rule);
            const ExperimentReport report = runner(config);
            emit_report(report, format, f.output, out);
            if (!f.histogram.empty()) emit_histogram(report.samples, f.bins, f.histogram, out);
            err << report.statistic << ": " << (report.verdict ? "pass" : "fail") << " (" << report.verdict_rule
                << ")\n";
            for (const auto& [name, value] : report.diagnostics) err << "  " << name << " = " << format17(value) << '\n';
            return report.verdict ? 0 : 1;
        };

        if (*sample) {
            const std::size_t n = detail::positive(f.n, "n");
            double gamma;
            if (f.gamma) {
                gamma = *f.gamma;
            } else {
                gamma = parse_gamma_rule(f.gamma_rule.empty() ? "pow:2:1" : f.gamma_rule).gamma(n, f.beta);
            }
            const EnsembleParams params(n, f.beta, gamma, detail::parse_mode(f.mode));
            RngState rng(*f.seed);
            std::string payload;
            if (what == "measure") {
                const auto mu = sample_spectral_measure(rng, params);
                if (format == Format::Json) {
                    nlohmann::ordered_json j;
                    j["atoms"] = mu.atoms();
                    j["weights"] = mu.weights();
                    payload = j.dump(2) + '\n';
                } else {
                    payload = detail::measure_csv(mu);
                }
            } else {
                const auto jac = sample_rescaled_jacobi(rng, params);
                if (format == Format::Json) {
                    nlohmann::ordered_json j;
                    j["diag"] = jac.diag();
                    j["offdiag"] = jac.offdiag();
                    payload = j.dump(2) + '\n';
                } else {
                    payload = detail::sample_csv(jac);
                }
            }
            write_payload(payload, f.output, out);
            return 0;
        }
        if (*moments) return run_experiment(run_moment_convergence, "pow:2:1");
        if (*clt) return run_experiment(run_clt, "pow:2:1");
        if (*mdp) return run_experiment(run_mdp_centering, "pow:2:1");
        if (*mp) return run_experiment(run_mp_sanity, "lin:1");

        if (*rate) {
            const Format rf = rate_format == "json" ? Format::Json : Format::Csv;
            const SignedVariant sv = variant == "shifted" ? SignedVariant::Shifted : SignedVariant::Standard;
            RateValue value = RateValue::finite(0.0);
            if (kind == "f") {
                value = RateValue::finite(f_outlier(x));
            } else if (kind == "ldp") {
                std::vector<Atom> parsed;
                double atom_mass = 0.0;
                for (const auto& a : atoms) {
                    parsed.push_back(parse_atom(a));
                    atom_mass += parsed.back().mass;
                }
                const auto base = detail::named_density(density);
                const double bulk = 1.0 - atom_mass;
                if (!(bulk >= 0.0)) throw InvalidParameter("atom masses exceed 1");
                value = ldp_rate(AcPlusAtoms([base, bulk](double t) { return bulk * base(t); }, std::move(parsed)));
            } else if (form == "density") {
                if (!density_poly) throw UsageError("--form density needs --poly");
                const Polynomial g = parse_polynomial(*density_poly);
                value = mdp_rate_density([g](double t) { return g(t); }, xi, sv);
            } else {
                if (moment_list.empty()) throw UsageError("--kind mdp needs --moments");
                const auto m = parse_moments(moment_list);
                const std::size_t k = detail::positive(truncation, "truncation");
                value = form == "dinv" ? RateValue::finite(mdp_rate_dinv_norm(m, xi, sv, k))
                                       : mdp_rate_series(m, xi, sv, k);
            }
            write_payload(detail::rate_payload(kind, value, rf), rate_output, out);
            return 0;
        }

        if (*ident) {
            const auto checks = run_identities(detail::positive(order, "order"));
            std::string payload = "check,order,passed,max_error\n";
            bool ok = true;
            for (const auto& c : checks) {
                payload += c.name + ',' + std::to_string(c.order) + ',' + (c.passed ? "pass" : "fail") + ',' +
                           format17(c.max_error) + '\n';
                if (!c.passed) err << c.name << ": " << c.detail << '\n';
                ok = ok && c.passed;
            }
            write_payload(payload, ident_output, out);
            return ok ? 0 : 1;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return 2;
    } catch (const ReplicateFailure& e) {
        err << "replicate failure: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "parameter error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << "usage error: no subcommand\n";
    return 2;
}

}  // namespace laguerre::cli

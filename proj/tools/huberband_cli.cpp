#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "huberband/adversarial.hpp"
#include "huberband/gaussian_arci.hpp"
#include "huberband/general_arci.hpp"
#include "huberband/harness.hpp"
#include "huberband/list_decodable.hpp"

using namespace huberband;
using nlohmann::ordered_json;

namespace {

ordered_json num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return std::isnan(v) ? ordered_json(nullptr) : ordered_json(v);
}

SortedSample load(const std::string& path) {
    if (path == "-") return read_sample(std::cin);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file '" + path + "'");
    return read_sample(in);
}

std::string csv_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + tok + "' in list '" + s + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

void emit_interval(const std::string& fmt, const Interval& iv, const std::vector<std::string>& diags) {
    if (fmt == "csv") {
        std::cout << "lower,upper,length,empty\n"
                  << csv_num(iv.lower) << ',' << csv_num(iv.upper) << ',' << csv_num(iv.length()) << ','
                  << (iv.empty() ? "true" : "false") << '\n';
        return;
    }
    ordered_json j;
    j["lower"] = num(iv.lower);
    j["upper"] = num(iv.upper);
    j["length"] = num(iv.empty() ? 0.0 : iv.upper - iv.lower);
    j["empty"] = iv.empty();
    j["diagnostics"] = diags;
    std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive robust confidence intervals under Huber contamination"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out_fmt = "json";
    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--out", out_fmt, "Output format")->check(CLI::IsMember({"json", "csv"}));
    };

    // ci
    auto* ci = app.add_subcommand("ci", "Confidence interval for a sample file");
    std::string ci_file, ci_family = "gaussian", ci_mode = "std";
    double ci_alpha = 0.05, ci_sigma = 1.0, ci_eps_max = 0.05;
    ci->add_option("input", ci_file, "Sample file (one value per line, '-' for stdin)")->required();
    ci->add_option("--family", ci_family, "Location family");
    ci->add_option("--alpha", ci_alpha);
    ci->add_option("--sigma", ci_sigma);
    ci->add_option("--mode", ci_mode, "std | large049 | small:<eps_max> | general");
    ci->add_option("--eps-max", ci_eps_max, "eps_max for --mode general");
    common(ci);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo coverage experiment");
    std::string sim_method = "arci", sim_family = "gaussian", sim_q = "point:0";
    ExperimentSpec es;
    double sim_eps_max = -1, sim_known_eps = 0, sim_R = 1;
    sim->add_option("--method", sim_method);
    sim->add_option("--family", sim_family);
    sim->add_option("--theta", es.contamination.theta);
    sim->add_option("--eps", es.contamination.eps);
    sim->add_option("--q", sim_q, "point:<x> | gauss:<mu>[,<sd>]");
    sim->add_option("--sigma", es.contamination.sigma);
    sim->add_option("--n", es.n);
    sim->add_option("--reps", es.replicates);
    sim->add_option("--alpha", es.alpha);
    sim->add_option("--eps-max", sim_eps_max);
    sim->add_option("--known-eps", sim_known_eps, "eps for the median interval");
    sim->add_option("--R", sim_R, "radius for the conservative interval");
    common(sim);

    // adversary
    auto* adv = app.add_subcommand("adversary", "Build a least-favorable contamination pair");
    std::string adv_kind, adv_family = "gaussian", adv_r = "auto", adv_sample_prefix;
    AdversaryParams ap;
    std::size_t adv_sample_n = 0;
    adv->add_option("--kind", adv_kind)->required();
    adv->add_option("--family", adv_family);
    adv->add_option("--r", adv_r, "separation or 'auto' (0.999 * max_valid_r)");
    adv->add_option("--eps", ap.eps);
    adv->add_option("--eps-max", ap.eps_max);
    adv->add_option("--alpha", ap.alpha);
    adv->add_option("--n", ap.n);
    adv->add_option("--sigma", ap.sigma);
    adv->add_option("--sample-n", adv_sample_n, "draw this many points from each side");
    adv->add_option("--sample-prefix", adv_sample_prefix, "write <prefix>_null.txt and <prefix>_alt.txt");
    common(adv);

    // rates
    auto* rates = app.add_subcommand("rates", "Tabulate separation rates");
    std::string rates_family = "gaussian", n_grid = "1000,10000,100000", eps_grid = "0,0.0001,0.01";
    double rates_alpha = 0.05, rates_eps_max = 0.05;
    rates->add_option("--family", rates_family);
    rates->add_option("--alpha", rates_alpha);
    rates->add_option("--eps-max", rates_eps_max);
    rates->add_option("--n-grid", n_grid);
    rates->add_option("--eps-grid", eps_grid);
    common(rates);

    // list
    auto* lst = app.add_subcommand("list", "List-decodable confidence set");
    std::string list_file;
    double list_alpha = 0.05;
    bool list_modified = false;
    lst->add_option("input", list_file)->required();
    lst->add_option("--alpha", list_alpha);
    lst->add_flag("--modified", list_modified);
    common(lst);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ci->parsed()) {
            const auto family = LocationFamily::parse(ci_family);
            const auto s = load(ci_file);
            ArciResult res;
            if (ci_mode == "general") {
                res = arci_general(s, family, ci_alpha, ci_eps_max);
            } else {
                if (family.kind() != FamilyKind::Gaussian)
                    throw ConfigError("mode '" + ci_mode + "' requires --family gaussian (use --mode general)");
                GaussianArciConfig cfg;
                cfg.alpha = ci_alpha;
                cfg.sigma = ci_sigma;
                if (ci_mode == "std") {
                    cfg.mode = EpsMaxMode::Std005;
                } else if (ci_mode == "large049") {
                    cfg.mode = EpsMaxMode::Large049;
                } else if (ci_mode.rfind("small:", 0) == 0) {
                    cfg.mode = EpsMaxMode::Small;
                    cfg.eps_max = parse_list(ci_mode.substr(6)).at(0);
                } else {
                    throw ConfigError("unknown mode '" + ci_mode + "'");
                }
                res = gaussian_ci(s, cfg);
            }
            emit_interval(out_fmt, res.interval, res.diagnostics);
        } else if (sim->parsed()) {
            es.contamination.family = LocationFamily::parse(sim_family);
            es.contamination.q = parse_q(sim_q);
            es.method = parse_method(sim_method);
            if (sim_eps_max > 0) es.method.eps_max = sim_eps_max;
            es.method.known_eps = sim_known_eps;
            es.method.R = sim_R;
            es.master_seed = seed;
            const auto rep = run_coverage_experiment(es);
            if (out_fmt == "csv") {
                std::cout << "coverage,mc_se,length_mean,length_median,length_q05,length_q95,empty_fraction\n"
                          << csv_num(rep.coverage) << ',' << csv_num(rep.mc_se) << ',' << csv_num(rep.length_mean)
                          << ',' << csv_num(rep.length_median) << ',' << csv_num(rep.length_q05) << ','
                          << csv_num(rep.length_q95) << ',' << csv_num(rep.empty_fraction) << '\n';
            } else {
                std::cout << rep.to_json() << '\n';
            }
        } else if (adv->parsed()) {
            ap.kind = parse_adversary_kind(adv_kind);
            if (ap.kind == AdversaryKind::LaplaceExact && adv->count("--family") == 0) adv_family = "laplace";
            ap.family = LocationFamily::parse(adv_family);
            const double max_r = max_valid_r(ap);
            ap.r = adv_r == "auto" ? 0.999 * max_r : parse_list(adv_r).at(0);
            const auto pair = build_adversary(ap);
            const auto& v = pair.validity;
            ordered_json j;
            j["kind"] = to_string(ap.kind);
            j["params"] = {{"family", ap.family.name()}, {"r", ap.r},         {"eps", ap.eps},
                           {"eps_max", ap.eps_max},      {"alpha", ap.alpha}, {"n", ap.n},
                           {"sigma", ap.sigma}};
            j["mass0"] = v.mass0;
            j["mass1"] = v.mass1;
            j["min_density"] = v.min_density;
            j["tv"] = num(v.tv_numeric);
            j["tv_bound"] = num(v.tv_bound);
            j["exact_match"] = v.exact_zero;
            j["match_error"] = num(v.match_error);
            j["max_valid_r"] = num(pair.max_valid_r);
            ordered_json internals = ordered_json::object();
            for (const auto& [k, x] : pair.internals) internals[k] = num(x);
            j["internals"] = internals;
            if (adv_sample_n > 0) {
                if (adv_sample_prefix.empty()) throw ConfigError("--sample-n needs --sample-prefix");
                for (auto side : {Side::Null, Side::Alternative}) {
                    const auto s = pair.sample(side, adv_sample_n, mix_seed(seed, side == Side::Null ? 0 : 1));
                    const std::string path = adv_sample_prefix + (side == Side::Null ? "_null.txt" : "_alt.txt");
                    std::ofstream f(path);
                    if (!f) throw ConfigError("cannot write '" + path + "'");
                    f.precision(17);
                    for (double x : s.values()) f << x << '\n';
                }
                j["samples"] = {adv_sample_prefix + "_null.txt", adv_sample_prefix + "_alt.txt"};
            }
            std::cout << j.dump(2) << '\n';
        } else if (rates->parsed()) {
            const auto family = LocationFamily::parse(rates_family);
            const auto ns = parse_list(n_grid);
            const auto eps = parse_list(eps_grid);
            using Fn = std::function<double(double, std::size_t)>;
            const std::vector<Fn> cols = {
                [&](double e, std::size_t n) { return q_bar(e, n, rates_alpha, rates_eps_max); },
                [&](double e, std::size_t n) { return q_under(e, n, rates_alpha, rates_eps_max); },
                [&](double e, std::size_t n) { return r_up(family, e, n, rates_alpha, rates_eps_max); },
                [&](double e, std::size_t n) { return r_down(family, e, n, rates_alpha, rates_eps_max); },
                [&](double e, std::size_t n) { return r_bar(family, e, n, rates_alpha, rates_eps_max); },
                [&](double e, std::size_t n) { return r_under(family, e, n, rates_alpha, rates_eps_max); },
                [&](double e, std::size_t n) { return theoretical_rate(family, n, e); },
            };
            std::cout << "family,n,eps,q_bar,q_under,r_up,r_down,r_bar,r_under,theory\n";
            for (double nd : ns) {
                if (!(nd >= 1) || nd != std::floor(nd)) throw ConfigError("n grid must hold positive integers");
                const auto n = static_cast<std::size_t>(nd);
                for (double e : eps) {
                    std::cout << family.name() << ',' << n << ',' << csv_num(e);
                    for (const auto& f : cols) {
                        double v = std::nan("");
                        try {
                            v = f(e, n);
                        } catch (const DomainError&) {
                        } catch (const ConstructionError&) {
                        }
                        std::cout << ',' << csv_num(v);
                    }
                    std::cout << '\n';
                }
            }
        } else if (lst->parsed()) {
            const auto s = load(list_file);
            const auto cs = confidence_set(s, list_alpha, list_modified);
            if (out_fmt == "csv") {
                std::cout << "lower,upper\n";
                for (const auto& c : cs.set.components()) std::cout << csv_num(c.lower) << ',' << csv_num(c.upper) << '\n';
            } else {
                ordered_json j;
                auto comps = ordered_json::array();
                for (const auto& c : cs.set.components()) comps.push_back({num(c.lower), num(c.upper)});
                j["components"] = comps;
                j["volume"] = num(cs.set.volume());
                j["list"] = cs.list;
                j["interval"] = {num(cs.interval.lower), num(cs.interval.upper)};
                j["reduced"] = cs.reduced;
                std::cout << j.dump(2) << '\n';
            }
        }
    } catch (const ConstructionError& e) {
        std::cerr << "construction error: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#include "huberband/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "huberband/general_arci.hpp"
#include "huberband/list_decodable.hpp"
#include "huberband/rng.hpp"

namespace huberband {

namespace {

double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse " + what + ": '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError("cannot parse " + what + ": '" + s + "'");
    return v;
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
        h ^= (word >> (8 * i)) & 0xFF;
        h *= 0x100000001B3ULL;
    }
    return h;
}

constexpr std::uint64_t kFnvBasis = 0xCBF29CE484222325ULL;

std::string hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

bool gaussian_only(Method m) {
    switch (m) {
        case Method::Arci:
        case Method::Arci049:
        case Method::ArciSmall:
        case Method::ListSet:
        case Method::ListSetModified: return true;
        default: return false;
    }
}

class Evaluator {
public:
    explicit Evaluator(const ExperimentSpec& spec) : spec_(spec) {
        if (spec.method.method == Method::General)
            plan_ = plan_general_arci(spec.contamination.family, spec.n, spec.alpha, spec.method.eps_max,
                                      spec.method.grid_size);
    }

    ReplicateResult operator()(const SortedSample& s) const {
        const double theta = spec_.contamination.theta;
        const auto& m = spec_.method;
        ReplicateResult r;
        ConfidenceSet set;
        switch (m.method) {
            case Method::Arci: {
                GaussianArciConfig cfg;
                cfg.alpha = spec_.alpha;
                cfg.sigma = spec_.contamination.sigma;
                cfg.t_min = m.t_min;
                cfg.margin_mult = m.margin_mult;
                set = ConfidenceSet(arci_gaussian(s, cfg).interval);
                break;
            }
            case Method::Arci049: {
                GaussianArciConfig cfg;
                cfg.alpha = spec_.alpha;
                cfg.sigma = spec_.contamination.sigma;
                cfg.mode = EpsMaxMode::Large049;
                set = ConfidenceSet(gaussian_ci(s, cfg).interval);
                break;
            }
            case Method::ArciSmall: {
                GaussianArciConfig cfg;
                cfg.alpha = spec_.alpha;
                cfg.sigma = spec_.contamination.sigma;
                cfg.mode = EpsMaxMode::Small;
                cfg.eps_max = m.eps_max;
                set = ConfidenceSet(gaussian_ci(s, cfg).interval);
                break;
            }
            case Method::Median:
                set = ConfidenceSet(median_interval(s, m.known_eps, spec_.contamination.sigma));
                break;
            case Method::Conservative: set = ConfidenceSet(conservative_interval(s, m.R)); break;
            case Method::General: set = ConfidenceSet(arci_general(s, *plan_).interval); break;
            case Method::ListSet:
            case Method::ListSetModified: {
                auto cs = confidence_set(s, spec_.alpha, m.method == Method::ListSetModified);
                set = std::move(cs.set);
                r.list_error = kInf;
                for (double c : cs.list) r.list_error = std::min(r.list_error, std::abs(c - theta));
                break;
            }
        }
        r.empty = set.empty();
        r.covered = set.contains(theta);
        r.length = set.volume();
        r.components = set.components().size();
        r.lower = r.empty ? kInf : set.components().front().lower;
        r.upper = r.empty ? -kInf : set.components().back().upper;
        std::uint64_t h = kFnvBasis;
        for (const auto& c : set.components()) {
            h = fnv1a(h, std::bit_cast<std::uint64_t>(c.lower));
            h = fnv1a(h, std::bit_cast<std::uint64_t>(c.upper));
        }
        r.hash = h;
        return r;
    }

private:
    const ExperimentSpec& spec_;
    std::optional<GeneralArciPlan> plan_;
};

double sorted_quantile(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    return sorted[quantile_index(n, q) - 1];
}

}  // namespace

QSpec parse_q(const std::string& s) {
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (head == "point") return PointMass{parse_double(tail, "point mass location")};
    if (head == "gauss") {
        const auto comma = tail.find(',');
        if (comma == std::string::npos) return GaussianAt{parse_double(tail, "gaussian mean"), 1.0};
        GaussianAt g{parse_double(tail.substr(0, comma), "gaussian mean"),
                     parse_double(tail.substr(comma + 1), "gaussian sd")};
        if (!(g.sigma > 0)) throw ConfigError("contamination sd must be positive");
        return g;
    }
    throw ConfigError("unknown contamination spec '" + s + "' (use point:<x> or gauss:<mu>[,<sd>])");
}

std::string describe(const QSpec& q) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            std::ostringstream os;
            os.precision(17);
            if constexpr (std::is_same_v<T, PointMass>) {
                os << "point:" << v.x;
            } else if constexpr (std::is_same_v<T, GaussianAt>) {
                os << "gauss:" << v.mu << "," << v.sigma;
            } else {
                os << "adversary:" << to_string(v.pair->params.kind) << ":"
                   << (v.side == Side::Null ? "null" : "alternative") << ":r=" << v.pair->params.r;
            }
            return os.str();
        },
        q);
}

void ContaminationSpec::validate() const {
    if (!(eps >= 0 && eps < 1)) throw ConfigError("eps must lie in [0, 1)");
    if (!std::isfinite(theta)) throw ConfigError("theta must be finite");
    if (!(sigma > 0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
    if (const auto* a = std::get_if<AdversaryRef>(&q); a && !a->pair) throw ConfigError("adversary reference is empty");
}

SortedSample generate_contaminated(const ContaminationSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n < 1) throw ConfigError("sample size must be positive");
    Rng rng(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) {
        if (rng.uniform() < spec.eps) {
            x = std::visit(
                [&](const auto& v) -> double {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, PointMass>) {
                        return v.x;
                    } else if constexpr (std::is_same_v<T, GaussianAt>) {
                        return v.mu + v.sigma * LocationFamily::gaussian().quantile(rng.uniform());
                    } else {
                        return v.pair->draw_contamination(v.side, rng) + (spec.theta - v.pair->center(v.side));
                    }
                },
                spec.q);
        } else {
            x = spec.theta + spec.sigma * spec.family.quantile(rng.uniform());
        }
    }
    return SortedSample(std::move(xs));
}

MethodSpec parse_method(const std::string& s) {
    MethodSpec m;
    if (s == "arci") m.method = Method::Arci;
    else if (s == "arci049" || s == "large049") m.method = Method::Arci049;
    else if (s.rfind("small:", 0) == 0) {
        m.method = Method::ArciSmall;
        m.eps_max = parse_double(s.substr(6), "eps_max");
        if (!(m.eps_max > 0 && m.eps_max <= 0.05)) throw ConfigError("small:<eps_max> needs eps_max in (0, 0.05]");
    } else if (s == "median") m.method = Method::Median;
    else if (s == "conservative") m.method = Method::Conservative;
    else if (s == "general") m.method = Method::General;
    else if (s == "list") m.method = Method::ListSet;
    else if (s == "list-modified") m.method = Method::ListSetModified;
    else throw ConfigError("unknown method '" + s + "'");
    return m;
}

std::string method_name(const MethodSpec& m) {
    switch (m.method) {
        case Method::Arci: return "arci";
        case Method::Arci049: return "arci049";
        case Method::ArciSmall: return "small";
        case Method::Median: return "median";
        case Method::Conservative: return "conservative";
        case Method::General: return "general";
        case Method::ListSet: return "list";
        case Method::ListSetModified: return "list-modified";
    }
    return "unknown";
}

void ExperimentSpec::validate() const {
    contamination.validate();
    if (replicates < 1) throw ConfigError("replicates must be at least 1");
    if (n < 1) throw ConfigError("n must be positive");
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha must lie in (0, 1)");
    if (gaussian_only(method.method) && contamination.family.kind() != FamilyKind::Gaussian)
        throw ConfigError("method " + method_name(method) + " requires the Gaussian family");
    if (method.method == Method::Median && !(method.known_eps >= 0 && method.known_eps < 1))
        throw ConfigError("median interval needs eps in [0, 1)");
    if (method.method == Method::Conservative && !(method.R > 0)) throw ConfigError("conservative radius must be positive");
}

unsigned default_thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HUBERBAND_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(std::min<long>(v, 4096));
    }
    return hw;
}

double SimulationReport::fraction_length_at_most(double bound) const {
    std::size_t k = 0;
    for (const auto& r : replicates) k += (!r.empty && r.length <= bound);
    return static_cast<double>(k) / static_cast<double>(replicates.size());
}

SimulationReport run_coverage_experiment(const ExperimentSpec& spec, unsigned threads) {
    spec.validate();
    const Evaluator eval(spec);
    SimulationReport rep;
    rep.spec = spec;
    rep.replicates.resize(spec.replicates);
    const unsigned nt = std::max(1u, std::min<unsigned>(threads ? threads : default_thread_count(),
                                                        static_cast<unsigned>(spec.replicates)));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(nt);
    auto worker = [&](unsigned id) {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < spec.replicates;) {
                const auto s = generate_contaminated(spec.contamination, spec.n, mix_seed(spec.master_seed, i));
                rep.replicates[i] = eval(s);
            }
        } catch (...) {
            errors[id] = std::current_exception();
            next = spec.replicates;
        }
    };
    if (nt == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    const double R = static_cast<double>(spec.replicates);
    std::vector<double> lengths;
    lengths.reserve(spec.replicates);
    std::size_t covered = 0, empty = 0;
    double sum = 0;
    rep.sketch_hash = kFnvBasis;
    for (const auto& r : rep.replicates) {
        covered += r.covered;
        empty += r.empty;
        sum += r.length;
        lengths.push_back(r.length);
        rep.sketch_hash = fnv1a(rep.sketch_hash, r.hash);
    }
    std::sort(lengths.begin(), lengths.end());
    rep.coverage = static_cast<double>(covered) / R;
    rep.mc_se = std::sqrt(rep.coverage * (1 - rep.coverage) / R);
    rep.length_mean = sum / R;
    rep.length_median = sorted_quantile(lengths, 0.5);
    rep.length_q05 = sorted_quantile(lengths, 0.05);
    rep.length_q95 = sorted_quantile(lengths, 0.95);
    rep.empty_fraction = static_cast<double>(empty) / R;
    return rep;
}

std::string SimulationReport::to_json() const {
    using nlohmann::ordered_json;
    auto num = [](double v) -> ordered_json {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return std::isnan(v) ? ordered_json(nullptr) : ordered_json(v);
    };
    const auto& c = spec.contamination;
    ordered_json j;
    j["schema"] = 1;
    j["spec"] = {
        {"family", c.family.name()},
        {"theta", c.theta},
        {"eps", c.eps},
        {"q", describe(c.q)},
        {"sigma", c.sigma},
        {"method", method_name(spec.method)},
        {"method_params",
         {{"t_min", spec.method.t_min},
          {"margin_mult", spec.method.margin_mult},
          {"eps_max", spec.method.eps_max},
          {"known_eps", spec.method.known_eps},
          {"R", spec.method.R},
          {"grid_size", spec.method.grid_size}}},
        {"n", spec.n},
        {"replicates", spec.replicates},
        {"alpha", spec.alpha},
        {"master_seed", spec.master_seed},
    };
    j["coverage"] = coverage;
    j["mc_se"] = mc_se;
    j["length"] = {{"mean", num(length_mean)}, {"median", num(length_median)}, {"q05", num(length_q05)},
                   {"q95", num(length_q95)}};
    j["empty_fraction"] = empty_fraction;
    if (spec.method.method == Method::ListSet || spec.method.method == Method::ListSetModified) {
        std::size_t ok = 0;
        for (const auto& r : replicates) ok += r.list_error <= 4.0;
        j["list_within_4"] = static_cast<double>(ok) / static_cast<double>(replicates.size());
    }
    j["sketch_hash"] = hex(sketch_hash);
    auto& per = j["replicate_hashes"] = ordered_json::array();
    for (const auto& r : replicates) per.push_back(hex(r.hash));
    return j.dump(2);
}

}  // namespace huberband

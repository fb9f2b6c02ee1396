#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "huberband/adversarial.hpp"
#include "huberband/distributions.hpp"
#include "huberband/gaussian_arci.hpp"
#include "huberband/interval.hpp"

namespace huberband {

struct PointMass {
    double x = 0;
};
struct GaussianAt {
    double mu = 0;
    double sigma = 1;
};
// Draws Q from one side of a least-favorable pair, translated so that the
// pair's centre for that side sits at the experiment's theta.
struct AdversaryRef {
    std::shared_ptr<const AdversarialPair> pair;
    Side side = Side::Alternative;
};
using QSpec = std::variant<PointMass, GaussianAt, AdversaryRef>;

// "point:<x>", "gauss:<mu>" or "gauss:<mu>,<sigma>".
QSpec parse_q(const std::string& s);
std::string describe(const QSpec& q);

struct ContaminationSpec {
    LocationFamily family = LocationFamily::gaussian();
    double theta = 0;
    double eps = 0;
    QSpec q = PointMass{0.0};
    double sigma = 1;

    void validate() const;
};

SortedSample generate_contaminated(const ContaminationSpec& spec, std::size_t n, std::uint64_t seed);

enum class Method { Arci, Arci049, ArciSmall, Median, Conservative, General, ListSet, ListSetModified };

struct MethodSpec {
    Method method = Method::Arci;
    double t_min = 1.6;
    double margin_mult = 2.0;
    double eps_max = 0.05;  // ArciSmall, General
    double known_eps = 0;   // Median
    double R = 1;           // Conservative
    std::size_t grid_size = 32;
};

// "arci", "arci049", "small:<eps_max>", "median", "conservative", "general",
// "list", "list-modified".
MethodSpec parse_method(const std::string& s);
std::string method_name(const MethodSpec& m);

struct ExperimentSpec {
    ContaminationSpec contamination;
    MethodSpec method;
    std::size_t n = 1000;
    std::size_t replicates = 100;
    double alpha = 0.05;
    std::uint64_t master_seed = 0;

    void validate() const;
};

struct ReplicateResult {
    double lower = 0, upper = 0;  // hull of the returned set
    double length = 0;            // total volume
    bool covered = false;
    bool empty = false;
    std::size_t components = 0;
    double list_error = 0;  // min |list - theta|; list methods only
    std::uint64_t hash = 0;
};

struct SimulationReport {
    ExperimentSpec spec;
    double coverage = 0;
    double mc_se = 0;
    double length_mean = 0, length_median = 0, length_q05 = 0, length_q95 = 0;
    double empty_fraction = 0;
    std::uint64_t sketch_hash = 0;
    std::vector<ReplicateResult> replicates;

    double fraction_length_at_most(double bound) const;
    std::string to_json() const;
};

// Per-replicate seeds are mix_seed(master, index); results do not depend on
// the thread count. threads = 0 reads HUBERBAND_THREADS, else all cores.
SimulationReport run_coverage_experiment(const ExperimentSpec& spec, unsigned threads = 0);

unsigned default_thread_count();

}  // namespace huberband

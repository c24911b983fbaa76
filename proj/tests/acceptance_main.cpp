// Acceptance suite: end-to-end checks of the filter stack at pinned
// tolerances, one pass/fail line per criterion. Returns the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lrfs/compare.hpp"
#include "lrfs/config.hpp"
#include "lrfs/correlation.hpp"
#include "lrfs/io.hpp"
#include "lrfs/oracle.hpp"
#include "lrfs/run.hpp"

using namespace lrfs;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
double total_seconds = 0.0;

void criterion(const std::string& name, double seconds_budget,
               const std::function<std::string()>& body) {
    auto start = Clock::now();
    std::string detail;
    bool pass = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    total_seconds += elapsed;
    if (pass && seconds_budget > 0.0 && elapsed > seconds_budget) {
        pass = false;
        detail += " [over time budget]";
    }
    if (!pass) ++failures;
    std::printf("[%s] %s: %s (%.2fs)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str(),
                elapsed);
    std::fflush(stdout);
}

std::string expect(bool ok, const std::string& detail) {
    if (!ok) throw Error(detail);
    return detail;
}

Vector vec1(double x) {
    Vector v(1);
    v(0) = x;
    return v;
}

Matrix mat1(double x) {
    Matrix m(1, 1);
    m(0, 0) = x;
    return m;
}

MotionModel motion_1d(double f, double q, double ps) { return { mat1(f), mat1(q), ps }; }

SensorModel sensor_1d(double pd, double rate, double lo, double hi, double r = 0.25) {
    SensorModel s;
    s.observation = mat1(1.0);
    s.measurement_noise = mat1(r);
    s.detection_prob = pd;
    s.clutter_rate = rate;
    s.clutter_region = Matrix(1, 2);
    s.clutter_region << lo, hi;
    return s;
}

sim::ScenarioConfig two_target_scenario(std::uint64_t seed) {
    sim::ScenarioConfig cfg;
    cfg.state_dim = 1;
    cfg.steps = 5;
    cfg.rng_seed = seed;
    cfg.motion = motion_1d(1.0, 0.1, 0.95);
    cfg.sensor = sensor_1d(0.9, 5.0, -20.0, 20.0);
    cfg.truncation.min_weight = 1e-6;
    cfg.truncation.max_hypotheses = 200;
    cfg.birth.recurring = false;  // a two-target scenario: one birth event
    cfg.birth.indices = { 1, 2 };
    cfg.birth.existence = { { 1, 0.9 }, { 2, 0.9 } };
    cfg.birth.spatial = { { { 0, 1 }, GaussianMixture::single(vec1(-4.0), mat1(1.0)) },
                          { { 0, 2 }, GaussianMixture::single(vec1(4.0), mat1(1.0)) } };
    return cfg;
}

/// Two-label pair density whose atoms swap the hypothesized positions.
SlcDensity correlated_pair_density(double a0, double var) {
    Label l1{ 1, 1 }, l2{ 1, 2 };
    auto left = GaussianMixture::single(vec1(-1.0), mat1(var));
    auto right = GaussianMixture::single(vec1(1.0), mat1(var));
    auto model = SlcBirthModel::shared_alpha(
        LabelSet{ l1, l2 }, { { l1, 1.0 }, { l2, 1.0 } }, { 0, 1 }, { a0, 1.0 - a0 },
        { { { l1, left }, { l2, right } }, { { l1, right }, { l2, left } } });
    return slc_birth_density(model);
}

GlmbDensity lmb_two_label_prior(double q1, double q2) {
    LmbBirth b;
    Label l1{ 1, 1 }, l2{ 1, 2 };
    b.labels = LabelSet{ l1, l2 };
    b.existence = { { l1, q1 }, { l2, q2 } };
    b.spatial = { { l1, GaussianMixture::single(vec1(-2.0), mat1(1.0)) },
                  { l2, GaussianMixture::single(vec1(2.0), mat1(1.0)) } };
    return glmb_time_update(GlmbDensity::target_free(), motion_1d(1.0, 0.1, 0.9), b);
}

std::string c1_normalization() {
    auto cfg = two_target_scenario(1001);
    double worst_residual = 0.0, worst_inner = 0.0;
    for (auto kind : { sim::FilterKind::glmb, sim::FilterKind::slc }) {
        auto steps = sim::run_filter(cfg, sim::generate_scenario(cfg), kind);
        expect(steps.size() == 5, "expected five steps");
        for (const auto& s : steps) {
            worst_residual = std::max(worst_residual, s.diag.weight_residual);
            worst_inner = std::max(worst_inner, std::abs(s.diag.survivor_weight_sum - 1.0));
        }
    }
    expect(worst_residual <= 1e-9, "weight residual " + std::to_string(worst_residual));
    expect(worst_inner <= 1e-9, "survivor weight-sum residual " + std::to_string(worst_inner));
    char buf[128];
    std::snprintf(buf, sizeof buf, "max |sum w - 1| = %.2e, max |sum survivor - 1| = %.2e",
                  worst_residual, worst_inner);
    return buf;
}

std::string c2_equivalence() {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CounterRng rng(seed * 7919);
        sim::ScenarioConfig cfg;
        cfg.state_dim = 1;
        cfg.steps = 5;
        cfg.rng_seed = seed;
        cfg.motion = motion_1d(1.0, 0.05 + 0.2 * rng.uniform(),
                               0.8 + 0.19 * rng.uniform());
        cfg.sensor = sensor_1d(0.6 + 0.35 * rng.uniform(), 1.5, -12.0, 12.0);
        // The threshold does the truncating; the cap stays slack so that
        // structurally tied hypotheses are never split at a cut boundary.
        cfg.truncation.min_weight = 1e-4;
        cfg.truncation.max_hypotheses = 4096;
        cfg.birth.recurring = false;
        for (int i = 1; i <= 3; ++i) {  // at most three labels
            cfg.birth.indices.push_back(i);
            cfg.birth.existence[i] = 0.3 + 0.6 * rng.uniform();
            cfg.birth.spatial.emplace(
                std::make_pair(0, i),
                GaussianMixture::single(vec1(rng.uniform(-6.0, 6.0)), mat1(0.5 + rng.uniform())));
        }
        auto scans = sim::generate_scenario(cfg);
        for (auto& scan : scans)  // at most six measurements per scan
            if (scan.measurements.size() > 6) scan.measurements.resize(6);

        // Quadruple recursion versus convert-classical-convert, stage by stage.
        SlcDensity slc = SlcDensity::target_free();
        GlmbDensity glmb = GlmbDensity::target_free();
        auto opts = cfg.truncation.update_options();
        for (const auto& scan : scans) {
            auto birth = cfg.birth_active_at(scan.k) ? cfg.birth.at_step(scan.k)
                                                     : SlcBirthModel::none();
            slc = slc_time_update(slc, cfg.motion, birth);
            glmb = glmb_time_update(glmb, cfg.motion, birth);
            worst = std::max(worst, max_joint_diff(slc, glmb));
            slc = slc_measurement_update(slc, cfg.sensor, scan.measurements, opts);
            glmb = glmb_measurement_update(glmb, cfg.sensor, scan.measurements, opts);
            worst = std::max(worst, max_joint_diff(slc, glmb));
            worst = std::max(worst, max_spatial_diff(slc.spatial, glmb.spatial));
            slc = slc_prune_truncate(slc, cfg.truncation.min_weight,
                                     cfg.truncation.max_hypotheses);
            glmb = prune_truncate(glmb, cfg.truncation.min_weight,
                                  cfg.truncation.max_hypotheses);
            worst = std::max(worst, max_joint_diff(slc, glmb));
        }
    }
    expect(worst <= 1e-10, "max discrepancy " + std::to_string(worst));
    char buf[96];
    std::snprintf(buf, sizeof buf, "20 seeds, max weight/spatial discrepancy = %.2e", worst);
    return buf;
}

std::string c3_oracle_bayes() {
    auto prior = lmb_two_label_prior(0.6, 0.5);
    auto sensor = sensor_1d(0.9, 5.0, -12.0, 12.0);
    std::vector<Vector> z{ vec1(-1.6), vec1(2.3) };
    auto scene = oracle::DiscreteScene::uniform_1d(-12.0, 12.0, 401, prior.universe, 2);
    auto oracle_post = oracle::bayes_update_bruteforce(
        oracle::DiscreteDensity::from_glmb(prior, scene),
        oracle::make_standard_likelihood(sensor, z), scene);
    auto closed = oracle::DiscreteDensity::from_glmb(glmb_measurement_update(prior, sensor, z),
                                                     scene);
    double tv = oracle::tv_distance(closed, oracle_post);
    expect(tv <= 1e-8, "TV distance " + std::to_string(tv));
    char buf[96];
    std::snprintf(buf, sizeof buf, "401-point grid, |Z|=2, TV distance = %.2e", tv);
    return buf;
}

std::vector<Vector> probe_points(double lo, double hi, int n) {
    std::vector<Vector> grid;
    for (int i = 0; i < n; ++i) grid.push_back(vec1(lo + (hi - lo) * double(i) / double(n - 1)));
    return grid;
}

std::string c4_lmb_independence() {
    Label l1{ 1, 1 }, l2{ 1, 2 };
    // FD route: a general two-label multi-Bernoulli density on the grid.
    auto spread = from_glmb(lmb_two_label_prior(0.7, 0.4));
    auto scene = oracle::DiscreteScene::uniform_1d(-10.0, 10.0, 401, spread.universe, 2);
    auto dd = oracle::DiscreteDensity::from_slc(spread, scene);
    // Closed-form route needs the pair-concentrated case: both certain.
    auto concentrated = from_glmb(lmb_two_label_prior(1.0, 1.0));

    auto grid = probe_points(-6.0, 6.0, 21);
    double worst_closed = 0.0, worst_fd = 0.0;
    for (const Vector& x1 : grid)
        for (const Vector& x2 : grid) {
            worst_closed = std::max(worst_closed,
                                    std::abs(factorial_covariance_pair(
                                        concentrated, { x1, l1 }, { x2, l2 })));
            worst_fd = std::max(worst_fd, std::abs(oracle::fcd_fd(dd, { x1, l1 }, { x2, l2 })));
        }
    expect(worst_closed <= 1e-6, "closed form reached " + std::to_string(worst_closed));
    expect(worst_fd <= 1e-6, "finite differences reached " + std::to_string(worst_fd));
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |fcd|: closed = %.1e, finite-diff = %.2e", worst_closed,
                  worst_fd);
    return buf;
}

std::string c5_fcd_closed_vs_fd() {
    Label l1{ 1, 1 }, l2{ 1, 2 };
    auto d = correlated_pair_density(0.5, 0.09);
    auto scene = oracle::DiscreteScene::uniform_1d(-4.0, 4.0, 401, d.universe, 2);
    auto dd = oracle::DiscreteDensity::from_slc(d, scene);
    // Roundoff floor of the mixed log-derivative at the extrapolated step.
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() / (5e-5 * 5e-5);

    auto grid = probe_points(-1.8, 1.8, 21);
    double worst_rel = 0.0;
    for (const Vector& p1 : grid)
        for (const Vector& p2 : grid) {
            Vector c1 = scene.grid[std::size_t(scene.index_of(p1))];
            Vector c2 = scene.grid[std::size_t(scene.index_of(p2))];
            double cf = factorial_covariance_pair(d, { c1, l1 }, { c2, l2 });
            double fd = oracle::fcd_fd(dd, { c1, l1 }, { c2, l2 });
            double err = std::abs(cf - fd);
            double rel = err / (std::abs(cf) + noise / 1e-4);
            worst_rel = std::max(worst_rel, rel);
            expect(err <= 1e-4 * std::abs(cf) + noise,
                   "fcd mismatch " + std::to_string(err) + " at |cf| " + std::to_string(cf));
        }
    char buf[96];
    std::snprintf(buf, sizeof buf, "21x21 probes, worst relative error = %.2e", worst_rel);
    return buf;
}

std::string c6_birth_reduction() {
    // One atom: the cluster filter and the classical filter with plain
    // multi-Bernoulli birth must coincide step for step.
    auto cfg = two_target_scenario(2718);
    auto scans = sim::generate_scenario(cfg);
    auto g = sim::run_filter(cfg, scans, sim::FilterKind::glmb);
    auto s = sim::run_filter(cfg, scans, sim::FilterKind::slc);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, max_joint_diff(s[i].slc, g[i].glmb));
        worst = std::max(worst, max_spatial_diff(s[i].slc.spatial, g[i].glmb.spatial));
    }
    expect(worst <= 1e-12, "single-atom reduction discrepancy " + std::to_string(worst));

    // All-certain birth collapses the label-set weight onto the full set.
    auto certain = correlated_pair_density(0.5, 0.25);
    expect(certain.label_weight.size() == 1, "certain birth kept spurious label sets");
    expect(certain.label_weight.begin()->first.size() == 2, "wrong concentrated set");
    expect(std::abs(certain.label_weight.begin()->second - 1.0) <= 1e-12,
           "concentrated weight differs from one");
    char buf[96];
    std::snprintf(buf, sizeof buf, "single-atom gap = %.1e; certain birth concentrated", worst);
    return buf;
}

std::string c7_mta_counts() {
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 4; ++m) {
            std::vector<Label> ls;
            for (int i = 1; i <= n; ++i) ls.push_back({ 0, i });
            // Independent integer evaluation of sum_j C(n,j) C(m,j) j!.
            long long want = 0;
            for (int j = 0; j <= std::min(n, m); ++j) {
                long long c_n = 1, c_m = 1, fact = 1;
                for (int t = 0; t < j; ++t) {
                    c_n = c_n * (n - t) / (t + 1);
                    c_m = c_m * (m - t) / (t + 1);
                    fact *= t + 1;
                }
                want += c_n * c_m * fact;
            }
            auto got = enumerate_mtas(LabelSet(ls), m).size();
            expect(got == std::size_t(want),
                   "count mismatch at n=" + std::to_string(n) + " m=" + std::to_string(m));
            if (n == 2 && m == 2) expect(want == 7, "derived value at (2,2) is not 7");
        }
    return "all counts match for |L|<=4, m<=4; count(2,2) = 7";
}

#ifdef LRFS_CLI_PATH
std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    expect(bool(in), "missing output file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string c8_cli_determinism() {
    namespace fs = std::filesystem;
    std::string cli = LRFS_CLI_PATH;
    std::string config = std::string(LRFS_SCENARIO_DIR) + "/cluster_pair.toml";
    fs::path base = fs::temp_directory_path() / "lrfs_acceptance_csv";
    fs::remove_all(base);
    for (const char* run : { "a", "b" }) {
        std::string cmd = cli + " track --config " + config + " --seed 5 --out " +
                          (base / run).string() + " > /dev/null";
        expect(std::system(cmd.c_str()) == 0, "CLI run failed");
    }
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(base / "a")) {
        if (entry.path().extension() != ".csv") continue;
        ++files;
        std::string other = (base / "b" / entry.path().filename()).string();
        expect(read_file(entry.path().string()) == read_file(other),
               "mismatch in " + entry.path().filename().string());
    }
    expect(files >= 4, "expected at least four CSV outputs");
    return "two CLI runs produced " + std::to_string(files) + " byte-identical CSV files";
}
#endif

}  // namespace

int main() {
    auto wall_start = Clock::now();
    criterion("C1 normalization suite", 5.0, c1_normalization);
    criterion("C2 recursion equivalence (20 seeds)", 60.0, c2_equivalence);
    criterion("C3 oracle Bayes equivalence", 30.0, c3_oracle_bayes);
    criterion("C4 independent-target covariance vanishes", 10.0, c4_lmb_independence);
    criterion("C5 covariance closed form vs finite differences", 20.0, c5_fcd_closed_vs_fd);
    criterion("C6 single-atom birth reduction", 0.0, c6_birth_reduction);
    criterion("C7 association combinatorics", 0.0, c7_mta_counts);
#ifdef LRFS_CLI_PATH
    criterion("C8 CLI determinism", 0.0, c8_cli_determinism);
#endif
    criterion("C9 suite runtime", 0.0, [&] {
        double wall = std::chrono::duration<double>(Clock::now() - wall_start).count();
        expect(wall < 150.0, "acceptance wall clock " + std::to_string(wall) + "s");
        char buf[96];
        std::snprintf(buf, sizeof buf, "acceptance wall clock = %.1fs (budget 150s of 180s total)",
                      wall);
        return std::string(buf);
    });
    return failures;
}

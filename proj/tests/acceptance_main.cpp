// End-to-end acceptance suite. Runs every shipped guarantee at its stated
// tolerance and prints one PASS/FAIL line per criterion. The CLI binary and
// a scratch directory are passed on the command line.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "groupfb/crystal.hpp"
#include "groupfb/io.hpp"
#include "groupfb/random.hpp"

using namespace groupfb;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& label, const std::string& detail) {
    std::printf("%s %2d  %-34s %s\n", ok ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

GSignal random_gsignal(const GroupPtr& group, GaussianSource& rng, bool unit_norm = false) {
    GSignal s = GSignal::zeros(group);
    for (auto& v : s.values) v = rng.complex_normal();
    if (unit_norm) {
        const double n = s.norm();
        for (auto& v : s.values) v /= n;
    }
    return s;
}

std::vector<GSignal> random_bank(const GroupPtr& group, std::size_t channels,
                                 GaussianSource& rng) {
    std::vector<GSignal> bank;
    for (std::size_t k = 0; k < channels; ++k) bank.push_back(random_gsignal(group, rng));
    return bank;
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

// ---------------------------------------------------------------------------
// 1. exhaustive group and action validation, < 1 s per model
// ---------------------------------------------------------------------------
void criterion_group_validation() {
    struct Model {
        std::string name;
        GroupPtr group;
    };
    CrystalSpec rotation;
    rotation.dimension = 2;
    rotation.grid_side = 8;
    rotation.lattice = {{2, 0}, {0, 2}};
    rotation.point_group = {
        {{1, 0}, {0, 1}}, {{0, -1}, {1, 0}}, {{-1, 0}, {0, -1}}, {{0, 1}, {-1, 0}}};

    std::vector<Model> models;
    models.push_back({"D8", make_dihedral(4)});
    models.push_back({"Z6xZ2", make_dihedral(6)});
    models.push_back({"crystal-q8-d1", build_crystal_group(dihedral_spec(8)).group});
    models.push_back({"crystal-q8-d2", build_crystal_group(rotation).group});

    bool ok = true;
    double worst_ms = 0.0;
    for (const auto& model : models) {
        const auto start = std::chrono::steady_clock::now();
        const auto& g = *model.group;
        const GroupElement e = g.identity();
        for (std::size_t i = 0; i < g.order() && ok; ++i) {
            const GroupElement a = g.element(i);
            ok = g.multiply(a, e) == a && g.multiply(e, a) == a &&
                 g.multiply(a, g.inverse(a)) == e;
            for (std::size_t j = 0; j < g.order() && ok; ++j) {
                const GroupElement b = g.element(j);
                for (std::size_t k = 0; k < g.order() && ok; ++k) {
                    const GroupElement c = g.element(k);
                    ok = g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c));
                }
            }
        }
        const auto& h = g.h_group();
        for (std::size_t h1 = 0; h1 < h.order() && ok; ++h1) {
            for (std::size_t h2 = 0; h2 < h.order() && ok; ++h2) {
                const auto& composed = g.action(h.multiply(h1, h2));
                for (std::size_t n = 0; n < g.n_group().order() && ok; ++n) {
                    ok = composed.apply(n) == g.action(h1).apply(g.action(h2).apply(n));
                }
            }
        }
        const double elapsed = ms_since(start);
        worst_ms = std::max(worst_ms, elapsed);
        ok = ok && elapsed < 1000.0;
    }
    report(1, ok, "group and action validation",
           "axioms exhaustive on 4 models, worst " + fmt(worst_ms) + " ms < 1 s");
}

// ---------------------------------------------------------------------------
// 2. transform of a convolution = product of transforms, <= 1e-12
// ---------------------------------------------------------------------------
void criterion_convolution_lemma() {
    GaussianSource rng(201);
    double worst = 0.0;
    for (const auto& moduli :
         {std::vector<std::int64_t>{4}, std::vector<std::int64_t>{6},
          std::vector<std::int64_t>{3, 2}}) {
        const AbelianGroup n_group(moduli);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<cdouble> a(n_group.order()), b(n_group.order());
            for (auto& v : a) v = rng.complex_normal();
            for (auto& v : b) v = rng.complex_normal();
            const auto lhs = fourier(n_group, convolve(n_group, a, b));
            const auto fa = fourier(n_group, a);
            const auto fb = fourier(n_group, b);
            for (std::size_t xi = 0; xi < n_group.order(); ++xi) {
                worst = std::max(worst, std::abs(lhs[xi] - fa[xi] * fb[xi]));
            }
        }
    }
    report(2, worst <= 1e-12, "transform of convolution",
           "150 random pairs, max|err| = " + fmt(worst) + " <= 1e-12");
}

// ---------------------------------------------------------------------------
// 3. time-domain bank equals the per-character matrix product bank, <= 1e-11
// ---------------------------------------------------------------------------
void criterion_polyphase_equivalence() {
    const GroupPtr g = make_dihedral(4);
    GaussianSource rng(202);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t channels = 2 + trial % 3;
        const auto analysis = random_bank(g, channels, rng);
        const auto synthesis = random_bank(g, channels, rng);
        const GSignal input = random_gsignal(g, rng, true);
        const FilterBankRun direct = run_filter_bank(input, analysis, synthesis);
        const FilterBankRun matrix = run_filter_bank_polyphase(input, analysis, synthesis);
        for (std::size_t i = 0; i < direct.output.values.size(); ++i) {
            worst = std::max(worst,
                             std::abs(direct.output.values[i] - matrix.output.values[i]));
        }
    }
    report(3, worst <= 1e-11, "polyphase bank equivalence",
           "50 random banks K in {2,3,4}, max|err| = " + fmt(worst) + " <= 1e-11");
}

// ---------------------------------------------------------------------------
// 4. perfect reconstruction, both directions
// ---------------------------------------------------------------------------
void criterion_perfect_reconstruction() {
    const GroupPtr g = make_dihedral(4);
    std::vector<GSignal> delta;
    for (std::size_t h = 0; h < 2; ++h) delta.push_back(GSignal::delta(g, {0, h}));

    bool ok = verify_perfect_reconstruction(delta, delta).perfect;

    // any single-entry perturbation >= 1e-6 must break it
    GaussianSource rng(203);
    for (int trial = 0; trial < 20 && ok; ++trial) {
        auto perturbed = delta;
        const std::size_t k = rng.below(2);
        const std::size_t slot = rng.below(g->order());
        perturbed[k].values[slot] += cdouble{1e-6 * (1.0 + rng.uniform()), 0.0};
        ok = !verify_perfect_reconstruction(delta, perturbed).perfect;
    }

    double worst = 0.0;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        const auto analysis = random_bank(g, 3, rng);
        const auto dual = design_dual(analysis);
        const PrReport verdict = verify_perfect_reconstruction(analysis, dual);
        ok = verdict.perfect;
        worst = std::max(worst, verdict.max_deviation);
    }
    report(4, ok && worst <= 1e-10, "perfect reconstruction verdicts",
           "delta bank, 20 perturbations, 50 designed duals, max dev = " + fmt(worst) +
               " <= 1e-10");
}

// ---------------------------------------------------------------------------
// 5. frame bounds match the assembled |G| x |G| frame operator, rel 1e-9
// ---------------------------------------------------------------------------
void criterion_frame_oracle() {
    const GroupPtr g = make_dihedral(4);
    GaussianSource rng(204);
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t channels = 1 + trial % 3;
        const auto generators = random_bank(g, channels, rng);
        const FrameReport bounds = frame_bounds(generators);

        const auto size = static_cast<Eigen::Index>(g->order());
        CMatrix frame_op = CMatrix::Zero(size, size);
        for (const auto& f : generators) {
            for (std::size_t n = 0; n < g->n_group().order(); ++n) {
                const GSignal shifted = translate(f, n);
                CVector v(size);
                for (Eigen::Index i = 0; i < size; ++i)
                    v(i) = shifted.values[static_cast<std::size_t>(i)];
                frame_op += v * v.adjoint();
            }
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(frame_op);
        const double lo = std::max(solver.eigenvalues().minCoeff(), 0.0);
        const double hi = solver.eigenvalues().maxCoeff();
        const double scale = std::max(1.0, hi);
        worst = std::max(worst, std::abs(bounds.bounds.lower - lo) / scale);
        worst = std::max(worst, std::abs(bounds.bounds.upper - hi) / scale);
    }
    const double elapsed = ms_since(start);
    report(5, worst <= 1e-9 && elapsed < 5000.0, "frame-bound oracle",
           "25 instances, rel err = " + fmt(worst) + " <= 1e-9, " + fmt(elapsed) + " ms < 5 s");
}

// ---------------------------------------------------------------------------
// 6. classification of translate systems
// ---------------------------------------------------------------------------
void criterion_classification() {
    const GroupPtr g = make_dihedral(4);
    std::vector<GSignal> delta;
    for (std::size_t h = 0; h < 2; ++h) delta.push_back(GSignal::delta(g, {0, h}));

    const FrameReport self = classify_pair(delta, delta);
    bool ok = self.dual && self.biorthogonal && self.riesz_dual && self.orthonormal_basis &&
              self.tight.has_value() && std::abs(*self.tight - 1.0) <= 1e-12;

    GaussianSource rng(205);
    const auto analysis = random_bank(g, 3, rng);
    const auto dual = design_dual(analysis);
    std::vector<GSignal> generators;
    for (const auto& h : analysis) generators.push_back(involution(h));
    const FrameReport redundant = classify_pair(generators, dual);
    ok = ok && redundant.dual && !redundant.biorthogonal;

    auto doubled = delta;
    doubled.insert(doubled.end(), delta.begin(), delta.end());
    const FrameReport two_tight = frame_bounds(doubled);
    ok = ok && two_tight.tight.has_value() && std::abs(*two_tight.tight - 2.0) <= 1e-12;

    report(6, ok, "translate-system classification",
           "delta ONB, redundant dual pair, 2-tight duplication");
}

// ---------------------------------------------------------------------------
// 7. the full dual family reconstructs; collapses at K = L
// ---------------------------------------------------------------------------
void criterion_dual_family() {
    const GroupPtr g = make_dihedral(4);
    GaussianSource rng(206);
    const auto analysis = random_bank(g, 3, rng);
    bool ok = true;
    for (int trial = 0; trial < 25 && ok; ++trial) {
        PolyphaseField u;
        u.group = g;
        u.kind = PolyphaseField::Kind::Synthesis;
        u.channels = 3;
        for (std::size_t gamma = 0; gamma < g->n_group().order(); ++gamma) {
            CMatrix m(2, 3);
            for (Eigen::Index r = 0; r < 2; ++r)
                for (Eigen::Index c = 0; c < 3; ++c) m(r, c) = rng.complex_normal();
            u.matrices.push_back(std::move(m));
        }
        ok = verify_perfect_reconstruction(analysis, dual_family(analysis, u)).perfect;
    }

    const auto square = random_bank(g, 2, rng);
    const auto base = design_dual(square);
    double collapse = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        CMatrix m(2, 2);
        for (Eigen::Index r = 0; r < 2; ++r)
            for (Eigen::Index c = 0; c < 2; ++c) m(r, c) = rng.complex_normal();
        const auto member = dual_family(square, PolyphaseField::constant_synthesis(g, m));
        for (std::size_t k = 0; k < member.size(); ++k) {
            for (std::size_t i = 0; i < member[k].values.size(); ++i) {
                collapse = std::max(collapse,
                                    std::abs(member[k].values[i] - base[k].values[i]));
            }
        }
    }
    report(7, ok && collapse <= 1e-12, "dual family",
           "25 members reconstruct; K=L collapse diff = " + fmt(collapse) + " <= 1e-12");
}

// ---------------------------------------------------------------------------
// 8. shifting property on the D8 and crystallographic representations
// ---------------------------------------------------------------------------
void criterion_shifting() {
    GaussianSource rng(207);
    double worst = 0.0;

    const GroupPtr d8 = make_dihedral(4);
    const UnitaryRep reg = UnitaryRep::regular(d8);
    const UnitaryRep doubled = UnitaryRep::direct_sum(reg, reg);
    CVector a(static_cast<Eigen::Index>(doubled.dim()));
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = rng.complex_normal();
    for (int trial = 0; trial < 100; ++trial) {
        const GSignal f = random_gsignal(d8, rng);
        const std::size_t m = rng.below(d8->n_group().order());
        worst = std::max(worst, shifting_deviation(doubled, a, f, m));
    }

    const CrystalModel crystal = build_crystal_group(dihedral_spec(8));
    const CVector gen = default_generator(crystal, 7);
    for (int trial = 0; trial < 100; ++trial) {
        const GSignal f = random_gsignal(crystal.group, rng);
        const std::size_t m = rng.below(crystal.group->n_group().order());
        worst = std::max(worst, shifting_deviation(crystal.rep, gen, f, m));
    }
    report(8, worst <= 1e-10, "shifting property",
           "200 random (f, m), max dev = " + fmt(worst) + " <= 1e-10");
}

// ---------------------------------------------------------------------------
// 9. end-to-end sampling on the q=8 dihedral model, both modes
// ---------------------------------------------------------------------------
void criterion_sampling_end_to_end() {
    const CrystalModel model = build_crystal_group(dihedral_spec(8));
    const CVector gen = default_generator(model, 7);

    const std::vector<CVector> probes{smooth_random_field(model, 8),
                                      smooth_random_field(model, 9)};
    const DemoReport average = demo_average(model, gen, probes, 100, 7);

    const DemoReport pointwise = demo_pointwise(model, gen, {0, 1}, 100, 7);

    const bool ok = average.max_relative_error <= 1e-9 &&
                    pointwise.max_relative_error <= 1e-9 &&
                    average.interpolation_deviation.has_value() &&
                    *average.interpolation_deviation <= 1e-10 &&
                    pointwise.interpolation_deviation.has_value() &&
                    *pointwise.interpolation_deviation <= 1e-10;
    report(9, ok, "sampling end to end",
           "avg err " + fmt(average.max_relative_error) + ", pw err " +
               fmt(pointwise.max_relative_error) + " <= 1e-9; interp " +
               fmt(std::max(*average.interpolation_deviation,
                            *pointwise.interpolation_deviation)) +
               " <= 1e-10");
}

// ---------------------------------------------------------------------------
// 10. K = L - 1 designs are always rejected
// ---------------------------------------------------------------------------
void criterion_channel_necessity() {
    GaussianSource rng(208);
    bool ok = true;
    double worst_lambda = 0.0;

    const GroupPtr d8 = make_dihedral(4);
    for (int trial = 0; trial < 25 && ok; ++trial) {
        const auto analysis = random_bank(d8, 1, rng); // K = 1 < L = 2
        try {
            design_dual(analysis);
            ok = false;
        } catch (const SingularFieldError& e) {
            worst_lambda = std::max(worst_lambda, e.lambda_min);
        }
    }

    CrystalSpec rotation;
    rotation.dimension = 2;
    rotation.grid_side = 8;
    rotation.lattice = {{2, 0}, {0, 2}};
    rotation.point_group = {
        {{1, 0}, {0, 1}}, {{0, -1}, {1, 0}}, {{-1, 0}, {0, -1}}, {{0, 1}, {-1, 0}}};
    const GroupPtr c4 = build_crystal_group(rotation).group;
    for (int trial = 0; trial < 25 && ok; ++trial) {
        const auto analysis = random_bank(c4, 3, rng); // K = 3 < L = 4
        try {
            design_dual(analysis);
            ok = false;
        } catch (const SingularFieldError& e) {
            worst_lambda = std::max(worst_lambda, e.lambda_min);
        }
    }
    report(10, ok, "channel-count necessity",
           "50 underdetermined designs rejected, max lambda_min = " + fmt(worst_lambda));
}

// ---------------------------------------------------------------------------
// 11. CLI determinism: byte-identical reports for identical (input, seed)
// ---------------------------------------------------------------------------
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_cli_determinism(const std::string& cli, const std::string& scratch) {
    const std::string out1 = scratch + "/report_a.json";
    const std::string out2 = scratch + "/report_b.json";
    const std::string base = cli + " sample demo-dihedral --q 16 --K 2 --trials 100 --seed 7";
    const int rc1 = std::system((base + " --out " + out1).c_str());
    const int rc2 = std::system((base + " --out " + out2).c_str());

    const std::string bytes1 = slurp(out1);
    const std::string bytes2 = slurp(out2);
    bool ok = rc1 == 0 && rc2 == 0 && !bytes1.empty() && bytes1 == bytes2;

    double max_error = 1.0;
    if (ok) {
        const auto parsed = json::parse(bytes1);
        max_error = parsed.at("demo").at("errors").at("max").get<double>();
        ok = max_error <= 1e-9;
    }

    // exit-code contract: PR holds on the delta bank, rejection on K < L
    {
        const GroupPtr g = make_dihedral(4);
        json group_spec = group_to_json(*g);
        std::vector<GSignal> delta;
        for (std::size_t h = 0; h < 2; ++h) delta.push_back(GSignal::delta(g, {0, h}));
        json bank;
        bank["analysis"] = bank_to_json(delta);
        bank["synthesis"] = bank_to_json(delta);
        std::ofstream(scratch + "/g.json") << write_json(group_spec);
        std::ofstream(scratch + "/bank.json") << write_json(bank);
        const int rc_pr = std::system((cli + " group validate --spec " + scratch +
                                       "/g.json --out " + scratch + "/val.json")
                                          .c_str());
        const int rc_ok = std::system((cli + " fb verify-pr --spec " + scratch +
                                       "/g.json --filters " + scratch + "/bank.json --out " +
                                       scratch + "/pr.json")
                                          .c_str());
        json single;
        single["filters"] = bank_to_json({delta[0]});
        std::ofstream(scratch + "/single.json") << write_json(single);
        const int rc_rej = std::system((cli + " fb design-dual --spec " + scratch +
                                        "/g.json --filters " + scratch +
                                        "/single.json --out " + scratch + "/dual.json 2>/dev/null")
                                           .c_str());
        ok = ok && rc_pr == 0 && rc_ok == 0 && WEXITSTATUS(rc_rej) == 3;
    }

    report(11, ok, "CLI determinism and exit codes",
           "byte-identical reports, demo max err = " + fmt(max_error) + " <= 1e-9");
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <groupfb-cli> <scratch-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string scratch = argv[2];

    criterion_group_validation();
    criterion_convolution_lemma();
    criterion_polyphase_equivalence();
    criterion_perfect_reconstruction();
    criterion_frame_oracle();
    criterion_classification();
    criterion_dual_family();
    criterion_shifting();
    criterion_sampling_end_to_end();
    criterion_channel_necessity();
    criterion_cli_determinism(cli, scratch);

    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all 11 criteria passed\n");
    return 0;
}

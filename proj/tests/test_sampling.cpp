#include <doctest.h>

#include "groupfb/sampling.hpp"
#include "testutil.hpp"

using namespace groupfb;
using testutil::max_abs_diff;

namespace {

CVector random_vector(std::size_t dim, GaussianSource& rng) {
    CVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
    return v;
}

/// Regular representation doubled to a 2|G|-dimensional state space.
UnitaryRep doubled_regular(const GroupPtr& g) {
    const UnitaryRep reg = UnitaryRep::regular(g);
    return UnitaryRep::direct_sum(reg, reg);
}

} // namespace

TEST_CASE("regular representation validates; corrupted ones do not") {
    const GroupPtr g = testutil::dihedral8();
    CHECK_NOTHROW(UnitaryRep::regular(g));

    // swap two matrices: still unitary, no longer a homomorphism
    {
        const UnitaryRep reg = UnitaryRep::regular(g);
        std::vector<CMatrix> ms;
        for (std::size_t i = 0; i < g->order(); ++i) ms.push_back(reg.matrix(g->element(i)));
        std::swap(ms[1], ms[2]);
        CHECK_THROWS_AS(UnitaryRep(g, std::move(ms)), ValidationError);
    }

    // non-unitary matrix
    {
        const UnitaryRep reg = UnitaryRep::regular(g);
        std::vector<CMatrix> ms;
        for (std::size_t i = 0; i < g->order(); ++i) ms.push_back(reg.matrix(g->element(i)));
        ms[3] *= 2.0;
        CHECK_THROWS_AS(UnitaryRep(g, std::move(ms)), ValidationError);
    }
}

TEST_CASE("dense non-permutation representations validate too") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep reg = UnitaryRep::regular(g);
    // conjugate by a fixed dense unitary: still a representation
    GaussianSource rng(60);
    CMatrix seed(8, 8);
    for (Eigen::Index r = 0; r < 8; ++r)
        for (Eigen::Index c = 0; c < 8; ++c) seed(r, c) = rng.complex_normal();
    const Eigen::HouseholderQR<CMatrix> qr(seed);
    const CMatrix unitary = qr.householderQ();
    std::vector<CMatrix> ms;
    for (std::size_t i = 0; i < g->order(); ++i)
        ms.push_back(unitary * reg.matrix(g->element(i)) * unitary.adjoint());
    CHECK_NOTHROW(UnitaryRep(g, std::move(ms)));
}

TEST_CASE("synthesis maps deltas to orbit vectors") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = doubled_regular(g);
    GaussianSource rng(61);
    const CVector a = random_vector(rep.dim(), rng);

    const CVector at_identity = synthesize_element(rep, a, GSignal::delta(g, g->identity()));
    CHECK((at_identity - a).norm() < 1e-12);

    const GroupElement pick{3, 1};
    const CVector moved = synthesize_element(rep, a, GSignal::delta(g, pick));
    CHECK((moved - rep.apply(pick, a)).norm() < 1e-12);
}

TEST_CASE("synthesis norms sit between the Riesz bounds") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = doubled_regular(g);
    GaussianSource rng(62);
    const CVector a = random_vector(rep.dim(), rng);
    const RieszBounds gram = orbit_gram_bounds(rep, a);
    REQUIRE(gram.riesz());
    for (int trial = 0; trial < 10; ++trial) {
        const GSignal coeffs = testutil::random_gsignal(g, rng);
        const double image_sq = synthesize_element(rep, a, coeffs).squaredNorm();
        const double coeff_sq = coeffs.norm() * coeffs.norm();
        CHECK(image_sq >= gram.lower * coeff_sq - 1e-9);
        CHECK(image_sq <= gram.upper * coeff_sq + 1e-9);
    }
}

TEST_CASE("degenerate generators are rejected") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = UnitaryRep::regular(g);
    // the constant vector is fixed by every permutation: orbit has rank 1
    const CVector ones = CVector::Ones(8);
    GaussianSource rng(63);
    CHECK_THROWS_AS(synthesize_element(rep, ones, testutil::random_gsignal(g, rng)),
                    RejectionError);
    CHECK_THROWS_AS(SamplingProblem(rep, ones, std::vector<CVector>{ones}), RejectionError);
}

TEST_CASE("shifting property holds exactly for deltas and numerically in general") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = doubled_regular(g);
    GaussianSource rng(64);
    const CVector a = random_vector(rep.dim(), rng);

    for (std::size_t m = 0; m < 4; ++m) {
        CHECK(shifting_deviation(rep, a, GSignal::delta(g, {2, 1}), m) < 1e-12);
        CHECK(shifting_deviation(rep, a, GSignal::delta(g, {0, 0}), m) < 1e-12);
    }
    for (int trial = 0; trial < 25; ++trial) {
        const GSignal f = testutil::random_gsignal(g, rng);
        const std::size_t m = rng.below(4);
        CHECK(shifting_deviation(rep, a, f, m) <= 1e-10);
    }
}

TEST_CASE("samples of zero vanish and self-probes report their energy") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = doubled_regular(g);
    GaussianSource rng(65);
    const CVector a = random_vector(rep.dim(), rng);
    std::vector<CVector> probes{random_vector(rep.dim(), rng), random_vector(rep.dim(), rng)};
    const SamplingProblem problem(rep, a, probes);

    CHECK(problem.samples(CVector::Zero(static_cast<Eigen::Index>(rep.dim())))
              .cwiseAbs()
              .maxCoeff() == 0.0);

    const std::size_t m0 = 2;
    const CVector x = rep.apply({m0, g->h_group().identity()}, probes[0]);
    const cdouble sample = problem.samples(x)(0, static_cast<Eigen::Index>(m0));
    CHECK(std::abs(sample - cdouble{probes[0].squaredNorm(), 0.0}) < 1e-12);
}

TEST_CASE("average samples equal the decimated convolution with the derived filters") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = doubled_regular(g);
    GaussianSource rng(66);
    const CVector a = random_vector(rep.dim(), rng);
    std::vector<CVector> probes{random_vector(rep.dim(), rng), random_vector(rep.dim(), rng),
                                random_vector(rep.dim(), rng)};
    const SamplingProblem problem(rep, a, probes);

    for (int trial = 0; trial < 10; ++trial) {
        const GSignal alpha = testutil::random_gsignal(g, rng);
        const CVector x = problem.synthesize(alpha);
        const CMatrix s = problem.samples(x);
        for (std::size_t k = 0; k < problem.channel_count(); ++k) {
            const NSignal channel = decimate(convolve(alpha, problem.derived_filters()[k]));
            for (std::size_t n = 0; n < channel.values.size(); ++n) {
                CHECK(std::abs(s(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) -
                               channel[n]) < 1e-10);
            }
        }
    }
}

TEST_CASE("pointwise samples run through the involuted filters") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = UnitaryRep::regular(g);
    GaussianSource rng(67);
    const CVector a = random_vector(rep.dim(), rng);
    const SamplingProblem problem(rep, a, std::vector<std::size_t>{0, 5});

    // stored filters follow the pointwise definition
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t i = 0; i < g->order(); ++i) {
            const GroupElement e = g->element(i);
            const cdouble expected =
                std::conj(rep.apply(e, a)(static_cast<Eigen::Index>(problem.points()[k])));
            CHECK(std::abs(problem.derived_filters()[k].values[i] - expected) < 1e-13);
        }
    }

    // the bank filters are their involutions, and the sample identity holds
    const auto bank = problem.analysis_filters();
    for (int trial = 0; trial < 10; ++trial) {
        const GSignal alpha = testutil::random_gsignal(g, rng);
        const CVector x = problem.synthesize(alpha);
        const CMatrix s = problem.samples(x);
        for (std::size_t k = 0; k < problem.channel_count(); ++k) {
            const NSignal channel = decimate(convolve(alpha, bank[k]));
            for (std::size_t n = 0; n < channel.values.size(); ++n) {
                CHECK(std::abs(s(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) -
                               channel[n]) < 1e-10);
                // and the paper-form inner products give the same numbers
                const cdouble ip = alpha.inner(translate(problem.derived_filters()[k], n));
                CHECK(std::abs(ip - channel[n]) < 1e-10);
            }
        }
    }
}

TEST_CASE("orbit-basis probes make the identity bank") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = UnitaryRep::regular(g);
    CVector a = CVector::Zero(8);
    a(static_cast<Eigen::Index>(g->index_of(g->identity()))) = 1.0;
    // probes U(0, h_k) a give h_k = delta_{(0, h_k)}
    const SamplingProblem problem = expand_fixed_probe(rep, a, a);
    const auto bank = problem.analysis_filters();
    for (std::size_t k = 0; k < bank.size(); ++k) {
        CHECK(max_abs_diff(bank[k].values, GSignal::delta(g, {0, k}).values) < 1e-14);
    }

    const ReconstructionKit kit = build_reconstruction(problem);
    GaussianSource rng(68);
    for (int trial = 0; trial < 5; ++trial) {
        const GSignal alpha = testutil::random_gsignal(g, rng, true);
        const CVector x = problem.synthesize(alpha);
        const CVector rebuilt = reconstruct(problem, kit, problem.samples(x));
        CHECK((rebuilt - x).norm() < 1e-12);
    }
}

TEST_CASE("fixed-probe expansion matches the explicit probe list") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = doubled_regular(g);
    GaussianSource rng(69);
    const CVector a = random_vector(rep.dim(), rng);
    const CVector b = random_vector(rep.dim(), rng);

    const SamplingProblem expanded = expand_fixed_probe(rep, a, b);
    CHECK(expanded.channel_count() == g->h_group().order());

    std::vector<CVector> explicit_probes;
    for (std::size_t h = 0; h < g->h_group().order(); ++h)
        explicit_probes.push_back(rep.apply({0, h}, b));
    const SamplingProblem manual(rep, a, explicit_probes);

    for (std::size_t k = 0; k < expanded.channel_count(); ++k) {
        CHECK(max_abs_diff(expanded.derived_filters()[k].values,
                           manual.derived_filters()[k].values) < 1e-13);
    }
}

TEST_CASE("reconstruction recovers subspace elements and interpolates at K = L") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = doubled_regular(g);
    GaussianSource rng(70);
    const CVector a = random_vector(rep.dim(), rng);
    std::vector<CVector> probes{random_vector(rep.dim(), rng), random_vector(rep.dim(), rng)};
    const SamplingProblem problem(rep, a, probes);
    const ReconstructionKit kit = build_reconstruction(problem);

    CHECK(kit.analysis_bounds.lower > 0.0);
    CHECK(kit.subspace_frame.lower > 0.0);
    CHECK(kit.subspace_frame.upper >= kit.subspace_frame.lower);

    double max_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const GSignal alpha = testutil::random_gsignal(g, rng, true);
        const CVector x = problem.synthesize(alpha);
        const CVector rebuilt = reconstruct(problem, kit, problem.samples(x));
        max_err = std::max(max_err, (rebuilt - x).norm() / x.norm());
    }
    CHECK(max_err < 1e-9);

    // interpolation: sampling a reconstruction vector gives a Kronecker delta
    for (std::size_t kp = 0; kp < kit.vectors.size(); ++kp) {
        const CMatrix s = problem.samples(kit.vectors[kp]);
        for (std::size_t k = 0; k < kit.vectors.size(); ++k) {
            for (std::size_t n = 0; n < g->n_group().order(); ++n) {
                const cdouble expected =
                    (k == kp && n == 0) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
                CHECK(std::abs(s(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) -
                               expected) < 1e-10);
            }
        }
    }
}

TEST_CASE("coefficient-domain expansion from the samples") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = doubled_regular(g);
    GaussianSource rng(71);
    const CVector a = random_vector(rep.dim(), rng);
    std::vector<CVector> probes{random_vector(rep.dim(), rng), random_vector(rep.dim(), rng),
                                random_vector(rep.dim(), rng)};
    const SamplingProblem problem(rep, a, probes);
    const ReconstructionKit kit = build_reconstruction(problem);

    const GSignal alpha = testutil::random_gsignal(g, rng, true);
    const CMatrix s = problem.samples(problem.synthesize(alpha));
    GSignal rebuilt = GSignal::zeros(g);
    for (std::size_t k = 0; k < kit.synthesis.size(); ++k) {
        for (std::size_t n = 0; n < g->n_group().order(); ++n) {
            const GSignal term = translate(kit.synthesis[k], n);
            const cdouble coeff = s(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < rebuilt.values.size(); ++i)
                rebuilt.values[i] += coeff * term.values[i];
        }
    }
    CHECK(max_abs_diff(rebuilt.values, alpha.values) < 1e-10);
}

TEST_CASE("insufficient channels are rejected through the analysis bounds") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = doubled_regular(g);
    GaussianSource rng(72);
    const CVector a = random_vector(rep.dim(), rng);
    const SamplingProblem problem(rep, a,
                                  std::vector<CVector>{random_vector(rep.dim(), rng)});
    CHECK_THROWS_AS(build_reconstruction(problem), SingularFieldError);
}

TEST_CASE("dual family parameter flows through reconstruction") {
    const GroupPtr g = testutil::dihedral8();
    const UnitaryRep rep = doubled_regular(g);
    GaussianSource rng(73);
    const CVector a = random_vector(rep.dim(), rng);
    std::vector<CVector> probes{random_vector(rep.dim(), rng), random_vector(rep.dim(), rng),
                                random_vector(rep.dim(), rng)};
    const SamplingProblem problem(rep, a, probes);

    CMatrix u(2, 3);
    for (Eigen::Index r = 0; r < 2; ++r)
        for (Eigen::Index c = 0; c < 3; ++c) u(r, c) = rng.complex_normal();
    const PolyphaseField parameter = PolyphaseField::constant_synthesis(g, u);
    const ReconstructionKit kit = build_reconstruction(problem, &parameter);

    const GSignal alpha = testutil::random_gsignal(g, rng, true);
    const CVector x = problem.synthesize(alpha);
    const CVector rebuilt = reconstruct(problem, kit, problem.samples(x));
    CHECK((rebuilt - x).norm() / x.norm() < 1e-9);
}

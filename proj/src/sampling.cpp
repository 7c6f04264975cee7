#include "groupfb/sampling.hpp"

#include <cmath>
#include <string>

#include "groupfb/parallel.hpp"

namespace groupfb {

namespace {

constexpr double kRepTolerance = 1e-10;

struct GeneralizedPermutation {
    std::vector<std::size_t> row;
    std::vector<cdouble> phase;
};

std::optional<GeneralizedPermutation> as_generalized_permutation(const CMatrix& m) {
    GeneralizedPermutation gp;
    gp.row.resize(static_cast<std::size_t>(m.cols()));
    gp.phase.resize(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        int hits = 0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (std::abs(m(r, c)) > 1e-12) {
                if (++hits > 1) return std::nullopt;
                gp.row[static_cast<std::size_t>(c)] = static_cast<std::size_t>(r);
                gp.phase[static_cast<std::size_t>(c)] = m(r, c);
            }
        }
        if (hits == 0) return std::nullopt;
    }
    return gp;
}

} // namespace

UnitaryRep::UnitaryRep(GroupPtr group, std::vector<CMatrix> matrices)
    : group_(std::move(group)), matrices_(std::move(matrices)) {
    if (matrices_.size() != group_->order())
        throw ValidationError("need one representation matrix per group element");
    dim_ = static_cast<std::size_t>(matrices_.front().rows());
    for (const auto& m : matrices_) {
        if (static_cast<std::size_t>(m.rows()) != dim_ ||
            static_cast<std::size_t>(m.cols()) != dim_)
            throw ValidationError("representation matrices must be square of equal size");
    }
    validate();
}

void UnitaryRep::validate() const {
    const auto d = static_cast<Eigen::Index>(dim_);
    for (std::size_t i = 0; i < matrices_.size(); ++i) {
        const double dev =
            (matrices_[i].adjoint() * matrices_[i] - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
        if (dev > kRepTolerance)
            throw ValidationError("representation matrix " + std::to_string(i) +
                                  " is not unitary (deviation " + std::to_string(dev) + ")");
    }

    std::vector<GeneralizedPermutation> sparse;
    sparse.reserve(matrices_.size());
    bool all_sparse = true;
    for (const auto& m : matrices_) {
        auto gp = as_generalized_permutation(m);
        if (!gp) {
            all_sparse = false;
            break;
        }
        sparse.push_back(std::move(*gp));
    }

    const std::size_t order = group_->order();
    for (std::size_t i = 0; i < order; ++i) {
        const GroupElement g1 = group_->element(i);
        for (std::size_t j = 0; j < order; ++j) {
            const GroupElement g2 = group_->element(j);
            const std::size_t k = group_->index_of(group_->multiply(g1, g2));
            if (all_sparse) {
                const auto& a = sparse[i];
                const auto& b = sparse[j];
                const auto& c = sparse[k];
                for (std::size_t col = 0; col < dim_; ++col) {
                    const std::size_t via = a.row[b.row[col]];
                    const cdouble phase = a.phase[b.row[col]] * b.phase[col];
                    if (via != c.row[col] || std::abs(phase - c.phase[col]) > kRepTolerance)
                        throw ValidationError("not a representation: U(g1)U(g2) != U(g1 g2)");
                }
            } else {
                const double dev =
                    (matrices_[i] * matrices_[j] - matrices_[k]).cwiseAbs().maxCoeff();
                if (dev > kRepTolerance)
                    throw ValidationError("not a representation: U(g1)U(g2) != U(g1 g2)"
                                          " (deviation " +
                                          std::to_string(dev) + ")");
            }
        }
    }
}

UnitaryRep UnitaryRep::regular(const GroupPtr& group) {
    const std::size_t order = group->order();
    std::vector<CMatrix> matrices(order);
    for (std::size_t i = 0; i < order; ++i) {
        const GroupElement g = group->element(i);
        CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(order),
                                  static_cast<Eigen::Index>(order));
        for (std::size_t j = 0; j < order; ++j) {
            const std::size_t target = group->index_of(group->multiply(g, group->element(j)));
            m(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(j)) = 1.0;
        }
        matrices[i] = std::move(m);
    }
    return UnitaryRep(group, std::move(matrices));
}

UnitaryRep UnitaryRep::direct_sum(const UnitaryRep& a, const UnitaryRep& b) {
    if (!(*a.group_ == *b.group_))
        throw ValidationError("direct sum needs representations of the same group");
    const auto da = static_cast<Eigen::Index>(a.dim_);
    const auto db = static_cast<Eigen::Index>(b.dim_);
    std::vector<CMatrix> matrices(a.matrices_.size());
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        CMatrix m = CMatrix::Zero(da + db, da + db);
        m.topLeftCorner(da, da) = a.matrices_[i];
        m.bottomRightCorner(db, db) = b.matrices_[i];
        matrices[i] = std::move(m);
    }
    return UnitaryRep(a.group_, std::move(matrices));
}

namespace {

CVector raw_synthesize(const UnitaryRep& rep, const CVector& generator, const GSignal& coeffs) {
    CVector out = CVector::Zero(static_cast<Eigen::Index>(rep.dim()));
    for (std::size_t i = 0; i < coeffs.values.size(); ++i) {
        const cdouble w = coeffs.values[i];
        if (w == cdouble{0.0, 0.0}) continue;
        out += w * rep.apply(rep.group().element(i), generator);
    }
    return out;
}

} // namespace

RieszBounds orbit_gram_bounds(const UnitaryRep& rep, const CVector& generator) {
    const std::size_t order = rep.group().order();
    CMatrix orbit(static_cast<Eigen::Index>(rep.dim()), static_cast<Eigen::Index>(order));
    for (std::size_t i = 0; i < order; ++i) {
        orbit.col(static_cast<Eigen::Index>(i)) = rep.apply(rep.group().element(i), generator);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(orbit.adjoint() * orbit);
    return {std::max(solver.eigenvalues().minCoeff(), 0.0), solver.eigenvalues().maxCoeff()};
}

CVector synthesize_element(const UnitaryRep& rep, const CVector& generator, const GSignal& coeffs,
                           double tolerance) {
    if (!(*coeffs.group == rep.group()))
        throw ValidationError("coefficient signal lives on a different group");
    if (static_cast<std::size_t>(generator.size()) != rep.dim())
        throw ValidationError("generator dimension does not match the representation");
    const RieszBounds gram = orbit_gram_bounds(rep, generator);
    if (!gram.riesz(tolerance))
        throw RejectionError("degenerate generator: the orbit Gram matrix has lower bound " +
                             std::to_string(gram.lower) + " against upper bound " +
                             std::to_string(gram.upper));
    return raw_synthesize(rep, generator, coeffs);
}

double shifting_deviation(const UnitaryRep& rep, const CVector& generator, const GSignal& coeffs,
                          std::size_t m) {
    const CVector left = raw_synthesize(rep, generator, translate(coeffs, m));
    const CVector right =
        rep.apply({m, rep.group().h_group().identity()}, raw_synthesize(rep, generator, coeffs));
    return (left - right).norm();
}

SamplingProblem::SamplingProblem(UnitaryRep rep, CVector generator, std::vector<CVector> probes,
                                 double riesz_tolerance)
    : rep_(std::move(rep)), generator_(std::move(generator)), mode_(SampleMode::Average),
      probes_(std::move(probes)) {
    if (probes_.empty()) throw ValidationError("sampling problem needs at least one probe");
    for (const auto& b : probes_) {
        if (static_cast<std::size_t>(b.size()) != rep_.dim())
            throw ValidationError("probe dimension does not match the representation");
    }
    if (static_cast<std::size_t>(generator_.size()) != rep_.dim())
        throw ValidationError("generator dimension does not match the representation");
    gram_ = orbit_gram_bounds(rep_, generator_);
    if (!gram_.riesz(riesz_tolerance))
        throw RejectionError("degenerate generator: orbit is not a Riesz sequence");
    derive_filters();
}

SamplingProblem::SamplingProblem(UnitaryRep rep, CVector generator,
                                 std::vector<std::size_t> points, double riesz_tolerance)
    : rep_(std::move(rep)), generator_(std::move(generator)), mode_(SampleMode::Pointwise),
      points_(std::move(points)) {
    if (points_.empty()) throw ValidationError("sampling problem needs at least one point");
    for (auto t : points_) {
        if (t >= rep_.dim())
            throw ValidationError("sample coordinate " + std::to_string(t) + " is out of range");
    }
    if (static_cast<std::size_t>(generator_.size()) != rep_.dim())
        throw ValidationError("generator dimension does not match the representation");
    gram_ = orbit_gram_bounds(rep_, generator_);
    if (!gram_.riesz(riesz_tolerance))
        throw RejectionError("degenerate generator: orbit is not a Riesz sequence");
    derive_filters();
}

void SamplingProblem::derive_filters() {
    const GroupPtr group = rep_.group_ptr();
    const std::size_t count = mode_ == SampleMode::Average ? probes_.size() : points_.size();
    filters_.assign(count, GSignal::zeros(group));
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t i = 0; i < group->order(); ++i) {
            const GroupElement g = group->element(i);
            if (mode_ == SampleMode::Average) {
                filters_[k].values[i] = rep_.apply(g, probes_[k]).dot(generator_);
            } else {
                filters_[k].values[i] =
                    std::conj(rep_.apply(g, generator_)(static_cast<Eigen::Index>(points_[k])));
            }
        }
    }
}

std::vector<GSignal> SamplingProblem::analysis_filters() const {
    if (mode_ == SampleMode::Average) return filters_;
    std::vector<GSignal> bank;
    bank.reserve(filters_.size());
    for (const auto& f : filters_) bank.push_back(involution(f));
    return bank;
}

CVector SamplingProblem::synthesize(const GSignal& coeffs) const {
    if (!(*coeffs.group == rep_.group()))
        throw ValidationError("coefficient signal lives on a different group");
    return raw_synthesize(rep_, generator_, coeffs);
}

CMatrix SamplingProblem::samples(const CVector& x) const {
    if (static_cast<std::size_t>(x.size()) != rep_.dim())
        throw ValidationError("state vector dimension does not match the representation");
    const auto& group = rep_.group();
    const std::size_t n_order = group.n_group().order();
    const std::size_t identity = group.h_group().identity();
    const std::size_t count = channel_count();
    CMatrix out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(n_order));
    for (std::size_t n = 0; n < n_order; ++n) {
        if (mode_ == SampleMode::Average) {
            for (std::size_t k = 0; k < count; ++k) {
                out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) =
                    rep_.apply({n, identity}, probes_[k]).dot(x);
            }
        } else {
            const CVector shifted = rep_.apply({group.n_group().negate(n), identity}, x);
            for (std::size_t k = 0; k < count; ++k) {
                out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) =
                    shifted(static_cast<Eigen::Index>(points_[k]));
            }
        }
    }
    return out;
}

ReconstructionKit build_reconstruction(const SamplingProblem& problem,
                                       const PolyphaseField* family_parameter,
                                       double frame_tolerance) {
    const std::vector<GSignal> bank = problem.analysis_filters();
    const PolyphaseField field = analysis_field(bank);

    ReconstructionKit kit;
    kit.analysis_bounds = spectral_bounds(field);

    if (family_parameter != nullptr) {
        kit.synthesis = dual_family(bank, *family_parameter, frame_tolerance);
    } else {
        kit.synthesis = design_dual(bank, frame_tolerance);
    }

    kit.vectors.reserve(kit.synthesis.size());
    for (const auto& g : kit.synthesis) kit.vectors.push_back(problem.synthesize(g));

    // Frame bounds of {U(n, 1_H) c_k} on the invariant subspace, computed in
    // the coefficient parametrization: eigenvalues of the analysis quadratic
    // form against the orbit Gram.
    const auto& rep = problem.rep();
    const auto& group = rep.group();
    const std::size_t order = group.order();
    const std::size_t n_order = group.n_group().order();
    const std::size_t identity = group.h_group().identity();

    CMatrix orbit(static_cast<Eigen::Index>(rep.dim()), static_cast<Eigen::Index>(order));
    for (std::size_t i = 0; i < order; ++i)
        orbit.col(static_cast<Eigen::Index>(i)) = rep.apply(group.element(i), problem.generator());

    CMatrix frame_vectors(static_cast<Eigen::Index>(rep.dim()),
                          static_cast<Eigen::Index>(kit.vectors.size() * n_order));
    Eigen::Index col = 0;
    for (const auto& c : kit.vectors) {
        for (std::size_t n = 0; n < n_order; ++n) {
            frame_vectors.col(col++) = rep.apply({n, identity}, c);
        }
    }

    const CMatrix cross = orbit.adjoint() * frame_vectors;
    Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> solver(cross * cross.adjoint(),
                                                             orbit.adjoint() * orbit);
    kit.subspace_frame.lower = std::max(solver.eigenvalues().minCoeff(), 0.0);
    kit.subspace_frame.upper = solver.eigenvalues().maxCoeff();
    return kit;
}

CVector reconstruct(const SamplingProblem& problem, const ReconstructionKit& kit,
                    const CMatrix& sample_array) {
    const auto& rep = problem.rep();
    const auto& group = rep.group();
    const std::size_t n_order = group.n_group().order();
    const std::size_t identity = group.h_group().identity();
    if (static_cast<std::size_t>(sample_array.rows()) != kit.vectors.size() ||
        static_cast<std::size_t>(sample_array.cols()) != n_order)
        throw ValidationError("sample array has the wrong shape");

    CVector out = CVector::Zero(static_cast<Eigen::Index>(rep.dim()));
    for (std::size_t k = 0; k < kit.vectors.size(); ++k) {
        for (std::size_t n = 0; n < n_order; ++n) {
            out += sample_array(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) *
                   rep.apply({n, identity}, kit.vectors[k]);
        }
    }
    return out;
}

SamplingProblem expand_fixed_probe(const UnitaryRep& rep, const CVector& generator,
                                   const CVector& probe, double riesz_tolerance) {
    const auto& group = rep.group();
    std::vector<CVector> probes;
    probes.reserve(group.h_group().order());
    for (std::size_t h = 0; h < group.h_group().order(); ++h) {
        probes.push_back(rep.apply({group.n_group().zero(), h}, probe));
    }
    return SamplingProblem(rep, generator, std::move(probes), riesz_tolerance);
}

} // namespace groupfb

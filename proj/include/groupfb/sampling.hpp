#pragma once

#include <optional>
#include <vector>

#include "groupfb/polyphase.hpp"

namespace groupfb {

/// Unitary representation of a semidirect product on C^D, one matrix per
/// group element. Construction verifies unitarity and the homomorphism
/// property exhaustively; representations whose matrices are generalized
/// permutations are verified through their sparse structure.
class UnitaryRep {
public:
    UnitaryRep(GroupPtr group, std::vector<CMatrix> matrices);

    const SemidirectGroup& group() const { return *group_; }
    const GroupPtr& group_ptr() const { return group_; }
    std::size_t dim() const { return dim_; }

    const CMatrix& matrix(const GroupElement& g) const {
        return matrices_[group_->index_of(g)];
    }
    CVector apply(const GroupElement& g, const CVector& x) const { return matrix(g) * x; }

    /// Left regular representation on C^{|G|}.
    static UnitaryRep regular(const GroupPtr& group);

    /// Block-diagonal sum acting on the concatenated state spaces.
    static UnitaryRep direct_sum(const UnitaryRep& a, const UnitaryRep& b);

private:
    void validate() const;

    GroupPtr group_;
    std::size_t dim_;
    std::vector<CMatrix> matrices_;
};

/// Extreme eigenvalues of the Gram matrix of the orbit {U(g) a}.
struct RieszBounds {
    double lower = 0.0;
    double upper = 0.0;

    bool riesz(double tolerance = kFrameTolerance) const {
        return upper > 0.0 && lower > tolerance * upper;
    }
};

RieszBounds orbit_gram_bounds(const UnitaryRep& rep, const CVector& generator);

/// Coefficient-to-subspace map sum_g coeffs(g) U(g) a. Throws a rejection
/// when the orbit Gram is effectively singular, since the map is then not
/// an isomorphism onto its image.
CVector synthesize_element(const UnitaryRep& rep, const CVector& generator, const GSignal& coeffs,
                           double tolerance = kFrameTolerance);

/// Residual of the shifting property: the coefficient translation T_m must
/// intertwine with U(m, 1_H) through the synthesis map.
double shifting_deviation(const UnitaryRep& rep, const CVector& generator, const GSignal& coeffs,
                          std::size_t m);

enum class SampleMode { Average, Pointwise };

/// A generalized-sampling instance: a representation, a generator of the
/// invariant subspace, and either probe vectors (average samples) or state
/// coordinates (pointwise samples). The derived channel filters follow the
/// mode:
///   average    h_k(n,h) = <a, U(n,h) b_k>
///   pointwise  h_k(m,h) = conj([U(m,h) a](t_k))
/// The filter bank itself always consumes the average-form filters; in
/// pointwise mode those are the involutions of the stored h_k, equivalently
/// the average filters of delta probes at the sample coordinates.
class SamplingProblem {
public:
    SamplingProblem(UnitaryRep rep, CVector generator, std::vector<CVector> probes,
                    double riesz_tolerance = kFrameTolerance);
    SamplingProblem(UnitaryRep rep, CVector generator, std::vector<std::size_t> points,
                    double riesz_tolerance = kFrameTolerance);

    const UnitaryRep& rep() const { return rep_; }
    const CVector& generator() const { return generator_; }
    SampleMode mode() const { return mode_; }
    std::size_t channel_count() const { return filters_.size(); }
    const std::vector<CVector>& probes() const { return probes_; }
    const std::vector<std::size_t>& points() const { return points_; }
    const RieszBounds& gram_bounds() const { return gram_; }

    /// The mode-specific h_k.
    const std::vector<GSignal>& derived_filters() const { return filters_; }

    /// Filters to feed the analysis bank so that channel k reproduces the
    /// sample sequence L_k.
    std::vector<GSignal> analysis_filters() const;

    /// T_{U,a} without re-checking the Riesz bound (validated on
    /// construction).
    CVector synthesize(const GSignal& coeffs) const;

    /// K x |N| sample array of an arbitrary state vector.
    CMatrix samples(const CVector& x) const;

private:
    void derive_filters();

    UnitaryRep rep_;
    CVector generator_;
    SampleMode mode_;
    std::vector<CVector> probes_;
    std::vector<std::size_t> points_;
    std::vector<GSignal> filters_;
    RieszBounds gram_;
};

/// Dual filters, reconstruction vectors and the frame diagnostics of
/// {U(n, 1_H) c_k} on the invariant subspace.
struct ReconstructionKit {
    std::vector<GSignal> synthesis;
    std::vector<CVector> vectors;
    SpectralBounds analysis_bounds;
    RieszBounds subspace_frame;
};

/// Designs the dual bank (pseudo-inverse by default, or through the free
/// parameter field) and lifts it to reconstruction vectors.
ReconstructionKit build_reconstruction(const SamplingProblem& problem,
                                       const PolyphaseField* family_parameter = nullptr,
                                       double frame_tolerance = kFrameTolerance);

/// x_hat = sum_k sum_n samples(k, n) U(n, 1_H) c_k.
CVector reconstruct(const SamplingProblem& problem, const ReconstructionKit& kit,
                    const CMatrix& sample_array);

/// Single fixed probe b expanded over H: b_k = U(0, h_k) b, K = |H|.
SamplingProblem expand_fixed_probe(const UnitaryRep& rep, const CVector& generator,
                                   const CVector& probe,
                                   double riesz_tolerance = kFrameTolerance);

} // namespace groupfb

#include "groupfb/polyphase.hpp"

#include <cmath>
#include <string>

#include "groupfb/parallel.hpp"

namespace groupfb {

namespace {

void require_bank(const std::vector<GSignal>& filters) {
    if (filters.empty()) throw ValidationError("filter bank needs at least one channel");
    for (const auto& f : filters) require_same_group(filters.front(), f);
}

/// DFT of every slice selected by `component`, laid out into the field.
PolyphaseField build_field(const std::vector<GSignal>& filters, PolyphaseField::Kind kind,
                           bool analysis_components, bool conjugate_entries) {
    require_bank(filters);
    const GroupPtr group = filters.front().group;
    const auto& n_group = group->n_group();
    const std::size_t K = filters.size();
    const std::size_t L = group->h_group().order();
    const std::size_t n_order = n_group.order();

    PolyphaseField field;
    field.group = group;
    field.kind = kind;
    field.channels = K;
    const std::size_t rows = field.rows();
    const std::size_t cols = field.cols();
    field.matrices.assign(n_order, CMatrix::Zero(static_cast<Eigen::Index>(rows),
                                                 static_cast<Eigen::Index>(cols)));

    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < L; ++i) {
            const NSignal slice = analysis_components ? analysis_component(filters[k], i)
                                                      : polyphase_slice(filters[k], i);
            std::vector<cdouble> symbol = fourier(n_group, slice.values);
            for (std::size_t gamma = 0; gamma < n_order; ++gamma) {
                cdouble value = symbol[gamma];
                if (conjugate_entries) value = std::conj(value);
                if (kind == PolyphaseField::Kind::Analysis) {
                    field.matrices[gamma](static_cast<Eigen::Index>(k),
                                          static_cast<Eigen::Index>(i)) = value;
                } else {
                    field.matrices[gamma](static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(k)) = value;
                }
            }
        }
    }
    return field;
}

struct HermitianInverse {
    std::vector<CMatrix> inverse; // (H*H)^{-1} per gamma
    SpectralBounds bounds;
};

/// Eigendecomposes H*(gamma)H(gamma) for every gamma, records the spectral
/// extremes, and inverts through the eigenpairs. Throws when the field is
/// effectively rank deficient somewhere.
HermitianInverse invert_gram_field(const PolyphaseField& analysis, double frame_tolerance) {
    if (analysis.kind != PolyphaseField::Kind::Analysis)
        throw ValidationError("expected an analysis-kind polyphase field");
    const std::size_t n_order = analysis.matrices.size();
    const auto L = static_cast<Eigen::Index>(analysis.h_order());

    std::vector<CMatrix> eigvecs(n_order);
    std::vector<Eigen::VectorXd> eigvals(n_order);
    parallel_for(n_order, [&](std::size_t gamma) {
        const CMatrix gram = analysis.matrices[gamma].adjoint() * analysis.matrices[gamma];
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram);
        eigvecs[gamma] = solver.eigenvectors();
        eigvals[gamma] = solver.eigenvalues();
    });

    HermitianInverse result;
    result.bounds.lower = eigvals[0](0);
    result.bounds.upper = eigvals[0](L - 1);
    result.bounds.argmin_gamma = 0;
    for (std::size_t gamma = 1; gamma < n_order; ++gamma) {
        if (eigvals[gamma](0) < result.bounds.lower) {
            result.bounds.lower = eigvals[gamma](0);
            result.bounds.argmin_gamma = gamma;
        }
        result.bounds.upper = std::max(result.bounds.upper, eigvals[gamma](L - 1));
    }

    if (result.bounds.lower <= frame_tolerance * result.bounds.upper ||
        result.bounds.upper <= 0.0) {
        throw SingularFieldError(
            "samples insufficient: lower spectral bound " +
                std::to_string(result.bounds.lower) + " at character " +
                std::to_string(result.bounds.argmin_gamma) +
                " is below tolerance; the analysis matrix is rank deficient there",
            result.bounds.argmin_gamma, result.bounds.lower);
    }

    result.inverse.resize(n_order);
    parallel_for(n_order, [&](std::size_t gamma) {
        Eigen::VectorXd reciprocal = eigvals[gamma].cwiseInverse();
        result.inverse[gamma] = eigvecs[gamma] * reciprocal.asDiagonal() * eigvecs[gamma].adjoint();
    });
    return result;
}

PolyphaseField pseudo_inverse_from(const PolyphaseField& analysis,
                                   const HermitianInverse& gram) {
    PolyphaseField dual;
    dual.group = analysis.group;
    dual.kind = PolyphaseField::Kind::Synthesis;
    dual.channels = analysis.channels;
    dual.matrices.resize(analysis.matrices.size());
    for (std::size_t gamma = 0; gamma < analysis.matrices.size(); ++gamma) {
        dual.matrices[gamma] = gram.inverse[gamma] * analysis.matrices[gamma].adjoint();
    }
    return dual;
}

} // namespace

PolyphaseField PolyphaseField::constant_synthesis(const GroupPtr& group, const CMatrix& matrix) {
    if (static_cast<std::size_t>(matrix.rows()) != group->h_group().order())
        throw ValidationError("synthesis field rows must equal |H|");
    PolyphaseField field;
    field.group = group;
    field.kind = Kind::Synthesis;
    field.channels = static_cast<std::size_t>(matrix.cols());
    field.matrices.assign(group->n_group().order(), matrix);
    return field;
}

PolyphaseField analysis_field(const std::vector<GSignal>& filters) {
    return build_field(filters, PolyphaseField::Kind::Analysis, true, false);
}

PolyphaseField synthesis_field(const std::vector<GSignal>& filters) {
    return build_field(filters, PolyphaseField::Kind::Synthesis, false, false);
}

PolyphaseField translate_frame_field(const std::vector<GSignal>& generators) {
    return build_field(generators, PolyphaseField::Kind::Analysis, false, true);
}

std::vector<GSignal> filters_from_synthesis_field(const PolyphaseField& field) {
    if (field.kind != PolyphaseField::Kind::Synthesis)
        throw ValidationError("expected a synthesis-kind polyphase field");
    const GroupPtr group = field.group;
    const auto& n_group = group->n_group();
    const std::size_t n_order = n_group.order();
    const std::size_t L = group->h_group().order();

    std::vector<GSignal> filters(field.channels, GSignal::zeros(group));
    std::vector<cdouble> symbol(n_order);
    for (std::size_t k = 0; k < field.channels; ++k) {
        for (std::size_t i = 0; i < L; ++i) {
            for (std::size_t gamma = 0; gamma < n_order; ++gamma) {
                symbol[gamma] = field.matrices[gamma](static_cast<Eigen::Index>(i),
                                                      static_cast<Eigen::Index>(k));
            }
            const std::vector<cdouble> slice = inverse_fourier(n_group, symbol);
            for (std::size_t n = 0; n < n_order; ++n) filters[k].at(n, i) = slice[n];
        }
    }
    return filters;
}

FilterBankRun run_filter_bank(const GSignal& input, const std::vector<GSignal>& analysis,
                              const std::vector<GSignal>& synthesis) {
    require_bank(analysis);
    require_bank(synthesis);
    require_same_group(input, analysis.front());
    require_same_group(input, synthesis.front());
    if (analysis.size() != synthesis.size())
        throw ValidationError("analysis and synthesis banks must have the same channel count");

    FilterBankRun run{GSignal::zeros(input.group), {}};
    run.channels.reserve(analysis.size());
    for (std::size_t k = 0; k < analysis.size(); ++k) {
        NSignal channel = decimate(convolve(input, analysis[k]));
        const GSignal lifted = convolve(expand(input.group, channel), synthesis[k]);
        for (std::size_t i = 0; i < run.output.values.size(); ++i)
            run.output.values[i] += lifted.values[i];
        run.channels.push_back(std::move(channel));
    }
    return run;
}

FilterBankRun run_filter_bank_polyphase(const GSignal& input,
                                        const std::vector<GSignal>& analysis,
                                        const std::vector<GSignal>& synthesis) {
    require_bank(analysis);
    require_bank(synthesis);
    require_same_group(input, analysis.front());
    require_same_group(input, synthesis.front());
    if (analysis.size() != synthesis.size())
        throw ValidationError("analysis and synthesis banks must have the same channel count");

    const GroupPtr group = input.group;
    const auto& n_group = group->n_group();
    const std::size_t n_order = n_group.order();
    const std::size_t L = group->h_group().order();
    const std::size_t K = analysis.size();

    const PolyphaseField h_field = analysis_field(analysis);
    const PolyphaseField g_field = synthesis_field(synthesis);

    // Stack the slice transforms of the input into A(gamma).
    std::vector<CVector> input_hat(n_order, CVector::Zero(static_cast<Eigen::Index>(L)));
    for (std::size_t i = 0; i < L; ++i) {
        const std::vector<cdouble> symbol = fourier(n_group, polyphase_slice(input, i).values);
        for (std::size_t gamma = 0; gamma < n_order; ++gamma)
            input_hat[gamma](static_cast<Eigen::Index>(i)) = symbol[gamma];
    }

    std::vector<CVector> channel_hat(n_order);
    std::vector<CVector> output_hat(n_order);
    for (std::size_t gamma = 0; gamma < n_order; ++gamma) {
        channel_hat[gamma] = h_field.matrices[gamma] * input_hat[gamma];
        output_hat[gamma] = g_field.matrices[gamma] * channel_hat[gamma];
    }

    FilterBankRun run{GSignal::zeros(group), {}};
    std::vector<cdouble> symbol(n_order);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t gamma = 0; gamma < n_order; ++gamma)
            symbol[gamma] = channel_hat[gamma](static_cast<Eigen::Index>(k));
        run.channels.emplace_back(group->n_group_ptr(), inverse_fourier(n_group, symbol));
    }
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t gamma = 0; gamma < n_order; ++gamma)
            symbol[gamma] = output_hat[gamma](static_cast<Eigen::Index>(i));
        const std::vector<cdouble> slice = inverse_fourier(n_group, symbol);
        for (std::size_t n = 0; n < n_order; ++n) run.output.at(n, i) = slice[n];
    }
    return run;
}

PrReport verify_perfect_reconstruction(const std::vector<GSignal>& analysis,
                                       const std::vector<GSignal>& synthesis,
                                       double tolerance) {
    const PolyphaseField h_field = analysis_field(analysis);
    const PolyphaseField g_field = synthesis_field(synthesis);
    if (h_field.channels != g_field.channels)
        throw ValidationError("analysis and synthesis banks must have the same channel count");

    const auto L = static_cast<Eigen::Index>(h_field.h_order());
    PrReport report;
    report.tolerance = tolerance;
    for (std::size_t gamma = 0; gamma < h_field.matrices.size(); ++gamma) {
        const CMatrix residual = g_field.matrices[gamma] * h_field.matrices[gamma] -
                                 CMatrix::Identity(L, L);
        for (Eigen::Index r = 0; r < L; ++r) {
            for (Eigen::Index c = 0; c < L; ++c) {
                const double dev = std::abs(residual(r, c));
                if (dev > report.max_deviation) {
                    report.max_deviation = dev;
                    report.worst_gamma = gamma;
                    report.worst_row = static_cast<std::size_t>(r);
                    report.worst_col = static_cast<std::size_t>(c);
                }
            }
        }
    }
    report.perfect = report.max_deviation <= tolerance;
    return report;
}

SpectralBounds spectral_bounds(const PolyphaseField& field) {
    if (field.kind != PolyphaseField::Kind::Analysis)
        throw ValidationError("spectral bounds are defined for analysis-kind fields");
    const std::size_t n_order = field.matrices.size();
    std::vector<double> lows(n_order), highs(n_order);
    parallel_for(n_order, [&](std::size_t gamma) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(field.matrices[gamma].adjoint() *
                                                      field.matrices[gamma]);
        lows[gamma] = solver.eigenvalues().minCoeff();
        highs[gamma] = solver.eigenvalues().maxCoeff();
    });
    SpectralBounds bounds;
    bounds.lower = lows[0];
    bounds.upper = highs[0];
    for (std::size_t gamma = 1; gamma < n_order; ++gamma) {
        if (lows[gamma] < bounds.lower) {
            bounds.lower = lows[gamma];
            bounds.argmin_gamma = gamma;
        }
        bounds.upper = std::max(bounds.upper, highs[gamma]);
    }
    // Eigenvalues of a PSD product can come out barely negative.
    bounds.lower = std::max(bounds.lower, 0.0);
    return bounds;
}

namespace {

/// Single tightness constant when H*H = A I at every gamma.
std::optional<double> tight_constant(const PolyphaseField& field, double tolerance) {
    const auto L = static_cast<Eigen::Index>(field.h_order());
    double constant = 0.0;
    for (std::size_t gamma = 0; gamma < field.matrices.size(); ++gamma) {
        const CMatrix gram = field.matrices[gamma].adjoint() * field.matrices[gamma];
        if (gamma == 0) constant = gram.real().trace() / static_cast<double>(L);
        const double dev = (gram - constant * CMatrix::Identity(L, L)).cwiseAbs().maxCoeff();
        if (dev > tolerance * std::max(1.0, constant)) return std::nullopt;
    }
    return constant;
}

} // namespace

FrameReport frame_bounds(const std::vector<GSignal>& generators, double frame_tolerance) {
    const PolyphaseField field = translate_frame_field(generators);
    FrameReport report;
    report.bounds = spectral_bounds(field);
    report.bessel = std::isfinite(report.bounds.upper);
    report.frame = report.bessel && report.bounds.upper > 0.0 &&
                   report.bounds.lower > frame_tolerance * report.bounds.upper;
    report.tight = tight_constant(field, kPrTolerance);
    return report;
}

FrameReport classify_pair(const std::vector<GSignal>& generators,
                          const std::vector<GSignal>& partners, double pr_tolerance,
                          double frame_tolerance) {
    if (generators.size() != partners.size())
        throw ValidationError("pair classification needs equal channel counts");
    require_same_group(generators.front(), partners.front());

    FrameReport report = frame_bounds(generators, frame_tolerance);
    const PolyphaseField h_field = translate_frame_field(generators);
    const PolyphaseField g_field = synthesis_field(partners);

    const auto L = static_cast<Eigen::Index>(h_field.h_order());
    const auto K = static_cast<Eigen::Index>(h_field.channels);
    double dual_dev = 0.0;
    double biorth_dev = 0.0;
    double onb_dev = 0.0;
    for (std::size_t gamma = 0; gamma < h_field.matrices.size(); ++gamma) {
        const CMatrix& h = h_field.matrices[gamma];
        const CMatrix& g = g_field.matrices[gamma];
        dual_dev = std::max(dual_dev, (g * h - CMatrix::Identity(L, L)).cwiseAbs().maxCoeff());
        biorth_dev =
            std::max(biorth_dev, (h * g - CMatrix::Identity(K, K)).cwiseAbs().maxCoeff());
        if (K == L) {
            onb_dev = std::max(
                onb_dev, (h.adjoint() * h - CMatrix::Identity(L, L)).cwiseAbs().maxCoeff());
        }
    }
    report.has_pair = true;
    report.dual = dual_dev <= pr_tolerance;
    report.biorthogonal = biorth_dev <= pr_tolerance;
    report.riesz_dual = (K == L) && report.dual && report.biorthogonal;
    report.orthonormal_basis = (K == L) && onb_dev <= pr_tolerance;
    return report;
}

PolyphaseField pseudo_inverse_field(const PolyphaseField& analysis, double frame_tolerance) {
    const HermitianInverse gram = invert_gram_field(analysis, frame_tolerance);
    return pseudo_inverse_from(analysis, gram);
}

std::vector<GSignal> design_dual(const std::vector<GSignal>& analysis, double frame_tolerance) {
    return filters_from_synthesis_field(
        pseudo_inverse_field(analysis_field(analysis), frame_tolerance));
}

std::vector<GSignal> dual_family(const std::vector<GSignal>& analysis, const PolyphaseField& u,
                                 double frame_tolerance) {
    const PolyphaseField h_field = analysis_field(analysis);
    if (u.kind != PolyphaseField::Kind::Synthesis)
        throw ValidationError("dual family parameter must be a synthesis-kind field");
    if (u.channels != h_field.channels || !(*u.group == *h_field.group))
        throw ValidationError("dual family parameter has mismatched shape or group");

    const HermitianInverse gram = invert_gram_field(h_field, frame_tolerance);
    PolyphaseField dual = pseudo_inverse_from(h_field, gram);
    const auto K = static_cast<Eigen::Index>(h_field.channels);
    for (std::size_t gamma = 0; gamma < dual.matrices.size(); ++gamma) {
        const CMatrix projector =
            CMatrix::Identity(K, K) - h_field.matrices[gamma] * dual.matrices[gamma];
        dual.matrices[gamma] += u.matrices[gamma] * projector;
    }
    return filters_from_synthesis_field(dual);
}

} // namespace groupfb

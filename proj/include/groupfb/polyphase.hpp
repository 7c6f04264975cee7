#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "groupfb/gsignal.hpp"

namespace groupfb {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Default absolute tolerance on polyphase-matrix entries when deciding
/// perfect reconstruction.
inline constexpr double kPrTolerance = 1e-10;

/// Default relative threshold: the filter bank is invertible when the lower
/// spectral bound exceeds this fraction of the upper one.
inline constexpr double kFrameTolerance = 1e-9;

/// Per-character polyphase data: one K x L (analysis) or L x K (synthesis)
/// complex matrix for every character gamma of N.
struct PolyphaseField {
    enum class Kind { Analysis, Synthesis };

    GroupPtr group;
    Kind kind = Kind::Analysis;
    std::size_t channels = 0; // K
    std::vector<CMatrix> matrices; // indexed by gamma

    std::size_t h_order() const { return group->h_group().order(); }
    std::size_t rows() const { return kind == Kind::Analysis ? channels : h_order(); }
    std::size_t cols() const { return kind == Kind::Analysis ? h_order() : channels; }

    /// Constant-in-gamma synthesis field, handy for building the free
    /// parameter of the dual family.
    static PolyphaseField constant_synthesis(const GroupPtr& group, const CMatrix& matrix);
};

/// Extremes over gamma of the spectrum of H*(gamma)H(gamma).
struct SpectralBounds {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t argmin_gamma = 0;
};

/// Frame diagnostics for a system of translates, plus pair classification
/// flags when a partner family was supplied.
struct FrameReport {
    SpectralBounds bounds;
    bool bessel = false;
    bool frame = false;
    std::optional<double> tight; // the constant A when H*H = A I everywhere

    bool has_pair = false;
    bool dual = false;
    bool biorthogonal = false;
    bool riesz_dual = false;
    bool orthonormal_basis = false;
};

/// Verdict of the perfect-reconstruction test, with the worst offending
/// character and entry for debugging failed designs.
struct PrReport {
    bool perfect = false;
    double max_deviation = 0.0;
    std::size_t worst_gamma = 0;
    std::size_t worst_row = 0;
    std::size_t worst_col = 0;
    double tolerance = kPrTolerance;
};

/// Output and per-channel intermediates of one filter-bank pass.
struct FilterBankRun {
    GSignal output;
    std::vector<NSignal> channels;
};

/// Analysis polyphase matrix: entry (k, i) at gamma is the N-Fourier
/// transform of the analysis component h_{k,h_i}.
PolyphaseField analysis_field(const std::vector<GSignal>& filters);

/// Synthesis polyphase matrix: entry (i, k) at gamma is the N-Fourier
/// transform of the plain slice g_k(., h_i).
PolyphaseField synthesis_field(const std::vector<GSignal>& filters);

/// Matrix attached to the system of translates {T_n f_k}: entry (k, i) is
/// conj(fourier of the slice f_k(., h_i)). Equals analysis_field applied to
/// the involutions of the generators; the two conventions differ exactly by
/// that involution.
PolyphaseField translate_frame_field(const std::vector<GSignal>& generators);

/// Synthesis filters whose polyphase matrix equals the given synthesis
/// field, assembled slice by slice through the inverse N-Fourier transform.
std::vector<GSignal> filters_from_synthesis_field(const PolyphaseField& field);

/// Time-domain filter bank: channel k is the decimated convolution with the
/// k-th analysis filter, the output resynthesizes the expanded channels.
FilterBankRun run_filter_bank(const GSignal& input, const std::vector<GSignal>& analysis,
                              const std::vector<GSignal>& synthesis);

/// Same bank evaluated through per-character matrix products
/// B(gamma) = G(gamma) H(gamma) A(gamma).
FilterBankRun run_filter_bank_polyphase(const GSignal& input,
                                        const std::vector<GSignal>& analysis,
                                        const std::vector<GSignal>& synthesis);

/// Checks G(gamma) H(gamma) = I at every character.
PrReport verify_perfect_reconstruction(const std::vector<GSignal>& analysis,
                                       const std::vector<GSignal>& synthesis,
                                       double tolerance = kPrTolerance);

/// Extremes of the spectrum of H*(gamma)H(gamma) over gamma.
SpectralBounds spectral_bounds(const PolyphaseField& field);

/// Frame bounds and flags for the system of translates of the given
/// generators.
FrameReport frame_bounds(const std::vector<GSignal>& generators,
                         double frame_tolerance = kFrameTolerance);

/// Full pair classification: dual / biorthogonal / Riesz-dual / tight /
/// orthonormal, on top of the generator family's frame bounds.
FrameReport classify_pair(const std::vector<GSignal>& generators,
                          const std::vector<GSignal>& partners,
                          double pr_tolerance = kPrTolerance,
                          double frame_tolerance = kFrameTolerance);

/// Moore-Penrose pseudo-inverse of an analysis field, inverted per character
/// through the Hermitian eigendecomposition of H*H. Throws
/// SingularFieldError when the lower spectral bound is below tolerance.
PolyphaseField pseudo_inverse_field(const PolyphaseField& analysis,
                                    double frame_tolerance = kFrameTolerance);

/// Canonical dual: synthesis filters from the pseudo-inverse of the
/// analysis polyphase matrix.
std::vector<GSignal> design_dual(const std::vector<GSignal>& analysis,
                                 double frame_tolerance = kFrameTolerance);

/// Complete dual family G = H^dag + U (I - H H^dag) for a free L x K
/// synthesis-kind parameter field U.
std::vector<GSignal> dual_family(const std::vector<GSignal>& analysis, const PolyphaseField& u,
                                 double frame_tolerance = kFrameTolerance);

} // namespace groupfb

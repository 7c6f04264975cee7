#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "groupfb/sampling.hpp"

namespace groupfb {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Finite crystallographic model: the lattice M Z^d and point group Gamma
/// act on the torus grid Z_q^d.
struct CrystalSpec {
    std::size_t dimension = 1;             // d
    std::int64_t grid_side = 8;            // q
    IntMatrix lattice;                     // M, d x d integer, q M^{-1} integer
    std::vector<IntMatrix> point_group;    // Gamma, integer with A A^T = I
};

/// The assembled model: residue group N = (M Z^d)/(q Z^d), semidirect
/// product with Gamma, and the quasi-regular permutation representation on
/// the grid function space C^{q^d}.
struct CrystalModel {
    CrystalSpec spec;
    GroupPtr group;
    UnitaryRep rep;
    /// Grid linear index of each element of N.
    std::vector<std::size_t> lattice_map;

    std::size_t grid_order() const { return rep.dim(); }
    std::size_t grid_index(const std::vector<std::int64_t>& coords) const;
    std::vector<std::int64_t> grid_coords(std::size_t index) const;
};

/// Validates the spec (lattice-grid compatibility, integer orthogonal point
/// group closed under multiplication, Gamma-invariance of the residue set)
/// and builds the model. The residue group is brought to product-of-cyclic
/// form through a unimodular diagonalization of q M^{-1}.
CrystalModel build_crystal_group(const CrystalSpec& spec);

/// The d=1 model with lattice 2Z on Z_q: the finite stand-in for the
/// infinite dihedral group.
CrystalSpec dihedral_spec(std::int64_t grid_side);

/// Deterministic generic generator: an off-center tensor B-spline bump plus
/// a seeded rough component that breaks the point-group symmetry.
CVector default_generator(const CrystalModel& model, std::uint64_t seed);

/// Smoothed seeded noise, usable as an average probe.
CVector smooth_random_field(const CrystalModel& model, std::uint64_t seed);

/// Normalized box-window probe of the given width per axis.
CVector indicator_probe(const CrystalModel& model, const std::vector<std::int64_t>& corner,
                        std::int64_t width);

/// Outcome of one sampling demo run.
struct DemoReport {
    SampleMode mode = SampleMode::Average;
    std::size_t channels = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    RieszBounds gram;
    SpectralBounds analysis_bounds;
    RieszBounds subspace_frame;
    double max_relative_error = 0.0;
    double mean_relative_error = 0.0;
    std::vector<double> per_trial_errors;
    std::optional<double> interpolation_deviation; // only when K = |Gamma|
    std::vector<CVector> reconstruction_vectors;
};

/// Average-sample demo: builds the problem for the given probes, designs the
/// reconstruction, and measures recovery of random subspace elements.
DemoReport demo_average(const CrystalModel& model, const CVector& generator,
                        const std::vector<CVector>& probes, std::size_t trials,
                        std::uint64_t seed, double frame_tolerance = kFrameTolerance);

/// Pointwise-sample demo at the given grid coordinates.
DemoReport demo_pointwise(const CrystalModel& model, const CVector& generator,
                          const std::vector<std::size_t>& points, std::size_t trials,
                          std::uint64_t seed, double frame_tolerance = kFrameTolerance);

} // namespace groupfb

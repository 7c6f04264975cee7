#include "groupfb/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "groupfb/random.hpp"

namespace groupfb {

namespace {

std::int64_t positive_mod(std::int64_t v, std::int64_t m) {
    std::int64_t r = v % m;
    return r < 0 ? r + m : r;
}

IntMatrix identity_matrix(std::size_t d) {
    IntMatrix m(d, std::vector<std::int64_t>(d, 0));
    for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
    return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    const std::size_t d = a.size();
    IntMatrix out(d, std::vector<std::int64_t>(d, 0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

IntMatrix transpose(const IntMatrix& a) {
    const std::size_t d = a.size();
    IntMatrix out(d, std::vector<std::int64_t>(d, 0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out[j][i] = a[i][j];
    return out;
}

std::int64_t determinant(const IntMatrix& a) {
    const std::size_t d = a.size();
    if (d == 1) return a[0][0];
    std::int64_t det = 0;
    std::int64_t sign = 1;
    for (std::size_t c = 0; c < d; ++c) {
        IntMatrix minor(d - 1, std::vector<std::int64_t>(d - 1));
        for (std::size_t i = 1; i < d; ++i) {
            std::size_t jj = 0;
            for (std::size_t j = 0; j < d; ++j) {
                if (j == c) continue;
                minor[i - 1][jj++] = a[i][j];
            }
        }
        det += sign * a[0][c] * determinant(minor);
        sign = -sign;
    }
    return det;
}

IntMatrix adjugate(const IntMatrix& a) {
    const std::size_t d = a.size();
    if (d == 1) return {{1}};
    IntMatrix out(d, std::vector<std::int64_t>(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            IntMatrix minor(d - 1, std::vector<std::int64_t>(d - 1));
            std::size_t ii = 0;
            for (std::size_t r = 0; r < d; ++r) {
                if (r == i) continue;
                std::size_t jj = 0;
                for (std::size_t c = 0; c < d; ++c) {
                    if (c == j) continue;
                    minor[ii][jj++] = a[r][c];
                }
                ++ii;
            }
            out[j][i] = ((i + j) % 2 == 0 ? 1 : -1) * determinant(minor);
        }
    }
    return out;
}

/// Exact (adj(a) * b) / det(a); throws when the quotient is not integer.
IntMatrix integer_solve(const IntMatrix& a, const IntMatrix& b, const std::string& what) {
    const std::int64_t det = determinant(a);
    if (det == 0) throw ValidationError(what + ": matrix is singular");
    IntMatrix out = multiply(adjugate(a), b);
    for (auto& row : out) {
        for (auto& v : row) {
            if (v % det != 0) throw ValidationError(what + ": quotient is not an integer matrix");
            v /= det;
        }
    }
    return out;
}

struct Diagonalization {
    IntMatrix row_ops;         // U with U P V = D
    IntMatrix row_ops_inverse; // U^{-1}
    std::vector<std::int64_t> diagonal;
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Brings an integer matrix to diagonal form by unimodular row and column
/// operations, tracking the row transform and its inverse. The column
/// transform acts only on the work matrix; callers never need it.
Diagonalization diagonalize(IntMatrix work) {
    const std::size_t d = work.size();
    Diagonalization out{identity_matrix(d), identity_matrix(d), {}};

    auto swap_rows = [&](std::size_t a, std::size_t b) {
        std::swap(work[a], work[b]);
        std::swap(out.row_ops[a], out.row_ops[b]);
        for (std::size_t i = 0; i < d; ++i)
            std::swap(out.row_ops_inverse[i][a], out.row_ops_inverse[i][b]);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, std::int64_t factor) {
        for (std::size_t j = 0; j < d; ++j) {
            work[dst][j] += factor * work[src][j];
            out.row_ops[dst][j] += factor * out.row_ops[src][j];
        }
        for (std::size_t i = 0; i < d; ++i)
            out.row_ops_inverse[i][src] -= factor * out.row_ops_inverse[i][dst];
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < d; ++i) std::swap(work[i][a], work[i][b]);
    };
    auto add_col = [&](std::size_t dst, std::size_t src, std::int64_t factor) {
        for (std::size_t i = 0; i < d; ++i) work[i][dst] += factor * work[i][src];
    };

    for (std::size_t k = 0; k < d; ++k) {
        for (;;) {
            std::size_t pi = k, pj = k;
            std::int64_t best = 0;
            for (std::size_t i = k; i < d; ++i) {
                for (std::size_t j = k; j < d; ++j) {
                    const std::int64_t v = std::llabs(work[i][j]);
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (best == 0)
                throw ValidationError("lattice matrix is singular relative to the grid");
            if (pi != k) swap_rows(k, pi);
            if (pj != k) swap_cols(k, pj);

            bool clean = true;
            for (std::size_t i = k + 1; i < d; ++i) {
                if (work[i][k] == 0) continue;
                add_row(i, k, -floor_div(work[i][k], work[k][k]));
                if (work[i][k] != 0) clean = false;
            }
            for (std::size_t j = k + 1; j < d; ++j) {
                if (work[k][j] == 0) continue;
                add_col(j, k, -floor_div(work[k][j], work[k][k]));
                if (work[k][j] != 0) clean = false;
            }
            if (clean) break;
        }
        if (work[k][k] < 0) {
            for (std::size_t j = 0; j < d; ++j) {
                work[k][j] = -work[k][j];
                out.row_ops[k][j] = -out.row_ops[k][j];
            }
            for (std::size_t i = 0; i < d; ++i)
                out.row_ops_inverse[i][k] = -out.row_ops_inverse[i][k];
        }
    }
    out.diagonal.resize(d);
    for (std::size_t k = 0; k < d; ++k) out.diagonal[k] = work[k][k];
    return out;
}

std::vector<std::int64_t> apply_matrix(const IntMatrix& m, const std::vector<std::int64_t>& v) {
    std::vector<std::int64_t> out(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

std::size_t grid_linear_index(const std::vector<std::int64_t>& coords, std::int64_t q) {
    std::size_t index = 0;
    for (const auto c : coords)
        index = index * static_cast<std::size_t>(q) +
                static_cast<std::size_t>(positive_mod(c, q));
    return index;
}

std::vector<std::int64_t> grid_linear_coords(std::size_t index, std::size_t d, std::int64_t q) {
    std::vector<std::int64_t> coords(d);
    for (std::size_t i = d; i-- > 0;) {
        coords[i] = static_cast<std::int64_t>(index % static_cast<std::size_t>(q));
        index /= static_cast<std::size_t>(q);
    }
    return coords;
}

} // namespace

std::size_t CrystalModel::grid_index(const std::vector<std::int64_t>& coords) const {
    if (coords.size() != spec.dimension)
        throw ValidationError("grid coordinate has wrong dimension");
    return grid_linear_index(coords, spec.grid_side);
}

std::vector<std::int64_t> CrystalModel::grid_coords(std::size_t index) const {
    return grid_linear_coords(index, spec.dimension, spec.grid_side);
}

CrystalModel build_crystal_group(const CrystalSpec& spec) {
    const std::size_t d = spec.dimension;
    const std::int64_t q = spec.grid_side;
    if (d == 0) throw ValidationError("crystal dimension must be positive");
    if (q < 2) throw ValidationError("grid side must be at least 2");
    if (spec.lattice.size() != d)
        throw ValidationError("lattice matrix must be " + std::to_string(d) + "x" +
                              std::to_string(d));
    for (const auto& row : spec.lattice) {
        if (row.size() != d) throw ValidationError("lattice matrix is not square");
    }
    if (spec.point_group.empty()) throw ValidationError("point group must be nonempty");

    // q M^{-1} integer <=> M Z^d contains q Z^d.
    IntMatrix scaled = identity_matrix(d);
    for (auto& row : scaled)
        for (auto& v : row) v *= q;
    const IntMatrix cokernel = integer_solve(spec.lattice, scaled, "grid-lattice compatibility");
    const Diagonalization diag = diagonalize(cokernel);

    auto n_group = std::make_shared<AbelianGroup>(diag.diagonal);

    // Point group: integer, orthogonal, closed under multiplication.
    const std::size_t L = spec.point_group.size();
    const IntMatrix id = identity_matrix(d);
    for (std::size_t a = 0; a < L; ++a) {
        const auto& A = spec.point_group[a];
        if (A.size() != d) throw ValidationError("point-group matrix has wrong dimension");
        for (const auto& row : A) {
            if (row.size() != d) throw ValidationError("point-group matrix is not square");
        }
        if (multiply(A, transpose(A)) != id)
            throw ValidationError("point-group matrix " + std::to_string(a) +
                                  " is not orthogonal");
    }
    std::vector<std::vector<std::size_t>> table(L, std::vector<std::size_t>(L));
    for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t b = 0; b < L; ++b) {
            const IntMatrix prod = multiply(spec.point_group[a], spec.point_group[b]);
            const auto it = std::find(spec.point_group.begin(), spec.point_group.end(), prod);
            if (it == spec.point_group.end())
                throw ValidationError("point group is not closed under multiplication");
            table[a][b] = static_cast<std::size_t>(it - spec.point_group.begin());
        }
    }
    FiniteGroup h_group(std::move(table));

    // Residue embedding rho(w) = M U^{-1} w mod q.
    const IntMatrix lattice_times_uinv = multiply(spec.lattice, diag.row_ops_inverse);
    std::vector<std::size_t> lattice_map(n_group->order());
    std::set<std::size_t> residues;
    for (std::size_t w = 0; w < n_group->order(); ++w) {
        lattice_map[w] = grid_linear_index(apply_matrix(lattice_times_uinv, n_group->element(w)), q);
        if (!residues.insert(lattice_map[w]).second)
            throw ValidationError("residue enumeration collided; lattice-grid pair is invalid");
    }

    // Gamma must permute the residue set on the grid.
    for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t w = 0; w < n_group->order(); ++w) {
            const auto coords = grid_linear_coords(lattice_map[w], d, q);
            const std::size_t image = grid_linear_index(apply_matrix(spec.point_group[a], coords), q);
            if (residues.find(image) == residues.end())
                throw ValidationError(
                    "point group does not preserve the lattice residues: matrix " +
                    std::to_string(a) + " moves coset " + std::to_string(lattice_map[w]) +
                    " off the lattice");
        }
    }

    // Action on N in cyclic coordinates: U (M^{-1} A M) U^{-1}.
    std::vector<Automorphism> action;
    action.reserve(L);
    for (std::size_t a = 0; a < L; ++a) {
        const IntMatrix conjugated =
            integer_solve(spec.lattice, multiply(spec.point_group[a], spec.lattice),
                          "point group does not stabilize the lattice");
        action.push_back(Automorphism::from_matrix(
            n_group, multiply(multiply(diag.row_ops, conjugated), diag.row_ops_inverse)));
    }

    auto group = std::make_shared<SemidirectGroup>(n_group, h_group, std::move(action));

    // Quasi-regular representation with the grid read as cell centers of the
    // continuum torus: site t stands for the point t + 1/2, so
    // [U(w, A) f](t) = f(A^T (t - rho(w)) + (A^T 1 - 1)/2). The offset is
    // integer for any signed-permutation A, and mirrors and rotation centers
    // land between sites exactly as they do off the lattice in the continuum
    // model. With mirrors on sites the trivial character is degenerate for
    // every generator, which would kill the sampling demos.
    std::size_t grid_order = 1;
    for (std::size_t i = 0; i < d; ++i) grid_order *= static_cast<std::size_t>(q);

    std::vector<CMatrix> matrices(group->order());
    for (std::size_t gi = 0; gi < group->order(); ++gi) {
        const GroupElement g = group->element(gi);
        const auto shift = grid_linear_coords(lattice_map[g.n], d, q);
        const IntMatrix a_t = transpose(spec.point_group[g.h]);
        std::vector<std::int64_t> offset(d);
        for (std::size_t i = 0; i < d; ++i) {
            std::int64_t column_sum = 0;
            for (std::size_t j = 0; j < d; ++j) column_sum += a_t[i][j];
            offset[i] = (column_sum - 1) / 2;
        }
        CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(grid_order),
                                  static_cast<Eigen::Index>(grid_order));
        for (std::size_t t = 0; t < grid_order; ++t) {
            auto coords = grid_linear_coords(t, d, q);
            for (std::size_t i = 0; i < d; ++i) coords[i] -= shift[i];
            auto source_coords = apply_matrix(a_t, coords);
            for (std::size_t i = 0; i < d; ++i) source_coords[i] += offset[i];
            const std::size_t source = grid_linear_index(source_coords, q);
            m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(source)) = 1.0;
        }
        matrices[gi] = std::move(m);
    }

    return CrystalModel{spec, group, UnitaryRep(group, std::move(matrices)),
                        std::move(lattice_map)};
}

CrystalSpec dihedral_spec(std::int64_t grid_side) {
    CrystalSpec spec;
    spec.dimension = 1;
    spec.grid_side = grid_side;
    spec.lattice = {{2}};
    spec.point_group = {{{1}}, {{-1}}};
    return spec;
}

namespace {

double cubic_bspline(double u) {
    const double a = std::abs(u);
    if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
    if (a < 2.0) {
        const double t = 2.0 - a;
        return t * t * t / 6.0;
    }
    return 0.0;
}

CVector normalized(CVector v) {
    const double n = v.norm();
    if (n > 0.0) v /= n;
    return v;
}

} // namespace

CVector default_generator(const CrystalModel& model, std::uint64_t seed) {
    const std::size_t d = model.spec.dimension;
    const auto q = static_cast<double>(model.spec.grid_side);
    const std::size_t order = model.grid_order();
    GaussianSource rng(seed);

    CVector out(static_cast<Eigen::Index>(order));
    for (std::size_t t = 0; t < order; ++t) {
        const auto coords = model.grid_coords(t);
        double bump = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            // Off-center so that the point group does not fix the bump.
            double delta = static_cast<double>(coords[i]) - (0.5 * q + 1.0);
            delta -= q * std::round(delta / q);
            bump *= cubic_bspline(4.0 * delta / q);
        }
        out(static_cast<Eigen::Index>(t)) = bump;
    }
    // Seeded rough component keeps the orbit generic at every frequency.
    for (std::size_t t = 0; t < order; ++t) {
        out(static_cast<Eigen::Index>(t)) += 0.35 * rng.normal();
    }
    return normalized(std::move(out));
}

CVector smooth_random_field(const CrystalModel& model, std::uint64_t seed) {
    const std::size_t d = model.spec.dimension;
    const auto q = static_cast<std::size_t>(model.spec.grid_side);
    const std::size_t order = model.grid_order();
    GaussianSource rng(seed);

    std::vector<double> values(order);
    for (auto& v : values) v = rng.normal();

    // One separable low-pass pass, blended with the rough field so that no
    // frequency is annihilated.
    const double kernel[3] = {0.25, 0.5, 0.25};
    for (std::size_t axis = 0; axis < d; ++axis) {
        std::vector<double> next(order, 0.0);
        std::size_t stride = 1;
        for (std::size_t i = axis + 1; i < d; ++i) stride *= q;
        for (std::size_t t = 0; t < order; ++t) {
            const std::size_t coord = (t / stride) % q;
            for (int offset = -1; offset <= 1; ++offset) {
                const auto shifted = static_cast<std::size_t>(
                    positive_mod(static_cast<std::int64_t>(coord) + offset,
                                 static_cast<std::int64_t>(q)));
                const std::size_t source = t - coord * stride + shifted * stride;
                next[t] += kernel[offset + 1] * values[source];
            }
        }
        for (std::size_t t = 0; t < order; ++t) values[t] = 0.75 * next[t] + 0.25 * values[t];
    }

    CVector out(static_cast<Eigen::Index>(order));
    for (std::size_t t = 0; t < order; ++t) out(static_cast<Eigen::Index>(t)) = values[t];
    return normalized(std::move(out));
}

CVector indicator_probe(const CrystalModel& model, const std::vector<std::int64_t>& corner,
                        std::int64_t width) {
    if (corner.size() != model.spec.dimension)
        throw ValidationError("probe corner has wrong dimension");
    if (width <= 0) throw ValidationError("probe width must be positive");
    const std::size_t d = model.spec.dimension;
    CVector out = CVector::Zero(static_cast<Eigen::Index>(model.grid_order()));
    std::vector<std::int64_t> offset(d, 0);
    bool done = false;
    while (!done) {
        std::vector<std::int64_t> coords(d);
        for (std::size_t i = 0; i < d; ++i) coords[i] = corner[i] + offset[i];
        out(static_cast<Eigen::Index>(model.grid_index(coords))) = 1.0;
        done = true;
        for (std::size_t axis = d; axis-- > 0;) {
            if (++offset[axis] < width) {
                done = false;
                break;
            }
            offset[axis] = 0;
        }
    }
    return normalized(std::move(out));
}

namespace {

GSignal random_coefficients(const GroupPtr& group, GaussianSource& rng) {
    GSignal coeffs = GSignal::zeros(group);
    for (auto& v : coeffs.values) v = rng.complex_normal();
    const double norm = coeffs.norm();
    if (norm > 0.0) {
        for (auto& v : coeffs.values) v /= norm;
    }
    return coeffs;
}

DemoReport run_demo(const SamplingProblem& problem, std::size_t trials, std::uint64_t seed,
                    double frame_tolerance) {
    DemoReport report;
    report.mode = problem.mode();
    report.channels = problem.channel_count();
    report.trials = trials;
    report.seed = seed;
    report.gram = problem.gram_bounds();

    const ReconstructionKit kit = build_reconstruction(problem, nullptr, frame_tolerance);
    report.analysis_bounds = kit.analysis_bounds;
    report.subspace_frame = kit.subspace_frame;
    report.reconstruction_vectors = kit.vectors;

    GaussianSource rng(seed);
    report.per_trial_errors.reserve(trials);
    double sum = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const GSignal coeffs = random_coefficients(problem.rep().group_ptr(), rng);
        const CVector x = problem.synthesize(coeffs);
        const CVector recovered = reconstruct(problem, kit, problem.samples(x));
        const double error = (recovered - x).norm() / x.norm();
        report.per_trial_errors.push_back(error);
        report.max_relative_error = std::max(report.max_relative_error, error);
        sum += error;
    }
    report.mean_relative_error = trials > 0 ? sum / static_cast<double>(trials) : 0.0;

    if (problem.channel_count() == problem.rep().group().h_group().order()) {
        double dev = 0.0;
        const std::size_t n_order = problem.rep().group().n_group().order();
        for (std::size_t kp = 0; kp < kit.vectors.size(); ++kp) {
            const CMatrix s = problem.samples(kit.vectors[kp]);
            for (std::size_t k = 0; k < kit.vectors.size(); ++k) {
                for (std::size_t n = 0; n < n_order; ++n) {
                    const cdouble expected =
                        (k == kp && n == 0) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
                    dev = std::max(dev, std::abs(s(static_cast<Eigen::Index>(k),
                                                   static_cast<Eigen::Index>(n)) -
                                                 expected));
                }
            }
        }
        report.interpolation_deviation = dev;
    }
    return report;
}

} // namespace

DemoReport demo_average(const CrystalModel& model, const CVector& generator,
                        const std::vector<CVector>& probes, std::size_t trials,
                        std::uint64_t seed, double frame_tolerance) {
    SamplingProblem problem(model.rep, generator, probes, frame_tolerance);
    return run_demo(problem, trials, seed, frame_tolerance);
}

DemoReport demo_pointwise(const CrystalModel& model, const CVector& generator,
                          const std::vector<std::size_t>& points, std::size_t trials,
                          std::uint64_t seed, double frame_tolerance) {
    SamplingProblem problem(model.rep, generator, points, frame_tolerance);
    return run_demo(problem, trials, seed, frame_tolerance);
}

} // namespace groupfb

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "groupfb/errors.hpp"

namespace groupfb {

using cdouble = std::complex<double>;

/// Finite abelian group N = Z_{s1} x ... x Z_{sd}. Elements are d-vectors
/// with component i reduced into [0, s_i); they are addressed either as
/// vectors or as row-major linear indices (first coordinate most
/// significant). The dual group is identified with N itself through the
/// product character <n, xi> = prod_i W_{s_i}^{n_i xi_i}, W_s = e^{2 pi i/s}.
class AbelianGroup {
public:
    explicit AbelianGroup(std::vector<std::int64_t> moduli);

    const std::vector<std::int64_t>& moduli() const { return moduli_; }
    std::size_t dim() const { return moduli_.size(); }
    std::size_t order() const { return order_; }

    std::vector<std::int64_t> element(std::size_t index) const;
    std::size_t index_of(const std::vector<std::int64_t>& coords) const;

    std::size_t add(std::size_t a, std::size_t b) const;
    std::size_t negate(std::size_t a) const;
    std::size_t zero() const { return 0; }

    /// Character pairing <n, xi> on the unit circle.
    cdouble character(std::size_t n, std::size_t xi) const;

    bool operator==(const AbelianGroup& other) const { return moduli_ == other.moduli_; }

private:
    std::vector<std::int64_t> moduli_;
    std::vector<std::size_t> strides_;
    std::size_t order_;
};

using AbelianGroupPtr = std::shared_ptr<const AbelianGroup>;

/// Additive automorphism of an AbelianGroup, stored as a permutation of
/// linear indices. Construction validates bijectivity and additivity
/// exhaustively; matrix input is first checked to act well-defined mod the
/// moduli.
class Automorphism {
public:
    /// From a d x d integer matrix acting componentwise mod moduli.
    static Automorphism from_matrix(const AbelianGroupPtr& group,
                                    const std::vector<std::vector<std::int64_t>>& matrix);

    /// From an explicit permutation of linear indices.
    static Automorphism from_permutation(const AbelianGroupPtr& group,
                                         std::vector<std::size_t> permutation);

    static Automorphism identity(const AbelianGroupPtr& group);

    std::size_t apply(std::size_t n) const { return permutation_[n]; }
    const std::vector<std::size_t>& permutation() const { return permutation_; }
    const std::optional<std::vector<std::vector<std::int64_t>>>& matrix() const { return matrix_; }

    bool operator==(const Automorphism& other) const { return permutation_ == other.permutation_; }

private:
    Automorphism(AbelianGroupPtr group, std::vector<std::size_t> permutation,
                 std::optional<std::vector<std::vector<std::int64_t>>> matrix);

    void validate() const;

    AbelianGroupPtr group_;
    std::vector<std::size_t> permutation_;
    std::optional<std::vector<std::vector<std::int64_t>>> matrix_;
};

/// Finite group given by its multiplication table. table[i][j] is the index
/// of h_i * h_j. Construction validates associativity, the identity and the
/// inverse table.
class FiniteGroup {
public:
    explicit FiniteGroup(std::vector<std::vector<std::size_t>> table);

    /// The cyclic group Z_order.
    static FiniteGroup cyclic(std::size_t order);

    std::size_t order() const { return order_; }
    std::size_t multiply(std::size_t a, std::size_t b) const { return table_[a][b]; }
    std::size_t inverse(std::size_t a) const { return inverse_[a]; }
    std::size_t identity() const { return identity_; }
    const std::vector<std::vector<std::size_t>>& table() const { return table_; }

    bool operator==(const FiniteGroup& other) const { return table_ == other.table_; }

private:
    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::size_t> inverse_;
    std::size_t identity_ = 0;
    std::size_t order_ = 0;
};

/// Element of the semidirect product, stored as linear indices into N and H.
struct GroupElement {
    std::size_t n = 0;
    std::size_t h = 0;

    bool operator==(const GroupElement&) const = default;
};

/// Semidirect product G = N x| H for an action of H on N by automorphisms.
/// Construction validates that the action is a homomorphism into Aut(N) and
/// that the identity of H acts trivially.
class SemidirectGroup {
public:
    SemidirectGroup(AbelianGroupPtr abelian, FiniteGroup finite, std::vector<Automorphism> action);

    const AbelianGroup& n_group() const { return *abelian_; }
    const AbelianGroupPtr& n_group_ptr() const { return abelian_; }
    const FiniteGroup& h_group() const { return finite_; }
    const Automorphism& action(std::size_t h) const { return action_[h]; }

    std::size_t order() const { return abelian_->order() * finite_.order(); }
    GroupElement identity() const { return {abelian_->zero(), finite_.identity()}; }

    /// (n1, h1) (n2, h2) = (n1 + phi_{h1}(n2), h1 h2)
    GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
    /// (n, h)^{-1} = (phi_{h^{-1}}(-n), h^{-1})
    GroupElement inverse(const GroupElement& g) const;

    /// Linear index over G, n-major and h-minor.
    std::size_t index_of(const GroupElement& g) const { return g.n * finite_.order() + g.h; }
    GroupElement element(std::size_t index) const {
        return {index / finite_.order(), index % finite_.order()};
    }

    bool operator==(const SemidirectGroup& other) const;

private:
    void validate() const;

    AbelianGroupPtr abelian_;
    FiniteGroup finite_;
    std::vector<Automorphism> action_;
};

using GroupPtr = std::shared_ptr<const SemidirectGroup>;

/// The dihedral group Z_s x| Z_2, with the reflection acting by negation.
GroupPtr make_dihedral(std::int64_t s);

/// Z_{s1} x ... x Z_{sd} x| Z_2 with negation action.
GroupPtr make_negation_product(std::vector<std::int64_t> moduli);

/// Fourier transform on N: X(xi) = sum_n x(n) conj(<n, xi>). Direct
/// summation; the inverse carries the 1/|N| Haar weight.
std::vector<cdouble> fourier(const AbelianGroup& group, const std::vector<cdouble>& values);
std::vector<cdouble> inverse_fourier(const AbelianGroup& group, const std::vector<cdouble>& values);

/// Cyclic convolution on N: (a * b)(m) = sum_n a(n) b(m - n).
std::vector<cdouble> convolve(const AbelianGroup& group, const std::vector<cdouble>& a,
                              const std::vector<cdouble>& b);

} // namespace groupfb

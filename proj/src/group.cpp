#include "groupfb/group.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace groupfb {

namespace {

std::int64_t positive_mod(std::int64_t v, std::int64_t m) {
    std::int64_t r = v % m;
    return r < 0 ? r + m : r;
}

} // namespace

AbelianGroup::AbelianGroup(std::vector<std::int64_t> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.empty()) throw ValidationError("abelian group needs at least one modulus");
    for (auto s : moduli_) {
        if (s <= 0) throw ValidationError("abelian group moduli must be positive");
    }
    strides_.assign(moduli_.size(), 1);
    for (std::size_t i = moduli_.size(); i-- > 1;) {
        strides_[i - 1] = strides_[i] * static_cast<std::size_t>(moduli_[i]);
    }
    order_ = strides_[0] * static_cast<std::size_t>(moduli_[0]);
}

std::vector<std::int64_t> AbelianGroup::element(std::size_t index) const {
    std::vector<std::int64_t> coords(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        coords[i] = static_cast<std::int64_t>(index / strides_[i]);
        index %= strides_[i];
    }
    return coords;
}

std::size_t AbelianGroup::index_of(const std::vector<std::int64_t>& coords) const {
    if (coords.size() != moduli_.size())
        throw ValidationError("element has wrong number of coordinates");
    std::size_t index = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        index += static_cast<std::size_t>(positive_mod(coords[i], moduli_[i])) * strides_[i];
    }
    return index;
}

std::size_t AbelianGroup::add(std::size_t a, std::size_t b) const {
    std::size_t index = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        const auto s = static_cast<std::size_t>(moduli_[i]);
        const std::size_t ai = (a / strides_[i]) % s;
        const std::size_t bi = (b / strides_[i]) % s;
        index += ((ai + bi) % s) * strides_[i];
    }
    return index;
}

std::size_t AbelianGroup::negate(std::size_t a) const {
    std::size_t index = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        const auto s = static_cast<std::size_t>(moduli_[i]);
        const std::size_t ai = (a / strides_[i]) % s;
        index += ((s - ai) % s) * strides_[i];
    }
    return index;
}

cdouble AbelianGroup::character(std::size_t n, std::size_t xi) const {
    // Accumulate the phase as a fraction of a full turn so that equal
    // characters evaluate bit-identically.
    double turns = 0.0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        const auto s = static_cast<std::int64_t>(moduli_[i]);
        const auto ni = static_cast<std::int64_t>((n / strides_[i]) % static_cast<std::size_t>(s));
        const auto xii = static_cast<std::int64_t>((xi / strides_[i]) % static_cast<std::size_t>(s));
        turns += static_cast<double>((ni * xii) % s) / static_cast<double>(s);
    }
    turns -= std::floor(turns);
    return std::polar(1.0, 2.0 * M_PI * turns);
}

Automorphism::Automorphism(AbelianGroupPtr group, std::vector<std::size_t> permutation,
                           std::optional<std::vector<std::vector<std::int64_t>>> matrix)
    : group_(std::move(group)), permutation_(std::move(permutation)), matrix_(std::move(matrix)) {
    validate();
}

Automorphism Automorphism::from_matrix(const AbelianGroupPtr& group,
                                       const std::vector<std::vector<std::int64_t>>& matrix) {
    const std::size_t d = group->dim();
    if (matrix.size() != d)
        throw ValidationError("automorphism matrix must be " + std::to_string(d) + "x" +
                              std::to_string(d));
    for (const auto& row : matrix) {
        if (row.size() != d) throw ValidationError("automorphism matrix is not square");
    }
    // Well-definedness mod the moduli: bumping coordinate j by s_j must not
    // move the image, i.e. A_ij * s_j = 0 mod s_i.
    const auto& s = group->moduli();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (positive_mod(matrix[i][j] * s[j], s[i]) != 0) {
                throw ValidationError("matrix does not define a map on the group: entry (" +
                                      std::to_string(i) + "," + std::to_string(j) +
                                      ") breaks compatibility with the moduli");
            }
        }
    }
    std::vector<std::size_t> perm(group->order());
    std::vector<std::int64_t> image(d);
    for (std::size_t n = 0; n < group->order(); ++n) {
        const auto coords = group->element(n);
        for (std::size_t i = 0; i < d; ++i) {
            std::int64_t acc = 0;
            for (std::size_t j = 0; j < d; ++j) acc += matrix[i][j] * coords[j];
            image[i] = positive_mod(acc, s[i]);
        }
        perm[n] = group->index_of(image);
    }
    return Automorphism(group, std::move(perm), matrix);
}

Automorphism Automorphism::from_permutation(const AbelianGroupPtr& group,
                                            std::vector<std::size_t> permutation) {
    if (permutation.size() != group->order())
        throw ValidationError("permutation length must equal the group order");
    return Automorphism(group, std::move(permutation), std::nullopt);
}

Automorphism Automorphism::identity(const AbelianGroupPtr& group) {
    std::vector<std::size_t> perm(group->order());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    return Automorphism(group, std::move(perm), std::nullopt);
}

void Automorphism::validate() const {
    const std::size_t order = group_->order();
    std::vector<bool> seen(order, false);
    for (std::size_t n = 0; n < order; ++n) {
        const std::size_t image = permutation_[n];
        if (image >= order) throw ValidationError("automorphism image out of range");
        if (seen[image]) throw ValidationError("automorphism is not a bijection");
        seen[image] = true;
    }
    for (std::size_t a = 0; a < order; ++a) {
        for (std::size_t b = a; b < order; ++b) {
            if (permutation_[group_->add(a, b)] !=
                group_->add(permutation_[a], permutation_[b])) {
                throw ValidationError("automorphism is not additive");
            }
        }
    }
}

FiniteGroup::FiniteGroup(std::vector<std::vector<std::size_t>> table) : table_(std::move(table)) {
    order_ = table_.size();
    if (order_ == 0) throw ValidationError("finite group table is empty");
    for (const auto& row : table_) {
        if (row.size() != order_) throw ValidationError("finite group table is not square");
        for (auto v : row) {
            if (v >= order_) throw ValidationError("finite group table entry out of range");
        }
    }
    for (std::size_t a = 0; a < order_; ++a) {
        for (std::size_t b = 0; b < order_; ++b) {
            for (std::size_t c = 0; c < order_; ++c) {
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
                    throw ValidationError("finite group table is not associative");
                }
            }
        }
    }
    bool found = false;
    for (std::size_t e = 0; e < order_; ++e) {
        bool ok = true;
        for (std::size_t a = 0; a < order_ && ok; ++a) {
            ok = table_[e][a] == a && table_[a][e] == a;
        }
        if (ok) {
            identity_ = e;
            found = true;
            break;
        }
    }
    if (!found) throw ValidationError("finite group table has no identity");
    inverse_.assign(order_, order_);
    for (std::size_t a = 0; a < order_; ++a) {
        for (std::size_t b = 0; b < order_; ++b) {
            if (table_[a][b] == identity_ && table_[b][a] == identity_) {
                inverse_[a] = b;
                break;
            }
        }
        if (inverse_[a] == order_) throw ValidationError("finite group element has no inverse");
    }
}

FiniteGroup FiniteGroup::cyclic(std::size_t order) {
    std::vector<std::vector<std::size_t>> table(order, std::vector<std::size_t>(order));
    for (std::size_t a = 0; a < order; ++a) {
        for (std::size_t b = 0; b < order; ++b) table[a][b] = (a + b) % order;
    }
    return FiniteGroup(std::move(table));
}

SemidirectGroup::SemidirectGroup(AbelianGroupPtr abelian, FiniteGroup finite,
                                 std::vector<Automorphism> action)
    : abelian_(std::move(abelian)), finite_(std::move(finite)), action_(std::move(action)) {
    validate();
}

void SemidirectGroup::validate() const {
    if (action_.size() != finite_.order())
        throw ValidationError("need exactly one automorphism per element of H");
    const std::size_t n_order = abelian_->order();
    const auto& id_perm = action_[finite_.identity()].permutation();
    for (std::size_t n = 0; n < n_order; ++n) {
        if (id_perm[n] != n)
            throw ValidationError("the identity of H must act trivially on N");
    }
    for (std::size_t h1 = 0; h1 < finite_.order(); ++h1) {
        for (std::size_t h2 = 0; h2 < finite_.order(); ++h2) {
            const auto& composed = action_[finite_.multiply(h1, h2)];
            for (std::size_t n = 0; n < n_order; ++n) {
                if (composed.apply(n) != action_[h1].apply(action_[h2].apply(n))) {
                    throw ValidationError("action is not a homomorphism: phi_{h1 h2} != "
                                          "phi_{h1} o phi_{h2} at h1=" +
                                          std::to_string(h1) + " h2=" + std::to_string(h2));
                }
            }
        }
    }
}

GroupElement SemidirectGroup::multiply(const GroupElement& a, const GroupElement& b) const {
    return {abelian_->add(a.n, action_[a.h].apply(b.n)), finite_.multiply(a.h, b.h)};
}

GroupElement SemidirectGroup::inverse(const GroupElement& g) const {
    const std::size_t h_inv = finite_.inverse(g.h);
    return {action_[h_inv].apply(abelian_->negate(g.n)), h_inv};
}

bool SemidirectGroup::operator==(const SemidirectGroup& other) const {
    if (!(*abelian_ == *other.abelian_) || !(finite_ == other.finite_)) return false;
    for (std::size_t h = 0; h < finite_.order(); ++h) {
        if (!(action_[h] == other.action_[h])) return false;
    }
    return true;
}

GroupPtr make_dihedral(std::int64_t s) {
    return make_negation_product({s});
}

GroupPtr make_negation_product(std::vector<std::int64_t> moduli) {
    auto n = std::make_shared<AbelianGroup>(std::move(moduli));
    std::vector<std::size_t> neg(n->order());
    for (std::size_t i = 0; i < n->order(); ++i) neg[i] = n->negate(i);
    std::vector<Automorphism> action;
    action.push_back(Automorphism::identity(n));
    action.push_back(Automorphism::from_permutation(n, std::move(neg)));
    return std::make_shared<SemidirectGroup>(n, FiniteGroup::cyclic(2), std::move(action));
}

std::vector<cdouble> fourier(const AbelianGroup& group, const std::vector<cdouble>& values) {
    if (values.size() != group.order())
        throw ValidationError("signal length must equal the group order");
    std::vector<cdouble> out(group.order());
    for (std::size_t xi = 0; xi < group.order(); ++xi) {
        cdouble acc = 0.0;
        for (std::size_t n = 0; n < group.order(); ++n) {
            acc += values[n] * std::conj(group.character(n, xi));
        }
        out[xi] = acc;
    }
    return out;
}

std::vector<cdouble> inverse_fourier(const AbelianGroup& group, const std::vector<cdouble>& values) {
    if (values.size() != group.order())
        throw ValidationError("signal length must equal the group order");
    const double weight = 1.0 / static_cast<double>(group.order());
    std::vector<cdouble> out(group.order());
    for (std::size_t n = 0; n < group.order(); ++n) {
        cdouble acc = 0.0;
        for (std::size_t xi = 0; xi < group.order(); ++xi) {
            acc += values[xi] * group.character(n, xi);
        }
        out[n] = acc * weight;
    }
    return out;
}

std::vector<cdouble> convolve(const AbelianGroup& group, const std::vector<cdouble>& a,
                              const std::vector<cdouble>& b) {
    if (a.size() != group.order() || b.size() != group.order())
        throw ValidationError("signal length must equal the group order");
    std::vector<cdouble> out(group.order(), cdouble{0.0, 0.0});
    for (std::size_t m = 0; m < group.order(); ++m) {
        cdouble acc = 0.0;
        for (std::size_t n = 0; n < group.order(); ++n) {
            acc += a[n] * b[group.add(m, group.negate(n))];
        }
        out[m] = acc;
    }
    return out;
}

} // namespace groupfb

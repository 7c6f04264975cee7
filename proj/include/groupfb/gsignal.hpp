#pragma once

#include <vector>

#include "groupfb/group.hpp"

namespace groupfb {

/// Complex signal on the abelian factor N.
struct NSignal {
    AbelianGroupPtr group;
    std::vector<cdouble> values;

    NSignal() = default;
    NSignal(AbelianGroupPtr g, std::vector<cdouble> v);
    static NSignal zeros(const AbelianGroupPtr& g);
    static NSignal delta(const AbelianGroupPtr& g, std::size_t n);

    cdouble& operator[](std::size_t n) { return values[n]; }
    const cdouble& operator[](std::size_t n) const { return values[n]; }
    double norm() const;
};

/// Complex signal on G = N x| H, stored dense in n-major, h-minor order.
struct GSignal {
    GroupPtr group;
    std::vector<cdouble> values;

    GSignal() = default;
    GSignal(GroupPtr g, std::vector<cdouble> v);
    static GSignal zeros(const GroupPtr& g);
    static GSignal delta(const GroupPtr& g, const GroupElement& at);

    cdouble& at(std::size_t n, std::size_t h) { return values[group->index_of({n, h})]; }
    const cdouble& at(std::size_t n, std::size_t h) const {
        return values[group->index_of({n, h})];
    }
    cdouble& at(const GroupElement& g) { return values[group->index_of(g)]; }
    const cdouble& at(const GroupElement& g) const { return values[group->index_of(g)]; }

    double norm() const;
    cdouble inner(const GSignal& other) const;
};

/// Throws when two signals live on different groups.
void require_same_group(const GSignal& a, const GSignal& b);

/// Group-algebra convolution: (a * f)(m, l) = sum_{(n,h)} a(n,h)
/// f(phi_{h^{-1}}(m - n), h^{-1} l).
GSignal convolve(const GSignal& a, const GSignal& f);

/// Restriction to the identity slice of H: (dec a)(n) = a(n, 1_H).
NSignal decimate(const GSignal& a);

/// Zero-padding adjoint of decimate: value c(n) at (n, 1_H), zero elsewhere.
GSignal expand(const GroupPtr& group, const NSignal& c);

/// (T_m a)(n, h) = a(n - m, h).
GSignal translate(const GSignal& a, std::size_t m);

/// Involution: a~(n, h) = conj(a((n, h)^{-1})).
GSignal involution(const GSignal& a);

/// Plain polyphase slice a_h(n) = a(n, h).
NSignal polyphase_slice(const GSignal& a, std::size_t h);

/// Reassemble a GSignal from its |H| polyphase slices.
GSignal from_slices(const GroupPtr& group, const std::vector<NSignal>& slices);

/// Analysis polyphase component f_h(n) = f[(-n, h)^{-1}], evaluated through
/// the group inverse.
NSignal analysis_component(const GSignal& f, std::size_t h);

} // namespace groupfb

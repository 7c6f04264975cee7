#include "groupfb/gsignal.hpp"

#include <cmath>

namespace groupfb {

NSignal::NSignal(AbelianGroupPtr g, std::vector<cdouble> v)
    : group(std::move(g)), values(std::move(v)) {
    if (values.size() != group->order())
        throw ValidationError("N-signal length must equal the group order");
}

NSignal NSignal::zeros(const AbelianGroupPtr& g) {
    return NSignal(g, std::vector<cdouble>(g->order(), cdouble{0.0, 0.0}));
}

NSignal NSignal::delta(const AbelianGroupPtr& g, std::size_t n) {
    NSignal s = zeros(g);
    s.values[n] = 1.0;
    return s;
}

double NSignal::norm() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::norm(v);
    return std::sqrt(acc);
}

GSignal::GSignal(GroupPtr g, std::vector<cdouble> v)
    : group(std::move(g)), values(std::move(v)) {
    if (values.size() != group->order())
        throw ValidationError("G-signal length must equal the group order");
}

GSignal GSignal::zeros(const GroupPtr& g) {
    return GSignal(g, std::vector<cdouble>(g->order(), cdouble{0.0, 0.0}));
}

GSignal GSignal::delta(const GroupPtr& g, const GroupElement& at) {
    GSignal s = zeros(g);
    s.at(at) = 1.0;
    return s;
}

double GSignal::norm() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::norm(v);
    return std::sqrt(acc);
}

cdouble GSignal::inner(const GSignal& other) const {
    require_same_group(*this, other);
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += values[i] * std::conj(other.values[i]);
    return acc;
}

void require_same_group(const GSignal& a, const GSignal& b) {
    if (a.group.get() == b.group.get()) return;
    if (!a.group || !b.group || !(*a.group == *b.group))
        throw ValidationError("signals live on different groups");
}

GSignal convolve(const GSignal& a, const GSignal& f) {
    require_same_group(a, f);
    const auto& group = *a.group;
    const auto& n_group = group.n_group();
    const auto& h_group = group.h_group();
    GSignal out = GSignal::zeros(a.group);
    for (std::size_t m = 0; m < n_group.order(); ++m) {
        for (std::size_t l = 0; l < h_group.order(); ++l) {
            cdouble acc = 0.0;
            for (std::size_t n = 0; n < n_group.order(); ++n) {
                const std::size_t diff = n_group.add(m, n_group.negate(n));
                for (std::size_t h = 0; h < h_group.order(); ++h) {
                    const std::size_t h_inv = h_group.inverse(h);
                    acc += a.at(n, h) *
                           f.at(group.action(h_inv).apply(diff), h_group.multiply(h_inv, l));
                }
            }
            out.at(m, l) = acc;
        }
    }
    return out;
}

NSignal decimate(const GSignal& a) {
    const std::size_t identity = a.group->h_group().identity();
    NSignal out = NSignal::zeros(a.group->n_group_ptr());
    for (std::size_t n = 0; n < out.values.size(); ++n) out[n] = a.at(n, identity);
    return out;
}

GSignal expand(const GroupPtr& group, const NSignal& c) {
    if (!(*group->n_group_ptr() == *c.group))
        throw ValidationError("N-signal does not match the abelian factor of the group");
    GSignal out = GSignal::zeros(group);
    const std::size_t identity = group->h_group().identity();
    for (std::size_t n = 0; n < c.values.size(); ++n) out.at(n, identity) = c[n];
    return out;
}

GSignal translate(const GSignal& a, std::size_t m) {
    const auto& n_group = a.group->n_group();
    GSignal out = GSignal::zeros(a.group);
    const std::size_t L = a.group->h_group().order();
    for (std::size_t n = 0; n < n_group.order(); ++n) {
        const std::size_t src = n_group.add(n, n_group.negate(m));
        for (std::size_t h = 0; h < L; ++h) out.at(n, h) = a.at(src, h);
    }
    return out;
}

GSignal involution(const GSignal& a) {
    GSignal out = GSignal::zeros(a.group);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const GroupElement g = a.group->element(i);
        out.values[i] = std::conj(a.at(a.group->inverse(g)));
    }
    return out;
}

NSignal polyphase_slice(const GSignal& a, std::size_t h) {
    NSignal out = NSignal::zeros(a.group->n_group_ptr());
    for (std::size_t n = 0; n < out.values.size(); ++n) out[n] = a.at(n, h);
    return out;
}

GSignal from_slices(const GroupPtr& group, const std::vector<NSignal>& slices) {
    if (slices.size() != group->h_group().order())
        throw ValidationError("need one slice per element of H");
    GSignal out = GSignal::zeros(group);
    for (std::size_t h = 0; h < slices.size(); ++h) {
        if (!(*slices[h].group == group->n_group()))
            throw ValidationError("slice does not match the abelian factor of the group");
        for (std::size_t n = 0; n < slices[h].values.size(); ++n) out.at(n, h) = slices[h][n];
    }
    return out;
}

NSignal analysis_component(const GSignal& f, std::size_t h) {
    const auto& group = *f.group;
    const auto& n_group = group.n_group();
    NSignal out = NSignal::zeros(group.n_group_ptr());
    for (std::size_t n = 0; n < n_group.order(); ++n) {
        const GroupElement flipped = group.inverse({n_group.negate(n), h});
        out[n] = f.at(flipped);
    }
    return out;
}

} // namespace groupfb

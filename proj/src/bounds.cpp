#include "ctxlab/bounds.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ctxlab::engine {

namespace {

using WitnessTuple = std::array<std::uint32_t, 3>; // unused trailing positions zero

// Spec compiled into flat lookup tables. Coefficients are negated for
// minimize-direction specs so every kernel maximizes.
struct Compiled {
    int n = 0;
    int L = 0;
    bool integral = false;
    bool minimize = false;

    struct Position {
        std::vector<int> support_labels;          // label indices, ascending
        std::vector<std::uint32_t> sub_to_full;   // strictly increasing
        std::vector<std::int8_t> sign;            // [c * slots + slot] -> +-1
        int slots = 0;
        std::size_t count = 0;                    // 2^slots
    };
    std::vector<Position> pos;

    struct Term {
        double coeff = 0.0;
        std::int64_t icoeff = 0;
        int len = 0;
        std::array<int, 3> slot{};                // slot within pos[k].support_labels
    };
    std::vector<Term> terms;

    std::uint64_t domain_size() const
    {
        std::uint64_t d = 1;
        for (const auto& p : pos) d *= p.count;
        return d;
    }
};

std::vector<std::vector<int>> support_label_indices(const InequalitySpec& spec)
{
    std::vector<std::vector<int>> sup(static_cast<std::size_t>(spec.max_length()));
    for (std::size_t t = 0; t < spec.terms().size(); ++t)
        for (std::size_t k = 0; k < spec.terms()[t].sequence.size(); ++k) {
            const int li = spec.term_label_index(t, k);
            auto& s = sup[k];
            if (std::find(s.begin(), s.end(), li) == s.end()) s.push_back(li);
        }
    for (auto& s : sup) std::sort(s.begin(), s.end());
    return sup;
}

Compiled compile(const InequalitySpec& spec, bool use_reduction)
{
    Compiled c;
    c.n = spec.n();
    c.L = spec.max_length();
    c.integral = spec.integral_coefficients();
    c.minimize = spec.direction() == Direction::Minimize;
    if (c.L > kMaxSequenceLength)
        throw capacity_error("sequences of length " + std::to_string(c.L) + " exceed the supported maximum " +
                             std::to_string(kMaxSequenceLength));

    auto sup = support_label_indices(spec);
    if (!use_reduction)
        for (auto& s : sup) {
            s.resize(static_cast<std::size_t>(c.n));
            for (int i = 0; i < c.n; ++i) s[static_cast<std::size_t>(i)] = i;
        }

    c.pos.resize(sup.size());
    for (std::size_t k = 0; k < sup.size(); ++k) {
        auto& p = c.pos[k];
        p.support_labels = sup[k];
        p.slots = static_cast<int>(p.support_labels.size());
        p.count = std::size_t{1} << p.slots;
        p.sub_to_full.resize(p.count);
        p.sign.resize(p.count * static_cast<std::size_t>(p.slots));
        for (std::size_t sub = 0; sub < p.count; ++sub) {
            std::uint32_t full = 0;
            for (int s = 0; s < p.slots; ++s) {
                const auto bit = (sub >> (p.slots - 1 - s)) & 1u;
                if (bit) full |= std::uint32_t{1} << (c.n - 1 - p.support_labels[static_cast<std::size_t>(s)]);
                p.sign[sub * static_cast<std::size_t>(p.slots) + static_cast<std::size_t>(s)] =
                    bit ? std::int8_t{-1} : std::int8_t{1};
            }
            p.sub_to_full[sub] = full;
        }
    }

    const double flip = c.minimize ? -1.0 : 1.0;
    c.terms.reserve(spec.terms().size());
    for (std::size_t t = 0; t < spec.terms().size(); ++t) {
        Compiled::Term ct;
        ct.coeff = flip * spec.terms()[t].coefficient;
        ct.icoeff = static_cast<std::int64_t>(std::llround(ct.coeff));
        ct.len = static_cast<int>(spec.terms()[t].sequence.size());
        for (int k = 0; k < ct.len; ++k) {
            const int li = spec.term_label_index(t, static_cast<std::size_t>(k));
            const auto& s = c.pos[static_cast<std::size_t>(k)].support_labels;
            ct.slot[static_cast<std::size_t>(k)] =
                static_cast<int>(std::lower_bound(s.begin(), s.end(), li) - s.begin());
        }
        c.terms.push_back(ct);
    }
    return c;
}

// Best value plus the lexicographically smallest optimal tuples, capped.
// Entries must arrive in ascending tuple order within one accumulator;
// merging is order-insensitive, so parallel partitioning cannot change the
// final result.
template <typename V>
struct Accumulator {
    bool any = false;
    V best{};
    std::vector<WitnessTuple> witnesses;

    void consider(V v, std::uint32_t a, std::uint32_t b, std::uint32_t c)
    {
        if (!any || v > best) {
            any = true;
            best = v;
            witnesses.assign(1, WitnessTuple{a, b, c});
        } else if (v == best && witnesses.size() < kWitnessCap) {
            witnesses.push_back(WitnessTuple{a, b, c});
        }
    }

    void merge(const Accumulator& other)
    {
        if (!other.any) return;
        if (!any || other.best > best) {
            *this = other;
            return;
        }
        if (other.best < best) return;
        std::vector<WitnessTuple> merged;
        merged.reserve(witnesses.size() + other.witnesses.size());
        std::merge(witnesses.begin(), witnesses.end(), other.witnesses.begin(), other.witnesses.end(),
                   std::back_inserter(merged));
        if (merged.size() > kWitnessCap) merged.resize(kWitnessCap);
        witnesses = std::move(merged);
    }
};

int resolve_threads(int requested)
{
#if defined(_OPENMP)
    return requested > 0 ? requested : omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

// ---- integer kernels -------------------------------------------------------

Accumulator<std::int64_t> search_int(const Compiled& c, int threads)
{
    Accumulator<std::int64_t> global;
    const auto& p1 = c.pos[0];
    const std::int64_t c1_count = static_cast<std::int64_t>(p1.count);

#if defined(_OPENMP)
#pragma omp parallel num_threads(threads)
#endif
    {
        Accumulator<std::int64_t> local;
        std::vector<std::int64_t> weights;
        std::vector<std::int64_t> partial(c.terms.size());

#if defined(_OPENMP)
#pragma omp for schedule(static) nowait
#endif
        for (std::int64_t c1 = 0; c1 < c1_count; ++c1) {
            const std::int8_t* s1 = p1.sign.data() + static_cast<std::size_t>(c1) * p1.slots;
            const std::uint32_t full1 = p1.sub_to_full[static_cast<std::size_t>(c1)];

            if (c.L == 1) {
                std::int64_t v = 0;
                for (const auto& t : c.terms) v += t.icoeff * s1[t.slot[0]];
                local.consider(v, full1, 0, 0);
                continue;
            }

            const auto& p2 = c.pos[1];
            if (c.L == 2) {
                std::int64_t base = 0;
                weights.assign(static_cast<std::size_t>(p2.slots), 0);
                for (const auto& t : c.terms) {
                    const std::int64_t w = t.icoeff * s1[t.slot[0]];
                    if (t.len == 1)
                        base += w;
                    else
                        weights[static_cast<std::size_t>(t.slot[1])] += w;
                }
                for (std::size_t c2 = 0; c2 < p2.count; ++c2) {
                    const std::int8_t* s2 = p2.sign.data() + c2 * static_cast<std::size_t>(p2.slots);
                    std::int64_t v = base;
                    for (int s = 0; s < p2.slots; ++s) v += weights[static_cast<std::size_t>(s)] * s2[s];
                    local.consider(v, full1, p2.sub_to_full[c2], 0);
                }
                continue;
            }

            // L == 3
            const auto& p3 = c.pos[2];
            std::int64_t base1 = 0;
            for (std::size_t t = 0; t < c.terms.size(); ++t) {
                const std::int64_t w = c.terms[t].icoeff * s1[c.terms[t].slot[0]];
                if (c.terms[t].len == 1)
                    base1 += w;
                else
                    partial[t] = w;
            }
            for (std::size_t c2 = 0; c2 < p2.count; ++c2) {
                const std::int8_t* s2 = p2.sign.data() + c2 * static_cast<std::size_t>(p2.slots);
                std::int64_t base2 = base1;
                weights.assign(static_cast<std::size_t>(p3.slots), 0);
                for (std::size_t t = 0; t < c.terms.size(); ++t) {
                    const auto& term = c.terms[t];
                    if (term.len == 1) continue;
                    const std::int64_t w = partial[t] * s2[term.slot[1]];
                    if (term.len == 2)
                        base2 += w;
                    else
                        weights[static_cast<std::size_t>(term.slot[2])] += w;
                }
                const std::uint32_t full2 = p2.sub_to_full[c2];
                for (std::size_t c3 = 0; c3 < p3.count; ++c3) {
                    const std::int8_t* s3 = p3.sign.data() + c3 * static_cast<std::size_t>(p3.slots);
                    std::int64_t v = base2;
                    for (int s = 0; s < p3.slots; ++s) v += weights[static_cast<std::size_t>(s)] * s3[s];
                    local.consider(v, full1, full2, p3.sub_to_full[c3]);
                }
            }
        }

#if defined(_OPENMP)
#pragma omp critical(ctxlab_bound_merge)
#endif
        global.merge(local);
    }
    return global;
}

// Closed-form last position: for a fixed first state the maximum over the
// second is the sum of absolute per-slot weights. Integral L=2 specs only.
Accumulator<std::int64_t> search_int_factorized(const Compiled& c, int threads)
{
    const auto& p1 = c.pos[0];
    const auto& p2 = c.pos[1];
    const std::int64_t c1_count = static_cast<std::int64_t>(p1.count);

    std::int64_t best = 0;
    bool any = false;
#if defined(_OPENMP)
#pragma omp parallel num_threads(threads)
#endif
    {
        std::vector<std::int64_t> weights;
        std::int64_t local_best = 0;
        bool local_any = false;
#if defined(_OPENMP)
#pragma omp for schedule(static) nowait
#endif
        for (std::int64_t c1 = 0; c1 < c1_count; ++c1) {
            const std::int8_t* s1 = p1.sign.data() + static_cast<std::size_t>(c1) * p1.slots;
            std::int64_t v = 0;
            weights.assign(static_cast<std::size_t>(p2.slots), 0);
            for (const auto& t : c.terms) {
                const std::int64_t w = t.icoeff * s1[t.slot[0]];
                if (t.len == 1)
                    v += w;
                else
                    weights[static_cast<std::size_t>(t.slot[1])] += w;
            }
            for (std::int64_t w : weights) v += std::abs(w);
            if (!local_any || v > local_best) {
                local_best = v;
                local_any = true;
            }
        }
#if defined(_OPENMP)
#pragma omp critical(ctxlab_fact_merge)
#endif
        if (local_any && (!any || local_best > best)) {
            best = local_best;
            any = true;
        }
    }

    // Second pass: collect the lexicographically smallest optimal tuples by
    // rescanning candidate first states in order.
    Accumulator<std::int64_t> acc;
    std::vector<std::int64_t> weights;
    for (std::size_t c1 = 0; c1 < p1.count && acc.witnesses.size() < kWitnessCap; ++c1) {
        const std::int8_t* s1 = p1.sign.data() + c1 * static_cast<std::size_t>(p1.slots);
        std::int64_t base = 0;
        weights.assign(static_cast<std::size_t>(p2.slots), 0);
        for (const auto& t : c.terms) {
            const std::int64_t w = t.icoeff * s1[t.slot[0]];
            if (t.len == 1)
                base += w;
            else
                weights[static_cast<std::size_t>(t.slot[1])] += w;
        }
        std::int64_t reach = base;
        for (std::int64_t w : weights) reach += std::abs(w);
        if (reach != best) continue;
        for (std::size_t c2 = 0; c2 < p2.count && acc.witnesses.size() < kWitnessCap; ++c2) {
            const std::int8_t* s2 = p2.sign.data() + c2 * static_cast<std::size_t>(p2.slots);
            std::int64_t v = base;
            for (int s = 0; s < p2.slots; ++s) v += weights[static_cast<std::size_t>(s)] * s2[s];
            if (v == best) acc.consider(v, p1.sub_to_full[c1], p2.sub_to_full[c2], 0);
        }
    }
    acc.any = true;
    acc.best = best;
    return acc;
}

// ---- floating-point kernel -------------------------------------------------
// Terms are summed in declaration order so the kernel value is bit-identical
// to evaluate_on_evolution at the reported witnesses.

Accumulator<double> search_real(const Compiled& c, int threads)
{
    Accumulator<double> global;
    const auto& p1 = c.pos[0];
    const std::int64_t c1_count = static_cast<std::int64_t>(p1.count);

#if defined(_OPENMP)
#pragma omp parallel num_threads(threads)
#endif
    {
        Accumulator<double> local;
        std::vector<double> partial1(c.terms.size()), partial2(c.terms.size());

#if defined(_OPENMP)
#pragma omp for schedule(static) nowait
#endif
        for (std::int64_t c1 = 0; c1 < c1_count; ++c1) {
            const std::int8_t* s1 = p1.sign.data() + static_cast<std::size_t>(c1) * p1.slots;
            const std::uint32_t full1 = p1.sub_to_full[static_cast<std::size_t>(c1)];
            for (std::size_t t = 0; t < c.terms.size(); ++t)
                partial1[t] = c.terms[t].coeff * s1[c.terms[t].slot[0]];

            if (c.L == 1) {
                double v = 0.0;
                for (double x : partial1) v += x;
                local.consider(v, full1, 0, 0);
                continue;
            }
            const auto& p2 = c.pos[1];
            for (std::size_t c2 = 0; c2 < p2.count; ++c2) {
                const std::int8_t* s2 = p2.sign.data() + c2 * static_cast<std::size_t>(p2.slots);
                for (std::size_t t = 0; t < c.terms.size(); ++t)
                    partial2[t] = c.terms[t].len >= 2 ? partial1[t] * s2[c.terms[t].slot[1]] : partial1[t];
                const std::uint32_t full2 = p2.sub_to_full[c2];

                if (c.L == 2) {
                    double v = 0.0;
                    for (double x : partial2) v += x;
                    local.consider(v, full1, full2, 0);
                    continue;
                }
                const auto& p3 = c.pos[2];
                for (std::size_t c3 = 0; c3 < p3.count; ++c3) {
                    const std::int8_t* s3 = p3.sign.data() + c3 * static_cast<std::size_t>(p3.slots);
                    double v = 0.0;
                    for (std::size_t t = 0; t < c.terms.size(); ++t)
                        v += c.terms[t].len == 3 ? partial2[t] * s3[c.terms[t].slot[2]] : partial2[t];
                    local.consider(v, full1, full2, p3.sub_to_full[c3]);
                }
            }
        }

#if defined(_OPENMP)
#pragma omp critical(ctxlab_bound_merge_real)
#endif
        global.merge(local);
    }
    return global;
}

template <typename V>
BoundResult finish(const Compiled& c, const Accumulator<V>& acc, std::uint64_t evaluated)
{
    BoundResult r;
    r.integral = c.integral;
    r.evaluated_count = evaluated;
    const double raw = static_cast<double>(acc.best);
    r.value = c.minimize ? -raw : raw;
    r.witnesses.reserve(acc.witnesses.size());
    for (const auto& w : acc.witnesses) {
        Evolution e;
        e.states.assign(w.begin(), w.begin() + c.L);
        r.witnesses.push_back(std::move(e));
    }
    return r;
}

} // namespace

std::vector<std::vector<std::string>> position_supports(const InequalitySpec& spec)
{
    const auto sup = support_label_indices(spec);
    std::vector<std::vector<std::string>> out;
    out.reserve(sup.size());
    for (const auto& s : sup) {
        std::vector<std::string> names;
        names.reserve(s.size());
        for (int li : s) names.push_back(spec.labels()[static_cast<std::size_t>(li)]);
        out.push_back(std::move(names));
    }
    return out;
}

BoundResult static_bound(const InequalitySpec& spec)
{
    const int n = spec.n();
    const int L = spec.max_length();
    const bool minimize = spec.direction() == Direction::Minimize;
    const double flip = minimize ? -1.0 : 1.0;
    const std::uint32_t count = std::uint32_t{1} << n;

    // On a constant evolution each term reduces to a parity of the bits its
    // sequence reads an odd number of times.
    std::vector<std::uint32_t> masks(spec.terms().size(), 0);
    for (std::size_t t = 0; t < spec.terms().size(); ++t)
        for (std::size_t k = 0; k < spec.terms()[t].sequence.size(); ++k)
            masks[t] ^= std::uint32_t{1} << (n - 1 - spec.term_label_index(t, k));

    const bool integral = spec.integral_coefficients();
    std::vector<double> coeffs(masks.size());
    std::vector<std::int64_t> icoeffs(masks.size());
    for (std::size_t t = 0; t < masks.size(); ++t) {
        coeffs[t] = flip * spec.terms()[t].coefficient;
        icoeffs[t] = static_cast<std::int64_t>(std::llround(coeffs[t]));
    }

    Accumulator<std::int64_t> iacc;
    Accumulator<double> dacc;
    for (std::uint32_t i = 0; i < count; ++i) {
        if (integral) {
            std::int64_t v = 0;
            for (std::size_t t = 0; t < masks.size(); ++t)
                v += (std::popcount(i & masks[t]) & 1) ? -icoeffs[t] : icoeffs[t];
            iacc.consider(v, i, 0, 0);
        } else {
            double v = 0.0;
            for (std::size_t t = 0; t < masks.size(); ++t)
                v += (std::popcount(i & masks[t]) & 1) ? -coeffs[t] : coeffs[t];
            dacc.consider(v, i, 0, 0);
        }
    }

    BoundResult r;
    r.integral = integral;
    r.evaluated_count = count;
    const double raw = integral ? static_cast<double>(iacc.best) : dacc.best;
    r.value = minimize ? -raw : raw;
    const auto& wits = integral ? iacc.witnesses : dacc.witnesses;
    for (const auto& w : wits) {
        Evolution e;
        e.states.assign(static_cast<std::size_t>(L), w[0]);
        r.witnesses.push_back(std::move(e));
    }
    return r;
}

BoundResult evolving_bound(const InequalitySpec& spec, const SearchOptions& options)
{
    const Compiled c = compile(spec, options.use_reduction);
    const int threads = resolve_threads(options.threads);
    const std::uint64_t domain = c.domain_size();

    if (c.integral) {
        if (options.use_factorized && c.L == 2) return finish(c, search_int_factorized(c, threads), domain);
        return finish(c, search_int(c, threads), domain);
    }
    return finish(c, search_real(c, threads), domain);
}

BoundResult evolving_bound_serial(const InequalitySpec& spec)
{
    const int n = spec.n();
    const int L = spec.max_length();
    if (L > kMaxSequenceLength)
        throw capacity_error("sequences of length " + std::to_string(L) + " exceed the supported maximum " +
                             std::to_string(kMaxSequenceLength));
    const bool minimize = spec.direction() == Direction::Minimize;
    const std::uint64_t count = std::uint64_t{1} << n;

    BoundResult r;
    r.integral = spec.integral_coefficients();
    r.evaluated_count = 1;
    for (int k = 0; k < L; ++k) r.evaluated_count *= count;

    Evolution evo;
    evo.states.assign(static_cast<std::size_t>(L), 0);
    bool any = false;
    double best = 0.0;
    while (true) {
        const double v = evaluate_on_evolution(spec, evo);
        const bool better = !any || (minimize ? v < best : v > best);
        if (better) {
            any = true;
            best = v;
            r.witnesses.assign(1, evo);
        } else if (v == best && r.witnesses.size() < kWitnessCap) {
            r.witnesses.push_back(evo);
        }
        // odometer increment, last position fastest
        int k = L - 1;
        for (; k >= 0; --k) {
            if (++evo.states[static_cast<std::size_t>(k)] < count) break;
            evo.states[static_cast<std::size_t>(k)] = 0;
        }
        if (k < 0) break;
    }
    r.value = best;
    return r;
}

CertifyResult certify(const InequalitySpec& spec, const SearchOptions& options)
{
    CertifyResult res;
    res.static_result = static_bound(spec);
    res.evolving_result = evolving_bound(spec, options);
    res.robust = res.static_result.value == res.evolving_result.value;
    return res;
}

} // namespace ctxlab::engine

#include "ddh/groebner.hpp"

#include <algorithm>
#include <stdexcept>

namespace ddh {

namespace {

using Mono = GroebnerEngine::Mono;
using GPoly = GroebnerEngine::GPoly;

int total_deg(const Mono& m) {
    int s = 0;
    for (int x : m) s += x;
    return s;
}

bool mono_divides(const Mono& a, const Mono& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Mono mono_div(const Mono& b, const Mono& a) {
    Mono r = b;
    for (size_t i = 0; i < a.size(); ++i) r[i] -= a[i];
    return r;
}

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r = a;
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Mono mono_lcm(const Mono& a, const Mono& b) {
    Mono r = a;
    for (size_t i = 0; i < b.size(); ++i) r[i] = std::max(r[i], b[i]);
    return r;
}

void add_term(GPoly& p, const Mono& m, const FieldElem& c) {
    if (c.is_zero()) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p[m] = c;
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) p.erase(it);
    }
}

GPoly mul_term(const GPoly& p, const Mono& m, const FieldElem& c) {
    GPoly r;
    for (auto& [mm, cc] : p) add_term(r, mono_mul(mm, m), cc * c);
    return r;
}

}  // namespace

bool GroebnerEngine::degrevlex_less(const Mono& a, const Mono& b) {
    int da = total_deg(a), db = total_deg(b);
    if (da != db) return da < db;
    // degrevlex: compare last nonzero entry of a-b; a < b if it is positive
    for (int i = (int)a.size() - 1; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

GroebnerEngine::GroebnerEngine(int nvars, long step_budget)
    : nvars_(nvars), budget_(step_budget) {}

void GroebnerEngine::add_generator(GPoly p) {
    if (!p.empty()) basis_.push_back(std::move(p));
}

const Mono& GroebnerEngine::leading_mono(const GPoly& p) {
    auto best = p.begin();
    for (auto it = std::next(p.begin()); it != p.end(); ++it)
        if (degrevlex_less(best->first, it->first)) best = it;
    return best->first;
}

GPoly GroebnerEngine::reduce(GPoly p, long* steps) const {
    GPoly rem;
    while (!p.empty()) {
        if (steps && --(*steps) < 0) throw std::length_error("budget");
        Mono lm = leading_mono(p);
        FieldElem lc = p.at(lm);
        bool reduced = false;
        for (auto& g : basis_) {
            Mono glm = leading_mono(g);
            if (!mono_divides(glm, lm)) continue;
            FieldElem factor = lc / g.at(glm);
            GPoly sub = mul_term(g, mono_div(lm, glm), factor);
            for (auto& [m, c] : sub) add_term(p, m, -c);
            reduced = true;
            break;
        }
        if (!reduced) {
            add_term(rem, lm, lc);
            p.erase(lm);
        }
    }
    return rem;
}

bool GroebnerEngine::compute() {
    computed_ = true;
    long steps = budget_;
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < basis_.size(); ++i)
        for (size_t j = i + 1; j < basis_.size(); ++j) pairs.push_back({i, j});
    try {
        while (!pairs.empty()) {
            auto [i, j] = pairs.back();
            pairs.pop_back();
            Mono li = leading_mono(basis_[i]), lj = leading_mono(basis_[j]);
            // Buchberger's coprimality criterion
            Mono lcm = mono_lcm(li, lj);
            if (total_deg(lcm) == total_deg(li) + total_deg(lj)) continue;
            FieldElem ci = basis_[i].at(li), cj = basis_[j].at(lj);
            GPoly s = mul_term(basis_[i], mono_div(lcm, li), FieldElem(1) / ci);
            GPoly t = mul_term(basis_[j], mono_div(lcm, lj), FieldElem(1) / cj);
            for (auto& [m, c] : t) add_term(s, m, -c);
            GPoly r = reduce(std::move(s), &steps);
            if (--steps < 0) throw std::length_error("budget");
            if (!r.empty()) {
                for (size_t k2 = 0; k2 < basis_.size(); ++k2) pairs.push_back({k2, basis_.size()});
                basis_.push_back(std::move(r));
            }
        }
    } catch (const std::length_error&) {
        exhausted_ = true;
        return false;
    }
    return true;
}

GPoly GroebnerEngine::normal_form(GPoly p) const {
    if (!computed_) throw std::logic_error("GroebnerEngine: compute() not run");
    return reduce(std::move(p), nullptr);
}

bool GroebnerEngine::reduces_to_zero(const GPoly& p) const { return normal_form(p).empty(); }

}  // namespace ddh

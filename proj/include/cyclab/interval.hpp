#pragma once

#include <mpfr.h>

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "cyclab/int_mat.hpp"
#include "cyclab/numeric_util.hpp"

namespace cyclab {

// Closed interval [lo, hi] with mpfr endpoints and outward rounding; every
// arithmetic result encloses the exact value.
class RInterval {
  public:
    RInterval() : prec_(64) { init(); }
    explicit RInterval(int prec) : prec_(prec) { init(); }
    RInterval(const RInterval& o) : prec_(o.prec_) {
        init();
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    RInterval(RInterval&& o) noexcept : prec_(o.prec_) {
        lo_[0] = o.lo_[0];
        hi_[0] = o.hi_[0];
        o.moved_ = true;
    }
    RInterval& operator=(const RInterval& o) {
        if (this != &o) {
            if (prec_ != o.prec_) {
                clear();
                prec_ = o.prec_;
                init();
            }
            mpfr_set(lo_, o.lo_, MPFR_RNDD);
            mpfr_set(hi_, o.hi_, MPFR_RNDU);
        }
        return *this;
    }
    RInterval& operator=(RInterval&& o) noexcept {
        if (this != &o) {
            clear();
            prec_ = o.prec_;
            lo_[0] = o.lo_[0];
            hi_[0] = o.hi_[0];
            o.moved_ = true;
        }
        return *this;
    }
    ~RInterval() { clear(); }

    int precision() const { return prec_; }

    static RInterval from_long(long v, int prec) {
        RInterval r(prec);
        mpfr_set_si(r.lo_, v, MPFR_RNDD);
        mpfr_set_si(r.hi_, v, MPFR_RNDU);
        return r;
    }

    static RInterval zero(int prec) { return from_long(0, prec); }

    static RInterval pi(int prec) {
        RInterval r(prec);
        mpfr_const_pi(r.lo_, MPFR_RNDD);
        mpfr_const_pi(r.hi_, MPFR_RNDU);
        return r;
    }

    RInterval operator+(const RInterval& o) const {
        RInterval r(std::max(prec_, o.prec_));
        mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
        return r;
    }
    RInterval& operator+=(const RInterval& o) {
        mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
        return *this;
    }
    RInterval operator-(const RInterval& o) const {
        RInterval r(std::max(prec_, o.prec_));
        mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
        return r;
    }
    RInterval scaled_long(long k) const {
        RInterval r(prec_);
        if (k >= 0) {
            mpfr_mul_si(r.lo_, lo_, k, MPFR_RNDD);
            mpfr_mul_si(r.hi_, hi_, k, MPFR_RNDU);
        } else {
            mpfr_mul_si(r.lo_, hi_, k, MPFR_RNDD);
            mpfr_mul_si(r.hi_, lo_, k, MPFR_RNDU);
        }
        return r;
    }
    RInterval div_long(long k) const {
        if (k == 0) throw InvalidInput("interval div by 0");
        RInterval r(prec_);
        if (k > 0) {
            mpfr_div_si(r.lo_, lo_, k, MPFR_RNDD);
            mpfr_div_si(r.hi_, hi_, k, MPFR_RNDU);
        } else {
            mpfr_div_si(r.lo_, hi_, k, MPFR_RNDD);
            mpfr_div_si(r.hi_, lo_, k, MPFR_RNDU);
        }
        return r;
    }

    // natural log; requires lo > 0
    RInterval log() const {
        if (mpfr_sgn(lo_) <= 0) throw ResourceLimit("interval log: lower bound not positive (raise precision)");
        RInterval r(prec_);
        mpfr_log(r.lo_, lo_, MPFR_RNDD);
        mpfr_log(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    // sine of an interval contained in [0, pi] (uses concavity of sin there)
    RInterval sin_on_0_pi() const {
        RInterval r(prec_);
        mpfr_t s1, s2;
        mpfr_init2(s1, prec_);
        mpfr_init2(s2, prec_);
        mpfr_sin(s1, lo_, MPFR_RNDD);
        mpfr_sin(s2, hi_, MPFR_RNDD);
        mpfr_min(r.lo_, s1, s2, MPFR_RNDD);
        mpfr_sin(s1, lo_, MPFR_RNDU);
        mpfr_sin(s2, hi_, MPFR_RNDU);
        mpfr_max(r.hi_, s1, s2, MPFR_RNDU);
        // if pi/2 may lie inside, the max is 1
        RInterval halfpi = RInterval::pi(prec_).div_long(2);
        if (mpfr_cmp(lo_, halfpi.hi_) <= 0 && mpfr_cmp(hi_, halfpi.lo_) >= 0) mpfr_set_si(r.hi_, 1, MPFR_RNDU);
        mpfr_clear(s1);
        mpfr_clear(s2);
        return r;
    }

    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

    double width() const {
        mpfr_t w;
        mpfr_init2(w, 64);
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        double d = mpfr_get_d(w, MPFR_RNDU);
        mpfr_clear(w);
        return d;
    }

    double mid_double() const {
        mpfr_t m;
        mpfr_init2(m, 64);
        mpfr_add(m, lo_, hi_, MPFR_RNDN);
        mpfr_div_si(m, m, 2, MPFR_RNDN);
        double d = mpfr_get_d(m, MPFR_RNDN);
        mpfr_clear(m);
        return d;
    }

    // round(mid * 2^shift) as an exact integer
    Int mid_scaled(int shift) const {
        mpfr_t m;
        mpfr_init2(m, std::max(prec_, shift + 64));
        mpfr_add(m, lo_, hi_, MPFR_RNDN);
        mpfr_div_si(m, m, 2, MPFR_RNDN);
        mpfr_mul_2si(m, m, shift, MPFR_RNDN);
        Int out;
        mpfr_get_z(out.get_mpz_t(), m, MPFR_RNDN);
        mpfr_clear(m);
        return out;
    }

    // certified bound on |value - mid| * 2^shift, rounded up to a double
    double err_scaled(int shift) const {
        mpfr_t w;
        mpfr_init2(w, 64);
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        mpfr_div_si(w, w, 2, MPFR_RNDU);
        mpfr_mul_2si(w, w, shift, MPFR_RNDU);
        double d = mpfr_get_d(w, MPFR_RNDU);
        mpfr_clear(w);
        return d;
    }

    std::string str(int digits = 20) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "[%.*Rg, %.*Rg]", digits, lo_, digits, hi_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

  private:
    void init() {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
        moved_ = false;
    }
    void clear() {
        if (!moved_) {
            mpfr_clear(lo_);
            mpfr_clear(hi_);
        }
        moved_ = true;
    }

    mutable mpfr_t lo_, hi_;
    int prec_;
    bool moved_ = false;
};

// log(2 sin(pi k / d)) with a certified enclosure; cached per (d, prec).
inline RInterval log_2sin(int64_t k, int64_t d, int prec) {
    k = mod_norm(k, d);
    if (k == 0) throw InvalidInput("log_2sin: k = 0");
    static std::map<std::pair<int64_t, int>, std::vector<RInterval>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_pair(d, prec);
    auto it = cache.find(key);
    if (it == cache.end()) {
        std::vector<RInterval> vals;
        vals.reserve(d);
        RInterval pi = RInterval::pi(prec);
        for (int64_t j = 0; j < d; ++j) {
            if (j == 0) {
                vals.push_back(RInterval::zero(prec));
                continue;
            }
            int64_t jr = std::min(j, d - j);  // sin symmetry
            if (jr < j) {
                vals.push_back(vals[jr]);
                continue;
            }
            RInterval theta = pi.scaled_long(jr).div_long(d);
            RInterval s = theta.sin_on_0_pi().scaled_long(2);
            vals.push_back(s.log());
        }
        it = cache.emplace(key, std::move(vals)).first;
    }
    return it->second[k];
}

}  // namespace cyclab

#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cyclab {

// Errors used across the library.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct Unsupported : std::domain_error {
    using std::domain_error::domain_error;
};
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

inline int64_t gcd64(int64_t a, int64_t b) { return std::gcd(a, b); }

inline int64_t mod_norm(int64_t a, int64_t m) {
    a %= m;
    if (a < 0) a += m;
    return a;
}

inline int64_t mul_mod(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>((__int128)a * b % m);
}

inline int64_t pow_mod(int64_t a, int64_t e, int64_t m) {
    a = mod_norm(a, m);
    int64_t r = mod_norm(1, m);
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Inverse of a mod m, gcd(a,m)=1 required.
inline int64_t inv_mod(int64_t a, int64_t m) {
    int64_t t = 0, newt = 1, r = m, newr = mod_norm(a, m);
    while (newr != 0) {
        int64_t q = r / newr;
        std::swap(t, newt);
        newt -= q * t;
        std::swap(r, newr);
        newr -= q * r;
    }
    if (r != 1) throw InvalidInput("inv_mod: not invertible");
    return mod_norm(t, m);
}

inline bool is_prime64(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
    std::vector<std::pair<int64_t, int>> f;
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) n /= d, ++e;
            f.push_back({d, e});
        }
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

inline std::vector<int64_t> prime_divisors(int64_t n) {
    std::vector<int64_t> ps;
    for (auto& [p, e] : factorize(n)) ps.push_back(p);
    return ps;
}

inline int64_t euler_phi(int64_t n) {
    int64_t r = n;
    for (auto& [p, e] : factorize(n)) r -= r / p;
    return r;
}

inline std::vector<int64_t> divisors(int64_t n) {
    std::vector<int64_t> ds{1};
    for (auto& [p, e] : factorize(n)) {
        size_t sz = ds.size();
        int64_t pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < sz; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

inline int valuation(int64_t n, int64_t p) {
    if (n == 0) throw InvalidInput("valuation of 0");
    int v = 0;
    while (n % p == 0) n /= p, ++v;
    return v;
}

// x with x = a mod m, x = b mod n for coprime m, n.
inline int64_t crt(int64_t a, int64_t m, int64_t b, int64_t n) {
    int64_t x = mod_norm(a, m) + m * mul_mod(mod_norm(b - a, n), inv_mod(m % n, n), n);
    return mod_norm(x, m * n);
}

// Units of Z/n as sorted residues in [0, n); n = 1 gives {0} (the identity mod 1).
inline std::vector<int64_t> unit_group(int64_t n) {
    if (n == 1) return {0};
    std::vector<int64_t> us;
    us.reserve(euler_phi(n));
    for (int64_t a = 1; a < n; ++a)
        if (std::gcd(a, n) == 1) us.push_back(a);
    return us;
}

}  // namespace cyclab

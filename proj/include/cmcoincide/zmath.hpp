#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <vector>

#include "cmcoincide/errors.hpp"

namespace cmcoincide {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer gcd_int(const Integer& a, const Integer& b) {
    return boost::multiprecision::gcd(a, b);
}

// floor(a / b) for b != 0 (works for negative a)
inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Integer mod_floor(const Integer& a, const Integer& b) {
    return a - floor_div(a, b) * b;
}

inline Integer floor_rat(const Rational& r) { return floor_div(num(r), den(r)); }
inline Integer ceil_rat(const Rational& r) { return -floor_div(-num(r), den(r)); }

// nearest integer, halves round down
inline Integer round_rat(const Rational& r) { return floor_rat(r + Rational(1, 2)); }

inline Integer isqrt_floor(const Integer& n) {
    if (n < 0) throw Error("isqrt of negative");
    if (n == 0) return 0;
    Integer x = Integer(1) << (msb(n) / 2 + 1);
    while (true) {
        Integer y = (x + n / x) / 2;
        if (y >= x) break;
        x = y;
    }
    return x;
}

inline bool is_perfect_square(const Integer& n, Integer* root = nullptr) {
    if (n < 0) return false;
    Integer r = isqrt_floor(n);
    if (root) *root = r;
    return r * r == n;
}

// floor(n^(1/k)) for n >= 0, k >= 1, by binary search
inline Integer iroot_floor(const Integer& n, unsigned k) {
    if (n < 0) throw Error("iroot of negative");
    if (k == 1 || n <= 1) return n;
    Integer lo = 0, hi = Integer(1) << (msb(n) / k + 2);
    while (lo < hi) {
        Integer mid = (lo + hi + 1) / 2;
        if (boost::multiprecision::pow(mid, k) <= n)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

// floor(x^(1/k)) for a nonnegative rational x
inline Integer iroot_floor_rat(const Rational& x, unsigned k) {
    Integer lo = iroot_floor(floor_rat(x), k);
    while (Rational(boost::multiprecision::pow(lo + 1, k)) <= x) ++lo;
    return lo;
}

inline Integer pow_int(const Integer& b, unsigned e) { return boost::multiprecision::pow(b, e); }

inline Integer powmod(Integer b, Integer e, const Integer& m) {
    return boost::multiprecision::powm(b, e, m);
}

// Miller-Rabin; the fixed base set is deterministic for n < 3.3e24,
// larger inputs get extra pseudo-random bases.
inline bool is_probable_prime(const Integer& n) {
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    Integer d = n - 1;
    unsigned s = 0;
    while (d % 2 == 0) { d /= 2; ++s; }
    auto witness = [&](Integer a) {
        a %= n;
        if (a <= 1) return false;
        Integer x = powmod(a, d, n);
        if (x == 1 || x == n - 1) return false;
        for (unsigned i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == n - 1) return false;
        }
        return true;  // composite witness
    };
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (witness(a)) return false;
    if (msb(n) > 80) {
        Integer a = 41;
        for (int i = 0; i < 16; ++i) {
            if (witness(a)) return false;
            a = a * 2862933555777941757ULL + 3037000493ULL;
        }
    }
    return true;
}

namespace detail {
inline Integer pollard_rho(const Integer& n) {
    if (n % 2 == 0) return 2;
    Integer x = 2, y = 2, c = 1, d = 1;
    while (true) {
        x = 2; y = 2; d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            d = gcd_int(x >= y ? x - y : y - x, n);
        }
        if (d != n) return d;
        ++c;
    }
}
}  // namespace detail

// prime -> exponent
inline std::map<Integer, int> factor_integer(Integer n) {
    std::map<Integer, int> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
        while (n % p == 0) { out[p]++; n /= p; }
    }
    std::vector<Integer> stack{n};
    while (!stack.empty()) {
        Integer m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_probable_prime(m)) { out[m]++; continue; }
        Integer d = detail::pollard_rho(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    return out;
}

inline std::vector<Integer> primes_up_to(const Integer& bound) {
    std::vector<Integer> out;
    for (Integer p = 2; p <= bound; ++p)
        if (is_probable_prime(p)) out.push_back(p);
    return out;
}

}  // namespace cmcoincide

#pragma once

// Modular arithmetic over a Schnorr group: p prime, q prime with q | p - 1,
// and g of multiplicative order q modulo p. Exponents and secret values live
// in Z_q; public values live in the order-q subgroup of Z_p^*.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "gkt/error.hpp"
#include "gkt/hash.hpp"
#include "gkt/integer.hpp"
#include "gkt/rng.hpp"

namespace gkt {

/// Residue modulo q. Range is checked by operations that know q.
struct Scalar {
    Integer value;

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.value == b.value; }
    friend bool operator<(const Scalar& a, const Scalar& b) { return a.value < b.value; }
};

/// Element of the order-q subgroup modulo p.
struct GroupElement {
    Integer value;

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.value == b.value;
    }
};

struct Point {
    Scalar x;
    Scalar y;

    friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
};

/// Probabilistic primality with error below 2^-80 (40 Miller-Rabin rounds).
inline bool is_probable_prime(const Integer& n) {
    return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline Integer mod_exp(const Integer& base, const Integer& exponent, const Integer& modulus) {
    if (modulus < 2) {
        throw Error(ErrorCode::BadModulus, "modulus must be at least 2");
    }
    if (sgn(exponent) < 0) {
        throw Error(ErrorCode::BadExponent, "exponent must be non-negative");
    }
    Integer b = base % modulus;
    if (sgn(b) < 0) {
        b += modulus;
    }
    // Left-to-right square-and-multiply: one squaring per exponent bit.
    Integer acc = 1;
    for (std::size_t i = bit_length(exponent); i-- > 0;) {
        acc = acc * acc % modulus;
        if (mpz_tstbit(exponent.get_mpz_t(), i) != 0) {
            acc = acc * b % modulus;
        }
    }
    return acc % modulus;
}

/// Inverse of a modulo m by the extended Euclidean algorithm.
inline Integer mod_inverse(const Integer& a, const Integer& m) {
    if (m < 2) {
        throw Error(ErrorCode::BadModulus, "modulus must be at least 2");
    }
    Integer old_r = a % m;
    if (sgn(old_r) < 0) {
        old_r += m;
    }
    Integer r = m;
    Integer old_s = 1;
    Integer s = 0;
    while (sgn(r) != 0) {
        const Integer quotient = old_r / r;
        Integer next_r = old_r - quotient * r;
        old_r = r;
        r = next_r;
        Integer next_s = old_s - quotient * s;
        old_s = s;
        s = next_s;
    }
    if (old_r != 1) {
        throw Error(ErrorCode::NoInverse, to_hex(a % m) + " is not invertible mod " + to_hex(m));
    }
    Integer inv = old_s % m;
    if (sgn(inv) < 0) {
        inv += m;
    }
    return inv;
}

class GroupParams;
GroupParams validate_params(const Integer& p, const Integer& q, const Integer& g);

/// Validated group context. Only validate_params can construct one.
class GroupParams {
public:
    const Integer& p() const noexcept { return p_; }
    const Integer& q() const noexcept { return q_; }
    const Integer& g() const noexcept { return g_; }
    HashAlgorithm hash() const noexcept { return kProtocolHash; }

    std::size_t p_bytes() const { return byte_length(p_); }
    std::size_t q_bytes() const { return byte_length(q_); }

    bool is_scalar(const Integer& v) const { return sgn(v) >= 0 && v < q_; }

    bool is_element(const Integer& v) const {
        return v >= 1 && v < p_ && mod_exp(v, q_, p_) == 1;
    }

    Scalar scalar(const Integer& v) const {
        if (!is_scalar(v)) {
            throw Error(ErrorCode::OutOfRange, to_hex(abs(v)) + " is not a residue mod q");
        }
        return Scalar{v};
    }

    Scalar reduce(const Integer& v) const {
        Integer r = v % q_;
        if (sgn(r) < 0) {
            r += q_;
        }
        return Scalar{r};
    }

    GroupElement element(const Integer& v) const {
        if (!is_element(v)) {
            throw Error(ErrorCode::OutOfRange, to_hex(abs(v)) + " is not in the order-q subgroup");
        }
        return GroupElement{v};
    }

    /// g^e mod p
    GroupElement exp_g(const Scalar& e) const { return GroupElement{mod_exp(g_, e.value, p_)}; }

    friend bool operator==(const GroupParams& a, const GroupParams& b) {
        return a.p_ == b.p_ && a.q_ == b.q_ && a.g_ == b.g_;
    }

private:
    GroupParams(Integer p, Integer q, Integer g) : p_(std::move(p)), q_(std::move(q)), g_(std::move(g)) {}

    friend GroupParams validate_params(const Integer& p, const Integer& q, const Integer& g);

    Integer p_;
    Integer q_;
    Integer g_;
};

inline GroupParams validate_params(const Integer& p, const Integer& q, const Integer& g) {
    if (!is_probable_prime(p)) {
        throw Error(ErrorCode::NotPrime, "p is not prime");
    }
    if (!is_probable_prime(q)) {
        throw Error(ErrorCode::NotPrime, "q is not prime");
    }
    if ((p - 1) % q != 0) {
        throw Error(ErrorCode::OrderMismatch, "q does not divide p - 1");
    }
    if (g <= 1 || g >= p) {
        throw Error(ErrorCode::BadGenerator, "g must satisfy 1 < g < p");
    }
    if (mod_exp(g, q, p) != 1) {
        throw Error(ErrorCode::BadGenerator, "g does not have order q");
    }
    return GroupParams(p, q, g);
}

inline constexpr std::size_t kDefaultMaxInterpolationPoints = 4096;

/// Value at x0 of the unique polynomial of degree < points.size() over Z_q
/// through the given points. Coordinates are reduced mod q first.
inline Scalar lagrange_eval(std::span<const Point> points, const Scalar& x0, const Integer& q,
                            std::size_t max_points = kDefaultMaxInterpolationPoints) {
    if (points.empty()) {
        throw Error(ErrorCode::EmptyPointSet, "interpolation needs at least one point");
    }
    if (points.size() > max_points) {
        throw Error(ErrorCode::TooManyPoints,
                    std::to_string(points.size()) + " points exceeds limit " + std::to_string(max_points));
    }
    auto reduce = [&](const Integer& v) {
        Integer r = v % q;
        if (sgn(r) < 0) {
            r += q;
        }
        return r;
    };

    std::vector<Integer> xs;
    std::vector<Integer> ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const Point& pt : points) {
        xs.push_back(reduce(pt.x.value));
        ys.push_back(reduce(pt.y.value));
    }
    {
        std::vector<Integer> sorted = xs;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw Error(ErrorCode::DuplicateAbscissa, "interpolation abscissas must be distinct");
        }
    }

    const Integer at = reduce(x0.value);
    Integer sum = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        Integer num = 1;
        Integer den = 1;
        for (std::size_t m = 0; m < xs.size(); ++m) {
            if (m == j) {
                continue;
            }
            num = num * (at - xs[m]) % q;
            den = den * (xs[j] - xs[m]) % q;
        }
        sum = (sum + ys[j] * num % q * mod_inverse(den, q)) % q;
    }
    return Scalar{reduce(sum)};
}

inline Scalar random_scalar(Rng& rng, const Integer& q, bool allow_zero) {
    if (q < 3) {
        throw Error(ErrorCode::OutOfRange, "q must be at least 3");
    }
    if (allow_zero) {
        return Scalar{rng.below(q)};
    }
    return Scalar{rng.below(Integer(q - 1)) + 1};
}

/// Fresh DSA-style parameters: q of q_bits, p of p_bits with q | p - 1,
/// g = h^((p-1)/q) for the smallest h >= 2 that gives g != 1.
inline GroupParams generate_params(Rng& rng, std::size_t p_bits, std::size_t q_bits) {
    if (q_bits < 3 || p_bits <= q_bits + 1) {
        throw Error(ErrorCode::OutOfRange, "need 3 <= q_bits < p_bits - 1");
    }
    auto random_bits = [&](std::size_t bits) -> Integer {
        Integer top = 1;
        top <<= bits - 1;
        return top + rng.below(top);
    };
    Integer q;
    do {
        q = random_bits(q_bits);
        mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    } while (bit_length(q) != q_bits);

    const Integer two_q = 2 * q;
    Integer p;
    for (;;) {
        const Integer x = random_bits(p_bits);
        p = x - x % two_q + 1;
        if (bit_length(p) == p_bits && is_probable_prime(p)) {
            break;
        }
    }
    const Integer cofactor = (p - 1) / q;
    Integer h = 2;
    Integer g = mod_exp(h, cofactor, p);
    while (g == 1) {
        h += 1;
        g = mod_exp(h, cofactor, p);
    }
    return validate_params(p, q, g);
}

}  // namespace gkt

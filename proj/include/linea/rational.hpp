// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exact rational scalars on top of GMP, plus the parsing/printing helpers the
// rest of the analyzer needs: integers, p/q fractions, and exact decimals.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace linea {

using rational = mpq_class;

inline rational rat_of_int(long v) { return rational(v); }

inline bool rat_is_integer(const rational& q) {
    return mpz_cmp_ui(q.get_den().get_mpz_t(), 1) == 0;
}

inline rational rat_floor(const rational& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return rational(r);
}

inline rational rat_ceil(const rational& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return rational(r);
}

// Truncation toward zero, matching machine integer division.
inline rational rat_trunc(const rational& q) {
    mpz_class r;
    mpz_tdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return rational(r);
}

// Accepts "12", "-3", "7/2", "0.25", "-1.5". Returns nullopt on anything else.
inline std::optional<rational> rat_parse(std::string_view s) {
    if (s.empty()) return std::nullopt;
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    auto digits = [&](std::size_t& j) {
        std::string d;
        while (j < s.size() && s[j] >= '0' && s[j] <= '9') d.push_back(s[j++]);
        return d;
    };
    std::string ip = digits(i);
    if (ip.empty()) return std::nullopt;
    rational v;
    if (i < s.size() && s[i] == '/') {
        ++i;
        std::string den = digits(i);
        if (den.empty() || i != s.size()) return std::nullopt;
        mpz_class d(den);
        if (d == 0) return std::nullopt;
        v = rational(mpz_class(ip), d);
        v.canonicalize();
    } else if (i < s.size() && s[i] == '.') {
        ++i;
        std::string fp = digits(i);
        if (fp.empty() || i != s.size()) return std::nullopt;
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
        v = rational(mpz_class(ip) * scale + mpz_class(fp), scale);
        v.canonicalize();
    } else {
        if (i != s.size()) return std::nullopt;
        v = rational(mpz_class(ip));
    }
    return neg ? rational(-v) : v;
}

// Canonical "p" / "p/q" form; always parseable back.
inline std::string rat_str(const rational& q) { return q.get_str(); }

// Exact decimal when the denominator is 2^a*5^b (e.g. "0.3", "-1.25"),
// otherwise falls back to "p/q". Used by the human-facing printers.
inline std::string rat_str_decimal(const rational& q) {
    if (rat_is_integer(q)) return q.get_num().get_str();
    mpz_class den = q.get_den();
    unsigned long twos = 0, fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
        mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), 2);
        ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), 5);
        ++fives;
    }
    if (den != 1) return rat_str(q);
    unsigned long k = twos > fives ? twos : fives;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, k);
    mpz_class scaled = q.get_num() * scale / q.get_den();
    bool neg = scaled < 0;
    std::string digits = mpz_class(abs(scaled)).get_str();
    if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
    digits.insert(digits.size() - k, ".");
    return neg ? "-" + digits : digits;
}

}  // namespace linea

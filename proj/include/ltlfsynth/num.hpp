#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace lsynth {

using Q = mpq_class;
using Z = mpz_class;

// Accepts "12", "-3", "3/4", "-7/2". Throws std::invalid_argument.
Q parse_q(const std::string& s);
std::string q_str(const Q& q);

bool is_int(const Q& q);
Z floor_q(const Q& q);
Z ceil_q(const Q& q);
Z gcd_z(const Z& a, const Z& b);
Z lcm_z(const Z& a, const Z& b);
// Mathematical modulus in [0, |m|).
Z mod_z(const Z& a, const Z& m);

std::size_t hash_q(const Q& q);

}  // namespace lsynth

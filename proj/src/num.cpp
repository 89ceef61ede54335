#include "ltlfsynth/num.hpp"

#include <stdexcept>

namespace lsynth {

static bool valid_int_text(const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

Q parse_q(const std::string& s) {
    auto slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int_text(num, true) || !valid_int_text(den, false))
        throw std::invalid_argument("not a number: " + s);
    if (num[0] == '+') num = num.substr(1);
    Z n(num), d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + s);
    Q q(n, d);
    q.canonicalize();
    return q;
}

std::string q_str(const Q& q) { return q.get_str(); }

bool is_int(const Q& q) { return q.get_den() == 1; }

Z floor_q(const Q& q) {
    Z r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Z ceil_q(const Q& q) {
    Z r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Z gcd_z(const Z& a, const Z& b) {
    Z r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Z lcm_z(const Z& a, const Z& b) {
    Z r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Z mod_z(const Z& a, const Z& m) {
    Z r;
    Z am = abs(m);
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), am.get_mpz_t());
    return r;
}

std::size_t hash_q(const Q& q) {
    auto limb = [](const mpz_t z) -> std::size_t {
        std::size_t h = static_cast<std::size_t>(mpz_size(z)) * 31 + (mpz_sgn(z) + 1);
        if (mpz_size(z) > 0) h ^= static_cast<std::size_t>(mpz_getlimbn(z, 0)) * 0x9e3779b97f4a7c15ULL;
        return h;
    };
    return limb(q.get_num_mpz_t()) * 1000003u ^ limb(q.get_den_mpz_t());
}

}  // namespace lsynth

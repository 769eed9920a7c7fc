#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>

#include "dnsseckit/types.hpp"

typedef struct evp_pkey_st EVP_PKEY;

namespace dnsseckit {

/// Byte source for key generation and the attack simulator. Seeded sources
/// make every run reproducible; SystemRandom is for real keys.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;

    std::uint64_t next_u64();
    /// Uniform in [0, bound); bound must be non-zero.
    std::uint64_t uniform(std::uint64_t bound);
};

class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
    void fill(std::span<std::uint8_t> out) override;
    std::mt19937_64 &engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

class SystemRandom final : public RandomSource {
public:
    void fill(std::span<std::uint8_t> out) override;
};

/// RSA key material as big-endian magnitudes, the layout of the private
/// key file. The OpenSSL handle is rebuilt from these fields.
class RsaPrivateKey {
public:
    RsaPrivateKey() = default;
    RsaPrivateKey(Bytes modulus, Bytes public_exponent, Bytes private_exponent, Bytes prime1, Bytes prime2,
                  Bytes exponent1, Bytes exponent2, Bytes coefficient);

    const Bytes &modulus() const noexcept { return n_; }
    const Bytes &public_exponent() const noexcept { return e_; }
    const Bytes &private_exponent() const noexcept { return d_; }
    const Bytes &prime1() const noexcept { return p_; }
    const Bytes &prime2() const noexcept { return q_; }
    const Bytes &exponent1() const noexcept { return dmp1_; }
    const Bytes &exponent2() const noexcept { return dmq1_; }
    const Bytes &coefficient() const noexcept { return iqmp_; }

    unsigned bits() const noexcept;
    bool empty() const noexcept { return n_.empty(); }
    EVP_PKEY *handle() const noexcept { return pkey_.get(); }

    friend bool operator==(const RsaPrivateKey &a, const RsaPrivateKey &b) {
        return a.n_ == b.n_ && a.e_ == b.e_ && a.d_ == b.d_ && a.p_ == b.p_ && a.q_ == b.q_ && a.dmp1_ == b.dmp1_ &&
               a.dmq1_ == b.dmq1_ && a.iqmp_ == b.iqmp_;
    }

private:
    Bytes n_, e_, d_, p_, q_, dmp1_, dmq1_, iqmp_;
    std::shared_ptr<EVP_PKEY> pkey_;
};

/// Deterministic in `rng`: the same seed always yields the same key.
RsaPrivateKey generate_rsa_key(unsigned bits, RandomSource &rng);

/// DNSKEY public-key field for RSA: exponent length, exponent, modulus.
Bytes rsa_dnskey_public(const Bytes &modulus, const Bytes &exponent);

/// Splits a DNSKEY RSA public-key field; false when malformed.
bool parse_rsa_dnskey_public(std::span<const std::uint8_t> key, Bytes &modulus, Bytes &exponent);

/// PKCS#1 v1.5 with the hash implied by the DNSSEC algorithm code (5 or 8).
Bytes rsa_sign(const RsaPrivateKey &key, std::uint8_t algorithm, std::span<const std::uint8_t> message);

/// Verifies against a DNSKEY public-key field. Malformed keys verify false.
bool rsa_verify(std::span<const std::uint8_t> dnskey_public, std::uint8_t algorithm,
                std::span<const std::uint8_t> message, std::span<const std::uint8_t> signature);

/// Throws Error(UnsupportedDigest) for unknown digest types.
Bytes compute_digest(std::uint8_t digest_type, std::span<const std::uint8_t> data);

}  // namespace dnsseckit

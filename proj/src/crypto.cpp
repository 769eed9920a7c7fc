#include "dnsseckit/crypto.hpp"

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/param_build.h>
#include <openssl/rand.h>
#include <openssl/rsa.h>

#include <map>
#include <mutex>

#include "dnsseckit/algorithms.hpp"
#include "dnsseckit/error.hpp"

namespace dnsseckit {

std::uint64_t RandomSource::next_u64() {
    std::uint8_t buf[8];
    fill(buf);
    std::uint64_t v = 0;
    for (auto b : buf) v = (v << 8) | b;
    return v;
}

std::uint64_t RandomSource::uniform(std::uint64_t bound) {
    // Rejection sampling keeps the distribution exact.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        auto v = next_u64();
        if (v < limit) return v % bound;
    }
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
        auto v = engine_();
        for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
            out[i] = static_cast<std::uint8_t>(v >> (8 * k));
        }
    }
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
        throw Error(Errc::IoError, "system random source failed");
    }
}

namespace {

struct BnDeleter {
    void operator()(BIGNUM *b) const { BN_clear_free(b); }
};
struct CtxDeleter {
    void operator()(BN_CTX *c) const { BN_CTX_free(c); }
};
struct PkeyCtxDeleter {
    void operator()(EVP_PKEY_CTX *c) const { EVP_PKEY_CTX_free(c); }
};
struct MdCtxDeleter {
    void operator()(EVP_MD_CTX *c) const { EVP_MD_CTX_free(c); }
};
struct BldDeleter {
    void operator()(OSSL_PARAM_BLD *b) const { OSSL_PARAM_BLD_free(b); }
};
struct ParamDeleter {
    void operator()(OSSL_PARAM *p) const { OSSL_PARAM_free(p); }
};

using Bn = std::unique_ptr<BIGNUM, BnDeleter>;

Bn new_bn() {
    Bn b(BN_new());
    if (!b) throw Error(Errc::IoError, "out of memory");
    return b;
}

Bn bn_from(const Bytes &bytes) {
    Bn b(BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr));
    if (!b) throw Error(Errc::IoError, "out of memory");
    return b;
}

Bytes bn_bytes(const BIGNUM *b) {
    Bytes out(static_cast<std::size_t>(BN_num_bytes(b)));
    BN_bn2bin(b, out.data());
    return out;
}

void check(int rc, const char *what) {
    if (rc != 1) throw Error(Errc::IoError, std::string("RSA operation failed: ") + what);
}

/// Random odd integer with the top two bits set, so p*q has the full size.
Bn random_candidate(unsigned bits, RandomSource &rng) {
    Bytes raw((bits + 7) / 8);
    rng.fill(raw);
    const unsigned excess = static_cast<unsigned>(raw.size() * 8 - bits);
    raw[0] &= static_cast<std::uint8_t>(0xFF >> excess);
    auto b = bn_from(raw);
    BN_set_bit(b.get(), static_cast<int>(bits - 1));
    BN_set_bit(b.get(), static_cast<int>(bits - 2));
    BN_set_bit(b.get(), 0);
    return b;
}

Bn generate_prime(unsigned bits, const BIGNUM *e, RandomSource &rng, BN_CTX *ctx) {
    auto p = random_candidate(bits, rng);
    auto pm1 = new_bn();
    auto g = new_bn();
    for (;;) {
        if (static_cast<unsigned>(BN_num_bits(p.get())) > bits) p = random_candidate(bits, rng);
        if (BN_check_prime(p.get(), ctx, nullptr) == 1) {
            check(BN_sub(pm1.get(), p.get(), BN_value_one()), "sub");
            check(BN_gcd(g.get(), pm1.get(), e, ctx), "gcd");
            if (BN_is_one(g.get())) return p;
        }
        check(BN_add_word(p.get(), 2), "add");
    }
}

std::shared_ptr<EVP_PKEY> build_pkey(const Bytes &n, const Bytes &e, const Bytes *d, const Bytes *p, const Bytes *q,
                                     const Bytes *dmp1, const Bytes *dmq1, const Bytes *iqmp) {
    std::unique_ptr<OSSL_PARAM_BLD, BldDeleter> bld(OSSL_PARAM_BLD_new());
    auto bn_n = bn_from(n), bn_e = bn_from(e);
    Bn bn_d, bn_p, bn_q, bn_dmp1, bn_dmq1, bn_iqmp;
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_N, bn_n.get());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_E, bn_e.get());
    if (d) {
        bn_d = bn_from(*d);
        OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_D, bn_d.get());
        if (p && q && dmp1 && dmq1 && iqmp && !p->empty()) {
            bn_p = bn_from(*p);
            bn_q = bn_from(*q);
            bn_dmp1 = bn_from(*dmp1);
            bn_dmq1 = bn_from(*dmq1);
            bn_iqmp = bn_from(*iqmp);
            OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_FACTOR1, bn_p.get());
            OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_FACTOR2, bn_q.get());
            OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_EXPONENT1, bn_dmp1.get());
            OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_EXPONENT2, bn_dmq1.get());
            OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_COEFFICIENT1, bn_iqmp.get());
        }
    }
    std::unique_ptr<OSSL_PARAM, ParamDeleter> params(OSSL_PARAM_BLD_to_param(bld.get()));
    std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter> ctx(EVP_PKEY_CTX_new_from_name(nullptr, "RSA", nullptr));
    if (!params || !ctx || EVP_PKEY_fromdata_init(ctx.get()) != 1) return nullptr;
    EVP_PKEY *raw = nullptr;
    const int selection = d ? EVP_PKEY_KEYPAIR : EVP_PKEY_PUBLIC_KEY;
    if (EVP_PKEY_fromdata(ctx.get(), &raw, selection, params.get()) != 1) return nullptr;
    return std::shared_ptr<EVP_PKEY>(raw, EVP_PKEY_free);
}

const EVP_MD *md_for_algorithm(std::uint8_t algorithm) {
    switch (algorithm) {
        case algorithm::kRsaSha1:   return EVP_sha1();
        case algorithm::kRsaSha256: return EVP_sha256();
        default:                    return nullptr;
    }
}

}  // namespace

RsaPrivateKey::RsaPrivateKey(Bytes modulus, Bytes public_exponent, Bytes private_exponent, Bytes prime1, Bytes prime2,
                             Bytes exponent1, Bytes exponent2, Bytes coefficient)
    : n_(std::move(modulus)),
      e_(std::move(public_exponent)),
      d_(std::move(private_exponent)),
      p_(std::move(prime1)),
      q_(std::move(prime2)),
      dmp1_(std::move(exponent1)),
      dmq1_(std::move(exponent2)),
      iqmp_(std::move(coefficient)) {
    pkey_ = build_pkey(n_, e_, &d_, &p_, &q_, &dmp1_, &dmq1_, &iqmp_);
    if (!pkey_) throw Error(Errc::ParseError, "RSA private key components are inconsistent");
}

unsigned RsaPrivateKey::bits() const noexcept {
    if (n_.empty()) return 0;
    auto b = BN_bin2bn(n_.data(), static_cast<int>(n_.size()), nullptr);
    unsigned out = static_cast<unsigned>(BN_num_bits(b));
    BN_free(b);
    return out;
}

RsaPrivateKey generate_rsa_key(unsigned bits, RandomSource &rng) {
    std::unique_ptr<BN_CTX, CtxDeleter> ctx(BN_CTX_new());
    auto e = new_bn();
    check(BN_set_word(e.get(), 65537), "set e");

    const unsigned pbits = (bits + 1) / 2;
    const unsigned qbits = bits - pbits;
    for (;;) {
        auto p = generate_prime(pbits, e.get(), rng, ctx.get());
        auto q = generate_prime(qbits, e.get(), rng, ctx.get());
        if (BN_cmp(p.get(), q.get()) == 0) continue;
        if (BN_cmp(p.get(), q.get()) < 0) std::swap(p, q);

        auto n = new_bn(), pm1 = new_bn(), qm1 = new_bn(), phi = new_bn();
        auto d = new_bn(), dmp1 = new_bn(), dmq1 = new_bn(), iqmp = new_bn();
        check(BN_mul(n.get(), p.get(), q.get(), ctx.get()), "mul");
        if (static_cast<unsigned>(BN_num_bits(n.get())) != bits) continue;
        check(BN_sub(pm1.get(), p.get(), BN_value_one()), "sub");
        check(BN_sub(qm1.get(), q.get(), BN_value_one()), "sub");
        check(BN_mul(phi.get(), pm1.get(), qm1.get(), ctx.get()), "mul");
        if (!BN_mod_inverse(d.get(), e.get(), phi.get(), ctx.get())) continue;
        check(BN_mod(dmp1.get(), d.get(), pm1.get(), ctx.get()), "mod");
        check(BN_mod(dmq1.get(), d.get(), qm1.get(), ctx.get()), "mod");
        if (!BN_mod_inverse(iqmp.get(), q.get(), p.get(), ctx.get())) continue;

        return RsaPrivateKey(bn_bytes(n.get()), bn_bytes(e.get()), bn_bytes(d.get()), bn_bytes(p.get()),
                             bn_bytes(q.get()), bn_bytes(dmp1.get()), bn_bytes(dmq1.get()), bn_bytes(iqmp.get()));
    }
}

Bytes rsa_dnskey_public(const Bytes &modulus, const Bytes &exponent) {
    Bytes out;
    if (exponent.size() < 256) {
        out.push_back(static_cast<std::uint8_t>(exponent.size()));
    } else {
        out.push_back(0);
        out.push_back(static_cast<std::uint8_t>(exponent.size() >> 8));
        out.push_back(static_cast<std::uint8_t>(exponent.size()));
    }
    out.insert(out.end(), exponent.begin(), exponent.end());
    out.insert(out.end(), modulus.begin(), modulus.end());
    return out;
}

bool parse_rsa_dnskey_public(std::span<const std::uint8_t> key, Bytes &modulus, Bytes &exponent) {
    if (key.empty()) return false;
    std::size_t pos = 1;
    std::size_t elen = key[0];
    if (elen == 0) {
        if (key.size() < 3) return false;
        elen = (static_cast<std::size_t>(key[1]) << 8) | key[2];
        pos = 3;
    }
    if (elen == 0 || key.size() <= pos + elen) return false;
    exponent.assign(key.begin() + static_cast<std::ptrdiff_t>(pos), key.begin() + static_cast<std::ptrdiff_t>(pos + elen));
    modulus.assign(key.begin() + static_cast<std::ptrdiff_t>(pos + elen), key.end());
    return true;
}

Bytes rsa_sign(const RsaPrivateKey &key, std::uint8_t algorithm, std::span<const std::uint8_t> message) {
    const EVP_MD *md = md_for_algorithm(algorithm);
    if (!md) throw Error(Errc::UnsupportedAlgorithm, "cannot sign with algorithm " + algorithm_mnemonic(algorithm));
    if (!key.handle()) throw Error(Errc::KeyMismatch, "no private key material");
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    EVP_PKEY_CTX *pctx = nullptr;
    check(EVP_DigestSignInit(ctx.get(), &pctx, md, nullptr, key.handle()), "sign init");
    check(EVP_PKEY_CTX_set_rsa_padding(pctx, RSA_PKCS1_PADDING) > 0 ? 1 : 0, "padding");
    std::size_t len = 0;
    check(EVP_DigestSign(ctx.get(), nullptr, &len, message.data(), message.size()), "sign size");
    Bytes sig(len);
    check(EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()), "sign");
    sig.resize(len);
    return sig;
}

namespace {

// Validators check the same few keys over and over; building an EVP_PKEY
// costs about as much as the verification itself.
std::shared_ptr<EVP_PKEY> verify_key(std::span<const std::uint8_t> dnskey_public) {
    static std::mutex mu;
    static std::map<Bytes, std::shared_ptr<EVP_PKEY>> cache;
    Bytes wire(dnskey_public.begin(), dnskey_public.end());
    std::lock_guard lock(mu);
    if (auto it = cache.find(wire); it != cache.end()) return it->second;
    Bytes n, e;
    if (!parse_rsa_dnskey_public(dnskey_public, n, e)) return nullptr;
    auto pkey = build_pkey(n, e, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr);
    if (!pkey) return nullptr;
    if (cache.size() >= 256) cache.clear();
    cache.emplace(std::move(wire), pkey);
    return pkey;
}

bool rsa_verify_uncached(std::span<const std::uint8_t> dnskey_public, const EVP_MD *md,
                         std::span<const std::uint8_t> message, std::span<const std::uint8_t> signature) {
    const auto pkey = verify_key(dnskey_public);
    if (!pkey) return false;
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    EVP_PKEY_CTX *pctx = nullptr;
    if (EVP_DigestVerifyInit(ctx.get(), &pctx, md, nullptr, pkey.get()) != 1) return false;
    if (EVP_PKEY_CTX_set_rsa_padding(pctx, RSA_PKCS1_PADDING) <= 0) return false;
    return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(), message.size()) == 1;
}

}  // namespace

// Results are remembered under a SHA-256 of everything that went in, so a
// resolver re-walking the same chain pays for each signature once.
bool rsa_verify(std::span<const std::uint8_t> dnskey_public, std::uint8_t algorithm,
                std::span<const std::uint8_t> message, std::span<const std::uint8_t> signature) {
    const EVP_MD *md = md_for_algorithm(algorithm);
    if (!md) return false;
    Bytes input;
    input.reserve(16 + dnskey_public.size() + signature.size() + message.size());
    for (auto part : {dnskey_public, signature, message}) {
        const auto len = static_cast<std::uint32_t>(part.size());
        for (int shift = 24; shift >= 0; shift -= 8) input.push_back(static_cast<std::uint8_t>(len >> shift));
        input.insert(input.end(), part.begin(), part.end());
    }
    input.push_back(algorithm);
    const auto id = compute_digest(digest::kSha256, input);

    static std::mutex mu;
    static std::map<Bytes, bool> seen;
    {
        std::lock_guard lock(mu);
        if (auto it = seen.find(id); it != seen.end()) return it->second;
    }
    const bool ok = rsa_verify_uncached(dnskey_public, md, message, signature);
    std::lock_guard lock(mu);
    if (seen.size() >= 4096) seen.clear();
    seen.emplace(id, ok);
    return ok;
}

Bytes compute_digest(std::uint8_t digest_type, std::span<const std::uint8_t> data) {
    const EVP_MD *md = nullptr;
    switch (digest_type) {
        case digest::kSha1:   md = EVP_sha1(); break;
        case digest::kSha256: md = EVP_sha256(); break;
        default: throw Error(Errc::UnsupportedDigest, "unsupported digest type " + std::to_string(digest_type));
    }
    Bytes out(static_cast<std::size_t>(EVP_MD_get_size(md)));
    unsigned len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1) {
        throw Error(Errc::IoError, "digest computation failed");
    }
    out.resize(len);
    return out;
}

}  // namespace dnsseckit

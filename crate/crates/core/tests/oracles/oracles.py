"""Independent reference values frozen into the Rust test-suite.

High-precision values use mpmath (50 digits); Monte Carlo values use numpy
with a fixed seed and report (estimate, standard error). Nothing here shares
code with the Rust implementation.

Run: python3 oracles.py
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 50


def gamma_cdf(shape, scale, t):
    return mp.gammainc(shape, 0, t / scale, regularized=True)


def nc_estimator_cdf(n, power, energy, t):
    # (1/N) sum |x_k|^2, x_k ~ CN(mu_k, power), sum |mu_k|^2 = energy.
    # 2N/power * estimate ~ noncentral chi2(2N, 2E/power)
    lam = 2 * mp.mpf(energy) / power
    x = 2 * n * mp.mpf(t) / power
    half = lam / 2
    total = mp.mpf(0)
    for j in range(0, 4000):
        w = mp.exp(-half + j * mp.log(half) - mp.loggamma(j + 1)) if half > 0 else (1 if j == 0 else 0)
        total += w * mp.gammainc(n + j, 0, x / 2, regularized=True)
        if j > half + 60 and w < mp.mpf(10) ** -40:
            break
    return total


def dncf_cdf(nu1, nu2, lam1, lam2, x):
    u = nu1 * mp.mpf(x) / (nu1 * mp.mpf(x) + nu2)
    h1, h2 = mp.mpf(lam1) / 2, mp.mpf(lam2) / 2
    total = mp.mpf(0)
    for j in range(0, 120):
        wj = mp.exp(-h1 + j * mp.log(h1) - mp.loggamma(j + 1)) if h1 > 0 else (1 if j == 0 else 0)
        if wj == 0:
            continue
        for k in range(0, 120):
            wk = mp.exp(-h2 + k * mp.log(h2) - mp.loggamma(k + 1)) if h2 > 0 else (1 if k == 0 else 0)
            if wk == 0:
                continue
            total += wj * wk * mp.betainc(nu1 / 2 + j, nu2 / 2 + k, 0, u, regularized=True)
    return total


def gamma_diff_cdf(n, s_on, s_off, t):
    # P(X - Y <= t), X ~ Gamma(n, s_on/n), Y ~ Gamma(n, s_off/n), by convolution
    a_on, a_off = mp.mpf(s_on) / n, mp.mpf(s_off) / n
    f = lambda y: mp.exp((n - 1) * mp.log(y) - y / a_off - mp.loggamma(n) - n * mp.log(a_off)) * gamma_cdf(n, a_on, t + y)
    lo = max(0, -t)
    return mp.quad(f, [lo, lo + 0.5, 1, 2, 4, 10])


def bisect(f, lo, hi, iters=200):
    for _ in range(iters):
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def gamma_quantile(shape, scale, p):
    m = shape * scale
    return bisect(lambda t: gamma_cdf(shape, scale, t) - p, m / 4, 4 * m)


def f_cdf(nu1, nu2, x):
    return mp.betainc(nu1 / 2, nu2 / 2, 0, nu1 * x / (nu1 * x + nu2), regularized=True)


def f_quantile(nu1, nu2, p):
    return bisect(lambda x: f_cdf(nu1, nu2, x) - p, mp.mpf("0.1"), mp.mpf(10))


print("ln_gamma(10.5)        =", mp.nstr(mp.loggamma(10.5), 20))
print("I_0.3(2.5, 4.0)       =", mp.nstr(mp.betainc(2.5, 4.0, 0, 0.3, regularized=True), 20))
print("P(3.5, 2.2)           =", mp.nstr(mp.gammainc(3.5, 0, 2.2, regularized=True), 20))
print("gamma q95 N=64        =", mp.nstr(gamma_quantile(64, mp.mpf(1) / 64, mp.mpf("0.95")), 20))
print("gamma q99 N=1024      =", mp.nstr(gamma_quantile(1024, mp.mpf(1) / 1024, mp.mpf("0.99")), 20))
print("ncchi2 N64 E16 t1.2   =", mp.nstr(nc_estimator_cdf(64, 1, 16, mp.mpf("1.2")), 20))
print("dncf 128 8 4 t1.1     =", mp.nstr(dncf_cdf(128, 128, 8, 4, mp.mpf("1.1")), 20))
print("gamdiff 1.5/1.0 t0.4  =", mp.nstr(gamma_diff_cdf(64, mp.mpf("1.5"), 1, mp.mpf("0.4")), 20))

# F-ratio, wide/wide, no RFI, g = 1, SNR 0 dB, N = 64: H1 scale 2.
thr = f_quantile(128, 128, mp.mpf("0.9"))
print("F thr pfa0.1 N64      =", mp.nstr(thr, 20))
print("F pd  pfa0.1 snr0     =", mp.nstr(1 - f_cdf(128, 128, thr / 2), 20))

# AUC of F-ratio at SNR +2.51 dB, N = 64: P(s*F1 > F0), F ~ F(128,128)
s = 1 + mp.power(10, mp.mpf("0.251"))
f_pdf = lambda x: mp.exp((64 - 1) * mp.log(x) - 128 * mp.log(1 + x) - mp.log(mp.beta(64, 64)))
auc = mp.quad(lambda x: f_pdf(x) * (1 - f_cdf(128, 128, x / s)), [0, 0.5, 1, 2, 4, mp.inf])
print("F auc snr2.51 N64     =", mp.nstr(auc, 20))

rng = np.random.default_rng(20161919)
M = 10_000_000


def mc_cdf_report(name, draws, t):
    ind = (draws <= t)
    p = ind.mean()
    print(f"{name:22s}= {p:.6f} +- {np.sqrt(p * (1 - p) / ind.size):.6f} (MC, {ind.size} draws)")


# Non-central estimator: N=64 complex samples, sigma^2=1, constant signal with energy 16.
n = 64
chunks = []
mu = np.sqrt(16 / n)
for _ in range(M // 200_000):
    z = (rng.standard_normal((200_000, n)) + 1j * rng.standard_normal((200_000, n))) * np.sqrt(0.5) + mu
    chunks.append((np.abs(z) ** 2).mean(axis=1))
mc_cdf_report("ncchi2 N64 E16 t1.2", np.concatenate(chunks), 1.2)

# DNCF by ratio of independent non-central chi2 draws.
num = rng.noncentral_chisquare(128, 8, M) / 128
den = rng.noncentral_chisquare(128, 4, M) / 128
mc_cdf_report("dncf 128 8 4 t1.1", num / den, 1.1)

# Gamma difference.
x = rng.gamma(64, 1.5 / 64, M) - rng.gamma(64, 1.0 / 64, M)
mc_cdf_report("gamdiff 1.5/1.0 t0.4", x, 0.4)

# pd at pfa 0.1 and AUC at +2.51 dB, F-ratio.
f0 = rng.gamma(64, 1 / 64, 10**6) / rng.gamma(64, 1 / 64, 10**6)
f1 = 2 * rng.gamma(64, 1 / 64, 10**6) / rng.gamma(64, 1 / 64, 10**6)
thr_mc = float(thr)
p = (f1 > thr_mc).mean()
print(f"F pd pfa0.1 snr0 (MC)  = {p:.5f} +- {np.sqrt(p * (1 - p) / 1e6):.5f}")
f1 = float(s) * rng.gamma(64, 1 / 64, 10**6) / rng.gamma(64, 1 / 64, 10**6)
ranks = np.searchsorted(np.sort(f0), f1)
print(f"F auc snr2.51 (MC)     = {ranks.mean() / 1e6:.5f}")

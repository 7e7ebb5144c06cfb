"""Reference values for the test suite, computed with mpmath at 40 digits.

Nothing here imports the package: every number is derived directly from the
closed-form definitions. Run ``python tests/oracles/make_oracles.py`` to
print the values frozen into the tests.
"""

import mpmath as mp

mp.mp.dps = 40


def weibull_cdf(x, shape, scale):
    return -mp.expm1(-((x / scale) ** shape))


def weibull_sf(x, shape, scale):
    return mp.exp(-((x / scale) ** shape))


def weibull_pdf(x, shape, scale):
    return shape / scale * (x / scale) ** (shape - 1) * mp.exp(-((x / scale) ** shape))


def family_cdf(G, tau, lam):
    w = 2 * G / (2 - G * (1 + G))
    return 1 - (1 + w**tau) ** (-lam)


def family_pdf(g, G, tau, lam, S=None):
    # 2 - G(1 + G) = (1 - G)(2 + G); pass S = 1 - G when G rounds to 1
    S = 1 - G if S is None else S
    if S == 0:
        return mp.mpf(0)
    den = S * (2 + G)
    w = 2 * G / den
    return (2**tau * tau * lam * g * (2 + G**2) * G ** (tau - 1)
            / den ** (tau + 1) * (1 + w**tau) ** (-(lam + 1)))


def main():
    out = {}
    out["kumaraswamy_2_3_ppf_half"] = mp.sqrt(1 - mp.mpf(0.5) ** (mp.mpf(1) / 3))
    out["normal_ppf_0975"] = mp.findroot(lambda z: mp.ncdf(z) - mp.mpf("0.975"), 1.96)
    G0 = (-3 + mp.sqrt(17)) / 2
    out["G0"] = G0
    # MOBXII(1, 1) over Weibull(1, 1) at x with G(x) = G0
    x0 = -mp.log(1 - G0)
    out["x0_weibull11"] = x0
    out["pdf_at_x0_tau1_lam1_weibull11"] = family_pdf(weibull_pdf(x0, 1, 1), G0, 1, 1)

    # mean of MOBXIIW(tau=0.8, lam=2.5, beta=0.5, alpha=3.5)
    tau, lam, beta, alpha = mp.mpf("0.8"), mp.mpf("2.5"), mp.mpf("0.5"), mp.mpf("3.5")
    f = lambda x: family_pdf(weibull_pdf(x, alpha, beta), weibull_cdf(x, alpha, beta), tau, lam,
                             weibull_sf(x, alpha, beta))
    out["mobxiiw_08_25_05_35_mass"] = mp.quad(f, [0, 0.25, 0.5, 1, 2, mp.inf])
    out["mobxiiw_08_25_05_35_mean"] = mp.quad(lambda x: x * f(x), [0, 0.25, 0.5, 1, 2, mp.inf])
    # mean of MOBXII(2, 1) over Weibull(shape 2, scale 1)
    f = lambda x: family_pdf(weibull_pdf(x, 2, 1), weibull_cdf(x, 2, 1), 2, 1, weibull_sf(x, 2, 1))
    out["mobxii_2_1_weibull21_mean"] = mp.quad(lambda x: x * f(x), [0, 0.5, 1, 2, mp.inf])
    out["mobxii_2_1_weibull21_second"] = mp.quad(lambda x: x**2 * f(x), [0, 0.5, 1, 2, mp.inf])

    # Taylor coefficients of the series chain
    A = lambda G, t: (1 - G / 2 - G**2 / 2) ** t
    out["omega_tau1"] = mp.taylor(lambda G: A(G, 1) / (A(G, 1) + G), 0, 4)
    out["theta_tau2_lam3"] = mp.taylor(lambda G: (A(G, 2) / (A(G, 2) + G**2)) ** 3, 0, 6)
    out["theta_tau3_lam2"] = mp.taylor(lambda G: (A(G, 3) / (A(G, 3) + G**3)) ** 2, 0, 6)
    out["a_tau_half"] = mp.taylor(lambda G: A(G, mp.mpf("0.5")), 0, 5)

    # Chen-Balakrishnan chain for v = (0.25, 0.75)
    v = [mp.mpf("0.25"), mp.mpf("0.75")]
    y = [mp.sqrt(2) * mp.erfinv(2 * vi - 1) for vi in v]
    ybar = sum(y) / 2
    s = mp.sqrt(sum((yi - ybar) ** 2 for yi in y) / 1)
    u = [mp.ncdf((yi - ybar) / s) for yi in y]
    n = 2
    w2 = sum((u[i] - mp.mpf(2 * (i + 1) - 1) / (2 * n)) ** 2 for i in range(n)) + mp.mpf(1) / (12 * n)
    a2 = -n - sum((2 * (i + 1) - 1) * (mp.log(u[i]) + mp.log(1 - u[n - 1 - i])) for i in range(n)) / n
    out["cb_n2_wstar"] = w2 * (1 + mp.mpf(0.5) / n)
    out["cb_n2_astar"] = a2 * (1 + mp.mpf(0.75) / n + mp.mpf(2.25) / n**2)

    # Kolmogorov limiting survival at t = 1.0 and 0.6
    ks = lambda t: 2 * mp.nsum(lambda k: (-1) ** (k - 1) * mp.exp(-2 * k**2 * t**2), [1, mp.inf])
    out["kolmogorov_sf_1.0"] = ks(mp.mpf(1))
    out["kolmogorov_sf_0.6"] = ks(mp.mpf("0.6"))

    # standard LMOBXIIW log-density via log X, X ~ MOBXIIW(tau, lam, 1, 1)
    def lmob_logpdf(z, tau, lam):
        x = mp.exp(z)
        return mp.log(family_pdf(weibull_pdf(x, 1, 1), weibull_cdf(x, 1, 1), tau, lam) * x)

    out["lmob_logpdf_1.8_0.3"] = [lmob_logpdf(mp.mpf(z), mp.mpf("1.8"), mp.mpf("0.3")) for z in (-3, -1, 0, 1, 2)]
    out["lmob_logsf_0.8_2.5"] = [
        mp.log((1 + (2 * (1 - mp.exp(-mp.exp(z))) / (2 - (1 - mp.exp(-mp.exp(z))) * (2 - mp.exp(-mp.exp(z)))))
                ** mp.mpf("0.8")) ** (-mp.mpf("2.5")))
        for z in (mp.mpf(-3), mp.mpf(-1), mp.mpf(0), mp.mpf(1))
    ]

    # MOBXIIW log-density at extreme parameters (limiting sub-model, huge lambda)
    def mobxiiw_logpdf(x, tau, lam, beta, alpha):
        x = mp.mpf(x)
        return mp.log(family_pdf(weibull_pdf(x, alpha, beta), weibull_cdf(x, alpha, beta), tau, lam,
                                 weibull_sf(x, alpha, beta)))

    out["mobxiiw_logpdf_step_limit"] = [mobxiiw_logpdf(x, mp.mpf("2.5e-12"), mp.mpf("6.3"), mp.mpf("6.4"),
                                                       mp.mpf("7.5e11")) for x in ("0.5", "3", "6.3")]
    out["mobxiiw_logpdf_huge_lambda"] = [mobxiiw_logpdf(x, mp.mpf("20.5"), mp.mpf("1e300"), mp.mpf("1e20"),
                                                        mp.mpf("0.77")) for x in ("0.5", "2")]

    # normal octile kurtosis
    q = [mp.sqrt(2) * mp.erfinv(2 * mp.mpf(k) / 8 - 1) for k in range(1, 8)]
    out["normal_moors"] = (q[6] - q[4] + q[2] - q[0]) / (q[5] - q[1])

    # Weibull(shape 2, scale 3) quantities
    out["weibull_2_3_cdf_3"] = 1 - mp.exp(-1)
    for k, val in out.items():
        if isinstance(val, list):
            print(k, "=", [mp.nstr(v, 17) for v in val])
        else:
            print(k, "=", mp.nstr(val, 17))


if __name__ == "__main__":
    main()

"""Independent high-precision reference values frozen into the C++ tests.

Run with:  python3 tests/oracles/compute_oracles.py
Every quantity is computed with mpmath (50 digits) directly from the closed-form
densities; nothing here shares code with the C++ library.
"""
import mpmath as mp

mp.mp.dps = 50
S3 = mp.sqrt(3)
R2 = mp.sqrt(2)


def phi(x):
    return mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi)


def Phi(x):
    return mp.ncdf(x)


def unif_pdf(x):
    return 1 / (2 * S3) if abs(x) <= S3 else mp.mpf(0)


def unif_cdf(x):
    return min(max((x + S3) / (2 * S3), 0), 1)


def lap_pdf(x):
    return mp.exp(-R2 * abs(x)) / R2


def lap_cdf(x):
    return 1 - mp.exp(-R2 * x) / 2 if x >= 0 else mp.exp(R2 * x) / 2


def lap_q(u):
    return mp.log(2 * u) / R2 if u < 0.5 else -mp.log(2 * (1 - u)) / R2


def gauss_q(u):
    return -mp.sqrt(2) * mp.erfinv(1 - 2 * u)  # = Phi^{-1}(u)


def unif_q(u):
    return -S3 + 2 * S3 * u


out = {}

# TV(gamma_1, isotropic uniform): densities cross where phi = 1/(2 sqrt 3)
xc = mp.sqrt(2 * mp.log(2 * S3 / mp.sqrt(2 * mp.pi)))
out["tv_gauss_uniform"] = mp.quad(lambda x: abs(phi(x) - unif_pdf(x)), [-mp.inf, -S3, -xc, 0, xc, S3, mp.inf])

# TV(gamma_1, Laplace)
xl = mp.findroot(lambda x: phi(x) - lap_pdf(x), 0.3)
xl2 = mp.findroot(lambda x: phi(x) - lap_pdf(x), 2.0)
out["tv_gauss_laplace"] = 2 * mp.quad(lambda x: abs(phi(x) - lap_pdf(x)), [0, xl, xl2, mp.inf])

# Kolmogorov(gamma_1, Laplace): extrema of Phi - F_L are at density crossings
cands = [abs(Phi(x) - lap_cdf(x)) for x in (xl, xl2, -xl, -xl2)]
out["ks_gauss_laplace"] = max(cands)

# Kolmogorov(gamma_1, uniform)
out["ks_gauss_uniform"] = max(abs(Phi(x) - unif_cdf(x)) for x in (xc, -xc))

# W_p via quantile integrals, split where the quantile functions cross.
# Crossings of the quantiles are the images of the CDF crossings.
xu = mp.findroot(lambda x: Phi(x) - unif_cdf(x), 1.0)
uu = Phi(-xu)
xL = mp.findroot(lambda x: Phi(x) - lap_cdf(x), 1.0)
uL = Phi(-xL)
for p in (1, 2, 4):
    v = 2 * mp.quad(lambda u: abs(gauss_q(u) - unif_q(u)) ** p, [0, uu, 0.5], maxdegree=12)
    out[f"w{p}_gauss_uniform"] = v ** (mp.mpf(1) / p)
for p in (1, 2):
    v = 2 * mp.quad(lambda u: abs(gauss_q(u) - lap_q(u)) ** p, [0, uL, 0.5], maxdegree=12)
    out[f"w{p}_gauss_laplace"] = v ** (mp.mpf(1) / p)
# Second route for W_1: integral of |F - G| split at the same crossings.
out["w1_gauss_uniform_cdf"] = 2 * mp.quad(lambda x: abs(Phi(x) - unif_cdf(x)), [0, xu, S3, mp.inf])
out["w1_gauss_laplace_cdf"] = 2 * mp.quad(lambda x: abs(Phi(x) - lap_cdf(x)), [0, xL, mp.inf])

# Relative entropies against gamma_1
out["kl_uniform_gauss"] = mp.quad(lambda x: unif_pdf(x) * (mp.log(unif_pdf(x)) - mp.log(phi(x))), [-S3, 0, S3])
out["kl_laplace_gauss"] = 2 * mp.quad(lambda x: lap_pdf(x) * (mp.log(lap_pdf(x)) - mp.log(phi(x))), [0, mp.inf])


# Law of sqrt(1-t^2) Z + t Y for the isotropic uniform / Laplace bases
def interp_uniform_pdf(x, t):
    s = mp.sqrt(1 - t * t)
    h = t * S3
    return (Phi((x + h) / s) - Phi((x - h) / s)) / (2 * h)


def interp_laplace_pdf(x, t):
    s = mp.sqrt(1 - t * t)
    return mp.quad(lambda y: lap_pdf(y) * phi((x - t * y) / s) / s, [-mp.inf, 0, mp.inf])


out["interp_uniform_0.5_pdf_at_0"] = interp_uniform_pdf(0, mp.mpf("0.5"))
out["interp_laplace_0.5_pdf_at_0.7"] = interp_laplace_pdf(mp.mpf("0.7"), mp.mpf("0.5"))

# Smoothing gaps ||f - f * phi_t||_1
for t in ("0.4", "0.2", "0.1", "0.05"):
    tt = mp.mpf(t)
    g = lambda x: phi(x / mp.sqrt(1 + tt * tt)) / mp.sqrt(1 + tt * tt)
    xs = mp.sqrt((1 + tt * tt) * mp.log(1 + tt * tt) / (tt * tt))
    out[f"gap_gauss_{t}"] = 2 * mp.quad(lambda x: abs(phi(x) - g(x)), [0, xs, mp.inf])


def unif_smoothed(x, t):
    return (Phi((x + S3) / t) - Phi((x - S3) / t)) / (2 * S3)


out["gap_uniform_0.2"] = 2 * mp.quad(lambda x: abs(unif_pdf(x) - unif_smoothed(x, mp.mpf("0.2"))),
                                     [0, S3 - 1, S3, S3 + 2, mp.inf])

# Tail of the chi distribution with 4 degrees of freedom at R = 3 * sqrt(4) = 6
out["chi4_tail_6"] = mp.exp(-18) * (1 + 18)

# Var(log f(Y)) for the isotropic Laplace
m1 = 2 * mp.quad(lambda x: lap_pdf(x) * mp.log(lap_pdf(x)), [0, mp.inf])
m2 = 2 * mp.quad(lambda x: lap_pdf(x) * mp.log(lap_pdf(x)) ** 2, [0, mp.inf])
out["var_logf_laplace"] = m2 - m1 * m1

for k, v in out.items():
    print(f"{k:32s} {mp.nstr(v, 17)}")

# Discretized bounded-Lipschitz dual on an explicit grid, solved as a dense LP.
# Nodes are cell centres of a uniform partition of [lo, hi]; the outer cells
# absorb the tails. Maximise sum g_i d_i s.t. |g_i| <= 1, |g_{i+1} - g_i| <= h.
import numpy as np
from scipy.optimize import linprog
from scipy.stats import norm


def bl_lp(cdf_a, cdf_b, lo, hi, m):
    h = (hi - lo) / m
    edges = [lo + i * h for i in range(1, m)]
    def masses(cdf):
        c = [0.0] + [float(cdf(mp.mpf(e))) for e in edges] + [1.0]
        return np.diff(c)
    d = masses(cdf_a) - masses(cdf_b)
    rows, rhs = [], []
    for i in range(m - 1):
        r = np.zeros(m); r[i + 1] = 1; r[i] = -1
        rows.append(r); rhs.append(h)
        rows.append(-r); rhs.append(h)
    res = linprog(-d, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=[(-1, 1)] * m, method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    return -res.fun


print(f"{'bl_grid64_gauss_uniform':32s} {bl_lp(Phi, unif_cdf, -6.0, 6.0, 64):.15g}")
print(f"{'bl_grid64_gauss_laplace':32s} {bl_lp(Phi, lap_cdf, -6.0, 6.0, 64):.15g}")
print(f"{'bl_grid64_gauss_shift1':32s} {bl_lp(Phi, lambda x: Phi(x - 1), -6.0, 7.0, 64):.15g}")

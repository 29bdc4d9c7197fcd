# Distributed under the MIT License.
# See LICENSE.txt for details.
#
# Independent reference computation for the closed-form metric values frozen
# into test_metrics.cpp: tabulated runtime-scaling cells, boundary solves,
# proxy-bias leading forms, and the noisy-mitigation-gate perturbation
# analyses.  Perturbed coefficients are obtained by solving the defining
# linear system numerically, not through the library's solver.
#
# Run:  python3 tests/oracles/metric_values.py

import math

import mpmath as mp

mp.mp.dps = 45


def show(label, value, digits=32):
    print(f"{label} = {mp.nstr(mp.mpf(value), digits)}")


print("# plan summary examples")
# Fixed-fraction ladder, order 1: coefficients (3/2, -1/2), lengths (1, 3).
c = [mp.mpf(3) / 2, mp.mpf(-1) / 2]
lengths = [1, 3]
cost = sum(abs(x) for x in c)
f_l = sum(abs(x) * l for x, l in zip(c, lengths)) / cost
show("iism_kf1_cost", cost, 6)
show("iism_kf1_length", f_l, 6)
show("iism_kf1_scaling", cost**2 * f_l, 6)

# Rotational custom-channel mitigation at phi = 0.2: lengths (1, 2, 2).
phi = mp.mpf("0.2")
cs = [mp.cos(phi), -(mp.cos(phi) - 1 + mp.sin(phi)) / 2,
      (1 - mp.cos(phi) + mp.sin(phi)) / 2]
cost = sum(abs(x) for x in cs)
f_l = (abs(cs[0]) + 2 * abs(cs[1]) + 2 * abs(cs[2])) / cost
show("clm_re_02_length", f_l)
show("clm_re_02_scaling", cost**2 * f_l)

print("# stochastic-noise table cells (eps=0.2, N=18, M=1, a=1 unless noted)")
eps, n, m, a = mp.mpf("0.2"), mp.mpf(18), 1, mp.mpf(1)
show("sn_clm_small", 1 + (2 + 1 / (2 * n)) * eps)
show("sn_clm_large_02", mp.e**(2 * eps))
show("sn_csm_small", 1 + (mp.mpf(8) / 3 - 1 / (6 * n * n)) * n * eps)
show("sn_csm_large", 2 * mp.cosh(mp.sqrt(2 * n * eps)) ** 2)
show("sn_iiam_level", eps ** (m + 1) / math.factorial(m + 1))
show("sn_iiam_large", n ** (2 * m) / math.factorial(m) ** 2)
show("sn_iilm_kf_level",
     eps ** (m + 1) / n**m * ((1 + a) / 2) ** m * 3 / math.factorial(m + 1))
show("sn_iism_level",
     eps ** (m + 1) * 18 * 17 * 3 / (n ** (m + 1) * math.factorial(m + 1)))
show("sn_iism_large", mp.mpf(4) ** (m + 1) / mp.pi)
show("sn_tiilm_large", mp.e ** (4 * (1 + a) * eps) * (1 + 2 * mp.log(2)))

print("# rotational-error table cells (eps=0.2, N=18, M=1 unless noted)")
show("re_chilm_small", 1 + (1 + 1 / (4 * n)) * eps * eps / n)
show("re_chilm_large_1_100", 1 + mp.mpf(1) / 100)
show("re_chism_small", 1 + (mp.mpf(4) / 3 - 1 / (12 * n * n)) * eps * eps)
show("re_chism_large",
     3 / (2 * mp.cos(eps) ** 2) - mp.tan(eps) / (2 * eps))
show("re_ciilm_large", 6 * mp.e ** (4 * mp.sqrt(3) * eps))
show("re_clm_small", 1 + (2 + 1 / n) * eps)
show("re_csm_large", 1 + mp.sin(eps) * (3 * mp.cos(eps) + mp.sin(eps)))
show("re_iilm_large", mp.mpf(15) / 7 * (mp.mpf(7) / 2) ** (2 * n), 20)
show("re_lc_level", eps * eps / (2 * n))
show("re_lc_csm_large",
     (2 - mp.tanh(eps) / eps) * mp.cosh(eps) ** 2)
show("re_lc_tiilm_large", 2 * (1 + mp.sqrt(2 / n) * eps))
show("re_tiilm_large", mp.e ** (2 * eps) * (1 + mp.pi))
show("re_lc_iism_level",
     eps ** (2 * (m + 1)) * 18 * 17 * 3
     / (2 ** (m + 1) * n ** (2 * (m + 1)) * math.factorial(m + 1)))

print("# boundary cells and solver targets")
show("bnd_clm_e2", mp.log(mp.e**2) / 2, 6)
show("bnd_clm_e4", mp.log(mp.e**4) / 2, 6)
show("bnd_clm_s10", mp.log(10) / 2)
show("bnd_csm_sn_s10", mp.log(20) ** 2 / (8 * n))
show("bnd_chism_s10", mp.pi / 2 - mp.sqrt(3 / mp.mpf(20)))
show("bnd_chilm_s10", mp.sqrt(n * 9))
for s_star in (2, 10, 100):
    show(f"bnd_clm_s{s_star}", mp.log(s_star) / 2)
    show(f"bnd_iism_deph_s{s_star}",
         mp.mpf(4) ** (mp.log(2 * mp.mpf("0.01")) / mp.log(mp.pi * s_star))
         / 2)
show("bnd_lc_n180", mp.sqrt(2 * 180 * mp.mpf("1e-6")))
show("bnd_clm_cli_example", mp.log(mp.mpf("7.389056")) / 2, 16)

print("# proxy-bias leading forms")
show("proxy_iism_kf_sn_02_order1", mp.mpf("0.2") ** 2 * 3 / 2, 6)
show("proxy_lc_02_n18", mp.mpf("0.2") ** 2 / 36)
show("proxy_iiam_02_order2", mp.mpf("0.2") ** 3 / 6)

print("# perturbed custom-channel coefficients (exact 3x3 solve)")


def perturbed_clm(p, phi, y_ss, y_sp, y_rs, y_rp):
    phis = [phi, (1 + y_rs) * phi + mp.pi / 2,
            (1 + y_rs + y_rp) * phi + 3 * mp.pi / 2]
    ps = [p, (1 + y_ss) * p, (1 + y_ss + y_sp) * p]
    a = mp.matrix(3, 3)
    b = mp.matrix(3, 1)
    for j in range(3):
        d = 1 - 2 * ps[j]
        a[0, j] = d * mp.cos(phis[j])
        a[1, j] = d * mp.sin(phis[j])
        a[2, j] = 1
    b[0], b[1], b[2] = 1, 0, 1
    return mp.lu_solve(a, b)


c = perturbed_clm(mp.mpf("0.01"), mp.mpf("0.02"), 1, 1, 1, 1)
for j in range(3):
    show(f"pclm_y1_c{j}", c[j])
show("pclm_y1_leading_c0", 1 + 2 * mp.mpf("0.01"), 6)
show("pclm_y1_leading_c1", -mp.mpf("0.01") - mp.mpf("0.02") / 2, 6)
show("pclm_y1_leading_c2", -mp.mpf("0.01") + mp.mpf("0.02") / 2, 6)
c = perturbed_clm(mp.mpf("0.01"), mp.mpf("0.02"), 2, mp.mpf("0.5"), 3, 1)
for j in range(3):
    show(f"pclm_mixed_c{j}", c[j])

print("# perturbed hidden-inverse metrics")
eps_sn = mp.mpf("0.3")
y_s_hi, y_r_hi = mp.mpf("0.5"), mp.mpf(1)
show("pchilm_scaling_05_1",
     mp.e ** (2 * (y_s_hi + y_r_hi) / (1 + y_r_hi) * eps_sn))
show("pchilm_boundary_05_1_e2",
     (1 + y_r_hi) / (y_s_hi + y_r_hi) * mp.log(mp.e**2) / 2)

print("# noisy-inverse synchronous-insertion robustness")


def iism_na_exact(p, y_dagger, order):
    xs = []
    for i in range(order + 1):
        base = 1 - 2 * (1 + y_dagger) * p + 4 * y_dagger * p * p
        xs.append((1 - base**i * (1 - 2 * p)) / 2)
    cs = []
    for i in range(order + 1):
        prod = mp.mpf(1)
        for k in range(order + 1):
            if k != i:
                prod *= xs[k] / (xs[k] - xs[i])
        cs.append(prod)
    return xs, cs


xs, cs = iism_na_exact(mp.mpf("0.01"), mp.mpf(1), 1)
show("iism_na_y1_x1", xs[1])
show("iism_na_y1_cost", sum(abs(x) for x in cs), 16)
xs, cs = iism_na_exact(mp.mpf("0.01"), mp.mpf(0), 1)
show("iism_na_y0_x1_over_x", xs[1] / mp.mpf("0.01"), 16)


def iism_na_leading_cost(y_dagger, order):
    y = mp.mpf(y_dagger)
    prod = mp.mpf(1)
    for k in range(order + 1):
        prod *= 1 + k * (1 + y)
    return (prod * mp.hyp2f1(1 / (1 + y), -order, (y + 2) / (y + 1), -1)
            / ((1 + y) ** order * math.factorial(order)))


show("iism_na_cost_y05_order2", iism_na_leading_cost(mp.mpf("0.5"), 2))
show("iism_na_cost_y1_order1", iism_na_leading_cost(1, 1), 16)
show("iism_na_cost_y1_order3", iism_na_leading_cost(1, 3), 16)

print("# generic terminating Gauss series")
show("gauss_03_m4_17_m06", mp.hyp2f1(mp.mpf("0.3"), -4, mp.mpf("1.7"),
                                     mp.mpf("-0.6")))
show("gauss_half_m5_threehalf_m1", mp.hyp2f1(mp.mpf("0.5"), -5,
                                             mp.mpf("1.5"), -1))

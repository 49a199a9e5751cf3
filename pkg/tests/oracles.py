"""Frozen reference values.

Each entry was computed once from an independent route (closed-form
arithmetic, quadrature, series or brute-force algebra) before the library
code it checks existed, and is not regenerated from the library.
"""

import math

# limit laws
SUPPORT_MP_05 = (0.08578643762690492, 2.914213562373095)  # (1 -+ sqrt(0.5))^2
BETA_PLUS_W_05 = 0.9330127018922193  # c1 ((rho+1)/(rho+c2))^2, rho = sqrt(0.75)
DENSITY_SC_0 = 1.0 / math.pi  # (1/2pi) sqrt(4)
DENSITY_MP_05_AT_1 = 0.42108439934779235  # (1/(2 pi c1 lam)) sqrt((b+ - 1)(1 - b-))
THRESHOLD_W_09 = 18.949874371066198  # (c2 + rho)/(1 - c2), rho = sqrt(0.99)
THRESHOLD_MP_05 = 0.7071067811865476
STIELTJES_SC_25 = -0.5  # (-z + sqrt(z^2 - 4))/2 at 2.5
STIELTJES_MP_05_3 = -2.0 / 3.0
STIELTJES_W_05_12 = -5.0 / 3.0
STIELTJES_DERIV_SC_25 = 1.0 / 3.0  # (-1 + z/sqrt(z^2-4))/2

# int ln(z0 - lam) dF
F2_SMD_05 = -math.log(0.5) + 0.125  # 0.81815
F2_PCA_05 = 1.0 - math.log(1.5)  # 0.59453
F2_SIGD_05_QUAD = -0.42918163472548043  # quadrature of ln(1.2 - lam) against W(0.5, 0.5)

# special functions
HYP2F1_11_2_HALF = 2.0 * math.log(2.0)  # -ln(1 - z)/z at z = 1/2
PHI0_AT_2 = math.log(2.0) - 2.0
T1_EPS2_ETA1 = math.sqrt(2.0)

# engine
Z0_SMD_05 = 2.5
Z0_PCA_05 = 3.0
Z0_SIGD_05 = 1.2
D2_SMD_05 = 0.75
D2_PCA_05 = 0.28125
SMD_DETERMINISTIC_05 = math.sqrt(0.75)  # 0.86603
REG0_Z1_05 = -0.125
REG0_RADIUS_05 = 3.125
REG_TAU0_05 = 2.0

# inference
DELTA_PCA_05 = 0.7071067811865476
NULL_MEAN_D2_HALF = 0.25 * math.log(0.5)  # -0.17329
NULL_VAR_D2_HALF = -0.5 * math.log(0.5)  # 0.34657
COV_DELTA_HALF = -0.5 * math.log(0.75)  # 0.14384
POWER_D2_HALF = 0.14545016  # 1 - Phi(1.64485 - 0.58871)

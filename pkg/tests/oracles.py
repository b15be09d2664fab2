"""Reference values computed once with 30-digit mpmath, independently of the package.

They are frozen here; regenerating them needs only mpmath and the formulas in
the comments.
"""

# sqrt(2 ln 8) / (2 pi)
ALPHA_TAU0_8 = 0.32457008358600198

# int |t|^n g(t) dt for the unit Gaussian
I1 = 0.79788456080286536  # sqrt(2/pi)
I2 = 1.0
I3 = 1.5957691216057307  # 2 sqrt(2/pi)

# two-chirp, mu = 1, tau0 = 1/8
SIGMA1_TWO_CHIRP_T0 = 0.67864653840709506  # alpha * 46 / 22
SIGMA2_TWO_CHIRP = {0.0: 0.83404794601326020, 0.5: 0.57439516050848337, 1.0: 0.52831651259334136}
H0_TWO_CHIRP_T0 = 0.97820856972575493  # at sigma = sigma2(0)

# pi * 10 * ((1 + alpha) / 12)^2
LAMBDA_EXAMPLE = 0.382769446816415873
# (2.3245)^2 / 1.6755 - 2
GAMMA_EXAMPLE = 1.2248882423157266
# sqrt(ln 2) / (pi sqrt 2)
FINV_HALF = 0.18739062512927758
# (pi / 3) * I3
PI_EXAMPLE = 1.6710855164206670
# alpha * 1010 / 990
SIGMA1_TONES_10_1000 = 0.33112705497157778

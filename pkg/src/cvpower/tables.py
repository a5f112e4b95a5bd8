"""Shipped model data for the sample-size calculators.

The plane coefficients parameterize the closed-form required-sample-size
model: each of (a, b, c) in n_r = a*D**b + c is an affine function of the
selected-feature count l and the extracted-feature count m.

The confidence grid stores the probability (percent) that a nested
10-fold pipeline with two selected features recovers both truly
discriminative features, indexed by (m, D, n).  The grid is shipped
verbatim from the calibration campaign, including its small Monte Carlo
inversions; no smoothing is applied.
"""

# (intercept, coefficient of l, coefficient of m)
PLANE_A = (39.37, -6.718, 0.263)
PLANE_B = (-1.985, -0.023, 0.001)
PLANE_C = (-0.886, 1.507, -0.015)

# Fitted ranges of the closed-form model; outside them the calculator
# still answers but attaches an extrapolation warning.
L_FITTED = (2, 3, 4)
D_FITTED_RANGE = (0.4, 1.4)
EXTRAPOLATION_MPE_PERCENT = 23.9
INTERPOLATION_MPE_PERCENT = 3.5

GRID_M_VALUES = (10, 20, 30, 40)
GRID_D_VALUES = (0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
GRID_N_VALUES = (50, 100, 150, 200, 250, 300, 350, 400, 450, 500)

# C22_PERCENT[m_index][n_index][d_index]
C22_PERCENT = (
    (  # m = 10
        (17.7, 27.9, 40.3, 50.2, 60.8, 68.6, 75.1),
        (38.2, 51.7, 66.9, 78.3, 85.6, 90.9, 94.2),
        (52.7, 69.3, 81.4, 90.3, 94.7, 97.2, 98.4),
        (63.4, 79.7, 90.1, 95.7, 98.7, 99.5, 99.8),
        (72.9, 88.3, 95.9, 98.5, 99.6, 99.9, 100.0),
        (79.6, 90.5, 96.6, 99.1, 99.6, 99.7, 99.9),
        (84.7, 94.5, 98.6, 99.7, 99.9, 100.0, 100.0),
        (88.1, 96.1, 99.1, 99.8, 100.0, 100.0, 100.0),
        (90.3, 97.3, 99.6, 100.0, 100.0, 100.0, 100.0),
        (92.6, 98.6, 99.9, 100.0, 100.0, 100.0, 100.0),
    ),
    (  # m = 20
        (9.5, 17.3, 27.0, 37.4, 48.7, 59.4, 65.5),
        (23.8, 40.1, 55.7, 68.0, 79.0, 85.8, 90.6),
        (39.5, 59.5, 75.0, 86.3, 92.6, 96.5, 98.0),
        (51.3, 71.5, 85.8, 93.5, 96.0, 98.6, 99.4),
        (63.3, 83.2, 92.5, 96.8, 99.2, 99.7, 99.8),
        (73.4, 88.4, 96.9, 99.1, 99.7, 100.0, 100.0),
        (79.0, 92.0, 97.5, 99.4, 99.8, 100.0, 99.9),
        (84.1, 94.9, 99.0, 99.8, 100.0, 100.0, 100.0),
        (88.1, 96.8, 99.2, 99.9, 100.0, 100.0, 100.0),
        (90.3, 97.6, 99.7, 99.9, 100.0, 100.0, 100.0),
    ),
    (  # m = 30
        (6.3, 11.9, 19.7, 31.5, 40.9, 50.7, 59.7),
        (19.3, 35.3, 52.3, 67.5, 77.6, 85.4, 90.1),
        (32.6, 53.6, 70.6, 83.7, 90.5, 94.7, 97.7),
        (48.4, 69.8, 84.5, 92.3, 96.6, 98.8, 99.4),
        (56.8, 77.5, 90.6, 96.3, 98.7, 99.5, 99.9),
        (66.1, 84.0, 94.2, 97.9, 99.3, 99.8, 100.0),
        (75.8, 89.8, 96.5, 99.4, 99.9, 100.0, 100.0),
        (81.2, 94.1, 98.7, 99.8, 100.0, 100.0, 100.0),
        (84.8, 95.7, 98.9, 99.7, 100.0, 100.0, 100.0),
        (86.9, 96.5, 99.5, 100.0, 100.0, 100.0, 100.0),
    ),
    (  # m = 40
        (4.8, 10.3, 16.6, 26.5, 38.2, 48.2, 57.5),
        (15.1, 31.7, 46.3, 60.9, 72.8, 81.2, 87.8),
        (29.2, 50.3, 67.5, 81.0, 89.8, 94.4, 97.6),
        (41.8, 66.8, 82.4, 91.4, 95.4, 98.4, 99.4),
        (53.3, 74.1, 89.3, 95.4, 98.3, 99.5, 100.0),
        (63.1, 81.6, 93.0, 98.0, 99.4, 99.8, 100.0),
        (70.8, 89.1, 95.4, 98.8, 99.6, 99.8, 100.0),
        (76.1, 91.2, 97.8, 99.4, 99.9, 99.9, 100.0),
        (82.9, 94.9, 98.8, 99.7, 100.0, 100.0, 100.0),
        (86.8, 97.3, 99.6, 99.9, 100.0, 100.0, 100.0),
    ),
)

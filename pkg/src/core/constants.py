"""Frozen numerical conventions shared across services."""

# ln(zeta^l x) = ln x + 2*pi*i*l/a with l taken in [0, a)
LOG_BRANCH = "positive"

LOG_BRANCHES = ("positive", "negative", "symmetrized")

# zero threshold for floating DFT values; exact zero tests never use it
FLOAT_ZERO = 1e-10

# integer coefficients above this switch orbit enumeration to InfiniteBeyond
ORBIT_COEFF_LIMIT = 2**52

CSV_DIGITS = 17

# |x''(z)| / 2 at a branch point below this is treated as a degenerate ramification
BRANCH_DEGENERACY_TOL = 1e-10

# warm-up tuning keeps the single-coordinate acceptance rate inside this band
ACCEPTANCE_BAND = (0.3, 0.5)

# energy of a configuration with a vanishing interaction; proposals landing there are rejected
INFINITE_ENERGY = float("inf")

# smallest scanned point of the convexity scan, as a fraction of its upper end
CONVEXITY_SCAN_FLOOR = 1e-6

# homotopy steps from the weak-coupling curve (c = 1, m2 = 0, w = 2) to the (2,3,3) target
P233_CONTINUATION_STEPS = 200

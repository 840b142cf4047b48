"""
Constants module for the pi-series toolkit.

This module collects the caps, defaults and thresholds used throughout the
toolkit: degree limits of the exact tower, precision defaults, recognition
heuristics and reconstruction tuning. Modules import the values from here rather
than hard-coding them.
"""

from fractions import Fraction
from pathlib import Path

# Exact tower
"""Largest absolute exponent of pi a PiPoly may carry.

Closed-form sums in the catalog reach pi**7; the cap leaves room while failing
loudly on runaway symbolic growth.
"""
MAX_PI_DEGREE = 16

"""Largest degree in x of a piece polynomial."""
MAX_X_DEGREE = 12

"""Largest total trigonometric degree accepted by product expansion."""
MAX_TRIG_DEGREE = 16

"""Largest index of a Bernoulli polynomial the engine will build."""
MAX_BERNOULLI_INDEX = 20

"""Binary precision of the first pi enclosure tried by exact sign determination."""
INITIAL_SIGN_BITS = 64

# Numeric defaults
"""Default number of decimal digits printed and carried by numeric work."""
DEFAULT_DIGITS = 30

"""Smallest precision the command line accepts."""
MIN_DIGITS = 8

"""Default number of series terms for partial sums."""
DEFAULT_TERMS = 10 ** 6

"""Extra decimal digits carried beyond the requested precision."""
GUARD_DIGITS = 10

"""Number of terms evaluated per numpy block when sampling series in float64."""
SAMPLE_BLOCK = 1 << 20

"""Relative slack on the Abel-summation tail bound, covering the working-precision error of sin(beta/2)."""
TAIL_BOUND_SLACK = 10 ** -20

"""Largest number of terms summed exactly when certifying the sign of a crossing bracket end."""
CROSSING_CERTIFY_TERMS = 20000

"""Environment variable overriding the default precision."""
ENV_DIGITS = "PISERIES_DIGITS"

"""Environment variable overriding the default number of series terms."""
ENV_TERMS = "PISERIES_TERMS"

# Fourier verification
"""Indices n at which formally different coefficient formulas are spot-checked."""
SPOT_CHECK_INDICES = tuple(range(1, 9))

"""Indices n used by the reconstruction roundtrip numeric check."""
ROUNDTRIP_INDICES = tuple(range(1, 13))

"""Absolute tolerance for numeric spot checks of coefficient formulas."""
SPOT_CHECK_TOLERANCE = 1e-20

"""Spot-check differences below this but above the strict tolerance leave a roundtrip inconclusive."""
INCONCLUSIVE_TOLERANCE = 1e-8

# Integer relations
"""Default Lovasz parameter of LLL reduction."""
DEFAULT_LLL_DELTA = Fraction(3, 4)

"""Largest integer allowed in an accepted relation."""
DEFAULT_HEIGHT_CAP = 10 ** 6

"""Digits demanded between the residual of a relation and the working precision."""
RELATION_GUARD_DIGITS = 4

"""Lowest precision tried when a recognition retries at reduced precision."""
MIN_RECOGNITION_DIGITS = 6

"""Required excess, in digits, of residual accuracy over the information in the relation.

A relation with height H over a basis of size d explains about (d+1)*log10(H)
digits by chance; accepted relations must beat that by this margin.
"""
RECOGNITION_MARGIN_DIGITS = 4

# Reconstruction
"""Default number of series terms when sampling for reconstruction."""
FIT_TERMS = 10 ** 5

"""Default number of sample points for reconstruction."""
FIT_SAMPLES = 2000

"""Width of the band excluded from fitting around each breakpoint and domain end."""
GUARD_BAND = 0.02

"""Half-width of the window used to compute the local spread of finite differences."""
SPIKE_WINDOW = 15

"""A finite-difference spike must exceed the median spread by this factor."""
SPIKE_FACTOR = 50.0

"""Relative size of float64 noise in sampled values, before finite differencing."""
SPIKE_NOISE_FLOOR = 1e-14

"""Spikes closer than this to either end of the sampled range are ignored."""
END_MARGIN = 0.1

"""An extrapolated end value below this fraction of the largest sample counts as zero."""
BOUNDARY_ZERO_FRACTION = 1e-3

"""Detected spikes are snapped to a candidate breakpoint no further away than this."""
SNAP_DISTANCE = 0.05

"""Highest piece degree tried by the reconstruction search."""
MAX_FIT_DEGREE = 4

"""Most segment splits tried before the reconstruction search gives up."""
MAX_SPLITS = 4

"""Fit residual must stay below this multiple of the sampling error estimate."""
RESIDUAL_FACTOR = 10.0

"""Floor on the sampling error estimate used by the residual test."""
RESIDUAL_FLOOR = 1e-12

"""Recognition precision bounds derived from fitted coefficient errors."""
FIT_DIGITS_RANGE = (6, 15)

# Catalog
"""Default number of interior points checked per interval identity."""
DEFAULT_INTERVAL_SAMPLES = 5

# Resources
"""Directory of the bundled piecewise function definitions."""
FUNCTIONS_DIR = Path(__file__).resolve().parent / "resources" / "functions"

# coding: utf-8

# # Diebold-Mariano statistic and serial correlation
#
# With no autocovariance terms the DM statistic is just sqrt(T) times a Sharpe
# ratio computed with the population standard deviation.

import math

import numpy as np

from forecast_risk import HacConfig, Kernel, dm_statistic, hac_variance, sharpe_ratio
from forecast_risk.simulate import ar1_gains

rng = np.random.default_rng(1)
r = rng.normal(0.1, 1.0, size=200)
k0 = HacConfig.fixed(0, Kernel.TRUNCATED_UNIFORM)
print(dm_statistic(r, k0), math.sqrt(r.size) * sharpe_ratio(r, "population_T"))

# ## Persistent gains
#
# Multi-step forecasts produce overlapping errors, so gains are autocorrelated.
# A Bartlett long-run variance with the 1.5 T^(1/3) lag inflates the
# denominator and shrinks |DM|.

g = ar1_gains(rng, 1000, 0.5, 0.05)
auto = HacConfig.default_for()
print("K=0      DM %.2f" % dm_statistic(g, k0))
print("Bartlett DM %.2f (lag %d)" % (dm_statistic(g, auto), auto.resolve_lag(g.size)))

# For an h-step forecast the usual choice is lag h - 1:

print(HacConfig.default_for(horizon=4).describe(g.size))

# The truncated-uniform kernel can return a negative variance; it is floored
# and flagged rather than silently passed on.

alt = np.tile([1.0, -1.0], 50) + 0.01
lrv = hac_variance(alt, HacConfig.fixed(3, Kernel.TRUNCATED_UNIFORM))
print(lrv.raw_value, lrv.value, lrv.floored)

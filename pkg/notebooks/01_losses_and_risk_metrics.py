# coding: utf-8

# # Loss differentials as returns
#
# Two forecasters predict the same quarterly series. Subtracting the model's loss
# from the benchmark's gives a gain series that can be read like a strategy's
# returns: positive when the model wins that quarter.

import numpy as np

from forecast_risk import compute_losses, drawdown, omega_ratio, return_series, risk_report, sharpe_ratio, sortino_ratio

actual = np.full(4, 10.0)
bench = compute_losses(actual, [8.5, 10.0, 8.5, 9.0], "squared_error", "AR")
model = compute_losses(actual, [9.5, 9.0, 9.5, 10.0], "squared_error", "M")
r = return_series(bench, model)
print("gains:", r.values)

# ## Headline ratios
#
# The Sharpe ratio uses the sample standard deviation. Sortino only penalises
# losing quarters, and Omega compares the total upside with the total downside.

print("Sharpe  %.2f" % sharpe_ratio(r))
print("Sortino %.2f" % sortino_ratio(r))
print("Omega   %.2f" % omega_ratio(r))

# ## Drawdown
#
# The cumulative gain path starts at zero, so an early losing streak counts as a
# drawdown even before any gains have been banked.

path, maxdd = drawdown(r)
print("drawdown path:", path, "max:", maxdd)

# The same numbers in one record:

print(risk_report(r).as_dict())

# ## Degenerate inputs
#
# A model identical to its benchmark has zero gains everywhere; ratios that
# would need 0/0 come back as NaN, not as an error.

print(risk_report(np.zeros(5)).as_dict())

"""Slow, loop-based reference formulas used as independent oracles.

Nothing here imports the package; each function is written straight from the
textbook definition with plain Python floats.
"""

import math


def mean(xs):
    return math.fsum(xs) / len(xs)


def sharpe(xs, ddof=1):
    m = mean(xs)
    var = math.fsum((x - m) ** 2 for x in xs) / (len(xs) - ddof)
    return m / math.sqrt(var)


def sortino(xs):
    m = mean(xs)
    down = math.sqrt(math.fsum(min(x, 0.0) ** 2 for x in xs) / len(xs))
    return m / down


def omega(xs):
    up = math.fsum(max(x, 0.0) for x in xs)
    down = math.fsum(-min(x, 0.0) for x in xs)
    return up / down


def brute_max_drawdown(xs):
    """max over 0 <= u <= t <= T of (R_u - R_t), R_0 = 0."""
    R = [0.0]
    for x in xs:
        R.append(R[-1] + x)
    best = 0.0
    for t in range(len(R)):
        for u in range(t + 1):
            best = max(best, R[u] - R[t])
    return best


def brute_drawdown_path(xs):
    R = [0.0]
    for x in xs:
        R.append(R[-1] + x)
    return [max(R[: t + 1]) - R[t] for t in range(1, len(R))]


def autocov(xs, k):
    n = len(xs)
    m = mean(xs)
    return math.fsum((xs[t] - m) * (xs[t - k] - m) for t in range(k, n)) / n


def edge_ratio_loops(columns, j):
    """columns: list of per-model loss lists; j: evaluated model."""
    K = len(columns)
    T = len(columns[0])
    wins = regrets = 0.0
    for t in range(T):
        front = min(columns[i][t] for i in range(K) if i != j)
        e = front - columns[j][t]
        if e > 0:
            wins += e
        elif e < 0:
            regrets += -e
    if wins == 0:
        return 0.0 if regrets > 0 else float("nan")
    if regrets == 0:
        return math.inf
    return wins / regrets * (K - 1)

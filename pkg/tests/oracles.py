"""Independent reference computations.

None of these call the closed forms under test: gains come from numerical
quadrature of the profit-rate integrands, equilibrium rewards from root
finding on the gain balance, trajectories from iterating the raw
constant-product maps, resting prices from a scipy root finder.
"""
import math

from scipy.integrate import quad
from scipy.optimize import brentq


def ss_gain_quadrature(alpha, beta, s, N):
    """Integral of (price(t) - beta) while the decaying price exceeds s."""
    T = N * math.log(alpha / s)
    value, _ = quad(lambda t: alpha * math.exp(-t / N) - beta, 0.0, T, epsabs=0.0, epsrel=1e-12, limit=200)
    return value


def lp_rational_quadrature(p_theta, delta, alpha, N):
    T = N * math.log((p_theta - delta) / alpha)
    value, _ = quad(lambda t: p_theta * N, 0.0, T, epsabs=0.0, epsrel=1e-12)
    return value


def lp_reward_quadrature(gamma, N, T):
    value, _ = quad(lambda t: gamma * N, 0.0, T, epsabs=0.0, epsrel=1e-12)
    return value


def seller_balance_reward(x, A, N, s=1.0):
    """Normalized gamma with seller gain equal to LP gain per unit depth."""
    alpha, beta = x * s, A * s
    T = N * math.log(x)
    g_ss = ss_gain_quadrature(alpha, beta, s, N)

    def imbalance(gamma):
        lp = gamma * N * T + (s - alpha) * N
        return lp / N - g_ss

    return brentq(imbalance, -50.0, 50.0, xtol=1e-15, rtol=1e-15, maxiter=500) / s


def buyer_balance_reward(x, A, B, N, s=1.0):
    """Normalized gamma at which staying LP matches selling externally."""
    p_theta = (1.0 - A) * s
    delta = p_theta - B * s
    alpha = x * s
    T = N * math.log((p_theta - delta) / alpha)
    rational = lp_rational_quadrature(p_theta, delta, alpha, N)

    def imbalance(gamma):
        return gamma * N * T + (p_theta - delta - alpha) * N - rational

    return brentq(imbalance, -50.0, 50.0, xtol=1e-15, rtol=1e-15, maxiter=500) / s


def iterate_sell_steps(price, N, dt, k):
    n, y = N, price * N
    for _ in range(k):
        y = y * n / (n + dt)
    return y / n


def steps_until(price, N, dt, stop, buy=False):
    """Number of quasi-static steps until the price crosses ``stop``."""
    y, k = price * N, 0
    if buy:
        while y / N < stop:
            y = y * N / (N - dt)
            k += 1
    else:
        while y / N > stop:
            y = y * N / (N + dt)
            k += 1
    return k


def resting_price_brentq(g, A, N, C):
    lower = 1.0 + 1.0 / N - A
    def curve(x):
        return (1.0 + 1.0 / N) * (x - 1.0) / math.log(x) - A
    if g <= lower:
        return 1.0
    if g >= curve(C):
        return C
    return brentq(lambda x: curve(x) - g, 1.0 + 1e-7, C, xtol=1e-14)

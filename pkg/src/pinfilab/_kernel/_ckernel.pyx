# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled tick loop and grid classifier; mirrors ``_pykernel`` operation for operation."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, fabs
from libc.stdint cimport uint64_t

cnp.import_array()

DEF ROLE_SS = 1
DEF ROLE_SB = 2
DEF ROLE_GB = 4
DEF POLICY_ALTERNATE = 0
DEF POLICY_SELLER = 1
DEF POLICY_BUYER = 2
DEF POLICY_RANDOM = 3
DEF TERM_REST = 0
DEF TERM_CESSATION = 1
DEF TERM_HORIZON = 2
DEF TERM_EXODUS = 3
DEF EV_SELL = 1
DEF EV_BUY = 2
DEF SERIES_WINDOW = 1e-6
DEF NF = 12
DEF NB = 5


cdef inline double log_mean_ratio(double u) noexcept nogil:
    cdef double d = u - 1.0
    if fabs(d) < SERIES_WINDOW:
        return 1.0 + d / 2.0 - d * d / 12.0
    return d / log(u)


cdef inline double g_ss(double x, double A, double inv_depth) noexcept nogil:
    return (1.0 + inv_depth) * log_mean_ratio(x) - A


cdef inline double g_sb(double x, double A, double B, double inv_depth) noexcept nogil:
    return (1.0 - A) - inv_depth * B * log_mean_ratio(x / B)


cdef inline uint64_t splitmix_next(uint64_t* state) noexcept nogil:
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15ULL
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline void flags_at(double x, double g, double A, double B, double C,
                          double inv_depth, int roles, bint reward_aware,
                          bint* ss, bint* sb, bint* gb, bint* lp) noexcept nogil:
    ss[0] = (roles & ROLE_SS) != 0 and x > 1.0
    if ss[0] and reward_aware:
        ss[0] = g < g_ss(x, A, inv_depth)
    sb[0] = (roles & ROLE_SB) != 0 and x < B
    gb[0] = (roles & ROLE_GB) != 0 and x < C
    lp[0] = not (x < B and g < g_sb(x, A, B, inv_depth))


def run_kernel(double depth, double price0, double beta, double gamma,
               double delta, double theta, double fill_rate,
               double A, double B, double C, double inv_depth, double g,
               double dt, long long max_ticks, int roles, bint reward_aware,
               int policy, seed):
    if policy < 0 or policy > 3:
        raise ValueError(f"unknown arbitration policy {policy}")
    cdef double s = beta + fill_rate * theta
    cdef double sb_exit = fill_rate * theta - delta
    cdef double gb_exit = theta - delta
    cdef double n = depth
    cdef double y = price0 * depth
    cdef uint64_t state = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)

    cdef Py_ssize_t cap = 1024
    fl_arr = np.empty((cap, NF), dtype=np.float64)
    fg_arr = np.zeros((cap, NB), dtype=np.uint8)
    cdef double[:, ::1] fl = fl_arr
    cdef unsigned char[:, ::1] fg = fg_arr

    cdef bint ss, sb, gb, lp, seller, buyer, do_sell, do_buy
    cdef double price = y / n
    cdef double x = price / s
    cdef double cum_sell = 0.0, cum_sb = 0.0, cum_gb = 0.0, cum_lp = 0.0
    cdef double inc_sell, inc_sb, inc_gb, inc_lp, il
    cdef long long ticks = 0
    cdef int prev_dir = 0, direction, events, terminal
    cdef Py_ssize_t row = 0, k

    flags_at(x, g, A, B, C, inv_depth, roles, reward_aware, &ss, &sb, &gb, &lp)
    fl[0, 0] = 0.0
    fl[0, 1] = price
    fl[0, 2] = x
    for k in range(3, NF):
        fl[0, k] = 0.0
    fg[0, 0] = ss
    fg[0, 1] = sb
    fg[0, 2] = gb
    fg[0, 3] = lp
    fg[0, 4] = 0

    while True:
        if not lp:
            terminal = TERM_EXODUS
            break
        seller = ss
        buyer = sb or gb
        if not (seller or buyer):
            terminal = TERM_CESSATION if ticks > 0 else TERM_REST
            break
        if ticks >= max_ticks:
            terminal = TERM_HORIZON
            break
        do_sell = seller
        do_buy = buyer
        if seller and buyer:
            if policy == POLICY_SELLER:
                do_buy = False
            elif policy == POLICY_BUYER:
                do_sell = False
            elif policy == POLICY_RANDOM:
                if splitmix_next(&state) >> 63:
                    do_sell = False
                else:
                    do_buy = False

        inc_sell = 0.0
        inc_sb = 0.0
        inc_gb = 0.0
        events = 0
        if do_sell:
            inc_sell = (price - beta) * dt
            y = n / (n + dt) * y
            events |= EV_SELL
        if do_buy:
            price = y / n
            if sb:
                inc_sb = (sb_exit - price) * dt
            else:
                inc_gb = (gb_exit - price) * dt
            y = n / (n - dt) * y
            events |= EV_BUY
        inc_lp = gamma * depth * dt
        ticks += 1
        cum_sell += inc_sell
        cum_sb += inc_sb
        cum_gb += inc_gb
        cum_lp += inc_lp
        price = y / n
        x = price / s
        il = (price - price0) * depth
        flags_at(x, g, A, B, C, inv_depth, roles, reward_aware, &ss, &sb, &gb, &lp)

        row += 1
        if row >= cap:
            cap *= 2
            new_fl = np.empty((cap, NF), dtype=np.float64)
            new_fg = np.zeros((cap, NB), dtype=np.uint8)
            new_fl[:row] = fl_arr[:row]
            new_fg[:row] = fg_arr[:row]
            fl_arr = new_fl
            fg_arr = new_fg
            fl = fl_arr
            fg = fg_arr
        fl[row, 0] = ticks * dt
        fl[row, 1] = price
        fl[row, 2] = x
        fl[row, 3] = inc_sell
        fl[row, 4] = inc_sb
        fl[row, 5] = inc_gb
        fl[row, 6] = inc_lp
        fl[row, 7] = cum_sell
        fl[row, 8] = cum_sb
        fl[row, 9] = cum_gb
        fl[row, 10] = cum_lp
        fl[row, 11] = il
        fg[row, 0] = ss
        fg[row, 1] = sb
        fg[row, 2] = gb
        fg[row, 3] = lp
        fg[row, 4] = events

        direction = 0
        if events == EV_SELL:
            direction = -1
        elif events == EV_BUY:
            direction = 1
        if direction == 0 or direction == -prev_dir:
            terminal = TERM_REST
            break
        prev_dir = direction

    return fl_arr[:row + 1].copy(), fg_arr[:row + 1].copy(), terminal


def classify_grid(xs, gs, double A, double B, double C, double inv_depth):
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] gv = np.ascontiguousarray(gs, dtype=np.float64)
    cdef Py_ssize_t nx = xv.shape[0], ng = gv.shape[0], i, j
    out_arr = np.empty((nx, ng), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef double x, curve
    cdef unsigned char below, above
    for i in range(nx):
        x = xv[i]
        if not x > 0.0:
            raise ValueError(f"x must be positive, got {x}")
        if x < B:
            curve = g_sb(x, A, B, inv_depth)
            below = 1
            above = 2
        elif x < 1.0:
            for j in range(ng):
                out[i, j] = 0
            continue
        else:
            curve = g_ss(x, A, inv_depth)
            if x < C:
                below = 3
                above = 6
            else:
                below = 4
                above = 5
        for j in range(ng):
            out[i, j] = below if gv[j] < curve else above
    return out_arr

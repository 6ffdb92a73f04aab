"""Integer codes shared by the Python and compiled kernels."""

ROLE_SS = 1
ROLE_SB = 2
ROLE_GB = 4
ROLE_ALL = ROLE_SS | ROLE_SB | ROLE_GB

POLICY_ALTERNATE = 0
POLICY_SELLER = 1
POLICY_BUYER = 2
POLICY_RANDOM = 3

TERM_REST = 0
TERM_CESSATION = 1
TERM_HORIZON = 2
TERM_EXODUS = 3

EV_SELL = 1
EV_BUY = 2

ZONE_AA = 0
ZONE_AB = 1
ZONE_AC = 2
ZONE_AD = 3
ZONE_AE = 4
ZONE_AF = 5
ZONE_AG = 6

# time, price, x, 4 increments, 4 cumulative ledgers, impermanent loss
N_FLOAT_COLS = 12
# ss, sb, gb, lp_retention, event bits
N_FLAG_COLS = 5

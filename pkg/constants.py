CHANNELS = ('tr', 'td', 'sd', 'sr', 'te', 'se')

# Mean channel power gains 1/lambda in dB, evaluation profile of the analysis.
PROFILE_MEAN_POWER_DB = {'tr': 3.0, 'td': -6.0, 'sd': 3.0, 'sr': -3.0, 'te': 6.0, 'se': -3.0}
PROFILE_BETA = 0.5
PROFILE_R_TH = 0.5

MAX_TRANSMITTERS = 64

CSV_HEADER = ('axis', 'axis_value', 'scheme', 'method', 'sop', 'std_error', 'trials')
COMPARE_HEADER = ('scheme', 'method', 'analytic', 'mc', 'std_error', 'z', 'pass')
GAIN_HEADER = ('axis', 'axis_value', 'scheme', 'known_sop', 'blind_sop', 'gain', 'std_error')
SIGNIFICANT_DIGITS = 12
Z_THRESHOLD = 4.0

GAMMA_T_GRID_DB = tuple(float(v) for v in range(0, 62, 2))

# name -> (series field, series values, fixed overrides)
PRESETS = {
    'fig2': ('backhaul_prob', (0.5, 0.99), {'primary_outage_threshold': 0.1, 'n_transmitters': 6}),
    'fig3': ('n_transmitters', (2, 6), {'backhaul_prob': 0.99, 'primary_outage_threshold': 0.1}),
    'fig4': ('primary_outage_threshold', (0.01, 0.1), {'backhaul_prob': 0.99, 'n_transmitters': 6}),
}

EXIT_VALIDATION = 1
EXIT_NUMERIC = 2
EXIT_COMPARISON = 3

DEFAULT_SCHEMES = ('sts_known', 'ots_known')
DEFAULT_METHODS = ('analytic', 'mc')

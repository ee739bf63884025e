# library: epsilon_consensus Defaults
DEFAULT_CONFIG = {
    "problem": "lasso",
    "lambda": 0.1,
    "dimension": 1,
    "variant": "plain",
    "iters": 1000,
    # alpha_k = a / (k + b)^p, the schedule used in the LASSO example
    "alpha.family": "power",
    "alpha.a": 3.0,
    "alpha.b": 1.0,
    "alpha.p": 1.0,
    "eps.family": "power",
    "eps.a": 3.0,
    "eps.b": 1.0,
    "eps.p": 1.0,
    "norm.c": 0.1,
    "seed": 0,
    "output": "trace.csv",
    "logging.enabled": True,
    "logging.level": "INFO",
    "logging.progress_every": 0,
}

# Keys a config may carry without a default
OPTIONAL_KEYS = {"nodes", "p", "lower", "upper", "x0", "v0", "eps.const", "norm.rounds"}

# Repeated keys, collected into lists
REPEATED_KEYS = {"edge"}

# Absolute tolerances
ACTIVE_SET_TOL = 1e-9
DELTA_TOL = 1e-9
SUBGRADIENT_TOL = 1e-12
SADDLE_TOL = 1e-9

# Significant digits for stdout and for CSV cells
STDOUT_DIGITS = 6
CSV_DIGITS = 17

"""Parameter profiles: built-in defaults, profile files and overrides.

A profile file is either flat ``key = value`` text with ``#`` comments or a
JSON object. Values are coerced to the type of the built-in default.
Resolution order is defaults, then file, then command-line overrides.
"""

import json
import math
import warnings

# Measured and design values of the reference device. Units: GHz for
# frequencies, MHz for couplings/shifts/rates, us for lifetimes, ns for
# pulse times, um for lengths, pF/m and nH/m for line parameters.
REFERENCE_PROFILE = {
    # transmon design targets
    "r": 35.0,
    "nu01": 8.5,
    "nu_gap": 48.3,
    "f_design": 7.0,
    "delta0_design": 1.5,
    "chi_design": 4.93,
    # resonator geometry and coupling
    "centre_width": 20.0,
    "gap": 10.0,
    "c_r": 153.0,
    "l_r": 402.0,
    "beta": 53.3,
    "z0": 50.0,
    "length": 4220.0,
    "s21_coupler_db": -35.0,
    "v0_mode": "calibrated",
    # measured operating point
    "f_r": 7.5,
    "f0_s21": 7.52,
    "delta0": 0.990,
    "nu01_measured": 8.501,
    "g": 54.3,
    "chi": 3.9,
    "qi": 38600.0,
    "qc": 5500.0,
    "qc_design": 5000.0,
    "asymmetry": 0.0,
    "t1": 4.72,
    "t2_ramsey": 6.38,
    "t2_echo": 6.69,
    "parity_split": 0.554,
    "flux_offset": 0.0,
    # pulses and simulation
    "omega": 6.17,
    "qubit_freq": 8.512,
    "ramsey_detuning": 2.0,
    "tau_pi": 80.0,
    "tau_swap": 58.0,
    "ramp": 0.0,
    "n_max": 3,
    "qubit_levels": 2,
    "step": 0.25,
    "protocol_step": 0.01,
    "tolerance": 1e-6,
    "span": "8.502:8.520",
    "chevron_points": 19,
    "tmax": 1000.0,
    "time_points": 501,
    "t1_tmax": 25000.0,
    "t1_points": 1001,
    "ramsey_tmax": 20000.0,
    "ramsey_points": 2001,
    "echo_tmax": 25000.0,
    "echo_points": 501,
    "echo_pulses": "finite",
    "purcell_span": "7.7:8.6",
    "purcell_points": 91,
    "decay": 1500.0,
    "simulate_protocol": True,
    # improved-device scenario
    "qi_improved": 2e6,
    "qc_improved": 3500.0,
    "t1_improved": 70.0,
    "qc_convention": "cyclic",
    # numerics and synthetic data
    "n_cut": 30,
    "ng_points": 41,
    "flux_points": 401,
    "s21_points": 801,
    "s21_span_linewidths": 12.0,
    "noise_sigma": 0.0,
    "seed": 0,
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class ProfileError(ValueError):
    """Malformed profile text; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, source="<profile>", line=None, column=None):
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line
        self.column = column


class UnknownParameterError(KeyError):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__("unknown parameter(s): " + ", ".join(self.names))

    def __str__(self):
        return self.args[0]


def coerce(key, value, defaults=REFERENCE_PROFILE):
    """Convert ``value`` to the type of ``defaults[key]``."""
    if key not in defaults:
        raise UnknownParameterError([key])
    ref = defaults[key]
    if isinstance(ref, bool):
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in _TRUE:
            return True
        if text in _FALSE:
            return False
        raise ValueError(f"{key}: expected a boolean, got {value!r}")
    if isinstance(ref, int):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        if isinstance(value, str):
            return int(value.strip())
        if isinstance(value, int):
            return value
        raise ValueError(f"{key}: expected an integer, got {value!r}")
    if isinstance(ref, float):
        out = float(value)
        if math.isnan(out):
            raise ValueError(f"{key}: NaN is not a valid value")
        return out
    return str(value).strip()


def parse_text(text, source="<profile>"):
    """Parse profile text into a raw ``{key: value}`` dict (values uncoerced).

    Duplicate keys are resolved last-wins with a warning.
    """
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text, object_pairs_hook=_pairs_last_wins(source))
        except json.JSONDecodeError as exc:
            raise ProfileError(exc.msg, source, exc.lineno, exc.colno) from None
        if not isinstance(data, dict):
            raise ProfileError("JSON profile must be an object", source)
        return data
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ProfileError("expected 'key = value'", source, lineno, col)
        key, value = line.split("=", 1)
        name = key.strip()
        if not name or not name.replace("_", "").isalnum():
            col = len(key) - len(key.lstrip()) + 1
            raise ProfileError(f"invalid key {name!r}", source, lineno, col)
        if not value.strip():
            raise ProfileError(f"missing value for {name!r}", source, lineno, len(key) + 2)
        if name in out:
            warnings.warn(f"{source}:{lineno}: duplicate key {name!r}, last value wins", stacklevel=2)
        out[name] = value.strip()
    return out


def _pairs_last_wins(source):
    def hook(pairs):
        out = {}
        for k, v in pairs:
            if k in out:
                warnings.warn(f"{source}: duplicate key {k!r}, last value wins", stacklevel=2)
            out[k] = v
        return out

    return hook


def resolve(layers, defaults=REFERENCE_PROFILE):
    """Apply raw override dicts over ``defaults`` in order; reject unknown keys."""
    params = dict(defaults)
    for layer in layers:
        unknown = [k for k in layer if k not in defaults]
        if unknown:
            raise UnknownParameterError(unknown)
        for k, v in layer.items():
            params[k] = coerce(k, v, defaults)
    return params


def load_profile(path=None, overrides=None):
    """Full parameter set: defaults, then the file at ``path``, then ``overrides``."""
    layers = []
    if path is not None:
        with open(path) as fh:
            layers.append(parse_text(fh.read(), str(path)))
    if overrides:
        layers.append(overrides)
    return resolve(layers)


def parse_span(text):
    """``"a:b"`` -> (a, b) as floats."""
    try:
        lo, hi = (float(x) for x in str(text).split(":"))
    except ValueError:
        raise ValueError(f"expected a span 'lo:hi', got {text!r}") from None
    if not hi > lo:
        raise ValueError(f"span {text!r} must be increasing")
    return lo, hi


def header_lines(params):
    """``key = value`` lines for every resolved parameter, sorted by key."""
    return [f"{k} = {params[k]!r}" for k in sorted(params)]

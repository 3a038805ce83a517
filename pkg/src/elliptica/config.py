"""Run configuration: defaults, ``key = value`` config files, and value parsing."""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from .errors import InvalidParams

DEFAULT_CONFIG = "elliptica.cfg"
DEFAULT_TAU = 0.1234 + 0.0567j


def parse_complex(text):
    """Parse ``"a+bi"`` style input (``i`` or ``j`` for the imaginary unit)."""
    s = str(text).strip().replace(" ", "").replace("I", "i").replace("i", "j")
    s = re.sub(r"(^|[+-])j", r"\g<1>1j", s)
    try:
        return complex(s)
    except ValueError:
        raise InvalidParams(f"cannot parse complex number {text!r}") from None


def format_complex(z):
    z = complex(z)
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"


def parse_chars(text):
    """``"a,b"`` with each entry a decimal or a fraction such as ``3/2``."""
    parts = str(text).split(",")
    if len(parts) != 2:
        raise InvalidParams(f"characteristic must look like 'a,b', got {text!r}")
    try:
        return tuple(float(Fraction(p.strip())) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise InvalidParams(f"cannot parse characteristic {text!r}") from None


def format_chars(chars):
    return ",".join(str(Fraction(c).limit_denominator(10**6)) for c in chars)


@dataclass(frozen=True)
class RunConfig:
    eta: complex = 1j
    tau: complex = DEFAULT_TAU
    chars: tuple = None
    trunc_tol: float = 1e-14
    denom_guard: float = 1e-10
    rank_rel_tol: float = 1e-8
    seed: int = 0
    output: str = "human"
    calibrated: dict = field(default_factory=dict)

    def __post_init__(self):
        if not complex(self.eta).imag > 0:
            raise InvalidParams(f"Im(eta) must be positive, got {self.eta}")
        if min(self.trunc_tol, self.denom_guard, self.rank_rel_tol) <= 0:
            raise InvalidParams("tolerances must be positive")
        if self.output not in ("human", "json"):
            raise InvalidParams(f"output must be 'human' or 'json', got {self.output!r}")

    def chars_for(self, n):
        """Explicit chars, else a calibrated value for ``n``, else ``None`` (canonical)."""
        if self.chars is not None:
            return self.chars
        return self.calibrated.get(n)

    def with_overrides(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_KEYS = {
    "eta": parse_complex,
    "tau": parse_complex,
    "chars": parse_chars,
    "trunc_tol": float,
    "denom_guard": float,
    "rank_rel_tol": float,
    "seed": int,
    "output": str,
}


def read_config(path):
    """Load ``key = value`` lines; ``chars.<n> = a,b`` records a calibration for order ``n``."""
    values = {}
    calibrated = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParams(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key.startswith("chars."):
            calibrated[int(key[6:])] = parse_chars(val)
        elif key in _KEYS:
            values[key] = _KEYS[key](val)
        else:
            raise InvalidParams(f"{path}:{lineno}: unknown key {key!r}")
    return RunConfig(calibrated=calibrated, **values)


def save_calibration(path, n, chars):
    """Set ``chars.<n>`` in the config file, keeping every other line."""
    path = Path(path)
    lines = path.read_text().splitlines() if path.exists() else []
    key = f"chars.{n}"
    new = f"{key} = {format_chars(chars)}"
    for i, raw in enumerate(lines):
        if raw.split("=", 1)[0].strip() == key:
            lines[i] = new
            break
    else:
        lines.append(new)
    path.write_text("\n".join(lines) + "\n")

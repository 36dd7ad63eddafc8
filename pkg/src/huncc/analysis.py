"""Rate and security-level calculators, normalised metrics, parameter sweeps."""
from __future__ import annotations

import csv
import dataclasses
import io
import math

from .cryptosys import get_preset
from .errors import FormatError, ParameterError
from .iscode import ELIMINATION_CONSTANT, reconstruction_ops

B_MAX = 256
CSV_COLUMNS = ("c", "rate_formula", "rate_exact", "f_crypto", "f_IS", "pubkey_bits")


# ---------------------------------------------------------------------------
# rate
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class RateReport:
    l: int
    c: int
    k_b: int
    n_b: int
    formula_rate: float  # mean of per-path rates
    exact_rate: float  # message bits / transmitted bits
    per_path: tuple  # (path, message bits, transmitted bits)

    @property
    def total_bits(self):
        return sum(p[2] for p in self.per_path)

    @property
    def message_bits(self):
        return sum(p[1] for p in self.per_path)


def rate(l, c, k_b, n_b):
    if l < 1 or not 0 <= c <= l:
        raise ParameterError(f"need l >= 1 and 0 <= c <= l (got l={l}, c={c})")
    if not 1 <= k_b <= n_b:
        raise ParameterError(f"need 1 <= k_b <= n_b (got {k_b}, {n_b})")
    formula = (c * k_b / n_b + (l - c)) / l
    exact = l * k_b / (c * n_b + (l - c) * k_b)
    per_path = tuple((i, k_b, n_b if i <= c else k_b) for i in range(1, l + 1))
    return RateReport(l, c, k_b, n_b, formula, exact, per_path)


# ---------------------------------------------------------------------------
# security level
# ---------------------------------------------------------------------------


def formula_delta(l, constant=ELIMINATION_CONSTANT):
    return constant * l ** 3


def measured_delta(l, seed=0):
    """Operation count of one reconstruction run (see ``iscode.reconstruction_ops``)."""
    if l > 16:
        raise ParameterError("measured mode supports l <= 16")
    return reconstruction_ops(l, seed)


@dataclasses.dataclass(frozen=True)
class SecurityReport:
    b: float
    l: int
    delta: float
    approx_level: float  # b - delta / 2^b
    exact_level: float  # log2(2^b - delta)
    approx_deficit: float  # delta / 2^b
    exact_deficit: float  # b - log2(2^b - delta)
    status: str  # "ok" or "vacuous"
    f_is: float
    f_crypto: float

    @property
    def vacuous(self):
        return self.status == "vacuous"


def security_level(b, l, delta=None, delta_mode="formula", c=1, w=None, constant=ELIMINATION_CONSTANT, seed=0):
    """Degraded level after the partial-knowledge reconstruction attack.

    ``delta`` overrides the operation count; otherwise it comes from
    ``constant * l^3`` (``delta_mode="formula"``) or from running the
    reconstruction (``"measured"``).  A count of at least 2^b makes the bound
    vacuous; that is reported through ``status``, not raised.
    """
    if b < 1 or l < 1:
        raise ParameterError("need b >= 1 and l >= 1")
    if not 0 <= c <= l:
        raise ParameterError("need 0 <= c <= l")
    w = l - c if w is None else w
    if not 0 <= w <= l:
        raise ParameterError("need 0 <= w <= l")
    if delta is None:
        if delta_mode == "formula":
            delta = formula_delta(l, constant)
        elif delta_mode == "measured":
            delta = measured_delta(l, seed)
        else:
            raise ParameterError(f"unknown delta mode {delta_mode!r}")
    if delta < 0:
        raise ParameterError("delta must be non-negative")
    ratio = math.ldexp(float(delta), -int(b)) if float(b).is_integer() else float(delta) / 2.0 ** b
    f_is = (l - w) / l
    f_crypto = min(c, 1) * b / B_MAX
    if ratio >= 1.0:
        return SecurityReport(b, l, delta, b - ratio, float("-inf"), ratio, float("inf"), "vacuous", f_is, f_crypto)
    exact_deficit = -math.log1p(-ratio) / math.log(2)
    return SecurityReport(
        b, l, delta, b - ratio, b - exact_deficit, ratio, exact_deficit, "ok", f_is, f_crypto
    )


def paths_to_lose_one_bit(b, reading="cubic", constant=1.0):
    """Smallest path count l whose attack cost costs one bit of security.

    ``reading="cubic"`` uses delta = constant * l^3; ``"linear"`` uses
    delta = l.  The approximate deficit delta / 2^b reaches 1 when
    delta = 2^b.
    """
    if reading == "cubic":
        return (2.0 ** b / constant) ** (1.0 / 3.0)
    if reading == "linear":
        return 2.0 ** b
    raise ParameterError(f"unknown reading {reading!r}")


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class SweepRow:
    c: int
    rate_formula: float
    rate_exact: float
    f_crypto: float
    f_IS: float
    pubkey_bits: int


@dataclasses.dataclass(frozen=True)
class SweepTable:
    preset: str
    l: int
    w: int
    rows: tuple

    def to_csv(self):
        return emit_csv(self.rows)

    def rounded(self):
        """Same table with floats cut to the 6 significant digits of the CSV form."""
        return dataclasses.replace(self, rows=parse_csv(self.to_csv()))


def sweep(preset, l, w=None):
    """One row per c in 0..l.  ``w`` fixes the f_IS column (default l - 1)."""
    params = get_preset(preset) if isinstance(preset, str) else preset
    name = preset if isinstance(preset, str) else "custom"
    if l < 1:
        raise ParameterError("need l >= 1")
    w = l - 1 if w is None else w
    if not 0 <= w <= l:
        raise ParameterError("need 0 <= w <= l")
    k_b, n_b, b = params.k, params.n, params.b
    rows = []
    for c in range(l + 1):
        r = rate(l, c, k_b, n_b)
        rows.append(SweepRow(c, r.formula_rate, r.exact_rate, min(c, 1) * b / B_MAX, (l - w) / l, k_b * n_b))
    return SweepTable(name, l, w, tuple(rows))


def _fmt(v):
    return f"{v:.6g}" if isinstance(v, float) else str(v)


def emit_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, k)) for k in CSV_COLUMNS])
    return buf.getvalue()


def parse_csv(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != CSV_COLUMNS:
        raise FormatError(f"unexpected CSV header {header}")
    rows = []
    for rec in reader:
        if len(rec) != len(CSV_COLUMNS):
            raise FormatError(f"bad CSV row {rec}")
        rows.append(SweepRow(int(rec[0]), *(float(x) for x in rec[1:5]), int(rec[5])))
    return tuple(rows)


# ---------------------------------------------------------------------------
# worked bit-count examples
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class BitcountReport:
    ternary_bits: float  # 1443 * log2(3)
    mceliece_total_fractional: float  # 2960 + 1443 * log2(3)
    mceliece_total: int  # 2960 + 2288
    mceliece_rate: float
    rsa_total: int  # 3072 + 2288
    rsa_rate: float


def bitcount_example_check():
    """Two-path totals for a 2288-bit payload pair behind McEliece or RSA-3072."""
    k_b = 2288
    ternary = 1443 * math.log2(3)
    mc_total = 2960 + k_b
    rsa_total = 3072 + k_b
    return BitcountReport(
        ternary_bits=ternary,
        mceliece_total_fractional=2960 + ternary,
        mceliece_total=mc_total,
        mceliece_rate=2 * k_b / mc_total,
        rsa_total=rsa_total,
        rsa_rate=2 * k_b / rsa_total,
    )

"""Synchronous multipath network with eavesdroppers.

Links are noiseless and lossless.  An eavesdropper is ``weak`` (sees a proper
subset of links), ``strong`` (sees every link) or ``myopic`` (sees a subset
and flips chosen bit positions in the payloads it sees).
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
from fractions import Fraction

import numpy as np

from . import _bits
from ._rng import make_rng
from .errors import FormatError, HunccError, ParameterError
from .pipeline import PathPayload, encode_symbols, huncc_decode, huncc_encode

EVE_KINDS = ("none", "weak", "strong", "myopic")
EXACT_LIMIT = 1 << 20


@dataclasses.dataclass(frozen=True)
class EveSpec:
    kind: str = "none"
    links: tuple = ()  # 1-based observed links
    flips: tuple = ()  # ((link, (bit, bit, ...)), ...) for myopic

    def flips_for(self, link):
        for lk, bits in self.flips:
            if lk == link:
                return bits
        return ()


@dataclasses.dataclass(frozen=True)
class NetworkConfig:
    l: int
    eve: EveSpec = EveSpec()

    def __post_init__(self):
        eve = self.eve
        if self.l < 1:
            raise ParameterError("need at least one link")
        if eve.kind not in EVE_KINDS:
            raise ParameterError(f"unknown eavesdropper kind {eve.kind!r}")
        links = tuple(sorted(set(int(i) for i in eve.links)))
        if not all(1 <= i <= self.l for i in links):
            raise ParameterError(f"observed links must lie in 1..{self.l}")
        if eve.kind == "strong":
            links = tuple(range(1, self.l + 1))
        elif eve.kind == "weak" and len(links) >= self.l:
            raise ParameterError("a weak eavesdropper observes fewer than l links")
        elif eve.kind == "none":
            links = ()
        if eve.flips and eve.kind != "myopic":
            raise ParameterError("only a myopic eavesdropper injects errors")
        for lk, _ in eve.flips:
            if lk not in links:
                raise ParameterError(f"myopic flips on link {lk}, which it does not observe")
        object.__setattr__(self, "eve", dataclasses.replace(eve, links=links))


@dataclasses.dataclass
class Observation:
    kind: str
    payloads: dict  # link -> bytes
    sequence: int


@dataclasses.dataclass
class DeliveryReport:
    delivered: list  # PathPayload per link, as Bob receives it
    injected: list  # (link, bit positions)


def transmit(net, trans, sequence=0):
    """Deliver a Transmission; returns (DeliveryReport, Observation)."""
    if len(trans.payloads) != net.l:
        raise ParameterError(f"transmission has {len(trans.payloads)} payloads for {net.l} links")
    eve = net.eve
    observed = {}
    delivered = []
    injected = []
    for p in trans.payloads:
        data = p.data
        if p.index in eve.links:
            observed[p.index] = data
            flips = eve.flips_for(p.index)
            if flips:
                bits = _bits.bytes_to_bits(data).copy()
                for pos in flips:
                    if not 0 <= pos < p.bit_length:
                        raise ParameterError(f"flip position {pos} outside the {p.bit_length}-bit payload")
                    bits[pos] ^= 1
                data = _bits.bits_to_bytes(bits)
                injected.append((p.index, tuple(flips)))
        delivered.append(PathPayload(p.index, data, p.encrypted, p.bit_length))
    report = DeliveryReport(delivered, injected)
    return report, Observation(eve.kind, observed, sequence)


def received_transmission(trans, report):
    return dataclasses.replace(trans, payloads=list(report.delivered))


# ---------------------------------------------------------------------------
# secrecy experiment
# ---------------------------------------------------------------------------


@dataclasses.dataclass
class SecrecyResult:
    mode: str  # "exact" or "sampled"
    observed_links: tuple  # links whose contents Eve can read in the clear
    messages: int
    tv_exact: list  # Fraction per message index j (0-based list, reported 1-based)
    alphabet: int

    @property
    def max_tv(self):
        return [float(tv) for tv in self.tv_exact]

    @property
    def worst_tv(self):
        return max(self.max_tv) if self.tv_exact else 0.0

    @property
    def leakage(self):
        """TV normalised by its maximum 1 - 1/q (1.0 = message fully determined)."""
        top = 1 - Fraction(1, self.alphabet)
        return [float(tv / top) for tv in self.tv_exact]

    @property
    def secure(self):
        return self.worst_tv == 0.0

    def rows(self):
        return [
            {"j": j + 1, "max_tv": tv, "leakage": lk}
            for j, (tv, lk) in enumerate(zip(self.max_tv, self.leakage))
        ]

    def verdict(self):
        return "SECURE" if self.secure else "INSECURE"


def _readable_links(net, config):
    """Links whose payload Eve can interpret without a key."""
    out = []
    for link in net.eve.links:
        if link not in config.encrypted or config.cipher_for_path(link).transparent:
            out.append(link)
    return tuple(out)


def _observed_symbols(config, obs, blocks, links, columns):
    """Symbols Eve reads on ``links``: (len(links), columns) array."""
    u, k_b = config.u, config.k_b
    out = np.zeros((len(links), columns), dtype=np.int64)
    weights = 1 << np.arange(u - 1, -1, -1, dtype=np.int64)
    for i, link in enumerate(links):
        bits = _bits.bytes_to_bits(obs.payloads[link], blocks * k_b)
        if link in config.encrypted:
            bits = config.cipher_for_path(link).dec(bits.reshape(blocks, -1)).reshape(-1)
        out[i] = bits.reshape(columns, u).astype(np.int64) @ weights
    return out


def _max_tv(keys, msgs, q, nkeys):
    """Exact max TV (a Fraction) over observed values, via integer counts."""
    counts = np.bincount(keys * q + msgs, minlength=nkeys * q).reshape(nkeys, q)
    rows = counts.sum(axis=1)
    seen = np.flatnonzero(rows)
    marg = np.bincount(msgs, minlength=q)
    total = int(msgs.size)
    # |count/row - marg/total| scaled by row*total stays integral
    scaled = np.abs(counts[seen] * total - rows[seen, None] * marg[None, :]).sum(axis=1)
    best = Fraction(0)
    for s, r in zip(scaled.tolist(), rows[seen].tolist()):
        tv = Fraction(s, 2 * r * total)
        if tv > best:
            best = tv
    return best


def run_secrecy_experiment(net, config, trials=None, seed=0, sampled=False):
    """Max total-variation distance between each M_j's conditional law and its marginal.

    Exact mode pushes every one of the q^l message columns through the real
    encoder and reads Eve's view off the payloads.  Sampled mode draws
    ``trials`` uniform columns instead, so its TV values are estimates.
    """
    fld = config.code.field
    q, l, u = fld.order, config.l, config.u
    if u != config.k_b:
        raise ParameterError("secrecy experiments need cipher blocks of exactly one symbol (k_b = u)")
    links = _readable_links(net, config)
    if not sampled:
        total = q ** l
        if total > EXACT_LIMIT:
            raise ParameterError(f"{total} messages is too many for exact mode; use sampled mode")
        idx = np.arange(total, dtype=np.int64)
        msgs = np.stack([(idx // q ** i) % q for i in range(l)])
        mode = "exact"
    else:
        if not trials:
            raise ParameterError("sampled mode needs a positive trial count")
        msgs = fld.random(make_rng(seed, 0x5EC), (l, trials))
        mode = "sampled"
    columns = msgs.shape[1]
    trans = encode_symbols(config, msgs, seed)
    _, obs = transmit(net, trans)
    view = _observed_symbols(config, obs, trans.blocks, links, columns)
    if links:
        keys = (q ** np.arange(len(links), dtype=np.int64)) @ view
        nkeys = q ** len(links)
    else:
        keys = np.zeros(columns, dtype=np.int64)
        nkeys = 1
    tvs = [_max_tv(keys, msgs[j], q, nkeys) for j in range(l)]
    return SecrecyResult(mode, links, columns, tvs, q)


# ---------------------------------------------------------------------------
# decode experiment
# ---------------------------------------------------------------------------


@dataclasses.dataclass
class DecodeResult:
    trials: int
    successes: int
    detected: int
    silent: int
    injected_bits: int

    @property
    def success_rate(self):
        return self.successes / self.trials if self.trials else 0.0

    def as_row(self):
        return {
            "trials": self.trials,
            "successes": self.successes,
            "detected_failures": self.detected,
            "silent_corruptions": self.silent,
            "success_rate": self.success_rate,
            "injected_bits": self.injected_bits,
        }


def trial_seed(seed, trial):
    """Integer seed owned by one trial, independent of execution order."""
    return int(make_rng(seed, trial, 1).integers(0, 2**63 - 1))


def default_message_bytes(config):
    """Largest byte count that still fits in one block per path."""
    return max(1, (config.l * config.k_b - 1) // 8)


def run_decode_experiment(net, config, trials, seed=0, message_bytes=None):
    """encode -> transmit -> decode, ``trials`` times with per-trial seeds."""
    nbytes = default_message_bytes(config) if message_bytes is None else message_bytes
    ok = detected = silent = injected = 0
    for trial in range(trials):
        rng = make_rng(seed, trial)
        data = rng.bytes(nbytes)
        trans = huncc_encode(config, data, trial_seed(seed, trial))
        report, _ = transmit(net, trans, sequence=trial)
        injected += sum(len(bits) for _, bits in report.injected)
        try:
            out = huncc_decode(config, received_transmission(trans, report))
        except HunccError:
            detected += 1
            continue
        if out == data:
            ok += 1
        else:
            silent += 1
    return DecodeResult(trials, ok, detected, silent, injected)


# ---------------------------------------------------------------------------
# scenario files and CSV reports
# ---------------------------------------------------------------------------

SCENARIO_KEYS = {"l", "c", "u", "preset", "eve.kind", "eve.links", "eve.flips", "trials", "seed", "bytes", "key_seed", "code_seed"}


@dataclasses.dataclass
class Scenario:
    l: int
    c: int
    u: int
    preset: str
    eve: EveSpec
    trials: int
    seed: int
    nbytes: int | None = None
    key_seed: int = 0
    code_seed: int = 0


def _parse_links(text):
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.replace(" ", "").split(","))


def _parse_flips(text):
    out = []
    for part in filter(None, (s.strip() for s in text.split(";"))):
        if ":" not in part:
            raise FormatError(f"flip spec {part!r} must look like link:pos,pos")
        link, pos = part.split(":", 1)
        out.append((int(link), _parse_links(pos)))
    return tuple(out)


def parse_scenario(text):
    """Parse ``key = value`` lines (``#`` starts a comment)."""
    kv = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in SCENARIO_KEYS:
            raise FormatError(f"line {lineno}: unknown key {key!r}")
        kv[key] = value
    try:
        l = int(kv["l"])
        c = int(kv["c"])
    except KeyError as exc:
        raise FormatError(f"scenario is missing {exc.args[0]}") from None
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    eve = EveSpec(
        kind=kv.get("eve.kind", "none"),
        links=_parse_links(kv.get("eve.links", "")),
        flips=_parse_flips(kv.get("eve.flips", "")),
    )
    return Scenario(
        l=l,
        c=c,
        u=int(kv.get("u", l)),
        preset=kv.get("preset", "toy16"),
        eve=eve,
        trials=int(kv.get("trials", 100)),
        seed=int(kv.get("seed", 0)),
        nbytes=int(kv["bytes"]) if "bytes" in kv else None,
        key_seed=int(kv.get("key_seed", 0)),
        code_seed=int(kv.get("code_seed", 0)),
    )


DECODE_COLUMNS = ["trials", "successes", "detected_failures", "silent_corruptions", "success_rate", "injected_bits"]
SECRECY_COLUMNS = ["j", "max_tv", "leakage"]


def to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (f"{v:.6g}" if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def payload_digest(payloads):
    h = hashlib.sha256()
    for p in payloads:
        h.update(p.data)
    return h.hexdigest()


__all__ = [
    "EveSpec",
    "NetworkConfig",
    "Observation",
    "DeliveryReport",
    "transmit",
    "run_secrecy_experiment",
    "run_decode_experiment",
    "parse_scenario",
    "to_csv",
]

"""Recovery structures of binary codes with locality r and availability t.

A recovery structure assigns every symbol i a list of t pairwise disjoint
recovery sets of exactly r other symbol positions; for a codeword, the XOR
over any recovery set of i equals symbol i. Indexing is 0-based throughout.
Sets are stored sorted ascending and set lists sorted lexicographically so
serialization is canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json

import numpy as np

from . import rng


class InfeasibleParameters(ValueError):
    """Requested (n, r, t) cannot support disjoint recovery sets."""


@dataclass(frozen=True, eq=False)
class RecoveryStructure:
    """Per-symbol disjoint recovery sets, as a read-only (n, t, r) array."""

    n: int
    r: int
    t: int
    sets: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.sets, dtype=np.int32)
        if arr.shape != (self.n, self.t, self.r):
            raise ValueError(
                f"sets shape {arr.shape} does not match (n={self.n}, t={self.t}, r={self.r})"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "sets", arr)

    def sets_of(self, i: int) -> np.ndarray:
        return self.sets[i]

    def same_as(self, other: "RecoveryStructure") -> bool:
        return (
            (self.n, self.r, self.t) == (other.n, other.r, other.t)
            and np.array_equal(self.sets, other.sets)
        )


@dataclass(frozen=True)
class CodeSpec:
    """A constructed code instance: its kind label and recovery structure."""

    kind: str
    structure: RecoveryStructure
    dimension: int | None = None


def build_simplex_structure(m: int) -> RecoveryStructure:
    """Structure of the [2^m - 1, m] Simplex code.

    Coordinate i stands for the nonzero binary vector i+1; the recovery sets
    of coordinate i are exactly the pairs {a, b} with (a+1) XOR (b+1) = i+1,
    so r = 2 and t = 2^(m-1) - 1, and each symbol's sets partition the other
    n-1 coordinates.
    """
    if m < 2:
        raise InfeasibleParameters(f"simplex needs m >= 2 (m=1 has no disjoint pairs), got m={m}")
    n = (1 << m) - 1
    t = (1 << (m - 1)) - 1
    sets = np.empty((n, t, 2), dtype=np.int32)
    values = np.arange(1, n + 1, dtype=np.int32)
    for i in range(n):
        partners = values ^ np.int32(i + 1)
        mask = values < partners  # each pair once, keyed by its smaller vector
        sets[i, :, 0] = values[mask] - 1
        sets[i, :, 1] = partners[mask] - 1
    return RecoveryStructure(n=n, r=2, t=t, sets=sets)


def simplex_spec(m: int) -> CodeSpec:
    return CodeSpec(kind=f"simplex(m={m})", structure=build_simplex_structure(m), dimension=m)


def encode_simplex(m: int, message) -> np.ndarray:
    """Encode an m-bit message: coordinate i is <message, binary(i+1)> over GF(2).

    message[0] pairs with the most significant of the m bits.
    """
    msg = np.asarray(message, dtype=np.uint8)
    if msg.shape != (m,):
        raise ValueError(f"message must have length m={m}, got shape {msg.shape}")
    n = (1 << m) - 1
    val = 0
    for bit in msg:
        val = (val << 1) | int(bit & 1)
    coords = np.arange(1, n + 1, dtype=np.int64)
    return np.array([bin(v & val).count("1") & 1 for v in coords], dtype=np.uint8)


def build_synthetic_structure(n: int, r: int, t: int, seed: int) -> RecoveryStructure:
    """Random valid structure: per symbol, t disjoint uniform r-sets.

    Deterministic in (seed, n, r, t, i): symbol i's sets come from a partial
    Fisher-Yates draw of t*r distinct indices out of [0, n) minus i, keyed by
    the package's counter-based stream.
    """
    if r < 1 or t < 1 or n < 2:
        raise InfeasibleParameters(f"need n >= 2, r >= 1, t >= 1, got n={n} r={r} t={t}")
    if t * r > n - 1:
        raise InfeasibleParameters(
            f"t*r = {t * r} disjoint recovery positions exceed n-1 = {n - 1}"
        )
    base = rng.mix64(rng.mix64(seed) ^ rng.fnv1a64(f"synthetic|n={n}|r={r}|t={t}"))
    sets = np.empty((n, t, r), dtype=np.int32)
    for i in range(n):
        key = rng.derive(base, i)
        pool = list(range(n))
        pool.pop(i)
        m = len(pool)
        for step in range(t * r):
            j = step + int(rng.uniform(key, step) * (m - step))
            pool[step], pool[j] = pool[j], pool[step]
        chosen = pool[: t * r]
        rows = sorted(sorted(chosen[k * r:(k + 1) * r]) for k in range(t))
        sets[i] = np.array(rows, dtype=np.int32)
    return RecoveryStructure(n=n, r=r, t=t, sets=sets)


def synthetic_spec(n: int, r: int, t: int, seed: int) -> CodeSpec:
    return CodeSpec(
        kind=f"synthetic(n={n},r={r},t={t},seed={seed})",
        structure=build_synthetic_structure(n, r, t, seed),
    )


def validate_structure(rs: RecoveryStructure) -> list[str]:
    """All invariant violations, empty iff the structure is valid."""
    violations: list[str] = []
    if rs.t * rs.r > rs.n - 1:
        violations.append(f"infeasible parameters: t*r = {rs.t * rs.r} > n-1 = {rs.n - 1}")
    sets = rs.sets
    out_of_range = (sets < 0) | (sets >= rs.n)
    for i, j in zip(*np.nonzero(out_of_range.any(axis=2))):
        violations.append(f"symbol {i}: set {j} has index outside [0, {rs.n})")
    self_ref = (sets == np.arange(rs.n, dtype=np.int32)[:, None, None])
    for i, j in zip(*np.nonzero(self_ref.any(axis=2))):
        violations.append(f"symbol {i}: set {j} contains the symbol itself")
    for i in range(rs.n):
        flat = sets[i].ravel()
        if len(np.unique(flat)) == flat.size:
            continue
        seen: dict[int, tuple[int, int]] = {}
        reported = set()
        for j in range(rs.t):
            for k in range(rs.r):
                v = int(sets[i, j, k])
                if v in seen:
                    pj, _ = seen[v]
                    if pj == j:
                        if (i, j, "dup") not in reported:
                            violations.append(f"symbol {i}: set {j} has repeated index {v}")
                            reported.add((i, j, "dup"))
                    elif (i, pj, j) not in reported:
                        violations.append(
                            f"symbol {i}: sets {pj} and {j} overlap at index {v}"
                        )
                        reported.add((i, pj, j))
                else:
                    seen[v] = (j, k)
    return violations


# ---------------------------------------------------------------------------
# JSON structure format: {"n", "r", "t", "kind", "sets"} with sets[i][j][k]
# the k-th index of the j-th recovery set of symbol i (0-based).

def structure_to_dict(rs: RecoveryStructure, kind: str = "custom") -> dict:
    return {
        "n": rs.n,
        "r": rs.r,
        "t": rs.t,
        "kind": kind,
        "sets": rs.sets.tolist(),
    }


def spec_to_dict(spec: CodeSpec) -> dict:
    return structure_to_dict(spec.structure, kind=spec.kind)


def structure_from_dict(data: dict) -> tuple[RecoveryStructure | None, list[str], str]:
    """Parse the JSON object; shape problems are reported, not raised.

    Returns (structure or None, violations, kind). The structure is only
    built when every symbol has exactly t sets of exactly r integer entries;
    entry-level invariants are then checked by validate_structure.
    """
    problems: list[str] = []
    kind = str(data.get("kind", "unknown"))
    try:
        n, r, t = int(data["n"]), int(data["r"]), int(data["t"])
    except (KeyError, TypeError, ValueError):
        return None, ["missing or non-integer n/r/t fields"], kind
    raw = data.get("sets")
    if not isinstance(raw, list) or len(raw) != n:
        return None, [f"sets must list exactly n={n} symbols"], kind
    for i, symbol_sets in enumerate(raw):
        if not isinstance(symbol_sets, list) or len(symbol_sets) != t:
            problems.append(f"symbol {i}: expected exactly t={t} recovery sets")
            continue
        for j, s in enumerate(symbol_sets):
            if not isinstance(s, list) or len(s) != r:
                problems.append(f"symbol {i}: set {j} must have exactly r={r} entries")
            elif not all(isinstance(v, int) for v in s):
                problems.append(f"symbol {i}: set {j} has non-integer entries")
    if problems:
        return None, problems, kind
    rs = RecoveryStructure(n=n, r=r, t=t, sets=np.array(raw, dtype=np.int32))
    return rs, validate_structure(rs), kind


def save_structure(path, rs: RecoveryStructure, kind: str = "custom") -> None:
    with open(path, "w") as fh:
        json.dump(structure_to_dict(rs, kind), fh)
        fh.write("\n")


def load_structure(path) -> tuple[RecoveryStructure, str]:
    """Load a structure file, raising ValueError with violations if invalid."""
    with open(path) as fh:
        data = json.load(fh)
    rs, violations, kind = structure_from_dict(data)
    if rs is None or violations:
        raise ValueError("invalid structure: " + "; ".join(violations))
    return rs, kind

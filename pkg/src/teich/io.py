"""JSON and CSV formats used by the command line.

Numbers in CSV files are written with 9 significant digits so outputs are
byte-stable across runs.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from teich.group import format_word, parse, slope_pair
from teich.hyp2 import HPoint, MoebiusMap
from teich.rep import Representation

DIGITS = 9


def fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if x == 0:
        return "0"
    return f"{x:.{DIGITS}g}"


def rounded(x) -> float | None:
    """Float rounded to 9 significant digits, for JSON output."""
    if x is None:
        return None
    return float(fmt(x))


# -- representations --------------------------------------------------------

def rep_to_json(rho: Representation) -> dict:
    gens = rho.generators()
    return {
        "surface": {"genus": rho.genus, "punctures": rho.punctures},
        "generators": {n: m.to_list() for n, m in gens.items()},
        "peripherals": [format_word(w) for w in rho.peripherals],
    }


def rep_from_json(obj) -> Representation:
    try:
        surf = obj["surface"]
        genus, punctures = int(surf["genus"]), int(surf["punctures"])
        gens = obj["generators"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"representation JSON is missing field {exc}") from None
    if not isinstance(gens, dict) or not gens:
        raise ValueError("generators must be a nonempty object of name: [a, b, c, d]")
    lifts = {}
    for name, vals in gens.items():
        if not isinstance(vals, list) or len(vals) != 4:
            raise ValueError(f"generator {name!r} must be a list of 4 numbers")
        a, b, c, d = (float(v) for v in vals)
        if not all(math.isfinite(v) for v in (a, b, c, d)):
            raise ValueError(f"generator {name!r} has non-finite entries")
        lifts[name] = MoebiusMap(a, b, c, d)
    peris = obj.get("peripherals", [])
    if not isinstance(peris, list):
        raise ValueError("peripherals must be a list of word strings")
    return Representation.from_generators(lifts, peripherals=[str(p) for p in peris],
                                          genus=genus, punctures=punctures)


def load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON ({exc})") from None


def load_rep(path: str) -> Representation:
    return rep_from_json(load_json(path))


def point_to_json(p) -> list:
    return p.to_list() if isinstance(p, HPoint) else str(p)


def point_from_json(vals) -> HPoint:
    if not isinstance(vals, list) or len(vals) != 2:
        raise ValueError("points are [x, y] pairs")
    return HPoint(float(vals[0]), float(vals[1]))


# -- pinch configuration ------------------------------------------------------

@dataclass(frozen=True)
class PinchConfig:
    slope: tuple[int, int]
    weight_guess: float
    eps_grid: tuple[float, ...]
    max_len: int
    with_distortion: bool

    def to_json(self) -> dict:
        return {"slope": f"{self.slope[0]}/{self.slope[1]}", "weightGuess": self.weight_guess,
                "epsGrid": list(self.eps_grid), "maxLen": self.max_len,
                "withDistortion": self.with_distortion}


def parse_grid(text: str) -> tuple[float, ...]:
    """``a:b`` -> log-spaced decreasing grid with one point per decade."""
    try:
        a, b = (float(s) for s in text.split(":"))
    except ValueError:
        raise ValueError(f"grid must look like 1e-1:1e-6, got {text!r}") from None
    hi, lo = max(a, b), min(a, b)
    if not (0 < lo < hi < 1):
        raise ValueError("grid endpoints must satisfy 0 < eps < 1 and differ")
    n = max(2, int(round(math.log10(hi / lo))) + 1)
    la, lb = math.log10(hi), math.log10(lo)
    return tuple(float(fmt(10 ** (la + (lb - la) * k / (n - 1)))) for k in range(n))


def pinch_config_from_json(obj) -> PinchConfig:
    if not isinstance(obj, dict):
        raise ValueError("pinch config must be a JSON object")
    grid = obj.get("epsGrid", [10.0 ** -k for k in range(1, 7)])
    if isinstance(grid, str):
        grid = parse_grid(grid)
    grid = tuple(sorted((float(e) for e in grid), reverse=True))
    if not grid or not all(0 < e < 1 for e in grid):
        raise ValueError("epsGrid values must lie in (0, 1)")
    max_len = int(obj.get("maxLen", 4))
    if max_len < 1:
        raise ValueError("maxLen must be >= 1")
    weight = float(obj.get("weightGuess", 1.0))
    if not weight > 0:
        raise ValueError("weightGuess must be positive")
    return PinchConfig(slope_pair(obj.get("slope", "0/1")), weight, grid, max_len,
                       bool(obj.get("withDistortion", False)))


# -- CSV ------------------------------------------------------------------------

def csv_text(header, rows, preamble=()) -> str:
    buf = io.StringIO()
    for line in preamble:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([c if isinstance(c, str) else fmt(c) for c in row])
    return buf.getvalue()


def spectrum_csv(spec, value_name: str = "length") -> str:
    return csv_text(["class", value_name], zip(spec.labels, spec.values))


def projective_csv(point) -> str:
    return csv_text(["class", "projective"], zip(point.labels, point.values),
                    preamble=[f"normalization={fmt(point.scale)}"])


def trajectory_csv(traj) -> str:
    labels = [str(c) for c in traj.classes]
    header = ["epsilon", "lambda", *labels, "projDistance", "distortion"]
    rows = [[r.epsilon, r.lam, *r.rescaled, r.proj_distance, r.distortion] for r in traj.rows]
    return csv_text(header, rows)


def read_csv(path_or_text: str, is_text: bool = False) -> list[dict]:
    text = path_or_text if is_text else open(path_or_text, encoding="utf-8").read()
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def words_to_json(words) -> list[str]:
    return [format_word(w) for w in words]


def words_from_json(items) -> list:
    return [parse(str(s)) for s in items]

"""Fusion parameters and ablation presets."""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field, fields

ABLATIONS = ("full", "no_enhance", "no_enhance_source", "no_areaopen", "no_guided", "no_consistency")


@dataclass(frozen=True)
class Ablation:
    enhance: bool = True
    area_open: bool = True
    guided: bool = True
    consistency: bool = True
    # "fused": difference saliencies taken against the initial fused image;
    # "source": against the other source's saliency
    enhance_reference: str = "fused"


@dataclass(frozen=True)
class FusionParams:
    k: float = 0.5
    th: float = 0.02
    r: int = 5
    eps: float = 0.3
    q: float = 5e-5
    tw: int = 7
    connectivity: int = 8
    # "cross": A's saliency is boosted by the difference map that lights up where
    # B is defocused (S_f - S_b), and vice versa. "literal": A is boosted by
    # S_f - S_a, which rewards A's own defocused region and inverts the decision.
    pairing: str = "cross"
    ablation: Ablation = field(default_factory=Ablation)

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be > 0, got {self.eps}")
        if self.tw < 3 or self.tw % 2 == 0:
            raise ValueError(f"tw must be odd and >= 3, got {self.tw}")
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        if not 0 < self.th < 1:
            raise ValueError(f"th must lie in (0, 1), got {self.th}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if not self.q > 0:
            raise ValueError(f"q must be > 0, got {self.q}")
        if self.connectivity not in (4, 8):
            raise ValueError(f"connectivity must be 4 or 8, got {self.connectivity}")
        if self.pairing not in ("cross", "literal"):
            raise ValueError(f"pairing must be 'cross' or 'literal', got {self.pairing!r}")
        if self.ablation.enhance_reference not in ("fused", "source"):
            raise ValueError(f"unknown enhance_reference {self.ablation.enhance_reference!r}")

    def replace(self, **changes) -> "FusionParams":
        abl = {k: changes.pop(k) for k in list(changes) if k in _ABLATION_FIELDS}
        if abl:
            changes["ablation"] = dataclasses.replace(self.ablation, **abl)
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        """Short stable hash of every parameter, used to tag report rows."""
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


_ABLATION_FIELDS = {f.name for f in fields(Ablation)}
_FLOAT_KEYS = {"k", "th", "eps", "q"}


def ablation_config(name: str, base: FusionParams | None = None) -> FusionParams:
    base = base or FusionParams()
    if name == "full":
        return base.replace(enhance=True, area_open=True, guided=True, consistency=True,
                            enhance_reference="fused")
    if name == "no_enhance":
        return base.replace(enhance=False)
    if name == "no_enhance_source":
        return base.replace(enhance_reference="source")
    if name == "no_areaopen":
        return base.replace(area_open=False)
    if name == "no_guided":
        return base.replace(guided=False)
    if name == "no_consistency":
        return base.replace(consistency=False)
    raise ValueError(f"unknown ablation {name!r}; choose from {', '.join(ABLATIONS)}")


def _coerce(key: str, value: str):
    if key in ("r", "tw", "connectivity"):
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key in ("enhance_reference", "pairing"):
        return value
    if key in _ABLATION_FIELDS:
        low = value.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"{key}: expected a boolean, got {value!r}")
    raise KeyError(key)


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines (``#`` comments, optional ``[section]`` headers ignored)."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        value = value.strip("\"'")
        try:
            out[key] = _coerce(key, value)
        except KeyError:
            raise ValueError(f"config line {lineno}: unknown key {key!r}") from None
    return out


def load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())

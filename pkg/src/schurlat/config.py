"""INI-style run configuration with strict key checking and line-numbered errors."""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

from .asymptotics import ModelAsymptotics
from .lattice import LatticeSpec, WeightSpec
from .partitions import Partition, boundary_from_positions
from .schur import DEFAULT_COSET_CAP, VariableSpec

DEFAULT_VERTEX_CAP = 60


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class ModelConfig:
    x: tuple[Fraction, ...]
    a: tuple[int, ...]
    y: tuple[Fraction | None, ...]
    positions: tuple[int, ...] = ()
    blocks: tuple[tuple[Fraction, Fraction], ...] = ()
    lam: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return len(self.x)

    def weights(self) -> WeightSpec:
        return WeightSpec(self.x, self.a, self.y)

    def lattice_spec(self) -> LatticeSpec:
        if not self.positions:
            raise ConfigError("[model] positions is required for lattice commands")
        return LatticeSpec.periodic(boundary_from_positions(self.positions), self.weights())

    def variable_spec(self, N: int) -> VariableSpec:
        return VariableSpec(self.x, N)

    def partition(self) -> Partition:
        if not self.lam:
            raise ConfigError("[model] lambda is required for schur commands")
        return Partition(self.lam)

    def asymptotics(self) -> ModelAsymptotics:
        if not self.blocks:
            raise ConfigError("[model] blocks is required for limit-shape commands")
        squares = [v for b, v in zip(self.a, self.y) if b == 0]
        return ModelAsymptotics.from_blocks(self.blocks, self.n, self.x[0], squares)


@dataclass(frozen=True)
class RunParams:
    kappa: float = 0.5
    p: int = 4
    row: int | None = None
    points: int = 2000
    chi_points: int = 200
    kappa_points: int = 50
    nodes: int = 2048
    seed: int = 0
    trials: int = 200
    deform: tuple[Fraction, ...] = ()
    tol: float = 1e-9
    cap_vertices: int = DEFAULT_VERTEX_CAP
    cap_cosets: int = DEFAULT_COSET_CAP
    jobs: int = 1


@dataclass(frozen=True)
class OutputParams:
    dir: str = "."
    svg: bool = True


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig
    run: RunParams = field(default_factory=RunParams)
    output: OutputParams = field(default_factory=OutputParams)

    def with_overrides(self, **kw) -> "RunConfig":
        run_kw = {k: v for k, v in kw.items() if k in RunParams.__dataclass_fields__ and v is not None}
        out_kw = {k: v for k, v in kw.items() if k in OutputParams.__dataclass_fields__ and v is not None}
        cfg = replace(self, run=replace(self.run, **run_kw), output=replace(self.output, **out_kw))
        _validate_run(cfg.run, {})
        return cfg


def _fractions(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(t.strip()) for t in text.split(",") if t.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t.strip()) for t in text.split(",") if t.strip())


def _ys(text: str) -> tuple[Fraction | None, ...]:
    return tuple(None if t.strip() == "-" else Fraction(t.strip()) for t in text.split(","))


def _blocks(text: str) -> tuple[tuple[Fraction, Fraction], ...]:
    out = []
    for item in text.split(","):
        if not item.strip():
            continue
        lo, sep, hi = item.partition(":")
        if not sep:
            raise ValueError(f"block {item.strip()!r} must look like a:b")
        out.append((Fraction(lo.strip()), Fraction(hi.strip())))
    return tuple(out)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "yes", "true", "on"):
        return True
    if t in ("0", "no", "false", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_int(text: str) -> int | None:
    return None if text.strip() in ("", "-") else int(text)


MODEL_KEYS: dict[str, Callable] = {
    "n": int,
    "x": _fractions,
    "a": _ints,
    "y": _ys,
    "positions": _ints,
    "blocks": _blocks,
    "lambda": _ints,
}
RUN_KEYS: dict[str, Callable] = {
    "kappa": float,
    "p": int,
    "row": _opt_int,
    "points": int,
    "chi_points": int,
    "kappa_points": int,
    "nodes": int,
    "seed": int,
    "trials": int,
    "deform": _fractions,
    "tol": float,
    "cap_vertices": int,
    "cap_cosets": int,
    "jobs": int,
}
OUTPUT_KEYS: dict[str, Callable] = {"dir": str, "svg": _bool}
SECTIONS = {"model": MODEL_KEYS, "run": RUN_KEYS, "output": OUTPUT_KEYS}


def _key_lines(text: str) -> dict[tuple[str, str], int]:
    """Line number of every key, for error messages."""
    lines: dict[tuple[str, str], int] = {}
    section = ""
    for k, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s[0] in "#;":
            continue
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip().lower()
            lines.setdefault((section, ""), k)
            continue
        key = re.split(r"[=:]", s, maxsplit=1)[0].strip().lower()
        lines.setdefault((section, key), k)
    return lines


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(
        strict=True, interpolation=None, inline_comment_prefixes=("#",), delimiters=("=",)
    )
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("content before the first [section]", exc.lineno) from exc
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", exc.lineno) from exc
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno) from exc
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigError("malformed line", line) from exc
    lines = _key_lines(text)
    values: dict[str, dict[str, object]] = {}
    for section in parser.sections():
        sec = section.lower()
        if sec not in SECTIONS:
            raise ConfigError(f"unknown section [{section}]", lines.get((sec, "")))
        values[sec] = {}
        for key, raw in parser.items(section):
            line = lines.get((sec, key))
            if key not in SECTIONS[sec]:
                raise ConfigError(f"unknown key {key!r} in [{sec}]", line)
            try:
                values[sec][key] = SECTIONS[sec][key](raw)
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"bad value for {key!r}: {exc}", line) from exc
    if "model" not in values:
        raise ConfigError("missing [model] section")
    model = _build_model(values["model"], lines)
    run = RunParams(**values.get("run", {}))
    _validate_run(run, lines)
    out = values.get("output", {})
    return RunConfig(model, run, OutputParams(**out))


def _build_model(v: dict[str, object], lines: dict[tuple[str, str], int]) -> ModelConfig:
    def err(msg: str, key: str) -> ConfigError:
        return ConfigError(msg, lines.get(("model", key)))

    if "x" not in v:
        raise err("[model] needs x (one weight per class)", "")
    x = v["x"]
    n = v.get("n", len(x))
    if n != len(x):
        raise err(f"n={n} but x has {len(x)} entries", "n")
    a = v.get("a", (1,) * n)
    if len(a) != n:
        raise err(f"a must have {n} entries", "a")
    if any(b not in (0, 1) for b in a):
        raise err("a entries must be 0 (square row) or 1 (hexagon row)", "a")
    y = v.get("y", (None,) * n)
    if len(y) != n:
        raise err(f"y must have {n} entries ('-' for hexagon rows)", "y")
    if any(val <= 0 for val in x):
        raise err("x weights must be positive", "x")
    for b, val in zip(a, y):
        if val is not None and val <= 0:
            raise err("y weights must be positive", "y")
        if b == 0 and val is None:
            raise err("every square row (a=0) needs a y weight", "y" if "y" in v else "a")
    positions = v.get("positions", ())
    if positions:
        if list(positions) != sorted(set(positions)) or positions[0] != 1:
            raise err("positions must be strictly increasing and start at 1", "positions")
        if len(positions) % n:
            raise err(f"the number of positions must be a multiple of n={n}", "positions")
    blocks = v.get("blocks", ())
    if blocks:
        if blocks[0][0] != 0 or any(lo >= hi for lo, hi in blocks):
            raise err("blocks must start at 0 and each satisfy a < b", "blocks")
        if any(b1 >= a2 for (_, b1), (a2, _) in zip(blocks, blocks[1:])):
            raise err("blocks must be separated and increasing", "blocks")
        if sum(hi - lo for lo, hi in blocks) != 1:
            raise err("blocks must have total length 1", "blocks")
        if sum(1 for b in a if b == 0) > 1:
            raise err("limit-shape commands support at most one square row per period", "a")
    lam = v.get("lambda", ())
    if lam and (any(p < 0 for p in lam) or list(lam) != sorted(lam, reverse=True)):
        raise err("lambda must be a weakly decreasing tuple of nonnegative integers", "lambda")
    return ModelConfig(tuple(x), tuple(a), tuple(y), tuple(positions), tuple(blocks), tuple(lam))


def _validate_run(run: RunParams, lines: dict[tuple[str, str], int]) -> None:
    def check(ok: bool, msg: str, key: str) -> None:
        if not ok:
            raise ConfigError(msg, lines.get(("run", key)))

    check(0 < run.kappa < 1, "kappa must lie in (0, 1)", "kappa")
    check(0 <= run.p <= 12, "p must be between 0 and 12", "p")
    check(run.tol > 0, "tol must be positive", "tol")
    for key in ("points", "chi_points", "kappa_points", "nodes", "trials", "cap_vertices", "cap_cosets", "jobs"):
        check(getattr(run, key) > 0, f"{key} must be positive", key)

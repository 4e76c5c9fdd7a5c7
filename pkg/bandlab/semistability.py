"""
Push-out experiment for the loop :math:`\\alpha` on the ray :math:`r = x^\\infty`.

The loop :math:`\\alpha` with label :math:`a x^{-n} a x^n a x^{-n} a x^n` sits at
the vertex :math:`v = x^m`. Pushing it a distance ``k`` along the ray to a
loop :math:`\\beta` that avoids the ball :math:`A` of radius ``N`` means filling
:math:`\\alpha x^k \\beta^{-1} x^{-k}` in :math:`\\Gamma_{n-1}`. Every candidate
:math:`\\beta` up to a length bound is enumerated and the push-out word is
decided exactly by the word problem in :math:`G_1(n)`.

:func:`analyze_obstruction` reports the band structure of a diagram for a
push-out word: where the bands starting on :math:`\\alpha` end, how far they
stray from :math:`v`, where they cross, and the exponent sums they force.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import pandas as pd
from astropy.table import Table
from joblib import Parallel, delayed
from tqdm import tqdm

from .bands import Band, CrossingPath, all_bands, crossing_paths, self_crosses, trace_band
from .cayley import GENERATOR_MOVES, distance
from .group_core import (
    IDENTITY,
    LampElement,
    canonical,
    free_reduce,
    relator,
    step,
    word_inverse,
    x_exponent_sum,
)
from .presented_group import G1Element, dinfty_certificate, g1_from_word, g1_is_identity
from .van_kampen import Diagram, DiagramError, fill, validate, vertex_elements

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Parameters of one push-out experiment.

    Attributes
    ----------
    n : int
        Level; the relators are :math:`\\mathcal{R}_{n-1}` and :math:`\\alpha` has
        ``x``-excursions of length ``n``.
    m : int
        Base offset, :math:`v = x^m`.
    k : int
        Push distance along the ray.
    beta_len_max : int
        Longest candidate :math:`\\beta`.
    N : int
        Radius of the forbidden ball :math:`A` about the identity.
    area_bound : int
        Area bound used when materializing diagrams for fillable candidates.
    ball : bool
        Enforce the ball constraint on :math:`\\beta`. Without it the
        backtracking loop :math:`x^{-k} \\alpha x^k` joins the candidates as a
        positive control.
    materialize : bool
        Build a van Kampen diagram for every fillable candidate.
    """

    n: int = 2
    m: int = 15
    k: int = 6
    beta_len_max: int = 8
    N: int = 12
    area_bound: int = 24
    ball: bool = True
    materialize: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        for name in ("m", "k", "beta_len_max", "N", "area_bound"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if self.ball and self.m <= self.N:
            logger.warning(f"Base offset m={self.m} does not clear the ball radius N={self.N}")

    @property
    def basepoint(self) -> LampElement:
        """The vertex :math:`x^{m+k}` at which candidates are based."""
        return LampElement(frozenset(), self.m + self.k)


# ---------------- Verdicts ----------------
@dataclass(frozen=True)
class Fillable:
    """The push-out word lies in the normal closure; ``diagram`` is optional."""

    beta: str
    word: str
    diagram: Diagram | None = None

    fillable = True

    def to_dict(self) -> dict:
        certificate = {"free_reduction": free_reduce(self.word)}
        if self.diagram is not None:
            certificate["diagram"] = self.diagram.to_dict()
        return {"beta": self.beta, "word": self.word, "verdict": "fillable", "certificate": certificate}


@dataclass(frozen=True)
class NotFillable:
    """The push-out word is nontrivial in :math:`G_1(n)`."""

    beta: str
    word: str
    normal_form: G1Element
    dinfty: tuple[int, int, tuple[int, int]] | None = None

    fillable = False

    def to_dict(self) -> dict:
        certificate = {"normal_form": self.normal_form.to_dict()}
        if self.dinfty is not None:
            i, j, (translation, flip) = self.dinfty
            certificate["dinfty"] = {"i": i, "j": j, "translation": translation, "flip": flip}
        return {
            "beta": self.beta,
            "word": self.word,
            "verdict": "not_fillable",
            "certificate": certificate,
        }


# ---------------- Words ----------------
def alpha_loop(n: int) -> str:
    """
    Label of the loop :math:`\\alpha`: :math:`a x^{-n} a x^n a x^{-n} a x^n`.

    Examples
    --------
    >>> alpha_loop(2)
    'aXXaxxaXXaxx'
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return relator(n)


def pushout_word(alpha: str, k: int, beta: str) -> str:
    """
    :math:`\\alpha x^k \\beta^{-1} x^{-k}`.

    Examples
    --------
    >>> pushout_word("aa", 3, "")
    'aaxxxXXX'
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    return canonical(alpha + "x" * k + word_inverse(beta) + "X" * k)


def backtracking_beta(cfg: ExperimentConfig) -> str:
    """:math:`x^{-k} \\alpha x^k`: walk back to ``v``, run :math:`\\alpha`, return."""
    return "X" * cfg.k + alpha_loop(cfg.n) + "x" * cfg.k


def enumerate_beta(cfg: ExperimentConfig):
    """
    Loops at :math:`x^{m+k}` of length at most ``beta_len_max``.

    With the ball constraint, every visited vertex must lie at distance more
    than ``N`` from the identity. Words are produced depth first in the letter
    order ``a``, ``x``, ``X``, the empty word first.
    """
    base = cfg.basepoint
    inside: dict[LampElement, bool] = {}

    def forbidden(g: LampElement) -> bool:
        if not cfg.ball:
            return False
        if g not in inside:
            inside[g] = distance(IDENTITY, g, cfg.N) is not None
        return inside[g]

    if forbidden(base):
        logger.warning(f"Basepoint {base.to_text()} lies inside the ball of radius {cfg.N}")
        return

    stack = [("", base)]
    while stack:
        word, g = stack.pop()
        if g == base:
            yield word
        if len(word) == cfg.beta_len_max:
            continue
        for letter in reversed(GENERATOR_MOVES):
            h = step(g, letter)
            if not forbidden(h):
                stack.append((word + letter, h))


def check_pushout(cfg: ExperimentConfig, beta: str) -> Fillable | NotFillable:
    """
    Decide whether :math:`\\alpha x^k \\beta^{-1} x^{-k}` bounds a diagram over
    :math:`\\mathcal{R}_{n-1}`.

    The verdict comes from the word problem in :math:`G_1(n)`; the area bound
    only limits the optional diagram.
    """
    word = pushout_word(alpha_loop(cfg.n), cfg.k, beta)
    element = g1_from_word(word, cfg.n)
    if g1_is_identity(element):
        diagram = None
        if cfg.materialize and cfg.area_bound > 0:
            result = fill(word, cfg.n, cfg.area_bound)
            diagram = result if result.found else None
        return Fillable(beta, word, diagram)
    return NotFillable(beta, word, element, dinfty_certificate(word, cfg.n))


# ---------------- Reports ----------------
@dataclass
class Report:
    """Verdicts of one experiment."""

    config: ExperimentConfig
    verdicts: list = field(default_factory=list)
    control: Fillable | NotFillable | None = None
    elapsed: float = 0.0

    @property
    def candidates(self) -> int:
        return len(self.verdicts)

    @property
    def fillable(self) -> int:
        return sum(1 for v in self.verdicts if v.fillable)

    def summary(self) -> str:
        cfg = self.config
        return (
            f"n={cfg.n} m={cfg.m} k={cfg.k} betas={self.candidates} fillable={self.fillable}"
        )

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for v in self.verdicts:
            row = {
                "beta": v.beta,
                "length": len(v.beta),
                "fillable": v.fillable,
                "kernel_length": 0,
                "dinfty_i": None,
                "dinfty_j": None,
                "dinfty_translation": None,
                "area": None,
            }
            if isinstance(v, NotFillable):
                row["kernel_length"] = len(v.normal_form.kernel_part)
                if v.dinfty is not None:
                    row["dinfty_i"], row["dinfty_j"] = v.dinfty[0], v.dinfty[1]
                    row["dinfty_translation"] = v.dinfty[2][0]
            elif v.diagram is not None:
                row["area"] = len(v.diagram.faces)
            rows.append(row)
        columns = [
            "beta",
            "length",
            "fillable",
            "kernel_length",
            "dinfty_i",
            "dinfty_j",
            "dinfty_translation",
            "area",
        ]
        return pd.DataFrame(rows, columns=columns)

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "candidates": self.candidates,
            "fillable": self.fillable,
            "control": None if self.control is None else self.control.to_dict(),
            "elapsed_seconds": round(self.elapsed, 3),
            "verdicts": [v.to_dict() for v in self.verdicts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def write(self, outdir: str = "outdir", label: str | None = None) -> dict[str, str]:
        """
        Write the JSON report and the per-candidate table as ECSV.

        Returns
        -------
        dict[str, str]
            Paths to the JSON and ECSV files.
        """
        cfg = self.config
        out_path = Path(outdir).absolute()
        out_path.mkdir(parents=True, exist_ok=True)
        if label is None:
            label = f"pushout_n{cfg.n}_m{cfg.m}_k{cfg.k}_len{cfg.beta_len_max}_N{cfg.N}"
        json_file = out_path / f"{label}.json"
        ecsv_file = out_path / f"{label}.ecsv"

        json_file.write_text(self.to_json())
        nullable = ["dinfty_i", "dinfty_j", "dinfty_translation", "area"]
        frame = self.to_frame().astype({column: "Int64" for column in nullable})
        Table.from_pandas(frame).write(ecsv_file, format="ascii.ecsv", overwrite=True)
        logger.info(f"Saved outputs: {json_file}, {ecsv_file}")
        return {"json": str(json_file), "ecsv": str(ecsv_file)}


def run_experiment(
    cfg: ExperimentConfig,
    workers: int = 1,
    progress: bool = True,
) -> Report:
    """
    Check every candidate :math:`\\beta` and the backtracking control.

    Parameters
    ----------
    cfg : ExperimentConfig
    workers : int
        Size of the joblib worker pool; verdicts do not depend on it.
    progress : bool
        Show a progress bar.

    Returns
    -------
    Report
    """
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    start = time.perf_counter()
    betas = list(enumerate_beta(cfg))
    control_beta = backtracking_beta(cfg)
    if not cfg.ball and control_beta not in betas:
        betas.append(control_beta)
    logger.info(f"Checking {len(betas)} candidate loops with {workers} worker(s)")

    iterator = tqdm(betas, desc="Checking push-outs", disable=not progress)
    if workers == 1:
        verdicts = [check_pushout(cfg, beta) for beta in iterator]
    else:
        verdicts = Parallel(n_jobs=workers)(delayed(check_pushout)(cfg, beta) for beta in iterator)

    report = Report(
        config=cfg,
        verdicts=list(verdicts),
        control=check_pushout(cfg, control_beta),
        elapsed=time.perf_counter() - start,
    )
    logger.info(report.summary())
    return report


# ---------------- Band narration ----------------
@dataclass(frozen=True)
class BandTrace:
    """A band starting on one of the four ``a``-edges of :math:`\\alpha`."""

    label: str
    start_position: int
    band: Band
    end_position: int | None
    ends_on: str
    max_distance: int | None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "start_position": self.start_position,
            "end_position": self.end_position,
            "ends_on": self.ends_on,
            "max_distance": self.max_distance,
            **self.band.to_dict(),
        }


@dataclass(frozen=True)
class ObstructionTrace:
    """
    Band structure of a diagram for :math:`\\alpha x^k \\beta^{-1} x^{-k}`.

    ``boundary_sums`` pairs, for every band that starts and ends on
    :math:`\\alpha`, the ``x``-exponent sum of its side with the sum of the
    boundary arc of :math:`\\alpha` joining its ends. Both read the same element
    of :math:`L`, so the entries of a pair must agree.
    """

    n: int
    k: int
    beta: str
    bands: tuple[BandTrace, ...]
    crossings: dict[tuple[str, str], tuple[CrossingPath, ...]]
    self_crossing: tuple[str, ...]
    boundary_sums: dict[str, tuple[int, int]]

    @property
    def contradiction(self) -> bool:
        return any(side != arc for side, arc in self.boundary_sums.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "beta": self.beta,
            "bands": [b.to_dict() for b in self.bands],
            "crossings": [
                {"bands": list(pair), "paths": [asdict(p) for p in paths]}
                for pair, paths in self.crossings.items()
            ],
            "self_crossing": list(self.self_crossing),
            "boundary_sums": {label: list(pair) for label, pair in self.boundary_sums.items()},
            "contradiction": self.contradiction,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _parse_pushout(word: str, n: int, k: int | None) -> tuple[int, str]:
    alpha = alpha_loop(n)
    if not word.startswith(alpha):
        raise ValueError(f"Boundary {word!r} does not start with alpha_loop({n})")
    rest = word[len(alpha) :]
    if k is None:
        lead = len(rest) - len(rest.lstrip("x"))
        trail = len(rest) - len(rest.rstrip("X"))
        k = min(lead, trail)
    if not (rest.startswith("x" * k) and rest.endswith("X" * k)) or len(rest) < 2 * k:
        raise ValueError(f"Boundary {word!r} does not read alpha x^{k} beta^-1 x^-{k}")
    beta_inv = rest[k : len(rest) - k]
    return k, canonical(word_inverse(beta_inv))


def analyze_obstruction(d: Diagram, n: int, k: int | None = None) -> ObstructionTrace:
    """
    Trace the bands that start on the ``a``-edges of :math:`\\alpha`.

    Parameters
    ----------
    d : Diagram
        Valid diagram whose boundary reads :math:`\\alpha x^k \\beta^{-1} x^{-k}`
        with :math:`\\alpha` = ``alpha_loop(n)``.
    n : int
        Size of :math:`\\alpha`; may differ from the level of ``d``.
    k : int, optional
        Push distance; inferred from the boundary when omitted.

    Raises
    ------
    DiagramError
        If ``d`` is invalid.
    ValueError
        If the boundary does not have the push-out shape.
    """
    violations = validate(d)
    if violations:
        raise DiagramError(violations)
    word = d.outer_word()
    k, beta = _parse_pushout(word, n, k)
    alpha_len = 4 * n + 4
    outer = d.outer_face
    position = {dart >> 1: pos for pos, dart in enumerate(outer)}
    elements = vertex_elements(d)
    bound = len(outer)

    def region(pos: int | None) -> str:
        if pos is None:
            return "interior"
        if pos < alpha_len:
            return "alpha"
        if pos < alpha_len + k:
            return "push"
        if pos < len(outer) - k:
            return "beta"
        return "return"

    traces = []
    for label, pos in zip(("B1", "B2", "B3", "B4"), (0, n + 1, 2 * n + 2, 3 * n + 3)):
        edge = outer[pos] >> 1
        band = trace_band(d, edge)
        ends = [position.get(e) for e in (band.connecting_edges[0], band.connecting_edges[-1])]
        end = ends[1] if ends[0] == pos else ends[0]
        vertices = {d.tails[e] for e in band.connecting_edges} | {
            d.heads[e] for e in band.connecting_edges
        }
        for cell in band.cells:
            vertices.update(d.tail(x) for x in d.faces[cell])
        distances = [distance(IDENTITY, elements[v], bound) for v in vertices]
        traces.append(
            BandTrace(
                label=label,
                start_position=pos,
                band=band,
                end_position=end,
                ends_on=region(end) if band.kind != "annulus" else "interior",
                max_distance=None if None in distances else max(distances),
            )
        )

    crossings = {}
    for i, first in enumerate(traces):
        for second in traces[i + 1 :]:
            if first.band == second.band:
                continue
            paths = crossing_paths(d, first.band, second.band)
            if paths:
                crossings[(first.label, second.label)] = tuple(paths)

    boundary_sums = {}
    for trace in traces:
        if trace.ends_on != "alpha" or trace.end_position is None:
            continue
        lo, hi = sorted((trace.start_position, trace.end_position))
        arc = "".join(d.letter(x) for x in outer[lo + 1 : hi])
        side = trace.band.sides[0]
        boundary_sums[trace.label] = (x_exponent_sum(side), x_exponent_sum(arc))

    trace = ObstructionTrace(
        n=n,
        k=k,
        beta=beta,
        bands=tuple(traces),
        crossings=crossings,
        self_crossing=tuple(t.label for t in traces if self_crosses(t.band)),
        boundary_sums=boundary_sums,
    )
    logger.debug(
        f"Obstruction trace: {len(all_bands(d))} bands, {len(crossings)} crossing pairs, "
        f"contradiction={trace.contradiction}"
    )
    return trace

"""Domain types, dataset ingestion, and validation.

A study unit carries a K-vector of covariates, two treatment doses, an
optional outcome, and optional categorical keys used for exact matching.
All types are frozen after construction and safe to share across threads.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DuplicateId, MissingColumn, NonFiniteValue, ValidationError

__all__ = [
    "Unit",
    "Dataset",
    "SchemaConfig",
    "DoseLabel",
    "MatchedStratum",
    "Design",
    "load_dataset",
    "standardize_covariates",
    "design_to_json",
    "design_from_json",
]

# numeric outputs use 17 significant digits for round-trip fidelity
FLOAT_FMT = "%.17g"


def format_float(x: float) -> str:
    return FLOAT_FMT % x


class _SigFigEncoder(json.JSONEncoder):
    """JSON encoder that writes floats with 17 significant digits."""

    def iterencode(self, o, _one_shot=False):
        def floatstr(f):
            if not math.isfinite(f):
                raise ValueError(f"non-finite value in JSON output: {f!r}")
            return FLOAT_FMT % f

        indent = self.indent
        if isinstance(indent, int):
            indent = " " * indent
        make = json.encoder._make_iterencode(
            {} if self.check_circular else None, self.default,
            json.encoder.encode_basestring_ascii, indent, floatstr,
            self.key_separator, self.item_separator, self.sort_keys,
            self.skipkeys, False)
        return make(o, 0)


def dumps17(payload) -> str:
    """Serialize to JSON with stable field order and 17-digit floats."""
    return json.dumps(payload, indent=2, cls=_SigFigEncoder)


@dataclass(frozen=True)
class SchemaConfig:
    """Column mapping for CSV ingestion."""

    id_col: str
    z1_col: str
    z2_col: str
    covariate_cols: tuple[str, ...]
    exact_cols: tuple[str, ...] = ()
    outcome_col: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "covariate_cols", tuple(self.covariate_cols))
        object.__setattr__(self, "exact_cols", tuple(self.exact_cols))
        if not self.covariate_cols:
            raise ValidationError("schema needs at least one covariate column")


@dataclass(frozen=True)
class Unit:
    """One study unit: covariates, two doses, optional outcome."""

    id: str
    covariates: tuple[float, ...]
    z1: float
    z2: float
    y: float | None = None
    exact_keys: tuple[str, ...] = ()

    @property
    def doses(self) -> tuple[float, float]:
        return (self.z1, self.z2)


@dataclass(frozen=True)
class Dataset:
    """Ordered collection of units with shared covariate names."""

    units: tuple[Unit, ...]
    covariate_names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "covariate_names", tuple(self.covariate_names))
        k = len(self.covariate_names)
        seen = set()
        for u in self.units:
            if len(u.covariates) != k:
                raise ValidationError(
                    f"unit {u.id!r} has {len(u.covariates)} covariates, expected {k}")
            if u.id in seen:
                raise DuplicateId(f"duplicate unit id {u.id!r}")
            seen.add(u.id)

    @property
    def n(self) -> int:
        return len(self.units)

    @property
    def k(self) -> int:
        return len(self.covariate_names)

    def covariate_matrix(self) -> np.ndarray:
        return np.array([u.covariates for u in self.units], dtype=np.float64)

    def dose_vector(self, which: int) -> np.ndarray:
        if which == 1:
            return np.array([u.z1 for u in self.units], dtype=np.float64)
        if which == 2:
            return np.array([u.z2 for u in self.units], dtype=np.float64)
        raise ValueError("treatment index must be 1 or 2")

    def outcomes(self) -> np.ndarray:
        """Outcome vector; raises if any unit is missing y."""
        from .errors import MissingOutcome
        ys = []
        for u in self.units:
            if u.y is None:
                raise MissingOutcome(f"unit {u.id!r} has no outcome")
            ys.append(u.y)
        return np.array(ys, dtype=np.float64)

    def by_id(self) -> dict[str, Unit]:
        return {u.id: u for u in self.units}


class DoseLabel(enum.Enum):
    """Within-stratum dose pattern: (Z1 level, Z2 level)."""

    LL = "ll"
    LH = "lh"
    HL = "hl"
    HH = "hh"

    @property
    def z1_high(self) -> bool:
        return self in (DoseLabel.HL, DoseLabel.HH)

    @property
    def z2_high(self) -> bool:
        return self in (DoseLabel.LH, DoseLabel.HH)


LABEL_ORDER = (DoseLabel.LL, DoseLabel.LH, DoseLabel.HL, DoseLabel.HH)


@dataclass(frozen=True)
class MatchedStratum:
    """Four units labeled by their relative dose pattern."""

    stratum_index: int
    members: dict  # DoseLabel -> unit id
    dose_set: dict  # DoseLabel -> (z1, z2)

    def __post_init__(self):
        if set(self.members) != set(DoseLabel) or set(self.dose_set) != set(DoseLabel):
            raise ValidationError("a complete stratum carries all four dose labels")

    def ids(self) -> tuple[str, ...]:
        return tuple(self.members[lab] for lab in LABEL_ORDER)


@dataclass(frozen=True)
class IncompleteStratum:
    """Partial matched set (2-3 units), kept for reporting only."""

    ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        if not 2 <= len(self.ids) <= 3:
            raise ValidationError("incomplete strata have 2 or 3 units")


@dataclass(frozen=True)
class Design:
    """Output of the two-stage matching pipeline."""

    strata: tuple[MatchedStratum, ...]
    incomplete: tuple[IncompleteStratum, ...]
    trimmed_ids: tuple[str, ...]
    stage1_lead: int  # 1 or 2
    total_stage2_distance: float

    def __post_init__(self):
        object.__setattr__(self, "strata", tuple(self.strata))
        object.__setattr__(self, "incomplete", tuple(self.incomplete))
        object.__setattr__(self, "trimmed_ids", tuple(self.trimmed_ids))
        seen: set[str] = set()
        for s in self.strata:
            for uid in s.members.values():
                if uid in seen:
                    raise ValidationError(f"unit {uid!r} appears twice in the design")
                seen.add(uid)
        for inc in self.incomplete:
            for uid in inc.ids:
                if uid in seen:
                    raise ValidationError(f"unit {uid!r} appears twice in the design")
                seen.add(uid)
        for uid in self.trimmed_ids:
            if uid in seen:
                raise ValidationError(f"unit {uid!r} both matched and trimmed")
            seen.add(uid)
        for i, s in enumerate(self.strata):
            if s.stratum_index != i + 1:
                raise ValidationError("stratum indices must be contiguous from 1")

    @property
    def n_strata(self) -> int:
        return len(self.strata)


def _parse_float(raw: str, row: int, col: str) -> float:
    try:
        val = float(raw)
    except ValueError as exc:
        raise NonFiniteValue(f"row {row}, column {col!r}: not a number: {raw!r}") from exc
    if not math.isfinite(val):
        raise NonFiniteValue(f"row {row}, column {col!r}: non-finite value {raw!r}")
    return val


def load_dataset(path, schema: SchemaConfig) -> Dataset:
    """Load and validate a CSV with a header row; row order is preserved.

    Raises MissingColumn, NonFiniteValue (with row and column named), or
    DuplicateId.  The outcome column may be empty per row (missing y).
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        needed = [schema.id_col, schema.z1_col, schema.z2_col,
                  *schema.covariate_cols, *schema.exact_cols]
        if schema.outcome_col:
            needed.append(schema.outcome_col)
        for col in needed:
            if col not in header:
                raise MissingColumn(f"column {col!r} not in header {header}")
        units = []
        ids = set()
        for row_no, row in enumerate(reader, start=1):
            uid = row[schema.id_col]
            if uid in ids:
                raise DuplicateId(f"row {row_no}: duplicate id {uid!r}")
            ids.add(uid)
            z1 = _parse_float(row[schema.z1_col], row_no, schema.z1_col)
            z2 = _parse_float(row[schema.z2_col], row_no, schema.z2_col)
            covs = tuple(_parse_float(row[c], row_no, c) for c in schema.covariate_cols)
            y = None
            if schema.outcome_col:
                raw = row[schema.outcome_col]
                if raw is not None and raw.strip() != "":
                    y = _parse_float(raw, row_no, schema.outcome_col)
            exact = tuple(row[c] for c in schema.exact_cols)
            units.append(Unit(id=uid, covariates=covs, z1=z1, z2=z2, y=y,
                              exact_keys=exact))
    return Dataset(units=tuple(units), covariate_names=schema.covariate_cols)


def standardize_covariates(d: Dataset) -> tuple[Dataset, tuple[str, ...]]:
    """Rescale each covariate column to zero mean and unit sample sd (n-1).

    Constant columns are mapped to zero and reported in the returned
    warning tuple instead of raising.
    """
    if d.n < 2:
        raise ValidationError("standardization needs at least 2 units")
    x = d.covariate_matrix()
    mean = x.mean(axis=0)
    sd = x.std(axis=0, ddof=1)
    warnings = tuple(name for name, s in zip(d.covariate_names, sd) if s == 0.0)
    safe_sd = np.where(sd == 0.0, 1.0, sd)
    z = (x - mean) / safe_sd
    z[:, sd == 0.0] = 0.0
    units = tuple(replace(u, covariates=tuple(float(v) for v in z[i]))
                  for i, u in enumerate(d.units))
    return Dataset(units=units, covariate_names=d.covariate_names), warnings


# --- design serialization ---------------------------------------------------

def design_to_json(design: Design) -> str:
    """Stable-field-order JSON for a Design (17 significant digits)."""
    payload = {
        "stage1_lead": design.stage1_lead,
        "total_stage2_distance": design.total_stage2_distance,
        "n_strata": design.n_strata,
        "strata": [
            {
                "stratum_index": s.stratum_index,
                "members": [
                    {
                        "label": lab.value,
                        "id": s.members[lab],
                        "z1": s.dose_set[lab][0],
                        "z2": s.dose_set[lab][1],
                    }
                    for lab in LABEL_ORDER
                ],
            }
            for s in design.strata
        ],
        "incomplete": [list(inc.ids) for inc in design.incomplete],
        "trimmed_ids": list(design.trimmed_ids),
    }

    return dumps17(payload)


def design_from_json(text: str) -> Design:
    payload = json.loads(text)
    strata = []
    for s in payload["strata"]:
        members = {}
        dose_set = {}
        for rec in s["members"]:
            lab = DoseLabel(rec["label"])
            members[lab] = rec["id"]
            dose_set[lab] = (float(rec["z1"]), float(rec["z2"]))
        strata.append(MatchedStratum(stratum_index=int(s["stratum_index"]),
                                     members=members, dose_set=dose_set))
    incomplete = tuple(IncompleteStratum(ids=tuple(ids))
                       for ids in payload.get("incomplete", []))
    return Design(strata=tuple(strata),
                  incomplete=incomplete,
                  trimmed_ids=tuple(payload.get("trimmed_ids", [])),
                  stage1_lead=int(payload["stage1_lead"]),
                  total_stage2_distance=float(payload["total_stage2_distance"]))
